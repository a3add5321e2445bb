#pragma once

#include <stdexcept>
#include <string>

#include "qqm/primitives.hpp"
#include "qqm/term.hpp"
#include "qqm/types.hpp"

namespace qqm {

struct TypeError : std::runtime_error {
  TypeError(const std::string& msg, Span where)
      : std::runtime_error(where.line ? msg + " at " + where.str() : msg), span(where) {}
  Span span;
};

/// The unique type of `t` in `ctx`, or TypeError. Unannotated lambdas are
/// accepted only in `let` position, where the argument fixes the binder type.
SimpleType typecheck(const TypingContext& ctx, const Term& t, const PrimitiveTable& prims);

/// Same term with every let-binder annotated with its inferred type.
Term elaborate(const TypingContext& ctx, const Term& t, const PrimitiveTable& prims);

}  // namespace qqm
