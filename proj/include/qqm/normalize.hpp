#pragma once

#include <cstddef>
#include <optional>

#include "qqm/term.hpp"

namespace qqm {

/// Normal form under beta, projection, eta and surjective pairing
/// contractions. Returns nullopt if `maxSteps` contractions are exceeded
/// (only possible for ill-typed input).
std::optional<Term> normalize(const Term& t, std::size_t maxSteps = 100000);

/// Equality up to renaming of bound variables.
bool alphaEqual(const Term& a, const Term& b);

/// Both sides normalize and the normal forms are alpha-equal.
bool betaEtaEqual(const Term& a, const Term& b);

}  // namespace qqm
