#pragma once

#include <string>
#include <vector>

#include "qqm/primitives.hpp"
#include "qqm/term.hpp"
#include "qqm/types.hpp"
#include "qqm/verdict.hpp"

namespace qqm {

struct CorpusEntry {
  std::string name;
  std::string family;  // arith | combinator | higher
  TypingContext ctx;
  Term term;  // elaborated
  SimpleType type;
  std::string source;
};

/// Named, typed terms. Every entry typechecks against the table it was built with.
class Corpus {
 public:
  Corpus(std::string id, std::vector<CorpusEntry> entries) : id_(std::move(id)), entries_(std::move(entries)) {}

  /// "default" (needs the default primitive names), "pure" (no primitives),
  /// or a JSON file {"id": ..., "entries": [{"name", "family", "context", "term"}]}.
  static Corpus select(const std::string& idOrPath, const PrimitiveTable& prims);
  static Corpus builtin(const PrimitiveTable& prims);
  static Corpus pure(const PrimitiveTable& prims);
  static Corpus fromJson(const Json& j, const PrimitiveTable& prims);

  const std::string& id() const { return id_; }
  const std::vector<CorpusEntry>& entries() const { return entries_; }
  const CorpusEntry& at(const std::string& name) const;
  const CorpusEntry* find(const std::string& name) const;
  /// Entries of type Real whose context holds only Real and Real -> Real.
  std::vector<const CorpusEntry*> groundEntries() const;
  Json toJson() const;

 private:
  std::string id_;
  std::vector<CorpusEntry> entries_;
};

/// Parses "x: Real, f: Real -> Real" (empty string for the empty context).
TypingContext parseContext(const std::string& s);

}  // namespace qqm
