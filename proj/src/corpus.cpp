#include "qqm/corpus.hpp"

#include <fstream>
#include <stdexcept>

#include "qqm/parser.hpp"
#include "qqm/typecheck.hpp"

namespace qqm {

namespace {

struct Raw {
  const char* name;
  const char* family;
  const char* ctx;
  const char* term;
};

// clang-format off
const std::vector<Raw> kDefault = {
  {"id",          "arith",      "x: Real",                      "x"},
  {"const",       "arith",      "x: Real",                      "2.5"},
  {"neg",         "arith",      "x: Real",                      "neg(x)"},
  {"sin",         "arith",      "x: Real",                      "sin(x)"},
  {"cos-sin",     "arith",      "x: Real",                      "cos(sin(x))"},
  {"sum",         "arith",      "x: Real, y: Real",             "add2(x, y)"},
  {"product",     "arith",      "x: Real, y: Real",             "mul(x, y)"},
  {"square",      "arith",      "x: Real",                      "mul(x, x)"},
  {"poly",        "arith",      "x: Real",                      "add2(mul(x, x), mul(2.0, x))"},
  {"abs-gap",     "arith",      "x: Real, y: Real",             "abs(add2(x, neg(y)))"},
  {"shift",       "arith",      "x: Real",                      "add(x)"},
  {"quotient",    "arith",      "x: Real",                      "diff(sin(x), cos(x))"},
  {"const-prim",  "arith",      "x: Real",                      "const[3.0](x)"},
  {"apply",       "combinator", "f: Real -> Real, x: Real",     "f x"},
  {"twice",       "combinator", "f: Real -> Real, x: Real",     "f (f x)"},
  {"compose-lit", "combinator", "f: Real -> Real",              "(\\y:Real. f (sin(y))) 0.5"},
  {"beta",        "combinator", "x: Real",                      "(\\y:Real. mul(y, y)) x"},
  {"let",         "combinator", "x: Real",                      "let z be sin(x) in add2(z, z)"},
  {"fst-pair",    "combinator", "x: Real, y: Real",             "fst(<add2(x, y), mul(x, y)>)"},
  {"snd-pair",    "combinator", "x: Real",                      "snd(<x, sin(x)>)"},
  {"k",           "combinator", "x: Real, y: Real",             "(\\a:Real. \\b:Real. a) x y"},
  {"mirror",      "combinator", "f: Real -> Real, x: Real",     "add2(f x, f (neg(x)))"},
  {"ex412",       "combinator", "f: Real -> Real, x: Real",     "let y be add(x) in diff(f y, f x)"},
  {"j",           "higher",     "",                             "\\F:(Real -> Real) -> Real. F (\\x:Real. 1.0)"},
  {"eval-at-1",   "higher",     "",                             "\\h:Real -> Real. h 1.0"},
};

const std::vector<Raw> kPure = {
  {"id",        "combinator", "x: Real",                  "x"},
  {"const",     "combinator", "x: Real",                  "1.0"},
  {"apply",     "combinator", "f: Real -> Real, x: Real", "f x"},
  {"twice",     "combinator", "f: Real -> Real, x: Real", "f (f x)"},
  {"k",         "combinator", "x: Real, y: Real",         "(\\a:Real. \\b:Real. a) x y"},
  {"swap-fst",  "combinator", "x: Real, y: Real",         "fst(<y, x>)"},
  {"j",         "higher",     "",                         "\\F:(Real -> Real) -> Real. F (\\x:Real. 1.0)"},
  {"eval-at-1", "higher",     "",                         "\\h:Real -> Real. h 1.0"},
};
// clang-format on

CorpusEntry build(const std::string& name, const std::string& family, const TypingContext& ctx,
                  const std::string& source, const PrimitiveTable& prims) {
  Term t = elaborate(ctx, parseTerm(source), prims);
  SimpleType type = typecheck(ctx, t, prims);
  return CorpusEntry{name, family, ctx, t, type, source};
}

Corpus fromRaw(const std::string& id, const std::vector<Raw>& raw, const PrimitiveTable& prims) {
  std::vector<CorpusEntry> out;
  for (const auto& r : raw) out.push_back(build(r.name, r.family, parseContext(r.ctx), r.term, prims));
  return Corpus(id, std::move(out));
}

}  // namespace

TypingContext parseContext(const std::string& s) {
  std::vector<TypingContext::Entry> entries;
  std::size_t i = 0;
  while (i < s.size()) {
    auto colon = s.find(':', i);
    if (colon == std::string::npos) {
      if (s.find_first_not_of(" \t", i) == std::string::npos) break;
      throw std::invalid_argument("bad context entry: " + s.substr(i));
    }
    // The type runs to the next comma at parenthesis depth 0.
    std::size_t j = colon + 1;
    int depth = 0;
    while (j < s.size() && !(s[j] == ',' && depth == 0)) {
      if (s[j] == '(') ++depth;
      if (s[j] == ')') --depth;
      ++j;
    }
    std::string name = s.substr(i, colon - i);
    name.erase(0, name.find_first_not_of(" \t"));
    name.erase(name.find_last_not_of(" \t") + 1);
    if (name.empty()) throw std::invalid_argument("empty variable name in context: " + s);
    entries.push_back({name, parseType(s.substr(colon + 1, j - colon - 1))});
    i = j + 1;
  }
  return TypingContext(std::move(entries));
}

Corpus Corpus::builtin(const PrimitiveTable& prims) { return fromRaw("default", kDefault, prims); }
Corpus Corpus::pure(const PrimitiveTable& prims) { return fromRaw("pure", kPure, prims); }

Corpus Corpus::fromJson(const Json& j, const PrimitiveTable& prims) {
  std::vector<CorpusEntry> out;
  for (const auto& e : j.at("entries")) {
    TypingContext ctx = e.contains("context") ? parseContext(e.at("context").get<std::string>()) : TypingContext{};
    out.push_back(build(e.at("name"), e.value("family", "file"), ctx, e.at("term"), prims));
  }
  return Corpus(j.value("id", "file"), std::move(out));
}

Corpus Corpus::select(const std::string& idOrPath, const PrimitiveTable& prims) {
  if (idOrPath == "default") return builtin(prims);
  if (idOrPath == "pure") return pure(prims);
  std::ifstream in(idOrPath);
  if (!in) throw std::invalid_argument("unknown corpus: " + idOrPath);
  return fromJson(Json::parse(in), prims);
}

const CorpusEntry* Corpus::find(const std::string& name) const {
  for (const auto& e : entries_)
    if (e.name == name) return &e;
  return nullptr;
}

const CorpusEntry& Corpus::at(const std::string& name) const {
  if (const auto* e = find(name)) return *e;
  throw std::invalid_argument("no corpus entry named " + name + " in corpus " + id_);
}

std::vector<const CorpusEntry*> Corpus::groundEntries() const {
  const SimpleType real = SimpleType::real();
  const SimpleType rr = SimpleType::arrow(real, real);
  std::vector<const CorpusEntry*> out;
  for (const auto& e : entries_) {
    if (e.type != real) continue;
    bool ok = true;
    for (const auto& c : e.ctx.entries()) ok = ok && (c.type == real || c.type == rr);
    if (ok) out.push_back(&e);
  }
  return out;
}

Json Corpus::toJson() const {
  Json entries = Json::array();
  for (const auto& e : entries_)
    entries.push_back({{"name", e.name}, {"family", e.family}, {"context", e.ctx.str()}, {"term", e.term.str()},
                       {"type", e.type.str()}});
  return {{"id", id_}, {"entries", entries}};
}

}  // namespace qqm
