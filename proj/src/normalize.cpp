#include "qqm/normalize.hpp"

#include <map>
#include <string>
#include <vector>

namespace qqm {

namespace {

// One contraction somewhere in t (leftmost-outermost), or nullopt.
std::optional<Term> step(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::App:
      if (t.fn().kind() == Term::Kind::Lam) return substitute(t.fn().body(), t.fn().binder(), t.arg());
      break;
    case Term::Kind::Fst:
    case Term::Kind::Snd:
      if (t.operand().kind() == Term::Kind::Pair)
        return t.kind() == Term::Kind::Fst ? t.operand().left() : t.operand().right();
      break;
    case Term::Kind::Lam: {
      const Term& b = t.body();
      if (b.kind() == Term::Kind::App && b.arg().kind() == Term::Kind::Var && b.arg().name() == t.binder() &&
          !freeVars(b.fn()).count(t.binder()))
        return b.fn();
      break;
    }
    case Term::Kind::Pair: {
      const Term& l = t.left();
      const Term& r = t.right();
      if (l.kind() == Term::Kind::Fst && r.kind() == Term::Kind::Snd && alphaEqual(l.operand(), r.operand()))
        return l.operand();
      break;
    }
    default:
      break;
  }
  const auto& kids = t.children();
  for (std::size_t i = 0; i < kids.size(); ++i) {
    if (auto k = step(kids[i])) {
      std::vector<Term> next = kids;
      next[i] = *k;
      switch (t.kind()) {
        case Term::Kind::PrimApp:
          return Term::primApp(t.prim(), next, t.span());
        case Term::Kind::App:
          return Term::app(next[0], next[1], t.span());
        case Term::Kind::Lam:
          return Term::lam(t.binder(), t.annot(), next[0], t.span());
        case Term::Kind::Pair:
          return Term::pair(next[0], next[1], t.span());
        case Term::Kind::Fst:
          return Term::fst(next[0], t.span());
        case Term::Kind::Snd:
          return Term::snd(next[0], t.span());
        default:
          break;
      }
    }
  }
  return std::nullopt;
}

bool alphaEq(const Term& a, const Term& b, std::map<std::string, std::size_t>& la,
             std::map<std::string, std::size_t>& lb, std::size_t depth) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Term::Kind::Var: {
      auto ia = la.find(a.name()), ib = lb.find(b.name());
      bool boundA = ia != la.end(), boundB = ib != lb.end();
      if (boundA != boundB) return false;
      return boundA ? ia->second == ib->second : a.name() == b.name();
    }
    case Term::Kind::Const:
      return a.value() == b.value();
    case Term::Kind::Lam: {
      if (a.annot().has_value() != b.annot().has_value()) return false;
      if (a.annot() && *a.annot() != *b.annot()) return false;
      auto saveA = la.find(a.binder()) != la.end() ? std::optional<std::size_t>(la[a.binder()]) : std::nullopt;
      auto saveB = lb.find(b.binder()) != lb.end() ? std::optional<std::size_t>(lb[b.binder()]) : std::nullopt;
      la[a.binder()] = depth;
      lb[b.binder()] = depth;
      bool ok = alphaEq(a.body(), b.body(), la, lb, depth + 1);
      if (saveA) la[a.binder()] = *saveA; else la.erase(a.binder());
      if (saveB) lb[b.binder()] = *saveB; else lb.erase(b.binder());
      return ok;
    }
    case Term::Kind::PrimApp:
      if (!(a.prim() == b.prim())) return false;
      [[fallthrough]];
    default: {
      if (a.children().size() != b.children().size()) return false;
      for (std::size_t i = 0; i < a.children().size(); ++i)
        if (!alphaEq(a.children()[i], b.children()[i], la, lb, depth)) return false;
      return true;
    }
  }
}

}  // namespace

std::optional<Term> normalize(const Term& t, std::size_t maxSteps) {
  Term cur = t;
  for (std::size_t i = 0; i < maxSteps; ++i) {
    auto next = step(cur);
    if (!next) return cur;
    cur = *next;
  }
  return std::nullopt;
}

bool alphaEqual(const Term& a, const Term& b) {
  std::map<std::string, std::size_t> la, lb;
  return alphaEq(a, b, la, lb, 0);
}

bool betaEtaEqual(const Term& a, const Term& b) {
  auto na = normalize(a), nb = normalize(b);
  return na && nb && alphaEqual(*na, *nb);
}

}  // namespace qqm
