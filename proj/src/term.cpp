#include "qqm/term.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

#include "qqm/value.hpp"

namespace qqm {

std::string Span::str() const {
  if (line == 0) return "?";
  return std::to_string(line) + ":" + std::to_string(column);
}

std::string formatLiteral(double x) {
  if (std::isinf(x) || std::isnan(x)) return formatReal(x);
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  std::string s(buf, res.ptr);
  if (s.find_first_of(".eE") == std::string::npos) s += ".0";
  return s;
}

std::string PrimRef::str() const { return param ? name + "[" + formatLiteral(*param) + "]" : name; }

Term Term::make(Node n) { return Term(std::make_shared<const Node>(std::move(n))); }

Term Term::var(std::string name, Span span) {
  Node n{Kind::Var, span, std::move(name), 0.0, {}, std::nullopt, {}};
  return make(std::move(n));
}

Term Term::constant(double value, Span span) { return make(Node{Kind::Const, span, {}, value, {}, std::nullopt, {}}); }

Term Term::primApp(PrimRef prim, std::vector<Term> args, Span span) {
  return make(Node{Kind::PrimApp, span, {}, 0.0, std::move(prim), std::nullopt, std::move(args)});
}

Term Term::app(Term fn, Term arg, Span span) {
  return make(Node{Kind::App, span, {}, 0.0, {}, std::nullopt, {std::move(fn), std::move(arg)}});
}

Term Term::lam(std::string binder, std::optional<SimpleType> annot, Term body, Span span) {
  return make(Node{Kind::Lam, span, std::move(binder), 0.0, {}, std::move(annot), {std::move(body)}});
}

Term Term::pair(Term l, Term r, Span span) {
  return make(Node{Kind::Pair, span, {}, 0.0, {}, std::nullopt, {std::move(l), std::move(r)}});
}

Term Term::fst(Term t, Span span) { return make(Node{Kind::Fst, span, {}, 0.0, {}, std::nullopt, {std::move(t)}}); }
Term Term::snd(Term t, Span span) { return make(Node{Kind::Snd, span, {}, 0.0, {}, std::nullopt, {std::move(t)}}); }

Term Term::let(std::string binder, std::optional<SimpleType> annot, Term bound, Term body, Span span) {
  return app(lam(std::move(binder), std::move(annot), std::move(body), span), std::move(bound), span);
}

namespace {
[[noreturn]] void wrongKind(const char* what) { throw std::logic_error(std::string("term accessor misuse: ") + what); }
}  // namespace

const std::string& Term::name() const {
  if (kind() != Kind::Var) wrongKind("name");
  return node_->name;
}
double Term::value() const {
  if (kind() != Kind::Const) wrongKind("value");
  return node_->value;
}
const PrimRef& Term::prim() const {
  if (kind() != Kind::PrimApp) wrongKind("prim");
  return node_->prim;
}
const std::vector<Term>& Term::args() const {
  if (kind() != Kind::PrimApp) wrongKind("args");
  return node_->kids;
}
const Term& Term::fn() const {
  if (kind() != Kind::App) wrongKind("fn");
  return node_->kids[0];
}
const Term& Term::arg() const {
  if (kind() != Kind::App) wrongKind("arg");
  return node_->kids[1];
}
const std::string& Term::binder() const {
  if (kind() != Kind::Lam) wrongKind("binder");
  return node_->name;
}
const std::optional<SimpleType>& Term::annot() const {
  if (kind() != Kind::Lam) wrongKind("annot");
  return node_->annot;
}
const Term& Term::body() const {
  if (kind() != Kind::Lam) wrongKind("body");
  return node_->kids[0];
}
const Term& Term::left() const {
  if (kind() != Kind::Pair) wrongKind("left");
  return node_->kids[0];
}
const Term& Term::right() const {
  if (kind() != Kind::Pair) wrongKind("right");
  return node_->kids[1];
}
const Term& Term::operand() const {
  if (kind() != Kind::Fst && kind() != Kind::Snd) wrongKind("operand");
  return node_->kids[0];
}

namespace {

enum class Pos { Top, Fn, Arg };

std::string print(const Term& t, Pos pos) {
  auto wrap = [&](const std::string& s, bool need) { return need ? "(" + s + ")" : s; };
  switch (t.kind()) {
    case Term::Kind::Var:
      return t.name();
    case Term::Kind::Const: {
      std::string s = formatLiteral(t.value());
      return wrap(s, pos == Pos::Arg && t.value() < 0);
    }
    case Term::Kind::PrimApp: {
      std::string s = t.prim().str() + "(";
      for (std::size_t i = 0; i < t.args().size(); ++i) s += (i ? ", " : "") + print(t.args()[i], Pos::Top);
      return s + ")";
    }
    case Term::Kind::App: {
      const Term& f = t.fn();
      if (f.kind() == Term::Kind::Lam && !f.annot()) {
        std::string s = "let " + f.binder() + " be " + print(t.arg(), Pos::Top) + " in " + print(f.body(), Pos::Top);
        return wrap(s, pos != Pos::Top);
      }
      std::string s = print(f, Pos::Fn) + " " + print(t.arg(), Pos::Arg);
      return wrap(s, pos == Pos::Arg);
    }
    case Term::Kind::Lam: {
      std::string s = "\\" + t.binder();
      if (t.annot()) s += ":" + t.annot()->str();
      s += ". " + print(t.body(), Pos::Top);
      return wrap(s, pos != Pos::Top);
    }
    case Term::Kind::Pair:
      return "<" + print(t.left(), Pos::Top) + ", " + print(t.right(), Pos::Top) + ">";
    case Term::Kind::Fst:
      return "fst(" + print(t.operand(), Pos::Top) + ")";
    case Term::Kind::Snd:
      return "snd(" + print(t.operand(), Pos::Top) + ")";
  }
  return "?";
}

}  // namespace

std::string Term::str() const { return print(*this, Pos::Top); }

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Term::Kind::Var:
      return a.name() == b.name();
    case Term::Kind::Const:
      return a.value() == b.value();
    case Term::Kind::PrimApp:
      if (!(a.prim() == b.prim())) return false;
      break;
    case Term::Kind::Lam:
      if (a.binder() != b.binder() || a.annot().has_value() != b.annot().has_value()) return false;
      if (a.annot() && *a.annot() != *b.annot()) return false;
      break;
    default:
      break;
  }
  if (a.children().size() != b.children().size()) return false;
  for (std::size_t i = 0; i < a.children().size(); ++i)
    if (a.children()[i] != b.children()[i]) return false;
  return true;
}

std::set<std::string> freeVars(const Term& t) {
  std::set<std::string> out;
  switch (t.kind()) {
    case Term::Kind::Var:
      out.insert(t.name());
      return out;
    case Term::Kind::Lam:
      out = freeVars(t.body());
      out.erase(t.binder());
      return out;
    default:
      for (const auto& c : t.children()) {
        auto s = freeVars(c);
        out.insert(s.begin(), s.end());
      }
      return out;
  }
}

std::string freshName(const std::string& base, const std::set<std::string>& avoid) {
  if (!avoid.count(base)) return base;
  for (std::size_t i = 1;; ++i) {
    std::string cand = base + "_" + std::to_string(i);
    if (!avoid.count(cand)) return cand;
  }
}

namespace {

Term rebuild(const Term& t, std::vector<Term> kids) {
  switch (t.kind()) {
    case Term::Kind::PrimApp:
      return Term::primApp(t.prim(), std::move(kids), t.span());
    case Term::Kind::App:
      return Term::app(kids[0], kids[1], t.span());
    case Term::Kind::Lam:
      return Term::lam(t.binder(), t.annot(), kids[0], t.span());
    case Term::Kind::Pair:
      return Term::pair(kids[0], kids[1], t.span());
    case Term::Kind::Fst:
      return Term::fst(kids[0], t.span());
    case Term::Kind::Snd:
      return Term::snd(kids[0], t.span());
    default:
      return t;
  }
}

}  // namespace

Term substitute(const Term& t, const std::string& x, const Term& p) {
  switch (t.kind()) {
    case Term::Kind::Var:
      return t.name() == x ? p : t;
    case Term::Kind::Const:
      return t;
    case Term::Kind::Lam: {
      if (t.binder() == x) return t;
      auto fvp = freeVars(p);
      if (fvp.count(t.binder()) && freeVars(t.body()).count(x)) {
        auto avoid = fvp;
        auto fb = freeVars(t.body());
        avoid.insert(fb.begin(), fb.end());
        avoid.insert(x);
        std::string y = freshName(t.binder(), avoid);
        Term body = substitute(t.body(), t.binder(), Term::var(y));
        return Term::lam(y, t.annot(), substitute(body, x, p), t.span());
      }
      return Term::lam(t.binder(), t.annot(), substitute(t.body(), x, p), t.span());
    }
    default: {
      std::vector<Term> kids;
      for (const auto& c : t.children()) kids.push_back(substitute(c, x, p));
      return rebuild(t, std::move(kids));
    }
  }
}

std::size_t termSize(const Term& t) {
  std::size_t n = 1;
  for (const auto& c : t.children()) n += termSize(c);
  return n;
}

}  // namespace qqm
