#pragma once

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "qqm/types.hpp"

namespace qqm {

struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t line = 0;  // 1-based; 0 when unknown
  std::size_t column = 0;
  std::string str() const;
};

/// Reference to a primitive, optionally with an explicit parameter
/// (add[0.01] is add with epsilon 0.01).
struct PrimRef {
  std::string name;
  std::optional<double> param;
  std::string str() const;
  friend bool operator==(const PrimRef&, const PrimRef&) = default;
};

/// Terms of the calculus. Lambda annotations may be absent only in the
/// desugared form of `let`, where the type is taken from the argument.
class Term {
 public:
  enum class Kind { Var, Const, PrimApp, App, Lam, Pair, Fst, Snd };

  static Term var(std::string name, Span span = {});
  static Term constant(double value, Span span = {});
  static Term primApp(PrimRef prim, std::vector<Term> args, Span span = {});
  static Term app(Term fn, Term arg, Span span = {});
  static Term lam(std::string binder, std::optional<SimpleType> annot, Term body, Span span = {});
  static Term pair(Term l, Term r, Span span = {});
  static Term fst(Term t, Span span = {});
  static Term snd(Term t, Span span = {});
  /// let y be t in s, i.e. (\y. s) t with the binder type left open.
  static Term let(std::string binder, std::optional<SimpleType> annot, Term bound, Term body, Span span = {});

  Kind kind() const { return node_->kind; }
  const Span& span() const { return node_->span; }

  const std::string& name() const;          // Var
  double value() const;                     // Const
  const PrimRef& prim() const;              // PrimApp
  const std::vector<Term>& args() const;    // PrimApp
  const Term& fn() const;                   // App
  const Term& arg() const;                  // App
  const std::string& binder() const;        // Lam
  const std::optional<SimpleType>& annot() const;  // Lam
  const Term& body() const;                 // Lam
  const Term& left() const;                 // Pair
  const Term& right() const;                // Pair
  const Term& operand() const;              // Fst, Snd

  /// Children in syntactic order.
  const std::vector<Term>& children() const { return node_->kids; }

  /// Concrete syntax accepted by `parse`.
  std::string str() const;

  friend bool operator==(const Term& a, const Term& b);
  friend bool operator!=(const Term& a, const Term& b) { return !(a == b); }

 private:
  struct Node {
    Kind kind;
    Span span;
    std::string name;
    double value = 0.0;
    PrimRef prim;
    std::optional<SimpleType> annot;
    std::vector<Term> kids;
  };
  explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static Term make(Node n);
  std::shared_ptr<const Node> node_;
};

/// Shortest decimal that round-trips through strtod.
std::string formatLiteral(double x);

std::set<std::string> freeVars(const Term& t);
/// Capture-avoiding substitution t[p/x].
Term substitute(const Term& t, const std::string& x, const Term& p);
/// A name not in `avoid`, derived from `base`.
std::string freshName(const std::string& base, const std::set<std::string>& avoid);
/// Number of nodes.
std::size_t termSize(const Term& t);

}  // namespace qqm
