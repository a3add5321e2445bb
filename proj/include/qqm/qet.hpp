#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qqm/sampler.hpp"
#include "qqm/semantics.hpp"
#include "qqm/term.hpp"
#include "qqm/types.hpp"
#include "qqm/verdict.hpp"

namespace qqm {

/// Finitely representable distance functions a : (|Gamma|, Q_Gamma) -> Q_A.
///
///   Const r              the scalar r
///   Var x                xi at the innermost x
///   PrimMod alpha        alpha-bullet([[t_1]], ..., [[t_n]]; a_1, ..., a_n)
///   App a p b            a(gamma, xi)([[p]] gamma, b(gamma, xi))
///   Lam x A a            (v, a') -> a(gamma :: v, xi :: a')
///   Pair, Fst, Snd       componentwise
///   Tensor, Meet, Join   in Q_A for the stored type A
///   Deriv t              [[t]]-bullet(gamma, xi)
///   Subst a k x A p b    a evaluated with ([[p]], b) inserted at position k
class DistExpr {
 public:
  enum class Kind { Const, Var, PrimMod, App, Lam, Pair, Fst, Snd, Tensor, Meet, Join, Deriv, Subst };

  static DistExpr constant(double r);
  static DistExpr var(std::string name);
  static DistExpr primMod(PrimRef prim, std::vector<Term> args, std::vector<DistExpr> radii);
  static DistExpr app(DistExpr fn, Term arg, DistExpr argDist);
  static DistExpr lam(std::string binder, SimpleType type, DistExpr body);
  static DistExpr pair(DistExpr l, DistExpr r);
  static DistExpr fst(DistExpr d);
  static DistExpr snd(DistExpr d);
  static DistExpr tensor(SimpleType type, DistExpr l, DistExpr r);
  static DistExpr meet(SimpleType type, std::vector<DistExpr> family);
  static DistExpr join(SimpleType type, std::vector<DistExpr> family);
  static DistExpr deriv(Term t);
  static DistExpr subst(DistExpr inner, std::size_t position, std::string name, SimpleType type, Term p, DistExpr b);

  Kind kind() const { return node_->kind; }
  double value() const;                        // Const
  const std::string& name() const;             // Var, Lam binder, Subst variable
  const PrimRef& prim() const;                 // PrimMod
  const std::vector<Term>& terms() const;      // PrimMod args; App/Deriv/Subst term in front
  const std::vector<DistExpr>& kids() const;   // sub-expressions
  const SimpleType& type() const;              // Lam binder type, Tensor/Meet/Join type, Subst variable type
  std::size_t position() const;                // Subst

  Json toJson() const;
  static DistExpr fromJson(const Json& j);
  std::string str() const;
  friend bool operator==(const DistExpr& a, const DistExpr& b);

 private:
  struct Node {
    Kind kind = Kind::Const;
    double value = 0.0;
    std::string name;
    PrimRef prim;
    std::vector<Term> terms;
    std::vector<DistExpr> kids;
    std::optional<SimpleType> type;
    std::size_t position = 0;
  };
  explicit DistExpr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static DistExpr make(Node n);
  std::shared_ptr<const Node> node_;
};

QuantaleValue evalDist(const DistExpr& e, const TypingContext& ctx, const Environment& gamma,
                       const ErrEnvironment& xi, const Semantics& sem);

/// Gamma |- (left, dist, right) : type.
struct Judgment {
  TypingContext ctx;
  Term left;
  DistExpr dist;
  Term right;
  SimpleType type;

  Json toJson() const;
  static Judgment fromJson(const Json& j);
  std::string str() const;
};

enum class Rule { Lit, Var, Prim, Lam, App, Pair, Fst, Snd, SemReplace, Weaken, Join, Trans, QRefl };
std::string toString(Rule r);
Rule ruleFromString(const std::string& s);

struct Derivation {
  Rule rule;
  std::vector<Derivation> premises;
  Judgment conclusion;
  Json evidence;  // free-form notes carried through files

  Json toJson() const;
  static Derivation fromJson(const Json& j);
  static Derivation load(const std::string& path);
  std::size_t size() const;
};

struct QetOptions {
  SamplerConfig sampler;
  double tol = 1e-9;
};

struct NodeReport {
  std::string path;  // "root", "root.0", "root.0.1", ...
  Rule rule;
  std::string judgment;
  CheckReport checks;
  Json toJson() const;
};

struct DerivationReport {
  Verdict verdict;
  std::vector<NodeReport> nodes;
  /// First failing node, if any.
  const NodeReport* firstFailure() const;
  Json toJson() const;
};

/// Equality of two distances on ctx at type: Proved when the trees coincide
/// (or both are closed scalars), otherwise compared at sampled (gamma, xi).
Verdict distanceEqual(const DistExpr& a, const DistExpr& b, const TypingContext& ctx, const SimpleType& type,
                      const Semantics& sem, const QetOptions& opts = {});

DerivationReport checkDerivation(const Derivation& d, const Semantics& sem, const QetOptions& opts = {});

/// Gamma |- (t, [[t]]-bullet, t) : A, built by recursion on t (let-binders
/// are elaborated first).
Derivation reflexivityDerivation(const TypingContext& ctx, const Term& t, const PrimitiveTable& prims);

struct SubstitutionResult {
  Derivation sameSides;   // Gamma, Delta |- (t[p/x], c, s[q/x])
  Derivation leftOnly;    // Gamma, Delta |- (t[p/x], c, t[q/x])
  DistExpr c;             // a with ([[p]], b) inserted at x
};
/// From d1 : Gamma, x:A, Delta |- (t, a, s) : B and closed d2 : |- (p, b, q) : A.
/// Throws std::invalid_argument when the contexts do not align.
SubstitutionResult substitutionDerivation(const Derivation& d1, const Derivation& d2, const std::string& x);

/// |[[t]] - [[s]]| <= a for a closed judgment at a ground type.
Verdict groundSoundness(const Judgment& j, const Semantics& sem, double tol);

/// Random closed derivation at Real using lit, prim, lam/app, sem-replace,
/// weaken, join, trans and qrefl. Uses the unary and binary primitives of
/// the table that carry an analytic modulus.
Derivation randomClosedDerivation(Rng& rng, const PrimitiveTable& prims, std::size_t depth);

/// One step of the closure rules (weaken, join, trans, qrefl) applied to an
/// accepted closed derivation.
Derivation randomClosureStep(Rng& rng, const Derivation& d, const PrimitiveTable& prims);

}  // namespace qqm
