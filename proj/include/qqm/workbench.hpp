#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qqm/quantale.hpp"
#include "qqm/sampler.hpp"
#include "qqm/verdict.hpp"

namespace qqm {

enum class Axiom {
  Reflexive,
  QuasiReflexive,
  Transitive,
  LST,
  ST1,
  ST2,
  ST3,
  ST4,
  SelfIndistancy,
  WeakSymmetry
};

std::string toString(Axiom a);
Axiom axiomFromString(const std::string& s);
const std::vector<Axiom>& allAxioms();

struct AxiomResult {
  bool holds = true;
  Json witness;                // first failure
  std::size_t failures = 0;    // number of failing instances
};
using AxiomReport = std::map<Axiom, AxiomResult>;
Json toJson(const AxiomReport& r);

struct SizeGuard : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct WorkbenchCaps {
  std::size_t carrier = 4;          // input carrier size for exponentials
  std::size_t quantale = 5;         // input quantale size for exponentials
  std::size_t expCarrier = 64;      // |B|^|A|
  std::size_t expQuantale = 256;    // monotone tables
  std::size_t morphisms = 200000;   // candidate triples scanned per hom-set
  std::size_t pairs = 50000000;     // hom-pairs checked exhaustively by the coproduct laws
  Json toJson() const;
};

/// A Q-relation X x X -> Q on a finite carrier, entries are quantale indices.
struct RelationTable {
  std::vector<std::string> carrier;
  FiniteQuantalePtr q;
  std::vector<std::size_t> values;  // row-major, values[x * n + y]

  std::size_t size() const { return carrier.size(); }
  std::size_t at(std::size_t x, std::size_t y) const { return values[x * carrier.size() + y]; }
  bool operator==(const RelationTable& o) const { return carrier == o.carrier && values == o.values; }
  Json toJson() const;
};

/// (X, Q, r) with a finite carrier and a finite table quantale. The predicate
/// is stored as a boolean table over X x Q x X.
class FiniteQqmSpace {
 public:
  /// Checks closure, quasi-reflexivity and transitivity unless `raw`.
  FiniteQqmSpace(std::vector<std::string> carrier, FiniteQuantalePtr q, std::vector<char> predicate, bool raw = false);

  /// The predicate {(x, a, y) : a below phi(x, y)}.
  static FiniteQqmSpace fromRelation(const RelationTable& phi, bool raw = false);
  static FiniteQqmSpace fromJson(const Json& j);
  static FiniteQqmSpace load(const std::string& path);
  Json toJson() const;

  std::size_t size() const { return carrier_.size(); }
  const FiniteQuantale& q() const { return *q_; }
  const FiniteQuantalePtr& quantale() const { return q_; }
  const std::string& label(std::size_t x) const { return carrier_.at(x); }
  const std::vector<std::string>& labels() const { return carrier_; }
  std::size_t index(const std::string& label) const;
  bool raw() const { return raw_; }

  bool contains(std::size_t x, std::size_t a, std::size_t y) const {
    return pred_[(x * carrier_.size() + y) * q_->size() + a] != 0;
  }
  /// r-hat(x, y): join of the admissible radii.
  std::size_t hat(std::size_t x, std::size_t y) const;
  std::size_t sigma(std::size_t x) const { return hat(x, x); }
  RelationTable relation() const;
  const std::vector<char>& predicate() const { return pred_; }

  /// Names the failing closure condition, if any.
  std::optional<std::string> closureFailure() const;

 private:
  std::vector<std::string> carrier_;
  FiniteQuantalePtr q_;
  std::vector<char> pred_;
  bool raw_ = false;
};

/// Exhaustive axiom checks. The strong-transitivity variants ST1-ST4 are
/// checked on r-hat; the other axioms in predicate form.
AxiomReport checkAxioms(const FiniteQqmSpace& space, const std::vector<Axiom>& which);

/// The same relational conditions on a [0, inf]-valued relation, with exact
/// extended arithmetic (reversed order, + as tensor).
AxiomReport checkLawvereRelation(std::size_t n, const std::vector<double>& phi, const std::vector<Axiom>& which);

/// r-hat of a closed predicate; throws std::invalid_argument naming the
/// failing closure condition otherwise.
RelationTable hatAndCheck(const FiniteQqmSpace& space);
/// The predicate of a relation (raw unless it is quasi-reflexive and transitive).
FiniteQqmSpace predicateOf(const RelationTable& phi);

enum class Side { Left, Right };
/// phi^l(x, y) = meet_z phi(y, z) -o phi(x, z); phi^r(x, y) = meet_z phi(z, x) -o phi(z, y).
RelationTable observational(const RelationTable& phi, Side side);

struct LstCharacterization {
  bool lst = false;
  bool yyCandidate = false;  // phi^l(x, y) = phi(y, y) -o phi(x, y) for all x, y
  bool xxCandidate = false;  // phi^l(x, y) = phi(x, x) -o phi(x, y) for all x, y
  Json witnessYY, witnessXX;
  Json toJson() const;
};
LstCharacterization lstCharacterization(const RelationTable& phi);

/// (f, d, g) with d[x * |Q_A| + a] an index of Q_B.
struct FiniteMorphism {
  std::vector<std::size_t> f, g;
  std::vector<std::size_t> d;
  bool operator==(const FiniteMorphism& o) const { return f == o.f && g == o.g && d == o.d; }
  Json toJson(const FiniteQqmSpace& A, const FiniteQqmSpace& B) const;
};

Verdict isMorphism(const FiniteQqmSpace& A, const FiniteQqmSpace& B, const FiniteMorphism& m);
FiniteMorphism identityMorphism(const FiniteQqmSpace& A);
/// (h, e, k) after (f, d, g): (h f, (x, a) -> e(fx, d(x, a)), k g).
FiniteMorphism compose(const FiniteQqmSpace& A, const FiniteQqmSpace& B, const FiniteMorphism& m1,
                       const FiniteMorphism& m2);
/// All morphisms A -> B in a deterministic order.
std::vector<FiniteMorphism> enumerateMorphisms(const FiniteQqmSpace& A, const FiniteQqmSpace& B,
                                               const WorkbenchCaps& caps = {});

FiniteQqmSpace terminalSpace();
FiniteQqmSpace productSpace(const FiniteQqmSpace& A, const FiniteQqmSpace& B);

struct ExponentialSpace {
  FiniteQqmSpace space;
  std::vector<std::vector<std::size_t>> functions;  // carrier element -> images
  std::vector<std::vector<std::size_t>> tables;     // quantale element -> d table
};
/// Carrier |A| => |B|, quantale the monotone tables (|A|, Q_A) -> Q_B. Built
/// unchecked (flagged raw); suites run checkAxioms on the result.
ExponentialSpace exponentialSpace(const FiniteQqmSpace& A, const FiniteQqmSpace& B, const WorkbenchCaps& caps = {});

struct WeakCoproduct {
  FiniteQqmSpace space;  // carrier {0} x |A| + {1} x |B|, quantale LQ_A x LQ_B
  std::size_t leftSize = 0;
  /// s_C: cotupling; the error is bottom when the relevant component is empty.
  FiniteMorphism section(const FiniteQqmSpace& A, const FiniteQqmSpace& B, const FiniteQqmSpace& C,
                         const FiniteMorphism& m1, const FiniteMorphism& m2) const;
  /// r_C: restriction along the two injections.
  std::pair<FiniteMorphism, FiniteMorphism> retraction(const FiniteQqmSpace& A, const FiniteQqmSpace& B,
                                                       const FiniteQqmSpace& C, const FiniteMorphism& m) const;
};
WeakCoproduct weakCoproduct(const FiniteQqmSpace& A, const FiniteQqmSpace& B);

/// r_C after s_C is the identity on every enumerated pair of morphisms into C
/// (a deterministic cover past caps.pairs),
/// s_C lands in morphisms, and r_C is natural in C.
CheckReport weakCoproductLaws(const FiniteQqmSpace& A, const FiniteQqmSpace& B, const FiniteQqmSpace& C,
                              const WorkbenchCaps& caps = {});

/// Identity and associativity laws, plus the composite formula, for
/// m1 : A -> B, m2 : B -> C, m3 : C -> D.
CheckReport categoryLaws(const std::vector<FiniteQqmSpace>& spaces, const std::vector<FiniteMorphism>& morphisms);

/// For A, B with self-indistancy, LST and weak symmetry: the exponential
/// keeps the three properties, sigma_f(x, sigma_x) = sigma_{fx}, and the two
/// corollaries hold.
CheckReport closureTheoremSuite(const FiniteQqmSpace& A, const FiniteQqmSpace& B, const WorkbenchCaps& caps = {});

/// Corollary checks on one space: (x, a * sigma_z, y) and a * sigma_x below
/// sigma_y give (y, a * sigma_x, x); (x, sigma_y, y) gives x = y.
AxiomResult checkSymmetryCorollary(const FiniteQqmSpace& s);
AxiomResult checkIndistancyCorollary(const FiniteQqmSpace& s);

// Random generators for property suites.
/// Random relation closed under transitivity and quasi-reflexivity.
FiniteQqmSpace randomQqmSpace(Rng& rng, std::size_t n, const FiniteQuantalePtr& q);
/// Random separated symmetric transitive relation with reflexive diagonal,
/// or (with probability `general`) a random quasi-quasi-metric that passes
/// self-indistancy, LST and weak symmetry.
FiniteQqmSpace randomTheoremSpace(Rng& rng, std::size_t n, const FiniteQuantalePtr& q, double general = 0.5);
/// Random left quasi-reflexive [0, inf]-relation with integer entries up to maxValue (inf with probability pInf).
std::vector<double> randomLawvereRelation(Rng& rng, std::size_t n, int maxValue, double pInf);

}  // namespace qqm
