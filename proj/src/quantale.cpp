#include "qqm/quantale.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "qqm/sampler.hpp"

namespace qqm {

// ---------------------------------------------------------------- finite tables

std::vector<std::string> FiniteQuantale::violations(const std::vector<std::string>& names,
                                                    const std::vector<std::vector<bool>>& order,
                                                    const std::vector<std::vector<std::size_t>>& tensor,
                                                    std::size_t unit) {
  std::vector<std::string> out;
  const std::size_t n = names.size();
  if (n == 0) return {"no elements"};
  if (order.size() != n || tensor.size() != n) return {"table sizes do not match the element count"};
  for (std::size_t i = 0; i < n; ++i) {
    if (order[i].size() != n || tensor[i].size() != n) return {"table rows do not match the element count"};
    for (auto v : tensor[i])
      if (v >= n) return {"tensor entry out of range"};
  }
  if (unit >= n) return {"unit out of range"};
  std::set<std::string> distinct(names.begin(), names.end());
  if (distinct.size() != n) out.push_back("element names are not distinct");
  auto nm = [&](std::size_t i) { return names[i]; };
  for (std::size_t i = 0; i < n; ++i) {
    if (!order[i][i]) out.push_back("order not reflexive at " + nm(i));
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && order[i][j] && order[j][i]) out.push_back("order not antisymmetric at " + nm(i) + ", " + nm(j));
      for (std::size_t k = 0; k < n; ++k)
        if (order[i][j] && order[j][k] && !order[i][k])
          out.push_back("order not transitive at " + nm(i) + ", " + nm(j) + ", " + nm(k));
    }
  }
  if (!out.empty()) return out;
  // Binary joins and a bottom make a finite poset a complete lattice.
  auto lub = [&](std::size_t a, std::size_t b) -> std::optional<std::size_t> {
    std::optional<std::size_t> best;
    for (std::size_t c = 0; c < n; ++c) {
      if (!order[a][c] || !order[b][c]) continue;
      if (!best || order[c][*best]) best = c;
    }
    if (!best) return std::nullopt;
    for (std::size_t c = 0; c < n; ++c)
      if (order[a][c] && order[b][c] && !order[*best][c]) return std::nullopt;
    return best;
  };
  std::optional<std::size_t> bot;
  for (std::size_t c = 0; c < n; ++c) {
    bool below = true;
    for (std::size_t d = 0; d < n; ++d) below = below && order[c][d];
    if (below) bot = c;
  }
  if (!bot) out.push_back("no bottom element");
  std::vector<std::vector<std::size_t>> joins(n, std::vector<std::size_t>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      auto l = lub(i, j);
      if (!l) {
        out.push_back("no least upper bound of " + nm(i) + " and " + nm(j));
        return out;
      }
      joins[i][j] = *l;
    }
  if (!out.empty()) return out;
  for (std::size_t i = 0; i < n; ++i)
    if (!order[i][unit]) out.push_back("unit is not the top element (integrality fails at " + nm(i) + ")");
  for (std::size_t i = 0; i < n; ++i) {
    if (tensor[unit][i] != i || tensor[i][unit] != i) out.push_back("unit law fails at " + nm(i));
    if (tensor[i][*bot] != *bot) out.push_back("tensor does not preserve the empty join at " + nm(i));
    for (std::size_t j = 0; j < n; ++j) {
      if (tensor[i][j] != tensor[j][i]) out.push_back("tensor not commutative at " + nm(i) + ", " + nm(j));
      for (std::size_t k = 0; k < n; ++k) {
        if (tensor[tensor[i][j]][k] != tensor[i][tensor[j][k]])
          out.push_back("tensor not associative at " + nm(i) + ", " + nm(j) + ", " + nm(k));
        if (tensor[i][joins[j][k]] != joins[tensor[i][j]][tensor[i][k]])
          out.push_back("tensor does not preserve joins at " + nm(i) + ", " + nm(j) + ", " + nm(k));
      }
    }
  }
  return out;
}

FiniteQuantale::FiniteQuantale(std::vector<std::string> names, std::vector<std::vector<bool>> order,
                               std::vector<std::vector<std::size_t>> tensor, std::size_t unit)
    : names_(std::move(names)), order_(std::move(order)), tensor_(std::move(tensor)), unit_(unit) {
  auto bad = violations(names_, order_, tensor_, unit_);
  if (!bad.empty()) {
    std::string msg = "invalid finite quantale:";
    for (std::size_t i = 0; i < bad.size() && i < 8; ++i) msg += "\n  " + bad[i];
    if (bad.size() > 8) msg += "\n  (" + std::to_string(bad.size() - 8) + " more)";
    throw std::invalid_argument(msg);
  }
  const std::size_t n = names_.size();
  for (std::size_t c = 0; c < n; ++c) {
    bool below = true;
    for (std::size_t d = 0; d < n; ++d) below = below && order_[c][d];
    if (below) bottom_ = c;
  }
  auto bound = [&](std::size_t a, std::size_t b, bool upper) {
    std::optional<std::size_t> best;
    for (std::size_t c = 0; c < n; ++c) {
      bool ok = upper ? (order_[a][c] && order_[b][c]) : (order_[c][a] && order_[c][b]);
      if (!ok) continue;
      if (!best || (upper ? order_[c][*best] : order_[*best][c])) best = c;
    }
    return *best;
  };
  join_.assign(n, std::vector<std::size_t>(n));
  meet_.assign(n, std::vector<std::size_t>(n));
  residual_.assign(n, std::vector<std::size_t>(n));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      join_[a][b] = bound(a, b, true);
      meet_[a][b] = bound(a, b, false);
    }
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      std::size_t r = bottom_;
      for (std::size_t z = 0; z < n; ++z)
        if (order_[tensor_[a][z]][b]) r = join_[r][z];
      residual_[a][b] = r;
    }
}

std::optional<std::size_t> FiniteQuantale::index(const std::string& name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - names_.begin());
}

std::size_t FiniteQuantale::at(const std::string& name) const {
  auto i = index(name);
  if (!i) throw std::invalid_argument("unknown quantale element: " + name);
  return *i;
}

std::size_t FiniteQuantale::join(std::span<const std::size_t> family) const {
  std::size_t r = bottom_;
  for (auto v : family) r = join_[r][v];
  return r;
}

std::size_t FiniteQuantale::meet(std::span<const std::size_t> family) const {
  std::size_t r = unit_;
  for (auto v : family) r = meet_[r][v];
  return r;
}

void FiniteQuantale::setNumericValues(std::vector<double> values) {
  if (!values.empty() && values.size() != size()) throw std::invalid_argument("numeric values size mismatch");
  numeric_ = std::move(values);
}

Json FiniteQuantale::toJson() const {
  Json j;
  j["elements"] = names_;
  Json order = Json::array();
  for (std::size_t a = 0; a < size(); ++a)
    for (std::size_t b = 0; b < size(); ++b)
      if (a != b && order_[a][b]) order.push_back({names_[a], names_[b]});
  j["order"] = order;
  Json tensor = Json::array();
  for (std::size_t a = 0; a < size(); ++a) {
    Json row = Json::array();
    for (std::size_t b = 0; b < size(); ++b) row.push_back(names_[tensor_[a][b]]);
    tensor.push_back(row);
  }
  j["tensor"] = tensor;
  j["unit"] = names_[unit_];
  if (!numeric_.empty()) {
    Json nums = Json::array();
    for (double v : numeric_) nums.push_back(formatReal(v));
    j["numeric"] = nums;
  }
  return j;
}

std::shared_ptr<const FiniteQuantale> FiniteQuantale::fromJson(const Json& j) {
  if (j.contains("preset")) {
    std::string p = j.at("preset");
    std::size_t n = j.value("size", 3);
    if (p == "boolean") return boolean();
    if (p == "godel") return godelChain(n);
    if (p == "lukasiewicz") return lukasiewiczChain(n);
    if (p == "lawvere") return truncatedLawvere(j.value("ceiling", 8));
    if (p == "diamond") return diamond();
    throw std::invalid_argument("unknown quantale preset: " + p);
  }
  std::vector<std::string> names = j.at("elements").get<std::vector<std::string>>();
  const std::size_t n = names.size();
  auto idx = [&](const std::string& s) {
    auto it = std::find(names.begin(), names.end(), s);
    if (it == names.end()) throw std::invalid_argument("unknown quantale element: " + s);
    return static_cast<std::size_t>(it - names.begin());
  };
  std::vector<std::vector<bool>> order(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) order[i][i] = true;
  for (const auto& p : j.at("order")) order[idx(p.at(0))][idx(p.at(1))] = true;
  // Reflexive-transitive closure of the listed pairs.
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        if (order[a][k] && order[k][b]) order[a][b] = true;
  const auto& t = j.at("tensor");
  if (t.size() != n) throw std::invalid_argument("tensor table must have one row per element");
  std::vector<std::vector<std::size_t>> tensor(n, std::vector<std::size_t>(n));
  for (std::size_t a = 0; a < n; ++a) {
    if (t[a].size() != n) throw std::invalid_argument("tensor table row has the wrong length");
    for (std::size_t b = 0; b < n; ++b) tensor[a][b] = idx(t[a][b]);
  }
  auto q = std::make_shared<FiniteQuantale>(names, order, tensor, idx(j.at("unit")));
  if (j.contains("numeric")) {
    std::vector<double> nums;
    for (const auto& v : j.at("numeric")) {
      if (v.is_string()) {
        std::string s = v;
        nums.push_back(s == "inf" ? kInf : std::stod(s));
      } else {
        nums.push_back(v.get<double>());
      }
    }
    q->setNumericValues(nums);
  }
  return q;
}

namespace {

std::shared_ptr<const FiniteQuantale> chain(std::vector<std::string> names,
                                            const std::function<std::size_t(std::size_t, std::size_t)>& op) {
  const std::size_t n = names.size();
  std::vector<std::vector<bool>> order(n, std::vector<bool>(n));
  std::vector<std::vector<std::size_t>> tensor(n, std::vector<std::size_t>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      order[i][j] = i <= j;
      tensor[i][j] = op(i, j);
    }
  return std::make_shared<FiniteQuantale>(std::move(names), order, tensor, n - 1);
}

}  // namespace

std::shared_ptr<const FiniteQuantale> FiniteQuantale::boolean() {
  return chain({"false", "true"}, [](std::size_t a, std::size_t b) { return std::min(a, b); });
}

std::shared_ptr<const FiniteQuantale> FiniteQuantale::godelChain(std::size_t n) {
  if (n < 1) throw std::invalid_argument("chain needs at least one element");
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("g" + std::to_string(i));
  return chain(names, [](std::size_t a, std::size_t b) { return std::min(a, b); });
}

std::shared_ptr<const FiniteQuantale> FiniteQuantale::lukasiewiczChain(std::size_t n) {
  if (n < 1) throw std::invalid_argument("chain needs at least one element");
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("l" + std::to_string(i));
  return chain(names, [n](std::size_t a, std::size_t b) { return a + b >= n - 1 ? a + b - (n - 1) : 0; });
}

std::shared_ptr<const FiniteQuantale> FiniteQuantale::truncatedLawvere(std::size_t ceiling) {
  // Index i < ceiling + 1 stands for the number i; the last index is inf.
  const std::size_t n = ceiling + 2;
  const std::size_t inf = n - 1;
  std::vector<std::string> names;
  std::vector<double> nums;
  for (std::size_t i = 0; i <= ceiling; ++i) {
    names.push_back(std::to_string(i));
    nums.push_back(static_cast<double>(i));
  }
  names.push_back("inf");
  nums.push_back(kInf);
  std::vector<std::vector<bool>> order(n, std::vector<bool>(n));
  std::vector<std::vector<std::size_t>> tensor(n, std::vector<std::size_t>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      order[i][j] = nums[i] >= nums[j];
      tensor[i][j] = (i == inf || j == inf || i + j > ceiling) ? inf : i + j;
    }
  auto q = std::make_shared<FiniteQuantale>(names, order, tensor, 0);
  q->setNumericValues(nums);
  return q;
}

std::shared_ptr<const FiniteQuantale> FiniteQuantale::diamond() {
  // bot, a, b, top with a and b incomparable.
  std::vector<std::string> names{"bot", "a", "b", "top"};
  std::vector<std::vector<bool>> order = {
      {true, true, true, true}, {false, true, false, true}, {false, false, true, true}, {false, false, false, true}};
  std::vector<std::vector<std::size_t>> tensor = {{0, 0, 0, 0}, {0, 1, 0, 1}, {0, 0, 2, 2}, {0, 1, 2, 3}};
  return std::make_shared<FiniteQuantale>(names, order, tensor, 3);
}

std::shared_ptr<const FiniteQuantale> FiniteQuantale::lifted(const FiniteQuantale& base) {
  // Index 0 is the empty element; index i + 1 is {i}.
  const std::size_t n = base.size() + 1;
  std::vector<std::string> names{"{}"};
  for (const auto& s : base.names()) names.push_back("{" + s + "}");
  std::vector<std::vector<bool>> order(n, std::vector<bool>(n));
  std::vector<std::vector<std::size_t>> tensor(n, std::vector<std::size_t>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      order[i][j] = i == 0 || (j > 0 && base.leq(i - 1, j - 1));
      if (i > 0 && j > 0) tensor[i][j] = base.tensor(i - 1, j - 1) + 1;
    }
  return std::make_shared<FiniteQuantale>(names, order, tensor, base.unit() + 1);
}

std::shared_ptr<const FiniteQuantale> FiniteQuantale::product(const FiniteQuantale& l, const FiniteQuantale& r) {
  const std::size_t n = l.size() * r.size();
  auto idx = [&](std::size_t i, std::size_t j) { return i * r.size() + j; };
  std::vector<std::string> names(n);
  std::vector<std::vector<bool>> order(n, std::vector<bool>(n));
  std::vector<std::vector<std::size_t>> tensor(n, std::vector<std::size_t>(n));
  for (std::size_t a = 0; a < l.size(); ++a)
    for (std::size_t b = 0; b < r.size(); ++b) {
      names[idx(a, b)] = "(" + l.name(a) + "," + r.name(b) + ")";
      for (std::size_t c = 0; c < l.size(); ++c)
        for (std::size_t d = 0; d < r.size(); ++d) {
          order[idx(a, b)][idx(c, d)] = l.leq(a, c) && r.leq(b, d);
          tensor[idx(a, b)][idx(c, d)] = idx(l.tensor(a, c), r.tensor(b, d));
        }
    }
  return std::make_shared<FiniteQuantale>(names, order, tensor, idx(l.unit(), r.unit()));
}

// ---------------------------------------------------------------- descriptors

std::string CarrierDescriptor::str() const {
  if (type) return type->str();
  return "{" + std::to_string(points.size()) + " points}";
}

QuantaleDescriptor QuantaleDescriptor::lawvere() {
  static const auto node = std::make_shared<const Node>(Node{Shape::Lawvere, nullptr, nullptr, nullptr, {}, nullptr});
  return QuantaleDescriptor(node);
}

QuantaleDescriptor QuantaleDescriptor::product(QuantaleDescriptor l, QuantaleDescriptor r) {
  return QuantaleDescriptor(std::make_shared<const Node>(Node{Shape::Product,
                                                              std::make_shared<const QuantaleDescriptor>(std::move(l)),
                                                              std::make_shared<const QuantaleDescriptor>(std::move(r)),
                                                              nullptr,
                                                              {},
                                                              nullptr}));
}

QuantaleDescriptor QuantaleDescriptor::funSpace(CarrierDescriptor carrier, QuantaleDescriptor inner,
                                                QuantaleDescriptor outer) {
  return QuantaleDescriptor(std::make_shared<const Node>(
      Node{Shape::FunSpace, std::make_shared<const QuantaleDescriptor>(std::move(inner)),
           std::make_shared<const QuantaleDescriptor>(std::move(outer)), nullptr, std::move(carrier), nullptr}));
}

QuantaleDescriptor QuantaleDescriptor::lifted(QuantaleDescriptor base) {
  return QuantaleDescriptor(std::make_shared<const Node>(Node{
      Shape::Lifted, std::make_shared<const QuantaleDescriptor>(std::move(base)), nullptr, nullptr, {}, nullptr}));
}

QuantaleDescriptor QuantaleDescriptor::finiteTable(FiniteQuantalePtr table) {
  if (!table) throw std::invalid_argument("null finite quantale");
  return QuantaleDescriptor(
      std::make_shared<const Node>(Node{Shape::FiniteTable, nullptr, nullptr, nullptr, {}, std::move(table)}));
}

namespace {
[[noreturn]] void wrongShape(const std::string& what, const QuantaleDescriptor& q) {
  throw QuantaleShapeError(what + " is not defined for quantale " + q.str());
}
}  // namespace

const QuantaleDescriptor& QuantaleDescriptor::left() const {
  if (shape() != Shape::Product) wrongShape("left", *this);
  return *node_->a;
}
const QuantaleDescriptor& QuantaleDescriptor::right() const {
  if (shape() != Shape::Product) wrongShape("right", *this);
  return *node_->b;
}
const CarrierDescriptor& QuantaleDescriptor::carrier() const {
  if (shape() != Shape::FunSpace) wrongShape("carrier", *this);
  return node_->carrier;
}
const QuantaleDescriptor& QuantaleDescriptor::inner() const {
  if (shape() != Shape::FunSpace) wrongShape("inner", *this);
  return *node_->a;
}
const QuantaleDescriptor& QuantaleDescriptor::outer() const {
  if (shape() != Shape::FunSpace) wrongShape("outer", *this);
  return *node_->b;
}
const QuantaleDescriptor& QuantaleDescriptor::base() const {
  if (shape() != Shape::Lifted) wrongShape("base", *this);
  return *node_->a;
}
const FiniteQuantale& QuantaleDescriptor::table() const {
  if (shape() != Shape::FiniteTable) wrongShape("table", *this);
  return *node_->table;
}

std::string QuantaleDescriptor::str() const {
  switch (shape()) {
    case Shape::Lawvere:
      return "Lawvere";
    case Shape::Product:
      return "Product(" + left().str() + ", " + right().str() + ")";
    case Shape::FunSpace:
      return "FunSpace(" + carrier().str() + ", " + inner().str() + ", " + outer().str() + ")";
    case Shape::Lifted:
      return "Lifted(" + base().str() + ")";
    case Shape::FiniteTable:
      return "FiniteTable(" + std::to_string(table().size()) + ")";
  }
  return "?";
}

bool QuantaleDescriptor::sameShape(const QuantaleDescriptor& other) const {
  if (shape() != other.shape()) return false;
  switch (shape()) {
    case Shape::Lawvere:
      return true;
    case Shape::Product:
      return left().sameShape(other.left()) && right().sameShape(other.right());
    case Shape::FunSpace:
      return carrier().str() == other.carrier().str() && inner().sameShape(other.inner()) &&
             outer().sameShape(other.outer());
    case Shape::Lifted:
      return base().sameShape(other.base());
    case Shape::FiniteTable:
      return node_->table == other.node_->table;
  }
  return false;
}

// ---------------------------------------------------------------- operations

using Shape = QuantaleDescriptor::Shape;

void checkShape(const QuantaleDescriptor& q, const QuantaleValue& v) {
  auto fail = [&] { throw QuantaleShapeError("value " + v.str() + " does not belong to quantale " + q.str()); };
  switch (q.shape()) {
    case Shape::Lawvere:
      if (!v.isScalar()) fail();
      return;
    case Shape::Product:
      if (!v.isPair()) fail();
      checkShape(q.left(), v.first());
      checkShape(q.right(), v.second());
      return;
    case Shape::FunSpace:
      if (!v.isErrFun()) fail();
      return;
    case Shape::Lifted:
      if (!v.isLift()) fail();
      if (!v.isEmptyLift()) checkShape(q.base(), v.liftContent());
      return;
    case Shape::FiniteTable:
      if (!v.isFinite() || v.finiteIndex() >= q.table().size()) fail();
      return;
  }
}

QuantaleValue unit(const QuantaleDescriptor& q) {
  switch (q.shape()) {
    case Shape::Lawvere:
      return QuantaleValue::scalar(0.0);
    case Shape::Product:
      return QuantaleValue::pair(unit(q.left()), unit(q.right()));
    case Shape::FunSpace: {
      auto u = unit(q.outer());
      return QuantaleValue::errFun([u](const SemValue&, const QuantaleValue&) { return u; }, "const(" + u.str() + ")");
    }
    case Shape::Lifted:
      return QuantaleValue::lift(unit(q.base()));
    case Shape::FiniteTable:
      return QuantaleValue::finite(q.table().unit());
  }
  throw QuantaleShapeError("unknown shape");
}

QuantaleValue top(const QuantaleDescriptor& q) { return unit(q); }

QuantaleValue bottom(const QuantaleDescriptor& q) {
  switch (q.shape()) {
    case Shape::Lawvere:
      return QuantaleValue::scalar(kInf);
    case Shape::Product:
      return QuantaleValue::pair(bottom(q.left()), bottom(q.right()));
    case Shape::FunSpace: {
      auto b = bottom(q.outer());
      return QuantaleValue::errFun([b](const SemValue&, const QuantaleValue&) { return b; }, "const(" + b.str() + ")");
    }
    case Shape::Lifted:
      return QuantaleValue::emptyLift();
    case Shape::FiniteTable:
      return QuantaleValue::finite(q.table().bottom());
  }
  throw QuantaleShapeError("unknown shape");
}

Verdict leq(const QuantaleDescriptor& q, const QuantaleValue& a, const QuantaleValue& b, const SamplerConfig& cfg) {
  checkShape(q, a);
  checkShape(q, b);
  auto refute = [&] { return Verdict::refuted({{"left", a.str()}, {"right", b.str()}, {"quantale", q.str()}}); };
  switch (q.shape()) {
    case Shape::Lawvere:
      // Reversed order: a is below b when a is numerically at least b.
      return a.asScalar() >= b.asScalar() ? Verdict::proved() : refute();
    case Shape::Product: {
      Verdict v = leq(q.left(), a.first(), b.first(), cfg);
      if (v.isRefuted()) return v;
      v &= leq(q.right(), a.second(), b.second(), cfg);
      return v;
    }
    case Shape::Lifted:
      if (a.isEmptyLift()) return Verdict::proved();
      if (b.isEmptyLift()) return refute();
      return leq(q.base(), a.liftContent(), b.liftContent(), cfg);
    case Shape::FiniteTable:
      return q.table().leq(a.finiteIndex(), b.finiteIndex()) ? Verdict::proved() : refute();
    case Shape::FunSpace: {
      Verdict total = Verdict::proved();
      auto probes = funSpaceProbes(q, cfg);
      for (const auto& [x, r] : probes) {
        auto fa = a.apply(x, r), gb = b.apply(x, r);
        Verdict v = leq(q.outer(), fa, gb, cfg);
        if (v.isRefuted()) {
          return Verdict::refuted(
              {{"x", x.str()}, {"a", r.str()}, {"left", fa.str()}, {"right", gb.str()}, {"inner", v.witness}});
        }
        total &= v;
      }
      return total.sampled(probes.size());
    }
  }
  throw QuantaleShapeError("unknown shape");
}

QuantaleValue tensor(const QuantaleDescriptor& q, const QuantaleValue& a, const QuantaleValue& b) {
  checkShape(q, a);
  checkShape(q, b);
  switch (q.shape()) {
    case Shape::Lawvere:
      return QuantaleValue::scalar(a.asScalar() + b.asScalar());
    case Shape::Product:
      return QuantaleValue::pair(tensor(q.left(), a.first(), b.first()), tensor(q.right(), a.second(), b.second()));
    case Shape::Lifted:
      if (a.isEmptyLift() || b.isEmptyLift()) return QuantaleValue::emptyLift();
      return QuantaleValue::lift(tensor(q.base(), a.liftContent(), b.liftContent()));
    case Shape::FiniteTable:
      return QuantaleValue::finite(q.table().tensor(a.finiteIndex(), b.finiteIndex()));
    case Shape::FunSpace: {
      auto outer = q.outer();
      return QuantaleValue::errFun(
          [outer, a, b](const SemValue& x, const QuantaleValue& r) { return tensor(outer, a.apply(x, r), b.apply(x, r)); },
          "(" + a.str() + " + " + b.str() + ")", a.exact() && b.exact());
    }
  }
  throw QuantaleShapeError("unknown shape");
}

namespace {

QuantaleValue lattice(const QuantaleDescriptor& q, const std::vector<QuantaleValue>& family, bool isMeet) {
  for (const auto& v : family) checkShape(q, v);
  if (family.empty()) return isMeet ? top(q) : bottom(q);
  switch (q.shape()) {
    case Shape::Lawvere: {
      double r = family.front().asScalar();
      for (const auto& v : family) r = isMeet ? std::max(r, v.asScalar()) : std::min(r, v.asScalar());
      return QuantaleValue::scalar(r);
    }
    case Shape::Product: {
      std::vector<QuantaleValue> ls, rs;
      for (const auto& v : family) {
        ls.push_back(v.first());
        rs.push_back(v.second());
      }
      return QuantaleValue::pair(lattice(q.left(), ls, isMeet), lattice(q.right(), rs, isMeet));
    }
    case Shape::Lifted: {
      std::vector<QuantaleValue> contents;
      for (const auto& v : family) {
        if (v.isEmptyLift()) {
          if (isMeet) return QuantaleValue::emptyLift();
        } else {
          contents.push_back(v.liftContent());
        }
      }
      if (contents.empty()) return QuantaleValue::emptyLift();
      return QuantaleValue::lift(lattice(q.base(), contents, isMeet));
    }
    case Shape::FiniteTable: {
      std::vector<std::size_t> idx;
      for (const auto& v : family) idx.push_back(v.finiteIndex());
      return QuantaleValue::finite(isMeet ? q.table().meet(idx) : q.table().join(idx));
    }
    case Shape::FunSpace: {
      auto outer = q.outer();
      bool exact = std::all_of(family.begin(), family.end(), [](const QuantaleValue& v) { return v.exact(); });
      std::string label = isMeet ? "meet(" : "join(";
      for (std::size_t i = 0; i < family.size(); ++i) label += (i ? ", " : "") + family[i].str();
      return QuantaleValue::errFun(
          [outer, family, isMeet](const SemValue& x, const QuantaleValue& r) {
            std::vector<QuantaleValue> vals;
            for (const auto& f : family) vals.push_back(f.apply(x, r));
            return lattice(outer, vals, isMeet);
          },
          label + ")", exact);
    }
  }
  throw QuantaleShapeError("unknown shape");
}

}  // namespace

QuantaleValue meet(const QuantaleDescriptor& q, const std::vector<QuantaleValue>& family) {
  return lattice(q, family, true);
}

QuantaleValue join(const QuantaleDescriptor& q, const std::vector<QuantaleValue>& family) {
  return lattice(q, family, false);
}

QuantaleValue residual(const QuantaleDescriptor& q, const QuantaleValue& a, const QuantaleValue& b,
                       const SamplerConfig& cfg) {
  checkShape(q, a);
  checkShape(q, b);
  switch (q.shape()) {
    case Shape::Lawvere: {
      double x = a.asScalar(), y = b.asScalar();
      if (std::isinf(x)) return QuantaleValue::scalar(0.0);
      return QuantaleValue::scalar(std::max(y - x, 0.0));
    }
    case Shape::Product:
      return QuantaleValue::pair(residual(q.left(), a.first(), b.first(), cfg),
                                 residual(q.right(), a.second(), b.second(), cfg));
    case Shape::Lifted:
      if (a.isEmptyLift()) return top(q);
      if (b.isEmptyLift()) return QuantaleValue::emptyLift();
      return QuantaleValue::lift(residual(q.base(), a.liftContent(), b.liftContent(), cfg));
    case Shape::FiniteTable:
      return QuantaleValue::finite(q.table().residual(a.finiteIndex(), b.finiteIndex()));
    case Shape::FunSpace: {
      auto inner = q.inner(), outer = q.outer();
      std::size_t n = cfg.chainLength;
      bool exact = inner.shape() == Shape::FiniteTable && a.exact() && b.exact();
      return QuantaleValue::errFun(
          [inner, outer, a, b, n, cfg](const SemValue& x, const QuantaleValue& r) {
            std::vector<QuantaleValue> vals;
            for (const auto& c : chainAbove(inner, r, n)) vals.push_back(residual(outer, a.apply(x, c), b.apply(x, c), cfg));
            return meet(outer, vals);
          },
          "(" + a.str() + " -o " + b.str() + ")", exact);
    }
  }
  throw QuantaleShapeError("unknown shape");
}

std::vector<QuantaleValue> chainAbove(const QuantaleDescriptor& q, const QuantaleValue& a, std::size_t n) {
  checkShape(q, a);
  n = std::max<std::size_t>(n, 1);
  switch (q.shape()) {
    case Shape::Lawvere: {
      double x = a.asScalar();
      std::vector<QuantaleValue> out;
      if (std::isinf(x)) {
        for (double v : {kInf, 1e6, 1e4, 1e3, 100.0, 10.0, 1.0, 0.1, 0.0}) out.push_back(QuantaleValue::scalar(v));
        return out;
      }
      for (std::size_t k = 0; k <= n; ++k)
        out.push_back(QuantaleValue::scalar(x * (1.0 - static_cast<double>(k) / static_cast<double>(n))));
      return out;
    }
    case Shape::Product: {
      auto l = chainAbove(q.left(), a.first(), n), r = chainAbove(q.right(), a.second(), n);
      std::size_t m = std::max(l.size(), r.size());
      std::vector<QuantaleValue> out;
      for (std::size_t i = 0; i < m; ++i)
        out.push_back(QuantaleValue::pair(i < l.size() ? l[i] : l.back(), i < r.size() ? r[i] : r.back()));
      return out;
    }
    case Shape::Lifted: {
      std::vector<QuantaleValue> out;
      if (a.isEmptyLift()) {
        out.push_back(a);
        for (auto& c : chainAbove(q.base(), bottom(q.base()), n)) out.push_back(QuantaleValue::lift(c));
      } else {
        for (auto& c : chainAbove(q.base(), a.liftContent(), n)) out.push_back(QuantaleValue::lift(c));
      }
      return out;
    }
    case Shape::FiniteTable: {
      std::vector<QuantaleValue> out{a};
      for (std::size_t j = 0; j < q.table().size(); ++j)
        if (j != a.finiteIndex() && q.table().leq(a.finiteIndex(), j)) out.push_back(QuantaleValue::finite(j));
      return out;
    }
    case Shape::FunSpace: {
      auto outer = q.outer();
      std::vector<QuantaleValue> out{a};
      for (std::size_t k = 1; k <= n; ++k) {
        out.push_back(QuantaleValue::errFun(
            [outer, a, k, n](const SemValue& x, const QuantaleValue& r) {
              auto c = chainAbove(outer, a.apply(x, r), n);
              return c[std::min(k, c.size() - 1)];
            },
            "above" + std::to_string(k) + "(" + a.str() + ")", a.exact()));
      }
      return out;
    }
  }
  throw QuantaleShapeError("unknown shape");
}

std::vector<std::pair<SemValue, QuantaleValue>> funSpaceProbes(const QuantaleDescriptor& q, const SamplerConfig& cfg) {
  const auto& carrier = q.carrier();
  std::vector<SemValue> xs = carrier.points;
  if (xs.empty()) {
    if (!carrier.type) throw QuantaleShapeError("function quantale carrier has neither points nor a type");
    xs = sampleValues(*carrier.type, cfg);
  }
  auto radii = sampleElements(q.inner(), cfg);
  std::vector<std::pair<SemValue, QuantaleValue>> out;
  for (const auto& x : xs)
    for (const auto& r : radii) out.emplace_back(x, r);
  return out;
}

std::vector<QuantaleValue> sampleElements(const QuantaleDescriptor& q, const SamplerConfig& cfg) {
  switch (q.shape()) {
    case Shape::Lawvere: {
      std::vector<QuantaleValue> out;
      for (double r : cfg.radiusChain) out.push_back(QuantaleValue::scalar(r));
      out.push_back(QuantaleValue::scalar(kInf));
      return out;
    }
    case Shape::Product: {
      auto l = sampleElements(q.left(), cfg), r = sampleElements(q.right(), cfg);
      std::vector<QuantaleValue> out;
      if (l.size() * r.size() <= 36) {
        for (const auto& x : l)
          for (const auto& y : r) out.push_back(QuantaleValue::pair(x, y));
      } else {
        std::size_t m = std::max(l.size(), r.size());
        for (std::size_t i = 0; i < m; ++i) out.push_back(QuantaleValue::pair(l[i % l.size()], r[i % r.size()]));
      }
      return out;
    }
    case Shape::Lifted: {
      std::vector<QuantaleValue> out{QuantaleValue::emptyLift()};
      for (auto& v : sampleElements(q.base(), cfg)) out.push_back(QuantaleValue::lift(v));
      return out;
    }
    case Shape::FiniteTable: {
      std::vector<QuantaleValue> out;
      for (std::size_t i = 0; i < q.table().size(); ++i) out.push_back(QuantaleValue::finite(i));
      return out;
    }
    case Shape::FunSpace: {
      std::vector<QuantaleValue> out;
      for (auto& v : sampleElements(q.outer(), cfg))
        out.push_back(QuantaleValue::errFun([v](const SemValue&, const QuantaleValue&) { return v; }, "const(" + v.str() + ")"));
      if (q.inner().shape() == Shape::Lawvere && q.outer().shape() == Shape::Lawvere) {
        // Error functions growing with the radius: (x, a) -> k * a.
        for (double k : {1.0, 2.0}) {
          out.push_back(QuantaleValue::errFun(
              [k](const SemValue&, const QuantaleValue& a) { return QuantaleValue::scalar(k * a.asScalar()); },
              formatReal(k) + "*a"));
        }
      }
      return out;
    }
  }
  throw QuantaleShapeError("unknown shape");
}

}  // namespace qqm
