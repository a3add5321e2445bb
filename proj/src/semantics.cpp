#include "qqm/semantics.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace qqm {

std::string toString(ModulusMode mode) { return mode == ModulusMode::Analytic ? "Analytic" : "GridOracle"; }

QuantaleDescriptor quantaleOfType(const SimpleType& type) {
  switch (type.kind()) {
    case SimpleType::Kind::Real:
      return QuantaleDescriptor::lawvere();
    case SimpleType::Kind::Prod:
      return QuantaleDescriptor::product(quantaleOfType(type.left()), quantaleOfType(type.right()));
    case SimpleType::Kind::Arrow:
      return QuantaleDescriptor::funSpace(CarrierDescriptor{type.dom(), {}}, quantaleOfType(type.dom()),
                                          quantaleOfType(type.cod()));
  }
  throw std::logic_error("unknown type");
}

double primModulus(const PrimitiveTable& prims, const PrimRef& ref, std::span<const double> xs,
                   std::span<const double> radii, const ModulusOptions& opts) {
  const Primitive& p = prims.at(ref.name);
  if (xs.size() != p.arity || radii.size() != p.arity)
    throw std::invalid_argument("modulus of " + ref.name + " needs " + std::to_string(p.arity) + " points and radii");
  double param = prims.paramOf(ref);
  if (opts.mode == ModulusMode::Analytic) {
    if (!p.modulus) {
      if (opts.strict) throw MissingModulus("primitive " + ref.name + " has no analytic modulus");
      return kInf;
    }
    return p.modulus(param, xs, radii);
  }
  // Grid oracle: every point of the product grid lies in the box, so the
  // result never exceeds the true supremum.
  const std::size_t n = p.arity;
  const std::size_t r = std::max<std::size_t>(opts.resolution, 2);
  double center = p.eval(param, xs);
  std::vector<double> ys(xs.begin(), xs.end());
  std::vector<std::size_t> idx(n, 0);
  double best = 0.0;
  while (true) {
    for (std::size_t i = 0; i < n; ++i) {
      double a = std::isinf(radii[i]) ? opts.infiniteReach : radii[i];
      double t = -1.0 + 2.0 * static_cast<double>(idx[i]) / static_cast<double>(r - 1);
      ys[i] = xs[i] + a * t;
    }
    double v = std::fabs(center - p.eval(param, ys));
    if (!std::isnan(v)) best = std::max(best, v);
    std::size_t k = 0;
    while (k < n && ++idx[k] == r) idx[k++] = 0;
    if (k == n) break;
  }
  return best;
}

namespace {

struct EnvNode {
  std::string name;
  SemValue value;
  std::optional<QuantaleValue> deriv;
  std::shared_ptr<const EnvNode> next;
};
using Env = std::shared_ptr<const EnvNode>;

Env extend(Env env, std::string name, SemValue v, std::optional<QuantaleValue> d) {
  return std::make_shared<const EnvNode>(EnvNode{std::move(name), std::move(v), std::move(d), std::move(env)});
}

const EnvNode& lookup(const Env& env, const std::string& name) {
  for (const EnvNode* n = env.get(); n; n = n->next.get())
    if (n->name == name) return *n;
  throw std::invalid_argument("unbound variable at evaluation: " + name);
}

Env buildEnv(const TypingContext& ctx, const Environment& gamma, const ErrEnvironment* xi) {
  if (gamma.size() != ctx.size()) throw std::invalid_argument("environment length does not match the context");
  if (xi && xi->size() != ctx.size()) throw std::invalid_argument("error environment length does not match the context");
  Env env;
  for (std::size_t i = 0; i < ctx.size(); ++i)
    env = extend(env, ctx[i].name, gamma[i], xi ? std::optional<QuantaleValue>((*xi)[i]) : std::nullopt);
  return env;
}

struct Engine {
  std::shared_ptr<const PrimitiveTable> prims;
  ModulusOptions opts;

  SemValue eval(const Term& t, const Env& env) const {
    switch (t.kind()) {
      case Term::Kind::Var:
        return lookup(env, t.name()).value;
      case Term::Kind::Const:
        return SemValue::real(t.value());
      case Term::Kind::PrimApp: {
        std::vector<double> xs;
        for (const auto& a : t.args()) xs.push_back(eval(a, env).asReal());
        return SemValue::real(prims->evaluate(t.prim(), xs));
      }
      case Term::Kind::App:
        return eval(t.fn(), env).apply(eval(t.arg(), env));
      case Term::Kind::Lam: {
        Engine self = *this;
        Term body = t.body();
        std::string x = t.binder();
        return SemValue::function([self, body, x, env](const SemValue& v) { return self.eval(body, extend(env, x, v, std::nullopt)); },
                                  "\\" + x + ". ...");
      }
      case Term::Kind::Pair:
        return SemValue::pair(eval(t.left(), env), eval(t.right(), env));
      case Term::Kind::Fst:
        return eval(t.operand(), env).first();
      case Term::Kind::Snd:
        return eval(t.operand(), env).second();
    }
    throw std::logic_error("unknown term");
  }

  QuantaleValue derive(const Term& t, const Env& env) const {
    switch (t.kind()) {
      case Term::Kind::Var: {
        const auto& n = lookup(env, t.name());
        if (!n.deriv) throw std::invalid_argument("no error entry for variable " + t.name());
        return *n.deriv;
      }
      case Term::Kind::Const:
        return QuantaleValue::scalar(0.0);
      case Term::Kind::PrimApp: {
        std::vector<double> xs, as;
        for (const auto& a : t.args()) {
          xs.push_back(eval(a, env).asReal());
          as.push_back(derive(a, env).asScalar());
        }
        return QuantaleValue::scalar(primModulus(*prims, t.prim(), xs, as, opts));
      }
      case Term::Kind::App: {
        auto d = derive(t.fn(), env);
        return d.apply(eval(t.arg(), env), derive(t.arg(), env));
      }
      case Term::Kind::Lam: {
        Engine self = *this;
        Term body = t.body();
        std::string x = t.binder();
        return QuantaleValue::errFun(
            [self, body, x, env](const SemValue& v, const QuantaleValue& a) { return self.derive(body, extend(env, x, v, a)); },
            "d(\\" + x + ". ...)", opts.mode == ModulusMode::Analytic);
      }
      case Term::Kind::Pair:
        return QuantaleValue::pair(derive(t.left(), env), derive(t.right(), env));
      case Term::Kind::Fst:
        return derive(t.operand(), env).first();
      case Term::Kind::Snd:
        return derive(t.operand(), env).second();
    }
    throw std::logic_error("unknown term");
  }
};

}  // namespace

Semantics::Semantics(PrimitiveTable prims, ModulusOptions opts)
    : prims_(std::make_shared<const PrimitiveTable>(std::move(prims))), opts_(opts) {}

SemValue Semantics::eval(const TypingContext& ctx, const Term& t, const Environment& gamma) const {
  return Engine{prims_, opts_}.eval(t, buildEnv(ctx, gamma, nullptr));
}

QuantaleValue Semantics::derive(const TypingContext& ctx, const Term& t, const Environment& gamma,
                                const ErrEnvironment& xi) const {
  return Engine{prims_, opts_}.derive(t, buildEnv(ctx, gamma, &xi));
}

}  // namespace qqm
