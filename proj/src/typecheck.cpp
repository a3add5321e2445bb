#include "qqm/typecheck.hpp"

namespace qqm {

namespace {

struct Checked {
  SimpleType type;
  Term term;  // elaborated
};

Checked check(const TypingContext& ctx, const Term& t, const PrimitiveTable& prims);

Checked checkLam(const TypingContext& ctx, const Term& t, const SimpleType& binderType, const PrimitiveTable& prims) {
  auto body = check(ctx.extended(t.binder(), binderType), t.body(), prims);
  return {SimpleType::arrow(binderType, body.type), Term::lam(t.binder(), binderType, body.term, t.span())};
}

Checked check(const TypingContext& ctx, const Term& t, const PrimitiveTable& prims) {
  switch (t.kind()) {
    case Term::Kind::Var: {
      auto i = ctx.lookup(t.name());
      if (!i) throw TypeError("unbound variable " + t.name(), t.span());
      return {ctx[*i].type, t};
    }
    case Term::Kind::Const:
      return {SimpleType::real(), t};
    case Term::Kind::PrimApp: {
      const Primitive* p = prims.find(t.prim().name);
      if (!p) throw TypeError("unknown primitive " + t.prim().name, t.span());
      if (t.prim().param && !p->parametric) throw TypeError("primitive " + p->name + " takes no parameter", t.span());
      if (t.args().size() != p->arity)
        throw TypeError("primitive " + p->name + " has arity " + std::to_string(p->arity) + " but is applied to " +
                            std::to_string(t.args().size()) + " arguments",
                        t.span());
      std::vector<Term> args;
      for (const auto& a : t.args()) {
        auto c = check(ctx, a, prims);
        if (!c.type.isReal())
          throw TypeError("primitive argument must be Real, got " + c.type.str(), a.span());
        args.push_back(c.term);
      }
      return {SimpleType::real(), Term::primApp(t.prim(), args, t.span())};
    }
    case Term::Kind::App: {
      const Term& f = t.fn();
      if (f.kind() == Term::Kind::Lam && !f.annot()) {
        auto arg = check(ctx, t.arg(), prims);
        auto lam = checkLam(ctx, f, arg.type, prims);
        return {lam.type.cod(), Term::app(lam.term, arg.term, t.span())};
      }
      auto fc = check(ctx, f, prims);
      if (!fc.type.isArrow()) throw TypeError("application of a non-function of type " + fc.type.str(), t.span());
      auto ac = check(ctx, t.arg(), prims);
      if (ac.type != fc.type.dom())
        throw TypeError("argument has type " + ac.type.str() + " but the function expects " + fc.type.dom().str(),
                        t.arg().span());
      return {fc.type.cod(), Term::app(fc.term, ac.term, t.span())};
    }
    case Term::Kind::Lam:
      if (!t.annot()) throw TypeError("lambda binder " + t.binder() + " needs a type annotation", t.span());
      return checkLam(ctx, t, *t.annot(), prims);
    case Term::Kind::Pair: {
      auto l = check(ctx, t.left(), prims), r = check(ctx, t.right(), prims);
      return {SimpleType::prod(l.type, r.type), Term::pair(l.term, r.term, t.span())};
    }
    case Term::Kind::Fst:
    case Term::Kind::Snd: {
      auto c = check(ctx, t.operand(), prims);
      if (!c.type.isProd()) throw TypeError("projection of a non-product of type " + c.type.str(), t.span());
      bool first = t.kind() == Term::Kind::Fst;
      return {first ? c.type.left() : c.type.right(),
              first ? Term::fst(c.term, t.span()) : Term::snd(c.term, t.span())};
    }
  }
  throw TypeError("unknown term", t.span());
}

}  // namespace

SimpleType typecheck(const TypingContext& ctx, const Term& t, const PrimitiveTable& prims) {
  return check(ctx, t, prims).type;
}

Term elaborate(const TypingContext& ctx, const Term& t, const PrimitiveTable& prims) {
  return check(ctx, t, prims).term;
}

}  // namespace qqm
