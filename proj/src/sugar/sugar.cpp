#include "lbox/sugar.hpp"

namespace lbox::sugar {

TypeRef arrow(TypeRef a, TypeRef b) { return Type::par(Type::negation(std::move(a)), std::move(b)); }
TypeRef shift_up(TypeRef a) { return Type::tensor(std::move(a), Type::unit()); }
TypeRef shift_down(TypeRef a) { return Type::par(Type::negation(Type::unit()), std::move(a)); }
TypeRef boolean() { return Type::sum(Type::unit(), Type::unit()); }

namespace {

TypeRef elab(const Arrow& f) { return arrow(f.arg, f.result); }
TypeRef elab(const ShiftUpType& f) { return shift_up(f.inner); }
TypeRef elab(const ShiftDownType& f) { return shift_down(f.inner); }
TypeRef elab(const Bool&) { return boolean(); }

TermRef call_stack(TermRef arg, TermRef stack) {
  return term::copair(term::not_v(std::move(arg)), std::move(stack));
}

TermRef elab(const MuCall& f) {
  Binder alpha{fresh_name("a"), Type::negation(f.param.type)};
  TermRef inner = term::cut(Polarity::Neg, term::mu_not(f.param, f.body), term::covar(alpha.name));
  return term::mu_par(alpha, f.ret, inner);
}

TermRef elab(const Lam& f) {
  Binder beta{fresh_name("b"), f.result};
  TermRef body = term::cut(f.result->polarity(), f.body, term::covar(beta.name));
  return elab(MuCall{f.param, beta, body});
}

TermRef elab(const App& f) {
  Binder beta{fresh_name("b"), f.result};
  if (is_value(*f.arg)) {
    TermRef stack = call_stack(f.arg, term::covar(beta.name));
    return term::mu(beta, term::cut(Polarity::Neg, f.fn, stack));
  }
  // A non-value argument is evaluated first and passed by name.
  Binder y{fresh_name("y"), f.arg_type};
  TermRef call = term::cut(Polarity::Neg, f.fn, call_stack(term::var(y.name), term::covar(beta.name)));
  TermRef bind = term::cut(f.arg_type->polarity(), f.arg, term::mu_tilde(y, call));
  return term::mu(beta, bind);
}

TermRef elab(const CallStack& f) { return call_stack(f.arg, f.stack); }
TermRef elab(const ShiftUpVal& f) { return term::pair(f.value, term::unit()); }

TermRef elab(const ShiftUpMatch& f) {
  return term::mu_tilde_pair(f.var, Binder{fresh_name("u"), Type::unit()}, f.body);
}

TermRef elab(const ShiftDownVal& f) {
  return term::mu_par(Binder{fresh_name("b"), Type::negation(Type::unit())}, f.covar, f.body);
}

TermRef elab(const ShiftDownCoval& f) { return call_stack(term::unit(), f.stack); }
TermRef elab(const True&) { return term::inj(1, term::unit()); }
TermRef elab(const False&) { return term::inj(2, term::unit()); }

TermRef elab(const If& f) {
  Binder alpha{fresh_name("a"), f.result};
  Binder x{fresh_name("x"), Type::unit()};
  Binder y{fresh_name("y"), Type::unit()};
  const Polarity p = f.result->polarity();
  TermRef match =
      term::mu_tilde_match(x, term::cut(p, f.then_branch, term::covar(alpha.name)), y,
                           term::cut(p, f.else_branch, term::covar(alpha.name)));
  return term::mu(alpha, term::cut(boolean()->polarity(), f.cond, match));
}

}  // namespace

TypeRef elaborate(const SurfaceType& form) {
  return std::visit([](const auto& f) { return elab(f); }, form);
}

TermRef elaborate(const SurfaceForm& form) {
  return std::visit([](const auto& f) { return elab(f); }, form);
}

// ---------------------------------------------------------------------------

TypeRef erase_modality(const TypeRef& t) {
  switch (t->kind()) {
    case TypeKind::Unit:
      return t;
    case TypeKind::Box:
      return shift_up(erase_modality(t->left()));
    case TypeKind::Not:
      return Type::negation(erase_modality(t->left()));
    default:
      return std::make_shared<const Type>(t->kind(), erase_modality(t->left()),
                                          erase_modality(t->right()));
  }
}

TypingContext erase_modality(const TypingContext& ctx) {
  TypingContext out(erase_modality(ctx.return_type()));
  for (const auto& [x, a] : ctx.gamma()) out.bind_var(x, erase_modality(a));
  for (const auto& [x, a] : ctx.theta()) out.bind_var(x, erase_modality(a));
  for (const auto& [a, t] : ctx.delta()) out.bind_covar(a, erase_modality(t));
  return out;
}

namespace {

class Eraser {
 public:
  TermRef run(const TermRef& t, const TypingContext& ctx) {
    switch (t->tag()) {
      case Tag::Var:
      case Tag::CoVar:
      case Tag::UnitV:
        return t;
      case Tag::BoxV:
        return term::pair(run(t->child(0), ctx), term::unit());
      case Tag::MuTildeBox: {
        const Binder& x = t->binder(0);
        TypingContext inner = ctx;
        inner.bind_modal(x.name, x.type);
        return term::mu_tilde_pair(erase(x), Binder{fresh_name("u"), Type::unit()},
                                   run(t->body(), inner));
      }
      case Tag::Cut: {
        Polarity p = t->cut_polarity();
        if (p == Polarity::Modal) {
          // Only a modal cut can change polarity: box of a non-modal type
          // becomes positive.
          auto ty = check_command(ctx, t);
          if (!ty) throw TypeError(ty.error());
          p = erase_modality(ty.value())->polarity();
        }
        return term::cut(p, run(t->left(), ctx), run(t->right(), ctx));
      }
      default:
        break;
    }
    if (!has_body(*t)) {
      TermRef c0 = run(t->child(0), ctx);
      TermRef c1 = t->child_count() > 1 ? run(t->child(1), ctx) : nullptr;
      return term::with_children(*t, c0, c1);
    }
    std::array<Binder, 2> bs;
    for (std::size_t i = 0; i < t->binder_count(); ++i) bs[i] = erase(t->binder(i));
    std::array<TermRef, 2> kids;
    for (std::size_t i = 0; i < t->child_count(); ++i) {
      TypingContext inner = ctx;
      auto [lo, hi] = binders_over(*t, i);
      for (std::size_t k = lo; k < hi; ++k) {
        const Binder& b = t->binder(k);
        if (binds_covariables(*t))
          inner.bind_covar(b.name, b.type);
        else
          inner.bind_var(b.name, b.type);
      }
      kids[i] = run(t->child(i), inner);
    }
    return term::with_binders(*t, bs, kids[0], kids[1]);
  }

 private:
  static Binder erase(const Binder& b) { return Binder{b.name, erase_modality(b.type)}; }
};

}  // namespace

TermRef erase_modality(const TermRef& t, const TypingContext& ctx) {
  return Eraser().run(t, ctx);
}

}  // namespace lbox::sugar
