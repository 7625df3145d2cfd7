#include "lbox/typing.hpp"

#include <sstream>

#include "lbox/printer.hpp"

namespace lbox {

std::string Diagnostic::render() const {
  std::ostringstream os;
  if (span) os << span->line << ":" << span->column << ": ";
  os << "[" << rule << "] " << message;
  return os.str();
}

TypeError::TypeError(Diagnostic d) : std::runtime_error(d.render()), diag_(std::move(d)) {}

// ---------------------------------------------------------------------------

TypingContext::TypingContext(TypeRef return_type) : return_type_(std::move(return_type)) {
  if (!return_type_) throw std::invalid_argument("TypingContext needs a return type");
}

TypingContext& TypingContext::bind_var(const Name& x, TypeRef a) {
  theta_.erase(x);
  gamma_[x] = std::move(a);
  return *this;
}

TypingContext& TypingContext::bind_modal(const Name& x, TypeRef a) {
  gamma_.erase(x);
  theta_[x] = std::move(a);
  return *this;
}

TypingContext& TypingContext::bind_covar(const Name& a, TypeRef t) {
  if (a == toplevel_name()) throw std::invalid_argument("tp cannot be bound");
  delta_[a] = std::move(t);
  return *this;
}

TypeRef TypingContext::lookup_var(const Name& x) const {
  if (auto it = gamma_.find(x); it != gamma_.end()) return it->second;
  if (auto it = theta_.find(x); it != theta_.end()) return it->second;
  return nullptr;
}

TypeRef TypingContext::lookup_covar(const Name& a) const {
  if (a == toplevel_name()) return has_tp_ ? return_type_ : nullptr;
  if (auto it = delta_.find(a); it != delta_.end()) return it->second;
  return nullptr;
}

TypingContext TypingContext::modal_part() const {
  TypingContext out(return_type_);
  out.has_tp_ = false;
  out.theta_ = theta_;
  for (const auto& [x, a] : gamma_)
    if (a->polarity() == Polarity::Modal) out.gamma_[x] = a;
  return out;
}

// ---------------------------------------------------------------------------

namespace {

/// A subterm whose type cannot be synthesised without an expected type.
class NeedsAnnotation : public TypeError {
 public:
  using TypeError::TypeError;
};

[[noreturn]] void fail(std::string rule, std::string message) {
  throw TypeError(Diagnostic{std::move(rule), std::move(message), std::nullopt});
}

std::string show(const TypeRef& t) { return print(*t); }

class Checker {
 public:
  explicit Checker(const CheckOptions& opts) : opts_(opts) {}

  TypeRef value(const TypingContext& ctx, const TermRef& v, const TypeRef& expected) {
    TypeRef t = value_inner(ctx, v, expected);
    if (opts_.on_value) opts_.on_value(v, t, ctx);
    return t;
  }

  // Inside a cut `strict` is off: the cut's own polarity check subsumes it.
  TypeRef expression(const TypingContext& ctx, const TermRef& t, const TypeRef& expected,
                     bool strict = true) {
    if (t->tag() == Tag::MuPos) {
      const Binder& a = t->binder(0);
      agree("Rμ⊞", a.type, expected);
      command(bind_covar(ctx, a), t->body());
      return a.type;
    }
    TypeRef ty = value(ctx, t, expected);
    if (strict && ty->polarity() == Polarity::Neg)
      fail("RV", "value of negative type " + show(ty) + " used as an expression");
    return ty;
  }

  TypeRef covalue(const TypingContext& ctx, const TermRef& s, const TypeRef& expected) {
    switch (s->tag()) {
      case Tag::CoVar: {
        TypeRef t = ctx.lookup_covar(s->name());
        if (!t) fail("LAx", "unbound covariable " + s->name().str());
        agree("LAx", t, expected);
        return t;
      }
      case Tag::Proj1:
      case Tag::Proj2: {
        if (!expected) throw NeedsAnnotation({"L&", "cannot synthesise the type of a projection", {}});
        if (expected->kind() != TypeKind::With)
          fail("L&", "projection checked against " + show(expected));
        const TypeRef& part = s->tag() == Tag::Proj1 ? expected->left() : expected->right();
        covalue(ctx, s->child(0), part);
        return expected;
      }
      case Tag::MuTildeBox: {
        const Binder& x = s->binder(0);
        TypeRef t = Type::box(x.type);
        agree("L□", t, expected);
        TypingContext inner = ctx;
        inner.bind_modal(x.name, x.type);
        command(inner, s->body());
        return t;
      }
      case Tag::NotV: {
        if (expected && expected->kind() != TypeKind::Not)
          fail("L¬", "[V] checked against " + show(expected));
        TypeRef a = value(ctx, s->child(0), expected ? expected->left() : nullptr);
        return expected ? expected : Type::negation(a);
      }
      case Tag::CoPair: {
        if (expected && expected->kind() != TypeKind::Par)
          fail("L⅋", "co-pair checked against " + show(expected));
        TypeRef a = covalue(ctx, s->child(0), expected ? expected->left() : nullptr);
        TypeRef b = covalue(ctx, s->child(1), expected ? expected->right() : nullptr);
        return expected ? expected : Type::par(a, b);
      }
      case Tag::MuTildeUnit: {
        agree("L𝟙", Type::unit(), expected);
        command(ctx, s->body());
        return Type::unit();
      }
      case Tag::MuTildePos: {
        const Binder& x = s->binder(0);
        agree("Lμ̃⊞", x.type, expected);
        command(bind_var(ctx, x), s->body());
        return x.type;
      }
      case Tag::MuTildePair: {
        const Binder& x = s->binder(0);
        const Binder& y = s->binder(1);
        TypeRef t = Type::tensor(x.type, y.type);
        agree("L⊗", t, expected);
        if (x.name == y.name) fail("L⊗", "pattern binds " + x.name.str() + " twice");
        TypingContext inner = bind_var(ctx, x);
        inner.bind_var(y.name, y.type);
        command(inner, s->body());
        return t;
      }
      case Tag::MuTildeMatch: {
        const Binder& x = s->binder(0);
        const Binder& y = s->binder(1);
        TypeRef t = Type::sum(x.type, y.type);
        agree("L⊕", t, expected);
        command(bind_var(ctx, x), s->child(0));
        command(bind_var(ctx, y), s->child(1));
        return t;
      }
      default:
        fail("LS", std::string("not a co-value: ") + std::string(to_string(s->tag())));
    }
  }

  TypeRef environment(const TypingContext& ctx, const TermRef& e, const TypeRef& expected,
                      bool strict = true) {
    if (e->tag() == Tag::MuTildeNeg) {
      const Binder& x = e->binder(0);
      agree("Lμ̃−", x.type, expected);
      command(bind_var(ctx, x), e->body());
      return x.type;
    }
    TypeRef t = covalue(ctx, e, expected);
    if (strict && t->polarity() != Polarity::Neg)
      fail("LS", "co-value of type " + show(t) + " used as a negative environment");
    return t;
  }

  TypeRef command(const TypingContext& ctx, const TermRef& c) {
    if (c->tag() != Tag::Cut) fail("cut", "not a command");
    const Polarity eps = c->cut_polarity();
    const bool boxplus = is_box_plus(eps);
    const std::string rule = boxplus ? "cut⊞" : "cut−";

    auto left = [&](const TypeRef& exp) {
      return boxplus ? expression(ctx, c->left(), exp, false) : value(ctx, c->left(), exp);
    };
    auto right = [&](const TypeRef& exp) {
      return boxplus ? covalue(ctx, c->right(), exp) : environment(ctx, c->right(), exp, false);
    };
    auto polarity_ok = [&](const TypeRef& t) {
      if (t->polarity() != eps)
        fail(rule, "cut polarity mismatch: cut is " + std::string(to_string(eps)) +
                       " but its type " + show(t) + " has polarity " +
                       std::string(to_string(t->polarity())));
    };
    // The other side is synthesised when possible so polarity errors are
    // reported as such rather than as plain type mismatches.
    auto other = [&](auto&& side, const TypeRef& t) {
      TypeRef u;
      try {
        u = side(nullptr);
      } catch (const NeedsAnnotation&) {
        return side(t);
      }
      polarity_ok(u);
      if (!type_equal(t, u))
        fail(rule, "cut type mismatch: " + show(t) + " against " + show(u));
      return u;
    };

    TypeRef t;
    try {
      t = left(nullptr);
    } catch (const NeedsAnnotation&) {
      try {
        t = right(nullptr);
      } catch (const NeedsAnnotation&) {
        fail(rule, "cannot determine cut type; annotate one side");
      }
      polarity_ok(t);
      left(t);
      return t;
    }
    polarity_ok(t);
    other(right, t);
    return t;
  }

 private:
  const CheckOptions& opts_;

  static void agree(const char* rule, const TypeRef& actual, const TypeRef& expected) {
    if (expected && !type_equal(actual, expected))
      fail(rule, "expected " + show(expected) + ", found " + show(actual));
  }

  static TypingContext bind_var(const TypingContext& ctx, const Binder& x) {
    TypingContext inner = ctx;
    inner.bind_var(x.name, x.type);
    return inner;
  }

  static TypingContext bind_covar(const TypingContext& ctx, const Binder& a) {
    if (a.name == toplevel_name()) fail("μ", "tp cannot be bound");
    TypingContext inner = ctx;
    inner.bind_covar(a.name, a.type);
    return inner;
  }

  TypeRef value_inner(const TypingContext& ctx, const TermRef& v, const TypeRef& expected) {
    switch (v->tag()) {
      case Tag::Var: {
        const char* rule = ctx.in_theta(v->name()) ? "□Ax" : "Ax";
        TypeRef t = ctx.lookup_var(v->name());
        if (!t) fail("Ax", "unbound variable " + v->name().str());
        agree(rule, t, expected);
        return t;
      }
      case Tag::Pair: {
        if (expected && expected->kind() != TypeKind::Tensor)
          fail("R⊗", "pair checked against " + show(expected));
        TypeRef a = value(ctx, v->child(0), expected ? expected->left() : nullptr);
        TypeRef b = value(ctx, v->child(1), expected ? expected->right() : nullptr);
        return expected ? expected : Type::tensor(a, b);
      }
      case Tag::BoxV: {
        if (expected && expected->kind() != TypeKind::Box)
          fail("R□", "box checked against " + show(expected));
        if (auto st = modal_restriction(ctx, v->child(0)); !st)
          fail("R□", "modal value captures the stack: " + st.error().message);
        TypeRef a = value(ctx, v->child(0), expected ? expected->left() : nullptr);
        if (opts_.debug) {
          TypeRef pruned = value(ctx.modal_part(), v->child(0), a);
          if (!type_equal(a, pruned)) fail("R□", "pruned-context check disagrees");
        }
        return expected ? expected : Type::box(a);
      }
      case Tag::UnitV:
        agree("R𝟙", Type::unit(), expected);
        return Type::unit();
      case Tag::Inj1:
      case Tag::Inj2: {
        if (!expected) throw NeedsAnnotation({"R⊕", "cannot synthesise the type of an injection", {}});
        if (expected->kind() != TypeKind::Sum)
          fail("R⊕", "injection checked against " + show(expected));
        value(ctx, v->child(0), v->tag() == Tag::Inj1 ? expected->left() : expected->right());
        return expected;
      }
      case Tag::MuNot: {
        const Binder& x = v->binder(0);
        TypeRef t = Type::negation(x.type);
        agree("R¬", t, expected);
        command(bind_var(ctx, x), v->body());
        return t;
      }
      case Tag::MuWith: {
        const Binder& a = v->binder(0);
        const Binder& b = v->binder(1);
        TypeRef t = Type::with(a.type, b.type);
        agree("R&", t, expected);
        command(bind_covar(ctx, a), v->child(0));
        command(bind_covar(ctx, b), v->child(1));
        return t;
      }
      case Tag::MuPar: {
        const Binder& a = v->binder(0);
        const Binder& b = v->binder(1);
        TypeRef t = Type::par(a.type, b.type);
        agree("R⅋", t, expected);
        if (a.name == b.name) fail("R⅋", "pattern binds " + a.name.str() + " twice");
        command(bind_covar(bind_covar(ctx, a), b), v->body());
        return t;
      }
      case Tag::MuNeg: {
        const Binder& a = v->binder(0);
        agree("Rμ−", a.type, expected);
        command(bind_covar(ctx, a), v->body());
        return a.type;
      }
      default:
        fail("RV", std::string("not a value: ") + std::string(to_string(v->tag())));
    }
  }
};

template <class F>
Checked<TypeRef> guarded(F&& f) {
  try {
    return f();
  } catch (const TypeError& e) {
    return e.diagnostic();
  } catch (const std::invalid_argument& e) {
    return Diagnostic{"context", e.what(), std::nullopt};
  }
}

}  // namespace

Checked<TypeRef> check_value(const TypingContext& ctx, const TermRef& v,
                             const TypeRef& expected, const CheckOptions& opts) {
  return guarded([&] { return Checker(opts).value(ctx, v, expected); });
}

Checked<TypeRef> check_expression(const TypingContext& ctx, const TermRef& t,
                                  const TypeRef& expected, const CheckOptions& opts) {
  return guarded([&] { return Checker(opts).expression(ctx, t, expected); });
}

Checked<TypeRef> check_covalue(const TypingContext& ctx, const TermRef& s,
                               const TypeRef& expected, const CheckOptions& opts) {
  return guarded([&] { return Checker(opts).covalue(ctx, s, expected); });
}

Checked<TypeRef> check_environment(const TypingContext& ctx, const TermRef& e,
                                   const TypeRef& expected, const CheckOptions& opts) {
  return guarded([&] { return Checker(opts).environment(ctx, e, expected); });
}

Checked<TypeRef> check_command(const TypingContext& ctx, const TermRef& c,
                               const CheckOptions& opts) {
  return guarded([&] { return Checker(opts).command(ctx, c); });
}

Status modal_restriction(const TypingContext& ctx, const TermRef& v) {
  FreeNames fn = free_names(*v);
  if (!fn.covars.empty())
    return Diagnostic{"R□", "covariable " + fn.covars.begin()->str() + " is free", std::nullopt};
  for (const Name& x : fn.vars) {
    if (ctx.in_theta(x)) continue;
    TypeRef t = ctx.lookup_var(x);
    if (!t) return Diagnostic{"Ax", "unbound variable " + x.str(), std::nullopt};
    if (t->polarity() != Polarity::Modal)
      return Diagnostic{"R□", "variable " + x.str() + " has non-modal type " + show(t),
                        std::nullopt};
  }
  return std::monostate{};
}

TermRef apply_renaming(const Renaming& theta, const TermRef& node) {
  Substitution sigma;
  for (const auto& [x, y] : theta.vars)
    if (x != y) sigma.bind_var(x, term::var(y));
  for (const auto& [a, b] : theta.covars)
    if (a != b) sigma.bind_covar(a, term::covar(b));
  return sigma.empty() ? node : substitute(node, sigma);
}

Checked<TermRef> apply_renaming(const Renaming& theta, const TermRef& node,
                                const TypingContext& from, const TypingContext& to) {
  auto image = [](const std::map<Name, Name>& m, const Name& n) {
    auto it = m.find(n);
    return it == m.end() ? n : it->second;
  };
  auto mismatch = [](const std::string& what) {
    return Diagnostic{"𝔑", "renaming is not type-preserving: " + what, std::nullopt};
  };
  for (const auto& [x, a] : from.gamma()) {
    Name y = image(theta.vars, x);
    auto it = to.gamma().find(y);
    if (it == to.gamma().end() || !type_equal(it->second, a))
      return mismatch(x.str() + " -> " + y.str() + " leaves the ordinary zone or changes type");
  }
  for (const auto& [x, a] : from.theta()) {
    Name y = image(theta.vars, x);
    auto it = to.theta().find(y);
    if (it == to.theta().end() || !type_equal(it->second, a))
      return mismatch(x.str() + " -> " + y.str() + " leaves the modal zone or changes type");
  }
  for (const auto& [a, t] : from.delta()) {
    Name b = image(theta.covars, a);
    TypeRef u = to.lookup_covar(b);
    if (!u || !type_equal(u, t))
      return mismatch(a.str() + " -> " + b.str() + " changes type");
  }
  Name tp_image = image(theta.covars, toplevel_name());
  TypeRef r = to.lookup_covar(tp_image);
  if (!r || !type_equal(r, from.return_type()))
    return mismatch("tp is not mapped to a covariable of type R");
  return apply_renaming(theta, node);
}

}  // namespace lbox
