#include "enumerate.hpp"

#include <algorithm>
#include <functional>

#include "lbox/harness.hpp"

namespace lbox::harness {

const std::vector<TypeRef>& type_universe() {
  static const std::vector<TypeRef> u = [] {
    TypeRef one = Type::unit();
    return std::vector<TypeRef>{
        one,
        Type::sum(one, one),
        Type::box(one),
        Type::negation(one),
        Type::with(one, one),
        Type::par(Type::negation(one), one),
        Type::tensor(one, one),
    };
  }();
  return u;
}

const std::vector<TypeRef>& return_types() {
  static const std::vector<TypeRef> r(type_universe().begin(), type_universe().begin() + 3);
  return r;
}

std::size_t term_depth(const Term& t) {
  std::size_t d = 0;
  for (std::size_t i = 0; i < t.child_count(); ++i)
    d = std::max(d, term_depth(*t.child(i)) + 1);
  return d;
}

namespace detail {

namespace {

// Positions in type_universe().
enum : TypeIx { kUnit, kSum, kBox, kNot, kWith, kPar, kTensor };

Name var_name(std::size_t n) { return Name("x" + std::to_string(n)); }
Name covar_name(std::size_t n) { return Name("a" + std::to_string(n)); }

Polarity pol(TypeIx t) { return type_at(t)->polarity(); }

}  // namespace

GenContext GenContext::bind(Zone z, TypeIx t, const Name& n) const {
  GenContext out = *this;
  out.entries.push_back(Entry{n, z, t});
  return out;
}

GenContext GenContext::modal_part() const {
  GenContext out;
  out.has_tp = false;
  for (const Entry& e : entries) {
    if (e.zone == Zone::Co) continue;
    if (e.zone == Zone::Ordinary && pol(e.type) != Polarity::Modal) continue;
    out.entries.push_back(e);
  }
  return out;
}

std::string GenContext::key() const {
  std::string k = has_tp ? "T" : "_";
  for (const Entry& e : entries) {
    k += e.name.str();
    k += static_cast<char>('0' + static_cast<int>(e.zone));
    k += static_cast<char>('0' + e.type);
    k += ',';
  }
  return k;
}

TypeIx type_index(const TypeRef& t) {
  const auto& u = type_universe();
  for (std::size_t i = 0; i < u.size(); ++i)
    if (type_equal(u[i], t)) return static_cast<TypeIx>(i);
  return no_type;
}

const TypeRef& type_at(TypeIx i) { return type_universe().at(static_cast<std::size_t>(i)); }

Enumerator::Enumerator(TypeRef return_type) : ret_(type_index(return_type)) {
  if (ret_ == no_type) throw std::invalid_argument("return type outside the type universe");
}

const std::vector<TermRef>& Enumerator::exact(Cls cls, TypeIx t, const GenContext& ctx,
                                              std::size_t d) {
  std::string k = std::to_string(static_cast<int>(cls)) + ':' + std::to_string(t) + ':' +
                  std::to_string(d) + ':' + ctx.key();
  auto it = memo_.find(k);
  if (it != memo_.end()) return it->second;
  std::vector<TermRef> built = build(cls, t, ctx, d);
  return memo_.emplace(std::move(k), std::move(built)).first->second;
}

std::vector<TermRef> Enumerator::up_to(Cls cls, TypeIx t, const GenContext& ctx, std::size_t d) {
  std::vector<TermRef> out;
  for (std::size_t i = 0; i <= d; ++i) {
    const auto& layer = exact(cls, t, ctx, i);
    out.insert(out.end(), layer.begin(), layer.end());
  }
  return out;
}

template <class L, class R, class F>
void Enumerator::pairs(std::size_t d, L left, R right, F emit) {
  if (d == 0) return;
  for (std::size_t dl = 0; dl < d; ++dl)
    for (std::size_t dr = 0; dr < d; ++dr) {
      if (std::max(dl, dr) != d - 1) continue;
      const std::vector<TermRef> ls = left(dl);
      if (ls.empty()) continue;
      const std::vector<TermRef> rs = right(dr);
      for (const TermRef& l : ls)
        for (const TermRef& r : rs) emit(l, r);
    }
}

std::vector<TermRef> Enumerator::build(Cls cls, TypeIx t, const GenContext& ctx, std::size_t d) {
  switch (cls) {
    case Cls::Value:
      return values(t, ctx, d);
    case Cls::CoValue:
      return covalues(t, ctx, d);
    case Cls::Command:
      return commands(ctx, d);
    case Cls::Expression: {
      std::vector<TermRef> out = exact(Cls::Value, t, ctx, d);
      if (pol(t) == Polarity::Neg || d == 0) return out;
      Name a = covar_name(ctx.size());
      for (const TermRef& c : exact(Cls::Command, no_type, ctx.bind(Zone::Co, t, a), d - 1))
        out.push_back(term::mu(Binder{a, type_at(t)}, c));
      return out;
    }
    case Cls::Environment: {
      std::vector<TermRef> out = exact(Cls::CoValue, t, ctx, d);
      if (pol(t) != Polarity::Neg || d == 0) return out;
      Name x = var_name(ctx.size());
      for (const TermRef& c : exact(Cls::Command, no_type, ctx.bind(Zone::Ordinary, t, x), d - 1))
        out.push_back(term::mu_tilde(Binder{x, type_at(t)}, c));
      return out;
    }
  }
  return {};
}

std::vector<TermRef> Enumerator::values(TypeIx t, const GenContext& ctx, std::size_t d) {
  std::vector<TermRef> out;
  const TypeRef& one = type_at(kUnit);
  if (d == 0) {
    for (const Entry& e : ctx.entries)
      if (e.zone != Zone::Co && e.type == t) out.push_back(term::var(e.name));
    if (t == kUnit) out.push_back(term::unit());
    return out;
  }
  auto cmds = [&](const GenContext& inner) -> const std::vector<TermRef>& {
    return exact(Cls::Command, no_type, inner, d - 1);
  };
  const std::size_t n = ctx.size();
  switch (t) {
    case kUnit:
      break;
    case kTensor:
      pairs(
          d, [&](std::size_t i) { return exact(Cls::Value, kUnit, ctx, i); },
          [&](std::size_t i) { return exact(Cls::Value, kUnit, ctx, i); },
          [&](const TermRef& l, const TermRef& r) { out.push_back(term::pair(l, r)); });
      break;
    case kSum:
      for (int i = 1; i <= 2; ++i)
        for (const TermRef& v : exact(Cls::Value, kUnit, ctx, d - 1))
          out.push_back(term::inj(i, v));
      break;
    case kBox:
      for (const TermRef& v : exact(Cls::Value, kUnit, ctx.modal_part(), d - 1))
        out.push_back(term::box(v));
      break;
    case kNot: {
      Name x = var_name(n);
      for (const TermRef& c : cmds(ctx.bind(Zone::Ordinary, kUnit, x)))
        out.push_back(term::mu_not(Binder{x, one}, c));
      break;
    }
    case kWith: {
      Name a = covar_name(n);
      GenContext inner = ctx.bind(Zone::Co, kUnit, a);
      pairs(
          d, [&](std::size_t i) { return exact(Cls::Command, no_type, inner, i); },
          [&](std::size_t i) { return exact(Cls::Command, no_type, inner, i); },
          [&](const TermRef& c1, const TermRef& c2) {
            out.push_back(term::mu_with(Binder{a, one}, c1, Binder{a, one}, c2));
          });
      break;
    }
    case kPar: {
      Name a = covar_name(n);
      Name b = covar_name(n + 1);
      for (const TermRef& c : cmds(ctx.bind(Zone::Co, kNot, a).bind(Zone::Co, kUnit, b)))
        out.push_back(term::mu_par(Binder{a, type_at(kNot)}, Binder{b, one}, c));
      break;
    }
    default:
      break;
  }
  if (pol(t) == Polarity::Neg) {
    Name a = covar_name(n);
    for (const TermRef& c : cmds(ctx.bind(Zone::Co, t, a)))
      out.push_back(term::mu(Binder{a, type_at(t)}, c));
  }
  return out;
}

std::vector<TermRef> Enumerator::covalues(TypeIx t, const GenContext& ctx, std::size_t d) {
  std::vector<TermRef> out;
  const TypeRef& one = type_at(kUnit);
  if (d == 0) {
    for (const Entry& e : ctx.entries)
      if (e.zone == Zone::Co && e.type == t) out.push_back(term::covar(e.name));
    if (ctx.has_tp && t == ret_) out.push_back(term::covar(toplevel_name()));
    return out;
  }
  auto cmds = [&](const GenContext& inner) -> const std::vector<TermRef>& {
    return exact(Cls::Command, no_type, inner, d - 1);
  };
  const std::size_t n = ctx.size();
  const Name x = var_name(n);
  switch (t) {
    case kUnit:
      for (const TermRef& c : cmds(ctx)) out.push_back(term::mu_tilde_unit(c));
      break;
    case kTensor: {
      Name y = var_name(n + 1);
      for (const TermRef& c : cmds(ctx.bind(Zone::Ordinary, kUnit, x).bind(Zone::Ordinary, kUnit, y)))
        out.push_back(term::mu_tilde_pair(Binder{x, one}, Binder{y, one}, c));
      break;
    }
    case kSum: {
      GenContext inner = ctx.bind(Zone::Ordinary, kUnit, x);
      pairs(
          d, [&](std::size_t i) { return exact(Cls::Command, no_type, inner, i); },
          [&](std::size_t i) { return exact(Cls::Command, no_type, inner, i); },
          [&](const TermRef& c1, const TermRef& c2) {
            out.push_back(term::mu_tilde_match(Binder{x, one}, c1, Binder{x, one}, c2));
          });
      break;
    }
    case kBox:
      for (const TermRef& c : cmds(ctx.bind(Zone::Modal, kUnit, x)))
        out.push_back(term::mu_tilde_box(Binder{x, one}, c));
      break;
    case kNot:
      for (const TermRef& v : exact(Cls::Value, kUnit, ctx, d - 1)) out.push_back(term::not_v(v));
      break;
    case kWith:
      for (int i = 1; i <= 2; ++i)
        for (const TermRef& s : exact(Cls::CoValue, kUnit, ctx, d - 1))
          out.push_back(term::proj(i, s));
      break;
    case kPar:
      pairs(
          d, [&](std::size_t i) { return exact(Cls::CoValue, kNot, ctx, i); },
          [&](std::size_t i) { return exact(Cls::CoValue, kUnit, ctx, i); },
          [&](const TermRef& l, const TermRef& r) { out.push_back(term::copair(l, r)); });
      break;
    default:
      break;
  }
  if (pol(t) != Polarity::Neg)
    for (const TermRef& c : cmds(ctx.bind(Zone::Ordinary, t, x)))
      out.push_back(term::mu_tilde(Binder{x, type_at(t)}, c));
  return out;
}

std::vector<TermRef> Enumerator::commands(const GenContext& ctx, std::size_t d) {
  std::vector<TermRef> out;
  const TypeIx count = static_cast<TypeIx>(type_universe().size());
  for (TypeIx t = 0; t < count; ++t) {
    const Polarity p = pol(t);
    const Cls lc = p == Polarity::Neg ? Cls::Value : Cls::Expression;
    const Cls rc = p == Polarity::Neg ? Cls::Environment : Cls::CoValue;
    pairs(
        d, [&](std::size_t i) { return exact(lc, t, ctx, i); },
        [&](std::size_t i) { return exact(rc, t, ctx, i); },
        [&](const TermRef& l, const TermRef& r) { out.push_back(term::cut(p, l, r)); });
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

template <class T>
const T& pick(std::mt19937_64& rng, const std::vector<T>& xs) {
  return xs[std::uniform_int_distribution<std::size_t>(0, xs.size() - 1)(rng)];
}

std::size_t below(std::mt19937_64& rng, std::size_t d) {
  return std::uniform_int_distribution<std::size_t>(0, d - 1)(rng);
}

}  // namespace

TermRef random_term(std::mt19937_64& rng, Cls cls, TypeIx t, const GenContext& ctx,
                    std::size_t d, TypeIx ret) {
  const TypeRef& one = type_at(kUnit);
  const std::size_t n = ctx.size();
  const Name x = var_name(n), y = var_name(n + 1);
  const Name a = covar_name(n), b = covar_name(n + 1);
  // Each shape builds one candidate from children drawn with depth < d.
  std::vector<std::function<TermRef()>> shapes;
  std::size_t leaf_count = 0;
  // Children use the full remaining depth half of the time.
  auto sub = [&](Cls c, TypeIx ty, const GenContext& g) {
    const std::size_t cd = d == 0 ? 0 : below(rng, 2) == 0 ? d - 1 : below(rng, d);
    return random_term(rng, c, ty, g, cd, ret);
  };
  auto body = [&](const GenContext& g) { return sub(Cls::Command, no_type, g); };
  auto all = [](std::initializer_list<TermRef> ts) {
    return std::all_of(ts.begin(), ts.end(), [](const TermRef& p) { return p != nullptr; });
  };

  switch (cls) {
    case Cls::Command: {
      if (d == 0) return nullptr;
      for (int attempt = 0; attempt < 8; ++attempt) {
        TypeIx ty = static_cast<TypeIx>(below(rng, type_universe().size()));
        const Polarity p = pol(ty);
        TermRef l = sub(p == Polarity::Neg ? Cls::Value : Cls::Expression, ty, ctx);
        if (!l) continue;
        TermRef r = sub(p == Polarity::Neg ? Cls::Environment : Cls::CoValue, ty, ctx);
        if (r) return term::cut(p, l, r);
      }
      return nullptr;
    }
    case Cls::Expression:
    case Cls::Value: {
      for (const Entry& e : ctx.entries)
        if (e.zone != Zone::Co && e.type == t) shapes.push_back([e] { return term::var(e.name); });
      if (t == kUnit) shapes.push_back([] { return term::unit(); });
      leaf_count = shapes.size();
      if (d > 0) {
        switch (t) {
          case kTensor:
            shapes.push_back([&] {
              TermRef l = sub(Cls::Value, kUnit, ctx), r = sub(Cls::Value, kUnit, ctx);
              return all({l, r}) ? term::pair(l, r) : nullptr;
            });
            break;
          case kSum:
            shapes.push_back([&] {
              TermRef v = sub(Cls::Value, kUnit, ctx);
              return v ? term::inj(static_cast<int>(below(rng, 2)) + 1, v) : nullptr;
            });
            break;
          case kBox:
            shapes.push_back([&] {
              TermRef v = sub(Cls::Value, kUnit, ctx.modal_part());
              return v ? term::box(v) : nullptr;
            });
            break;
          case kNot:
            shapes.push_back([&] {
              TermRef c = body(ctx.bind(Zone::Ordinary, kUnit, x));
              return c ? term::mu_not(Binder{x, one}, c) : nullptr;
            });
            break;
          case kWith:
            shapes.push_back([&] {
              GenContext g = ctx.bind(Zone::Co, kUnit, a);
              TermRef c1 = body(g), c2 = body(g);
              return all({c1, c2}) ? term::mu_with(Binder{a, one}, c1, Binder{a, one}, c2) : nullptr;
            });
            break;
          case kPar:
            shapes.push_back([&] {
              TermRef c = body(ctx.bind(Zone::Co, kNot, a).bind(Zone::Co, kUnit, b));
              return c ? term::mu_par(Binder{a, type_at(kNot)}, Binder{b, one}, c) : nullptr;
            });
            break;
          default:
            break;
        }
        if (pol(t) == Polarity::Neg || cls == Cls::Expression)
          shapes.push_back([&] {
            TermRef c = body(ctx.bind(Zone::Co, t, a));
            return c ? term::mu(Binder{a, type_at(t)}, c) : nullptr;
          });
      }
      break;
    }
    case Cls::Environment:
    case Cls::CoValue: {
      for (const Entry& e : ctx.entries)
        if (e.zone == Zone::Co && e.type == t) shapes.push_back([e] { return term::covar(e.name); });
      if (ctx.has_tp && t == ret) shapes.push_back([] { return term::covar(toplevel_name()); });
      leaf_count = shapes.size();
      if (d > 0) {
        switch (t) {
          case kUnit:
            shapes.push_back([&] {
              TermRef c = body(ctx);
              return c ? term::mu_tilde_unit(c) : nullptr;
            });
            break;
          case kTensor:
            shapes.push_back([&] {
              TermRef c = body(ctx.bind(Zone::Ordinary, kUnit, x).bind(Zone::Ordinary, kUnit, y));
              return c ? term::mu_tilde_pair(Binder{x, one}, Binder{y, one}, c) : nullptr;
            });
            break;
          case kSum:
            shapes.push_back([&] {
              GenContext g = ctx.bind(Zone::Ordinary, kUnit, x);
              TermRef c1 = body(g), c2 = body(g);
              return all({c1, c2}) ? term::mu_tilde_match(Binder{x, one}, c1, Binder{x, one}, c2)
                                   : nullptr;
            });
            break;
          case kBox:
            shapes.push_back([&] {
              TermRef c = body(ctx.bind(Zone::Modal, kUnit, x));
              return c ? term::mu_tilde_box(Binder{x, one}, c) : nullptr;
            });
            break;
          case kNot:
            shapes.push_back([&] {
              TermRef v = sub(Cls::Value, kUnit, ctx);
              return v ? term::not_v(v) : nullptr;
            });
            break;
          case kWith:
            shapes.push_back([&] {
              TermRef s = sub(Cls::CoValue, kUnit, ctx);
              return s ? term::proj(static_cast<int>(below(rng, 2)) + 1, s) : nullptr;
            });
            break;
          case kPar:
            shapes.push_back([&] {
              TermRef l = sub(Cls::CoValue, kNot, ctx), r = sub(Cls::CoValue, kUnit, ctx);
              return all({l, r}) ? term::copair(l, r) : nullptr;
            });
            break;
          default:
            break;
        }
        if (pol(t) != Polarity::Neg || cls == Cls::Environment)
          shapes.push_back([&] {
            TermRef c = body(ctx.bind(Zone::Ordinary, t, x));
            return c ? term::mu_tilde(Binder{x, type_at(t)}, c) : nullptr;
          });
      }
      break;
    }
  }
  if (shapes.empty()) return nullptr;
  // Leaves come first in `shapes`; favour the larger shapes while depth remains.
  // A few local retries, since a shape may have no inhabitant at this depth.
  const std::size_t leaves = leaf_count;
  for (int attempt = 0; attempt < 4; ++attempt) {
    const bool large = d > 0 && leaves < shapes.size() && (leaves == 0 || below(rng, 4) != 0);
    TermRef t = large ? shapes[leaves + below(rng, shapes.size() - leaves)]() : pick(rng, shapes)();
    if (t) return t;
  }
  return nullptr;
}

}  // namespace detail

std::vector<TermRef> enumerate_commands(std::size_t depth, const TypeRef& R) {
  detail::Enumerator gen(R);
  detail::GenContext top;
  TypingContext ctx(R);
  std::vector<TermRef> out;
  for (std::size_t d = 1; d <= depth; ++d) {
    std::vector<TermRef> layer;
    for (const TermRef& c : gen.exact(detail::Cls::Command, detail::no_type, top, d))
      if (check_command(ctx, c).ok()) layer.push_back(c);
    std::stable_sort(layer.begin(), layer.end(), [](const TermRef& a, const TermRef& b) {
      return term_size(*a) < term_size(*b);
    });
    out.insert(out.end(), layer.begin(), layer.end());
  }
  return out;
}

TermRef random_command(std::uint64_t seed, std::size_t depth, const TypeRef& R) {
  std::mt19937_64 rng(seed);
  const detail::TypeIx ret = detail::type_index(R);
  if (ret == detail::no_type) throw std::invalid_argument("return type outside the type universe");
  TypingContext ctx(R);
  // Rejection sampling; almost every draw of depth >= 2 succeeds.
  for (int attempt = 0; attempt < 10000; ++attempt) {
    TermRef c = detail::random_term(rng, detail::Cls::Command, detail::no_type,
                                    detail::GenContext{}, depth, ret);
    if (c && check_command(ctx, c).ok()) return c;
  }
  return nullptr;
}

}  // namespace lbox::harness
