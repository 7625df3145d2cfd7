#include "hints.hpp"

namespace lbox::detail {

const TypeRef* HintScope::find(const Entries& es, const Name& n) {
  for (auto it = es.rbegin(); it != es.rend(); ++it)
    if (it->first == n) return &it->second;
  return nullptr;
}

Hint HintScope::var(const Name& x) const {
  const TypeRef* t = find(vars_, x);
  return t ? Hint::of(*t) : Hint{};
}

Hint HintScope::covar(const Name& a) const {
  if (const TypeRef* t = find(covars_, a)) return Hint::of(*t);
  if (a == toplevel_name()) return Hint::of(return_type_);
  return Hint{};
}

Hint pair_hint(const Hint& a, const Hint& b) {
  if (a.type && b.type) return Hint::of(Type::tensor(a.type, b.type));
  if (a.pol && b.pol) return Hint::polarity(odot(*a.pol, *b.pol));
  if ((a.pol && *a.pol != Polarity::Modal) || (b.pol && *b.pol != Polarity::Modal))
    return Hint::polarity(Polarity::Pos);
  return Hint{};
}

Hint box_hint(const Hint& a) {
  return a.type ? Hint::of(Type::box(a.type)) : Hint::polarity(Polarity::Modal);
}

Hint inj_hint(const Hint& a) {
  if (a.pol && *a.pol != Polarity::Modal) return Hint::polarity(Polarity::Pos);
  return Hint{};
}

Hint not_hint(const Hint& a) {
  return a.type ? Hint::of(Type::negation(a.type)) : Hint::polarity(Polarity::Neg);
}

Hint copair_hint(const Hint& a, const Hint& b) {
  return a.type && b.type ? Hint::of(Type::par(a.type, b.type)) : Hint::polarity(Polarity::Neg);
}

Hint binder_hint(const Term& t) {
  switch (t.tag()) {
    case Tag::MuNot:
      return Hint::of(Type::negation(t.binder(0).type));
    case Tag::MuWith:
      return Hint::of(Type::with(t.binder(0).type, t.binder(1).type));
    case Tag::MuPar:
      return Hint::of(Type::par(t.binder(0).type, t.binder(1).type));
    case Tag::MuNeg:
    case Tag::MuPos:
    case Tag::MuTildePos:
    case Tag::MuTildeNeg:
      return Hint::of(t.binder(0).type);
    case Tag::MuTildeBox:
      return Hint::of(Type::box(t.binder(0).type));
    case Tag::MuTildeUnit:
      return Hint::of(Type::unit());
    case Tag::MuTildePair:
      return Hint::of(Type::tensor(t.binder(0).type, t.binder(1).type));
    case Tag::MuTildeMatch:
      return Hint::of(Type::sum(t.binder(0).type, t.binder(1).type));
    default:
      return Hint{};
  }
}

std::optional<Polarity> infer_cut_polarity(const Hint& left, const Hint& right) {
  return right.pol ? right.pol : left.pol;
}

Hint core_hint(const Term& t, const HintScope& scope) {
  switch (t.tag()) {
    case Tag::Var:
      return scope.var(t.name());
    case Tag::CoVar:
      return scope.covar(t.name());
    case Tag::Pair:
      return pair_hint(core_hint(*t.child(0), scope), core_hint(*t.child(1), scope));
    case Tag::BoxV:
      return box_hint(core_hint(*t.child(0), scope));
    case Tag::UnitV:
      return Hint::of(Type::unit());
    case Tag::Inj1:
    case Tag::Inj2:
      return inj_hint(core_hint(*t.child(0), scope));
    case Tag::Proj1:
    case Tag::Proj2:
      return Hint::polarity(Polarity::Neg);
    case Tag::NotV:
      return not_hint(core_hint(*t.child(0), scope));
    case Tag::CoPair:
      return copair_hint(core_hint(*t.child(0), scope), core_hint(*t.child(1), scope));
    case Tag::Cut:
      return Hint{};
    default:
      return binder_hint(t);
  }
}

}  // namespace lbox::detail
