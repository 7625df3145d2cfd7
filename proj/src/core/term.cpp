#include "lbox/core.hpp"

namespace lbox {

std::string_view to_string(Tag t) {
  switch (t) {
    case Tag::Var: return "Var";
    case Tag::Pair: return "Pair";
    case Tag::BoxV: return "BoxV";
    case Tag::UnitV: return "UnitV";
    case Tag::Inj1: return "Inj1";
    case Tag::Inj2: return "Inj2";
    case Tag::MuNot: return "MuNot";
    case Tag::MuWith: return "MuWith";
    case Tag::MuPar: return "MuPar";
    case Tag::MuNeg: return "MuNeg";
    case Tag::CoVar: return "CoVar";
    case Tag::Proj1: return "Proj1";
    case Tag::Proj2: return "Proj2";
    case Tag::MuTildeBox: return "MuTildeBox";
    case Tag::NotV: return "NotV";
    case Tag::CoPair: return "CoPair";
    case Tag::MuTildeUnit: return "MuTildeUnit";
    case Tag::MuTildePos: return "MuTildePos";
    case Tag::MuTildePair: return "MuTildePair";
    case Tag::MuTildeMatch: return "MuTildeMatch";
    case Tag::MuPos: return "MuPos";
    case Tag::MuTildeNeg: return "MuTildeNeg";
    case Tag::Cut: return "Cut";
  }
  return "?";
}

Term::Term(Tag tag, Name name, std::array<Binder, 2> binders, std::size_t nbinders,
           std::array<TermRef, 2> children, std::size_t nchildren, Polarity polarity)
    : tag_(tag),
      nbinders_(static_cast<std::uint8_t>(nbinders)),
      nchildren_(static_cast<std::uint8_t>(nchildren)),
      polarity_(polarity),
      name_(std::move(name)),
      binders_(std::move(binders)),
      children_(std::move(children)) {}

ClassSet classify(const Term& t) {
  using SC = SyntaxClass;
  switch (t.tag()) {
    case Tag::Var:
    case Tag::Pair:
    case Tag::BoxV:
    case Tag::UnitV:
    case Tag::Inj1:
    case Tag::Inj2:
    case Tag::MuNot:
    case Tag::MuWith:
    case Tag::MuPar:
    case Tag::MuNeg:
      return ClassSet().with(SC::Value).with(SC::Expression);
    case Tag::CoVar:
    case Tag::Proj1:
    case Tag::Proj2:
    case Tag::MuTildeBox:
    case Tag::NotV:
    case Tag::CoPair:
    case Tag::MuTildeUnit:
    case Tag::MuTildePos:
    case Tag::MuTildePair:
    case Tag::MuTildeMatch:
      return ClassSet().with(SC::CoValue).with(SC::Environment);
    case Tag::MuPos:
      return ClassSet().with(SC::Expression);
    case Tag::MuTildeNeg:
      return ClassSet().with(SC::Environment);
    case Tag::Cut:
      return ClassSet().with(SC::Command);
  }
  return {};
}

bool is_value(const Term& t) { return classify(t).contains(SyntaxClass::Value); }
bool is_covalue(const Term& t) { return classify(t).contains(SyntaxClass::CoValue); }
bool is_expression(const Term& t) { return classify(t).contains(SyntaxClass::Expression); }
bool is_environment(const Term& t) { return classify(t).contains(SyntaxClass::Environment); }
bool is_command(const Term& t) { return t.tag() == Tag::Cut; }

bool has_body(const Term& t) {
  switch (t.tag()) {
    case Tag::MuNot:
    case Tag::MuWith:
    case Tag::MuPar:
    case Tag::MuNeg:
    case Tag::MuTildeBox:
    case Tag::MuTildeUnit:
    case Tag::MuTildePos:
    case Tag::MuTildePair:
    case Tag::MuTildeMatch:
    case Tag::MuPos:
    case Tag::MuTildeNeg:
      return true;
    default:
      return false;
  }
}

namespace term {
namespace {

void need(const TermRef& t, bool ok, std::string_view what, std::string_view where) {
  if (!t) throw StratificationError(std::string(where) + ": missing " + std::string(what));
  if (!ok)
    throw StratificationError(std::string(where) + ": expected " + std::string(what) +
                              ", got " + std::string(to_string(t->tag())));
}

void need_value(const TermRef& t, std::string_view where) {
  need(t, t && is_value(*t), "a value", where);
}
void need_covalue(const TermRef& t, std::string_view where) {
  need(t, t && is_covalue(*t), "a co-value", where);
}
void need_command(const TermRef& t, std::string_view where) {
  need(t, t && is_command(*t), "a command", where);
}
void need_type(const Binder& b, std::string_view where) {
  if (!b.type) throw StratificationError(std::string(where) + ": binder without type");
}

TermRef leaf(Tag tag, Name n) {
  return std::make_shared<const Term>(tag, std::move(n), std::array<Binder, 2>{}, 0,
                                      std::array<TermRef, 2>{}, 0, Polarity::Pos);
}

TermRef node(Tag tag, TermRef a, TermRef b = nullptr) {
  std::size_t n = b ? 2 : (a ? 1 : 0);
  return std::make_shared<const Term>(tag, Name{}, std::array<Binder, 2>{}, 0,
                                      std::array<TermRef, 2>{std::move(a), std::move(b)}, n,
                                      Polarity::Pos);
}

TermRef binding(Tag tag, std::array<Binder, 2> bs, std::size_t nb, TermRef c0,
                TermRef c1 = nullptr) {
  std::size_t n = c1 ? 2 : 1;
  return std::make_shared<const Term>(tag, Name{}, std::move(bs), nb,
                                      std::array<TermRef, 2>{std::move(c0), std::move(c1)}, n,
                                      Polarity::Pos);
}

}  // namespace

TermRef var(Name x) { return leaf(Tag::Var, std::move(x)); }

TermRef pair(TermRef v, TermRef w) {
  need_value(v, "pair");
  need_value(w, "pair");
  return node(Tag::Pair, std::move(v), std::move(w));
}

TermRef box(TermRef v) {
  need_value(v, "box");
  return node(Tag::BoxV, std::move(v));
}

TermRef unit() {
  static const TermRef u = node(Tag::UnitV, nullptr);
  return u;
}

TermRef inj(int i, TermRef v) {
  need_value(v, i == 1 ? "inl" : "inr");
  return node(i == 1 ? Tag::Inj1 : Tag::Inj2, std::move(v));
}

TermRef mu_not(Binder x, TermRef c) {
  need_type(x, "mu[x]");
  need_command(c, "mu[x]");
  return binding(Tag::MuNot, {std::move(x), Binder{}}, 1, std::move(c));
}

TermRef mu_with(Binder a, TermRef c1, Binder b, TermRef c2) {
  need_type(a, "mu{}");
  need_type(b, "mu{}");
  need_command(c1, "mu{}");
  need_command(c2, "mu{}");
  return binding(Tag::MuWith, {std::move(a), std::move(b)}, 2, std::move(c1), std::move(c2));
}

TermRef mu_par(Binder a, Binder b, TermRef c) {
  need_type(a, "mu(a,b)");
  need_type(b, "mu(a,b)");
  need_command(c, "mu(a,b)");
  return binding(Tag::MuPar, {std::move(a), std::move(b)}, 2, std::move(c));
}

TermRef mu(Binder a, TermRef c) {
  need_type(a, "mu");
  need_command(c, "mu");
  Tag tag = is_box_plus(a.type->polarity()) ? Tag::MuPos : Tag::MuNeg;
  return binding(tag, {std::move(a), Binder{}}, 1, std::move(c));
}

TermRef covar(Name a) { return leaf(Tag::CoVar, std::move(a)); }

TermRef proj(int i, TermRef s) {
  need_covalue(s, i == 1 ? "fst" : "snd");
  return node(i == 1 ? Tag::Proj1 : Tag::Proj2, std::move(s));
}

TermRef mu_tilde_box(Binder x, TermRef c) {
  need_type(x, "mu~box");
  need_command(c, "mu~box");
  return binding(Tag::MuTildeBox, {std::move(x), Binder{}}, 1, std::move(c));
}

TermRef not_v(TermRef v) {
  need_value(v, "[V]");
  return node(Tag::NotV, std::move(v));
}

TermRef copair(TermRef s, TermRef s2) {
  need_covalue(s, "(S,S')");
  need_covalue(s2, "(S,S')");
  return node(Tag::CoPair, std::move(s), std::move(s2));
}

TermRef mu_tilde_unit(TermRef c) {
  need_command(c, "mu~()");
  return binding(Tag::MuTildeUnit, {Binder{}, Binder{}}, 0, std::move(c));
}

TermRef mu_tilde(Binder x, TermRef c) {
  need_type(x, "mu~");
  need_command(c, "mu~");
  Tag tag = is_box_plus(x.type->polarity()) ? Tag::MuTildePos : Tag::MuTildeNeg;
  return binding(tag, {std::move(x), Binder{}}, 1, std::move(c));
}

TermRef mu_tilde_pair(Binder x, Binder y, TermRef c) {
  need_type(x, "mu~(x,y)");
  need_type(y, "mu~(x,y)");
  need_command(c, "mu~(x,y)");
  return binding(Tag::MuTildePair, {std::move(x), std::move(y)}, 2, std::move(c));
}

TermRef mu_tilde_match(Binder x, TermRef c1, Binder y, TermRef c2) {
  need_type(x, "mu~{}");
  need_type(y, "mu~{}");
  need_command(c1, "mu~{}");
  need_command(c2, "mu~{}");
  return binding(Tag::MuTildeMatch, {std::move(x), std::move(y)}, 2, std::move(c1),
                 std::move(c2));
}

TermRef cut(Polarity p, TermRef left, TermRef right) {
  if (is_box_plus(p)) {
    need(left, left && is_expression(*left), "an expression", "positive cut (left)");
    need(right, right && is_covalue(*right), "a co-value", "positive cut (right)");
  } else {
    need(left, left && is_value(*left), "a value", "negative cut (left)");
    need(right, right && is_environment(*right), "an environment", "negative cut (right)");
  }
  return std::make_shared<const Term>(Tag::Cut, Name{}, std::array<Binder, 2>{}, 0,
                                      std::array<TermRef, 2>{std::move(left), std::move(right)},
                                      2, p);
}

TermRef with_children(const Term& t, TermRef c0, TermRef c1) {
  switch (t.tag()) {
    case Tag::Pair: return pair(std::move(c0), std::move(c1));
    case Tag::BoxV: return box(std::move(c0));
    case Tag::Inj1: return inj(1, std::move(c0));
    case Tag::Inj2: return inj(2, std::move(c0));
    case Tag::Proj1: return proj(1, std::move(c0));
    case Tag::Proj2: return proj(2, std::move(c0));
    case Tag::NotV: return not_v(std::move(c0));
    case Tag::CoPair: return copair(std::move(c0), std::move(c1));
    case Tag::Cut: return cut(t.cut_polarity(), std::move(c0), std::move(c1));
    default:
      if (has_body(t))
        return with_binders(t, {t.binder(0), t.binder(1)}, std::move(c0), std::move(c1));
      throw StratificationError("with_children on a leaf");
  }
}

TermRef with_binders(const Term& t, std::array<Binder, 2> bs, TermRef c0, TermRef c1) {
  switch (t.tag()) {
    case Tag::MuNot: return mu_not(std::move(bs[0]), std::move(c0));
    case Tag::MuWith: return mu_with(std::move(bs[0]), std::move(c0), std::move(bs[1]), std::move(c1));
    case Tag::MuPar: return mu_par(std::move(bs[0]), std::move(bs[1]), std::move(c0));
    case Tag::MuNeg:
    case Tag::MuPos: return mu(std::move(bs[0]), std::move(c0));
    case Tag::MuTildeBox: return mu_tilde_box(std::move(bs[0]), std::move(c0));
    case Tag::MuTildeUnit: return mu_tilde_unit(std::move(c0));
    case Tag::MuTildePos:
    case Tag::MuTildeNeg: return mu_tilde(std::move(bs[0]), std::move(c0));
    case Tag::MuTildePair: return mu_tilde_pair(std::move(bs[0]), std::move(bs[1]), std::move(c0));
    case Tag::MuTildeMatch:
      return mu_tilde_match(std::move(bs[0]), std::move(c0), std::move(bs[1]), std::move(c1));
    default:
      throw StratificationError("with_binders on a node without binders");
  }
}

}  // namespace term

std::size_t term_size(const Term& t) {
  std::size_t n = 1;
  for (std::size_t i = 0; i < t.child_count(); ++i) n += term_size(*t.child(i));
  return n;
}


bool binds_covariables(const Term& t) {
  switch (t.tag()) {
    case Tag::MuWith:
    case Tag::MuPar:
    case Tag::MuNeg:
    case Tag::MuPos:
      return true;
    default:
      return false;
  }
}

std::pair<std::size_t, std::size_t> binders_over(const Term& t, std::size_t i) {
  if (t.tag() == Tag::MuWith || t.tag() == Tag::MuTildeMatch) return {i, i + 1};
  return {0, t.binder_count()};
}

}  // namespace lbox
