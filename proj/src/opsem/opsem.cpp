#include "lbox/opsem.hpp"

#include "lbox/printer.hpp"

namespace lbox {

std::string_view to_string(OpRule r) {
  switch (r) {
    case OpRule::Mu: return "mu";
    case OpRule::MuTilde: return "mu~";
    case OpRule::Unit: return "unit";
    case OpRule::Pair: return "pair";
    case OpRule::Match: return "match";
    case OpRule::Box: return "box";
    case OpRule::Not: return "not";
    case OpRule::Par: return "par";
    case OpRule::With: return "with";
  }
  return "?";
}

namespace {

bool is_mu(Tag t) { return t == Tag::MuPos || t == Tag::MuNeg; }
bool is_mu_tilde(Tag t) { return t == Tag::MuTildePos || t == Tag::MuTildeNeg; }
bool is_inj(Tag t) { return t == Tag::Inj1 || t == Tag::Inj2; }
bool is_proj(Tag t) { return t == Tag::Proj1 || t == Tag::Proj2; }

TermRef subst1_var(const TermRef& body, const Name& x, const TermRef& v) {
  Substitution s;
  s.bind_var(x, v);
  return substitute(body, s);
}

TermRef subst1_covar(const TermRef& body, const Name& a, const TermRef& k) {
  Substitution s;
  s.bind_covar(a, k);
  return substitute(body, s);
}

TermRef reduce(OpRule rule, const Term& l, const Term& r, const TermRef& lref, const TermRef& rref) {
  switch (rule) {
    case OpRule::Mu:
      return subst1_covar(l.body(), l.binder(0).name, rref);
    case OpRule::MuTilde:
      return subst1_var(r.body(), r.binder(0).name, lref);
    case OpRule::Unit:
      return r.body();
    case OpRule::Pair: {
      Substitution s;
      s.bind_var(r.binder(0).name, l.child(0));
      s.bind_var(r.binder(1).name, l.child(1));
      return substitute(r.body(), s);
    }
    case OpRule::Match: {
      const std::size_t i = l.tag() == Tag::Inj1 ? 0 : 1;
      return subst1_var(r.child(i), r.binder(i).name, l.child(0));
    }
    case OpRule::Box:
      return subst1_var(r.body(), r.binder(0).name, l.child(0));
    case OpRule::Not:
      return subst1_var(l.body(), l.binder(0).name, r.child(0));
    case OpRule::Par: {
      Substitution s;
      s.bind_covar(l.binder(0).name, r.child(0));
      s.bind_covar(l.binder(1).name, r.child(1));
      return substitute(l.body(), s);
    }
    case OpRule::With: {
      const std::size_t i = r.tag() == Tag::Proj1 ? 0 : 1;
      return subst1_covar(l.child(i), l.binder(i).name, r.child(0));
    }
  }
  return nullptr;
}

}  // namespace

std::vector<OpRule> matching_rules(const TermRef& c) {
  std::vector<OpRule> out;
  if (c->tag() != Tag::Cut) return out;
  const Term& l = *c->left();
  const Term& r = *c->right();
  if (is_mu(l.tag()) && is_covalue(r)) out.push_back(OpRule::Mu);
  if (is_value(l) && is_mu_tilde(r.tag())) out.push_back(OpRule::MuTilde);
  if (l.tag() == Tag::UnitV && r.tag() == Tag::MuTildeUnit) out.push_back(OpRule::Unit);
  if (l.tag() == Tag::Pair && r.tag() == Tag::MuTildePair) out.push_back(OpRule::Pair);
  if (is_inj(l.tag()) && r.tag() == Tag::MuTildeMatch) out.push_back(OpRule::Match);
  if (l.tag() == Tag::BoxV && r.tag() == Tag::MuTildeBox) out.push_back(OpRule::Box);
  if (l.tag() == Tag::MuNot && r.tag() == Tag::NotV) out.push_back(OpRule::Not);
  if (l.tag() == Tag::MuPar && r.tag() == Tag::CoPair) out.push_back(OpRule::Par);
  if (l.tag() == Tag::MuWith && is_proj(r.tag())) out.push_back(OpRule::With);
  return out;
}

StepResult step(const TermRef& c) {
  using K = StepResult::Kind;
  if (c->tag() != Tag::Cut) return {K::Stuck, c, std::nullopt, "not a command"};
  const TermRef& l = c->left();
  const TermRef& r = c->right();
  if (r->tag() == Tag::CoVar && r->name() == toplevel_name() && is_value(*l)) {
    if (!free_names(*l).empty()) return {K::Stuck, c, std::nullopt, "open value returned"};
    return {K::Terminal, l, std::nullopt, {}};
  }

  auto rules = matching_rules(c);
  if (rules.empty()) return {K::Stuck, c, std::nullopt, "no rule matches " + print(c)};
  OpRule rule = rules.front();
  if (rules.size() > 1) rule = is_box_plus(c->cut_polarity()) ? OpRule::Mu : OpRule::MuTilde;
  return {K::Stepped, reduce(rule, *l, *r, l, r), rule, {}};
}

RunResult run(const TermRef& c, std::size_t fuel, const StepObserver& observe) {
  RunResult out;
  TermRef cur = c;
  for (;;) {
    StepResult s = step(cur);
    if (!s.stepped()) {
      out.final = std::move(s);
      return out;
    }
    if (out.steps == fuel) {
      out.fuel_exhausted = true;
      out.final = {StepResult::Kind::Stuck, cur, std::nullopt, "fuel exhausted"};
      return out;
    }
    if (observe) observe(out.steps, cur, s);
    ++out.steps;
    cur = s.term;
  }
}

}  // namespace lbox
