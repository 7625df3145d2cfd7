#include <algorithm>
#include <vector>

#include "lbox/core.hpp"

namespace lbox {

// ---------------------------------------------------------------------------
// Free names
// ---------------------------------------------------------------------------

namespace {

struct Scope {
  std::vector<Name> vars;
  std::vector<Name> covars;

  bool bound(const std::vector<Name>& names, const Name& n) const {
    return std::find(names.rbegin(), names.rend(), n) != names.rend();
  }
};

void collect_free(const Term& t, Scope& scope, FreeNames& out) {
  switch (t.tag()) {
    case Tag::Var:
      if (!scope.bound(scope.vars, t.name())) out.vars.insert(t.name());
      return;
    case Tag::CoVar:
      if (!scope.bound(scope.covars, t.name())) out.covars.insert(t.name());
      return;
    default:
      break;
  }
  if (!has_body(t)) {
    for (std::size_t i = 0; i < t.child_count(); ++i) collect_free(*t.child(i), scope, out);
    return;
  }
  auto& names = binds_covariables(t) ? scope.covars : scope.vars;
  for (std::size_t i = 0; i < t.child_count(); ++i) {
    auto [lo, hi] = binders_over(t, i);
    for (std::size_t b = lo; b < hi; ++b) names.push_back(t.binder(b).name);
    collect_free(*t.child(i), scope, out);
    names.resize(names.size() - (hi - lo));
  }
}

}  // namespace

FreeNames free_names(const Term& t) {
  FreeNames out;
  Scope scope;
  collect_free(t, scope, out);
  return out;
}

// ---------------------------------------------------------------------------
// Substitution
// ---------------------------------------------------------------------------

Substitution& Substitution::bind_var(const Name& x, TermRef v) {
  if (!v || !is_value(*v))
    throw StratificationError("substitution: variable " + x.str() + " must map to a value");
  values_[x] = std::move(v);
  return *this;
}

Substitution& Substitution::bind_covar(const Name& a, TermRef s) {
  if (!s || !is_covalue(*s))
    throw StratificationError("substitution: covariable " + a.str() +
                              " must map to a co-value");
  covalues_[a] = std::move(s);
  return *this;
}

namespace {

class Substituter {
 public:
  explicit Substituter(FreeNames range_free) : range_free_(std::move(range_free)) {}

  TermRef apply(const TermRef& t, const Substitution& sigma) const {
    if (sigma.empty()) return t;
    switch (t->tag()) {
      case Tag::Var: {
        auto it = sigma.values().find(t->name());
        return it == sigma.values().end() ? t : it->second;
      }
      case Tag::CoVar: {
        auto it = sigma.covalues().find(t->name());
        return it == sigma.covalues().end() ? t : it->second;
      }
      case Tag::UnitV:
        return t;
      default:
        break;
    }
    if (!has_body(*t)) {
      TermRef c0 = apply(t->child(0), sigma);
      TermRef c1 = t->child_count() > 1 ? apply(t->child(1), sigma) : nullptr;
      if (c0 == t->child(0) && c1 == (t->child_count() > 1 ? t->child(1) : nullptr)) return t;
      return term::with_children(*t, std::move(c0), std::move(c1));
    }

    const bool covariant = binds_covariables(*t);
    std::array<Binder, 2> binders{t->binder(0), t->binder(1)};
    std::array<TermRef, 2> bodies{};
    bool changed = false;
    for (std::size_t i = 0; i < t->child_count(); ++i) {
      Substitution inner = sigma;
      auto [lo, hi] = binders_over(*t, i);
      for (std::size_t b = lo; b < hi; ++b) {
        const Name& n = t->binder(b).name;
        // Shadowing: the binder hides any mapping for its own name.
        if (covariant)
          inner.unbind_covar(n);
        else
          inner.unbind_var(n);
      }
      for (std::size_t b = lo; b < hi && !inner.empty(); ++b) {
        const Name& n = t->binder(b).name;
        const auto& clash = covariant ? range_free_.covars : range_free_.vars;
        if (!clash.contains(n)) continue;
        Name fresh = fresh_name(n);
        binders[b].name = fresh;
        if (covariant)
          inner.bind_covar(n, term::covar(fresh));
        else
          inner.bind_var(n, term::var(fresh));
        changed = true;
      }
      bodies[i] = apply(t->child(i), inner);
      if (bodies[i] != t->child(i)) changed = true;
    }
    if (!changed) return t;
    return term::with_binders(*t, std::move(binders), std::move(bodies[0]), std::move(bodies[1]));
  }

 private:
  FreeNames range_free_;
};

}  // namespace

TermRef substitute(const TermRef& t, const Substitution& sigma) {
  if (sigma.empty()) return t;
  FreeNames range;
  for (const auto& [_, v] : sigma.values()) {
    FreeNames f = free_names(*v);
    range.vars.insert(f.vars.begin(), f.vars.end());
    range.covars.insert(f.covars.begin(), f.covars.end());
  }
  for (const auto& [_, s] : sigma.covalues()) {
    FreeNames f = free_names(*s);
    range.vars.insert(f.vars.begin(), f.vars.end());
    range.covars.insert(f.covars.begin(), f.covars.end());
  }
  return Substituter(std::move(range)).apply(t, sigma);
}

// ---------------------------------------------------------------------------
// Alpha-equivalence
// ---------------------------------------------------------------------------

namespace {

struct AlphaScope {
  std::vector<std::pair<Name, Name>> vars;
  std::vector<std::pair<Name, Name>> covars;
};

bool same_occurrence(const std::vector<std::pair<Name, Name>>& stack, const Name& a,
                     const Name& b) {
  std::ptrdiff_t ia = -1, ib = -1;
  for (std::ptrdiff_t i = static_cast<std::ptrdiff_t>(stack.size()) - 1; i >= 0; --i) {
    if (ia < 0 && stack[i].first == a) ia = i;
    if (ib < 0 && stack[i].second == b) ib = i;
    if (ia >= 0 && ib >= 0) break;
  }
  if (ia < 0 && ib < 0) return a == b;
  return ia == ib;
}

bool alpha(const Term& a, const Term& b, AlphaScope& scope) {
  if (a.tag() != b.tag()) return false;
  switch (a.tag()) {
    case Tag::Var:
      return same_occurrence(scope.vars, a.name(), b.name());
    case Tag::CoVar:
      return same_occurrence(scope.covars, a.name(), b.name());
    case Tag::Cut:
      if (a.cut_polarity() != b.cut_polarity()) return false;
      break;
    default:
      break;
  }
  if (a.child_count() != b.child_count() || a.binder_count() != b.binder_count()) return false;
  for (std::size_t i = 0; i < a.binder_count(); ++i)
    if (!type_equal(a.binder(i).type, b.binder(i).type)) return false;
  if (!has_body(a)) {
    for (std::size_t i = 0; i < a.child_count(); ++i)
      if (!alpha(*a.child(i), *b.child(i), scope)) return false;
    return true;
  }
  auto& stack = binds_covariables(a) ? scope.covars : scope.vars;
  for (std::size_t i = 0; i < a.child_count(); ++i) {
    auto [lo, hi] = binders_over(a, i);
    for (std::size_t k = lo; k < hi; ++k) stack.emplace_back(a.binder(k).name, b.binder(k).name);
    bool ok = alpha(*a.child(i), *b.child(i), scope);
    stack.resize(stack.size() - (hi - lo));
    if (!ok) return false;
  }
  return true;
}

}  // namespace

bool alpha_equal(const TermRef& a, const TermRef& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  AlphaScope scope;
  return alpha(*a, *b, scope);
}

}  // namespace lbox
