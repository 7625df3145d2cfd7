#pragma once

// Partial type information used to infer cut polarities. The parser and
// the printer share these rules so that printed markers are exactly the
// ones the parser needs.

#include <optional>
#include <utility>
#include <vector>

#include "lbox/core.hpp"

namespace lbox::detail {

struct Hint {
  TypeRef type;                    // full type when known
  std::optional<Polarity> pol;     // set whenever type is

  static Hint of(TypeRef t) {
    Hint h;
    if (t) h.pol = t->polarity();
    h.type = std::move(t);
    return h;
  }
  static Hint polarity(Polarity p) { return Hint{nullptr, p}; }
};

/// Names in scope with their annotated types; tp resolves to R.
class HintScope {
 public:
  explicit HintScope(TypeRef return_type) : return_type_(std::move(return_type)) {}

  void push_var(const Name& x, TypeRef t) { vars_.emplace_back(x, std::move(t)); }
  void push_covar(const Name& a, TypeRef t) { covars_.emplace_back(a, std::move(t)); }
  void pop_var() { vars_.pop_back(); }
  void pop_covar() { covars_.pop_back(); }

  bool has_var(const Name& x) const { return find(vars_, x) != nullptr; }
  bool has_covar(const Name& a) const {
    return a == toplevel_name() || find(covars_, a) != nullptr;
  }
  Hint var(const Name& x) const;
  Hint covar(const Name& a) const;
  const TypeRef& return_type() const { return return_type_; }
  void set_return_type(TypeRef r) { return_type_ = std::move(r); }

 private:
  using Entries = std::vector<std::pair<Name, TypeRef>>;
  static const TypeRef* find(const Entries& es, const Name& n);

  TypeRef return_type_;
  Entries vars_;
  Entries covars_;
};

Hint pair_hint(const Hint& a, const Hint& b);
Hint box_hint(const Hint& a);
Hint inj_hint(const Hint& a);
Hint not_hint(const Hint& a);
Hint copair_hint(const Hint& a, const Hint& b);
/// Hint of a binder-headed node from its annotations alone.
Hint binder_hint(const Term& t);

/// Consumer polarity when known, producer polarity otherwise.
std::optional<Polarity> infer_cut_polarity(const Hint& left, const Hint& right);

/// Hint of a core producer or consumer; binds nothing into `scope`.
Hint core_hint(const Term& t, const HintScope& scope);

}  // namespace lbox::detail
