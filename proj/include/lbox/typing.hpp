#pragma once

// Bidirectional checker for the five judgments. Contexts are shared between
// premises (additive reading), which makes the renaming rules admissible.

#include <functional>
#include <map>
#include <stdexcept>
#include <variant>

#include "lbox/core.hpp"
#include "lbox/diagnostic.hpp"

namespace lbox {

/// (G | T |- D) plus the fixed toplevel covariable tp : R.
/// Invariant: the three zones have disjoint domains and tp is never bound.
class TypingContext {
 public:
  explicit TypingContext(TypeRef return_type);

  const TypeRef& return_type() const { return return_type_; }
  const std::map<Name, TypeRef>& gamma() const { return gamma_; }
  const std::map<Name, TypeRef>& theta() const { return theta_; }
  /// Does not include tp.
  const std::map<Name, TypeRef>& delta() const { return delta_; }

  /// Extending one zone removes the name from the other variable zone, so a
  /// binder shadows an outer variable of the same name.
  TypingContext& bind_var(const Name& x, TypeRef a);
  TypingContext& bind_modal(const Name& x, TypeRef a);
  /// Throws std::invalid_argument when `a` is tp.
  TypingContext& bind_covar(const Name& a, TypeRef t);

  /// Type of x in G or T, or null.
  TypeRef lookup_var(const Name& x) const;
  bool in_theta(const Name& x) const { return theta_.count(x) != 0; }
  /// Type of a in D (tp gives R), or null.
  TypeRef lookup_covar(const Name& a) const;

  /// G_box | T |- (nothing): drops non-modal G entries and every covariable.
  TypingContext modal_part() const;

 private:
  TypeRef return_type_;
  std::map<Name, TypeRef> gamma_;
  std::map<Name, TypeRef> theta_;
  std::map<Name, TypeRef> delta_;
  bool has_tp_ = true;
};

/// Carries the diagnostic of a failed check through the recursive checker.
class TypeError : public std::runtime_error {
 public:
  explicit TypeError(Diagnostic d);
  const Diagnostic& diagnostic() const { return diag_; }

 private:
  Diagnostic diag_;
};

struct CheckOptions {
  /// Re-check the premise of R-box in the pruned context as well as by the
  /// free-name scan.
  bool debug = false;
  /// Called for every value whose type is synthesised or checked.
  std::function<void(const TermRef&, const TypeRef&, const TypingContext&)> on_value;
};

using Status = Checked<std::monostate>;

// `expected` may be null; injections and projections then need it from the
// surrounding cut.
Checked<TypeRef> check_value(const TypingContext& ctx, const TermRef& v,
                             const TypeRef& expected = nullptr,
                             const CheckOptions& opts = {});
Checked<TypeRef> check_expression(const TypingContext& ctx, const TermRef& t,
                                  const TypeRef& expected = nullptr,
                                  const CheckOptions& opts = {});
Checked<TypeRef> check_covalue(const TypingContext& ctx, const TermRef& s,
                               const TypeRef& expected = nullptr,
                               const CheckOptions& opts = {});
Checked<TypeRef> check_environment(const TypingContext& ctx, const TermRef& e,
                                   const TypeRef& expected = nullptr,
                                   const CheckOptions& opts = {});
/// Returns the cut type.
Checked<TypeRef> check_command(const TypingContext& ctx, const TermRef& c,
                               const CheckOptions& opts = {});

/// Free-name scan: no free covariables (tp included), and every free
/// variable is in T or has a modal type in G.
Status modal_restriction(const TypingContext& ctx, const TermRef& v);

/// Maps variables to variables and covariables to covariables.
struct Renaming {
  std::map<Name, Name> vars;
  std::map<Name, Name> covars;
};

/// Renames free occurrences; names outside the domain are unchanged.
TermRef apply_renaming(const Renaming& theta, const TermRef& node);

/// Validates that `theta` maps every entry of `from` to an entry of the same
/// zone and type in `to`; returns the renamed node.
Checked<TermRef> apply_renaming(const Renaming& theta, const TermRef& node,
                                const TypingContext& from, const TypingContext& to);

}  // namespace lbox
