#pragma once

// Types, polarities, names and the stratified term grammar shared by every
// other part of the toolchain. Terms and types are immutable and shared by
// reference; all operations here are pure.

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>

namespace lbox {

// ---------------------------------------------------------------------------
// Polarities
// ---------------------------------------------------------------------------

enum class Polarity : std::uint8_t { Pos, Neg, Modal };

/// Positive polarities: + and box.
constexpr bool is_box_plus(Polarity p) { return p != Polarity::Neg; }
/// Non-modal polarities: + and -.
constexpr bool is_non_modal(Polarity p) { return p != Polarity::Modal; }

/// Polarity of a strict pair or sum: modal only when both halves are modal.
constexpr Polarity odot(Polarity a, Polarity b) {
  return (a == Polarity::Modal && b == Polarity::Modal) ? Polarity::Modal
                                                        : Polarity::Pos;
}

std::string_view to_string(Polarity p);

// ---------------------------------------------------------------------------
// Types
// ---------------------------------------------------------------------------

enum class TypeKind : std::uint8_t { Unit, Tensor, Sum, Box, Not, With, Par };

class Type;
using TypeRef = std::shared_ptr<const Type>;

class Type {
 public:
  static TypeRef unit();
  static TypeRef tensor(TypeRef a, TypeRef b);
  static TypeRef sum(TypeRef a, TypeRef b);
  static TypeRef box(TypeRef a);
  static TypeRef negation(TypeRef a);
  static TypeRef with(TypeRef a, TypeRef b);
  static TypeRef par(TypeRef a, TypeRef b);

  TypeKind kind() const { return kind_; }
  /// Operand of a unary connective, or left operand of a binary one.
  const TypeRef& left() const { return left_; }
  const TypeRef& right() const { return right_; }
  Polarity polarity() const { return polarity_; }

  Type(TypeKind kind, TypeRef left, TypeRef right);

 private:
  TypeKind kind_;
  TypeRef left_;
  TypeRef right_;
  Polarity polarity_;
};

Polarity polarity_of(const Type& t);
bool type_equal(const Type& a, const Type& b);
inline bool type_equal(const TypeRef& a, const TypeRef& b) {
  return a == b || (a && b && type_equal(*a, *b));
}

// ---------------------------------------------------------------------------
// Names
// ---------------------------------------------------------------------------

/// An identifier: user-visible base plus a stamp distinguishing freshened
/// copies. Stamp 0 is a source name; fresh names print as `base'stamp`.
struct Name {
  std::string base;
  std::uint32_t stamp = 0;

  Name() = default;
  Name(std::string b, std::uint32_t s = 0) : base(std::move(b)), stamp(s) {}
  Name(const char* b) : base(b) {}

  std::string str() const;
  auto operator<=>(const Name&) const = default;
  bool operator==(const Name&) const = default;
};

/// The distinguished toplevel covariable.
const Name& toplevel_name();

/// A name with the same base and a stamp never handed out before.
Name fresh_name(const Name& hint);
/// Ensure future fresh stamps exceed `stamp` (used when parsing `x'12`).
void reserve_stamp(std::uint32_t stamp);

// ---------------------------------------------------------------------------
// Terms
// ---------------------------------------------------------------------------

enum class Tag : std::uint8_t {
  // values
  Var,
  Pair,
  BoxV,
  UnitV,
  Inj1,
  Inj2,
  MuNot,
  MuWith,
  MuPar,
  MuNeg,
  // co-values
  CoVar,
  Proj1,
  Proj2,
  MuTildeBox,
  NotV,
  CoPair,
  MuTildeUnit,
  MuTildePos,
  MuTildePair,
  MuTildeMatch,
  // expression-only / environment-only
  MuPos,
  MuTildeNeg,
  // commands
  Cut,
};

std::string_view to_string(Tag t);

/// A binding occurrence. The binder's polarity is always polarity_of(type).
struct Binder {
  Name name;
  TypeRef type;
};

class Term;
using TermRef = std::shared_ptr<const Term>;

/// Raised when a constructor would violate the grammar stratification.
class StratificationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// One node of the stratified grammar.
///
/// Layout by tag:
///   Var, CoVar                      name()
///   Pair, CoPair, Cut               child(0), child(1)
///   BoxV, Inj*, Proj*, NotV         child(0)
///   MuNot, MuNeg, MuPos, MuTildeBox,
///   MuTildePos, MuTildeNeg          binder(0), child(0) = body
///   MuTildeUnit                     child(0) = body
///   MuPar, MuTildePair              binder(0), binder(1), child(0) = body
///   MuWith, MuTildeMatch            binder(i) scopes over child(i)
class Term {
 public:
  Tag tag() const { return tag_; }
  const Name& name() const { return name_; }
  const Binder& binder(std::size_t i) const { return binders_[i]; }
  std::size_t binder_count() const { return nbinders_; }
  const TermRef& child(std::size_t i) const { return children_[i]; }
  std::size_t child_count() const { return nchildren_; }
  /// Stored polarity of a Cut.
  Polarity cut_polarity() const { return polarity_; }

  const TermRef& left() const { return children_[0]; }
  const TermRef& right() const { return children_[1]; }
  const TermRef& body() const { return children_[0]; }

  // Raw node construction; prefer the checked factories in namespace term.
  Term(Tag tag, Name name, std::array<Binder, 2> binders, std::size_t nbinders,
       std::array<TermRef, 2> children, std::size_t nchildren,
       Polarity polarity);

 private:
  Tag tag_;
  std::uint8_t nbinders_;
  std::uint8_t nchildren_;
  Polarity polarity_;
  Name name_;
  std::array<Binder, 2> binders_;
  std::array<TermRef, 2> children_;
};

enum class SyntaxClass : std::uint8_t {
  Value = 1,
  CoValue = 2,
  Expression = 4,
  Environment = 8,
  Command = 16,
};

/// Bit set of SyntaxClass flags.
class ClassSet {
 public:
  constexpr ClassSet() = default;
  constexpr explicit ClassSet(std::uint8_t bits) : bits_(bits) {}
  constexpr bool contains(SyntaxClass c) const {
    return (bits_ & static_cast<std::uint8_t>(c)) != 0;
  }
  constexpr ClassSet with(SyntaxClass c) const {
    return ClassSet(bits_ | static_cast<std::uint8_t>(c));
  }
  constexpr std::uint8_t bits() const { return bits_; }
  constexpr bool operator==(const ClassSet&) const = default;

 private:
  std::uint8_t bits_ = 0;
};

ClassSet classify(const Term& t);
bool is_value(const Term& t);
bool is_covalue(const Term& t);
bool is_expression(const Term& t);
bool is_environment(const Term& t);
bool is_command(const Term& t);
/// True for binder-headed nodes (anything with a command body).
bool has_body(const Term& t);
/// True when the node's binders are covariables (mu-forms), false when they
/// are variables (mu~-forms and mu[x]).
bool binds_covariables(const Term& t);
/// Indices of the binders scoping over child `i` of a binder-headed node.
/// MuWith and MuTildeMatch scope binder i over child i; all others scope
/// every binder over the single body.
std::pair<std::size_t, std::size_t> binders_over(const Term& t, std::size_t i);

namespace term {

TermRef var(Name x);
TermRef pair(TermRef v, TermRef w);
TermRef box(TermRef v);
TermRef unit();
TermRef inj(int i, TermRef v);
TermRef mu_not(Binder x, TermRef c);
TermRef mu_with(Binder a, TermRef c1, Binder b, TermRef c2);
TermRef mu_par(Binder a, Binder b, TermRef c);
/// mu a:T.c; a value when T is negative, an expression otherwise.
TermRef mu(Binder a, TermRef c);

TermRef covar(Name a);
TermRef proj(int i, TermRef s);
TermRef mu_tilde_box(Binder x, TermRef c);
TermRef not_v(TermRef v);
TermRef copair(TermRef s, TermRef s2);
TermRef mu_tilde_unit(TermRef c);
/// mu~x:T.c; a co-value when T is positive or modal, an environment otherwise.
TermRef mu_tilde(Binder x, TermRef c);
TermRef mu_tilde_pair(Binder x, Binder y, TermRef c);
TermRef mu_tilde_match(Binder x, TermRef c1, Binder y, TermRef c2);

/// <left | right> at polarity p; validates the stratification of both sides.
TermRef cut(Polarity p, TermRef left, TermRef right);

/// Rebuild a node with new children (same binders, name and polarity).
TermRef with_children(const Term& t, TermRef c0, TermRef c1 = nullptr);
/// Rebuild a binder-headed node with new binders and bodies.
TermRef with_binders(const Term& t, std::array<Binder, 2> binders,
                     TermRef c0, TermRef c1 = nullptr);

}  // namespace term

// ---------------------------------------------------------------------------
// Free names, substitution, alpha-equivalence
// ---------------------------------------------------------------------------

struct FreeNames {
  std::set<Name> vars;
  std::set<Name> covars;
  bool empty() const { return vars.empty() && covars.empty(); }
  bool operator==(const FreeNames&) const = default;
};

FreeNames free_names(const Term& t);

/// Simultaneous substitution of values for variables and co-values for
/// covariables.
class Substitution {
 public:
  /// Throws StratificationError unless `v` is a value.
  Substitution& bind_var(const Name& x, TermRef v);
  /// Throws StratificationError unless `s` is a co-value.
  Substitution& bind_covar(const Name& a, TermRef s);

  void unbind_var(const Name& x) { values_.erase(x); }
  void unbind_covar(const Name& a) { covalues_.erase(a); }

  const std::map<Name, TermRef>& values() const { return values_; }
  const std::map<Name, TermRef>& covalues() const { return covalues_; }
  bool empty() const { return values_.empty() && covalues_.empty(); }

 private:
  std::map<Name, TermRef> values_;
  std::map<Name, TermRef> covalues_;
};

/// Capture-avoiding simultaneous substitution; binders that would capture a
/// free name of the range are freshened.
TermRef substitute(const TermRef& t, const Substitution& sigma);

bool alpha_equal(const TermRef& a, const TermRef& b);

/// Number of nodes, counting commands.
std::size_t term_size(const Term& t);

}  // namespace lbox
