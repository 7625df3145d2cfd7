#pragma once

// Type-directed generation shared by the exhaustive enumerator, the random
// generator and the shrinker. Internal to the harness.

#include <cstdint>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "lbox/core.hpp"
#include "lbox/typing.hpp"

namespace lbox::harness::detail {

enum class Cls : std::uint8_t { Value, Expression, CoValue, Environment, Command };

/// Index into type_universe().
using TypeIx = int;
constexpr TypeIx no_type = -1;

enum class Zone : std::uint8_t { Ordinary, Modal, Co };

struct Entry {
  Name name;
  Zone zone;
  TypeIx type;
};

/// A generation context. Binders introduced under it are named from its
/// size, so equal contexts generate identical terms and nested binders never
/// shadow each other.
struct GenContext {
  std::vector<Entry> entries;
  bool has_tp = true;

  std::size_t size() const { return entries.size(); }
  GenContext bind(Zone z, TypeIx t, const Name& n) const;
  /// Modal variables of the ordinary zone, the whole modal zone, no
  /// covariables and no tp.
  GenContext modal_part() const;
  std::string key() const;
};

TypeIx type_index(const TypeRef& t);
const TypeRef& type_at(TypeIx i);

/// Exact-depth exhaustive generation, memoised on (class, type, context, depth).
class Enumerator {
 public:
  explicit Enumerator(TypeRef return_type);

  const std::vector<TermRef>& exact(Cls cls, TypeIx t, const GenContext& ctx, std::size_t d);
  std::vector<TermRef> up_to(Cls cls, TypeIx t, const GenContext& ctx, std::size_t d);

  TypeIx return_index() const { return ret_; }

 private:
  std::vector<TermRef> build(Cls cls, TypeIx t, const GenContext& ctx, std::size_t d);
  std::vector<TermRef> values(TypeIx t, const GenContext& ctx, std::size_t d);
  std::vector<TermRef> covalues(TypeIx t, const GenContext& ctx, std::size_t d);
  std::vector<TermRef> commands(const GenContext& ctx, std::size_t d);

  /// All (l, r) with depth(l), depth(r) < d and one of them exactly d - 1.
  template <class L, class R, class F>
  void pairs(std::size_t d, L left, R right, F emit);

  TypeIx ret_;
  std::unordered_map<std::string, std::vector<TermRef>> memo_;
};

/// Random type-directed generation over the same grammar. Returns null
/// when the chosen shape has no inhabitant at this depth.
TermRef random_term(std::mt19937_64& rng, Cls cls, TypeIx t, const GenContext& ctx,
                    std::size_t d, TypeIx ret);

}  // namespace lbox::harness::detail
