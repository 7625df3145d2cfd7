#include "lbox/core.hpp"

#include <atomic>

namespace lbox {

std::string_view to_string(Polarity p) {
  switch (p) {
    case Polarity::Pos:
      return "+";
    case Polarity::Neg:
      return "-";
    case Polarity::Modal:
      return "box";
  }
  return "?";
}

namespace {

Polarity compute_polarity(TypeKind kind, const TypeRef& a, const TypeRef& b) {
  switch (kind) {
    case TypeKind::Unit:
    case TypeKind::Box:
      return Polarity::Modal;
    case TypeKind::Not:
    case TypeKind::With:
    case TypeKind::Par:
      return Polarity::Neg;
    case TypeKind::Tensor:
    case TypeKind::Sum:
      return odot(a->polarity(), b->polarity());
  }
  return Polarity::Pos;
}

void require(const TypeRef& t) {
  if (!t) throw std::invalid_argument("null type operand");
}

}  // namespace

Type::Type(TypeKind kind, TypeRef left, TypeRef right)
    : kind_(kind),
      left_(std::move(left)),
      right_(std::move(right)),
      polarity_(compute_polarity(kind_, left_, right_)) {}

TypeRef Type::unit() {
  static const TypeRef u = std::make_shared<const Type>(TypeKind::Unit, nullptr, nullptr);
  return u;
}

TypeRef Type::tensor(TypeRef a, TypeRef b) {
  require(a);
  require(b);
  return std::make_shared<const Type>(TypeKind::Tensor, std::move(a), std::move(b));
}

TypeRef Type::sum(TypeRef a, TypeRef b) {
  require(a);
  require(b);
  return std::make_shared<const Type>(TypeKind::Sum, std::move(a), std::move(b));
}

TypeRef Type::box(TypeRef a) {
  require(a);
  return std::make_shared<const Type>(TypeKind::Box, std::move(a), nullptr);
}

TypeRef Type::negation(TypeRef a) {
  require(a);
  return std::make_shared<const Type>(TypeKind::Not, std::move(a), nullptr);
}

TypeRef Type::with(TypeRef a, TypeRef b) {
  require(a);
  require(b);
  return std::make_shared<const Type>(TypeKind::With, std::move(a), std::move(b));
}

TypeRef Type::par(TypeRef a, TypeRef b) {
  require(a);
  require(b);
  return std::make_shared<const Type>(TypeKind::Par, std::move(a), std::move(b));
}

Polarity polarity_of(const Type& t) {
  // Recomputed structurally; agrees with the cached value by construction.
  switch (t.kind()) {
    case TypeKind::Unit:
    case TypeKind::Box:
      return Polarity::Modal;
    case TypeKind::Not:
    case TypeKind::With:
    case TypeKind::Par:
      return Polarity::Neg;
    case TypeKind::Tensor:
    case TypeKind::Sum:
      return odot(polarity_of(*t.left()), polarity_of(*t.right()));
  }
  return Polarity::Pos;
}

bool type_equal(const Type& a, const Type& b) {
  if (&a == &b) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case TypeKind::Unit:
      return true;
    case TypeKind::Box:
    case TypeKind::Not:
      return type_equal(*a.left(), *b.left());
    default:
      return type_equal(*a.left(), *b.left()) && type_equal(*a.right(), *b.right());
  }
}

// ---------------------------------------------------------------------------

namespace {
std::atomic<std::uint32_t> g_stamp{0};
}

std::string Name::str() const {
  if (stamp == 0) return base;
  return base + "'" + std::to_string(stamp);
}

const Name& toplevel_name() {
  static const Name tp{"tp", 0};
  return tp;
}

Name fresh_name(const Name& hint) {
  return Name{hint.base, g_stamp.fetch_add(1, std::memory_order_relaxed) + 1};
}

void reserve_stamp(std::uint32_t stamp) {
  std::uint32_t cur = g_stamp.load(std::memory_order_relaxed);
  while (cur < stamp &&
         !g_stamp.compare_exchange_weak(cur, stamp, std::memory_order_relaxed)) {
  }
}

}  // namespace lbox
