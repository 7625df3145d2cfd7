#include "doctest.h"
#include "support.hpp"

#include <filesystem>

#include "lbox/sugar.hpp"

using namespace lbox;
using lbox::test::cmd;
using lbox::test::program;
using lbox::test::ty;

namespace {

const TypeRef one = Type::unit();

bool has_box(const TermRef& t) {
  if (t->tag() == Tag::BoxV || t->tag() == Tag::MuTildeBox) return true;
  for (std::size_t i = 0; i < t->binder_count(); ++i)
    if (t->binder(i).type->kind() == TypeKind::Box) return true;
  for (std::size_t i = 0; i < t->child_count(); ++i)
    if (has_box(t->child(i))) return true;
  return false;
}

// Every cut's stored polarity agrees with the polarity of its checked type.
void check_cut_polarities(const TermRef& c, const TypingContext& ctx) {
  CheckOptions opts;
  auto r = check_command(ctx, c, opts);
  REQUIRE_MESSAGE(r.ok(), lbox::test::why(r));
  CHECK(r.value()->polarity() == c->cut_polarity());
}

}  // namespace

TEST_CASE("type abbreviations") {
  CHECK(type_equal(sugar::elaborate(sugar::Arrow{one, one}), Type::par(Type::negation(one), one)));
  CHECK(type_equal(sugar::elaborate(sugar::ShiftUpType{Type::negation(one)}),
                   Type::tensor(Type::negation(one), one)));
  CHECK(type_equal(sugar::elaborate(sugar::ShiftDownType{one}),
                   Type::par(Type::negation(one), one)));
  CHECK(type_equal(sugar::elaborate(sugar::Bool{}), Type::sum(one, one)));
  CHECK(sugar::shift_up(one)->polarity() == Polarity::Modal);
  CHECK(sugar::shift_up(Type::negation(one))->polarity() == Polarity::Pos);
  CHECK(sugar::shift_down(one)->polarity() == Polarity::Neg);
}

TEST_CASE("call stack and booleans") {
  TermRef s = sugar::elaborate(sugar::CallStack{term::unit(), term::covar("tp")});
  CHECK(alpha_equal(s, term::copair(term::not_v(term::unit()), term::covar("tp"))));
  CHECK(alpha_equal(sugar::elaborate(sugar::True{}), term::inj(1, term::unit())));
  CHECK(alpha_equal(sugar::elaborate(sugar::False{}), term::inj(2, term::unit())));
  CHECK(alpha_equal(sugar::elaborate(sugar::ShiftUpVal{term::unit()}),
                    term::pair(term::unit(), term::unit())));
  CHECK(alpha_equal(sugar::elaborate(sugar::ShiftDownCoval{term::covar("a")}),
                    term::copair(term::not_v(term::unit()), term::covar("a"))));
}

TEST_CASE("lambda and application") {
  TermRef lam = sugar::elaborate(sugar::Lam{{"x", one}, term::var("x"), one});
  CHECK(lam->tag() == Tag::MuPar);
  auto lt = check_value(TypingContext(one), lam);
  REQUIRE(lt.ok());
  CHECK(type_equal(lt.value(), sugar::arrow(one, one)));

  TermRef app = sugar::elaborate(sugar::App{lam, one, term::unit(), one});
  CHECK(app->tag() == Tag::MuPos);
  auto at = check_expression(TypingContext(one), app);
  REQUIRE(at.ok());
  CHECK(type_equal(at.value(), one));

  // At a negative result type the application is a negative mu.
  TypeRef neg = Type::negation(one);
  TypingContext g(one);
  g.bind_var("f", sugar::arrow(one, neg));
  TermRef napp = sugar::elaborate(sugar::App{term::var("f"), one, term::unit(), neg});
  CHECK(napp->tag() == Tag::MuNeg);
  auto nt = check_value(g, napp);
  REQUIRE(nt.ok());
  CHECK(type_equal(nt.value(), neg));

  // A non-value argument is bound first.
  TermRef arg = lbox::test::producer("mu a:1.< () | a >", one);
  TermRef bound = sugar::elaborate(sugar::App{lam, one, arg, one});
  REQUIRE(bound->tag() == Tag::MuPos);
  CHECK(bound->body()->left() == arg);
  CHECK(bound->body()->right()->tag() == Tag::MuTildePos);
  CHECK(check_expression(TypingContext(one), bound).ok());
}

TEST_CASE("shift binders") {
  TermRef up_match = sugar::elaborate(
      sugar::ShiftUpMatch{{"x", one}, cmd("< x | tp >", one)});
  REQUIRE(up_match->tag() == Tag::MuTildePair);
  CHECK(type_equal(up_match->binder(1).type, one));

  TermRef down_val = sugar::elaborate(sugar::ShiftDownVal{{"a", one}, cmd("< () | a >", one)});
  REQUIRE(down_val->tag() == Tag::MuPar);
  CHECK(type_equal(down_val->binder(0).type, Type::negation(one)));
  auto t = check_value(TypingContext(one), down_val);
  REQUIRE(t.ok());
  CHECK(type_equal(t.value(), sugar::shift_down(one)));
}

TEST_CASE("if") {
  TermRef e = sugar::elaborate(sugar::If{sugar::elaborate(sugar::True{}), term::var("t"),
                                         term::var("u"), one});
  REQUIRE(e->tag() == Tag::MuPos);
  CHECK(e->body()->right()->tag() == Tag::MuTildeMatch);
  TypingContext g(one);
  g.bind_var("t", one);
  g.bind_var("u", one);
  CHECK(check_expression(g, e).ok());
}

TEST_CASE("erasure of types and values") {
  CHECK(type_equal(sugar::erase_modality(Type::box(one)), Type::tensor(one, one)));
  CHECK(type_equal(sugar::erase_modality(ty("box ~box 1 @ 1")), ty("(~(1 * 1) * 1) @ 1")));
  TermRef boxed = term::box(term::unit());
  CHECK(alpha_equal(sugar::erase_modality(boxed, TypingContext(one)),
                    term::pair(term::unit(), term::unit())));
}

TEST_CASE("erasure recomputes polarity of modal cuts only") {
  // box ~1 is modal; its erasure ~1 * 1 is positive.
  TypingContext ctx(one);
  ctx.bind_modal("k", Type::negation(one));
  TermRef c = cmd("< box k | mu~box f:~1.< () | tp > >", one);
  REQUIRE(c->cut_polarity() == Polarity::Modal);
  TermRef e = sugar::erase_modality(c, ctx);
  CHECK(e->cut_polarity() == Polarity::Pos);
  CHECK_FALSE(has_box(e));
  check_cut_polarities(e, sugar::erase_modality(ctx));

  // A modal cut at a modal erased type stays modal.
  TermRef m = sugar::erase_modality(cmd("< box () | mu~box x:1.< x | tp > >", one), TypingContext(one));
  CHECK(m->cut_polarity() == Polarity::Modal);

  // Ill-typed input is rejected.
  CHECK_THROWS_AS(sugar::erase_modality(cmd("< x | tp >", one), TypingContext(one)), TypeError);
}

TEST_CASE("erasure preserves typing on the sample programs") {
  for (const auto& e : std::filesystem::directory_iterator(LBOX_PROGRAMS_DIR)) {
    if (e.path().extension() != ".lbox") continue;
    CAPTURE(e.path().string());
    SourceProgram p = program(lbox::test::read_file(e.path().string()));
    TypingContext ctx(p.return_type);
    auto before = check_command(ctx, p.command);
    REQUIRE(before.ok());
    TermRef erased = sugar::erase_modality(p.command, ctx);
    CHECK_FALSE(has_box(erased));
    TypingContext ectx = sugar::erase_modality(ctx);
    auto after = check_command(ectx, erased);
    REQUIRE_MESSAGE(after.ok(), lbox::test::why(after));
    CHECK(type_equal(after.value(), sugar::erase_modality(before.value())));
  }
}

TEST_CASE("erased context moves the modal zone") {
  TypingContext ctx(Type::box(one));
  ctx.bind_modal("x", Type::box(Type::negation(one)));
  ctx.bind_var("y", one);
  ctx.bind_covar("a", Type::box(one));
  TypingContext e = sugar::erase_modality(ctx);
  CHECK(e.theta().empty());
  REQUIRE(e.lookup_var("x"));
  CHECK(type_equal(e.lookup_var("x"), ty("~1 * 1")));
  CHECK(type_equal(e.lookup_covar("a"), ty("1 * 1")));
  CHECK(type_equal(e.return_type(), ty("1 * 1")));
}
