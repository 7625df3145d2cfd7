#include "doctest.h"
#include "support.hpp"

#include <array>

using namespace lbox;
using lbox::test::cmd;
using lbox::test::producer;
using lbox::test::ty;

namespace {

const TypeRef one = Type::unit();

// One representative type per polarity.
TypeRef representative(Polarity p) {
  switch (p) {
    case Polarity::Modal:
      return one;
    case Polarity::Neg:
      return Type::negation(one);
    case Polarity::Pos:
      return Type::tensor(one, Type::with(one, one));
  }
  return nullptr;
}

ClassSet classes(std::initializer_list<SyntaxClass> cs) {
  ClassSet s;
  for (auto c : cs) s = s.with(c);
  return s;
}

TermRef trivial_cmd() { return term::cut(Polarity::Modal, term::unit(), term::covar("tp")); }

}  // namespace

TEST_CASE("polarity_of examples") {
  CHECK(polarity_of(*one) == Polarity::Modal);
  CHECK(polarity_of(*Type::tensor(one, Type::with(one, one))) == Polarity::Pos);
  CHECK(polarity_of(*Type::sum(one, one)) == Polarity::Modal);
  CHECK(polarity_of(*Type::box(Type::negation(one))) == Polarity::Modal);
  CHECK(polarity_of(*Type::negation(one)) == Polarity::Neg);
  CHECK(polarity_of(*Type::par(one, one)) == Polarity::Neg);
}

TEST_CASE("odot examples and full table") {
  CHECK(odot(Polarity::Modal, Polarity::Modal) == Polarity::Modal);
  CHECK(odot(Polarity::Modal, Polarity::Neg) == Polarity::Pos);
  CHECK(odot(Polarity::Pos, Polarity::Pos) == Polarity::Pos);

  const std::array<Polarity, 3> all = {Polarity::Pos, Polarity::Neg, Polarity::Modal};
  for (Polarity a : all) {
    for (Polarity b : all) {
      Polarity expected = (a == Polarity::Modal && b == Polarity::Modal) ? Polarity::Modal
                                                                         : Polarity::Pos;
      CHECK(odot(a, b) == expected);
      CHECK(polarity_of(*Type::tensor(representative(a), representative(b))) == expected);
      CHECK(polarity_of(*Type::sum(representative(a), representative(b))) == expected);
    }
  }
}

TEST_CASE("polarity classes") {
  CHECK(is_box_plus(Polarity::Pos));
  CHECK(is_box_plus(Polarity::Modal));
  CHECK_FALSE(is_box_plus(Polarity::Neg));
  CHECK(is_non_modal(Polarity::Pos));
  CHECK(is_non_modal(Polarity::Neg));
  CHECK_FALSE(is_non_modal(Polarity::Modal));
}

TEST_CASE("classify examples") {
  TermRef c = trivial_cmd();
  TermRef mu_neg = term::mu({"a", Type::negation(one)}, c);
  TermRef mu_pos = term::mu({"a", one}, c);
  TermRef mu_tilde_neg = term::mu_tilde({"x", Type::negation(one)}, c);
  TermRef mu_tilde_pos = term::mu_tilde({"x", one}, c);

  CHECK(mu_neg->tag() == Tag::MuNeg);
  CHECK(classify(*mu_neg) == classes({SyntaxClass::Value, SyntaxClass::Expression}));
  CHECK(mu_pos->tag() == Tag::MuPos);
  CHECK(classify(*mu_pos) == classes({SyntaxClass::Expression}));
  CHECK(mu_tilde_neg->tag() == Tag::MuTildeNeg);
  CHECK(classify(*mu_tilde_neg) == classes({SyntaxClass::Environment}));
  CHECK(classify(*mu_tilde_pos) == classes({SyntaxClass::CoValue, SyntaxClass::Environment}));
  CHECK(classify(*c) == classes({SyntaxClass::Command}));
  CHECK(classify(*term::covar("a")) == classes({SyntaxClass::CoValue, SyntaxClass::Environment}));
  CHECK(classify(*term::unit()) == classes({SyntaxClass::Value, SyntaxClass::Expression}));
}

TEST_CASE("stratification is enforced by the factories") {
  TermRef c = trivial_cmd();
  TermRef mu_pos = term::mu({"a", one}, c);
  TermRef mu_tilde_neg = term::mu_tilde({"x", Type::negation(one)}, c);
  CHECK_THROWS_AS(term::pair(mu_pos, term::unit()), StratificationError);
  CHECK_THROWS_AS(term::cut(Polarity::Pos, term::unit(), mu_tilde_neg), StratificationError);
  CHECK_THROWS_AS(term::cut(Polarity::Neg, mu_pos, term::covar("a")), StratificationError);
  CHECK_THROWS_AS(term::proj(1, mu_tilde_neg), StratificationError);
  CHECK_NOTHROW(term::cut(Polarity::Neg, term::var("f"), mu_tilde_neg));
  CHECK_NOTHROW(term::cut(Polarity::Modal, mu_pos, term::covar("tp")));
}

TEST_CASE("free_vars examples") {
  TermRef c = term::cut(Polarity::Modal, term::var("x"), term::covar("a"));
  FreeNames fn = free_names(*c);
  CHECK(fn.vars == std::set<Name>{"x"});
  CHECK(fn.covars == std::set<Name>{"a"});

  TermRef mu = term::mu({"a", one}, c);
  fn = free_names(*mu);
  CHECK(fn.vars == std::set<Name>{"x"});
  CHECK(fn.covars.empty());

  fn = free_names(*term::box(term::pair(term::var("y"), term::var("y"))));
  CHECK(fn.vars == std::set<Name>{"y"});
  CHECK(fn.covars.empty());
}

TEST_CASE("substitute examples") {
  TermRef c = term::cut(Polarity::Modal, term::var("x"), term::covar("a"));
  TermRef v = term::box(term::unit());
  Substitution s;
  s.bind_var("x", v);
  CHECK(alpha_equal(substitute(c, s), term::cut(Polarity::Modal, v, term::covar("a"))));

  // Shadowed binder: the substitution does not reach the bound a.
  TermRef mu = term::mu({"a", one}, c);
  Substitution s2;
  s2.bind_covar("a", term::covar("b"));
  CHECK(alpha_equal(substitute(mu, s2), mu));

  // Capture avoidance: substituting a for the free b under a binder named a.
  TermRef under = term::mu({"a", one}, term::cut(Polarity::Modal, term::var("x"), term::covar("b")));
  Substitution s3;
  s3.bind_covar("b", term::covar("a"));
  TermRef out = substitute(under, s3);
  CHECK(out->binder(0).name != Name("a"));
  CHECK(free_names(*out).covars == std::set<Name>{"a"});
  TermRef expected = term::mu({"g", one}, term::cut(Polarity::Modal, term::var("x"), term::covar("a")));
  CHECK(alpha_equal(out, expected));
}

TEST_CASE("substitution rejects class mismatches") {
  TermRef mu_pos = term::mu({"a", one}, trivial_cmd());
  Substitution s;
  CHECK_THROWS_AS(s.bind_var("x", mu_pos), StratificationError);
  CHECK_THROWS_AS(s.bind_covar("a", term::mu_tilde({"x", Type::negation(one)}, trivial_cmd())),
                  StratificationError);
}

TEST_CASE("alpha equivalence") {
  TermRef a = cmd("< mu a:1.< () | a > | tp >");
  TermRef b = cmd("< mu b:1.< () | b > | tp >");
  TermRef c = cmd("< mu b:1.< () | tp > | tp >");
  CHECK(alpha_equal(a, b));
  CHECK_FALSE(alpha_equal(a, c));
  CHECK_FALSE(alpha_equal(cmd("< x | tp >"), cmd("< y | tp >")));
  // Binder annotations are part of the term.
  CHECK_FALSE(alpha_equal(cmd("< mu a:1.< () | a > | tp >"), cmd("< mu a:box 1.< box () | a > | tp >")));
  // Nested shadowing.
  CHECK(alpha_equal(cmd("< (x, ()) | mu~(x:1, y:1).< mu a:1.< x | a > | mu~x:1.< x | tp > > >"),
                    cmd("< (x, ()) | mu~(p:1, q:1).< mu c:1.< p | c > | mu~z:1.< z | tp > > >")));
  CHECK_FALSE(alpha_equal(cmd("< (x, ()) | mu~(x:1, y:1).< x | tp > >"),
                          cmd("< (x, ()) | mu~(x:1, y:1).< y | tp > >")));
}

namespace {

// s2 . s1 as one simultaneous substitution.
TermRef compose_then_apply(const TermRef& c, const Substitution& s1, const Substitution& s2) {
  Substitution both;
  for (const auto& [x, v] : s1.values()) both.bind_var(x, substitute(v, s2));
  for (const auto& [a, s] : s1.covalues()) both.bind_covar(a, substitute(s, s2));
  for (const auto& [x, v] : s2.values())
    if (!s1.values().count(x)) both.bind_var(x, v);
  for (const auto& [a, s] : s2.covalues())
    if (!s1.covalues().count(a)) both.bind_covar(a, s);
  return substitute(c, both);
}

}  // namespace

TEST_CASE("substitution composition and free-name bound") {
  const char* commands[] = {
      "< (x, y) | mu~(p:1, q:1).< (p, x) |^ a > >",
      "< mu b:1.< x | b > | mu~z:1.< (z, y) |^ a > >",
      "< mu[z:1].< (x, z) |^ a > | [y] >",
      "< box () | mu~box z:1.< (z, x) | mu~w:1 * 1.< w | a > > >",
      "< mu{fst c:1 -> < x | c > | snd d:1 -> < y | d >} | fst a >",
  };
  for (const char* src : commands) {
    TermRef c = cmd(src);
    Substitution s1;
    s1.bind_var("x", term::pair(term::var("y"), term::unit()));
    Substitution s2;
    s2.bind_var("y", term::box(term::var("w")));
    s2.bind_covar("a", term::covar("tp"));

    TermRef seq = substitute(substitute(c, s1), s2);
    CHECK(alpha_equal(seq, compose_then_apply(c, s1, s2)));

    // free(c[V/x]) is included in (free(c) \ {x}) + free(V)
    TermRef v = term::pair(term::var("y"), term::var("k"));
    Substitution sx;
    sx.bind_var("x", v);
    FreeNames after = free_names(*substitute(c, sx));
    FreeNames before = free_names(*c);
    before.vars.erase("x");
    FreeNames fv = free_names(*v);
    for (const Name& n : after.vars) CHECK((before.vars.count(n) || fv.vars.count(n)));
    for (const Name& n : after.covars) CHECK(before.covars.count(n));
  }
}

TEST_CASE("fresh names") {
  Name a = fresh_name("x");
  Name b = fresh_name("x");
  CHECK(a != b);
  CHECK(a.base == "x");
  CHECK(a.str().find('\'') != std::string::npos);
  reserve_stamp(b.stamp + 100);
  CHECK(fresh_name("y").stamp > b.stamp + 100);
}
