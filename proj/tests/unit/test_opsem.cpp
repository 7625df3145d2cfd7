#include "doctest.h"
#include "support.hpp"

#include <chrono>
#include <filesystem>

#include "lbox/opsem.hpp"
#include "lbox/typing.hpp"

using namespace lbox;
using lbox::test::cmd;
using lbox::test::program;

namespace {

const TypeRef one = Type::unit();

// One step must fire `rule` and produce exactly `reduct` (up to renaming).
void golden(const char* redex, OpRule rule, const char* reduct) {
  CAPTURE(redex);
  StepResult r = step(cmd(redex, one));
  REQUIRE(r.stepped());
  REQUIRE(r.rule);
  CHECK(*r.rule == rule);
  CHECK_MESSAGE(alpha_equal(r.term, cmd(reduct, one)), print(r.term));
  CHECK(matching_rules(cmd(redex, one)).size() == 1);
}

}  // namespace

TEST_CASE("one golden step per rule") {
  auto t0 = std::chrono::steady_clock::now();
  golden("< mu a:1.< () | a > | mu~x:1.< x | tp > >", OpRule::Mu,
         "< () | mu~x:1.< x | tp > >");
  golden("< () | mu~x:1.< (x, x) |^ tp > >", OpRule::MuTilde, "< ((), ()) |^ tp >");
  golden("< () | mu~().< () | tp > >", OpRule::Unit, "< () | tp >");
  golden("< (inl (), ()) | mu~(x:1 + 1, y:1).< (y, x) |^ tp > >", OpRule::Pair,
         "< ((), inl ()) |^ tp >");
  golden("< inr () | mu~{inl x:1 -> < inl x |^ tp > | inr y:1 -> < inr y |^ tp >} >", OpRule::Match,
         "< inr () |^ tp >");
  golden("< box () | mu~box x:1.< box x | mu~box z:1.< z | tp > > >", OpRule::Box,
         "< box () | mu~box z:1.< z | tp > >");
  golden("< mu[x:1].< x | tp > | [()] >", OpRule::Not, "< () | tp >");
  golden("< mu(a:~1, b:1).< mu[x:1].< x | b > | a > | ([()], tp) >", OpRule::Par,
         "< mu[x:1].< x | tp > | [()] >");
  golden("< mu{fst a:1 -> < () | a > | snd b:1 + 1 -> < inl () | b >} | snd tp >", OpRule::With,
         "< inl () | tp >");
  auto elapsed = std::chrono::steady_clock::now() - t0;
  CHECK(elapsed < std::chrono::seconds(1));
}

TEST_CASE("worked reduction examples") {
  StepResult s = step(cmd("< () | mu~().< () | tp > >", one));
  REQUIRE(s.stepped());
  CHECK(alpha_equal(s.term, cmd("< () | tp >", one)));

  RunResult boxed = run(cmd("< box () | mu~box x:1.< x | tp > >", one), 10);
  CHECK(boxed.steps == 1);
  REQUIRE(boxed.final.terminal());
  CHECK(alpha_equal(boxed.final.term, term::unit()));

  RunResult open = run(cmd("< x | tp >", one), 10);
  CHECK(open.steps == 0);
  CHECK(open.final.stuck());
  CHECK_FALSE(open.fuel_exhausted);
}

TEST_CASE("identity application follows mu, par, not") {
  SourceProgram p = program(lbox::test::read_file(LBOX_PROGRAMS_DIR "/identity_app.lbox"));
  std::vector<OpRule> rules;
  RunResult r = run(p.command, default_fuel, [&](std::size_t, const TermRef&, const StepResult& s) {
    rules.push_back(*s.rule);
  });
  REQUIRE(r.final.terminal());
  CHECK(alpha_equal(r.final.term, term::unit()));
  CHECK(rules == std::vector<OpRule>{OpRule::Mu, OpRule::Par, OpRule::Not});
}

TEST_CASE("fuel") {
  // Ill-typed self-application never terminates.
  TermRef omega = cmd("< mu[f:~1].< f |- [f] > |- [mu[f:~1].< f |- [f] >] >");
  RunResult o = run(omega, 50);
  CHECK(o.fuel_exhausted);
  CHECK(o.steps == 50);
}

TEST_CASE("ill-polarised overlap is resolved by the cut polarity") {
  TermRef body = cmd("< () | tp >", one);
  TermRef l = term::mu({"a", Type::negation(one)}, body);
  TermRef r = term::mu_tilde({"x", Type::tensor(one, Type::negation(one))}, body);
  TermRef neg = term::cut(Polarity::Neg, l, r);
  CHECK(matching_rules(neg).size() == 2);
  CHECK(*step(neg).rule == OpRule::MuTilde);
  TermRef pos = term::cut(Polarity::Pos, l, r);
  CHECK(*step(pos).rule == OpRule::Mu);
}

TEST_CASE("sample programs: determinism, subject reduction, evaluation") {
  for (const auto& e : std::filesystem::directory_iterator(LBOX_PROGRAMS_DIR)) {
    if (e.path().extension() != ".lbox") continue;
    CAPTURE(e.path().string());
    SourceProgram p = program(lbox::test::read_file(e.path().string()));
    TypingContext ctx(p.return_type);
    REQUIRE(check_command(ctx, p.command).ok());
    RunResult r = run(p.command, default_fuel, [&](std::size_t, const TermRef& before, const StepResult& s) {
      CHECK(matching_rules(before).size() == 1);
      auto t = check_command(ctx, s.term);
      CHECK_MESSAGE(t.ok(), lbox::test::why(t));
    });
    REQUIRE(r.final.terminal());
    CHECK(free_names(*r.final.term).empty());
    TypingContext empty(p.return_type);
    CHECK(modal_restriction(empty, r.final.term).ok());
    auto vt = check_value(empty, r.final.term, p.return_type);
    CHECK(vt.ok());
  }
}
