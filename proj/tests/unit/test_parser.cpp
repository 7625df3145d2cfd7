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

Diagnostic parse_error(std::string_view src) {
  auto r = parse_program(src);
  REQUIRE_FALSE(r.ok());
  return r.error();
}

std::vector<std::filesystem::path> corpus() {
  std::vector<std::filesystem::path> out;
  for (const auto& e : std::filesystem::directory_iterator(LBOX_PROGRAMS_DIR))
    if (e.path().extension() == ".lbox") out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("smallest closed program") {
  SourceProgram p = program("ret 1; < () | mu~(). <() | tp> >");
  CHECK(type_equal(p.return_type, one));
  TermRef expected = term::cut(
      Polarity::Modal, term::unit(),
      term::mu_tilde_unit(term::cut(Polarity::Modal, term::unit(), term::covar("tp"))));
  CHECK(alpha_equal(p.command, expected));
}

TEST_CASE("box and modal binder") {
  SourceProgram p = program("< box () | mu~box x:1. <x | tp> >");
  TermRef expected = term::cut(
      Polarity::Modal, term::box(term::unit()),
      term::mu_tilde_box({"x", one}, term::cut(Polarity::Modal, term::var("x"), term::covar("tp"))));
  CHECK(alpha_equal(p.command, expected));
  CHECK(type_equal(p.return_type, Type::sum(one, one)));
}

TEST_CASE("pair redex parses and round-trips") {
  const char* src = "< (inl (), ()) | mu~(x:1+1, y:1). <x | tp> >";
  SourceProgram p = program(src);
  TermRef expected = term::cut(
      Polarity::Modal, term::pair(term::inj(1, term::unit()), term::unit()),
      term::mu_tilde_pair({"x", Type::sum(one, one)}, {"y", one},
                          term::cut(Polarity::Modal, term::var("x"), term::covar("tp"))));
  CHECK(alpha_equal(p.command, expected));
  std::string printed = print_program(p);
  SourceProgram again = program(printed);
  CHECK(alpha_equal(again.command, p.command));
  CHECK(print_program(again) == printed);
}

TEST_CASE("printing") {
  CHECK(print(*term::cut(Polarity::Modal, term::unit(), term::covar("tp"))) == "< () | tp >");
  CHECK(print(*Type::par(Type::negation(one), one)) == "~1 @ 1");
  CHECK(print(*Type::tensor(Type::sum(one, one), one)) == "(1 + 1) * 1");
  CHECK(print(*Type::sum(Type::tensor(one, one), one)) == "1 * 1 + 1");
  CHECK(print(*Type::negation(Type::box(one))) == "~box 1");
  CHECK(print(*Type::negation(Type::tensor(one, one))) == "~(1 * 1)");
  CHECK(print(*Type::par(one, Type::par(one, one))) == "1 @ (1 @ 1)");
  CHECK(print(*Type::par(Type::par(one, one), one)) == "1 @ 1 @ 1");
}

TEST_CASE("type precedence and associativity") {
  CHECK(type_equal(ty("1 * 1 + 1"), Type::sum(Type::tensor(one, one), one)));
  CHECK(type_equal(ty("1 + 1 * 1"), Type::sum(one, Type::tensor(one, one))));
  CHECK(type_equal(ty("1 & 1 + 1"), Type::sum(Type::with(one, one), one)));
  CHECK(type_equal(ty("1 @ 1 + 1"), Type::par(one, Type::sum(one, one))));
  CHECK(type_equal(ty("~1 * 1"), Type::tensor(Type::negation(one), one)));
  CHECK(type_equal(ty("box 1 & 1"), Type::with(Type::box(one), one)));
  CHECK(type_equal(ty("1 @ 1 @ 1"), Type::par(Type::par(one, one), one)));
  CHECK(type_equal(ty("1 * 1 * 1"), Type::tensor(Type::tensor(one, one), one)));
  CHECK(type_equal(ty("1 -> 1 -> 1"), sugar::arrow(one, sugar::arrow(one, one))));
  CHECK(type_equal(ty("up 1"), Type::tensor(one, one)));
  CHECK(type_equal(ty("down 1"), Type::par(Type::negation(one), one)));
  CHECK(type_equal(ty("bool"), Type::sum(one, one)));
  CHECK(type_equal(ty("~(1 + 1)"), Type::negation(Type::sum(one, one))));
}

TEST_CASE("type printing round-trips") {
  const char* types[] = {"1", "~1 @ 1", "(1 + 1) * ~(1 & 1)", "box (1 * 1) + 1",
                         "1 @ (1 @ 1)", "~~box 1", "(1 @ 1) * 1 & 1"};
  for (const char* s : types) {
    TypeRef t = ty(s);
    CHECK(type_equal(ty(print(t)), t));
    CHECK(print(ty(print(t))) == print(t));
  }
}

TEST_CASE("cut polarity markers are printed only when needed") {
  // Nothing tells the parser the polarity of this cut.
  TermRef c = cmd("< inl () |+ a >");
  CHECK(c->cut_polarity() == Polarity::Pos);
  CHECK(print(c) == "< inl () |+ a >");
  CHECK(alpha_equal(cmd(print(c)), c));

  // Inferred from the consumer.
  TermRef d = cmd("< inl () | mu~z:1 + 1.< z | tp > >");
  CHECK(d->cut_polarity() == Polarity::Modal);
  CHECK(print(d).find("|^") == std::string::npos);

  // A marker that disagrees with inference is kept.
  TermRef e = term::cut(Polarity::Pos, term::unit(), term::covar("a"));
  CHECK(print(e) == "< () |+ a >");
  CHECK(alpha_equal(cmd(print(e)), e));

  auto err = parse_program("< inl () | a >");
  REQUIRE_FALSE(err.ok());
  CHECK(err.error().message.find("polarity") != std::string::npos);
}

TEST_CASE("derived forms parse to their expansions") {
  // V :: S is ([V], S)
  TermRef c = cmd("< f |- () :: tp >");
  REQUIRE(c->right()->tag() == Tag::CoPair);
  CHECK(c->right()->child(0)->tag() == Tag::NotV);
  CHECK(c->right()->child(1)->tag() == Tag::CoVar);

  // true / false
  CHECK(alpha_equal(cmd("< true | tp >"), cmd("< inl () | tp >")));
  CHECK(alpha_equal(cmd("< false | tp >"), cmd("< inr () | tp >")));

  // fun x:1 => x is mu(a:~1, b:1).< mu[x:1].< x | b > | a >
  TermRef lam = cmd("< fun x:1 => x | mu~f:1 -> 1.< () | tp > >")->left();
  TermRef expected = cmd("< mu(a:~1, b:1).< mu[x:1].< x | b > | a > | mu~f:1 -> 1.< () | tp > >")->left();
  CHECK(alpha_equal(lam, expected));

  // application with a value argument
  TermRef app = cmd("< (fun x:1 => x) () | tp >", one)->left();
  REQUIRE(app->tag() == Tag::MuPos);
  TermRef body = app->body();
  CHECK(body->cut_polarity() == Polarity::Neg);
  CHECK(alpha_equal(body->left(), lam));

  // ascription
  CHECK(alpha_equal(cmd("< (inl () : 1 + 1) | a >"), cmd("< inl () |^ a >")));
}

TEST_CASE("diagnostics carry spans") {
  Diagnostic lex = parse_error("< () | $ >");
  CHECK(lex.rule == "lexer");
  REQUIRE(lex.span);
  CHECK(lex.span->line == 1);
  CHECK(lex.span->column == 8);

  Diagnostic syn = parse_error("ret 1;\n< () | tp");
  CHECK(syn.rule == "syntax");
  REQUIRE(syn.span);
  CHECK(syn.span->line == 2);

  Diagnostic strat = parse_error("< (mu a:1 * ~1.< () | tp >, ()) | tp >");
  CHECK(strat.rule == "stratification");
  REQUIRE(strat.span);
  CHECK(strat.span->column == 3);

  Diagnostic cls = parse_error("< mu a:1.< a | tp > | tp >");
  CHECK(cls.rule == "scope");
  REQUIRE(cls.span);

  Diagnostic tp = parse_error("< mu tp:1.< () | tp > | tp >");
  CHECK(tp.rule == "scope");
  CHECK(tp.message.find("tp") != std::string::npos);

  Diagnostic tpv = parse_error("< tp | tp >");
  CHECK(tpv.rule == "scope");

  Diagnostic mu_tilde = parse_error("< mu~x:1.< x | tp > | tp >");
  CHECK(mu_tilde.rule == "stratification");
}

TEST_CASE("comments and stamps") {
  SourceProgram p = program("# leading comment\nret 1; # trailing\n< x'41 | tp > # end\n");
  CHECK(p.command->left()->name() == Name("x", 41));
  CHECK(fresh_name("x").stamp > 41);
}

TEST_CASE("corpus round-trip") {
  auto files = corpus();
  REQUIRE(files.size() >= 5);
  for (const auto& f : files) {
    CAPTURE(f.string());
    SourceProgram p = program(lbox::test::read_file(f.string()));
    std::string printed = print_program(p);
    SourceProgram again = program(printed);
    CHECK(alpha_equal(again.command, p.command));
    CHECK(type_equal(again.return_type, p.return_type));
    CHECK(print_program(again) == printed);
  }
}
