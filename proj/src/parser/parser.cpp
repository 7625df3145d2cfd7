#include "lbox/parser.hpp"

#include <functional>

#include "hints.hpp"
#include "lbox/sugar.hpp"
#include "lexer.hpp"

namespace lbox {

TypeRef default_return_type() { return sugar::boolean(); }

namespace {

using detail::Hint;
using detail::HintScope;
using detail::TokKind;
using detail::Token;

struct ParseFailure {
  Diagnostic diag;
};

struct Parsed {
  TermRef term;
  Hint hint;
};

class Parser {
 public:
  Parser(std::vector<Token> toks, TypeRef r) : toks_(std::move(toks)), scope_(std::move(r)) {}

  SourceProgram program() {
    if (at_kw("ret")) {
      take();
      scope_.set_return_type(type());
      expect(";");
    }
    TermRef c = command();
    expect_end();
    return SourceProgram{scope_.return_type(), c};
  }

  TypeRef type_only() {
    TypeRef t = type();
    expect_end();
    return t;
  }

  TermRef command_only() {
    TermRef c = command();
    expect_end();
    return c;
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  HintScope scope_;

  // Pops on scope exit so that backtracking keeps the scope balanced.
  class VarGuard {
   public:
    VarGuard(HintScope& s, const Binder& b) : s_(s) { s_.push_var(b.name, b.type); }
    ~VarGuard() { s_.pop_var(); }
    VarGuard(const VarGuard&) = delete;
    VarGuard& operator=(const VarGuard&) = delete;

   private:
    HintScope& s_;
  };
  class CovarGuard {
   public:
    CovarGuard(HintScope& s, const Binder& b) : s_(s) { s_.push_covar(b.name, b.type); }
    ~CovarGuard() { s_.pop_covar(); }
    CovarGuard(const CovarGuard&) = delete;
    CovarGuard& operator=(const CovarGuard&) = delete;

   private:
    HintScope& s_;
  };

  // --- tokens --------------------------------------------------------------

  const Token& peek(std::size_t k = 0) const {
    return toks_[std::min(pos_ + k, toks_.size() - 1)];
  }
  bool at(std::string_view p, std::size_t k = 0) const {
    return peek(k).kind == TokKind::Punct && peek(k).text == p;
  }
  bool at_kw(std::string_view kw, std::size_t k = 0) const {
    return peek(k).kind == TokKind::Ident && peek(k).text == kw;
  }
  bool at_name() const {
    return peek().kind == TokKind::Ident && !detail::is_keyword(peek().text);
  }
  Token take() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  [[noreturn]] static void fail(const SourceSpan& at, std::string rule, std::string msg) {
    throw ParseFailure{Diagnostic{std::move(rule), std::move(msg), at}};
  }

  std::string describe(const Token& t) const {
    if (t.kind == TokKind::End) return "end of input";
    return "'" + t.text + (t.stamp ? "'" + std::to_string(t.stamp) : "") + "'";
  }

  void expect(std::string_view p) {
    if (!at(p)) fail(peek().span, "syntax", "expected '" + std::string(p) + "', found " + describe(peek()));
    take();
  }
  void expect_kw(std::string_view kw) {
    if (!at_kw(kw)) fail(peek().span, "syntax", "expected '" + std::string(kw) + "', found " + describe(peek()));
    take();
  }
  void expect_end() {
    if (peek().kind != TokKind::End)
      fail(peek().span, "syntax", "unexpected trailing input " + describe(peek()));
  }

  Name name() {
    if (!at_name()) fail(peek().span, "syntax", "expected an identifier, found " + describe(peek()));
    Token t = take();
    if (t.stamp) reserve_stamp(t.stamp);
    return Name{t.text, t.stamp};
  }

  Binder binder() {
    SourceSpan sp = peek().span;
    Name n = name();
    if (n == toplevel_name()) fail(sp, "scope", "tp is reserved and cannot be bound");
    expect(":");
    return Binder{n, type()};
  }

  template <class F>
  static TermRef build(const SourceSpan& sp, F&& f) {
    try {
      return f();
    } catch (const StratificationError& e) {
      fail(sp, "stratification", e.what());
    }
  }

  // --- types ---------------------------------------------------------------

  TypeRef type(int min_prec = 0) {
    TypeRef lhs = type_prefix();
    for (;;) {
      int prec;
      TypeKind kind = TypeKind::Unit;
      if (at("*")) prec = 4, kind = TypeKind::Tensor;
      else if (at("&")) prec = 3, kind = TypeKind::With;
      else if (at("+")) prec = 2, kind = TypeKind::Sum;
      else if (at("@")) prec = 1, kind = TypeKind::Par;
      else if (at("->")) prec = 0;
      else break;
      const bool arrow = kind == TypeKind::Unit;
      // `-> <` is a branch arrow in mu{...} / mu~{...}, not a function type.
      if (arrow && at("<", 1)) break;
      if (prec < min_prec) break;
      take();
      TypeRef rhs = type(arrow ? prec : prec + 1);
      lhs = arrow ? sugar::arrow(lhs, rhs) : std::make_shared<const Type>(kind, lhs, rhs);
    }
    return lhs;
  }

  TypeRef type_prefix() {
    if (at("~")) return take(), Type::negation(type_prefix());
    if (at_kw("box")) return take(), Type::box(type_prefix());
    if (at_kw("up")) return take(), sugar::shift_up(type_prefix());
    if (at_kw("down")) return take(), sugar::shift_down(type_prefix());
    if (at_kw("bool")) return take(), sugar::boolean();
    if (at("1")) return take(), Type::unit();
    if (at("(")) {
      take();
      TypeRef t = type();
      expect(")");
      return t;
    }
    fail(peek().span, "syntax", "expected a type, found " + describe(peek()));
  }

  // --- commands ------------------------------------------------------------

  TermRef command() {
    SourceSpan sp = peek().span;
    expect("<");
    Parsed l = producer();
    std::optional<Polarity> marker;
    if (at("|+")) marker = Polarity::Pos;
    else if (at("|-")) marker = Polarity::Neg;
    else if (at("|^")) marker = Polarity::Modal;
    else if (!at("|")) fail(peek().span, "syntax", "expected '|', found " + describe(peek()));
    take();
    Parsed r = consumer();
    expect(">");
    std::optional<Polarity> p = marker ? marker : detail::infer_cut_polarity(l.hint, r.hint);
    if (!p)
      fail(sp, "syntax", "cannot infer the polarity of this cut; write |+, |- or |^");
    return build(sp, [&] { return term::cut(*p, l.term, r.term); });
  }

  TermRef body_with_var(const Binder& x) {
    VarGuard g(scope_, x);
    return command();
  }
  TermRef body_with_covar(const Binder& a) {
    CovarGuard g(scope_, a);
    return command();
  }

  // --- producers -----------------------------------------------------------

  bool starts_argument() const {
    if (at_name()) return peek().text != toplevel_name().base;
    if (at("(")) return true;
    for (auto kw : {"mu", "box", "inl", "inr", "up", "true", "false"})
      if (at_kw(kw)) return !(kw == std::string_view("mu") && at("~", 1));
    return false;
  }

  Parsed producer() {
    if (at_kw("fun")) return lambda();
    if (at_kw("if")) return conditional();
    SourceSpan sp = peek().span;
    Parsed f = prefix();
    while (starts_argument()) {
      SourceSpan arg_sp = peek().span;
      Parsed a = prefix();
      f = application(sp, arg_sp, f, a);
    }
    return f;
  }

  Parsed prefix() {
    SourceSpan sp = peek().span;
    if (at_kw("box")) {
      take();
      Parsed v = prefix();
      return {build(sp, [&] { return term::box(v.term); }), detail::box_hint(v.hint)};
    }
    if (at_kw("inl") || at_kw("inr")) {
      int i = take().text == "inl" ? 1 : 2;
      Parsed v = prefix();
      return {build(sp, [&] { return term::inj(i, v.term); }), detail::inj_hint(v.hint)};
    }
    if (at_kw("up")) {
      take();
      Parsed v = prefix();
      TermRef t = build(sp, [&] { return sugar::elaborate(sugar::ShiftUpVal{v.term}); });
      return {t, v.hint.type ? Hint::of(sugar::shift_up(v.hint.type))
                             : Hint::polarity(Polarity::Pos)};
    }
    return atom();
  }

  Parsed atom() {
    SourceSpan sp = peek().span;
    if (at_name()) {
      Name n = name();
      if (n == toplevel_name())
        fail(sp, "scope", "tp is a covariable and cannot appear as a value");
      if (scope_.has_covar(n) && !scope_.has_var(n))
        fail(sp, "scope", n.str() + " is bound as a covariable but used as a variable");
      return {term::var(n), scope_.var(n)};
    }
    if (at_kw("true") || at_kw("false")) {
      bool t = take().text == "true";
      TermRef v = t ? sugar::elaborate(sugar::True{}) : sugar::elaborate(sugar::False{});
      return {v, Hint::of(sugar::boolean())};
    }
    if (at("(")) {
      take();
      if (at(")")) {
        take();
        return {term::unit(), Hint::of(Type::unit())};
      }
      Parsed p = producer();
      if (at(",")) {
        take();
        Parsed q = producer();
        expect(")");
        return {build(sp, [&] { return term::pair(p.term, q.term); }),
                detail::pair_hint(p.hint, q.hint)};
      }
      if (at(":")) {
        take();
        SourceSpan tsp = peek().span;
        TypeRef t = type();
        expect(")");
        if ((p.hint.type && !type_equal(p.hint.type, t)) ||
            (p.hint.pol && *p.hint.pol != t->polarity()))
          fail(tsp, "syntax", "ascription " + print(t) + " disagrees with the term");
        return {p.term, Hint::of(t)};
      }
      expect(")");
      return p;
    }
    if (at_kw("mu")) return mu_form();
    fail(sp, "syntax", "expected a value or expression, found " + describe(peek()));
  }

  Parsed mu_form() {
    SourceSpan sp = take().span;
    if (at("~")) fail(sp, "stratification", "mu~ forms are consumers, found in producer position");
    if (at("[")) {
      take();
      Binder x = binder();
      expect("]");
      expect(".");
      TermRef c = body_with_var(x);
      return {build(sp, [&] { return term::mu_not(x, c); }), Hint::of(Type::negation(x.type))};
    }
    if (at("(")) {
      take();
      Binder a = binder();
      if (at("::")) {
        take();
        Binder b = binder();
        expect(")");
        expect(".");
        TermRef c;
        {
          VarGuard g(scope_, a);
          c = body_with_covar(b);
        }
        TermRef t = build(sp, [&] { return sugar::elaborate(sugar::MuCall{a, b, c}); });
        return {t, Hint::of(sugar::arrow(a.type, b.type))};
      }
      expect(",");
      Binder b = binder();
      expect(")");
      expect(".");
      TermRef c;
      {
        CovarGuard g(scope_, a);
        c = body_with_covar(b);
      }
      return {build(sp, [&] { return term::mu_par(a, b, c); }), Hint::of(Type::par(a.type, b.type))};
    }
    if (at("{")) {
      take();
      expect_kw("fst");
      Binder a = binder();
      expect("->");
      TermRef c1 = body_with_covar(a);
      expect("|");
      expect_kw("snd");
      Binder b = binder();
      expect("->");
      TermRef c2 = body_with_covar(b);
      expect("}");
      return {build(sp, [&] { return term::mu_with(a, c1, b, c2); }),
              Hint::of(Type::with(a.type, b.type))};
    }
    if (at_kw("down")) {
      take();
      Binder a = binder();
      expect(".");
      TermRef c = body_with_covar(a);
      TermRef t = build(sp, [&] { return sugar::elaborate(sugar::ShiftDownVal{a, c}); });
      return {t, Hint::of(sugar::shift_down(a.type))};
    }
    Binder a = binder();
    expect(".");
    TermRef c = body_with_covar(a);
    return {build(sp, [&] { return term::mu(a, c); }), Hint::of(a.type)};
  }

  Parsed lambda() {
    SourceSpan sp = take().span;
    Binder x = binder();
    expect("=>");
    Parsed body;
    {
      VarGuard g(scope_, x);
      body = producer();
    }
    if (!body.hint.type)
      fail(sp, "syntax", "cannot determine the result type of this function; ascribe the body as (t : T)");
    TermRef t = build(sp, [&] { return sugar::elaborate(sugar::Lam{x, body.term, body.hint.type}); });
    return {t, Hint::of(sugar::arrow(x.type, body.hint.type))};
  }

  Parsed application(const SourceSpan& sp, const SourceSpan& arg_sp, const Parsed& f,
                     const Parsed& a) {
    const TypeRef& ft = f.hint.type;
    if (!ft || ft->kind() != TypeKind::Par || ft->left()->kind() != TypeKind::Not)
      fail(sp, "syntax", "cannot apply: the function's type is unknown or not A -> B");
    TypeRef arg_type = ft->left()->left();
    TypeRef result = ft->right();
    if (a.hint.type && !type_equal(a.hint.type, arg_type))
      fail(arg_sp, "syntax", "argument has type " + print(a.hint.type) + ", expected " + print(arg_type));
    TermRef t = build(sp, [&] {
      return sugar::elaborate(sugar::App{f.term, arg_type, a.term, result});
    });
    return {t, Hint::of(result)};
  }

  Parsed conditional() {
    SourceSpan sp = take().span;
    Parsed c = producer();
    expect_kw("then");
    Parsed t = producer();
    expect_kw("else");
    Parsed u = producer();
    TypeRef result = t.hint.type ? t.hint.type : u.hint.type;
    if (!result)
      fail(sp, "syntax", "cannot determine the type of this conditional; ascribe a branch");
    TermRef r = build(sp, [&] {
      return sugar::elaborate(sugar::If{c.term, t.term, u.term, result});
    });
    return {r, Hint::of(result)};
  }

  // --- consumers -----------------------------------------------------------

  bool may_start_call_stack() const {
    if (at_name())
      return peek().text != toplevel_name().base &&
             !(scope_.has_covar(Name{peek().text, peek().stamp}) &&
               !scope_.has_var(Name{peek().text, peek().stamp}));
    if (at("(")) return true;
    if (at_kw("mu")) return !at("~", 1);
    for (auto kw : {"box", "inl", "inr", "up", "true", "false", "fun", "if"})
      if (at_kw(kw)) return true;
    return false;
  }

  Parsed consumer() {
    SourceSpan sp = peek().span;
    if (may_start_call_stack()) {
      std::size_t save = pos_;
      std::optional<Parsed> v;
      try {
        v = producer();
      } catch (const ParseFailure&) {
      }
      if (v && at("::")) {
        take();
        Parsed s = consumer();
        TermRef t = build(sp, [&] { return sugar::elaborate(sugar::CallStack{v->term, s.term}); });
        if (v->hint.type && s.hint.type)
          return {t, Hint::of(sugar::arrow(v->hint.type, s.hint.type))};
        return {t, Hint::polarity(Polarity::Neg)};
      }
      pos_ = save;
    }
    return consumer_prefix();
  }

  Parsed consumer_prefix() {
    SourceSpan sp = peek().span;
    if (at_kw("fst") || at_kw("snd")) {
      int i = take().text == "fst" ? 1 : 2;
      Parsed s = consumer_prefix();
      return {build(sp, [&] { return term::proj(i, s.term); }), Hint::polarity(Polarity::Neg)};
    }
    if (at_kw("down")) {
      take();
      Parsed s = consumer_prefix();
      TermRef t = build(sp, [&] { return sugar::elaborate(sugar::ShiftDownCoval{s.term}); });
      return {t, s.hint.type ? Hint::of(sugar::shift_down(s.hint.type))
                             : Hint::polarity(Polarity::Neg)};
    }
    return consumer_atom();
  }

  Parsed consumer_atom() {
    SourceSpan sp = peek().span;
    if (at_name()) {
      Name n = name();
      if (scope_.has_var(n) && !scope_.has_covar(n))
        fail(sp, "scope", n.str() + " is bound as a variable but used as a covariable");
      return {term::covar(n), scope_.covar(n)};
    }
    if (at("[")) {
      take();
      Parsed v = producer();
      expect("]");
      return {build(sp, [&] { return term::not_v(v.term); }), detail::not_hint(v.hint)};
    }
    if (at("(")) {
      take();
      Parsed s = consumer();
      if (at(",")) {
        take();
        Parsed s2 = consumer();
        expect(")");
        return {build(sp, [&] { return term::copair(s.term, s2.term); }),
                detail::copair_hint(s.hint, s2.hint)};
      }
      expect(")");
      return s;
    }
    if (at_kw("mu")) {
      take();
      if (!at("~")) fail(sp, "stratification", "mu forms are producers, found in consumer position");
      take();
      return mu_tilde_form(sp);
    }
    fail(sp, "syntax", "expected a co-value or environment, found " + describe(peek()));
  }

  Parsed mu_tilde_form(const SourceSpan& sp) {
    if (at_kw("box")) {
      take();
      Binder x = binder();
      expect(".");
      TermRef c = body_with_var(x);
      return {build(sp, [&] { return term::mu_tilde_box(x, c); }), Hint::of(Type::box(x.type))};
    }
    if (at_kw("up")) {
      take();
      Binder x = binder();
      expect(".");
      TermRef c = body_with_var(x);
      TermRef t = build(sp, [&] { return sugar::elaborate(sugar::ShiftUpMatch{x, c}); });
      return {t, Hint::of(sugar::shift_up(x.type))};
    }
    if (at("(")) {
      take();
      if (at(")")) {
        take();
        expect(".");
        TermRef c = command();
        return {build(sp, [&] { return term::mu_tilde_unit(c); }), Hint::of(Type::unit())};
      }
      Binder x = binder();
      expect(",");
      Binder y = binder();
      expect(")");
      expect(".");
      TermRef c;
      {
        VarGuard g(scope_, x);
        c = body_with_var(y);
      }
      return {build(sp, [&] { return term::mu_tilde_pair(x, y, c); }),
              Hint::of(Type::tensor(x.type, y.type))};
    }
    if (at("{")) {
      take();
      expect_kw("inl");
      Binder x = binder();
      expect("->");
      TermRef c1 = body_with_var(x);
      expect("|");
      expect_kw("inr");
      Binder y = binder();
      expect("->");
      TermRef c2 = body_with_var(y);
      expect("}");
      return {build(sp, [&] { return term::mu_tilde_match(x, c1, y, c2); }),
              Hint::of(Type::sum(x.type, y.type))};
    }
    Binder x = binder();
    expect(".");
    TermRef c = body_with_var(x);
    return {build(sp, [&] { return term::mu_tilde(x, c); }), Hint::of(x.type)};
  }
};

template <class T, class F>
Checked<T> run_parser(std::string_view text, const TypeRef& r, F&& f) {
  try {
    Parser p(detail::lex(text), r ? r : default_return_type());
    return f(p);
  } catch (const detail::LexFailure& e) {
    return e.diag;
  } catch (const ParseFailure& e) {
    return e.diag;
  }
}

}  // namespace

Checked<SourceProgram> parse_program(std::string_view text) {
  return run_parser<SourceProgram>(text, nullptr, [](Parser& p) { return p.program(); });
}

Checked<TypeRef> parse_type(std::string_view text) {
  return run_parser<TypeRef>(text, nullptr, [](Parser& p) { return p.type_only(); });
}

Checked<TermRef> parse_command(std::string_view text, const TypeRef& return_type) {
  return run_parser<TermRef>(text, return_type, [](Parser& p) { return p.command_only(); });
}

std::string print_program(const SourceProgram& p) {
  return "ret " + print(p.return_type) + ";\n" + print(p.command, p.return_type) + "\n";
}

}  // namespace lbox
