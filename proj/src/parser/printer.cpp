#include "lbox/printer.hpp"

#include "hints.hpp"

namespace lbox {

namespace {

int precedence(TypeKind k) {
  switch (k) {
    case TypeKind::Par:
      return 1;
    case TypeKind::Sum:
      return 2;
    case TypeKind::With:
      return 3;
    case TypeKind::Tensor:
      return 4;
    case TypeKind::Box:
    case TypeKind::Not:
      return 5;
    case TypeKind::Unit:
      return 6;
  }
  return 6;
}

void print_type(std::string& out, const Type& t, int min_prec) {
  const int p = precedence(t.kind());
  const bool parens = p < min_prec;
  if (parens) out += '(';
  switch (t.kind()) {
    case TypeKind::Unit:
      out += '1';
      break;
    case TypeKind::Box:
      out += "box ";
      print_type(out, *t.left(), 5);
      break;
    case TypeKind::Not:
      out += '~';
      print_type(out, *t.left(), 5);
      break;
    default: {
      static constexpr const char* ops[] = {"", " * ", " + ", "", "", " & ", " @ "};
      print_type(out, *t.left(), p);
      out += ops[static_cast<int>(t.kind())];
      print_type(out, *t.right(), p + 1);
    }
  }
  if (parens) out += ')';
}

class TermPrinter {
 public:
  explicit TermPrinter(TypeRef r) : scope_(std::move(r)) {}

  void term(const Term& t) {
    switch (t.tag()) {
      case Tag::Var:
      case Tag::CoVar:
        out_ += t.name().str();
        break;
      case Tag::Pair:
      case Tag::CoPair:
        out_ += '(';
        term(*t.child(0));
        out_ += ", ";
        term(*t.child(1));
        out_ += ')';
        break;
      case Tag::UnitV:
        out_ += "()";
        break;
      case Tag::BoxV:
        prefix("box ", t);
        break;
      case Tag::Inj1:
        prefix("inl ", t);
        break;
      case Tag::Inj2:
        prefix("inr ", t);
        break;
      case Tag::Proj1:
        prefix("fst ", t);
        break;
      case Tag::Proj2:
        prefix("snd ", t);
        break;
      case Tag::NotV:
        out_ += '[';
        term(*t.child(0));
        out_ += ']';
        break;
      case Tag::MuNot:
        out_ += "mu[";
        binder(t.binder(0));
        out_ += "].";
        var_body(t.binder(0), *t.body());
        break;
      case Tag::MuWith:
        out_ += "mu{fst ";
        binder(t.binder(0));
        out_ += " -> ";
        covar_body(t.binder(0), *t.child(0));
        out_ += " | snd ";
        binder(t.binder(1));
        out_ += " -> ";
        covar_body(t.binder(1), *t.child(1));
        out_ += '}';
        break;
      case Tag::MuPar:
        out_ += "mu(";
        binder(t.binder(0));
        out_ += ", ";
        binder(t.binder(1));
        out_ += ").";
        scope_.push_covar(t.binder(0).name, t.binder(0).type);
        covar_body(t.binder(1), *t.body());
        scope_.pop_covar();
        break;
      case Tag::MuNeg:
      case Tag::MuPos:
        out_ += "mu ";
        binder(t.binder(0));
        out_ += '.';
        covar_body(t.binder(0), *t.body());
        break;
      case Tag::MuTildeBox:
        out_ += "mu~box ";
        binder(t.binder(0));
        out_ += '.';
        var_body(t.binder(0), *t.body());
        break;
      case Tag::MuTildeUnit:
        out_ += "mu~().";
        term(*t.body());
        break;
      case Tag::MuTildePos:
      case Tag::MuTildeNeg:
        out_ += "mu~";
        binder(t.binder(0));
        out_ += '.';
        var_body(t.binder(0), *t.body());
        break;
      case Tag::MuTildePair:
        out_ += "mu~(";
        binder(t.binder(0));
        out_ += ", ";
        binder(t.binder(1));
        out_ += ").";
        scope_.push_var(t.binder(0).name, t.binder(0).type);
        var_body(t.binder(1), *t.body());
        scope_.pop_var();
        break;
      case Tag::MuTildeMatch:
        out_ += "mu~{inl ";
        binder(t.binder(0));
        out_ += " -> ";
        var_body(t.binder(0), *t.child(0));
        out_ += " | inr ";
        binder(t.binder(1));
        out_ += " -> ";
        var_body(t.binder(1), *t.child(1));
        out_ += '}';
        break;
      case Tag::Cut: {
        out_ += "< ";
        term(*t.left());
        auto inferred = detail::infer_cut_polarity(detail::core_hint(*t.left(), scope_),
                                                   detail::core_hint(*t.right(), scope_));
        if (inferred == t.cut_polarity()) {
          out_ += " | ";
        } else {
          out_ += t.cut_polarity() == Polarity::Pos   ? " |+ "
                  : t.cut_polarity() == Polarity::Neg ? " |- "
                                                      : " |^ ";
        }
        term(*t.right());
        out_ += " >";
        break;
      }
    }
  }

  std::string take() { return std::move(out_); }

 private:
  std::string out_;
  detail::HintScope scope_;

  void prefix(const char* kw, const Term& t) {
    out_ += kw;
    term(*t.child(0));
  }

  void binder(const Binder& b) {
    out_ += b.name.str();
    out_ += ':';
    print_type(out_, *b.type, 0);
  }

  void var_body(const Binder& b, const Term& body) {
    scope_.push_var(b.name, b.type);
    term(body);
    scope_.pop_var();
  }

  void covar_body(const Binder& b, const Term& body) {
    scope_.push_covar(b.name, b.type);
    term(body);
    scope_.pop_covar();
  }
};

TypeRef default_r() { return Type::sum(Type::unit(), Type::unit()); }

}  // namespace

std::string print(const Type& t) {
  std::string out;
  print_type(out, t, 0);
  return out;
}

std::string print(const TypeRef& t) { return t ? print(*t) : std::string("?"); }

std::string print(const Term& t, const TypeRef& return_type) {
  TermPrinter p(return_type ? return_type : default_r());
  p.term(t);
  return p.take();
}

std::string print(const TermRef& t, const TypeRef& return_type) {
  return t ? print(*t, return_type) : std::string("?");
}

}  // namespace lbox
