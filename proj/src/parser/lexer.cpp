#include "lexer.hpp"

#include <array>
#include <cctype>

namespace lbox::detail {

namespace {

constexpr std::array<std::string_view, 16> kKeywords = {
    "mu",   "box",  "inl",   "inr", "fst",  "snd",  "ret", "fun",
    "if",   "then", "else",  "true", "false", "up", "down", "bool"};

// Longest match first.
constexpr std::array<std::string_view, 25> kPunct = {
    "|+", "|-", "|^", "::", "->", "=>", "<", ">", "|", "(", ")", "[", "]",
    "{",  "}",  ",",  ".",  ":",  ";",  "~", "*", "+", "&", "@", "1"};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

}  // namespace

bool is_keyword(std::string_view s) {
  for (auto k : kKeywords)
    if (k == s) return true;
  return false;
}

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    SourceSpan span{line, col};
    if (ident_start(c)) {
      std::size_t j = i;
      while (j < src.size() && ident_char(src[j])) ++j;
      Token t{TokKind::Ident, std::string(src.substr(i, j - i)), 0, span};
      if (j < src.size() && src[j] == '\'') {
        std::size_t k = j + 1;
        while (k < src.size() && std::isdigit(static_cast<unsigned char>(src[k]))) ++k;
        if (k == j + 1)
          throw LexFailure{{"lexer", "expected digits after ' in identifier", span}};
        unsigned long long v = std::stoull(std::string(src.substr(j + 1, k - j - 1)));
        if (v == 0 || v > UINT32_MAX)
          throw LexFailure{{"lexer", "identifier stamp out of range", span}};
        t.stamp = static_cast<std::uint32_t>(v);
        j = k;
      }
      advance(j - i);
      out.push_back(std::move(t));
      continue;
    }
    bool matched = false;
    for (auto p : kPunct) {
      if (src.substr(i, p.size()) == p) {
        // `1` must not run into an identifier or another digit.
        if (p == "1" && i + 1 < src.size() && ident_char(src[i + 1])) break;
        out.push_back(Token{TokKind::Punct, std::string(p), 0, span});
        advance(p.size());
        matched = true;
        break;
      }
    }
    if (!matched) {
      std::string shown = (static_cast<unsigned char>(c) < 0x80) ? std::string(1, c)
                                                                   : std::string("non-ASCII byte");
      throw LexFailure{{"lexer", "unexpected character '" + shown + "'", span}};
    }
  }
  out.push_back(Token{TokKind::End, "", 0, SourceSpan{line, col}});
  return out;
}

}  // namespace lbox::detail
