#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "lbox/diagnostic.hpp"

namespace lbox::detail {

enum class TokKind { Ident, Punct, End };

struct Token {
  TokKind kind;
  std::string text;            // identifier base or punctuation
  std::uint32_t stamp = 0;     // from an `x'12` suffix
  SourceSpan span;
};

struct LexFailure {
  Diagnostic diag;
};

/// Throws LexFailure on malformed input.
std::vector<Token> lex(std::string_view src);

bool is_keyword(std::string_view s);

}  // namespace lbox::detail
