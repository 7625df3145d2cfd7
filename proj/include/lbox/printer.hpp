#pragma once

#include <string>

#include "lbox/core.hpp"

namespace lbox {

/// Minimal parenthesisation: ~ and box bind tightest, then * & + @.
std::string print(const Type& t);
std::string print(const TypeRef& t);

/// Single-line concrete syntax. A cut carries an explicit polarity marker
/// (`|+`, `|-`, `|^`) only when the parser could not infer it from the two
/// sides; `return_type` is the type assumed for tp during that inference.
std::string print(const Term& t, const TypeRef& return_type = nullptr);
std::string print(const TermRef& t, const TypeRef& return_type = nullptr);

}  // namespace lbox
