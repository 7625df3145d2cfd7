#pragma once

// Concrete syntax for .lbox programs. Derived forms (fun, application,
// shifts, booleans, if) are expanded during parsing.

#include <string>
#include <string_view>

#include "lbox/core.hpp"
#include "lbox/diagnostic.hpp"
#include "lbox/printer.hpp"

namespace lbox {

struct SourceProgram {
  TypeRef return_type;
  TermRef command;
};

/// R when a program has no `ret` declaration: 1 + 1.
TypeRef default_return_type();

Checked<SourceProgram> parse_program(std::string_view text);
Checked<TypeRef> parse_type(std::string_view text);
/// A single command, with tp : return_type (default 1 + 1).
Checked<TermRef> parse_command(std::string_view text, const TypeRef& return_type = nullptr);

/// `ret R;` followed by the command on the next line.
std::string print_program(const SourceProgram& p);

}  // namespace lbox
