#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "lbox/parser.hpp"

namespace lbox::test {

inline TypeRef ty(std::string_view s) {
  auto r = parse_type(s);
  if (!r) throw std::runtime_error("bad type in test: " + r.error().render());
  return r.value();
}

inline TermRef cmd(std::string_view s, const TypeRef& ret = nullptr) {
  auto r = parse_command(s, ret);
  if (!r) throw std::runtime_error("bad command in test: " + r.error().render());
  return r.value();
}

inline SourceProgram program(std::string_view s) {
  auto r = parse_program(s);
  if (!r) throw std::runtime_error("bad program in test: " + r.error().render());
  return r.value();
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Rendered diagnostic of a failed result, or empty.
template <class R>
std::string why(const R& r) {
  return r.ok() ? std::string() : r.error().render();
}

/// Left side of a parsed command: a convenient way to build values.
inline TermRef producer(std::string_view s, const TypeRef& ret = nullptr) {
  return cmd("< " + std::string(s) + " |^ tp >", ret)->left();
}

}  // namespace lbox::test
