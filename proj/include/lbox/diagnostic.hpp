#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>

namespace lbox {

struct SourceSpan {
  int line = 1;
  int column = 1;
  bool operator==(const SourceSpan&) const = default;
};

/// A user-facing error. `rule` names the violated typing rule or the parser
/// phase ("lexer", "syntax", "stratification", ...).
struct Diagnostic {
  std::string rule;
  std::string message;
  std::optional<SourceSpan> span;

  std::string render() const;
};

/// Either a value or the diagnostic explaining why there is none.
template <class T>
class Checked {
 public:
  Checked(T value) : data_(std::move(value)) {}
  Checked(Diagnostic d) : data_(std::move(d)) {}

  bool ok() const { return data_.index() == 0; }
  explicit operator bool() const { return ok(); }

  const T& value() const {
    if (!ok()) throw std::logic_error("Checked::value on error: " + error().render());
    return std::get<0>(data_);
  }
  const Diagnostic& error() const { return std::get<1>(data_); }

 private:
  std::variant<T, Diagnostic> data_;
};

}  // namespace lbox
