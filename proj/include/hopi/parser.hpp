// Concrete syntax.
//
//   term := app ("|" app)*
//   app  := atom ("<" arg ">")*
//   atom := "0" | PVAR | NAME "(" PVAR ")" "." app | NAME "!" "(" term ")"
//         | "<" PVAR ">" atom | "<" NVAR ">" atom | "(" term ")"
//         | NAME "." app | NAME "!" | NAME          (CCS-style sugar)
//   arg  := NAME | term
//
// Identifiers starting with an uppercase letter are process variables, all
// others are names. A name is a variable when bound by an enclosing name
// abstraction or declared free; otherwise it is a constant. An argument that
// is a bare name directly followed by ">" is a name argument.
#pragma once

#include <string>
#include <vector>

#include "hopi/syntax.hpp"

namespace hopi {

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t pos, std::vector<std::string> expected = {})
      : Error(what, pos), expected_(std::move(expected)) {}
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  std::vector<std::string> expected_;
};

struct SourceTerm {
  std::string text;
  SortContext declared_free;
};

/// Parses and sort-checks; the result carries resolved sort annotations.
Term parse(const SourceTerm& src);
inline Term parse(const std::string& text, const SortContext& ctx = {}) { return parse(SourceTerm{text, ctx}); }

/// Parses without sort checking.
Term parse_unchecked(const std::string& text, const SortContext& ctx = {});

/// Canonical text with minimal parentheses.
std::string print(const Term& t);

/// "line:col" for an offset into `text`.
std::string describe_position(const std::string& text, std::size_t pos);

}  // namespace hopi
