#pragma once

// Concrete syntax. A source file is a sequence of declarations:
//   cap <name>
//   let <name> [: Type] = <term>
//   main = <term>
// Line comments start with --. See README for the term grammar.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "capcalc/syntax.hpp"

namespace capcalc {

struct parse_error : error {
  parse_error(const std::string& msg, int line, int col)
      : error(msg), line(line), col(col) {}
  int line;
  int col;
};

struct Decl {
  enum class Kind { Cap, Let, Main };
  Kind kind;
  std::string name;  // Cap/Let
  TypePtr annot;     // optional Let annotation
  TermPtr term;      // Let/Main
  int pos = -1;
};

struct SourceFile {
  std::vector<Decl> decls;
  const Decl* main_decl() const;
  std::vector<std::string> cap_names() const;
};

SourceFile parse_source(std::string_view text);
TermPtr parse_term_text(std::string_view text);
TypePtr parse_type_text(std::string_view text);

// 1-based line/column for a byte offset
std::pair<int, int> line_col(std::string_view text, int pos);

}  // namespace capcalc
