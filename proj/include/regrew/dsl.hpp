#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "regrew/grammar.hpp"

namespace regrew {

/// Grammar document error with a 1-based source position.
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, int column, const std::string& message);
  int line() const { return line_; }
  int column() const { return column_; }
  /// The message without the position prefix.
  const std::string& detail() const { return detail_; }

 private:
  int line_;
  int column_;
  std::string detail_;
};

/// Parses a grammar document (see README for the format). Labels are assigned
/// in document order starting at 1.
Subject parse_grammar(std::string_view text);
Grammar parse_single_grammar(std::string_view text);
CDSystem parse_cd_system(std::string_view text);

/// Canonical text: sorted alphabets, productions in label order, constructed
/// symbols as `#k` names explained by a trailing symtab.
std::string render_grammar(const Grammar& g);
std::string render_grammar(const CDSystem& s);
std::string render_grammar(const Subject& s);

/// Parses a symtab description such as `idx(prime(A),2)`. Bare atom names are
/// terminals when listed in `terminal_names`; `t:` and `n:` prefixes force
/// the class.
Symbol parse_symbol_description(std::string_view text, const SymbolSet& terminals);

/// 16 hex digits of FNV-1a over the canonical rendering.
std::string digest(const Subject& s);
std::string digest(const Grammar& g);
std::string digest(const CDSystem& s);
std::string fnv1a_hex(std::string_view text);

}  // namespace regrew
