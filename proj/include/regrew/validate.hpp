#pragma once

#include <string>
#include <vector>

#include "regrew/grammar.hpp"

namespace regrew {

struct Violation {
  std::string code;
  std::string message;
  std::string location;  // "production 3", "component 2", "alphabet", ...
};

struct Classification {
  bool production_limited = false;
  bool limited = false;
  bool lhs_not_in_forbid = false;  // no production forbids its own lhs
  bool permitting = false;         // every forbidding set empty
  bool forbidding = false;         // every permitting set empty
  bool terminal_conditions = false;
  std::size_t max_per_count = 0;
  std::size_t max_forb_count = 0;
  std::size_t max_per_length = 0;
  std::size_t max_forb_length = 0;
  std::size_t productions = 0;
  std::size_t nonterminals = 0;
  std::size_t terminals = 0;
  std::size_t components = 0;  // 0 for a single grammar
};

struct ValidationReport {
  bool ok = true;
  std::vector<Violation> violations;
  Classification classification;

  bool has(std::string_view code) const;
};

ValidationReport validate_grammar(const Grammar& g);
ValidationReport validate_grammar(const CDSystem& s);
ValidationReport validate_grammar(const Subject& s);

/// Canonical JSON rendering (sorted keys, two-space indent).
std::string to_json(const ValidationReport& report);

/// Throws PreconditionError listing the violations unless the report is ok.
void require_valid(const ValidationReport& report, std::string_view what);

}  // namespace regrew
