#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "regrew/grammar.hpp"

namespace regrew {

struct EngineOptions {
  std::size_t max_forms = 1'000'000;  // visited forms per search
  unsigned workers = 1;

  /// Defaults overridden by REGREW_MAX_FORMS and REGREW_WORKERS.
  static EngineOptions from_environment();
};

struct DerivationStep {
  int label = 0;
  std::size_t position = 0;
  Word result;

  friend bool operator==(const DerivationStep&, const DerivationStep&) = default;
};

struct LanguageSample {
  int bound = 0;
  std::vector<Word> words;  // shortlex order
  bool truncated = false;
  std::size_t states_explored = 0;
  std::size_t max_forms = 0;
  std::string digest;  // of the enumerated grammar or system, filled by callers that want it
};

/// Shortlex: shorter first, then lexicographic by symbol order.
bool shortlex_less(const Word& a, const Word& b);

/// Whether p may rewrite form[pos]. Throws std::invalid_argument if the
/// position is out of range or does not hold p's lhs.
bool applicable(const Production& p, const Word& form, std::size_t pos, DerivationMode mode);

/// All direct steps from `form`, ordered by (position, label).
std::vector<DerivationStep> successors(const Grammar& g, const Word& form);

LanguageSample enumerate_bounded(const Grammar& g, int bound, const EngineOptions& options = EngineOptions::from_environment());

struct Witness {
  enum class Status { kFound, kNone, kInconclusive };
  Status status = Status::kNone;
  std::vector<DerivationStep> steps;  // from the start symbol; last result is the word
  std::size_t states_explored = 0;
};

Witness membership_witness(const Grammar& g, const Word& word,
                           const EngineOptions& options = EngineOptions::from_environment());

/// Replays `steps` from the start symbol through successors(); true iff every
/// step is a legal direct derivation and the final form equals `word`.
bool replay_witness(const Grammar& g, const std::vector<DerivationStep>& steps, const Word& word);

/// Space-separated symbol descriptions.
std::string render_word(const Word& w);
/// Parses space-separated terminal names against `terminals`; throws
/// std::invalid_argument on an unknown name or an empty word.
Word parse_word(std::string_view text, const SymbolSet& terminals);

std::string to_json(const LanguageSample& sample);

}  // namespace regrew
