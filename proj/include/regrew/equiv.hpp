#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "regrew/engine.hpp"
#include "regrew/grammar.hpp"
#include "regrew/transforms.hpp"

namespace regrew {

struct EquivVerdict {
  enum class Status { kEqual, kCounterexample, kInconclusive };
  Status status = Status::kInconclusive;
  int bound = 0;
  std::optional<Word> witness;       // counterexample only
  int present_in = 0;                // 1 = first argument, 2 = second
  std::vector<DerivationStep> derivation;  // for a grammar on the accepting side
  std::size_t words_a = 0;
  std::size_t words_b = 0;
  bool truncated_a = false;
  bool truncated_b = false;
  std::size_t states_a = 0;
  std::size_t states_b = 0;
  std::size_t max_forms = 0;
  std::vector<std::string> notes;
};

std::string_view to_string(EquivVerdict::Status s);

/// Compares L(a) and L(b) up to length n. A truncated side makes the verdict
/// inconclusive. A differing word is only reported after a membership search
/// confirms it on the accepting side and refutes it on the other.
EquivVerdict bounded_equiv(const Subject& a, const Subject& b, int n,
                           const EngineOptions& options = EngineOptions::from_environment());

struct GrammarShape {
  GrammarKind kind = GrammarKind::kRandomContext;
  std::optional<DerivationMode> mode;  // default for the kind when unset
  Degree degree{1, 1};
  int nonterminals = 3;  // <= 6, the start symbol included
  int terminals = 2;     // <= 4
  int productions = 4;   // <= 10
  int max_rhs = 2;       // <= 3
  double permit_density = 0.3;
  double forbid_density = 0.3;
  /// Random context only: A -> BC, A -> B with conditions, A -> a without.
  bool production_limited = false;
};

/// Deterministic for fixed (shape, seed); throws PreconditionError when the
/// shape is out of range.
Grammar random_grammar(const GrammarShape& shape, std::uint64_t seed);

struct FuzzCase {
  std::uint64_t seed = 0;
  std::string source_digest;
  std::string error;  // transform failure, empty otherwise
  EquivVerdict verdict;
  std::optional<bool> output_limited;  // grammar outputs read as random context
};

struct FuzzFailure {
  std::uint64_t seed = 0;
  std::size_t original_productions = 0;
  std::string minimized;  // canonical text
  std::size_t minimized_productions = 0;
  std::size_t minimized_rhs_length = 0;
  EquivVerdict verdict;
};

struct FuzzReport {
  GrammarShape shape;
  std::vector<std::string> pipeline;
  std::uint64_t first_seed = 0;
  std::size_t count = 0;
  int bound = 0;
  std::size_t max_forms = 0;
  std::vector<FuzzCase> cases;  // by seed
  std::size_t equal = 0;
  std::size_t counterexamples = 0;
  std::size_t inconclusive = 0;
  std::size_t errors = 0;
  std::vector<FuzzFailure> failures;
};

/// Throws PreconditionError when consecutive stages do not fit together or
/// the first stage cannot take the shape's grammars.
void check_pipeline_types(const GrammarShape& shape, const std::vector<std::string>& pipeline);

FuzzReport fuzz_pipeline(const GrammarShape& shape, const std::vector<std::string>& pipeline,
                         std::uint64_t first_seed, std::size_t count, int n,
                         const EngineOptions& options = EngineOptions::from_environment(),
                         const TransformOptions& transform_options = {});

std::string to_json(const EquivVerdict& v);
std::string to_json(const FuzzReport& r);

}  // namespace regrew
