#pragma once

#include <string>
#include <vector>

#include "regrew/engine.hpp"
#include "regrew/grammar.hpp"

namespace regrew {

/// Result of one component working to exhaustion from a form.
struct TStepResult {
  std::vector<Word> forms;  // k-terminal forms reached in >= 1 steps, shortlex order
  bool truncated = false;
  std::size_t states_explored = 0;
};

/// `component` is 0-based. Components rewrite under the context-excluding
/// relation (def1).
TStepResult t_step_successors(const CDSystem& sys, std::size_t component, const Word& form, int bound,
                              const EngineOptions& options = EngineOptions::from_environment());

struct TraceEntry {
  std::size_t component = 0;  // 0-based
  std::string component_name;
  std::size_t inner_steps = 0;  // shortest inner derivation length
  std::string source;           // form digests
  std::string result;
};

/// The cap bounds all forms visited, the outer set plus every inner closure;
/// hitting it marks the sample truncated.
LanguageSample enumerate_bounded_cd(const CDSystem& sys, int bound,
                                    const EngineOptions& options = EngineOptions::from_environment(),
                                    std::vector<TraceEntry>* trace = nullptr);

std::string form_digest(const Word& w);
std::string to_json(const std::vector<TraceEntry>& trace);

}  // namespace regrew
