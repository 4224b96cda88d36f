#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "regrew/grammar.hpp"

namespace regrew {

struct TransformOptions {
  /// Drop productions whose lhs cannot be reached from the start symbol.
  bool prune_unreachable = false;

  /// Order in which the permitting-CD to semi-conditional construction primes
  /// the elements of its bookkeeping sets. kChain primes them in one fixed
  /// order (|Q|+1 states per set); kLattice instantiates every reachable
  /// subset and fails beyond `state_cap` states per component.
  enum class Priming { kChain, kLattice };
  Priming priming = Priming::kChain;
  std::size_t state_cap = 4096;

  /// kLiteral emits the non-applicability audit exactly as listed. It cannot
  /// certify that a production whose lhs is its own permitting symbol is
  /// blocked when a single copy of that lhs sits behind the first position;
  /// kRepaired adds a six-production gadget for that case.
  enum class Audit { kRepaired, kLiteral };
  Audit audit = Audit::kRepaired;

  bool compute_digests = true;

  /// The permitting-CD to semi-conditional construction refuses inputs whose
  /// output would exceed this many productions (estimated before building).
  std::size_t max_output_productions = 1'000'000;
};

struct TransformReport {
  std::string name;
  std::string input_digest;
  std::string output_digest;
  std::size_t input_nonterminals = 0;
  std::size_t input_productions = 0;
  std::size_t output_nonterminals = 0;
  std::size_t output_productions = 0;
  std::map<int, std::string> clause_of;  // output label -> construction clause
  std::vector<std::string> warnings;
  std::size_t pruned_productions = 0;
  std::vector<TransformReport> stages;  // pipelines only

  std::map<std::string, std::size_t> clause_counts() const;
};

template <class T>
struct TransformResult {
  T output;
  TransformReport report;
};

TransformResult<Grammar> sc_def2_to_rc(const Grammar& g, const TransformOptions& options = {});
TransformResult<Grammar> sc_def2_to_def1(const Grammar& g, const TransformOptions& options = {});
TransformResult<Grammar> sc_def1_to_def2(const Grammar& g, const TransformOptions& options = {});
TransformResult<Grammar> rc_def2_to_def1(const Grammar& g, const TransformOptions& options = {});
TransformResult<Grammar> rc_def1_to_def2(const Grammar& g, const TransformOptions& options = {});
TransformResult<Grammar> rc_normalize_forbid(const Grammar& g, const TransformOptions& options = {});
TransformResult<CDSystem> rc_to_permitting_cd(const Grammar& g, const TransformOptions& options = {});
TransformResult<Grammar> pcd_to_sc(const CDSystem& sys, const TransformOptions& options = {});
TransformResult<Grammar> rc_limited_normal_form(const Grammar& g, const TransformOptions& options = {});

/// CLI names: sc-to-rc, sc-def2to1, sc-def1to2, rc-def2to1, rc-def1to2,
/// lemma1, lemma2, thm3, limited-nf.
const std::vector<std::string>& transform_names();

/// Whether `name` accepts `input`; on false, `why` explains.
bool transform_accepts(std::string_view name, const Subject& input, std::string* why = nullptr);

TransformResult<Subject> apply_transform(std::string_view name, const Subject& input,
                                         const TransformOptions& options = {});

/// Runs the stages in order. When `auto_normalize` is set, lemma1 is inserted
/// before lemma2 if the input to lemma2 has a production forbidding its own
/// lhs; insertions are logged as warnings.
TransformResult<Subject> apply_pipeline(const std::vector<std::string>& names, const Subject& input,
                                        const TransformOptions& options = {}, bool auto_normalize = true);

std::string to_json(const TransformReport& report);

}  // namespace regrew
