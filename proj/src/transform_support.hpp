#pragma once

// Shared plumbing for the constructions: collision-free symbol creation,
// clause bookkeeping, pruning and report assembly.

#include <functional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "regrew/grammar.hpp"
#include "regrew/transforms.hpp"

namespace regrew::detail {

/// Creates the new nonterminals of one construction. Every symbol passes
/// through make(), which wraps it in `depth` primes and records its role. Two
/// roles producing the same symbol is a construction bug; a made symbol that
/// already belongs to the input alphabet is a collision that build_fresh()
/// resolves by rebuilding with a deeper wrap.
class Fresh {
 public:
  Fresh(const SymbolSet& nonterminals, const SymbolSet& terminals, int depth);

  Symbol make(const Symbol& raw, std::string_view role);
  bool collided() const { return collided_; }
  int depth() const { return depth_; }

  /// One more than the deepest outer priming in the alphabet: wrapping that
  /// many times cannot produce an input symbol.
  static int escape_depth(const SymbolSet& nonterminals, const SymbolSet& terminals);

 private:
  const SymbolSet& n_;
  const SymbolSet& t_;
  int depth_;
  bool collided_ = false;
  std::unordered_map<Symbol, std::string_view, SymbolHash> made_;
};

template <class Build>
auto build_fresh(const SymbolSet& nonterminals, const SymbolSet& terminals, Build&& build) {
  {
    Fresh f(nonterminals, terminals, 0);
    auto out = build(f);
    if (!f.collided()) return out;
  }
  Fresh f(nonterminals, terminals, Fresh::escape_depth(nonterminals, terminals));
  auto out = build(f);
  if (f.collided()) throw InternalError("constructed symbols collide with the input alphabet");
  return out;
}

/// Primed^k(base) for the least k >= 1 with taken(...) false.
Symbol fresh_prime(const Symbol& base, const std::function<bool(const Symbol&)>& taken);

/// Productions in emission order with their clause tags.
class Emitter {
 public:
  void add(Symbol lhs, std::vector<Symbol> rhs, ConditionSet per, ConditionSet forb, std::string_view clause);
  void add(const Production& p, std::string_view clause);

  std::vector<Production>& productions() { return productions_; }
  std::vector<std::string>& clauses() { return clauses_; }

  /// Drops exact duplicates (same lhs, rhs and conditions), keeping the first.
  void deduplicate();

 private:
  std::vector<Production> productions_;
  std::vector<std::string> clauses_;
};

inline ConditionSet cond(const Symbol& s) { return ConditionSet{Condition{s}}; }
inline const ConditionSet kNone{};

/// Relabels, optionally prunes, and fills the report.
TransformResult<Grammar> finish(Grammar g, Emitter& emitter, std::string_view name, const Subject& input,
                                const TransformOptions& options);
TransformResult<CDSystem> finish(CDSystem sys, std::vector<Emitter>& components, std::string_view name,
                                 const Subject& input, const TransformOptions& options);

void require_sc11(const Grammar& g, DerivationMode mode, std::string_view what);
void require_rc(const Grammar& g, DerivationMode mode, std::string_view what);

}  // namespace regrew::detail
