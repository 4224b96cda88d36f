#pragma once

#include <set>
#include <vector>

#include "regrew/grammar.hpp"

namespace regrew::testing {

// Reference semantics written against the data model only; nothing here calls
// the engines under test.

using WordSet = std::set<Word>;

/// Condition check straight from the definitions: every permitting string is
/// a contiguous substring of the context and no forbidding string is. def1
/// drops the rewritten occurrence from the context, def2 keeps it.
bool oracle_applicable(const Production& p, const Word& form, std::size_t pos, DerivationMode mode);

/// Iterative deepening over derivation length with a depth-memo: R_d is the
/// set of forms of length <= n reachable in at most d steps. Doubling d stops
/// when R_d = R_2d, which forces R_d = R_(d+1), a fixpoint.
WordSet oracle_language(const Grammar& g, int n);

/// t-mode by definition: a component step is any k-derivation of length >= 1
/// ending in a form where no production of component k applies.
WordSet oracle_cd_language(const CDSystem& sys, int n);

/// { a_i^j : 1 <= i <= k, 1 <= j <= n } over terminals a1..ak.
WordSet t_n_words(int k, int n);
/// { a^m b^m c^m : 3m <= n }.
WordSet anbncn_words(int n);

Word word(const std::vector<const char*>& terminals);

}  // namespace regrew::testing
