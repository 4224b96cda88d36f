#pragma once

#include <string>
#include <vector>

#include "regrew/grammar.hpp"

namespace regrew::testing {

struct Fixture {
  std::string name;
  std::string text;
};

/// Semi-conditional, degree (1,1), def2; at most 6 nonterminals and 10 productions.
const std::vector<Fixture>& sc_corpus();
/// Random context family, def1; small enough for lemma1 -> lemma2 at n = 6.
const std::vector<Fixture>& rc_corpus();
/// Production-limited random context grammars, def1, at most two productions.
const std::vector<Fixture>& production_limited_corpus();

/// T_n = { a_i^j : 1 <= i <= n, j >= 1 } as the semi-conditional grammar of
/// degree (1,0) with nonterminals S and A.
std::string t_n_text(int n);
/// Context-free-shaped random context grammar for T_n with n+1 nonterminals.
std::string t_n_rc_text(int n);
/// Random context grammar for a^n b^n c^n.
std::string anbncn_text();

Grammar load(const std::string& text);
Grammar with_mode(Grammar g, DerivationMode mode);

}  // namespace regrew::testing
