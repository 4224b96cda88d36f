#include "fixtures.hpp"

#include "regrew/dsl.hpp"

namespace regrew::testing {

namespace {

std::string sc(const std::string& alphabet, const std::string& body) {
  return "kind sc\ndegree 1 1\n" + alphabet + "start S\n" + body;
}

std::string rc(const std::string& kind, const std::string& alphabet, const std::string& body) {
  return "kind " + kind + "\n" + alphabet + "start S\n" + body;
}

}  // namespace

const std::vector<Fixture>& sc_corpus() {
  static const std::vector<Fixture> corpus = {
      {"self_permit", sc("nonterminals S\nterminals a\n", "S -> a S per S\nS -> a\n")},
      {"t2", sc("nonterminals S A\nterminals a1 a2\n",
                "S -> a1 A\nS -> a1\nS -> a2 A\nS -> a2\n"
                "A -> a1 A per a1\nA -> a1 per a1\nA -> a2 A per a2\nA -> a2 per a2\n")},
      {"self_forbid", sc("nonterminals S A\nterminals a b\n", "S -> A A\nA -> a A for A\nA -> b\n")},
      {"terminal_conditions", sc("nonterminals S A B\nterminals a b c\n",
                                 "S -> A B\nA -> a per b\nB -> b\nA -> c for b\n")},
      {"ordered_release", sc("nonterminals S A B\nterminals a b\n",
                             "S -> A S\nS -> B\nA -> a per B\nB -> b for A\n")},
      {"doubling", sc("nonterminals S A B\nterminals a b\n",
                      "S -> A B\nA -> A A per B\nA -> a per B\nB -> b for A\n")},
      {"deadlock", sc("nonterminals S A C\nterminals a c\n", "S -> A C\nA -> a per C\nC -> c per A\n")},
      {"grow_then_stop", sc("nonterminals S\nterminals a\n", "S -> S S per S for a\nS -> a\n")},
      {"guarded_loop", sc("nonterminals S B\nterminals a b c\n", "S -> a B\nB -> b B per a for c\nB -> c\n")},
      {"crossed", sc("nonterminals S A B\nterminals a b\n",
                     "S -> A B\nA -> a A per B\nB -> b B per A\nA -> a for B\nB -> b\n")},
      {"unit_chain", sc("nonterminals S A B\nterminals a b\n", "S -> A\nA -> B per S\nA -> a\nB -> b\n")},
      {"string_context", sc("nonterminals S A B C\nterminals a b\n",
                            "S -> A B C\nA -> a per C for a\nB -> b for A\nC -> a per b\nC -> b A\n")},
  };
  return corpus;
}

const std::vector<Fixture>& rc_corpus() {
  static const std::vector<Fixture> corpus = {
      {"concat", rc("rc", "nonterminals S A B\nterminals a b\n", "S -> A B\nA -> a\nB -> b\n")},
      {"blocked_start", rc("rc", "nonterminals S A B\nterminals a b\n", "S -> A B per A for B\nA -> a\nB -> b\n")},
      {"self_forbid", rc("rc", "nonterminals S\nterminals a\n", "S -> S S for S\nS -> a\n")},
      {"self_permit", rc("rc", "nonterminals S\nterminals a\n", "S -> S S per S\nS -> a\n")},
      {"dead_unit", rc("rc", "nonterminals S A B\nterminals a b\n", "S -> A\nA -> B per S\nA -> a\n")},
      {"release_order", rc("rc", "nonterminals S A B\nterminals a b\n", "S -> A B\nA -> a A for B\nA -> a\nB -> b\n")},
      {"permit_other", rc("rc", "nonterminals S A B\nterminals a b\n", "S -> A B\nA -> a A per B\nA -> a\nB -> b\n")},
      {"mutual_block", rc("rc", "nonterminals S A B\nterminals a b\n", "S -> A B\nA -> a for B\nB -> b for A\n")},
      {"sibling", rc("rc", "nonterminals S A\nterminals a b\n", "S -> A A\nA -> a per A\nA -> b\n")},
      {"permitting_kind", rc("permitting", "nonterminals S A B\nterminals a b\n", "S -> A B\nA -> a per B\nB -> b\n")},
      {"forbidding_kind", rc("forbidding", "nonterminals S A B\nterminals a b\n", "S -> A B\nA -> a for B\nB -> b\n")},
      {"two_contexts", rc("rc", "nonterminals S A B\nterminals a b\n", "S -> A B\nA -> a per B for S\nB -> b per A\n")},
  };
  return corpus;
}

const std::vector<Fixture>& production_limited_corpus() {
  static const std::vector<Fixture> corpus = {
      {"terminal", rc("rc", "nonterminals S\nterminals a\n", "S -> a\n")},
      {"unit", rc("rc", "nonterminals S A\nterminals a\n", "S -> A\nA -> a\n")},
      {"pair", rc("rc", "nonterminals S A\nterminals a\n", "S -> A A\nA -> a\n")},
      {"self_forbid", rc("rc", "nonterminals S\nterminals a\n", "S -> S S for S\nS -> a\n")},
      {"self_permit", rc("rc", "nonterminals S\nterminals a\n", "S -> S S per S\nS -> a\n")},
  };
  return corpus;
}

std::string t_n_text(int n) {
  std::string terminals, s_rules, a_rules;
  for (int i = 1; i <= n; ++i) {
    const std::string a = "a" + std::to_string(i);
    terminals += " " + a;
    s_rules += "S -> " + a + " A\nS -> " + a + "\n";
    a_rules += "A -> " + a + " A per " + a + "\nA -> " + a + " per " + a + "\n";
  }
  return "kind sc\ndegree 1 0\nnonterminals S A\nterminals" + terminals + "\nstart S\n" + s_rules + a_rules;
}

std::string t_n_rc_text(int n) {
  std::string nonterminals = "S", terminals, body;
  for (int i = 1; i <= n; ++i) {
    const std::string a = "a" + std::to_string(i);
    const std::string x = "A" + std::to_string(i);
    nonterminals += " " + x;
    terminals += " " + a;
    body += "S -> " + a + " " + x + "\nS -> " + a + "\n" + x + " -> " + a + " " + x + "\n" + x + " -> " + a + "\n";
  }
  return "kind rc\nnonterminals " + nonterminals + "\nterminals" + terminals + "\nstart S\n" + body;
}

std::string anbncn_text() {
  // One round turns A B C into a A' b B' c C'; the primes are lifted back
  // only once all three have been primed; the terminal round runs in order.
  return "kind rc\n"
         "nonterminals S A B C Ap Bp Cp\n"
         "terminals a b c\n"
         "start S\n"
         "S -> A B C\n"
         "A -> a Ap per B C for Ap Bp Cp\n"
         "B -> b Bp per Ap C for Bp\n"
         "C -> c Cp per Ap Bp for Cp\n"
         "Ap -> A per Cp\n"
         "Bp -> B per Cp A\n"
         "Cp -> C per A B\n"
         "A -> a per B C for Ap Bp Cp\n"
         "B -> b per C for A Ap Bp Cp\n"
         "C -> c for A B Ap Bp Cp\n";
}

Grammar load(const std::string& text) { return parse_single_grammar(text); }

Grammar with_mode(Grammar g, DerivationMode mode) {
  g.mode = mode;
  return g;
}

}  // namespace regrew::testing
