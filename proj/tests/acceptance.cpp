// Runs the acceptance criteria and prints one PASS/FAIL line per criterion.
// Exit status is the number of failed criteria.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "oracle.hpp"
#include "regrew/cd_engine.hpp"
#include "regrew/dsl.hpp"
#include "regrew/engine.hpp"
#include "regrew/equiv.hpp"
#include "regrew/transforms.hpp"
#include "regrew/validate.hpp"

namespace {

using namespace regrew;
using testing::load;
using Status = EquivVerdict::Status;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Tally {
  std::size_t equal = 0, counterexamples = 0, inconclusive = 0, errors = 0, broken = 0, nonempty = 0;
  std::vector<std::string> problems;

  void verdict(const EquivVerdict& v, const std::string& what) {
    if (v.words_a > 0) ++nonempty;
    switch (v.status) {
      case Status::kEqual: ++equal; break;
      case Status::kInconclusive: ++inconclusive; break;
      case Status::kCounterexample:
        ++counterexamples;
        problems.push_back(what + ": counterexample " + render_word(*v.witness) + " in side " +
                           std::to_string(v.present_in));
        break;
    }
  }
  void error(const std::string& what, const std::string& message) {
    ++errors;
    problems.push_back(what + ": " + message);
  }
  void postcondition(bool ok, const std::string& what) {
    if (!ok) {
      ++broken;
      problems.push_back(what + ": postcondition violated");
    }
  }
  bool clean() const { return counterexamples == 0 && errors == 0 && broken == 0; }
  std::string summary() const {
    std::ostringstream s;
    s << equal << " equal, " << counterexamples << " counterexample, " << inconclusive << " inconclusive, " << errors
      << " error (" << nonempty << " with a nonempty source sample)";
    if (broken) s << ", " << broken << " postcondition failures";
    return s.str();
  }
};

// Transform and compare, folding exceptions into the tally.
void check_equal(Tally& t, const std::string& what, const Subject& source,
                 const std::function<Subject()>& transform, int n, const EngineOptions& options) {
  try {
    Subject out = transform();
    t.verdict(bounded_equiv(source, out, n, options), what);
  } catch (const std::exception& e) {
    t.error(what, e.what());
  }
}

GrammarShape sc_shape(DerivationMode mode) {
  GrammarShape s;
  s.kind = GrammarKind::kSemiConditional;
  s.mode = mode;
  s.nonterminals = 4;
  s.terminals = 2;
  s.productions = 6;
  s.max_rhs = 2;
  return s;
}

GrammarShape rc_shape() {
  GrammarShape s;
  s.nonterminals = 4;
  s.terminals = 2;
  s.productions = 5;
  s.max_rhs = 2;
  return s;
}

constexpr std::uint64_t kFuzzSeeds = 200;

// Digests render the whole output; the checks below never read them.
TransformOptions quick() {
  TransformOptions o;
  o.compute_digests = false;
  return o;
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

Outcome criterion1(const EngineOptions& options) {
  auto t0 = Clock::now();
  Tally t;
  for (const auto& f : testing::sc_corpus()) {
    Grammar g = load(f.text);
    check_equal(t, f.name, g, [&] { return Subject(sc_def2_to_rc(g).output); }, 5, options);
  }
  for (std::uint64_t seed = 1; seed <= kFuzzSeeds; ++seed) {
    Grammar g = random_grammar(sc_shape(DerivationMode::kDef2), seed);
    check_equal(t, "seed " + std::to_string(seed), g, [&] { return Subject(sc_def2_to_rc(g).output); }, 5, options);
  }
  double secs = seconds_since(t0);
  bool fast = secs < 300;
  return {t.clean() && fast, "sc def2 to rc, " + std::to_string(testing::sc_corpus().size()) + " fixtures + " +
                                 std::to_string(kFuzzSeeds) + " seeds at n=5: " + t.summary() +
                                 (fast ? "" : "; over the 5 min budget") +
                                 (t.problems.empty() ? "" : "; first: " + t.problems.front())};
}

Outcome criterion2(const EngineOptions& options) {
  Tally to1, to2;
  for (const auto& f : testing::sc_corpus()) {
    Grammar g = load(f.text);
    check_equal(to1, f.name, g, [&] { return Subject(sc_def2_to_def1(g).output); }, 6, options);
    Grammar g1 = testing::with_mode(g, DerivationMode::kDef1);
    check_equal(to2, f.name, g1, [&] { return Subject(sc_def1_to_def2(g1).output); }, 5, options);
  }
  for (std::uint64_t seed = 1; seed <= kFuzzSeeds; ++seed) {
    const std::string what = "seed " + std::to_string(seed);
    Grammar g = random_grammar(sc_shape(DerivationMode::kDef2), seed);
    check_equal(to1, what, g, [&] { return Subject(sc_def2_to_def1(g).output); }, 6, options);
    Grammar g1 = random_grammar(sc_shape(DerivationMode::kDef1), seed);
    check_equal(to2, what, g1, [&] { return Subject(sc_def1_to_def2(g1).output); }, 5, options);
  }
  std::string first;
  if (!to1.problems.empty()) first = "; first (def2to1): " + to1.problems.front();
  if (!to2.problems.empty()) first += "; first (def1to2): " + to2.problems.front();
  return {to1.clean() && to2.clean(),
          "sc def2 to def1 at n=6: " + to1.summary() + "; sc def1 to def2 at n=5: " + to2.summary() + first};
}

Outcome criterion3(const EngineOptions& options) {
  auto t0 = Clock::now();
  Tally t;
  auto one = [&](const Grammar& g, const std::string& what) {
    try {
      Grammar normal = rc_normalize_forbid(g, quick()).output;
      t.postcondition(validate_grammar(normal).classification.lhs_not_in_forbid, what + " lhs not in For");
      CDSystem sys = rc_to_permitting_cd(normal, quick()).output;
      auto r = validate_grammar(sys);
      t.postcondition(r.ok && r.classification.permitting && r.classification.max_per_count <= 1 &&
                          sys.components.size() == 2 * normal.productions.size() + 1,
                      what + " permitting, |Per| <= 1, 2n+1 components");
      t.verdict(bounded_equiv(g, sys, 6, options), what);
    } catch (const std::exception& e) {
      t.error(what, e.what());
    }
  };
  for (const auto& f : testing::rc_corpus()) one(load(f.text), f.name);
  for (std::uint64_t seed = 1; seed <= kFuzzSeeds; ++seed) one(random_grammar(rc_shape(), seed), "seed " + std::to_string(seed));
  double secs = seconds_since(t0);
  bool fast = secs < 900;
  return {t.clean() && fast, "random context to permitting CD, " + std::to_string(testing::rc_corpus().size()) +
                                 " fixtures + " + std::to_string(kFuzzSeeds) + " seeds at n=6: " + t.summary() +
                                 (fast ? "" : "; over the 15 min budget") +
                                 (t.problems.empty() ? "" : "; first: " + t.problems.front())};
}

Outcome criterion4(const EngineOptions& options) {
  Tally t;
  double slowest = 0;
  std::string slow_name;
  for (const auto& f : testing::production_limited_corpus()) {
    auto t0 = Clock::now();
    Grammar g = load(f.text);
    check_equal(t, f.name, g,
                [&] {
                  auto normal = rc_normalize_forbid(g, quick()).output;
                  return Subject(pcd_to_sc(rc_to_permitting_cd(normal, quick()).output, quick()).output);
                },
                4, options);
    double secs = seconds_since(t0);
    if (secs > slowest) {
      slowest = secs;
      slow_name = f.name;
    }
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.1f", slowest);
  bool fast = slowest < 60;
  return {t.clean() && t.inconclusive == 0 && fast,
          "random context to SC(1,1) end to end, " + std::to_string(testing::production_limited_corpus().size()) +
              " production-limited fixtures at n=4: " + t.summary() + "; slowest " + slow_name + " " + buf + " s" +
              (fast ? "" : " (over 60 s)") + (t.problems.empty() ? "" : "; first: " + t.problems.front())};
}

Outcome criterion5(const EngineOptions& options) {
  Tally t;
  for (const auto& f : testing::production_limited_corpus()) {
    Grammar g = load(f.text);
    try {
      Grammar out = rc_limited_normal_form(g, quick()).output;
      t.postcondition(validate_grammar(out).classification.limited, f.name + " limited");
      t.verdict(bounded_equiv(g, out, 4, options), f.name);
    } catch (const std::exception& e) {
      t.error(f.name, e.what());
    }
  }
  return {t.clean() && t.inconclusive == 0,
          "limited normal form on " + std::to_string(testing::production_limited_corpus().size()) +
              " fixtures at n=4: " + t.summary() + (t.problems.empty() ? "" : "; first: " + t.problems.front())};
}

Outcome criterion6(const EngineOptions& options) {
  Tally to2, to1, round;
  for (const auto& f : testing::rc_corpus()) {
    Grammar g = load(f.text);
    check_equal(to2, f.name, g, [&] { return Subject(rc_def1_to_def2(g).output); }, 6, options);
    Grammar g2 = testing::with_mode(g, DerivationMode::kDef2);
    check_equal(to1, f.name, g2, [&] { return Subject(rc_def2_to_def1(g2).output); }, 6, options);
    check_equal(round, f.name, g, [&] { return Subject(rc_def2_to_def1(rc_def1_to_def2(g).output).output); }, 6,
                options);
  }
  return {to2.clean() && to1.clean() && round.clean(),
          "random context def1 to def2: " + to2.summary() + "; def2 to def1: " + to1.summary() +
              "; round trip: " + round.summary()};
}

Outcome criterion7(const EngineOptions& options) {
  std::vector<std::string> bad;
  for (int k : {2, 3}) {
    for (int n : {3, 4}) {
      auto s = enumerate_bounded(load(testing::t_n_text(k)), n, options);
      if (s.truncated || testing::WordSet(s.words.begin(), s.words.end()) != testing::t_n_words(k, n)) {
        bad.push_back("T_" + std::to_string(k) + " at " + std::to_string(n));
      }
    }
  }
  auto s = enumerate_bounded(load(testing::anbncn_text()), 6, options);
  const testing::WordSet expected{testing::word({"a", "b", "c"}), testing::word({"a", "a", "b", "b", "c", "c"})};
  if (s.truncated || testing::WordSet(s.words.begin(), s.words.end()) != expected ||
      testing::anbncn_words(6) != expected) {
    bad.push_back("a^n b^n c^n at 6");
  }
  std::string detail = "T_2 and T_3 at bounds 3 and 4, a^n b^n c^n at 6";
  for (const auto& b : bad) detail += "; mismatch: " + b;
  return {bad.empty(), detail};
}

Outcome criterion8(const EngineOptions& options) {
  std::vector<testing::Fixture> all;
  for (const auto* corpus : {&testing::sc_corpus(), &testing::rc_corpus(), &testing::production_limited_corpus()}) {
    all.insert(all.end(), corpus->begin(), corpus->end());
  }
  all.push_back({"T_2", testing::t_n_text(2)});
  all.push_back({"T_3", testing::t_n_text(3)});
  all.push_back({"a^n b^n c^n", testing::anbncn_text()});
  std::size_t compared = 0;
  std::vector<std::string> bad;
  EngineOptions one = options, many = options;
  one.workers = 1;
  many.workers = std::max(4U, options.workers);
  for (const auto& f : all) {
    Grammar g = load(f.text);
    for (int n = 1; n <= 6; ++n) {
      auto a = enumerate_bounded(g, n, one);
      auto b = enumerate_bounded(g, n, many);
      ++compared;
      if (a.truncated || testing::WordSet(a.words.begin(), a.words.end()) != testing::oracle_language(g, n)) {
        bad.push_back(f.name + " n=" + std::to_string(n) + " oracle");
      }
      if (a.words != b.words || a.states_explored != b.states_explored) {
        bad.push_back(f.name + " n=" + std::to_string(n) + " workers");
      }
    }
  }
  std::string detail = std::to_string(all.size()) + " grammars, " + std::to_string(compared) +
                       " (grammar, n) pairs against the deepening oracle, 1 vs " + std::to_string(many.workers) +
                       " workers";
  for (const auto& b : bad) detail += "; mismatch: " + b;
  return {bad.empty(), detail};
}

Outcome criterion9(const EngineOptions& options) {
  // The lower bound ranges over all grammars; only the fixtures are checked.
  std::vector<std::string> bad;
  for (int k = 1; k <= 3; ++k) {
    Grammar sc = load(testing::t_n_text(k));
    Grammar rc = load(testing::t_n_rc_text(k));
    if (sc.nonterminals.size() != 2) bad.push_back("SC T_" + std::to_string(k) + " nonterminal count");
    if (rc.nonterminals.size() != static_cast<std::size_t>(k) + 1) {
      bad.push_back("RC T_" + std::to_string(k) + " nonterminal count");
    }
    for (const Grammar* g : {&sc, &rc}) {
      auto s = enumerate_bounded(*g, 5, options);
      if (s.truncated || testing::WordSet(s.words.begin(), s.words.end()) != testing::t_n_words(k, 5)) {
        bad.push_back(std::string(g == &sc ? "SC" : "RC") + " T_" + std::to_string(k) + " language");
      }
    }
  }
  std::string detail =
      "T_1..T_3 fixtures: SC(1,0) with 2 nonterminals, random context with n+1, languages match at n=5; the "
      "minimality claim is out of scope";
  for (const auto& b : bad) detail += "; mismatch: " + b;
  return {bad.empty(), detail};
}

}  // namespace

int main() {
  EngineOptions base = EngineOptions::from_environment();
  EngineOptions big = base;
  big.max_forms = std::max<std::size_t>(base.max_forms, 10'000'000);

  struct Entry {
    int number;
    std::function<Outcome()> run;
  };
  const std::vector<Entry> criteria{
      {1, [&] { return criterion1(base); }}, {2, [&] { return criterion2(base); }},
      {3, [&] { return criterion3(base); }}, {4, [&] { return criterion4(big); }},
      {5, [&] { return criterion5(big); }},  {6, [&] { return criterion6(base); }},
      {7, [&] { return criterion7(base); }}, {8, [&] { return criterion8(base); }},
      {9, [&] { return criterion9(base); }},
  };

  std::cout << "max_forms " << base.max_forms << " (criteria 4 and 5: " << big.max_forms << "), workers "
            << base.workers << "\n";
  int failed = 0;
  for (const auto& c : criteria) {
    auto t0 = Clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("aborted: ") + e.what()};
    }
    char secs[32];
    std::snprintf(secs, sizeof secs, "%.1f s", seconds_since(t0));
    std::cout << "criterion " << c.number << ": " << (o.pass ? "PASS" : "FAIL") << " [" << secs << "] " << o.detail
              << std::endl;
    if (!o.pass) ++failed;
  }
  return failed;
}
