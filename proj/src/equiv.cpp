#include "regrew/equiv.hpp"

#include <algorithm>
#include <random>

#include <json.hpp>

#include "regrew/cd_engine.hpp"
#include "regrew/dsl.hpp"
#include "regrew/validate.hpp"

namespace regrew {

namespace {

LanguageSample sample_of(const Subject& s, int n, const EngineOptions& options) {
  if (const auto* g = std::get_if<Grammar>(&s)) return enumerate_bounded(*g, n, options);
  return enumerate_bounded_cd(std::get<CDSystem>(s), n, options);
}

const SymbolSet& terminals_of(const Subject& s) {
  return std::visit([](const auto& x) -> const SymbolSet& { return x.terminals; }, s);
}

// kFound / kNone / kInconclusive for one side; fills steps for grammars.
Witness::Status confirm(const Subject& s, const Word& w, const EngineOptions& options,
                        std::vector<DerivationStep>* steps) {
  if (const auto* g = std::get_if<Grammar>(&s)) {
    Witness wit = membership_witness(*g, w, options);
    if (wit.status == Witness::Status::kFound) {
      if (!replay_witness(*g, wit.steps, w)) throw InternalError("membership witness does not replay");
      if (steps) *steps = wit.steps;
    }
    return wit.status;
  }
  LanguageSample exact = enumerate_bounded_cd(std::get<CDSystem>(s), static_cast<int>(w.size()), options);
  if (exact.truncated) return Witness::Status::kInconclusive;
  return std::binary_search(exact.words.begin(), exact.words.end(), w, shortlex_less) ? Witness::Status::kFound
                                                                                     : Witness::Status::kNone;
}

std::string status_note(Witness::Status s) {
  switch (s) {
    case Witness::Status::kFound:
      return "derivable";
    case Witness::Status::kNone:
      return "not derivable";
    case Witness::Status::kInconclusive:
      return "search hit the form cap";
  }
  return {};
}

}  // namespace

std::string_view to_string(EquivVerdict::Status s) {
  switch (s) {
    case EquivVerdict::Status::kEqual:
      return "equal";
    case EquivVerdict::Status::kCounterexample:
      return "counterexample";
    case EquivVerdict::Status::kInconclusive:
      return "inconclusive";
  }
  return "?";
}

EquivVerdict bounded_equiv(const Subject& a, const Subject& b, int n, const EngineOptions& options) {
  if (n < 1) throw std::invalid_argument("bound must be positive");
  require_valid(validate_grammar(a), "equiv (first)");
  require_valid(validate_grammar(b), "equiv (second)");

  EquivVerdict v;
  v.bound = n;
  v.max_forms = options.max_forms;
  LanguageSample sa = sample_of(a, n, options);
  LanguageSample sb = sample_of(b, n, options);
  v.words_a = sa.words.size();
  v.words_b = sb.words.size();
  v.truncated_a = sa.truncated;
  v.truncated_b = sb.truncated;
  v.states_a = sa.states_explored;
  v.states_b = sb.states_explored;
  if (sa.truncated || sb.truncated) {
    v.status = EquivVerdict::Status::kInconclusive;
    if (sa.truncated) v.notes.push_back("first side hit the form cap of " + std::to_string(options.max_forms));
    if (sb.truncated) v.notes.push_back("second side hit the form cap of " + std::to_string(options.max_forms));
    return v;
  }
  if (terminals_of(a) != terminals_of(b)) v.notes.push_back("terminal alphabets differ");

  std::vector<Word> only_a, only_b;
  std::set_difference(sa.words.begin(), sa.words.end(), sb.words.begin(), sb.words.end(), std::back_inserter(only_a),
                      shortlex_less);
  std::set_difference(sb.words.begin(), sb.words.end(), sa.words.begin(), sa.words.end(), std::back_inserter(only_b),
                      shortlex_less);
  if (only_a.empty() && only_b.empty()) {
    v.status = EquivVerdict::Status::kEqual;
    return v;
  }

  // The shortlex-least differing word.
  bool from_a = !only_a.empty() && (only_b.empty() || shortlex_less(only_a.front(), only_b.front()));
  const Word w = from_a ? only_a.front() : only_b.front();
  const Subject& accepting = from_a ? a : b;
  const Subject& rejecting = from_a ? b : a;
  std::vector<DerivationStep> steps;
  Witness::Status yes = confirm(accepting, w, options, &steps);
  Witness::Status no = Witness::Status::kNone;
  bool in_alphabet = std::all_of(w.begin(), w.end(), [&](const Symbol& s) { return terminals_of(rejecting).count(s); });
  if (in_alphabet) no = confirm(rejecting, w, options, nullptr);

  if (yes == Witness::Status::kFound && no == Witness::Status::kNone) {
    v.status = EquivVerdict::Status::kCounterexample;
    v.witness = w;
    v.present_in = from_a ? 1 : 2;
    v.derivation = std::move(steps);
    return v;
  }
  if (yes == Witness::Status::kInconclusive || no == Witness::Status::kInconclusive) {
    v.status = EquivVerdict::Status::kInconclusive;
    v.notes.push_back("candidate " + render_word(w) + " could not be re-verified: accepting side " +
                      status_note(yes) + ", other side " + status_note(no));
    return v;
  }
  throw InternalError("enumeration and membership search disagree on " + render_word(w));
}

// ---------------------------------------------------------------------------
// random grammars

namespace {

class Dice {
 public:
  explicit Dice(std::uint64_t seed) : rng_(seed) {}
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(rng_() % n); }
  bool chance(double p) { return static_cast<double>(rng_() >> 11) * 0x1.0p-53 < p; }

 private:
  std::mt19937_64 rng_;
};

void check_shape(const GrammarShape& s) {
  auto bad = [](const std::string& why) { throw PreconditionError("grammar shape: " + why); };
  if (s.nonterminals < 1 || s.nonterminals > 6) bad("nonterminals must be in 1..6");
  if (s.terminals < 1 || s.terminals > 4) bad("terminals must be in 1..4");
  if (s.productions < 1 || s.productions > 10) bad("productions must be in 1..10");
  if (s.max_rhs < 1 || s.max_rhs > 3) bad("rhs length must be in 1..3");
  if (!(s.permit_density >= 0 && s.permit_density <= 1) || !(s.forbid_density >= 0 && s.forbid_density <= 1)) {
    bad("densities must be in [0,1]");
  }
  if (s.degree.permitting < 0 || s.degree.forbidding < 0 || s.degree.permitting > 3 || s.degree.forbidding > 3) {
    bad("degree components must be in 0..3");
  }
  if (s.production_limited && s.kind != GrammarKind::kRandomContext) bad("production-limited needs kind rc");
  if (s.production_limited && s.nonterminals < 1) bad("production-limited needs a nonterminal");
}

}  // namespace

Grammar random_grammar(const GrammarShape& shape, std::uint64_t seed) {
  check_shape(shape);
  static const char* kN[] = {"S", "A", "B", "C", "D", "E"};
  static const char* kT[] = {"a", "b", "c", "d"};
  std::vector<Symbol> n, t, v;
  for (int i = 0; i < shape.nonterminals; ++i) n.push_back(Symbol::nonterminal(kN[i]));
  for (int i = 0; i < shape.terminals; ++i) t.push_back(Symbol::terminal(kT[i]));
  v = n;
  v.insert(v.end(), t.begin(), t.end());

  Dice dice(seed);
  auto pick = [&](const std::vector<Symbol>& from) { return from[dice.below(from.size())]; };
  auto nonterminal_set = [&]() {
    std::vector<Symbol> chosen{pick(n)};
    if (n.size() > 1 && dice.chance(0.5)) chosen.push_back(pick(n));
    return singleton_conditions(chosen);
  };
  auto sc_condition = [&](int max_len) {
    std::size_t len = 1 + dice.below(static_cast<std::size_t>(max_len));
    Condition c;
    for (std::size_t k = 0; k < len; ++k) c.push_back(pick(v));
    return make_conditions({c});
  };

  const bool permits = shape.kind != GrammarKind::kForbidding;
  const bool forbids = shape.kind != GrammarKind::kPermitting;
  std::vector<Production> ps;
  for (int i = 0; i < shape.productions; ++i) {
    const bool last = i + 1 == shape.productions;
    Symbol lhs = i == 0 ? n.front() : pick(n);
    std::vector<Symbol> rhs;
    ConditionSet per, forb;
    bool conditioned = true;
    if (shape.production_limited) {
      std::size_t form = last ? 2 : dice.below(5);  // 0,1: A -> BC; 2,3: A -> a; 4: A -> B
      if (form <= 1) {
        rhs = {pick(n), pick(n)};
      } else if (form <= 3) {
        rhs = {pick(t)};
        conditioned = false;
      } else {
        rhs = {pick(n)};
      }
    } else {
      std::size_t len = 1 + dice.below(static_cast<std::size_t>(shape.max_rhs));
      for (std::size_t k = 0; k < len; ++k) rhs.push_back(last ? pick(t) : pick(v));
    }
    if (conditioned) {
      if (shape.kind == GrammarKind::kSemiConditional) {
        if (shape.degree.permitting > 0 && dice.chance(shape.permit_density)) per = sc_condition(shape.degree.permitting);
        if (shape.degree.forbidding > 0 && dice.chance(shape.forbid_density)) forb = sc_condition(shape.degree.forbidding);
      } else {
        if (permits && dice.chance(shape.permit_density)) per = nonterminal_set();
        if (forbids && dice.chance(shape.forbid_density)) forb = nonterminal_set();
      }
    }
    ps.push_back({i + 1, lhs, std::move(rhs), std::move(per), std::move(forb)});
  }

  Grammar g{shape.kind,
            shape.mode.value_or(default_mode(shape.kind)),
            shape.kind == GrammarKind::kSemiConditional ? shape.degree : Degree{},
            SymbolSet(n.begin(), n.end()),
            SymbolSet(t.begin(), t.end()),
            n.front(),
            std::move(ps)};
  auto report = validate_grammar(g);
  if (!report.ok) throw InternalError("random_grammar produced an invalid grammar: " + report.violations.front().code);
  return g;
}

// ---------------------------------------------------------------------------
// fuzzing

namespace {

struct StageType {
  bool cd = false;  // cd system rather than a grammar
  bool sc = false;  // semi-conditional rather than random context family
  DerivationMode mode = DerivationMode::kDef1;
  friend bool operator==(const StageType&, const StageType&) = default;
};

std::string describe_type(const StageType& t) {
  if (t.cd) return "cd system";
  return std::string(t.sc ? "sc" : "rc") + "/" + std::string(to_string(t.mode));
}

struct Signature {
  StageType in, out;
};

Signature signature_of(const std::string& name) {
  using M = DerivationMode;
  const StageType rc1{false, false, M::kDef1}, rc2{false, false, M::kDef2};
  const StageType sc1{false, true, M::kDef1}, sc2{false, true, M::kDef2};
  const StageType cd{true, false, M::kDef1};
  if (name == "sc-to-rc") return {sc2, rc1};
  if (name == "sc-def2to1") return {sc2, sc1};
  if (name == "sc-def1to2") return {sc1, sc2};
  if (name == "rc-def2to1") return {rc2, rc1};
  if (name == "rc-def1to2") return {rc1, rc2};
  if (name == "lemma1") return {rc1, rc1};
  if (name == "lemma2") return {rc1, cd};
  if (name == "thm3") return {cd, sc2};
  if (name == "limited-nf") return {rc1, rc1};
  throw PreconditionError("unknown transform '" + name + "'");
}

Subject run_pipeline(const std::vector<std::string>& pipeline, const Grammar& g, const TransformOptions& options) {
  if (pipeline.empty()) return g;
  return apply_pipeline(pipeline, g, options).output;
}

std::size_t total_rhs(const Grammar& g) {
  std::size_t k = 0;
  for (const auto& p : g.productions) k += p.rhs.size();
  return k;
}

}  // namespace

void check_pipeline_types(const GrammarShape& shape, const std::vector<std::string>& pipeline) {
  StageType current{false, shape.kind == GrammarKind::kSemiConditional, shape.mode.value_or(default_mode(shape.kind))};
  for (const auto& name : pipeline) {
    Signature sig = signature_of(name);
    if (!(sig.in == current)) {
      throw PreconditionError("stage type mismatch: " + name + " expects " + describe_type(sig.in) + " but receives " +
                              describe_type(current));
    }
    current = sig.out;
  }
}

FuzzReport fuzz_pipeline(const GrammarShape& shape, const std::vector<std::string>& pipeline,
                         std::uint64_t first_seed, std::size_t count, int n, const EngineOptions& options,
                         const TransformOptions& transform_options) {
  check_shape(shape);
  check_pipeline_types(shape, pipeline);
  FuzzReport report;
  report.shape = shape;
  report.pipeline = pipeline;
  report.first_seed = first_seed;
  report.count = count;
  report.bound = n;
  report.max_forms = options.max_forms;

  auto check = [&](const Grammar& g) {
    Subject out = run_pipeline(pipeline, g, transform_options);
    return std::make_pair(bounded_equiv(g, out, n, options), out);
  };
  auto still_fails = [&](const Grammar& g) {
    if (!validate_grammar(g).ok || g.productions.empty()) return false;
    try {
      return check(g).first.status == EquivVerdict::Status::kCounterexample;
    } catch (const PreconditionError&) {
      return false;
    }
  };

  for (std::size_t k = 0; k < count; ++k) {
    FuzzCase c;
    c.seed = first_seed + k;
    Grammar g = random_grammar(shape, c.seed);
    c.source_digest = digest(g);
    try {
      auto [verdict, out] = check(g);
      c.verdict = std::move(verdict);
      if (const auto* og = std::get_if<Grammar>(&out)) {
        Grammar as_rc = *og;
        as_rc.kind = GrammarKind::kRandomContext;
        as_rc.degree = {};
        auto r = validate_grammar(as_rc);
        c.output_limited = r.ok && r.classification.limited;
      }
    } catch (const PreconditionError& e) {
      c.error = e.what();
    }
    if (!c.error.empty()) {
      ++report.errors;
    } else if (c.verdict.status == EquivVerdict::Status::kEqual) {
      ++report.equal;
    } else if (c.verdict.status == EquivVerdict::Status::kInconclusive) {
      ++report.inconclusive;
    } else {
      ++report.counterexamples;
      // Greedy shrinking: drop productions, then condition entries.
      Grammar best = g;
      for (std::size_t i = 0; i < best.productions.size();) {
        Grammar candidate = best;
        candidate.productions.erase(candidate.productions.begin() + static_cast<std::ptrdiff_t>(i));
        if (still_fails(candidate)) {
          best = std::move(candidate);
        } else {
          ++i;
        }
      }
      for (std::size_t i = 0; i < best.productions.size(); ++i) {
        for (int side = 0; side < 2; ++side) {
          for (std::size_t j = 0;;) {
            const auto& set = side == 0 ? best.productions[i].per : best.productions[i].forb;
            if (j >= set.size()) break;
            Grammar candidate = best;
            auto& target = side == 0 ? candidate.productions[i].per : candidate.productions[i].forb;
            target.erase(target.begin() + static_cast<std::ptrdiff_t>(j));
            if (still_fails(candidate)) {
              best = std::move(candidate);
            } else {
              ++j;
            }
          }
        }
      }
      relabel(best.productions);
      FuzzFailure f;
      f.seed = c.seed;
      f.original_productions = g.productions.size();
      f.minimized_productions = best.productions.size();
      f.minimized_rhs_length = total_rhs(best);
      f.minimized = render_grammar(best);
      f.verdict = check(best).first;  // the final candidate is re-checked in full
      report.failures.push_back(std::move(f));
    }
    report.cases.push_back(std::move(c));
  }
  std::sort(report.failures.begin(), report.failures.end(), [](const FuzzFailure& a, const FuzzFailure& b) {
    return a.seed < b.seed;
  });
  return report;
}

// ---------------------------------------------------------------------------
// serialization

namespace {

nlohmann::json verdict_json(const EquivVerdict& v) {
  nlohmann::json j;
  j["status"] = std::string(to_string(v.status));
  j["bound"] = v.bound;
  j["max_forms"] = v.max_forms;
  j["words"] = {v.words_a, v.words_b};
  j["truncated"] = {v.truncated_a, v.truncated_b};
  j["states_explored"] = {v.states_a, v.states_b};
  if (v.witness) {
    j["witness"] = render_word(*v.witness);
    j["present_in"] = v.present_in == 1 ? "first" : "second";
    nlohmann::json steps = nlohmann::json::array();
    for (const auto& s : v.derivation) {
      steps.push_back({{"label", s.label}, {"position", s.position}, {"result", render_word(s.result)}});
    }
    if (!steps.empty()) j["derivation"] = steps;
  }
  if (!v.notes.empty()) j["notes"] = v.notes;
  return j;
}

}  // namespace

std::string to_json(const EquivVerdict& v) { return verdict_json(v).dump(2) + "\n"; }

std::string to_json(const FuzzReport& r) {
  nlohmann::json j;
  nlohmann::json shape;
  shape["kind"] = std::string(to_string(r.shape.kind));
  shape["mode"] = std::string(to_string(r.shape.mode.value_or(default_mode(r.shape.kind))));
  if (r.shape.kind == GrammarKind::kSemiConditional) {
    shape["degree"] = {r.shape.degree.permitting, r.shape.degree.forbidding};
  }
  shape["nonterminals"] = r.shape.nonterminals;
  shape["terminals"] = r.shape.terminals;
  shape["productions"] = r.shape.productions;
  shape["max_rhs"] = r.shape.max_rhs;
  shape["permit_density"] = r.shape.permit_density;
  shape["forbid_density"] = r.shape.forbid_density;
  shape["production_limited"] = r.shape.production_limited;
  j["shape"] = shape;
  j["pipeline"] = r.pipeline;
  j["seeds"] = {r.first_seed, r.first_seed + r.count - (r.count ? 1 : 0)};
  j["count"] = r.count;
  j["bound"] = r.bound;
  j["max_forms"] = r.max_forms;
  j["totals"] = {{"equal", r.equal},
                 {"counterexample", r.counterexamples},
                 {"inconclusive", r.inconclusive},
                 {"error", r.errors}};
  nlohmann::json cases = nlohmann::json::array();
  for (const auto& c : r.cases) {
    nlohmann::json cj;
    cj["seed"] = c.seed;
    cj["source_digest"] = c.source_digest;
    if (!c.error.empty()) {
      cj["error"] = c.error;
    } else {
      cj["verdict"] = verdict_json(c.verdict);
    }
    if (c.output_limited) cj["output_limited"] = *c.output_limited;
    cases.push_back(cj);
  }
  j["cases"] = cases;
  nlohmann::json failures = nlohmann::json::array();
  for (const auto& f : r.failures) {
    failures.push_back({{"seed", f.seed},
                        {"original_productions", f.original_productions},
                        {"minimized_productions", f.minimized_productions},
                        {"minimized_rhs_length", f.minimized_rhs_length},
                        {"minimized", f.minimized},
                        {"verdict", verdict_json(f.verdict)}});
  }
  j["failures"] = failures;
  return j.dump(2) + "\n";
}

}  // namespace regrew
