#include "regrew/transforms.hpp"

#include <algorithm>
#include <map>

#include <json.hpp>

#include "regrew/dsl.hpp"
#include "regrew/validate.hpp"
#include "transform_support.hpp"

namespace regrew {

using detail::build_fresh;
using detail::cond;
using detail::Emitter;
using detail::finish;
using detail::Fresh;
using detail::kNone;

std::map<std::string, std::size_t> TransformReport::clause_counts() const {
  std::map<std::string, std::size_t> out;
  for (const auto& [label, clause] : clause_of) ++out[clause];
  return out;
}

namespace {

bool forbids_own_lhs(const Production& p) {
  return std::find(p.forb.begin(), p.forb.end(), Condition{p.lhs}) != p.forb.end();
}

// Per - {lhs}.
ConditionSet drop_lhs(const ConditionSet& per, const Symbol& lhs, bool& dropped) {
  ConditionSet out;
  dropped = false;
  for (const auto& c : per) {
    if (c == Condition{lhs}) {
      dropped = true;
    } else {
      out.push_back(c);
    }
  }
  return out;
}

// Deletes self-forbidding productions and removes the lhs from Per: the
// context-including relation becomes the context-excluding one.
Emitter def2_to_def1_productions(const Grammar& g, std::string_view name) {
  Emitter e;
  std::string dropped_tag = std::string(name) + "/clause 3";
  std::string kept_tag = std::string(name) + "/kept";
  for (const auto& p : g.productions) {
    if (forbids_own_lhs(p)) continue;
    bool dropped = false;
    ConditionSet per = drop_lhs(p.per, p.lhs, dropped);
    e.add(p.lhs, p.rhs, std::move(per), p.forb, dropped ? dropped_tag : kept_tag);
  }
  return e;
}

// Each (A -> x, Per, For) becomes (A -> A', 0, primed N) and (A' -> x, Per, For).
TransformResult<Grammar> split_with_primes(const Grammar& g, DerivationMode out_mode, std::string_view name) {
  return build_fresh(g.nonterminals, g.terminals, [&](Fresh& fresh) {
    std::map<Symbol, Symbol> prime;
    SymbolSet primes;
    for (const auto& a : g.nonterminals) {
      Symbol p = fresh.make(Symbol::primed(a), "primed nonterminal");
      prime.emplace(a, p);
      primes.insert(p);
    }
    ConditionSet forbid_primes = singleton_conditions(primes);
    std::string first = std::string(name) + "/priming";
    std::string second = std::string(name) + "/primed rewrite";
    Emitter e;
    for (const auto& p : g.productions) {
      const Symbol& ap = prime.at(p.lhs);
      e.add(p.lhs, {ap}, kNone, forbid_primes, first);
      e.add(ap, p.rhs, p.per, p.forb, second);
    }
    Grammar out{GrammarKind::kRandomContext, out_mode, {}, g.nonterminals, g.terminals, g.start, {}};
    out.nonterminals.insert(primes.begin(), primes.end());
    return finish(std::move(out), e, name, g, TransformOptions{});
  });
}

TransformResult<Grammar> with_options(TransformResult<Grammar> r, const Grammar& input, std::string_view name,
                                      const TransformOptions& options) {
  if (!options.prune_unreachable && options.compute_digests) return r;
  // Re-run the bookkeeping with the caller's options.
  Emitter e;
  for (const auto& p : r.output.productions) e.add(p, r.report.clause_of.at(p.label));
  Grammar g = r.output;
  g.productions.clear();
  return finish(std::move(g), e, name, input, options);
}

}  // namespace

TransformResult<Grammar> sc_def2_to_rc(const Grammar& g, const TransformOptions& options) {
  detail::require_sc11(g, DerivationMode::kDef2, "sc-to-rc");
  return build_fresh(g.nonterminals, g.terminals, [&](Fresh& fresh) {
    std::map<Symbol, Symbol> prime;
    for (const auto& a : g.terminals) prime.emplace(a, fresh.make(Symbol::primed(a), "primed terminal"));
    auto h = [&](const Symbol& s) {
      auto it = prime.find(s);
      return it == prime.end() ? s : it->second;
    };
    auto h_word = [&](const std::vector<Symbol>& w) {
      std::vector<Symbol> out;
      out.reserve(w.size());
      for (const auto& s : w) out.push_back(h(s));
      return out;
    };
    auto h_conds = [&](const ConditionSet& cs) {
      std::vector<Condition> out;
      for (const auto& c : cs) out.push_back(h_word(c));
      return make_conditions(std::move(out));
    };

    Emitter e;
    for (const auto& p : g.productions) {
      if (forbids_own_lhs(p)) continue;
      bool dropped = false;
      ConditionSet per = drop_lhs(h_conds(p.per), p.lhs, dropped);
      e.add(p.lhs, h_word(p.rhs), std::move(per), h_conds(p.forb), dropped ? "sc-to-rc/clause 3" : "sc-to-rc/clause 1");
    }
    ConditionSet original_n = singleton_conditions(g.nonterminals);
    for (const auto& [a, ap] : prime) e.add(ap, {a}, kNone, original_n, "sc-to-rc/clause 4");

    Grammar out{GrammarKind::kRandomContext, DerivationMode::kDef1, {}, g.nonterminals, g.terminals, g.start, {}};
    for (const auto& [a, ap] : prime) out.nonterminals.insert(ap);
    return finish(std::move(out), e, "sc-to-rc", g, options);
  });
}

TransformResult<Grammar> sc_def2_to_def1(const Grammar& g, const TransformOptions& options) {
  detail::require_sc11(g, DerivationMode::kDef2, "sc-def2to1");
  Emitter e = def2_to_def1_productions(g, "sc-def2to1");
  Grammar out = g;
  out.mode = DerivationMode::kDef1;
  out.productions.clear();
  return finish(std::move(out), e, "sc-def2to1", g, options);
}

TransformResult<Grammar> rc_def2_to_def1(const Grammar& g, const TransformOptions& options) {
  detail::require_rc(g, DerivationMode::kDef2, "rc-def2to1");
  Emitter e = def2_to_def1_productions(g, "rc-def2to1");
  Grammar out = g;
  out.mode = DerivationMode::kDef1;
  out.productions.clear();
  return finish(std::move(out), e, "rc-def2to1", g, options);
}

TransformResult<Grammar> rc_def1_to_def2(const Grammar& g, const TransformOptions& options) {
  detail::require_rc(g, DerivationMode::kDef1, "rc-def1to2");
  return with_options(split_with_primes(g, DerivationMode::kDef2, "rc-def1to2"), g, "rc-def1to2", options);
}

TransformResult<Grammar> rc_normalize_forbid(const Grammar& g, const TransformOptions& options) {
  detail::require_rc(g, DerivationMode::kDef1, "lemma1");
  return with_options(split_with_primes(g, DerivationMode::kDef1, "lemma1"), g, "lemma1", options);
}

TransformResult<Grammar> sc_def1_to_def2(const Grammar& g, const TransformOptions& options) {
  detail::require_sc11(g, DerivationMode::kDef1, "sc-def1to2");
  return build_fresh(g.nonterminals, g.terminals, [&](Fresh& fresh) {
    SymbolSet v = g.nonterminals;
    v.insert(g.terminals.begin(), g.terminals.end());
    SymbolSet added;
    auto make = [&](const Symbol& raw, std::string_view role) {
      Symbol s = fresh.make(raw, role);
      added.insert(s);
      return s;
    };
    auto bracket = [&](const Symbol& b) { return make(Symbol::packed({b}), "bracketed symbol"); };
    auto primed = [&](const Symbol& a) { return make(Symbol::primed(a), "primed nonterminal"); };
    Symbol s1 = make(detail::fresh_prime(g.start,
                                         [&](const Symbol& s) {
                                           return v.count(s) ||
                                                  (s.kind() == Symbol::Kind::kPrimed && g.nonterminals.count(s.base()));
                                         }),
                     "new start");

    Emitter e;
    e.add(s1, {bracket(g.start)}, kNone, kNone, "sc-def1to2/init start");
    for (const auto& a : g.terminals) e.add(bracket(a), {a}, kNone, kNone, "sc-def1to2/init terminal");
    for (const auto& p : g.productions) {
      const ConditionSet& u = p.per;
      const ConditionSet& w = p.forb;  // the forbidding string, v in the construction
      std::vector<Symbol> first_rewrite{bracket(p.rhs.front())};
      first_rewrite.insert(first_rewrite.end(), p.rhs.begin() + 1, p.rhs.end());
      e.add(bracket(p.lhs), first_rewrite, u, w, "sc-def1to2/schema 1");
      const Symbol ap = primed(p.lhs);
      for (const auto& b : v) {
        Symbol pb = make(Symbol::indexed(b, p.label), "[pB]");
        Symbol p1b = make(Symbol::staged(b, p.label, 1), "[p1B]");
        Symbol p2b = make(Symbol::staged(b, p.label, 2), "[p2B]");
        bool v_differs = w.empty() || w.front().front() != b;
        bool u_is_b = !u.empty() && u.front().front() == b;
        e.add(bracket(b), {pb}, kNone, kNone, "sc-def1to2/schema 2");
        e.add(p.lhs, {ap}, cond(pb), cond(ap), "sc-def1to2/schema 3");
        e.add(pb, {p1b}, cond(ap), kNone, "sc-def1to2/schema 4");
        if (v_differs) e.add(p1b, {p2b}, u, w, "sc-def1to2/schema 5");
        if (u_is_b && v_differs) e.add(p1b, {p2b}, kNone, w, "sc-def1to2/schema 6");
        e.add(ap, p.rhs, cond(p2b), kNone, "sc-def1to2/schema 7");
        e.add(p2b, {bracket(b)}, kNone, cond(ap), "sc-def1to2/schema 8");
      }
    }
    Grammar out{GrammarKind::kSemiConditional, DerivationMode::kDef2, {1, 1}, g.nonterminals, g.terminals, s1, {}};
    out.nonterminals.insert(added.begin(), added.end());
    return finish(std::move(out), e, "sc-def1to2", g, options);
  });
}

TransformResult<Grammar> rc_limited_normal_form(const Grammar& g, const TransformOptions& options) {
  detail::require_rc(g, DerivationMode::kDef1, "limited-nf");
  if (!validate_grammar(g).classification.production_limited) {
    throw PreconditionError("limited-nf: input grammar is not production-limited");
  }
  TransformOptions inner = options;
  inner.compute_digests = false;
  auto s1 = rc_normalize_forbid(g, inner);
  auto s2 = rc_to_permitting_cd(s1.output, inner);
  auto s3 = pcd_to_sc(s2.output, inner);
  auto s4 = sc_def2_to_def1(s3.output, inner);

  Grammar out = std::move(s4.output);
  out.kind = GrammarKind::kRandomContext;
  out.degree = {};
  auto v = validate_grammar(out);
  if (!v.ok || !v.classification.limited) {
    std::string why = v.ok ? "output is not limited" : v.violations.front().code + " at " + v.violations.front().location;
    throw InternalError("limited-nf: " + why);
  }
  TransformResult<Grammar> r{std::move(out), s4.report};
  r.report.name = "limited-nf";
  r.report.stages = {s1.report, s2.report, s3.report, s4.report};
  r.report.input_nonterminals = g.nonterminals.size();
  r.report.input_productions = g.productions.size();
  for (const auto& st : r.report.stages) {
    r.report.warnings.insert(r.report.warnings.end(), st.warnings.begin(), st.warnings.end());
  }
  if (options.compute_digests) {
    r.report.input_digest = digest(g);
    r.report.output_digest = digest(r.output);
  }
  return r;
}

const std::vector<std::string>& transform_names() {
  static const std::vector<std::string> names = {"sc-to-rc", "sc-def2to1", "sc-def1to2", "rc-def2to1", "rc-def1to2",
                                                 "lemma1",   "lemma2",     "thm3",       "limited-nf"};
  return names;
}

bool transform_accepts(std::string_view name, const Subject& input, std::string* why) {
  auto reject = [&](const std::string& reason) {
    if (why) *why = std::string(name) + ": " + reason;
    return false;
  };
  if (std::find(transform_names().begin(), transform_names().end(), name) == transform_names().end()) {
    return reject("unknown transform");
  }
  auto report = validate_grammar(input);
  if (!report.ok) return reject("input is invalid (" + report.violations.front().code + ")");
  if (name == "thm3") {
    if (!std::holds_alternative<CDSystem>(input)) return reject("expects a cd system");
    if (!report.classification.permitting) return reject("expects permitting components");
    if (report.classification.max_per_count > 1) return reject("expects permitting sets of at most one symbol");
    return true;
  }
  const auto* g = std::get_if<Grammar>(&input);
  if (!g) return reject("expects a single grammar");
  bool sc = g->kind == GrammarKind::kSemiConditional;
  bool def1 = g->mode == DerivationMode::kDef1;
  if (name == "sc-to-rc" || name == "sc-def2to1" || name == "sc-def1to2") {
    if (!sc) return reject("expects a semi-conditional grammar");
    if (report.classification.max_per_length > 1 || report.classification.max_forb_length > 1) {
      return reject("expects degree (1,1) conditions");
    }
    if ((name == "sc-def1to2") != def1) return reject(std::string("expects mode ") + (def1 ? "def2" : "def1"));
    return true;
  }
  if (sc) return reject("expects a random context grammar");
  if (name == "rc-def2to1") return def1 ? reject("expects mode def2") : true;
  if (!def1) return reject("expects mode def1");
  if (name == "lemma2" && !report.classification.lhs_not_in_forbid) {
    return reject("a production forbids its own lhs; run lemma1 first");
  }
  if (name == "limited-nf" && !report.classification.production_limited) {
    return reject("input grammar is not production-limited");
  }
  return true;
}

TransformResult<Subject> apply_transform(std::string_view name, const Subject& input, const TransformOptions& options) {
  std::string why;
  if (!transform_accepts(name, input, &why)) throw PreconditionError(why);
  auto wrap = [](auto r) { return TransformResult<Subject>{std::move(r.output), std::move(r.report)}; };
  if (name == "thm3") return wrap(pcd_to_sc(std::get<CDSystem>(input), options));
  const auto& g = std::get<Grammar>(input);
  if (name == "sc-to-rc") return wrap(sc_def2_to_rc(g, options));
  if (name == "sc-def2to1") return wrap(sc_def2_to_def1(g, options));
  if (name == "sc-def1to2") return wrap(sc_def1_to_def2(g, options));
  if (name == "rc-def2to1") return wrap(rc_def2_to_def1(g, options));
  if (name == "rc-def1to2") return wrap(rc_def1_to_def2(g, options));
  if (name == "lemma1") return wrap(rc_normalize_forbid(g, options));
  if (name == "lemma2") return wrap(rc_to_permitting_cd(g, options));
  return wrap(rc_limited_normal_form(g, options));
}

TransformResult<Subject> apply_pipeline(const std::vector<std::string>& names, const Subject& input,
                                        const TransformOptions& options, bool auto_normalize) {
  TransformResult<Subject> r{input, {}};
  std::string joined;
  std::vector<std::string> warnings;
  for (const auto& name : names) {
    if (auto_normalize && name == "lemma2") {
      const auto* g = std::get_if<Grammar>(&r.output);
      if (g && is_rc_family(g->kind) && g->mode == DerivationMode::kDef1 &&
          !validate_grammar(*g).classification.lhs_not_in_forbid) {
        auto pre = apply_transform("lemma1", r.output, options);
        warnings.push_back("inserted lemma1 before lemma2");
        r.report.stages.push_back(pre.report);
        r.output = std::move(pre.output);
        joined += (joined.empty() ? "" : ",") + std::string("lemma1");
      }
    }
    auto step = apply_transform(name, r.output, options);
    warnings.insert(warnings.end(), step.report.warnings.begin(), step.report.warnings.end());
    r.report.stages.push_back(step.report);
    r.output = std::move(step.output);
    joined += (joined.empty() ? "" : ",") + name;
  }
  auto stages = std::move(r.report.stages);
  if (!stages.empty()) {
    r.report = stages.back();
  } else {
    r.report.output_nonterminals = r.report.input_nonterminals;
  }
  r.report.name = joined;
  r.report.stages = std::move(stages);
  r.report.warnings = std::move(warnings);
  const auto& first = r.report.stages.empty() ? r.report : r.report.stages.front();
  r.report.input_nonterminals = first.input_nonterminals;
  r.report.input_productions = first.input_productions;
  if (options.compute_digests) {
    r.report.input_digest = digest(input);
    r.report.output_digest = digest(r.output);
  }
  if (r.report.stages.empty()) {
    auto count = [](const Subject& s) {
      return std::visit(
          [](const auto& x) -> std::pair<std::size_t, std::size_t> {
            if constexpr (std::is_same_v<std::decay_t<decltype(x)>, Grammar>) {
              return {x.nonterminals.size(), x.productions.size()};
            } else {
              return {x.nonterminals.size(), production_count(x)};
            }
          },
          s);
    };
    auto [n, p] = count(input);
    r.report.input_nonterminals = r.report.output_nonterminals = n;
    r.report.input_productions = r.report.output_productions = p;
  }
  return r;
}

std::string to_json(const TransformReport& report) {
  std::function<nlohmann::json(const TransformReport&)> conv = [&](const TransformReport& r) {
    nlohmann::json j;
    j["name"] = r.name;
    j["input_digest"] = r.input_digest;
    j["output_digest"] = r.output_digest;
    j["input_nonterminals"] = r.input_nonterminals;
    j["input_productions"] = r.input_productions;
    j["output_nonterminals"] = r.output_nonterminals;
    j["output_productions"] = r.output_productions;
    j["pruned_productions"] = r.pruned_productions;
    j["warnings"] = r.warnings;
    j["clause_counts"] = r.clause_counts();
    nlohmann::json clauses = nlohmann::json::array();
    for (const auto& [label, clause] : r.clause_of) clauses.push_back({label, clause});
    j["clauses"] = std::move(clauses);
    if (!r.stages.empty()) {
      j["stages"] = nlohmann::json::array();
      for (const auto& s : r.stages) j["stages"].push_back(conv(s));
    }
    return j;
  };
  return conv(report).dump(2) + "\n";
}

}  // namespace regrew
