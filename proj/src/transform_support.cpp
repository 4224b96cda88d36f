#include "transform_support.hpp"

#include <algorithm>
#include <set>
#include <unordered_set>

#include "regrew/dsl.hpp"
#include "regrew/validate.hpp"

namespace regrew::detail {

Fresh::Fresh(const SymbolSet& nonterminals, const SymbolSet& terminals, int depth)
    : n_(nonterminals), t_(terminals), depth_(depth) {}

Symbol Fresh::make(const Symbol& raw, std::string_view role) {
  Symbol s = raw;
  for (int k = 0; k < depth_; ++k) s = Symbol::primed(s);
  auto [it, inserted] = made_.emplace(s, role);
  if (inserted) {
    if (n_.count(s) || t_.count(s)) collided_ = true;
  } else if (it->second != role) {
    throw InternalError("construction produced " + s.describe() + " for two roles: " + std::string(it->second) +
                        " and " + std::string(role));
  }
  return s;
}

int Fresh::escape_depth(const SymbolSet& nonterminals, const SymbolSet& terminals) {
  int deepest = 0;
  for (const auto* set : {&nonterminals, &terminals}) {
    for (const auto& s : *set) {
      int d = 0;
      for (const Symbol* p = &s; p->kind() == Symbol::Kind::kPrimed; p = &p->base()) ++d;
      deepest = std::max(deepest, d);
    }
  }
  return deepest + 1;
}

Symbol fresh_prime(const Symbol& base, const std::function<bool(const Symbol&)>& taken) {
  Symbol s = Symbol::primed(base);
  while (taken(s)) s = Symbol::primed(s);
  return s;
}

void Emitter::add(Symbol lhs, std::vector<Symbol> rhs, ConditionSet per, ConditionSet forb, std::string_view clause) {
  if (rhs.empty()) throw InternalError("construction emitted an erasing production");
  productions_.push_back({0, std::move(lhs), std::move(rhs), std::move(per), std::move(forb)});
  clauses_.emplace_back(clause);
}

void Emitter::add(const Production& p, std::string_view clause) {
  add(p.lhs, p.rhs, p.per, p.forb, clause);
}

void Emitter::deduplicate() {
  struct Hash {
    std::size_t operator()(const Production* p) const {
      std::size_t h = p->lhs.hash();
      auto mix = [&](std::size_t v) { h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2); };
      for (const auto& s : p->rhs) mix(s.hash());
      for (const auto* set : {&p->per, &p->forb}) {
        mix(set->size());
        for (const auto& c : *set) {
          for (const auto& s : c) mix(s.hash());
        }
      }
      return h;
    }
  };
  struct Eq {
    bool operator()(const Production* a, const Production* b) const {
      return a->lhs == b->lhs && a->rhs == b->rhs && a->per == b->per && a->forb == b->forb;
    }
  };
  std::unordered_set<const Production*, Hash, Eq> seen;
  seen.reserve(productions_.size());
  std::vector<char> keep(productions_.size(), 0);
  for (std::size_t i = 0; i < productions_.size(); ++i) keep[i] = seen.insert(&productions_[i]).second;
  std::vector<Production> ps;
  std::vector<std::string> cs;
  for (std::size_t i = 0; i < productions_.size(); ++i) {
    if (!keep[i]) continue;
    ps.push_back(std::move(productions_[i]));
    cs.push_back(std::move(clauses_[i]));
  }
  productions_ = std::move(ps);
  clauses_ = std::move(cs);
}

namespace {

SymbolSet reachable_from(const Symbol& start, const std::vector<const Production*>& productions) {
  std::unordered_map<Symbol, std::vector<const Production*>, SymbolHash> by_lhs;
  for (const auto* p : productions) by_lhs[p->lhs].push_back(p);
  SymbolSet seen{start};
  std::vector<Symbol> todo{start};
  while (!todo.empty()) {
    Symbol s = todo.back();
    todo.pop_back();
    auto it = by_lhs.find(s);
    if (it == by_lhs.end()) continue;
    for (const auto* p : it->second) {
      for (const auto& x : p->rhs) {
        if (seen.insert(x).second) todo.push_back(x);
      }
    }
  }
  return seen;
}

// Keeps productions with reachable lhs; shrinks the nonterminal set to what
// the kept productions and the start symbol mention.
std::size_t prune(const Symbol& start, SymbolSet& nonterminals, std::vector<Emitter*> emitters) {
  std::vector<const Production*> all;
  for (auto* e : emitters) {
    for (const auto& p : e->productions()) all.push_back(&p);
  }
  SymbolSet live = reachable_from(start, all);
  std::size_t removed = 0;
  for (auto* e : emitters) {
    auto& ps = e->productions();
    auto& cs = e->clauses();
    std::vector<Production> kept;
    std::vector<std::string> kept_clauses;
    for (std::size_t i = 0; i < ps.size(); ++i) {
      if (live.count(ps[i].lhs)) {
        kept.push_back(std::move(ps[i]));
        kept_clauses.push_back(std::move(cs[i]));
      } else {
        ++removed;
      }
    }
    ps = std::move(kept);
    cs = std::move(kept_clauses);
  }
  SymbolSet used{start};
  for (auto* e : emitters) {
    for (const auto& p : e->productions()) {
      used.insert(p.lhs);
      used.insert(p.rhs.begin(), p.rhs.end());
      for (const auto& c : p.per) used.insert(c.begin(), c.end());
      for (const auto& c : p.forb) used.insert(c.begin(), c.end());
    }
  }
  SymbolSet shrunk;
  for (const auto& s : nonterminals) {
    if (used.count(s)) shrunk.insert(s);
  }
  nonterminals = std::move(shrunk);
  return removed;
}

void fill_input(TransformReport& r, std::string_view name, const Subject& input, const TransformOptions& options) {
  r.name = std::string(name);
  if (const auto* g = std::get_if<Grammar>(&input)) {
    r.input_nonterminals = g->nonterminals.size();
    r.input_productions = g->productions.size();
  } else {
    const auto& s = std::get<CDSystem>(input);
    r.input_nonterminals = s.nonterminals.size();
    r.input_productions = production_count(s);
  }
  if (options.compute_digests) r.input_digest = digest(input);
}

}  // namespace

TransformResult<Grammar> finish(Grammar g, Emitter& emitter, std::string_view name, const Subject& input,
                                const TransformOptions& options) {
  struct {
    TransformReport report;
  } out;
  fill_input(out.report, name, input, options);
  if (options.prune_unreachable) {
    out.report.pruned_productions = prune(g.start, g.nonterminals, {&emitter});
    if (out.report.pruned_productions) {
      out.report.warnings.push_back("pruned " + std::to_string(out.report.pruned_productions) +
                                    " productions with unreachable lhs");
    }
  }
  g.productions = std::move(emitter.productions());
  relabel(g.productions);
  for (std::size_t i = 0; i < g.productions.size(); ++i) {
    out.report.clause_of[g.productions[i].label] = emitter.clauses()[i];
  }
  out.report.output_nonterminals = g.nonterminals.size();
  out.report.output_productions = g.productions.size();
  auto v = validate_grammar(g);
  if (!v.ok) throw InternalError(std::string(name) + " produced an invalid grammar: " + v.violations.front().code +
                                 " at " + v.violations.front().location + ": " + v.violations.front().message);
  if (options.compute_digests) out.report.output_digest = digest(g);
  return {std::move(g), std::move(out.report)};
}

TransformResult<CDSystem> finish(CDSystem sys, std::vector<Emitter>& components, std::string_view name,
                                 const Subject& input, const TransformOptions& options) {
  struct {
    TransformReport report;
  } out;
  fill_input(out.report, name, input, options);
  if (options.prune_unreachable) {
    std::vector<Emitter*> ptrs;
    for (auto& e : components) ptrs.push_back(&e);
    out.report.pruned_productions = prune(sys.start, sys.nonterminals, ptrs);
    if (out.report.pruned_productions) {
      out.report.warnings.push_back("pruned " + std::to_string(out.report.pruned_productions) +
                                    " productions with unreachable lhs");
    }
  }
  std::vector<Component> kept;
  std::vector<Emitter*> kept_emitters;
  for (std::size_t k = 0; k < components.size(); ++k) {
    if (components[k].productions().empty()) {
      out.report.warnings.push_back("component " + sys.components[k].name + " emptied by pruning, dropped");
      continue;
    }
    kept.push_back({sys.components[k].name, std::move(components[k].productions())});
    kept_emitters.push_back(&components[k]);
  }
  sys.components = std::move(kept);
  relabel(sys);
  for (std::size_t k = 0; k < sys.components.size(); ++k) {
    const auto& ps = sys.components[k].productions;
    for (std::size_t i = 0; i < ps.size(); ++i) out.report.clause_of[ps[i].label] = kept_emitters[k]->clauses()[i];
  }
  out.report.output_nonterminals = sys.nonterminals.size();
  out.report.output_productions = production_count(sys);
  auto v = validate_grammar(sys);
  if (!v.ok) throw InternalError(std::string(name) + " produced an invalid system: " + v.violations.front().code +
                                 " at " + v.violations.front().location + ": " + v.violations.front().message);
  if (options.compute_digests) out.report.output_digest = digest(sys);
  return {std::move(sys), std::move(out.report)};
}

void require_sc11(const Grammar& g, DerivationMode mode, std::string_view what) {
  require_valid(validate_grammar(g), what);
  if (g.kind != GrammarKind::kSemiConditional) throw PreconditionError(std::string(what) + ": expects a semi-conditional grammar");
  if (g.mode != mode) {
    throw PreconditionError(std::string(what) + ": expects mode " + std::string(to_string(mode)));
  }
  for (const auto& p : g.productions) {
    for (const auto* set : {&p.per, &p.forb}) {
      for (const auto& c : *set) {
        if (c.size() != 1) throw PreconditionError(std::string(what) + ": expects degree (1,1) conditions");
      }
    }
  }
}

void require_rc(const Grammar& g, DerivationMode mode, std::string_view what) {
  require_valid(validate_grammar(g), what);
  if (!is_rc_family(g.kind)) throw PreconditionError(std::string(what) + ": expects a random context grammar");
  if (g.mode != mode) {
    throw PreconditionError(std::string(what) + ": expects mode " + std::string(to_string(mode)));
  }
}

}  // namespace regrew::detail
