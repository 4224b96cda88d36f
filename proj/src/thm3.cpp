// Permitting CD system in t-mode to a semi-conditional grammar of degree (1,1)
// using the whole-form relation.

#include <algorithm>
#include <cstdint>

#include <unordered_set>

#include "regrew/transforms.hpp"
#include "regrew/validate.hpp"
#include "transform_support.hpp"

namespace regrew {

using detail::cond;
using detail::Emitter;
using detail::Fresh;
using detail::kNone;

namespace {

// Bookkeeping states over k items: which items are primed, and the legal
// one-item primings between them.
struct StateGraph {
  std::vector<std::vector<bool>> states;  // states[0] = nothing primed, states.back() = all primed
  struct Edge {
    std::size_t from, to, item;
  };
  std::vector<Edge> edges;
};

StateGraph chain_states(std::size_t k) {
  StateGraph g;
  for (std::size_t s = 0; s <= k; ++s) {
    std::vector<bool> flags(k, false);
    for (std::size_t t = 0; t < s; ++t) flags[t] = true;
    g.states.push_back(std::move(flags));
    if (s > 0) g.edges.push_back({s - 1, s, s - 1});
  }
  return g;
}

StateGraph lattice_states(std::size_t k, std::size_t cap, const std::string& component) {
  if (k >= 63 || (std::uint64_t{1} << k) > cap) {
    throw PreconditionError("thm3: component " + component + " needs 2^" + std::to_string(k) +
                            " bookkeeping states, above the cap of " + std::to_string(cap));
  }
  const std::uint64_t count = std::uint64_t{1} << k;
  // Order masks by popcount so that index 0 is empty and the last is full.
  std::vector<std::uint64_t> masks;
  for (std::uint64_t m = 0; m < count; ++m) masks.push_back(m);
  std::stable_sort(masks.begin(), masks.end(), [](std::uint64_t a, std::uint64_t b) {
    return __builtin_popcountll(a) < __builtin_popcountll(b);
  });
  std::vector<std::size_t> index_of(count);
  for (std::size_t i = 0; i < masks.size(); ++i) index_of[masks[i]] = i;
  StateGraph g;
  for (auto m : masks) {
    std::vector<bool> flags(k);
    for (std::size_t t = 0; t < k; ++t) flags[t] = (m >> t) & 1U;
    g.states.push_back(std::move(flags));
  }
  for (auto m : masks) {
    for (std::size_t t = 0; t < k; ++t) {
      if (!((m >> t) & 1U)) g.edges.push_back({index_of[m], index_of[m | (std::uint64_t{1} << t)], t});
    }
  }
  return g;
}

}  // namespace

TransformResult<Grammar> pcd_to_sc(const CDSystem& sys, const TransformOptions& options) {
  require_valid(validate_grammar(sys), "thm3");
  for (const auto& c : sys.components) {
    for (const auto& p : c.productions) {
      if (!p.forb.empty()) throw PreconditionError("thm3: expects permitting components (no forbidding sets)");
      if (p.per.size() > 1) throw PreconditionError("thm3: expects permitting sets of at most one symbol");
    }
  }

  SymbolSet alphabet = sys.nonterminals;
  alphabet.insert(sys.terminals.begin(), sys.terminals.end());
  const std::vector<Symbol> v(alphabet.begin(), alphabet.end());
  const int m = static_cast<int>(sys.components.size());

  // Schemas 6-11 alone give |V| productions per bookkeeping step and target.
  std::size_t estimate = 0;
  for (const auto& c : sys.components) {
    estimate += v.size() * (2 * c.productions.size() + static_cast<std::size_t>(m) + 2);
  }
  if (estimate > options.max_output_productions) {
    throw PreconditionError("thm3: output would need at least " + std::to_string(estimate) +
                            " productions, above the cap of " + std::to_string(options.max_output_productions));
  }

  return detail::build_fresh(sys.nonterminals, sys.terminals, [&](Fresh& fresh) {
    std::unordered_set<Symbol, SymbolHash> added;
    auto make = [&](const Symbol& raw, std::string_view role) {
      Symbol s = fresh.make(raw, role);
      added.insert(s);
      return s;
    };
    auto idx = [&](const Symbol& x, int i) { return make(Symbol::indexed(x, i), "[X,i]"); };
    auto bracket = [&](const Production& p) {
      std::vector<TagEntry> entries;
      for (const auto& c : p.per) entries.push_back({c.front(), false});
      return make(Symbol::set_tagged(Symbol::packed(p.rhs), Tag::make(std::move(entries))), "[x,Per]");
    };
    auto taken = [&](const Symbol& s) { return alphabet.count(s) > 0; };
    Symbol start = make(detail::fresh_prime(sys.start, taken), "new start");

    Emitter out;
    for (int i = 1; i <= m; ++i) out.add(start, {idx(sys.start, i)}, kNone, kNone, "thm3/schema 1");

    for (int i = 1; i <= m; ++i) {
      const Component& comp = sys.components[static_cast<std::size_t>(i - 1)];

      SymbolSet q_set;
      for (const auto& p : comp.productions) {
        const Symbol b = bracket(p);
        q_set.insert(b);
        for (const auto& x : v) out.add(p.lhs, {b}, cond(idx(x, i)), kNone, "thm3/schema 2");
        out.add(b, p.rhs, p.per, kNone, "thm3/schema 3");
        if (!p.per.empty()) out.add(b, p.rhs, cond(idx(p.per.front().front(), i)), kNone, "thm3/schema 4");
        std::vector<Symbol> rhs = p.rhs;
        rhs.front() = idx(rhs.front(), i);
        out.add(idx(p.lhs, i), std::move(rhs), p.per, kNone, "thm3/schema 5");
      }
      const std::vector<Symbol> q_items(q_set.begin(), q_set.end());

      const bool lattice = options.priming == TransformOptions::Priming::kLattice;
      StateGraph qg = lattice ? lattice_states(q_items.size(), options.state_cap, comp.name)
                              : chain_states(q_items.size());
      StateGraph pg = lattice ? lattice_states(comp.productions.size(), options.state_cap, comp.name)
                              : chain_states(comp.productions.size());

      std::vector<std::shared_ptr<const Tag>> q_tags;
      for (const auto& flags : qg.states) {
        std::vector<TagEntry> entries;
        for (std::size_t t = 0; t < q_items.size(); ++t) entries.push_back({q_items[t], flags[t]});
        q_tags.push_back(Tag::make(std::move(entries)));
      }
      std::vector<std::shared_ptr<const Tag>> p_tags;
      for (const auto& flags : pg.states) {
        std::vector<TagEntry> entries;
        for (std::size_t t = 0; t < comp.productions.size(); ++t) {
          entries.push_back({comp.productions[t].label, flags[t]});
        }
        p_tags.push_back(Tag::make(std::move(entries)));
      }
      // [X,Q] and [X,P] per (position of X in v, state), built once.
      std::vector<std::vector<Symbol>> q_syms(v.size()), p_syms(v.size());
      for (std::size_t xi = 0; xi < v.size(); ++xi) {
        for (const auto& t : q_tags) q_syms[xi].push_back(make(Symbol::set_tagged(v[xi], t), "[X,Q]"));
        for (const auto& t : p_tags) p_syms[xi].push_back(make(Symbol::set_tagged(v[xi], t), "[X,P]"));
      }
      auto position = [&](const Symbol& x) {
        return static_cast<std::size_t>(std::lower_bound(v.begin(), v.end(), x) - v.begin());
      };

      for (std::size_t xi = 0; xi < v.size(); ++xi) {
        const auto& qs = q_syms[xi];
        out.add(idx(v[xi], i), {qs.front()}, kNone, kNone, "thm3/schema 6");
        for (const auto& e : qg.edges) out.add(qs[e.from], {qs[e.to]}, kNone, cond(q_items[e.item]), "thm3/schema 7");
        out.add(qs.back(), {p_syms[xi].front()}, kNone, kNone, "thm3/schema 8");
      }

      for (const auto& e : pg.edges) {
        const Production& pj = comp.productions[e.item];
        const Symbol& aj = pj.lhs;
        const std::size_t aj_at = position(aj);
        for (std::size_t xi = 0; xi < v.size(); ++xi) {
          if (xi != aj_at) out.add(p_syms[xi][e.from], {p_syms[xi][e.to]}, kNone, cond(aj), "thm3/schema 9");
        }
        for (const auto& c : pj.per) {
          const Symbol& y = c.front();
          const std::size_t y_at = position(y);
          for (std::size_t xi = 0; xi < v.size(); ++xi) {
            if (xi != y_at) out.add(p_syms[xi][e.from], {p_syms[xi][e.to]}, cond(aj), cond(y), "thm3/schema 10a");
          }
          out.add(p_syms[aj_at][e.from], {p_syms[aj_at][e.to]}, kNone, cond(y), "thm3/schema 10b");

          if (y != aj || options.audit != TransformOptions::Audit::kRepaired) continue;
          // A lone copy of A_j away from the first position: mark it, confirm
          // no other copy exists, unmark, advance.
          const Symbol mark = make(detail::fresh_prime(aj, taken), "audit mark");
          for (std::size_t xi = 0; xi < v.size(); ++xi) {
            if (xi == aj_at) continue;
            const Symbol& from = p_syms[xi][e.from];
            const Symbol a1 = make(Symbol::staged(from, pj.label, 1), "audit stage");
            const Symbol a2 = make(Symbol::staged(from, pj.label, 2), "audit stage");
            const Symbol a3 = make(Symbol::staged(from, pj.label, 3), "audit stage");
            out.add(from, {a1}, cond(aj), kNone, "thm3/audit a");
            out.add(aj, {mark}, cond(a1), cond(mark), "thm3/audit b");
            out.add(a1, {a2}, cond(mark), kNone, "thm3/audit c");
            out.add(a2, {a3}, kNone, cond(aj), "thm3/audit d");
            out.add(mark, {aj}, cond(a3), kNone, "thm3/audit e");
            out.add(a3, {p_syms[xi][e.to]}, kNone, cond(mark), "thm3/audit f");
          }
        }
      }

      for (std::size_t xi = 0; xi < v.size(); ++xi) {
        for (int j = 1; j <= m; ++j) out.add(p_syms[xi].back(), {idx(v[xi], j)}, kNone, kNone, "thm3/schema 11");
        if (v[xi].is_terminal()) out.add(p_syms[xi].back(), {v[xi]}, kNone, kNone, "thm3/schema 12");
      }
    }

    out.deduplicate();
    SymbolSet nonterminals = sys.nonterminals;
    nonterminals.insert(added.begin(), added.end());
    Grammar g{GrammarKind::kSemiConditional, DerivationMode::kDef2, {1, 1}, std::move(nonterminals),
              sys.terminals, start, {}};
    return detail::finish(std::move(g), out, "thm3", sys, options);
  });
}

}  // namespace regrew
