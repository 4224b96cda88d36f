// Random context grammar to permitting CD system working in t-mode.

#include <unordered_set>

#include "regrew/transforms.hpp"
#include "regrew/validate.hpp"
#include "transform_support.hpp"

namespace regrew {

using detail::cond;
using detail::Emitter;
using detail::Fresh;
using detail::kNone;

TransformResult<CDSystem> rc_to_permitting_cd(const Grammar& g, const TransformOptions& options) {
  detail::require_rc(g, DerivationMode::kDef1, "lemma2");
  if (!validate_grammar(g).classification.lhs_not_in_forbid) {
    throw PreconditionError("lemma2: a production forbids its own lhs; run lemma1 first");
  }
  if (g.productions.empty()) throw PreconditionError("lemma2: grammar has no productions");

  return detail::build_fresh(g.nonterminals, g.terminals, [&](Fresh& fresh) {
    const int n = static_cast<int>(g.productions.size());
    std::unordered_set<Symbol, SymbolHash> added;
    auto make = [&](const Symbol& raw, std::string_view role) {
      Symbol s = fresh.make(raw, role);
      added.insert(s);
      return s;
    };
    auto idx = [&](const Symbol& a, int i) { return make(Symbol::indexed(a, i), "[A,i]"); };
    auto idx_primed = [&](const Symbol& a, int i) {
      return make(Symbol::primed(Symbol::indexed(a, i)), "[A,i]'");
    };
    auto stage = [&](const Symbol& a, int i, int j) { return make(Symbol::staged(a, i, j), "[A,i,j]"); };
    auto h = [&](const std::vector<Symbol>& x, int i) {
      std::vector<Symbol> out;
      for (const auto& s : x) out.push_back(s.is_terminal() ? s : idx(s, i));
      return out;
    };
    auto packed = [&](const std::vector<Symbol>& x, int i) { return make(Symbol::packed(h(x, i)), "<h_i(x)>"); };
    SymbolSet alphabet = g.nonterminals;
    alphabet.insert(g.terminals.begin(), g.terminals.end());
    Symbol start = make(detail::fresh_prime(g.start, [&](const Symbol& s) { return alphabet.count(s) > 0; }),
                        "new start");

    // [X,i] and {[X,i]} by nonterminal position and index; groups 8 and 9 are
    // |N|^2 n^3 productions.
    std::vector<std::vector<Symbol>> table;
    std::vector<std::vector<ConditionSet>> conds;
    for (const auto& x : g.nonterminals) {
      table.emplace_back();
      conds.emplace_back();
      for (int i = 1; i <= n; ++i) {
        table.back().push_back(idx(x, i));
        conds.back().push_back(cond(table.back().back()));
      }
    }

    std::vector<Emitter> comps(2 * static_cast<std::size_t>(n) + 1);
    CDSystem sys{{}, g.terminals, start, {}};
    sys.components.push_back({"P0", {}});

    Emitter& p0 = comps[0];
    for (int i = 1; i <= n; ++i) p0.add(start, {idx(g.start, i)}, kNone, kNone, "lemma2/P0 start");
    for (const auto& a : g.nonterminals) {
      for (int i = 1; i <= n; ++i) p0.add(idx_primed(a, i), {idx(a, i)}, kNone, kNone, "lemma2/P0 unprime");
    }

    for (int i = 1; i <= n; ++i) {
      const Production& p = g.productions[static_cast<std::size_t>(i - 1)];
      const Symbol& a = p.lhs;
      std::vector<Symbol> per;
      for (const auto& c : p.per) per.push_back(c.front());
      SymbolSet forb;
      for (const auto& c : p.forb) forb.insert(c.front());
      const int k = static_cast<int>(per.size());
      const Symbol hx = packed(p.rhs, i);
      p0.add(hx, h(p.rhs, i), kNone, kNone, "lemma2/P0 unpack");

      Emitter& pi = comps[2 * static_cast<std::size_t>(i) - 1];
      sys.components.push_back({"P" + std::to_string(i), {}});
      pi.add(idx(a, i), {stage(a, i, 1)}, kNone, kNone, "lemma2/group 1");
      for (int j = 1; j <= k; ++j) {
        pi.add(stage(a, i, j), {stage(a, i, j + 1)}, cond(idx(per[static_cast<std::size_t>(j - 1)], i)), kNone,
               "lemma2/group 2");
      }
      pi.add(stage(a, i, k + 1), {hx}, kNone, kNone, "lemma2/group 3");
      pi.add(hx, {hx}, cond(hx), kNone, "lemma2/group 4");
      for (const auto& x : forb) pi.add(idx(x, i), {idx(x, i)}, kNone, kNone, "lemma2/group 5");
      for (const auto& x : g.nonterminals) {
        if (!forb.count(x)) pi.add(idx(x, i), {idx_primed(x, i)}, cond(hx), kNone, "lemma2/group 6");
      }
      for (int j = 1; j <= k; ++j) pi.add(stage(a, i, j), {stage(a, i, j)}, kNone, kNone, "lemma2/group 7");

      Emitter& pbar = comps[2 * static_cast<std::size_t>(i)];
      sys.components.push_back({"P" + std::to_string(i) + "bar", {}});
      for (std::size_t x = 0; x < table.size(); ++x) {
        for (int j = 1; j <= n; ++j) pbar.add(table[x][i - 1], {table[x][j - 1]}, kNone, kNone, "lemma2/group 8");
      }
      for (std::size_t x = 0; x < table.size(); ++x) {
        for (int from = 0; from < n; ++from) {
          for (int to = 0; to < n; ++to) {
            for (std::size_t y = 0; y < table.size(); ++y) {
              for (int m = 0; m < n; ++m) {
                if (m == from) continue;
                pbar.add(table[x][from], {table[x][to]}, conds[y][m], kNone, "lemma2/group 9");
              }
            }
          }
        }
      }
    }
    comps[0].deduplicate();
    sys.nonterminals = SymbolSet(added.begin(), added.end());
    return detail::finish(std::move(sys), comps, "lemma2", g, options);
  });
}

}  // namespace regrew
