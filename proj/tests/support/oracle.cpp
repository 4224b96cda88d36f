#include "oracle.hpp"

#include <algorithm>
#include <map>

namespace regrew::testing {

namespace {

bool occurs(const Condition& c, const Word& context) {
  return std::search(context.begin(), context.end(), c.begin(), c.end()) != context.end();
}

bool all_terminal(const Word& w) {
  return std::all_of(w.begin(), w.end(), [](const Symbol& s) { return s.is_terminal(); });
}

std::vector<Word> one_step(const std::vector<Production>& ps, const Word& form, DerivationMode mode, int n) {
  std::vector<Word> out;
  for (std::size_t pos = 0; pos < form.size(); ++pos) {
    for (const auto& p : ps) {
      if (form[pos] != p.lhs || !oracle_applicable(p, form, pos, mode)) continue;
      Word next(form.begin(), form.begin() + static_cast<std::ptrdiff_t>(pos));
      next.insert(next.end(), p.rhs.begin(), p.rhs.end());
      next.insert(next.end(), form.begin() + static_cast<std::ptrdiff_t>(pos) + 1, form.end());
      if (static_cast<int>(next.size()) <= n) out.push_back(std::move(next));
    }
  }
  return out;
}

void deepen(const std::vector<Production>& ps, DerivationMode mode, int n, const Word& form, int remaining,
            std::map<Word, int>& best) {
  auto it = best.find(form);
  if (it != best.end() && it->second >= remaining) return;
  best[form] = remaining;
  if (remaining == 0) return;
  for (const auto& next : one_step(ps, form, mode, n)) deepen(ps, mode, n, next, remaining - 1, best);
}

std::set<Word> reach(const std::vector<Production>& ps, DerivationMode mode, int n, const Word& from) {
  for (int depth = 1;; depth *= 2) {
    std::map<Word, int> shallow, deep;
    deepen(ps, mode, n, from, depth, shallow);
    deepen(ps, mode, n, from, 2 * depth, deep);
    if (shallow.size() == deep.size()) {
      std::set<Word> out;
      for (const auto& [w, _] : deep) out.insert(w);
      return out;
    }
  }
}

}  // namespace

bool oracle_applicable(const Production& p, const Word& form, std::size_t pos, DerivationMode mode) {
  Word context = form;
  if (mode == DerivationMode::kDef1) context.erase(context.begin() + static_cast<std::ptrdiff_t>(pos));
  for (const auto& c : p.per) {
    if (!occurs(c, context)) return false;
  }
  for (const auto& c : p.forb) {
    if (occurs(c, context)) return false;
  }
  return true;
}

WordSet oracle_language(const Grammar& g, int n) {
  WordSet words;
  for (const auto& w : reach(g.productions, g.mode, n, Word{g.start})) {
    if (all_terminal(w)) words.insert(w);
  }
  return words;
}

WordSet oracle_cd_language(const CDSystem& sys, int n) {
  auto t_step = [&](const Component& c, const Word& form) {
    std::vector<Word> out;
    std::set<Word> seen;
    std::vector<Word> todo = one_step(c.productions, form, DerivationMode::kDef1, n);
    while (!todo.empty()) {
      Word w = std::move(todo.back());
      todo.pop_back();
      if (!seen.insert(w).second) continue;
      auto next = one_step(c.productions, w, DerivationMode::kDef1, n);
      // A successor beyond the bound still counts as applicable.
      bool blocked = true;
      for (std::size_t pos = 0; pos < w.size() && blocked; ++pos) {
        for (const auto& p : c.productions) {
          if (w[pos] == p.lhs && oracle_applicable(p, w, pos, DerivationMode::kDef1)) {
            blocked = false;
            break;
          }
        }
      }
      if (blocked) out.push_back(w);
      for (auto& x : next) todo.push_back(std::move(x));
    }
    return out;
  };
  WordSet words;
  std::set<Word> seen{Word{sys.start}};
  std::vector<Word> todo{Word{sys.start}};
  while (!todo.empty()) {
    Word w = std::move(todo.back());
    todo.pop_back();
    for (const auto& c : sys.components) {
      for (auto& v : t_step(c, w)) {
        if (all_terminal(v)) words.insert(v);
        if (seen.insert(v).second) todo.push_back(std::move(v));
      }
    }
  }
  return words;
}

WordSet t_n_words(int k, int n) {
  WordSet out;
  for (int i = 1; i <= k; ++i) {
    Symbol a = Symbol::terminal("a" + std::to_string(i));
    for (int j = 1; j <= n; ++j) out.insert(Word(static_cast<std::size_t>(j), a));
  }
  return out;
}

WordSet anbncn_words(int n) {
  WordSet out;
  for (int m = 1; 3 * m <= n; ++m) {
    Word w;
    for (const char* t : {"a", "b", "c"}) w.insert(w.end(), static_cast<std::size_t>(m), Symbol::terminal(t));
    out.insert(std::move(w));
  }
  return out;
}

Word word(const std::vector<const char*>& terminals) {
  Word w;
  for (const char* t : terminals) w.push_back(Symbol::terminal(t));
  return w;
}

}  // namespace regrew::testing
