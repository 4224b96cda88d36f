#pragma once

// Dense-id rule tables shared by the single-grammar and CD engines.

#include <cstdint>
#include <functional>
#include <thread>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "regrew/grammar.hpp"

namespace regrew::detail {

using SymId = std::uint32_t;
using Form = std::vector<SymId>;

struct FormHash {
  std::size_t operator()(const Form& f) const noexcept {
    std::uint64_t h = 14695981039346656037ULL;
    for (SymId s : f) {
      h ^= s;
      h *= 1099511628211ULL;
    }
    return static_cast<std::size_t>(h ^ (h >> 29));
  }
};

using FormSet = std::unordered_set<Form, FormHash>;

class SymbolTable {
 public:
  SymId intern(const Symbol& s);
  /// Existing id or nullopt-like sentinel kMissing.
  SymId find(const Symbol& s) const;
  const Symbol& symbol(SymId id) const { return symbols_[id]; }
  bool is_terminal(SymId id) const { return terminal_[id] != 0; }
  std::size_t size() const { return symbols_.size(); }

  Form encode(const Word& w);
  Word decode(const Form& f) const;

  static constexpr SymId kMissing = 0xffffffffu;

 private:
  std::unordered_map<Symbol, SymId, SymbolHash> ids_;
  std::vector<Symbol> symbols_;
  std::vector<char> terminal_;
};

struct CompiledProduction {
  int label = 0;
  SymId lhs = 0;
  std::vector<std::vector<SymId>> per;
  std::vector<std::vector<SymId>> forb;
};

/// Productions sharing lhs and rhs. Any member applying yields the same form.
struct RuleGroup {
  SymId lhs = 0;
  Form rhs;
  bool unconditional = false;
  std::vector<SymId> any_permit;      // members with one length-1 permit and nothing else
  std::vector<SymId> any_forbid;      // members with one length-1 forbid and nothing else
  std::vector<std::uint32_t> general;  // other members, by production index
  std::vector<std::uint32_t> members;  // all members, by production index
};

class RuleSet {
 public:
  RuleSet(const std::vector<Production>& productions, DerivationMode mode, SymbolTable& table);

  bool group_applies(const RuleGroup& g, const Form& form, std::size_t pos) const;
  bool production_applies(std::uint32_t index, const Form& form, std::size_t pos) const;

  /// Some production applies somewhere, ignoring any length bound.
  bool any_applicable(const Form& form) const;

  /// Calls out(result) for every distinct group application whose result
  /// fits the bound. Results may repeat across positions.
  template <class Out>
  void for_each_successor(const Form& form, std::size_t bound, Out&& out) const {
    for (std::size_t pos = 0; pos < form.size(); ++pos) {
      SymId s = form[pos];
      if (s >= by_lhs_.size()) continue;
      for (std::uint32_t gi : by_lhs_[s]) {
        const RuleGroup& g = groups_[gi];
        if (form.size() - 1 + g.rhs.size() > bound) continue;
        if (!group_applies(g, form, pos)) continue;
        Form next;
        next.reserve(form.size() - 1 + g.rhs.size());
        next.insert(next.end(), form.begin(), form.begin() + static_cast<std::ptrdiff_t>(pos));
        next.insert(next.end(), g.rhs.begin(), g.rhs.end());
        next.insert(next.end(), form.begin() + static_cast<std::ptrdiff_t>(pos) + 1, form.end());
        out(std::move(next));
      }
    }
  }

  const std::vector<CompiledProduction>& productions() const { return productions_; }
  const std::vector<RuleGroup>& groups() const { return groups_; }
  const std::vector<std::uint32_t>& groups_for(SymId lhs) const;
  DerivationMode mode() const { return mode_; }

 private:
  bool present(SymId s, const Form& form, std::size_t pos) const;
  bool occurs(const std::vector<SymId>& cond, const Form& form, std::size_t pos) const;
  bool conditions_hold(const CompiledProduction& p, const Form& form, std::size_t pos) const;

  DerivationMode mode_;
  std::vector<CompiledProduction> productions_;
  std::vector<RuleGroup> groups_;
  std::vector<std::vector<std::uint32_t>> by_lhs_;
  static const std::vector<std::uint32_t> kNoGroups;
};

/// Runs fn(i) for i in [0, n) on up to `workers` threads and returns the
/// results in index order.
template <class R>
std::vector<R> parallel_map(std::size_t n, unsigned workers, const std::function<R(std::size_t)>& fn) {
  std::vector<R> out(n);
  if (workers <= 1 || n < 64) {
    for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
    return out;
  }
  unsigned count = std::min<std::size_t>(workers, n);
  std::vector<std::thread> threads;
  threads.reserve(count);
  for (unsigned w = 0; w < count; ++w) {
    threads.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += count) out[i] = fn(i);
    });
  }
  for (auto& t : threads) t.join();
  return out;
}

}  // namespace regrew::detail
