#include "regrew/grammar.hpp"

#include <algorithm>

namespace regrew {

ConditionSet make_conditions(std::vector<Condition> conditions) {
  for (const auto& c : conditions) {
    if (c.empty()) throw std::invalid_argument("empty condition");
  }
  std::sort(conditions.begin(), conditions.end());
  conditions.erase(std::unique(conditions.begin(), conditions.end()), conditions.end());
  return conditions;
}

ConditionSet singleton_conditions(const std::vector<Symbol>& symbols) {
  std::vector<Condition> out;
  out.reserve(symbols.size());
  for (const auto& s : symbols) out.push_back({s});
  return make_conditions(std::move(out));
}

ConditionSet singleton_conditions(const SymbolSet& symbols) {
  ConditionSet out;
  out.reserve(symbols.size());
  for (const auto& s : symbols) out.push_back({s});  // set order is already sorted
  return out;
}

DerivationMode default_mode(GrammarKind kind) {
  return kind == GrammarKind::kSemiConditional ? DerivationMode::kDef2 : DerivationMode::kDef1;
}

std::string_view to_string(GrammarKind kind) {
  switch (kind) {
    case GrammarKind::kRandomContext: return "rc";
    case GrammarKind::kSemiConditional: return "sc";
    case GrammarKind::kPermitting: return "permitting";
    case GrammarKind::kForbidding: return "forbidding";
  }
  return "?";
}

std::string_view to_string(DerivationMode mode) {
  return mode == DerivationMode::kDef1 ? "def1" : "def2";
}

std::optional<GrammarKind> parse_kind(std::string_view text) {
  if (text == "rc") return GrammarKind::kRandomContext;
  if (text == "sc") return GrammarKind::kSemiConditional;
  if (text == "permitting") return GrammarKind::kPermitting;
  if (text == "forbidding") return GrammarKind::kForbidding;
  return std::nullopt;
}

std::optional<DerivationMode> parse_mode(std::string_view text) {
  if (text == "def1") return DerivationMode::kDef1;
  if (text == "def2") return DerivationMode::kDef2;
  return std::nullopt;
}

void relabel(std::vector<Production>& productions, int first) {
  for (auto& p : productions) p.label = first++;
}

void relabel(CDSystem& system) {
  int next = 1;
  for (auto& c : system.components) {
    relabel(c.productions, next);
    next += static_cast<int>(c.productions.size());
  }
}

SymbolSet symbols_used(const std::vector<Production>& productions) {
  SymbolSet out;
  for (const auto& p : productions) {
    out.insert(p.lhs);
    out.insert(p.rhs.begin(), p.rhs.end());
    for (const auto& c : p.per) out.insert(c.begin(), c.end());
    for (const auto& c : p.forb) out.insert(c.begin(), c.end());
  }
  return out;
}

std::size_t production_count(const CDSystem& system) {
  std::size_t n = 0;
  for (const auto& c : system.components) n += c.productions.size();
  return n;
}

namespace {

std::string describe_conditions(const ConditionSet& conditions) {
  std::string out;
  for (const auto& c : conditions) {
    if (c.size() == 1) {
      out += " " + c.front().describe();
    } else {
      out += " (";
      for (const auto& s : c) out += " " + s.describe();
      out += " )";
    }
  }
  return out;
}

}  // namespace

std::string describe(const Production& p) {
  std::string out = p.lhs.describe() + " ->";
  for (const auto& s : p.rhs) out += " " + s.describe();
  if (!p.per.empty()) out += " per" + describe_conditions(p.per);
  if (!p.forb.empty()) out += " for" + describe_conditions(p.forb);
  return out;
}

std::string describe(const Word& w) {
  std::string out;
  for (const auto& s : w) {
    if (!out.empty()) out += ' ';
    out += s.describe();
  }
  return out;
}

}  // namespace regrew
