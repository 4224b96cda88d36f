#include "compiled.hpp"

#include <algorithm>
#include <map>

namespace regrew::detail {

const std::vector<std::uint32_t> RuleSet::kNoGroups;

SymId SymbolTable::intern(const Symbol& s) {
  auto [it, inserted] = ids_.emplace(s, static_cast<SymId>(symbols_.size()));
  if (inserted) {
    symbols_.push_back(s);
    terminal_.push_back(s.is_terminal() ? 1 : 0);
  }
  return it->second;
}

SymId SymbolTable::find(const Symbol& s) const {
  auto it = ids_.find(s);
  return it == ids_.end() ? kMissing : it->second;
}

Form SymbolTable::encode(const Word& w) {
  Form f;
  f.reserve(w.size());
  for (const auto& s : w) f.push_back(intern(s));
  return f;
}

Word SymbolTable::decode(const Form& f) const {
  Word w;
  w.reserve(f.size());
  for (SymId id : f) w.push_back(symbols_[id]);
  return w;
}

RuleSet::RuleSet(const std::vector<Production>& productions, DerivationMode mode, SymbolTable& table)
    : mode_(mode) {
  std::map<std::pair<SymId, Form>, std::uint32_t> group_index;
  productions_.reserve(productions.size());
  for (const auto& p : productions) {
    CompiledProduction cp;
    cp.label = p.label;
    cp.lhs = table.intern(p.lhs);
    for (const auto& c : p.per) cp.per.push_back(table.encode(c));
    for (const auto& c : p.forb) cp.forb.push_back(table.encode(c));
    Form rhs = table.encode(p.rhs);
    auto key = std::make_pair(cp.lhs, rhs);
    auto it = group_index.find(key);
    if (it == group_index.end()) {
      it = group_index.emplace(key, static_cast<std::uint32_t>(groups_.size())).first;
      RuleGroup g;
      g.lhs = cp.lhs;
      g.rhs = std::move(rhs);
      groups_.push_back(std::move(g));
    }
    RuleGroup& g = groups_[it->second];
    auto index = static_cast<std::uint32_t>(productions_.size());
    g.members.push_back(index);
    if (cp.per.empty() && cp.forb.empty()) {
      g.unconditional = true;
    } else if (cp.per.size() == 1 && cp.per[0].size() == 1 && cp.forb.empty()) {
      g.any_permit.push_back(cp.per[0][0]);
    } else if (cp.forb.size() == 1 && cp.forb[0].size() == 1 && cp.per.empty()) {
      g.any_forbid.push_back(cp.forb[0][0]);
    } else {
      g.general.push_back(index);
    }
    productions_.push_back(std::move(cp));
  }
  for (auto& g : groups_) {
    std::sort(g.any_permit.begin(), g.any_permit.end());
    g.any_permit.erase(std::unique(g.any_permit.begin(), g.any_permit.end()), g.any_permit.end());
    std::sort(g.any_forbid.begin(), g.any_forbid.end());
    g.any_forbid.erase(std::unique(g.any_forbid.begin(), g.any_forbid.end()), g.any_forbid.end());
  }
  by_lhs_.assign(table.size(), {});
  for (std::uint32_t gi = 0; gi < groups_.size(); ++gi) by_lhs_[groups_[gi].lhs].push_back(gi);
}

const std::vector<std::uint32_t>& RuleSet::groups_for(SymId lhs) const {
  return lhs < by_lhs_.size() ? by_lhs_[lhs] : kNoGroups;
}

bool RuleSet::present(SymId s, const Form& form, std::size_t pos) const {
  for (std::size_t j = 0; j < form.size(); ++j) {
    if (form[j] == s && (mode_ == DerivationMode::kDef2 || j != pos)) return true;
  }
  return false;
}

bool RuleSet::occurs(const std::vector<SymId>& cond, const Form& form, std::size_t pos) const {
  if (cond.size() == 1) return present(cond[0], form, pos);
  if (mode_ == DerivationMode::kDef2) {
    return std::search(form.begin(), form.end(), cond.begin(), cond.end()) != form.end();
  }
  Form context;
  context.reserve(form.size() - 1);
  for (std::size_t j = 0; j < form.size(); ++j) {
    if (j != pos) context.push_back(form[j]);
  }
  return std::search(context.begin(), context.end(), cond.begin(), cond.end()) != context.end();
}

bool RuleSet::conditions_hold(const CompiledProduction& p, const Form& form, std::size_t pos) const {
  for (const auto& c : p.per) {
    if (!occurs(c, form, pos)) return false;
  }
  for (const auto& c : p.forb) {
    if (occurs(c, form, pos)) return false;
  }
  return true;
}

bool RuleSet::group_applies(const RuleGroup& g, const Form& form, std::size_t pos) const {
  if (g.unconditional) return true;
  const bool skip = mode_ == DerivationMode::kDef1;
  if (!g.any_permit.empty()) {
    for (std::size_t j = 0; j < form.size(); ++j) {
      if (skip && j == pos) continue;
      if (std::binary_search(g.any_permit.begin(), g.any_permit.end(), form[j])) return true;
    }
  }
  if (!g.any_forbid.empty()) {
    std::size_t context = form.size() - (skip ? 1 : 0);
    if (g.any_forbid.size() > context) return true;
    for (SymId f : g.any_forbid) {
      if (!present(f, form, pos)) return true;
    }
  }
  for (std::uint32_t index : g.general) {
    if (conditions_hold(productions_[index], form, pos)) return true;
  }
  return false;
}

bool RuleSet::production_applies(std::uint32_t index, const Form& form, std::size_t pos) const {
  const auto& p = productions_[index];
  return form[pos] == p.lhs && conditions_hold(p, form, pos);
}

bool RuleSet::any_applicable(const Form& form) const {
  for (std::size_t pos = 0; pos < form.size(); ++pos) {
    for (std::uint32_t gi : groups_for(form[pos])) {
      if (group_applies(groups_[gi], form, pos)) return true;
    }
  }
  return false;
}

}  // namespace regrew::detail
