#include "regrew/validate.hpp"

#include <algorithm>
#include <set>
#include <unordered_set>

#include <json.hpp>

namespace regrew {

namespace {

class Checker {
 public:
  Checker(const SymbolSet& nonterminals, const SymbolSet& terminals, ValidationReport& report)
      : terminals_(terminals),
        n_(nonterminals.begin(), nonterminals.end()),
        t_(terminals.begin(), terminals.end()),
        report_(report) {}

  void alphabets(const Symbol& start) {
    for (const auto& t : terminals_) {
      if (!t.is_terminal()) add("terminal-class", "terminal alphabet contains nonterminal " + t.describe(), "alphabet");
      if (n_.count(t)) add("alphabet-overlap", t.describe() + " is both terminal and nonterminal", "alphabet");
    }
    for (const auto& x : n_) {
      if (x.is_terminal()) add("nonterminal-class", "nonterminal alphabet contains terminal " + x.describe(), "alphabet");
    }
    if (!n_.count(start)) add("start-not-nonterminal", "start symbol " + start.describe() + " is not a nonterminal", "start");
  }

  // RC-style shape means single nonterminal conditions.
  void production(const Production& p, const std::string& where, GrammarKind kind, Degree degree) {
    Classification& c = report_.classification;
    ++c.productions;
    if (p.label < 1) add("nonpositive-label", "label " + std::to_string(p.label) + " is not positive", where);
    if (!labels_.insert(p.label).second) add("duplicate-label", "label " + std::to_string(p.label) + " repeats", where);
    if (!n_.count(p.lhs)) add("lhs-not-nonterminal", "left-hand side " + p.lhs.describe() + " is not a nonterminal", where);
    if (p.rhs.empty()) add("empty-rhs", "right-hand side is empty", where);
    for (const auto& s : p.rhs) known(s, where);
    for (const auto* set : {&p.per, &p.forb}) {
      for (const auto& cond : *set) {
        if (cond.empty()) add("empty-condition", "condition string is empty", where);
        for (const auto& s : cond) {
          known(s, where);
          if (s.is_terminal()) c.terminal_conditions = true;
        }
      }
    }
    if (!std::is_sorted(p.per.begin(), p.per.end()) || std::adjacent_find(p.per.begin(), p.per.end()) != p.per.end() ||
        !std::is_sorted(p.forb.begin(), p.forb.end()) ||
        std::adjacent_find(p.forb.begin(), p.forb.end()) != p.forb.end()) {
      add("condition-set-form", "condition set is not normalized", where);
    }

    c.max_per_count = std::max(c.max_per_count, p.per.size());
    c.max_forb_count = std::max(c.max_forb_count, p.forb.size());
    for (const auto& cond : p.per) c.max_per_length = std::max(c.max_per_length, cond.size());
    for (const auto& cond : p.forb) c.max_forb_length = std::max(c.max_forb_length, cond.size());
    if (!p.forb.empty()) c.permitting = false;
    if (!p.per.empty()) c.forbidding = false;
    if (std::find(p.forb.begin(), p.forb.end(), Condition{p.lhs}) != p.forb.end()) c.lhs_not_in_forbid = false;

    bool rc_shape = all_single_nonterminals(p.per) && all_single_nonterminals(p.forb);
    if (kind == GrammarKind::kSemiConditional) {
      if (p.per.size() > 1 || p.forb.size() > 1) {
        add("sc-condition-count", "semi-conditional production has more than one permitting or forbidding string", where);
      }
      for (const auto& cond : p.per) {
        if (static_cast<int>(cond.size()) > degree.permitting) {
          add("sc-degree", "permitting string longer than " + std::to_string(degree.permitting), where);
        }
      }
      for (const auto& cond : p.forb) {
        if (static_cast<int>(cond.size()) > degree.forbidding) {
          add("sc-degree", "forbidding string longer than " + std::to_string(degree.forbidding), where);
        }
      }
    } else {
      if (!rc_shape) add("rc-condition-shape", "random context conditions must be single nonterminals", where);
      if (kind == GrammarKind::kPermitting && !p.forb.empty()) {
        add("permitting-has-forbid", "permitting production has a forbidding set", where);
      }
      if (kind == GrammarKind::kForbidding && !p.per.empty()) {
        add("forbidding-has-permit", "forbidding production has a permitting set", where);
      }
    }

    bool shape = false;
    if (rc_shape && n_.count(p.lhs)) {
      if (p.rhs.size() == 2 && n_.count(p.rhs[0]) && n_.count(p.rhs[1])) shape = true;
      if (p.rhs.size() == 1 && n_.count(p.rhs[0])) shape = true;
      if (p.rhs.size() == 1 && t_.count(p.rhs[0]) && p.per.empty() && p.forb.empty()) shape = true;
    }
    if (!shape) c.production_limited = false;
    if (!shape || p.per.size() > 1 || p.forb.size() > 1) c.limited = false;
  }

  void add(std::string code, std::string message, std::string location) {
    report_.violations.push_back({std::move(code), std::move(message), std::move(location)});
  }

 private:
  bool all_single_nonterminals(const ConditionSet& set) const {
    return std::all_of(set.begin(), set.end(), [&](const Condition& cond) {
      return cond.size() == 1 && cond.front().is_nonterminal() && n_.count(cond.front());
    });
  }

  void known(const Symbol& s, const std::string& where) {
    if (!n_.count(s) && !t_.count(s)) add("unknown-symbol", "symbol " + s.describe() + " is not declared", where);
  }

  const SymbolSet& terminals_;
  std::unordered_set<Symbol, SymbolHash> n_;
  std::unordered_set<Symbol, SymbolHash> t_;
  ValidationReport& report_;
  std::set<int> labels_;
};

void start_classification(Classification& c, const SymbolSet& n, const SymbolSet& t) {
  c.production_limited = true;
  c.limited = true;
  c.lhs_not_in_forbid = true;
  c.permitting = true;
  c.forbidding = true;
  c.nonterminals = n.size();
  c.terminals = t.size();
}

void finish(ValidationReport& r) {
  r.ok = r.violations.empty();
  if (!r.ok) {
    r.classification.production_limited = false;
    r.classification.limited = false;
  }
}

}  // namespace

bool ValidationReport::has(std::string_view code) const {
  return std::any_of(violations.begin(), violations.end(), [&](const Violation& v) { return v.code == code; });
}

ValidationReport validate_grammar(const Grammar& g) {
  ValidationReport r;
  start_classification(r.classification, g.nonterminals, g.terminals);
  Checker check(g.nonterminals, g.terminals, r);
  check.alphabets(g.start);
  if (g.kind == GrammarKind::kSemiConditional && (g.degree.permitting < 0 || g.degree.forbidding < 0)) {
    check.add("sc-degree", "negative degree", "degree");
  }
  for (const auto& p : g.productions) {
    check.production(p, "production " + std::to_string(p.label), g.kind, g.degree);
  }
  finish(r);
  return r;
}

ValidationReport validate_grammar(const CDSystem& s) {
  ValidationReport r;
  start_classification(r.classification, s.nonterminals, s.terminals);
  r.classification.components = s.components.size();
  Checker check(s.nonterminals, s.terminals, r);
  check.alphabets(s.start);
  if (s.components.empty()) check.add("no-components", "system has no components", "components");
  for (std::size_t k = 0; k < s.components.size(); ++k) {
    const auto& comp = s.components[k];
    std::string where = "component " + std::to_string(k + 1);
    if (comp.productions.empty()) check.add("empty-component", "component has no productions", where);
    for (const auto& p : comp.productions) {
      check.production(p, where + ", production " + std::to_string(p.label), GrammarKind::kRandomContext, {});
    }
  }
  finish(r);
  return r;
}

ValidationReport validate_grammar(const Subject& s) {
  return std::visit([](const auto& x) { return validate_grammar(x); }, s);
}

std::string to_json(const ValidationReport& report) {
  nlohmann::json j;
  j["ok"] = report.ok;
  j["violations"] = nlohmann::json::array();
  for (const auto& v : report.violations) {
    j["violations"].push_back({{"code", v.code}, {"message", v.message}, {"location", v.location}});
  }
  const auto& c = report.classification;
  j["classification"] = {
      {"production_limited", c.production_limited},
      {"limited", c.limited},
      {"lhs_not_in_forbid", c.lhs_not_in_forbid},
      {"permitting", c.permitting},
      {"forbidding", c.forbidding},
      {"terminal_conditions", c.terminal_conditions},
      {"max_per_count", c.max_per_count},
      {"max_forb_count", c.max_forb_count},
      {"max_per_length", c.max_per_length},
      {"max_forb_length", c.max_forb_length},
      {"productions", c.productions},
      {"nonterminals", c.nonterminals},
      {"terminals", c.terminals},
      {"components", c.components},
  };
  return j.dump(2) + "\n";
}

void require_valid(const ValidationReport& report, std::string_view what) {
  if (report.ok) return;
  std::string msg = std::string(what) + ": invalid input";
  for (const auto& v : report.violations) msg += "; " + v.code + " at " + v.location + ": " + v.message;
  throw PreconditionError(msg);
}

}  // namespace regrew
