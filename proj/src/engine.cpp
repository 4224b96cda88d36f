#include "regrew/engine.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "compiled.hpp"

namespace regrew {

using detail::Form;
using detail::FormHash;
using detail::FormSet;
using detail::RuleSet;
using detail::SymbolTable;

namespace {

std::size_t env_number(const char* name, std::size_t fallback) {
  const char* raw = std::getenv(name);
  if (!raw || !*raw) return fallback;
  char* end = nullptr;
  unsigned long long v = std::strtoull(raw, &end, 10);
  if (*end != '\0' || v == 0) throw std::invalid_argument(std::string(name) + " must be a positive integer");
  return static_cast<std::size_t>(v);
}

bool all_terminal(const Form& f, const SymbolTable& table) {
  return std::all_of(f.begin(), f.end(), [&](detail::SymId s) { return table.is_terminal(s); });
}

bool condition_occurs(const Condition& cond, const Word& context) {
  return std::search(context.begin(), context.end(), cond.begin(), cond.end()) != context.end();
}

}  // namespace

EngineOptions EngineOptions::from_environment() {
  EngineOptions o;
  o.max_forms = env_number("REGREW_MAX_FORMS", o.max_forms);
  o.workers = static_cast<unsigned>(env_number("REGREW_WORKERS", o.workers));
  return o;
}

bool shortlex_less(const Word& a, const Word& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

bool applicable(const Production& p, const Word& form, std::size_t pos, DerivationMode mode) {
  if (pos >= form.size()) throw std::invalid_argument("rewrite position out of range");
  if (form[pos] != p.lhs) throw std::invalid_argument("symbol at rewrite position is not the production's lhs");
  Word context;
  context.reserve(form.size());
  for (std::size_t j = 0; j < form.size(); ++j) {
    if (mode == DerivationMode::kDef2 || j != pos) context.push_back(form[j]);
  }
  for (const auto& c : p.per) {
    if (!condition_occurs(c, context)) return false;
  }
  for (const auto& c : p.forb) {
    if (condition_occurs(c, context)) return false;
  }
  return true;
}

std::vector<DerivationStep> successors(const Grammar& g, const Word& form) {
  std::vector<DerivationStep> out;
  std::vector<const Production*> order;
  for (const auto& p : g.productions) order.push_back(&p);
  std::stable_sort(order.begin(), order.end(), [](const Production* a, const Production* b) { return a->label < b->label; });
  for (std::size_t pos = 0; pos < form.size(); ++pos) {
    for (const Production* p : order) {
      if (p->lhs != form[pos] || !applicable(*p, form, pos, g.mode)) continue;
      Word next(form.begin(), form.begin() + static_cast<std::ptrdiff_t>(pos));
      next.insert(next.end(), p->rhs.begin(), p->rhs.end());
      next.insert(next.end(), form.begin() + static_cast<std::ptrdiff_t>(pos) + 1, form.end());
      if (next.size() < form.size()) throw InternalError("length decreased along a derivation step");
      out.push_back({p->label, pos, std::move(next)});
    }
  }
  return out;
}

LanguageSample enumerate_bounded(const Grammar& g, int bound, const EngineOptions& options) {
  if (bound < 1) throw std::invalid_argument("bound must be positive");
  SymbolTable table;
  for (const auto& s : g.nonterminals) table.intern(s);
  for (const auto& s : g.terminals) table.intern(s);
  RuleSet rules(g.productions, g.mode, table);
  const auto limit = static_cast<std::size_t>(bound);

  LanguageSample sample;
  sample.bound = bound;
  sample.max_forms = options.max_forms;

  FormSet visited;
  std::vector<Form> frontier{table.encode({g.start})};
  visited.insert(frontier.front());
  std::vector<Form> words;

  while (!frontier.empty() && !sample.truncated) {
    auto expanded = detail::parallel_map<std::vector<Form>>(frontier.size(), options.workers, [&](std::size_t i) {
      std::vector<Form> next;
      rules.for_each_successor(frontier[i], limit, [&](Form f) { next.push_back(std::move(f)); });
      return next;
    });
    std::vector<Form> next_frontier;
    for (auto& batch : expanded) {
      for (auto& f : batch) {
        if (visited.count(f)) continue;
        if (visited.size() >= options.max_forms) {
          sample.truncated = true;
          break;
        }
        visited.insert(f);
        if (all_terminal(f, table)) {
          words.push_back(f);
        } else {
          next_frontier.push_back(std::move(f));
        }
      }
      if (sample.truncated) break;
    }
    frontier = std::move(next_frontier);
  }

  sample.states_explored = visited.size();
  for (const auto& f : words) sample.words.push_back(table.decode(f));
  std::sort(sample.words.begin(), sample.words.end(), shortlex_less);
  return sample;
}

Witness membership_witness(const Grammar& g, const Word& word, const EngineOptions& options) {
  if (word.empty()) throw std::invalid_argument("word must be nonempty");
  for (const auto& s : word) {
    if (!g.terminals.count(s)) throw std::invalid_argument("word symbol " + s.describe() + " is not a terminal");
  }
  SymbolTable table;
  for (const auto& s : g.nonterminals) table.intern(s);
  for (const auto& s : g.terminals) table.intern(s);
  RuleSet rules(g.productions, g.mode, table);
  const Form goal = table.encode(word);

  // Terminals are never rewritten, so a form holding more copies of some
  // terminal than the word cannot reach it.
  std::vector<std::size_t> budget(table.size(), 0);
  for (auto id : goal) ++budget[id];
  auto within_budget = [&](const Form& f) {
    std::vector<std::pair<detail::SymId, std::size_t>> counts;
    for (auto id : f) {
      if (!table.is_terminal(id)) continue;
      auto it = std::find_if(counts.begin(), counts.end(), [&](const auto& c) { return c.first == id; });
      if (it == counts.end()) {
        counts.push_back({id, 1});
        it = counts.end() - 1;
      } else {
        ++it->second;
      }
      if (it->second > budget[id]) return false;
    }
    return true;
  };

  Witness result;
  std::vector<Form> forms{table.encode({g.start})};
  std::vector<std::size_t> parent{0};
  std::unordered_map<Form, std::size_t, FormHash> index{{forms.front(), 0}};
  std::optional<std::size_t> found;
  if (forms.front() == goal) found = 0;
  bool truncated = false;
  for (std::size_t head = 0; head < forms.size() && !found && !truncated; ++head) {
    Form current = forms[head];
    rules.for_each_successor(current, goal.size(), [&](Form f) {
      if (found || truncated || index.count(f) || !within_budget(f)) return;
      if (forms.size() >= options.max_forms) {
        truncated = true;
        return;
      }
      index.emplace(f, forms.size());
      forms.push_back(f);
      parent.push_back(head);
      if (f == goal) found = forms.size() - 1;
    });
  }
  result.states_explored = forms.size();
  if (!found) {
    result.status = truncated ? Witness::Status::kInconclusive : Witness::Status::kNone;
    return result;
  }

  std::vector<std::size_t> path;
  for (std::size_t at = *found; at != 0; at = parent[at]) path.push_back(at);
  std::reverse(path.begin(), path.end());
  Word current{g.start};
  for (std::size_t at : path) {
    Word target = table.decode(forms[at]);
    auto steps = successors(g, current);
    auto it = std::find_if(steps.begin(), steps.end(), [&](const DerivationStep& s) { return s.result == target; });
    if (it == steps.end()) throw InternalError("witness path step could not be re-derived");
    result.steps.push_back(*it);
    current = std::move(target);
  }
  result.status = Witness::Status::kFound;
  return result;
}

bool replay_witness(const Grammar& g, const std::vector<DerivationStep>& steps, const Word& word) {
  Word current{g.start};
  for (const auto& step : steps) {
    auto options = successors(g, current);
    if (std::find(options.begin(), options.end(), step) == options.end()) return false;
    current = step.result;
  }
  return current == word;
}

std::string render_word(const Word& w) { return describe(w); }

Word parse_word(std::string_view text, const SymbolSet& terminals) {
  std::istringstream in{std::string(text)};
  std::string name;
  Word out;
  while (in >> name) {
    auto it = std::find_if(terminals.begin(), terminals.end(),
                           [&](const Symbol& t) { return t.is_atom() && t.name() == name; });
    if (it == terminals.end()) throw std::invalid_argument("unknown terminal '" + name + "'");
    out.push_back(*it);
  }
  if (out.empty()) throw std::invalid_argument("empty word");
  return out;
}

std::string to_json(const LanguageSample& sample) {
  nlohmann::json j;
  j["bound"] = sample.bound;
  j["truncated"] = sample.truncated;
  j["states_explored"] = sample.states_explored;
  j["max_forms"] = sample.max_forms;
  j["digest"] = sample.digest;
  j["words"] = nlohmann::json::array();
  for (const auto& w : sample.words) j["words"].push_back(render_word(w));
  return j.dump(2) + "\n";
}

}  // namespace regrew
