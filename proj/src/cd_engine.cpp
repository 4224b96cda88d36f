#include "regrew/cd_engine.hpp"

#include <algorithm>
#include <stdexcept>

#include <json.hpp>

#include "compiled.hpp"
#include "regrew/dsl.hpp"

namespace regrew {

using detail::Form;
using detail::FormSet;
using detail::RuleSet;
using detail::SymbolTable;

namespace {

struct Compiled {
  SymbolTable table;
  std::vector<RuleSet> components;

  explicit Compiled(const CDSystem& sys) {
    for (const auto& s : sys.nonterminals) table.intern(s);
    for (const auto& s : sys.terminals) table.intern(s);
    components.reserve(sys.components.size());
    for (const auto& c : sys.components) components.emplace_back(c.productions, DerivationMode::kDef1, table);
  }
};

struct Closure {
  std::vector<std::pair<Form, std::size_t>> results;  // form, inner steps
  bool truncated = false;
  std::size_t explored = 0;
};

Closure t_closure(const RuleSet& rules, const Form& start, std::size_t bound, std::size_t cap) {
  Closure out;
  if (!rules.any_applicable(start)) return out;
  FormSet visited{start};
  std::vector<Form> frontier{start};
  for (std::size_t depth = 1; !frontier.empty() && !out.truncated; ++depth) {
    std::vector<Form> next;
    for (const auto& f : frontier) {
      rules.for_each_successor(f, bound, [&](Form g) {
        if (out.truncated || visited.count(g)) return;
        if (visited.size() >= cap) {
          out.truncated = true;
          return;
        }
        visited.insert(g);
        next.push_back(std::move(g));
      });
      if (out.truncated) break;
    }
    for (const auto& g : next) {
      if (!rules.any_applicable(g)) out.results.push_back({g, depth});
    }
    frontier = std::move(next);
  }
  out.explored = visited.size();
  return out;
}

bool all_terminal(const Form& f, const SymbolTable& table) {
  return std::all_of(f.begin(), f.end(), [&](detail::SymId s) { return table.is_terminal(s); });
}

}  // namespace

TStepResult t_step_successors(const CDSystem& sys, std::size_t component, const Word& form, int bound,
                              const EngineOptions& options) {
  if (component >= sys.components.size()) throw std::invalid_argument("component index out of range");
  if (bound < 1 || form.size() > static_cast<std::size_t>(bound)) {
    throw std::invalid_argument("form longer than the bound");
  }
  Compiled c(sys);
  Form start = c.table.encode(form);
  Closure cl = t_closure(c.components[component], start, static_cast<std::size_t>(bound), options.max_forms);
  TStepResult out;
  out.truncated = cl.truncated;
  out.states_explored = cl.explored;
  for (const auto& [f, steps] : cl.results) {
    if (c.components[component].any_applicable(f)) throw InternalError("t-step result is not component-terminal");
    out.forms.push_back(c.table.decode(f));
  }
  std::sort(out.forms.begin(), out.forms.end(), shortlex_less);
  return out;
}

LanguageSample enumerate_bounded_cd(const CDSystem& sys, int bound, const EngineOptions& options,
                                    std::vector<TraceEntry>* trace) {
  if (bound < 1) throw std::invalid_argument("bound must be positive");
  Compiled c(sys);
  const auto limit = static_cast<std::size_t>(bound);

  LanguageSample sample;
  sample.bound = bound;
  sample.max_forms = options.max_forms;

  FormSet visited;
  std::vector<Form> frontier{c.table.encode({sys.start})};
  visited.insert(frontier.front());
  std::vector<Form> words;
  std::size_t inner_explored = 0;

  // The cap bounds every form visited, outer and inner. Closures run in fixed
  // batches that share the budget left before the batch, so the outcome does
  // not depend on the worker count.
  constexpr std::size_t kBatch = 16;
  auto used = [&] { return visited.size() + inner_explored; };
  while (!frontier.empty() && !sample.truncated) {
    std::vector<Form> next_frontier;
    for (std::size_t begin = 0; begin < frontier.size() && !sample.truncated; begin += kBatch) {
      const std::size_t end = std::min(frontier.size(), begin + kBatch);
      const std::size_t budget = options.max_forms > used() ? options.max_forms - used() : 0;
      auto expanded = detail::parallel_map<std::vector<Closure>>(end - begin, options.workers, [&](std::size_t i) {
        std::vector<Closure> per_component;
        per_component.reserve(c.components.size());
        for (const auto& rules : c.components) {
          per_component.push_back(t_closure(rules, frontier[begin + i], limit, budget));
        }
        return per_component;
      });
      for (std::size_t i = 0; i < expanded.size() && !sample.truncated; ++i) {
        for (std::size_t k = 0; k < expanded[i].size() && !sample.truncated; ++k) {
          auto& cl = expanded[i][k];
          inner_explored += cl.explored;
          if (cl.truncated || used() > options.max_forms) sample.truncated = true;
          for (auto& [f, steps] : cl.results) {
            if (trace) {
              trace->push_back({k, sys.components[k].name, steps, form_digest(c.table.decode(frontier[begin + i])),
                                form_digest(c.table.decode(f))});
            }
            if (visited.count(f)) continue;
            if (used() >= options.max_forms) {
              sample.truncated = true;
              break;
            }
            visited.insert(f);
            if (all_terminal(f, c.table)) {
              words.push_back(f);
            } else {
              next_frontier.push_back(std::move(f));
            }
          }
        }
      }
    }
    frontier = std::move(next_frontier);
  }

  sample.states_explored = visited.size() + inner_explored;
  for (const auto& f : words) sample.words.push_back(c.table.decode(f));
  std::sort(sample.words.begin(), sample.words.end(), shortlex_less);
  return sample;
}

std::string form_digest(const Word& w) { return fnv1a_hex(describe(w)); }

std::string to_json(const std::vector<TraceEntry>& trace) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& e : trace) {
    j.push_back({{"component", e.component + 1},
                 {"name", e.component_name},
                 {"inner_steps", e.inner_steps},
                 {"source", e.source},
                 {"result", e.result}});
  }
  return j.dump(2) + "\n";
}

}  // namespace regrew
