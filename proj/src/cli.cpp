#include "regrew/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "regrew/cd_engine.hpp"
#include "regrew/dsl.hpp"
#include "regrew/engine.hpp"
#include "regrew/equiv.hpp"
#include "regrew/transforms.hpp"
#include "regrew/validate.hpp"

namespace regrew {

namespace {

// Input problems that end the command with exit code 1.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Subject load(const std::string& path) {
  std::string text = read_file(path);
  try {
    return parse_grammar(text);
  } catch (const ParseError& e) {
    throw InputError(path + ":" + std::to_string(e.line()) + ":" + std::to_string(e.column()) + ": " + e.detail());
  }
}

Subject load_valid(const std::string& path) {
  Subject s = load(path);
  auto report = validate_grammar(s);
  if (!report.ok) {
    const auto& v = report.violations.front();
    throw InputError(path + ": invalid grammar: " + v.code + " at " + v.location + ": " + v.message);
  }
  return s;
}

std::vector<std::string> split_ops(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// Output grammars go through the parser before they are written.
void write_grammar(const std::string& path, const Subject& s, const std::string& provenance,
                   const EngineOptions& engine) {
  std::string text = render_grammar(s);
  if (!(parse_grammar(text) == s)) throw InternalError("rendered grammar does not parse back to itself");
  std::ofstream file(path, std::ios::binary);
  if (!file) throw InputError("cannot write " + path);
  file << "# " << provenance << "\n# max_forms " << engine.max_forms << "\n" << text;
  if (!file) throw InputError("cannot write " + path);
}

std::string with_max_forms(const std::string& json_text, const EngineOptions& engine) {
  auto j = nlohmann::json::parse(json_text);
  j["max_forms"] = engine.max_forms;
  return j.dump(2) + "\n";
}

std::optional<GrammarKind> kind_option(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return parse_kind(s);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Regulated rewriting workbench", "regrew"};
  app.require_subcommand(1);
  app.fallthrough(false);

  std::string file, file2, word, op, ops, output;
  std::string priming = "chain", audit = "repaired";
  int bound = 0;
  bool json = false;
  bool prune = false;

  auto* validate = app.add_subcommand("validate", "check a grammar file and print the report");
  validate->add_option("file", file, "grammar file")->required();

  auto* stats = app.add_subcommand("stats", "print counts, classification and digest");
  stats->add_option("file", file, "grammar file")->required();

  auto* enumerate = app.add_subcommand("enum", "list generated words up to a length bound");
  enumerate->add_option("file", file, "grammar file")->required();
  enumerate->add_option("--bound", bound, "maximum word length")->required()->check(CLI::PositiveNumber);
  enumerate->add_flag("--json", json, "print a JSON document");

  auto* member = app.add_subcommand("member", "search a derivation of one word");
  member->add_option("file", file, "grammar file")->required();
  member->add_option("--word", word, "space-separated terminal names")->required();

  auto* transform = app.add_subcommand("transform", "apply one construction");
  transform->add_option("file", file, "grammar file")->required();
  transform->add_option("--op", op, "transform name")->required()->check(CLI::IsMember(transform_names()));
  transform->add_option("-o,--output", output, "output grammar file")->required();
  transform->add_flag("--prune-unreachable", prune, "drop productions with unreachable lhs");
  transform->add_option("--priming", priming, "thm3 bookkeeping order")->check(CLI::IsMember({"chain", "lattice"}));
  transform->add_option("--audit", audit, "thm3 audit gadget")->check(CLI::IsMember({"repaired", "literal"}));

  auto* pipeline = app.add_subcommand("pipeline", "apply constructions in sequence");
  pipeline->add_option("file", file, "grammar file")->required();
  pipeline->add_option("--ops", ops, "comma-separated transform names")->required();
  pipeline->add_option("-o,--output", output, "output grammar file")->required();
  pipeline->add_flag("--prune-unreachable", prune, "drop productions with unreachable lhs");
  pipeline->add_option("--priming", priming, "thm3 bookkeeping order")->check(CLI::IsMember({"chain", "lattice"}));
  pipeline->add_option("--audit", audit, "thm3 audit gadget")->check(CLI::IsMember({"repaired", "literal"}));

  auto* equiv = app.add_subcommand("equiv", "compare bounded languages");
  equiv->add_option("first", file, "grammar file")->required();
  equiv->add_option("second", file2, "grammar file")->required();
  equiv->add_option("--bound", bound, "maximum word length")->required()->check(CLI::PositiveNumber);

  GrammarShape shape;
  std::string kind_text = "rc", mode_text;
  std::uint64_t seed = 1;
  std::size_t count = 10;
  auto* fuzz = app.add_subcommand("fuzz", "compare random grammars with their transformed forms");
  fuzz->add_option("--kind", kind_text, "rc, sc, permitting or forbidding")
      ->check(CLI::IsMember({"rc", "sc", "permitting", "forbidding"}));
  fuzz->add_option("--mode", mode_text, "def1 or def2")->check(CLI::IsMember({"def1", "def2"}));
  fuzz->add_option("--count", count, "number of seeds");
  fuzz->add_option("--seed", seed, "first seed");
  fuzz->add_option("--bound", bound, "maximum word length")->required()->check(CLI::PositiveNumber);
  fuzz->add_option("--ops", ops, "comma-separated transform names (empty: identity)");
  fuzz->add_option("--nonterminals", shape.nonterminals, "nonterminal count");
  fuzz->add_option("--terminals", shape.terminals, "terminal count");
  fuzz->add_option("--productions", shape.productions, "production count");
  fuzz->add_option("--max-rhs", shape.max_rhs, "longest right-hand side");
  fuzz->add_option("--permit-density", shape.permit_density, "chance of a permitting condition");
  fuzz->add_option("--forbid-density", shape.forbid_density, "chance of a forbidding condition");
  fuzz->add_option("--degree", shape.degree.permitting, "semi-conditional degree (both components)");
  fuzz->add_flag("--production-limited", shape.production_limited, "random context productions of limited shape");
  fuzz->add_option("-o,--output", output, "also write the report to this file");

  std::vector<std::string> rest(args.begin() + (args.empty() ? 0 : 1), args.end());
  std::reverse(rest.begin(), rest.end());
  try {
    app.parse(rest);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  const EngineOptions engine = EngineOptions::from_environment();
  TransformOptions topts;
  topts.prune_unreachable = prune;
  if (priming == "lattice") topts.priming = TransformOptions::Priming::kLattice;
  if (audit == "literal") topts.audit = TransformOptions::Audit::kLiteral;

  try {
    if (validate->parsed()) {
      auto report = validate_grammar(load(file));
      out << to_json(report);
      return report.ok ? kExitOk : kExitNegative;
    }
    if (stats->parsed()) {
      Subject s = load(file);
      auto report = validate_grammar(s);
      nlohmann::json j = nlohmann::json::parse(to_json(report));
      j["digest"] = digest(s);
      if (const auto* g = std::get_if<Grammar>(&s)) {
        j["kind"] = std::string(to_string(g->kind));
        j["mode"] = std::string(to_string(g->mode));
        if (g->kind == GrammarKind::kSemiConditional) j["degree"] = {g->degree.permitting, g->degree.forbidding};
      } else {
        const auto& sys = std::get<CDSystem>(s);
        j["kind"] = "cd";
        j["mode"] = "def1";
        nlohmann::json comps = nlohmann::json::array();
        for (const auto& c : sys.components) comps.push_back({{"name", c.name}, {"productions", c.productions.size()}});
        j["component_sizes"] = comps;
      }
      out << j.dump(2) << "\n";
      return report.ok ? kExitOk : kExitNegative;
    }
    if (enumerate->parsed()) {
      Subject s = load_valid(file);
      LanguageSample sample;
      if (const auto* g = std::get_if<Grammar>(&s)) {
        sample = enumerate_bounded(*g, bound, engine);
      } else {
        sample = enumerate_bounded_cd(std::get<CDSystem>(s), bound, engine);
      }
      sample.digest = digest(s);
      if (json) {
        out << to_json(sample);
      } else {
        out << "# bound " << bound << " words " << sample.words.size() << " max_forms " << engine.max_forms
            << (sample.truncated ? " truncated" : "") << "\n";
        for (const auto& w : sample.words) out << render_word(w) << "\n";
      }
      if (sample.truncated) {
        err << "enumeration hit the form cap of " << engine.max_forms << "; the list may be incomplete\n";
        return kExitInconclusive;
      }
      return kExitOk;
    }
    if (member->parsed()) {
      Subject s = load_valid(file);
      const SymbolSet& terminals = std::visit([](const auto& x) -> const SymbolSet& { return x.terminals; }, s);
      Word w;
      try {
        w = parse_word(word, terminals);
      } catch (const std::invalid_argument& e) {
        throw InputError(std::string("bad word: ") + e.what());
      }
      nlohmann::json j;
      j["word"] = render_word(w);
      j["max_forms"] = engine.max_forms;
      int code = kExitOk;
      if (const auto* g = std::get_if<Grammar>(&s)) {
        Witness wit = membership_witness(*g, w, engine);
        j["states_explored"] = wit.states_explored;
        if (wit.status == Witness::Status::kFound) {
          j["status"] = "member";
          nlohmann::json steps = nlohmann::json::array();
          for (const auto& st : wit.steps) {
            steps.push_back({{"label", st.label}, {"position", st.position}, {"result", render_word(st.result)}});
          }
          j["derivation"] = steps;
        } else if (wit.status == Witness::Status::kNone) {
          j["status"] = "not-member";
          code = kExitNegative;
        } else {
          j["status"] = "inconclusive";
          code = kExitInconclusive;
        }
      } else {
        auto sample = enumerate_bounded_cd(std::get<CDSystem>(s), static_cast<int>(w.size()), engine);
        j["states_explored"] = sample.states_explored;
        bool found = std::binary_search(sample.words.begin(), sample.words.end(), w, shortlex_less);
        if (found) {
          j["status"] = "member";
        } else if (sample.truncated) {
          j["status"] = "inconclusive";
          code = kExitInconclusive;
        } else {
          j["status"] = "not-member";
          code = kExitNegative;
        }
      }
      out << j.dump(2) << "\n";
      return code;
    }
    if (transform->parsed() || pipeline->parsed()) {
      Subject s = load_valid(file);
      std::vector<std::string> names = transform->parsed() ? std::vector<std::string>{op} : split_ops(ops);
      for (const auto& n : names) {
        if (std::find(transform_names().begin(), transform_names().end(), n) == transform_names().end()) {
          err << "error: unknown transform '" << n << "'\n" << app.help();
          return kExitUsage;
        }
      }
      auto result = transform->parsed() ? apply_transform(op, s, topts) : apply_pipeline(names, s, topts);
      std::string provenance = "regrew " + std::string(transform->parsed() ? "transform " : "pipeline ");
      for (std::size_t i = 0; i < names.size(); ++i) provenance += (i ? "," : "") + names[i];
      write_grammar(output, result.output, provenance, engine);
      for (const auto& w : result.report.warnings) err << "warning: " << w << "\n";
      out << with_max_forms(to_json(result.report), engine);
      return kExitOk;
    }
    if (equiv->parsed()) {
      Subject a = load_valid(file);
      Subject b = load_valid(file2);
      EquivVerdict v = bounded_equiv(a, b, bound, engine);
      out << to_json(v);
      for (const auto& n : v.notes) err << "note: " << n << "\n";
      switch (v.status) {
        case EquivVerdict::Status::kEqual:
          return kExitOk;
        case EquivVerdict::Status::kCounterexample:
          return kExitNegative;
        case EquivVerdict::Status::kInconclusive:
          return kExitInconclusive;
      }
    }
    if (fuzz->parsed()) {
      shape.kind = *kind_option(kind_text);
      if (!mode_text.empty()) shape.mode = parse_mode(mode_text);
      shape.degree.forbidding = shape.degree.permitting;
      FuzzReport r = fuzz_pipeline(shape, split_ops(ops), seed, count, bound, engine, topts);
      std::string text = to_json(r);
      out << text;
      if (!output.empty()) {
        std::ofstream file_out(output, std::ios::binary);
        if (!(file_out << text)) throw InputError("cannot write " + output);
      }
      if (r.counterexamples > 0 || r.errors > 0) return kExitNegative;
      if (r.inconclusive > 0) return kExitInconclusive;
      return kExitOk;
    }
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitNegative;
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << "\n";
    return kExitNegative;
  } catch (const InternalError& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitNegative;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitNegative;
  }
  return kExitUsage;
}

}  // namespace regrew
