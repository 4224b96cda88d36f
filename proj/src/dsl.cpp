#include "regrew/dsl.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <map>
#include <optional>
#include <sstream>
#include <unordered_map>

namespace regrew {

ParseError::ParseError(int line, int column, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) +
                         ": " + message),
      line_(line),
      column_(column),
      detail_(message) {}

namespace {

struct Token {
  std::string text;
  int column = 1;
};

struct Line {
  int number = 0;
  std::string text;  // comment stripped
  std::vector<Token> tokens;
};

// '#' followed by a digit is a generated symbol name, anything else starts a comment.
std::string strip_comment(const std::string& raw) {
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw[i] == '#' && !(i + 1 < raw.size() && std::isdigit(static_cast<unsigned char>(raw[i + 1])))) {
      return raw.substr(0, i);
    }
  }
  return raw;
}

std::vector<Token> tokenize(const std::string& text) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < text.size()) {
    unsigned char c = static_cast<unsigned char>(text[i]);
    if (std::isspace(c)) {
      ++i;
      continue;
    }
    if (c == '(' || c == ')') {
      out.push_back({std::string(1, static_cast<char>(c)), static_cast<int>(i) + 1});
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j])) && text[j] != '(' &&
           text[j] != ')') {
      ++j;
    }
    out.push_back({text.substr(i, j - i), static_cast<int>(i) + 1});
    i = j;
  }
  return out;
}

bool is_generated_name(std::string_view s) {
  if (s.size() < 2 || s[0] != '#') return false;
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return true;
}

bool is_reserved(std::string_view s) { return s == "per" || s == "for"; }

// ---------------------------------------------------------------------------
// symtab descriptions

// Resolves `#k` symbol and `&k` tag references inside descriptions.
class Resolver {
 public:
  virtual ~Resolver() = default;
  virtual Symbol symbol(const std::string& name) = 0;
  virtual std::shared_ptr<const Tag> tag(const std::string& name) = 0;
};

class DescriptionParser {
 public:
  DescriptionParser(std::string_view text, const std::set<std::string>& terminal_names, Resolver* resolver = nullptr)
      : text_(text), terminal_names_(terminal_names), resolver_(resolver) {}

  /// Parses a tag body such as `sym #3',lab 4` (a `tagset` line).
  std::shared_ptr<const Tag> parse_tag_body() {
    auto tag = Tag::make(entries());
    skip_ws();
    if (pos_ != text_.size()) fail("trailing characters in tag description");
    return tag;
  }

  Symbol parse_all() {
    Symbol s = parse();
    skip_ws();
    if (pos_ != text_.size()) fail("trailing characters in symbol description");
    return s;
  }

  std::size_t position() const { return pos_; }

 private:
  [[noreturn]] void fail(const std::string& message) const {
    throw std::invalid_argument(message + " at offset " + std::to_string(pos_));
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool try_consume(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!try_consume(c)) fail(std::string("expected '") + c + "'");
  }

  std::string identifier() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    if (start == pos_) fail("expected a name");
    return std::string(text_.substr(start, pos_ - start));
  }

  int integer() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected an integer");
    return std::stoi(std::string(text_.substr(start, pos_ - start)));
  }

  bool next_is_open_paren() {
    skip_ws();
    return pos_ < text_.size() && text_[pos_] == '(';
  }

  std::string reference(char sigil) {
    std::size_t start = pos_++;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ == start + 1) fail(std::string("expected digits after '") + sigil + "'");
    if (!resolver_) fail("references are only allowed inside a grammar document");
    return std::string(text_.substr(start, pos_ - start));
  }

  std::vector<TagEntry> entries() {
    std::vector<TagEntry> out;
    do {
      std::string what = identifier();
      TagEntry entry{0};
      if (what == "sym") {
        entry.item = parse();
      } else if (what == "lab") {
        entry.item = integer();
      } else {
        fail("tag entries start with 'sym' or 'lab'");
      }
      entry.primed = try_consume('\'');
      out.push_back(std::move(entry));
    } while (try_consume(','));
    return out;
  }

  Symbol parse() {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == '#') return resolver_->symbol(reference('#'));
    std::optional<SymbolClass> forced;
    if (text_.substr(pos_, 2) == "t:") {
      forced = SymbolClass::kTerminal;
      pos_ += 2;
    } else if (text_.substr(pos_, 2) == "n:") {
      forced = SymbolClass::kNonterminal;
      pos_ += 2;
    }
    std::string word = identifier();
    if (!forced && next_is_open_paren()) {
      expect('(');
      if (word == "prime") {
        Symbol base = parse();
        expect(')');
        return Symbol::primed(base);
      }
      if (word == "idx") {
        Symbol base = parse();
        expect(',');
        int index = integer();
        expect(')');
        return Symbol::indexed(base, index);
      }
      if (word == "stage") {
        Symbol base = parse();
        expect(',');
        int index = integer();
        expect(',');
        int stage = integer();
        expect(')');
        return Symbol::staged(base, index, stage);
      }
      if (word == "pack") {
        std::vector<Symbol> content;
        while (!try_consume(')')) content.push_back(parse());
        return Symbol::packed(std::move(content));
      }
      if (word == "tag") {
        Symbol base = parse();
        expect(';');
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == '&') {
          auto tag = resolver_->tag(reference('&'));
          expect(')');
          return Symbol::set_tagged(base, std::move(tag));
        }
        if (try_consume(')')) return Symbol::set_tagged(base, Tag::make({}));
        auto list = entries();
        expect(')');
        return Symbol::set_tagged(base, Tag::make(std::move(list)));
      }
      fail("unknown constructor '" + word + "'");
    }
    SymbolClass cls = forced.value_or(terminal_names_.count(word) ? SymbolClass::kTerminal
                                                                 : SymbolClass::kNonterminal);
    return Symbol::atom(word, cls);
  }

  std::string_view text_;
  const std::set<std::string>& terminal_names_;
  Resolver* resolver_;
  std::size_t pos_ = 0;
};

std::set<std::string> names_of(const SymbolSet& terminals) {
  std::set<std::string> out;
  for (const auto& t : terminals) {
    if (t.is_atom()) out.insert(t.name());
  }
  return out;
}

// ---------------------------------------------------------------------------
// document parser

class DocumentParser {
 public:
  explicit DocumentParser(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string raw;
    int number = 0;
    while (std::getline(in, raw)) {
      ++number;
      if (!raw.empty() && raw.back() == '\r') raw.pop_back();
      Line line;
      line.number = number;
      line.text = strip_comment(raw);
      line.tokens = tokenize(line.text);
      if (!line.tokens.empty()) lines_.push_back(std::move(line));
    }
  }

  Subject parse() {
    read_headers();
    read_terminals();
    read_symtab();
    read_nonterminals();
    read_start();
    read_productions();
    if (is_cd_) {
      CDSystem sys{nonterminals_, terminals_, *start_, std::move(components_)};
      relabel(sys);
      return sys;
    }
    auto productions = std::move(components_.front().productions);
    relabel(productions);
    return Grammar{*kind_, *mode_, degree_, nonterminals_, terminals_, *start_, std::move(productions)};
  }

 private:
  [[noreturn]] static void fail(const Line& line, const Token& tok, const std::string& message) {
    throw ParseError(line.number, tok.column, message);
  }
  [[noreturn]] static void fail(const Line& line, int column, const std::string& message) {
    throw ParseError(line.number, column, message);
  }

  const Line* single_header(const std::string& keyword) {
    const Line* found = nullptr;
    for (const auto& line : lines_) {
      if (line.tokens.front().text != keyword) continue;
      if (found) fail(line, line.tokens.front(), "duplicate declaration '" + keyword + "'");
      found = &line;
    }
    return found;
  }

  void read_headers() {
    const Line* kind_line = single_header("kind");
    if (!kind_line) throw ParseError(1, 1, "missing 'kind' declaration");
    if (kind_line->tokens.size() != 2) fail(*kind_line, kind_line->tokens.front(), "expected 'kind NAME'");
    const Token& kt = kind_line->tokens[1];
    if (kt.text == "cd") {
      is_cd_ = true;
      kind_ = GrammarKind::kRandomContext;
    } else {
      kind_ = parse_kind(kt.text);
      if (!kind_) fail(*kind_line, kt, "unknown kind '" + kt.text + "'");
    }
    mode_ = default_mode(*kind_);

    if (const Line* mode_line = single_header("mode")) {
      if (mode_line->tokens.size() != 2) fail(*mode_line, mode_line->tokens.front(), "expected 'mode def1|def2'");
      auto m = parse_mode(mode_line->tokens[1].text);
      if (!m) fail(*mode_line, mode_line->tokens[1], "unknown mode '" + mode_line->tokens[1].text + "'");
      if (is_cd_ && *m != DerivationMode::kDef1) {
        fail(*mode_line, mode_line->tokens[1], "cd systems support only def1");
      }
      mode_ = *m;
    }

    if (const Line* degree_line = single_header("degree")) {
      if (*kind_ != GrammarKind::kSemiConditional || is_cd_) {
        fail(*degree_line, degree_line->tokens.front(), "'degree' is only allowed for kind sc");
      }
      if (degree_line->tokens.size() != 3) fail(*degree_line, degree_line->tokens.front(), "expected 'degree I J'");
      degree_.permitting = read_int(*degree_line, degree_line->tokens[1]);
      degree_.forbidding = read_int(*degree_line, degree_line->tokens[2]);
    }
  }

  static int read_int(const Line& line, const Token& tok) {
    if (tok.text.empty() || tok.text.size() > 6) fail(line, tok, "expected a small nonnegative integer");
    for (char c : tok.text) {
      if (!std::isdigit(static_cast<unsigned char>(c))) fail(line, tok, "expected a nonnegative integer");
    }
    return std::stoi(tok.text);
  }

  void read_terminals() {
    for (const auto& line : lines_) {
      if (line.tokens.front().text != "terminals") continue;
      if (saw_terminals_) fail(line, line.tokens.front(), "duplicate declaration 'terminals'");
      saw_terminals_ = true;
      for (std::size_t i = 1; i < line.tokens.size(); ++i) {
        const Token& t = line.tokens[i];
        check_atom_name(line, t);
        if (atoms_.count(t.text)) fail(line, t, "duplicate declaration of '" + t.text + "'");
        Symbol s = Symbol::terminal(t.text);
        atoms_.emplace(t.text, s);
        terminals_.insert(s);
      }
    }
  }

  void check_atom_name(const Line& line, const Token& t) {
    if (is_generated_name(t.text)) fail(line, t, "generated symbol '" + t.text + "' cannot be a terminal");
    if (!is_valid_atom_name(t.text)) fail(line, t, "invalid symbol name '" + t.text + "'");
    if (is_reserved(t.text)) fail(line, t, "'" + t.text + "' is a reserved word");
  }

  // symtab and tagset entries may refer to each other in any order; they are
  // resolved on demand and cycles are rejected.
  class EntryResolver : public Resolver {
   public:
    struct Raw {
      const Line* line;
      int column;
      std::string_view text;
    };
    std::map<std::string, Raw> symbols, tags;
    std::map<std::string, Symbol> symbol_done;
    std::map<std::string, std::shared_ptr<const Tag>> tag_done;
    std::set<std::string> active;
    std::set<std::string> terminal_names;

    Symbol symbol(const std::string& name) override {
      if (auto it = symbol_done.find(name); it != symbol_done.end()) return it->second;
      auto raw = symbols.find(name);
      if (raw == symbols.end()) throw std::invalid_argument("unknown symtab entry '" + name + "'");
      Symbol s = resolve(name, raw->second, [&](DescriptionParser& p) { return p.parse_all(); });
      symbol_done.emplace(name, s);
      return s;
    }

    std::shared_ptr<const Tag> tag(const std::string& name) override {
      if (auto it = tag_done.find(name); it != tag_done.end()) return it->second;
      auto raw = tags.find(name);
      if (raw == tags.end()) throw std::invalid_argument("unknown tagset '" + name + "'");
      auto t = resolve(name, raw->second, [&](DescriptionParser& p) { return p.parse_tag_body(); });
      tag_done.emplace(name, t);
      return t;
    }

   private:
    template <class F>
    auto resolve(const std::string& name, const Raw& raw, F&& parse) -> decltype(parse(std::declval<DescriptionParser&>())) {
      if (!active.insert(name).second) throw std::invalid_argument("cyclic reference through '" + name + "'");
      DescriptionParser p(raw.text, terminal_names, this);
      try {
        auto out = parse(p);
        active.erase(name);
        return out;
      } catch (const std::invalid_argument& e) {
        throw ParseError(raw.line->number, raw.column, std::string("bad symbol description: ") + e.what());
      }
    }
  };

  void read_symtab() {
    EntryResolver r;
    r.terminal_names = names_of(terminals_);
    for (const auto& line : lines_) {
      const std::string& head = line.tokens.front().text;
      if (head != "symtab" && head != "tagset") continue;
      bool sym = head == "symtab";
      const Token& key = line.tokens.size() > 1 ? line.tokens[1] : line.tokens.front();
      bool key_ok = sym ? is_generated_name(key.text)
                        : key.text.size() > 1 && key.text[0] == '&' &&
                              std::all_of(key.text.begin() + 1, key.text.end(),
                                          [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
      if (line.tokens.size() < 4 || !key_ok || line.tokens[2].text != "=") {
        fail(line, line.tokens.front(), sym ? "expected 'symtab #k = description'" : "expected 'tagset &k = entries'");
      }
      auto& table = sym ? r.symbols : r.tags;
      int column = line.tokens[3].column;
      std::string_view desc = std::string_view(line.text).substr(static_cast<std::size_t>(column - 1));
      if (!table.emplace(key.text, EntryResolver::Raw{&line, column, desc}).second) {
        fail(line, key, "duplicate declaration of '" + key.text + "'");
      }
    }
    for (const auto& entry : r.tags) r.tag(entry.first);
    for (const auto& entry : r.symbols) generated_.emplace(entry.first, r.symbol(entry.first));
  }

  void read_nonterminals() {
    for (const auto& line : lines_) {
      if (line.tokens.front().text != "nonterminals") continue;
      if (saw_nonterminals_) fail(line, line.tokens.front(), "duplicate declaration 'nonterminals'");
      saw_nonterminals_ = true;
      for (std::size_t i = 1; i < line.tokens.size(); ++i) {
        const Token& t = line.tokens[i];
        Symbol s = declared_nonterminal(line, t);
        if (!nonterminals_.insert(s).second) fail(line, t, "duplicate declaration of '" + t.text + "'");
      }
    }
    if (!saw_nonterminals_) throw ParseError(1, 1, "missing 'nonterminals' declaration");
  }

  Symbol declared_nonterminal(const Line& line, const Token& t) {
    if (is_generated_name(t.text)) {
      auto it = generated_.find(t.text);
      if (it == generated_.end()) fail(line, t, "unknown symbol '" + t.text + "' (no symtab entry)");
      if (it->second.is_terminal()) fail(line, t, "symtab entry '" + t.text + "' is a terminal");
      return it->second;
    }
    check_atom_name(line, t);
    if (atoms_.count(t.text)) fail(line, t, "duplicate declaration of '" + t.text + "'");
    Symbol s = Symbol::nonterminal(t.text);
    atoms_.emplace(t.text, s);
    return s;
  }

  Symbol resolve(const Line& line, const Token& t) const {
    if (is_generated_name(t.text)) {
      auto it = generated_.find(t.text);
      if (it != generated_.end() && nonterminals_.count(it->second)) return it->second;
      fail(line, t, "unknown symbol '" + t.text + "'");
    }
    auto it = atoms_.find(t.text);
    if (it == atoms_.end()) fail(line, t, "unknown symbol '" + t.text + "'");
    return it->second;
  }

  void read_start() {
    const Line* start_line = single_header("start");
    if (!start_line) throw ParseError(1, 1, "missing 'start' declaration");
    if (start_line->tokens.size() != 2) fail(*start_line, start_line->tokens.front(), "expected 'start SYMBOL'");
    Symbol s = resolve(*start_line, start_line->tokens[1]);
    if (!s.is_nonterminal()) fail(*start_line, start_line->tokens[1], "start symbol must be a nonterminal");
    start_ = s;
  }

  void read_productions() {
    static const std::set<std::string> kHeaders = {"kind",  "mode",  "degree",    "nonterminals",
                                                   "terminals", "start", "component", "symtab", "tagset"};
    if (!is_cd_) components_.push_back({});
    for (const auto& line : lines_) {
      const Token& head = line.tokens.front();
      if (head.text == "component") {
        if (!is_cd_) fail(line, head, "'component' is only allowed for kind cd");
        if (line.tokens.size() < 2 || line.tokens.size() > 3) fail(line, head, "expected 'component N [NAME]'");
        int number = read_int(line, line.tokens[1]);
        if (number != static_cast<int>(components_.size()) + 1) {
          fail(line, line.tokens[1], "components must be numbered 1..n in order");
        }
        Component c;
        c.name = line.tokens.size() == 3 ? line.tokens[2].text : "P" + std::to_string(number);
        components_.push_back(std::move(c));
        continue;
      }
      if (kHeaders.count(head.text)) continue;
      if (line.tokens.size() < 2 || line.tokens[1].text != "->") {
        fail(line, head, "expected a declaration or a production 'A -> ...'");
      }
      if (components_.empty()) fail(line, head, "production before the first 'component'");
      components_.back().productions.push_back(read_production(line));
    }
    if (is_cd_ && components_.empty()) throw ParseError(1, 1, "cd system declares no components");
  }

  Production read_production(const Line& line) {
    const auto& toks = line.tokens;
    Symbol lhs = resolve(line, toks[0]);
    if (!lhs.is_nonterminal()) fail(line, toks[0], "left-hand side must be a nonterminal");
    std::size_t i = 2;
    std::vector<Symbol> rhs;
    while (i < toks.size() && toks[i].text != "per" && toks[i].text != "for") {
      if (toks[i].text == "(" || toks[i].text == ")") fail(line, toks[i], "unexpected parenthesis in rhs");
      rhs.push_back(resolve(line, toks[i]));
      ++i;
    }
    if (rhs.empty()) fail(line, toks[1], "empty rhs");
    std::optional<std::vector<Condition>> per, forb;
    while (i < toks.size()) {
      const Token& section = toks[i];
      auto& target = section.text == "per" ? per : forb;
      if (target) fail(line, section, "duplicate '" + section.text + "' section");
      target.emplace();
      ++i;
      while (i < toks.size() && toks[i].text != "per" && toks[i].text != "for") {
        if (toks[i].text == "(") {
          Condition cond;
          ++i;
          while (i < toks.size() && toks[i].text != ")") {
            if (toks[i].text == "(") fail(line, toks[i], "nested parenthesis");
            cond.push_back(resolve(line, toks[i]));
            ++i;
          }
          if (i == toks.size()) fail(line, section, "unterminated condition string");
          if (cond.empty()) fail(line, toks[i], "empty condition");
          ++i;
          target->push_back(std::move(cond));
        } else if (toks[i].text == ")") {
          fail(line, toks[i], "unbalanced ')'");
        } else {
          target->push_back({resolve(line, toks[i])});
          ++i;
        }
      }
      if (target->empty()) fail(line, section, "'" + section.text + "' needs at least one condition");
    }
    Production p{0, lhs, std::move(rhs), make_conditions(per.value_or(std::vector<Condition>{})),
                 make_conditions(forb.value_or(std::vector<Condition>{}))};
    check_shape(line, p);
    return p;
  }

  void check_shape(const Line& line, const Production& p) const {
    const int col = line.tokens.front().column;
    if (*kind_ == GrammarKind::kSemiConditional && !is_cd_) {
      if (p.per.size() > 1 || p.forb.size() > 1) {
        fail(line, col, "condition shape: semi-conditional productions take at most one permitting and one forbidding string");
      }
      for (const auto& c : p.per) {
        if (static_cast<int>(c.size()) > degree_.permitting) {
          fail(line, col, "condition shape: permitting string longer than degree " + std::to_string(degree_.permitting));
        }
      }
      for (const auto& c : p.forb) {
        if (static_cast<int>(c.size()) > degree_.forbidding) {
          fail(line, col, "condition shape: forbidding string longer than degree " + std::to_string(degree_.forbidding));
        }
      }
      return;
    }
    for (const auto* set : {&p.per, &p.forb}) {
      for (const auto& c : *set) {
        if (c.size() != 1 || !c.front().is_nonterminal()) {
          fail(line, col, "condition shape: random context conditions are single nonterminals");
        }
      }
    }
    if (*kind_ == GrammarKind::kPermitting && !p.forb.empty()) {
      fail(line, col, "condition shape: permitting grammars have no forbidding conditions");
    }
    if (*kind_ == GrammarKind::kForbidding && !p.per.empty()) {
      fail(line, col, "condition shape: forbidding grammars have no permitting conditions");
    }
  }

  std::vector<Line> lines_;
  bool is_cd_ = false;
  std::optional<GrammarKind> kind_;
  std::optional<DerivationMode> mode_;
  Degree degree_;
  bool saw_terminals_ = false;
  bool saw_nonterminals_ = false;
  std::map<std::string, Symbol> atoms_;
  std::map<std::string, Symbol> generated_;
  SymbolSet nonterminals_;
  SymbolSet terminals_;
  std::optional<Symbol> start_;
  std::vector<Component> components_;
};

// ---------------------------------------------------------------------------
// renderer

// Generated symbols print as `#k` in first-occurrence order. Their symtab
// descriptions are shallow: constructed children are `#j` references and
// tags are shared `&j` tagsets.
class Renderer {
 public:
  explicit Renderer(const SymbolSet& terminals) : terminal_names_(names_of(terminals)) {}

  std::string name(const Symbol& s) {
    if (s.is_atom()) return s.name();
    auto [it, inserted] = ids_.emplace(s, static_cast<int>(order_.size()));
    if (inserted) order_.push_back(s);
    return "#" + std::to_string(it->second);
  }

  void symbols(std::string& out, const SymbolSet& set) {
    for (const auto& s : set) {
      out += ' ';
      out += name(s);
    }
  }

  void production(std::string& out, const Production& p) {
    out += name(p.lhs);
    out += " ->";
    for (const auto& s : p.rhs) {
      out += ' ';
      out += name(s);
    }
    if (!p.per.empty()) {
      out += " per";
      conditions(out, p.per);
    }
    if (!p.forb.empty()) {
      out += " for";
      conditions(out, p.forb);
    }
    out += '\n';
  }

  void symtab(std::string& out) {
    std::string tag_lines;
    std::size_t k = 0;
    std::size_t t = 0;
    while (k < order_.size() || t < tags_.size()) {
      for (; k < order_.size(); ++k) {
        Symbol s = order_[k];
        out += "symtab #" + std::to_string(k) + " = " + describe(s) + "\n";
      }
      for (; t < tags_.size(); ++t) {
        auto tag = tags_[t];
        tag_lines += "tagset &" + std::to_string(t) + " = " + entries(*tag) + "\n";
      }
    }
    out += tag_lines;
  }

 private:
  struct TagHash {
    std::size_t operator()(const std::shared_ptr<const Tag>& t) const { return t->hash; }
  };
  struct TagEq {
    bool operator()(const std::shared_ptr<const Tag>& a, const std::shared_ptr<const Tag>& b) const {
      return a == b || (a->hash == b->hash && a->entries == b->entries);
    }
  };

  void conditions(std::string& out, const ConditionSet& set) {
    for (const auto& c : set) {
      if (c.size() == 1) {
        out += ' ';
        out += name(c.front());
      } else {
        out += " (";
        for (const auto& s : c) {
          out += ' ';
          out += name(s);
        }
        out += " )";
      }
    }
  }

  std::string ref(const Symbol& s) { return s.is_atom() ? atom(s) : name(s); }

  std::string atom(const Symbol& s) const {
    bool resolves_terminal = terminal_names_.count(s.name()) > 0;
    if (s.is_terminal() && !resolves_terminal) return "t:" + s.name();
    if (!s.is_terminal() && resolves_terminal) return "n:" + s.name();
    return s.name();
  }

  std::string entries(const Tag& tag) {
    std::string out;
    bool first = true;
    for (const auto& e : tag.entries) {
      if (!first) out += ",";
      first = false;
      if (const auto* sym = std::get_if<Symbol>(&e.item)) {
        out += "sym " + ref(*sym);
      } else {
        out += "lab " + std::to_string(std::get<int>(e.item));
      }
      if (e.primed) out += "'";
    }
    return out;
  }

  std::string describe(const Symbol& s) {
    switch (s.kind()) {
      case Symbol::Kind::kAtom:
        return atom(s);
      case Symbol::Kind::kPrimed:
        return "prime(" + ref(s.base()) + ")";
      case Symbol::Kind::kIndexed:
        return "idx(" + ref(s.base()) + "," + std::to_string(s.index()) + ")";
      case Symbol::Kind::kStaged:
        return "stage(" + ref(s.base()) + "," + std::to_string(s.index()) + "," + std::to_string(s.stage()) + ")";
      case Symbol::Kind::kPacked: {
        std::string out = "pack(";
        for (std::size_t i = 0; i < s.content().size(); ++i) {
          if (i) out += ' ';
          out += ref(s.content()[i]);
        }
        return out + ")";
      }
      case Symbol::Kind::kSetTagged: {
        if (s.tag().entries.empty()) return "tag(" + ref(s.base()) + ";)";
        auto [it, inserted] = tag_ids_.emplace(s.shared_tag(), static_cast<int>(tags_.size()));
        if (inserted) tags_.push_back(s.shared_tag());
        return "tag(" + ref(s.base()) + ";&" + std::to_string(it->second) + ")";
      }
    }
    return {};
  }

  std::set<std::string> terminal_names_;
  std::unordered_map<Symbol, int, SymbolHash> ids_;
  std::vector<Symbol> order_;
  std::unordered_map<std::shared_ptr<const Tag>, int, TagHash, TagEq> tag_ids_;
  std::vector<std::shared_ptr<const Tag>> tags_;
};

void render_alphabets(std::string& out, Renderer& r, const SymbolSet& nonterminals, const SymbolSet& terminals,
                      const Symbol& start) {
  out += "nonterminals";
  r.symbols(out, nonterminals);
  out += "\nterminals";
  r.symbols(out, terminals);
  out += "\nstart " + r.name(start) + "\n";
}

}  // namespace

Subject parse_grammar(std::string_view text) { return DocumentParser(text).parse(); }

Grammar parse_single_grammar(std::string_view text) {
  Subject s = parse_grammar(text);
  if (auto* g = std::get_if<Grammar>(&s)) return std::move(*g);
  throw ParseError(1, 1, "expected a grammar, found a cd system");
}

CDSystem parse_cd_system(std::string_view text) {
  Subject s = parse_grammar(text);
  if (auto* c = std::get_if<CDSystem>(&s)) return std::move(*c);
  throw ParseError(1, 1, "expected a cd system, found a grammar");
}

Symbol parse_symbol_description(std::string_view text, const SymbolSet& terminals) {
  auto names = names_of(terminals);
  return DescriptionParser(text, names).parse_all();
}

std::string render_grammar(const Grammar& g) {
  Renderer r(g.terminals);
  std::string out = "kind " + std::string(to_string(g.kind)) + "\n";
  out += "mode " + std::string(to_string(g.mode)) + "\n";
  if (g.kind == GrammarKind::kSemiConditional) {
    out += "degree " + std::to_string(g.degree.permitting) + " " + std::to_string(g.degree.forbidding) + "\n";
  }
  render_alphabets(out, r, g.nonterminals, g.terminals, g.start);
  auto productions = g.productions;
  std::stable_sort(productions.begin(), productions.end(),
                   [](const Production& a, const Production& b) { return a.label < b.label; });
  for (const auto& p : productions) r.production(out, p);
  r.symtab(out);
  return out;
}

std::string render_grammar(const CDSystem& s) {
  Renderer r(s.terminals);
  std::string out = "kind cd\nmode def1\n";
  render_alphabets(out, r, s.nonterminals, s.terminals, s.start);
  for (std::size_t k = 0; k < s.components.size(); ++k) {
    out += "component " + std::to_string(k + 1);
    const auto& name = s.components[k].name;
    if (!name.empty() && name != "P" + std::to_string(k + 1)) out += " " + name;
    out += "\n";
    auto productions = s.components[k].productions;
    std::stable_sort(productions.begin(), productions.end(),
                     [](const Production& a, const Production& b) { return a.label < b.label; });
    for (const auto& p : productions) r.production(out, p);
  }
  r.symtab(out);
  return out;
}

std::string render_grammar(const Subject& s) {
  return std::visit([](const auto& x) { return render_grammar(x); }, s);
}

std::string fnv1a_hex(std::string_view text) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string digest(const Subject& s) { return fnv1a_hex(render_grammar(s)); }
std::string digest(const Grammar& g) { return fnv1a_hex(render_grammar(g)); }
std::string digest(const CDSystem& s) { return fnv1a_hex(render_grammar(s)); }

}  // namespace regrew
