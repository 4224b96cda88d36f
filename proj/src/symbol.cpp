#include "regrew/symbol.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace regrew {

namespace detail {

struct SymbolNode {
  Symbol::Kind kind;
  SymbolClass cls = SymbolClass::kNonterminal;
  std::string name;
  std::vector<Symbol> children;  // base for wrappers, content for packed
  int index = 0;
  int stage = 0;
  std::shared_ptr<const Tag> tag;
  std::size_t hash = 0;
};

}  // namespace detail

namespace {

constexpr std::size_t kHashSeed = 0x9e3779b97f4a7c15ULL;

std::size_t mix(std::size_t seed, std::size_t value) {
  return seed ^ (value + kHashSeed + (seed << 6) + (seed >> 2));
}

std::size_t hash_string(std::string_view s) {
  // FNV-1a keeps hashes identical across standard libraries.
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return static_cast<std::size_t>(h);
}

std::shared_ptr<detail::SymbolNode> make_node(Symbol::Kind kind) {
  auto node = std::make_shared<detail::SymbolNode>();
  node->kind = kind;
  return node;
}

std::size_t finish_hash(const detail::SymbolNode& node) {
  std::size_t h = mix(static_cast<std::size_t>(node.kind) + 1, static_cast<std::size_t>(node.cls));
  h = mix(h, hash_string(node.name));
  for (const auto& child : node.children) h = mix(h, child.hash());
  h = mix(h, static_cast<std::size_t>(node.index));
  h = mix(h, static_cast<std::size_t>(node.stage));
  if (node.tag) h = mix(h, node.tag->hash);
  return h;
}

std::strong_ordering compare_tags(const Tag& a, const Tag& b) {
  if (&a == &b) return std::strong_ordering::equal;
  if (auto c = a.entries.size() <=> b.entries.size(); c != 0) return c;
  if (auto c = a.hash <=> b.hash; c != 0) return c;
  return std::lexicographical_compare_three_way(a.entries.begin(), a.entries.end(),
                                                b.entries.begin(), b.entries.end());
}

}  // namespace

bool is_valid_atom_name(std::string_view name) {
  if (name.empty()) return false;
  auto alpha = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); };
  auto digit = [](char c) { return c >= '0' && c <= '9'; };
  if (!alpha(name.front())) return false;
  return std::all_of(name.begin() + 1, name.end(),
                     [&](char c) { return alpha(c) || digit(c) || c == '_'; });
}

Symbol Symbol::atom(std::string_view name, SymbolClass cls) {
  if (!is_valid_atom_name(name)) {
    throw std::invalid_argument("invalid atom name '" + std::string(name) + "'");
  }
  auto node = make_node(Kind::kAtom);
  node->name = std::string(name);
  node->cls = cls;
  node->hash = finish_hash(*node);
  return Symbol(std::move(node));
}

Symbol Symbol::primed(const Symbol& base) {
  auto node = make_node(Kind::kPrimed);
  node->children.push_back(base);
  node->hash = finish_hash(*node);
  return Symbol(std::move(node));
}

Symbol Symbol::indexed(const Symbol& base, int index) {
  if (index < 1) throw std::invalid_argument("symbol index must be positive");
  auto node = make_node(Kind::kIndexed);
  node->children.push_back(base);
  node->index = index;
  node->hash = finish_hash(*node);
  return Symbol(std::move(node));
}

Symbol Symbol::staged(const Symbol& base, int index, int stage) {
  if (index < 1 || stage < 1) throw std::invalid_argument("symbol index and stage must be positive");
  auto node = make_node(Kind::kStaged);
  node->children.push_back(base);
  node->index = index;
  node->stage = stage;
  node->hash = finish_hash(*node);
  return Symbol(std::move(node));
}

Symbol Symbol::packed(std::vector<Symbol> content) {
  if (content.empty()) throw std::invalid_argument("packed symbol needs nonempty content");
  auto node = make_node(Kind::kPacked);
  node->children = std::move(content);
  node->hash = finish_hash(*node);
  return Symbol(std::move(node));
}

Symbol Symbol::set_tagged(const Symbol& base, std::shared_ptr<const Tag> tag) {
  if (!tag) throw std::invalid_argument("set-tagged symbol needs a tag");
  auto node = make_node(Kind::kSetTagged);
  node->children.push_back(base);
  node->tag = std::move(tag);
  node->hash = finish_hash(*node);
  return Symbol(std::move(node));
}

Symbol::Kind Symbol::kind() const { return node_->kind; }

bool Symbol::is_terminal() const {
  return node_->kind == Kind::kAtom && node_->cls == SymbolClass::kTerminal;
}

const std::string& Symbol::name() const { return node_->name; }
const Symbol& Symbol::base() const { return node_->children.front(); }
int Symbol::index() const { return node_->index; }
int Symbol::stage() const { return node_->stage; }
const std::vector<Symbol>& Symbol::content() const { return node_->children; }
const Tag& Symbol::tag() const { return *node_->tag; }
const std::shared_ptr<const Tag>& Symbol::shared_tag() const { return node_->tag; }
std::size_t Symbol::hash() const { return node_->hash; }

std::string Symbol::describe() const {
  switch (kind()) {
    case Kind::kAtom:
      return name();
    case Kind::kPrimed:
      return "prime(" + base().describe() + ")";
    case Kind::kIndexed:
      return "idx(" + base().describe() + "," + std::to_string(index()) + ")";
    case Kind::kStaged:
      return "stage(" + base().describe() + "," + std::to_string(index()) + "," +
             std::to_string(stage()) + ")";
    case Kind::kPacked: {
      std::string out = "pack(";
      for (std::size_t i = 0; i < content().size(); ++i) {
        if (i) out += ' ';
        out += content()[i].describe();
      }
      return out + ")";
    }
    case Kind::kSetTagged: {
      std::string out = "tag(" + base().describe() + ";";
      bool first = true;
      for (const auto& e : tag().entries) {
        out += first ? "" : ",";
        first = false;
        if (const auto* s = std::get_if<Symbol>(&e.item)) {
          out += "sym " + s->describe();
        } else {
          out += "lab " + std::to_string(std::get<int>(e.item));
        }
        if (e.primed) out += "'";
      }
      return out + ")";
    }
  }
  return {};
}

bool operator==(const Symbol& a, const Symbol& b) {
  if (a.node_ == b.node_) return true;
  if (a.hash() != b.hash()) return false;
  return (a <=> b) == 0;
}

std::strong_ordering operator<=>(const Symbol& a, const Symbol& b) {
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  if (&x == &y) return std::strong_ordering::equal;
  if (auto c = x.kind <=> y.kind; c != 0) return c;
  // Constructed terms order by their structural hash first; the walk below
  // only breaks ties.
  if (x.kind != Symbol::Kind::kAtom) {
    if (auto c = x.hash <=> y.hash; c != 0) return c;
  }
  switch (x.kind) {
    case Symbol::Kind::kAtom:
      if (auto c = x.name <=> y.name; c != 0) return c;
      return x.cls <=> y.cls;
    case Symbol::Kind::kPrimed:
      return x.children.front() <=> y.children.front();
    case Symbol::Kind::kIndexed:
    case Symbol::Kind::kStaged:
      if (auto c = x.children.front() <=> y.children.front(); c != 0) return c;
      if (auto c = x.index <=> y.index; c != 0) return c;
      return x.stage <=> y.stage;
    case Symbol::Kind::kPacked:
      return std::lexicographical_compare_three_way(x.children.begin(), x.children.end(),
                                                    y.children.begin(), y.children.end());
    case Symbol::Kind::kSetTagged:
      if (auto c = x.children.front() <=> y.children.front(); c != 0) return c;
      return compare_tags(*x.tag, *y.tag);
  }
  return std::strong_ordering::equal;
}

std::strong_ordering operator<=>(const TagEntry& a, const TagEntry& b) {
  if (auto c = a.item.index() <=> b.item.index(); c != 0) return c;
  if (a.item.index() == 0) {
    if (auto c = std::get<Symbol>(a.item) <=> std::get<Symbol>(b.item); c != 0) return c;
  } else {
    if (auto c = std::get<int>(a.item) <=> std::get<int>(b.item); c != 0) return c;
  }
  return a.primed <=> b.primed;
}

std::shared_ptr<const Tag> Tag::make(std::vector<TagEntry> entries) {
  if (!std::is_sorted(entries.begin(), entries.end())) std::sort(entries.begin(), entries.end());
  for (std::size_t i = 1; i < entries.size(); ++i) {
    if (entries[i - 1].item == entries[i].item) {
      throw std::invalid_argument("tag item appears twice");
    }
  }
  auto tag = std::make_shared<Tag>();
  std::size_t h = mix(0x51ed27ULL, entries.size());
  for (const auto& e : entries) {
    std::size_t item_hash = e.item.index() == 0 ? std::get<Symbol>(e.item).hash()
                                                : mix(7, static_cast<std::size_t>(std::get<int>(e.item)));
    h = mix(h, mix(item_hash, e.primed ? 1 : 0));
  }
  tag->entries = std::move(entries);
  tag->hash = h;
  return tag;
}

}  // namespace regrew
