#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace regrew {

enum class SymbolClass : std::uint8_t { kTerminal, kNonterminal };

namespace detail {
struct SymbolNode;
}  // namespace detail

struct Tag;

/// A grammar symbol as a structural term.
///
/// User atoms carry a name and a class. Every other form is built by a
/// transform from existing symbols (priming, indexing, staging, packing a
/// string into one symbol, tagging with a set) and is always a nonterminal.
/// Equality, ordering and hashing are structural, so two independently
/// constructed terms with the same tree are the same symbol. Atoms order by
/// name; constructed terms order by a portable structural hash, then shape.
class Symbol {
 public:
  enum class Kind : std::uint8_t { kAtom, kPrimed, kIndexed, kStaged, kPacked, kSetTagged };

  /// Throws std::invalid_argument unless `name` matches [A-Za-z][A-Za-z0-9_]*.
  static Symbol atom(std::string_view name, SymbolClass cls);
  static Symbol terminal(std::string_view name) { return atom(name, SymbolClass::kTerminal); }
  static Symbol nonterminal(std::string_view name) { return atom(name, SymbolClass::kNonterminal); }

  static Symbol primed(const Symbol& base);
  static Symbol indexed(const Symbol& base, int index);
  static Symbol staged(const Symbol& base, int index, int stage);
  static Symbol packed(std::vector<Symbol> content);
  static Symbol set_tagged(const Symbol& base, std::shared_ptr<const Tag> tag);

  Kind kind() const;
  bool is_atom() const { return kind() == Kind::kAtom; }
  bool is_terminal() const;
  bool is_nonterminal() const { return !is_terminal(); }

  // Accessors are only meaningful for the matching kind.
  const std::string& name() const;
  const Symbol& base() const;
  int index() const;
  int stage() const;
  const std::vector<Symbol>& content() const;
  const Tag& tag() const;
  const std::shared_ptr<const Tag>& shared_tag() const;

  std::size_t hash() const;

  /// Human-readable term, e.g. `idx(prime(A),2)`. Atoms print bare.
  std::string describe() const;

  friend bool operator==(const Symbol& a, const Symbol& b);
  friend std::strong_ordering operator<=>(const Symbol& a, const Symbol& b);

 private:
  explicit Symbol(std::shared_ptr<const detail::SymbolNode> node) : node_(std::move(node)) {}
  std::shared_ptr<const detail::SymbolNode> node_;
};

/// An item of a set tag: a symbol record or a production label.
struct TagEntry {
  std::variant<Symbol, int> item;
  bool primed = false;

  friend bool operator==(const TagEntry&, const TagEntry&) = default;
  friend std::strong_ordering operator<=>(const TagEntry& a, const TagEntry& b);
};

/// Immutable, normalized (sorted, one entry per item) tag set.
struct Tag {
  std::vector<TagEntry> entries;
  std::size_t hash = 0;

  /// Sorts and validates; throws std::invalid_argument if an item repeats.
  static std::shared_ptr<const Tag> make(std::vector<TagEntry> entries);
};

struct SymbolHash {
  std::size_t operator()(const Symbol& s) const noexcept { return s.hash(); }
};

bool is_valid_atom_name(std::string_view name);

}  // namespace regrew
