#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "regrew/symbol.hpp"

namespace regrew {

/// A sentential form or terminal word.
using Word = std::vector<Symbol>;

/// A permitting or forbidding condition: a nonempty string of symbols.
/// Random context conditions and degree-(1,1) conditions have length 1.
using Condition = std::vector<Symbol>;

/// Sorted, duplicate-free list of conditions. Build through make_conditions().
using ConditionSet = std::vector<Condition>;

using SymbolSet = std::set<Symbol>;

ConditionSet make_conditions(std::vector<Condition> conditions);
/// One length-1 condition per symbol.
ConditionSet singleton_conditions(const std::vector<Symbol>& symbols);
ConditionSet singleton_conditions(const SymbolSet& symbols);

enum class GrammarKind : std::uint8_t { kRandomContext, kSemiConditional, kPermitting, kForbidding };
enum class DerivationMode : std::uint8_t { kDef1, kDef2 };

struct Degree {
  int permitting = 1;
  int forbidding = 1;
  friend bool operator==(const Degree&, const Degree&) = default;
};

struct Production {
  int label = 0;
  Symbol lhs;
  std::vector<Symbol> rhs;
  ConditionSet per;
  ConditionSet forb;

  friend bool operator==(const Production&, const Production&) = default;
};

struct Grammar {
  GrammarKind kind = GrammarKind::kRandomContext;
  DerivationMode mode = DerivationMode::kDef1;
  Degree degree;  // only meaningful for semi-conditional grammars
  SymbolSet nonterminals;
  SymbolSet terminals;
  Symbol start;
  std::vector<Production> productions;

  friend bool operator==(const Grammar&, const Grammar&) = default;
};

struct Component {
  std::string name;
  std::vector<Production> productions;

  friend bool operator==(const Component&, const Component&) = default;
};

/// Cooperating distributed grammar system working in t-mode. Components use
/// the random context relation without the rewritten symbol (def1).
struct CDSystem {
  SymbolSet nonterminals;
  SymbolSet terminals;
  Symbol start;
  std::vector<Component> components;

  friend bool operator==(const CDSystem&, const CDSystem&) = default;
};

using Subject = std::variant<Grammar, CDSystem>;

/// A transform or engine precondition does not hold for its input.
class PreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A construction produced output that fails its own postcondition.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

DerivationMode default_mode(GrammarKind kind);
std::string_view to_string(GrammarKind kind);
std::string_view to_string(DerivationMode mode);
std::optional<GrammarKind> parse_kind(std::string_view text);
std::optional<DerivationMode> parse_mode(std::string_view text);

/// Random context, permitting and forbidding grammars.
inline bool is_rc_family(GrammarKind kind) { return kind != GrammarKind::kSemiConditional; }

/// Renumbers labels 1..n in sequence order.
void relabel(std::vector<Production>& productions, int first = 1);
void relabel(CDSystem& system);

/// All symbols occurring in lhs, rhs or conditions.
SymbolSet symbols_used(const std::vector<Production>& productions);

std::size_t production_count(const CDSystem& system);

/// `A -> B C per D for E`, using Symbol::describe() for every symbol.
std::string describe(const Production& p);
std::string describe(const Word& w);

}  // namespace regrew
