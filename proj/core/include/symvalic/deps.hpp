#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <variant>

#include "symvalic/expr.hpp"

namespace symvalic::deps {

using sym::Expr;

/// What a dependency entry is keyed on. The declaration order is also the
/// printing order: function arguments, then storage loads, then the sender,
/// then entry-point arguments carried through internal calls.
enum class KeyKind : std::uint8_t { Argument, StorageLoad, Sender, EntryArgument };

struct DepKey {
  KeyKind kind = KeyKind::Argument;
  int position = 0;
  std::string name;

  static DepKey argument(int position, std::string name) { return {KeyKind::Argument, position, std::move(name)}; }
  static DepKey storageLoad(int ordinal, std::string name) {
    return {KeyKind::StorageLoad, ordinal, std::move(name)};
  }
  static DepKey sender() { return {KeyKind::Sender, 0, "sender"}; }
  /// `function` and `param` name an argument of the transaction's entry point.
  static DepKey entryArgument(int position, const std::string& function, const std::string& param) {
    return {KeyKind::EntryArgument, position, function + "." + param};
  }

  friend auto operator<=>(const DepKey&, const DepKey&) = default;
  friend bool operator==(const DepKey&, const DepKey&) = default;
};

using Mappings = std::map<DepKey, Expr>;

/// Paired local / transaction mappings under which an inference holds.
struct DependencyMap {
  Mappings local;
  Mappings transaction;

  static DependencyMap withSender(const Expr& sender);

  bool empty() const { return local.empty() && transaction.empty(); }
  const Expr* sender() const;

  /// `<{to -> 0x42, amount -> 200} ; {sender -> <<owner>>}>`
  std::string str() const;

  friend std::strong_ordering operator<=>(const DependencyMap& a, const DependencyMap& b);
  friend bool operator==(const DependencyMap& a, const DependencyMap& b);
};

/// The two sides disagree on `key` (in the transaction half if `transaction`).
struct Conflict {
  DepKey key;
  bool transaction = false;
  Expr left;
  Expr right;
};

using Combination = std::variant<DependencyMap, Conflict>;

/// Compatibility-checked union. The first clashing key in key order is reported.
Combination combine(const DependencyMap& a, const DependencyMap& b);

/// Fast path of combine for callers that only care about success.
bool compatible(const DependencyMap& a, const DependencyMap& b);

struct DependencyBudget {
  int localArguments = 3;
  int storageLoads = 1;
  int txArguments = 2;
};

/// Keeps the lowest-position arguments and earliest storage loads allowed by
/// the budget. The sender is always kept.
DependencyMap restrict(const DependencyMap& d, const DependencyBudget& budget);

bool withinBudget(const DependencyMap& d, const DependencyBudget& budget);

}  // namespace symvalic::deps
