#include "symvalic/deps.hpp"

#include "symvalic/reasoner.hpp"

namespace symvalic::deps {

namespace {

std::string render(const Mappings& m) {
  std::string out = "{";
  bool first = true;
  for (const auto& [k, v] : m) {
    if (!first) out += ", ";
    first = false;
    out += k.name + " -> " + v.str();
  }
  return out + "}";
}

std::strong_ordering compareMappings(const Mappings& a, const Mappings& b) {
  auto ia = a.begin();
  auto ib = b.begin();
  for (; ia != a.end() && ib != b.end(); ++ia, ++ib) {
    if (auto c = ia->first <=> ib->first; c != 0) return c;
    if (auto c = ia->second <=> ib->second; c != 0) return c;
  }
  return a.size() <=> b.size();
}

// Merges b into out; returns the first clashing key, if any.
const DepKey* mergeInto(Mappings& out, const Mappings& b, Expr* left, Expr* right) {
  for (const auto& [k, v] : b) {
    auto [it, inserted] = out.try_emplace(k, v);
    if (inserted || it->second == v) continue;
    if (sym::normalize(it->second) == sym::normalize(v)) continue;
    *left = it->second;
    *right = v;
    return &k;
  }
  return nullptr;
}

bool agree(const Mappings& a, const Mappings& b) {
  const Mappings& small = a.size() <= b.size() ? a : b;
  const Mappings& large = a.size() <= b.size() ? b : a;
  for (const auto& [k, v] : small) {
    auto it = large.find(k);
    if (it == large.end() || it->second == v) continue;
    if (sym::normalize(it->second) != sym::normalize(v)) return false;
  }
  return true;
}

}  // namespace

DependencyMap DependencyMap::withSender(const Expr& sender) {
  DependencyMap d;
  d.transaction.emplace(DepKey::sender(), sender);
  return d;
}

const Expr* DependencyMap::sender() const {
  auto it = transaction.find(DepKey::sender());
  return it == transaction.end() ? nullptr : &it->second;
}

std::string DependencyMap::str() const { return "<" + render(local) + " ; " + render(transaction) + ">"; }

std::strong_ordering operator<=>(const DependencyMap& a, const DependencyMap& b) {
  if (auto c = compareMappings(a.local, b.local); c != 0) return c;
  return compareMappings(a.transaction, b.transaction);
}

bool operator==(const DependencyMap& a, const DependencyMap& b) {
  return a.local == b.local && a.transaction == b.transaction;
}

Combination combine(const DependencyMap& a, const DependencyMap& b) {
  // Report the smallest clashing key so the result does not depend on argument order.
  std::optional<Conflict> best;
  auto check = [&](const Mappings& x, const Mappings& y, bool tx) {
    for (const auto& [k, v] : x) {
      auto it = y.find(k);
      if (it == y.end() || it->second == v || sym::normalize(it->second) == sym::normalize(v)) continue;
      if (!best || (best->transaction && !tx) || (best->transaction == tx && k < best->key))
        best = Conflict{k, tx, v, it->second};
      return;
    }
  };
  check(a.local, b.local, false);
  check(a.transaction, b.transaction, true);
  if (best) return *best;

  DependencyMap out = a;
  Expr l, r;
  mergeInto(out.local, b.local, &l, &r);
  mergeInto(out.transaction, b.transaction, &l, &r);
  return out;
}

bool compatible(const DependencyMap& a, const DependencyMap& b) {
  return agree(a.local, b.local) && agree(a.transaction, b.transaction);
}

DependencyMap restrict(const DependencyMap& d, const DependencyBudget& budget) {
  DependencyMap out;
  int args = 0;
  int loads = 0;
  for (const auto& [k, v] : d.local) {
    if (k.kind == KeyKind::Argument && args < budget.localArguments) {
      ++args;
      out.local.emplace(k, v);
    } else if (k.kind == KeyKind::StorageLoad && loads < budget.storageLoads) {
      ++loads;
      out.local.emplace(k, v);
    }
  }
  int txArgs = 0;
  for (const auto& [k, v] : d.transaction) {
    if (k.kind == KeyKind::Sender) {
      out.transaction.emplace(k, v);
    } else if (k.kind == KeyKind::EntryArgument && txArgs < budget.txArguments) {
      ++txArgs;
      out.transaction.emplace(k, v);
    }
  }
  return out;
}

bool withinBudget(const DependencyMap& d, const DependencyBudget& budget) { return restrict(d, budget) == d; }

}  // namespace symvalic::deps
