#include <algorithm>
#include <stdexcept>
#include <tuple>

#include "json.hpp"

#include "symvalic/facts.hpp"

namespace symvalic::corpus {

namespace {

using nlohmann::json;

template <class T, class Key>
std::set<Key> keys(const std::vector<T>& v, Key (*key)(const T&)) {
  std::set<Key> out;
  for (const auto& x : v) out.insert(key(x));
  return out;
}

std::pair<std::string, int> argKey(const ArgFact& f) { return {f.signature, f.position}; }
std::string guardKey(const GuardFact& f) { return f.signature; }
std::string reentrancyKey(const ReentrancyFact& f) { return f.signature; }

/// Inserts or refreshes counts; an existing fact keeps the round it first appeared in.
template <class T, class Key>
void merge(std::vector<T>& into, const std::vector<T>& from, Key (*key)(const T&)) {
  for (const auto& f : from) {
    auto it = std::find_if(into.begin(), into.end(), [&](const T& x) { return key(x) == key(f); });
    if (it == into.end()) {
      into.push_back(f);
    } else {
      int round = it->round;
      *it = f;
      it->round = round;
    }
  }
  std::sort(into.begin(), into.end(), [&](const T& a, const T& b) { return key(a) < key(b); });
}

}  // namespace

bool DomainFacts::allowsReentrancy(const std::string& signature) const {
  return std::any_of(reentrancyAllowing.begin(), reentrancyAllowing.end(),
                     [&](const ReentrancyFact& f) { return f.signature == signature; });
}

const GuardFact* DomainFacts::guard(const std::string& signature) const {
  auto it = std::find_if(usuallyGuarded.begin(), usuallyGuarded.end(),
                         [&](const GuardFact& f) { return f.signature == signature; });
  return it == usuallyGuarded.end() ? nullptr : &*it;
}

bool DomainFacts::sameFacts(const DomainFacts& o) const {
  return keys(sensitiveArgs, argKey) == keys(o.sensitiveArgs, argKey) &&
         keys(usuallyGuarded, guardKey) == keys(o.usuallyGuarded, guardKey) &&
         keys(reentrancyAllowing, reentrancyKey) == keys(o.reentrancyAllowing, reentrancyKey) && monetary == o.monetary;
}

void DomainFacts::absorb(const DomainFacts& newer) {
  merge(sensitiveArgs, newer.sensitiveArgs, argKey);
  merge(usuallyGuarded, newer.usuallyGuarded, guardKey);
  merge(reentrancyAllowing, newer.reentrancyAllowing, reentrancyKey);
  monetary.insert(newer.monetary.begin(), newer.monetary.end());
}

std::string factsToJson(const DomainFacts& facts, const Thresholds& th, int round, bool converged) {
  json args = json::array();
  for (const auto& f : facts.sensitiveArgs)
    args.push_back({{"signature", f.signature},
                    {"position", f.position},
                    {"tainted", f.tainted},
                    {"untainted", f.untainted},
                    {"samples", f.samples()},
                    {"fraction", f.fraction},
                    {"round", f.round}});
  json guarded = json::array();
  for (const auto& f : facts.usuallyGuarded)
    guarded.push_back({{"signature", f.signature},
                       {"guarded", f.guarded},
                       {"unguarded", f.unguarded},
                       {"samples", f.samples()},
                       {"fraction", f.fraction},
                       {"round", f.round}});
  json reentrancy = json::array();
  for (const auto& f : facts.reentrancyAllowing)
    reentrancy.push_back({{"signature", f.signature}, {"votes", f.votes}, {"round", f.round}});
  json doc{{"schema", "symvalic-facts/1"},
           {"round", round},
           {"converged", converged},
           {"thresholds",
            {{"minSamples", th.minSamples},
             {"untaintedFraction", th.untaintedFraction},
             {"guardedFraction", th.guardedFraction}}},
           {"sensitiveArgs", std::move(args)},
           {"usuallyGuarded", std::move(guarded)},
           {"reentrancyAllowing", std::move(reentrancy)},
           {"monetary", facts.monetary}};
  return doc.dump(2) + "\n";
}

DomainFacts factsFromJson(std::string_view text) {
  try {
    json doc = json::parse(text);
    if (doc.value("schema", "") != "symvalic-facts/1") throw std::runtime_error("not a symvalic-facts/1 document");
    DomainFacts facts;
    for (const auto& f : doc.at("sensitiveArgs"))
      facts.sensitiveArgs.push_back({f.at("signature").get<std::string>(), f.at("position").get<int>(),
                                     f.at("tainted").get<std::size_t>(), f.at("untainted").get<std::size_t>(),
                                     f.at("fraction").get<double>(), f.at("round").get<int>()});
    for (const auto& f : doc.at("usuallyGuarded"))
      facts.usuallyGuarded.push_back({f.at("signature").get<std::string>(), f.at("guarded").get<std::size_t>(),
                                      f.at("unguarded").get<std::size_t>(), f.at("fraction").get<double>(),
                                      f.at("round").get<int>()});
    for (const auto& f : doc.at("reentrancyAllowing"))
      facts.reentrancyAllowing.push_back(
          {f.at("signature").get<std::string>(), f.at("votes").get<std::size_t>(), f.at("round").get<int>()});
    for (const auto& m : doc.value("monetary", json::array())) facts.monetary.insert(m.get<std::string>());
    return facts;
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("malformed facts file: ") + e.what());
  }
}

}  // namespace symvalic::corpus
