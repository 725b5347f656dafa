#include <sstream>

#include "json.hpp"

#include "symvalic/analysis.hpp"

namespace symvalic::flow {

namespace {

using nlohmann::json;

json side(const deps::Mappings& m) {
  json out = json::object();
  for (const auto& [k, v] : m) out[k.name] = v.str();
  return out;
}

void putDeps(json& j, const DependencyMap& d) {
  j["localDeps"] = side(d.local);
  j["txDeps"] = side(d.transaction);
}

json valueFacts(const std::vector<ValueFact>& facts) {
  json out = json::array();
  for (const auto& f : facts) {
    json j{{"value", f.value.str()}};
    putDeps(j, f.deps);
    out.push_back(std::move(j));
  }
  return out;
}

}  // namespace

std::string toJson(const AnalysisResult& r) {
  json doc;
  doc["schema"] = "symvalic-result/1";
  doc["contract"] = r.contract ? r.contract->name : "";
  doc["truncated"] = r.truncated;
  doc["truncationReason"] = r.truncationReason;
  doc["rounds"] = r.roundsRun;

  json inferences = json::array();
  for (const auto& i : r.inferences) {
    json j{{"function", i.function}, {"var", i.var}, {"value", i.value.str()}};
    putDeps(j, i.deps);
    inferences.push_back(std::move(j));
  }
  doc["inferences"] = std::move(inferences);

  json reach = json::array();
  for (const auto& f : r.reachability) {
    json j{{"function", f.function}, {"stmt", f.stmt}};
    putDeps(j, f.deps);
    reach.push_back(std::move(j));
  }
  doc["reachability"] = std::move(reach);

  json calls = json::array();
  for (const auto& c : r.calls) {
    json j{{"function", c.function}, {"stmt", c.stmt}, {"signature", c.signature}};
    j["target"] = valueFacts(c.target);
    json args = json::array();
    for (const auto& a : c.args) args.push_back(valueFacts(a));
    j["args"] = std::move(args);
    calls.push_back(std::move(j));
  }
  doc["calls"] = std::move(calls);

  json stores = json::array();
  for (const auto& s : r.stores) {
    json j{{"function", s.function}, {"stmt", s.stmt}, {"address", s.address.str()}, {"value", s.value.str()}};
    putDeps(j, s.deps);
    stores.push_back(std::move(j));
  }
  doc["stores"] = std::move(stores);

  json storage = json::array();
  for (const auto& c : r.storage)
    storage.push_back({{"address", c.address.str()}, {"value", c.value.str()}, {"depthBudget", c.depthBudget}});
  doc["storage"] = std::move(storage);
  return doc.dump(2) + "\n";
}

std::string toText(const AnalysisResult& r) {
  std::ostringstream os;
  os << "contract " << (r.contract ? r.contract->name : "") << " (rounds " << r.roundsRun << ")";
  if (r.truncated) os << " TRUNCATED: " << r.truncationReason;
  os << '\n';
  for (const auto& i : r.inferences) os << i.function << ' ' << i.var << " -> " << i.value.str() << ' ' << i.deps.str() << '\n';
  for (const auto& f : r.reachability) os << f.function << " stmt " << f.stmt << " reachable " << f.deps.str() << '\n';
  for (const auto& c : r.calls) {
    os << c.function << " stmt " << c.stmt << " calls " << c.signature << '\n';
    for (const auto& t : c.target) os << "  target " << t.value.str() << ' ' << t.deps.str() << '\n';
    for (std::size_t k = 0; k < c.args.size(); ++k)
      for (const auto& a : c.args[k]) os << "  arg " << k << ' ' << a.value.str() << ' ' << a.deps.str() << '\n';
  }
  for (const auto& s : r.stores)
    os << s.function << " stmt " << s.stmt << " stores " << s.value.str() << " at " << s.address.str() << ' '
       << s.deps.str() << '\n';
  for (const auto& c : r.storage) os << "storage " << c.address.str() << " = " << c.value.str() << '\n';
  return os.str();
}

}  // namespace symvalic::flow
