#include "tollbooth/serialization.hpp"

#include <fstream>

namespace tollbooth::io {

std::string rat_str(const Rat& r) { return r.str(); }

Rat rat_from_json(const json& j) {
  if (j.is_number_integer()) return Rat(j.get<long>());
  return Rat::parse(j.get<std::string>());
}

json instance_to_json(const Instance& inst) {
  const Graph& g = inst.graph();
  json jg;
  jg["kind"] = kind_name(g.kind());
  jg["vertices"] = g.vertex_count();
  json edges = json::array();
  for (auto [a, b] : g.edges()) edges.push_back({a, b});
  jg["edges"] = edges;
  if (g.kind() == GraphKind::Outerplanar) jg["circularOrder"] = g.circular_order();
  if (g.kind() == GraphKind::MultiPath)
    jg["multipath"] = {g.multipath_ab().first, g.multipath_ab().second};
  json buyers = json::array();
  for (const auto& b : inst.buyers()) {
    json jb;
    jb["path"] = b.demand.edge_ids;
    jb["value"] = rat_str(b.value);
    if (b.is_set_demand) jb["set"] = true;
    buyers.push_back(jb);
  }
  return json{{"graph", jg}, {"buyers", buyers}};
}

Instance instance_from_json(const json& j) {
  const json& jg = j.at("graph");
  GraphKind kind = kind_from_name(jg.at("kind").get<std::string>());
  std::vector<std::pair<int, int>> edges;
  for (const auto& e : jg.at("edges")) edges.push_back({e.at(0).get<int>(), e.at(1).get<int>()});
  std::vector<int> order;
  if (jg.contains("circularOrder")) order = jg.at("circularOrder").get<std::vector<int>>();
  std::pair<int, int> ab{0, 0};
  if (jg.contains("multipath"))
    ab = {jg.at("multipath").at(0).get<int>(), jg.at("multipath").at(1).get<int>()};
  Graph g(kind, jg.at("vertices").get<int>(), std::move(edges), std::move(order), ab);
  std::vector<Buyer> buyers;
  for (const auto& jb : j.at("buyers")) {
    Buyer b;
    b.demand.edge_ids = jb.at("path").get<std::vector<int>>();
    b.value = rat_from_json(jb.at("value"));
    b.is_set_demand = jb.value("set", false);
    buyers.push_back(std::move(b));
  }
  return Instance(std::move(g), std::move(buyers));
}

json prices_to_json(const PriceVector& p) {
  json arr = json::array();
  for (const auto& x : p.raw()) arr.push_back(x.str());
  return arr;
}

PriceVector prices_from_json(const json& j) {
  std::vector<ExtPrice> v;
  for (const auto& x : j) {
    std::string s = x.is_string() ? x.get<std::string>() : x.dump();
    if (s == "inf") v.push_back(ExtPrice::blocked());
    else v.push_back(ExtPrice(Rat::parse(s)));
  }
  return PriceVector(std::move(v));
}

void write_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << "\n";
}

json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  json j;
  in >> j;
  return j;
}

}  // namespace tollbooth::io
