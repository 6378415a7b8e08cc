// SPDX-License-Identifier: Apache-2.0

#include "mdsd/network.hpp"

#include <cmath>
#include <random>
#include <set>
#include <tuple>
#include <utility>

#include <json.hpp>

#include "mdsd/error.hpp"
#include "mdsd/log.hpp"
#include "mdsd/random.hpp"

namespace mdsd::network {

using nlohmann::json;

void Topology::validate() const {
  for (const auto& p : nodes) {
    if (!area.contains(p)) throw GeometryError("node outside deployment area");
  }
  std::set<std::tuple<double, double, double, double>> seen;
  for (const auto& link : links) {
    if (link.a == link.b) throw GeometryError("self link");
    if (link.length > max_link_length * (1.0 + 1e-12)) throw GeometryError("link exceeds L_max");
    auto [p, q] = std::pair(link.a, link.b);
    if (std::pair(q.x, q.y) < std::pair(p.x, p.y)) std::swap(p, q);
    if (!seen.emplace(p.x, p.y, q.x, q.y).second) throw GeometryError("duplicate link");
  }
}

std::vector<Point2> deploy_nodes(std::size_t count, const Extent& area, std::uint64_t seed) {
  if (count < 2) throw DomainError("node count must be >= 2");
  if (!(area.width() > 0.0) || !(area.height() > 0.0)) throw DomainError("area must be positive");
  Rng rng(derive_seed(seed, {0x6e6f646573ULL}));
  std::uniform_real_distribution<double> ux(area.xmin, area.xmax);
  std::uniform_real_distribution<double> uy(area.ymin, area.ymax);
  std::vector<Point2> nodes;
  nodes.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double x = ux(rng);
    const double y = uy(rng);
    nodes.push_back({x, y});
  }
  return nodes;
}

std::vector<channel::Link> build_links(const std::vector<Point2>& nodes, double max_length,
                                       double frequency) {
  if (!(max_length > 0.0)) throw DomainError("maximum link length must be > 0");
  std::vector<channel::Link> links;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (std::size_t j = i + 1; j < nodes.size(); ++j) {
      const double d = distance(nodes[i], nodes[j]);
      if (d > 0.0 && d <= max_length) {
        links.push_back({links.size(), nodes[i], nodes[j], d, frequency});
      }
    }
  }
  if (links.empty()) {
    log::warn("no node pair within " + std::to_string(max_length) + " km; network has no links");
  }
  return links;
}

double node_density_factor(std::size_t node_count, double max_link_length, double area) {
  if (!(area > 0.0)) throw DomainError("area must be > 0");
  return static_cast<double>(node_count) * max_link_length * max_link_length / area;
}

double node_density_factor(const Topology& topology) {
  return node_density_factor(topology.nodes.size(), topology.max_link_length,
                             topology.area.area());
}

double area_for_ndf(std::size_t node_count, double max_link_length, double ndf) {
  if (!(ndf > 0.0)) throw DomainError("NDF must be > 0");
  return static_cast<double>(node_count) * max_link_length * max_link_length / ndf;
}

Topology make_topology(std::size_t node_count, const Extent& area, double max_link_length,
                       double frequency, std::uint64_t seed) {
  Topology topo;
  topo.area = area;
  topo.max_link_length = max_link_length;
  topo.seed = seed;
  topo.nodes = deploy_nodes(node_count, area, seed);
  topo.links = build_links(topo.nodes, max_link_length, frequency);
  return topo;
}

std::string topology_to_json(const Topology& topology) {
  json j;
  j["area"] = {topology.area.xmin, topology.area.xmax, topology.area.ymin, topology.area.ymax};
  j["max_link_length_km"] = topology.max_link_length;
  j["seed"] = topology.seed;
  j["ndf"] = node_density_factor(topology);
  j["nodes"] = json::array();
  for (const auto& p : topology.nodes) j["nodes"].push_back({p.x, p.y});
  j["links"] = json::array();
  for (const auto& l : topology.links) {
    j["links"].push_back({{"id", l.id},
                          {"a", {l.a.x, l.a.y}},
                          {"b", {l.b.x, l.b.y}},
                          {"length_km", l.length},
                          {"frequency_hz", l.frequency}});
  }
  return j.dump(2);
}

Topology topology_from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    Topology topo;
    const auto& a = j.at("area");
    topo.area = {a.at(0).get<double>(), a.at(1).get<double>(), a.at(2).get<double>(),
                 a.at(3).get<double>()};
    topo.max_link_length = j.at("max_link_length_km").get<double>();
    topo.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& p : j.at("nodes")) topo.nodes.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
    for (const auto& l : j.at("links")) {
      channel::Link link;
      link.id = l.at("id").get<std::size_t>();
      link.a = {l.at("a").at(0).get<double>(), l.at("a").at(1).get<double>()};
      link.b = {l.at("b").at(0).get<double>(), l.at("b").at(1).get<double>()};
      link.length = l.at("length_km").get<double>();
      link.frequency = l.at("frequency_hz").get<double>();
      topo.links.push_back(link);
    }
    topo.validate();
    return topo;
  } catch (const json::exception& e) {
    throw IngestError(0, std::string("topology JSON: ") + e.what());
  }
}

}  // namespace mdsd::network
