// SPDX-License-Identifier: Apache-2.0
//
// Surface node deployment, all-pairs link construction under a maximum link
// length, and the Node Density Factor N * L_max^2 / A.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mdsd/channel.hpp"
#include "mdsd/grid.hpp"

namespace mdsd::network {

struct Topology {
  Extent area;
  std::vector<Point2> nodes;
  std::vector<channel::Link> links;
  double max_link_length = 15.0;  // km
  std::uint64_t seed = 0;

  /// Throws GeometryError when an invariant (nodes in area, links within
  /// L_max, no self or duplicate links) does not hold.
  void validate() const;
};

/// Uniform i.i.d. positions over the area.
std::vector<Point2> deploy_nodes(std::size_t count, const Extent& area, std::uint64_t seed);

/// Every unordered pair at distance <= max_length becomes a link, ordered
/// by (i, j) with i < j. An empty result is reported through log::warn.
std::vector<channel::Link> build_links(const std::vector<Point2>& nodes, double max_length,
                                       double frequency);

double node_density_factor(std::size_t node_count, double max_link_length, double area);
double node_density_factor(const Topology& topology);

/// Area (km^2) giving the requested NDF for a node count and link length.
double area_for_ndf(std::size_t node_count, double max_link_length, double ndf);

Topology make_topology(std::size_t node_count, const Extent& area, double max_link_length,
                       double frequency, std::uint64_t seed);

std::string topology_to_json(const Topology& topology);
Topology topology_from_json(const std::string& text);

}  // namespace mdsd::network
