#include "mobmarket/network.hpp"

#include "mobmarket/errors.hpp"

#include <utility>

namespace mobmarket {

Network::Network(std::vector<VertexId> vertices, std::vector<Edge> edges)
    : vertices_(std::move(vertices)), edges_(std::move(edges)) {
  std::vector<ValidationIssue> issues;
  for (std::size_t k = 0; k < vertices_.size(); ++k) {
    if (!vertex_index_.emplace(vertices_[k], k).second) {
      issues.push_back({"network", vertices_[k], "duplicate vertex id"});
    }
  }
  for (std::size_t k = 0; k < edges_.size(); ++k) {
    const Edge& e = edges_[k];
    if (!edge_index_.emplace(e.id, k).second) {
      issues.push_back({"network", e.id, "duplicate edge id"});
    }
    if (!vertex_index_.contains(e.tail)) {
      issues.push_back({"network", e.id, "edge tail '" + e.tail + "' is not a vertex"});
    }
    if (!vertex_index_.contains(e.head)) {
      issues.push_back({"network", e.id, "edge head '" + e.head + "' is not a vertex"});
    }
  }
  if (!issues.empty()) throw ValidationError(std::move(issues));
}

const Edge* Network::find_edge(const EdgeId& id) const {
  auto it = edge_index_.find(id);
  return it == edge_index_.end() ? nullptr : &edges_[it->second];
}

std::vector<VertexId> route_vertex_sequence(const Network& net, const Route& route) {
  if (route.edges.empty()) throw ValidationError("route", "", "route has no edges");
  std::vector<VertexId> walk;
  walk.reserve(route.edges.size() + 1);
  for (std::size_t k = 0; k < route.edges.size(); ++k) {
    const Edge* e = net.find_edge(route.edges[k]);
    if (e == nullptr) {
      throw ValidationError("route", route.edges[k], "unknown edge id");
    }
    if (k == 0) {
      walk.push_back(e->tail);
    } else if (walk.back() != e->tail) {
      throw ValidationError("route", route.edges[k],
                            "chain break at position " + std::to_string(k + 1) + ": tail '" +
                                e->tail + "' does not follow '" + walk.back() + "'");
    }
    walk.push_back(e->head);
  }
  return walk;
}

void validate_od(const Network& net, const OdPair& od, const std::string& owner) {
  std::vector<ValidationIssue> issues;
  if (!net.has_vertex(od.origin)) issues.push_back({"od", owner, "unknown origin '" + od.origin + "'"});
  if (!net.has_vertex(od.destination)) {
    issues.push_back({"od", owner, "unknown destination '" + od.destination + "'"});
  }
  if (od.origin == od.destination) issues.push_back({"od", owner, "origin equals destination"});
  if (!issues.empty()) throw ValidationError(std::move(issues));
}

bool covers(const Network& net, const Route& route, const OdPair& od) {
  const auto walk = route_vertex_sequence(net, route);
  // The earliest pickup dominates: any destination after it is a valid drop-off.
  std::size_t k = 0;
  while (k < walk.size() && walk[k] != od.origin) ++k;
  for (++k; k < walk.size(); ++k) {
    if (walk[k] == od.destination) return true;
  }
  return false;
}

}  // namespace mobmarket
