#pragma once

#include <cstddef>
#include <string>
#include <unordered_map>
#include <vector>

namespace mobmarket {

using VertexId = std::string;
using EdgeId = std::string;

struct Edge {
  EdgeId id;
  VertexId tail;
  VertexId head;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Directed multigraph. Parallel edges and self-loops are allowed; ids are
/// unique per kind. Immutable once constructed.
class Network {
 public:
  Network() = default;

  /// Throws ValidationError (section "network") listing every duplicate id
  /// and every edge whose endpoint is not a vertex.
  Network(std::vector<VertexId> vertices, std::vector<Edge> edges);

  const std::vector<VertexId>& vertices() const noexcept { return vertices_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  bool has_vertex(const VertexId& id) const { return vertex_index_.contains(id); }
  const Edge* find_edge(const EdgeId& id) const;

  friend bool operator==(const Network& a, const Network& b) {
    return a.vertices_ == b.vertices_ && a.edges_ == b.edges_;
  }

 private:
  std::vector<VertexId> vertices_;
  std::vector<Edge> edges_;
  std::unordered_map<VertexId, std::size_t> vertex_index_;
  std::unordered_map<EdgeId, std::size_t> edge_index_;
};

/// A vehicle's itinerary as a chain of edge ids.
struct Route {
  std::vector<EdgeId> edges;

  friend bool operator==(const Route&, const Route&) = default;
};

struct OdPair {
  VertexId origin;
  VertexId destination;

  friend bool operator==(const OdPair&, const OdPair&) = default;
};

/// Vertices visited by `route`: tail of the first edge, then each head.
/// Throws ValidationError naming an unknown edge id, or the 1-based position
/// of the first edge whose tail is not the previous edge's head.
std::vector<VertexId> route_vertex_sequence(const Network& net, const Route& route);

/// Throws ValidationError if either endpoint is unknown or origin == destination.
void validate_od(const Network& net, const OdPair& od, const std::string& owner = "");

/// True iff the route visits od.origin at some position strictly before a
/// visit of od.destination. Repeated visits are all considered.
bool covers(const Network& net, const Route& route, const OdPair& od);

}  // namespace mobmarket
