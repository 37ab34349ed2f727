#include "mobmarket/generator.hpp"

#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace mobmarket {
namespace {

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [lo, hi] by rejection.
  std::uint64_t uniform(std::uint64_t lo, std::uint64_t hi) {
    const std::uint64_t span = hi - lo + 1;
    if (span == 0) return engine_();
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % span;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return lo + x % span;
  }

  std::size_t index(std::size_t size) { return static_cast<std::size_t>(uniform(0, size - 1)); }
  bool chance(int numerator, int denominator) { return uniform(1, static_cast<std::uint64_t>(denominator)) <= static_cast<std::uint64_t>(numerator); }

  // k / lattice for k uniform in [lo, hi].
  Money lattice_value(std::uint64_t lo, std::uint64_t hi, int lattice) {
    Money out(static_cast<long>(uniform(lo, hi)), lattice);
    out.canonicalize();
    return out;
  }

 private:
  std::mt19937_64 engine_;
};

// Number of whole lattice steps in x.
std::uint64_t floor_steps(const Money& x, int lattice) {
  Money scaled = x * lattice;
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
  return q.get_ui();
}

}  // namespace

MarketInstance generate_instance(const GeneratorOptions& o) {
  if (o.max_capacity < 1 || o.lattice < 1 || o.min_vertices < 2 || o.max_vertices < o.min_vertices ||
      o.max_route_length < 1) {
    throw std::invalid_argument("invalid generator options");
  }
  Sampler rng(o.seed);
  const int L = o.lattice;

  const std::size_t vertex_count = static_cast<std::size_t>(rng.uniform(o.min_vertices, o.max_vertices));
  std::vector<VertexId> vertices;
  for (std::size_t k = 0; k < vertex_count; ++k) vertices.push_back("N" + std::to_string(k + 1));
  std::vector<Edge> edges;
  for (std::size_t k = 0; k < vertex_count; ++k) {
    edges.push_back({"e" + std::to_string(edges.size() + 1), vertices[k], vertices[(k + 1) % vertex_count]});
  }
  const std::size_t extra = static_cast<std::size_t>(rng.uniform(0, o.max_extra_edges));
  for (std::size_t k = 0; k < extra; ++k) {
    std::size_t tail = rng.index(vertex_count);
    std::size_t head = (tail + 1 + rng.index(vertex_count - 1)) % vertex_count;
    edges.push_back({"e" + std::to_string(edges.size() + 1), vertices[tail], vertices[head]});
  }
  std::vector<std::vector<std::size_t>> outgoing(vertex_count);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    outgoing[std::stoul(edges[e].tail.substr(1)) - 1].push_back(e);
  }
  Network network(vertices, edges);

  std::vector<Vehicle> vehicles;
  std::vector<std::vector<VertexId>> stops;
  std::vector<std::size_t> clone_of;
  for (std::size_t j = 0; j < o.vehicles; ++j) {
    Vehicle v;
    v.id = "V" + std::to_string(j + 1);
    if (o.degenerate && j > 0 && rng.chance(1, 2)) {
      std::size_t src = rng.index(j);
      v.route = vehicles[src].route;
      v.capacity = vehicles[src].capacity;
      v.operating_cost = vehicles[src].operating_cost;
      clone_of.push_back(clone_of[src]);
    } else {
      std::size_t at = rng.index(vertex_count);
      std::size_t length = static_cast<std::size_t>(rng.uniform(1, o.max_route_length));
      for (std::size_t step = 0; step < length; ++step) {
        std::size_t e = outgoing[at][rng.index(outgoing[at].size())];
        v.route.edges.push_back(edges[e].id);
        at = std::stoul(edges[e].head.substr(1)) - 1;
      }
      v.capacity = static_cast<int>(rng.uniform(1, static_cast<std::uint64_t>(o.max_capacity)));
      v.operating_cost = rng.lattice_value(0, 8 * static_cast<std::uint64_t>(L), L);
      clone_of.push_back(j);
    }
    stops.push_back(route_vertex_sequence(network, v.route));
    vehicles.push_back(std::move(v));
  }

  std::vector<Traveler> travelers;
  for (std::size_t i = 0; i < o.travelers; ++i) {
    Traveler t;
    t.id = "T" + std::to_string(i + 1);
    if (o.degenerate && i > 0 && rng.chance(1, 2)) {
      const Traveler& src = travelers[rng.index(i)];
      t.od = src.od;
      t.v_max = src.v_max;
      t.v_min = src.v_min;
      t.inconvenience = src.inconvenience;
      travelers.push_back(std::move(t));
      continue;
    }
    // Pick the trip from some vehicle's stops so that most travelers have a ride.
    const auto& seq = stops[o.vehicles == 0 ? 0 : rng.index(o.vehicles)];
    std::size_t p = 0;
    std::size_t q = 0;
    if (o.vehicles > 0) {
      p = rng.index(seq.size() - 1);
      q = p + 1 + rng.index(seq.size() - 1 - p);
    }
    if (o.vehicles == 0 || seq[p] == seq[q]) {
      std::size_t a = rng.index(vertex_count);
      std::size_t b = (a + 1 + rng.index(vertex_count - 1)) % vertex_count;
      t.od = {vertices[a], vertices[b]};
    } else {
      t.od = {seq[p], seq[q]};
    }
    t.v_max = rng.lattice_value(2 * static_cast<std::uint64_t>(L), 12 * static_cast<std::uint64_t>(L), L);
    Money half_max = t.v_max / 2;
    t.v_min = rng.lattice_value(0, floor_steps(t.v_max / 4, L), L);
    for (std::size_t j = 0; j < o.vehicles; ++j) {
      if (clone_of[j] != j) {
        auto src = t.inconvenience.find(vehicles[clone_of[j]].id);
        if (src != t.inconvenience.end()) t.inconvenience[vehicles[j].id] = src->second;
        continue;
      }
      if (!covers(network, vehicles[j].route, t.od) || rng.chance(1, 8)) continue;
      t.inconvenience[vehicles[j].id] =
          rng.lattice_value(0, floor_steps(half_max, L), L);
    }
    travelers.push_back(std::move(t));
  }

  if (o.mode == CostShareMode::explicit_shares) {
    for (auto& v : vehicles) {
      v.cost_shares.emplace();
      for (const auto& t : travelers) {
        (*v.cost_shares)[t.id] =
            rng.lattice_value(0, floor_steps(v.operating_cost, L), L);
      }
    }
  }
  return MarketInstance(std::move(network), std::move(travelers), std::move(vehicles), o.mode);
}

}  // namespace mobmarket
