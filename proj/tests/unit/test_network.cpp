#include "mobmarket/errors.hpp"
#include "mobmarket/network.hpp"

#include "reference.hpp"

#include <doctest.h>

#include <random>

using namespace mobmarket;

namespace {

Network abcd() {
  return Network({"A", "B", "C", "D"},
                 {{"e1", "A", "B"}, {"e2", "B", "C"}, {"e3", "C", "D"}, {"e4", "B", "A"}, {"e5", "A", "C"}});
}

std::string first_rule(const ValidationError& e) { return e.issues().front().rule; }

}  // namespace

TEST_CASE("network rejects duplicate ids and unknown endpoints") {
  CHECK_NOTHROW(Network({"A", "B"}, {{"e1", "A", "B"}, {"e2", "A", "B"}, {"loop", "A", "A"}}));
  try {
    Network({"A", "B", "A"}, {{"e1", "A", "X"}, {"e1", "A", "B"}});
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(e.issues().size() == 3);
    bool names_edge = false;
    for (const auto& issue : e.issues()) names_edge |= issue.entity == "e1";
    CHECK(names_edge);
  }
}

TEST_CASE("route vertex sequence") {
  Network net = abcd();
  CHECK(route_vertex_sequence(net, Route{{"e1", "e2"}}) == std::vector<VertexId>{"A", "B", "C"});
  CHECK(route_vertex_sequence(net, Route{{"e1"}}) == std::vector<VertexId>{"A", "B"});
  try {
    route_vertex_sequence(net, Route{{"e1", "e3"}});
    FAIL("expected chain break");
  } catch (const ValidationError& e) {
    CHECK(first_rule(e).starts_with("chain break at position 2"));
  }
  CHECK_THROWS_AS(route_vertex_sequence(net, Route{{"e1", "zz"}}), ValidationError);
  CHECK_THROWS_AS(route_vertex_sequence(net, Route{}), ValidationError);
}

TEST_CASE("od validation") {
  Network net = abcd();
  CHECK_NOTHROW(validate_od(net, {"A", "C"}));
  try {
    validate_od(net, {"A", "A"});
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(first_rule(e) == "origin equals destination");
  }
  CHECK_THROWS_AS(validate_od(net, {"A", "Q"}), ValidationError);
}

TEST_CASE("coverage examples") {
  Network net = abcd();
  CHECK(covers(net, Route{{"e1", "e2"}}, {"A", "C"}));
  CHECK_FALSE(covers(net, Route{{"e1", "e2"}}, {"C", "A"}));
  CHECK(covers(net, Route{{"e1", "e4", "e5"}}, {"B", "C"}));
  CHECK(covers(net, Route{{"e1", "e4", "e5"}}, {"B", "A"}));
  CHECK_FALSE(covers(net, Route{{"e1"}}, {"B", "C"}));
}

TEST_CASE("coverage agrees with all-pairs scan on random walks") {
  Network net = abcd();
  std::mt19937 rng(7);
  std::vector<std::vector<std::string>> out = {{"e1", "e5"}, {"e2", "e4"}, {"e3"}, {}};
  const std::vector<std::string> names = {"A", "B", "C", "D"};
  for (int trial = 0; trial < 300; ++trial) {
    Route route;
    std::size_t at = rng() % 3;
    std::size_t length = 1 + rng() % 6;
    for (std::size_t k = 0; k < length && !out[at].empty(); ++k) {
      const std::string& e = out[at][rng() % out[at].size()];
      route.edges.push_back(e);
      at = std::find(names.begin(), names.end(), net.find_edge(e)->head) - names.begin();
    }
    auto seq = route_vertex_sequence(net, route);
    for (const auto& o : names) {
      for (const auto& d : names) {
        if (o == d) continue;
        CHECK(covers(net, route, {o, d}) == ref::covers(seq, o, d));
      }
    }
  }
}
