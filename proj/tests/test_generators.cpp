#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <map>
#include <set>

#include "doctest.h"
#include "kgshield/generators.hpp"

using namespace kgshield;

TEST_CASE("erdos-renyi: exact edge count, distinct pairs, default density") {
  Graph g = erdos_renyi_directed(50, 300, 1);
  CHECK(g.vertex_count() == 50);
  CHECK(g.edge_count() == 300);
  std::set<std::pair<VertexId, VertexId>> pairs;
  for (const Edge& e : g.edges()) CHECK(pairs.emplace(e.src, e.dst).second);
  CHECK_FALSE(g.weighted());

  // default m = round(n ln n / 2): for n = 100 that is 230
  Graph d = erdos_renyi_directed(100, std::nullopt, 2);
  CHECK(d.edge_count() == std::lround(100.0 * std::log(100.0) / 2.0));

  Graph nl = erdos_renyi_directed(30, 200, 3, false);
  for (const Edge& e : nl.edges()) CHECK(e.src != e.dst);

  CHECK_THROWS_AS(erdos_renyi_directed(0, 1, 4), InvalidParameter);
  CHECK_THROWS_AS(erdos_renyi_directed(5, 26, 4), InvalidParameter);   // > n^2
  CHECK_THROWS_AS(erdos_renyi_directed(5, 21, 4, false), InvalidParameter);  // > n(n-1)
}

TEST_CASE("erdos-renyi is deterministic per seed") {
  auto dump = [](const Graph& g) {
    std::vector<std::pair<VertexId, VertexId>> out;
    for (const Edge& e : g.edges()) out.emplace_back(e.src, e.dst);
    return out;
  };
  CHECK(dump(erdos_renyi_directed(40, 120, 9)) == dump(erdos_renyi_directed(40, 120, 9)));
  CHECK(dump(erdos_renyi_directed(40, 120, 9)) != dump(erdos_renyi_directed(40, 120, 10)));
}

TEST_CASE("scale-free degrees follow the power-law pmf") {
  const int n = 60;
  const double alpha = 2.5;
  // pmf sanity: normalized, monotone decreasing
  double total = 0.0;
  for (int d = 1; d < n; ++d) {
    total += scale_free_pmf(d, n, alpha);
    if (d > 1) CHECK(scale_free_pmf(d, n, alpha) < scale_free_pmf(d - 1, n, alpha));
  }
  CHECK(total == doctest::Approx(1.0));
  CHECK(scale_free_pmf(2, n, alpha) / scale_free_pmf(1, n, alpha) ==
        doctest::Approx(std::pow(2.0, -alpha)));

  // empirical out-degree frequencies over many draws track the pmf
  std::map<int, int> freq;
  int draws = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Graph g = scale_free(n, alpha, seed);
    CHECK(g.vertex_count() == n);
    for (VertexId v : g.vertices()) {
      ++freq[g.out_degree(v)];
      ++draws;
    }
    for (const Edge& e : g.edges()) CHECK(e.src != e.dst);
  }
  for (int d = 1; d <= 3; ++d)
    CHECK(static_cast<double>(freq[d]) / draws ==
          doctest::Approx(scale_free_pmf(d, n, alpha)).epsilon(0.05));

  CHECK_THROWS_AS(scale_free(1, 2.0, 0), InvalidParameter);
  CHECK_THROWS_AS(scale_free(10, -1.0, 0), InvalidParameter);
}

TEST_CASE("uniform weights lie in [0,1] and preserve structure") {
  Graph g = erdos_renyi_directed(30, 120, 5);
  Graph w = assign_weights(g, WeightMode::Uniform01, 6);
  CHECK(w.weighted());
  CHECK(w.edge_count() == g.edge_count());
  REQUIRE(w.vertex_count() == g.vertex_count());
  for (std::size_t i = 0; i < g.edges().size(); ++i) {
    CHECK(w.edges()[i].src == g.edges()[i].src);
    CHECK(w.edges()[i].dst == g.edges()[i].dst);
    CHECK(w.edges()[i].weight >= 0.0);
    CHECK(w.edges()[i].weight <= 1.0);
  }
  // None strips weights
  CHECK_FALSE(assign_weights(w, WeightMode::None, 0).weighted());
}

TEST_CASE("economic weights keep every incoming sum within 1") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Graph g = assign_weights(erdos_renyi_directed(40, 400, seed), WeightMode::EconomicNormalized,
                             seed + 7);
    std::map<VertexId, double> in_sum;
    for (const Edge& e : g.edges()) {
      CHECK(e.weight >= 0.0);
      CHECK(e.weight <= 1.0);
      in_sum[e.dst] += e.weight;
    }
    for (const auto& [v, s] : in_sum) CHECK(s <= 1.0 + 1e-12);
  }
}
