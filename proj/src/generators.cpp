#include "kgshield/generators.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "kgshield/rng.hpp"

namespace kgshield {

namespace {

std::string vertex_label(int i) { return "v" + std::to_string(i); }

}  // namespace

Graph erdos_renyi_directed(int n, std::optional<long> m, std::uint64_t seed, bool self_loops) {
  if (n < 2) throw InvalidParameter("erdos-renyi needs n >= 2");
  long universe = static_cast<long>(n) * n - (self_loops ? 0 : n);
  long edges = m.value_or(std::lround(n * std::log(static_cast<double>(n)) / 2.0));
  if (edges < 0 || edges > universe)
    throw InvalidParameter("edge count exceeds the number of possible pairs");

  Graph g(false);
  std::vector<VertexId> ids(n);
  for (int i = 0; i < n; ++i) ids[i] = g.add_vertex(vertex_label(i));

  Rng rng(seed);
  auto picks = rng.sample_without_replacement(static_cast<std::size_t>(universe),
                                              static_cast<std::size_t>(edges));
  std::sort(picks.begin(), picks.end());
  for (std::size_t code : picks) {
    int s, d;
    if (self_loops) {
      s = static_cast<int>(code / n);
      d = static_cast<int>(code % n);
    } else {
      s = static_cast<int>(code / (n - 1));
      d = static_cast<int>(code % (n - 1));
      if (d >= s) ++d;
    }
    g.add_edge(ids[s], ids[d]);
  }
  return g;
}

double scale_free_pmf(int d, int n, double alpha) {
  if (d < 1 || d > n - 1) return 0.0;
  double z = 0.0;
  for (int k = 1; k <= n - 1; ++k) z += std::pow(k, -alpha);
  return std::pow(d, -alpha) / z;
}

Graph scale_free(int n, double alpha, std::uint64_t seed) {
  if (n < 2) throw InvalidParameter("scale-free needs n >= 2");
  if (alpha <= 0.0) throw InvalidParameter("alpha must be positive");

  std::vector<double> cdf(n - 1);
  double z = 0.0;
  for (int d = 1; d <= n - 1; ++d) {
    z += std::pow(d, -alpha);
    cdf[d - 1] = z;
  }
  for (double& c : cdf) c /= z;

  Graph g(false);
  std::vector<VertexId> ids(n);
  for (int i = 0; i < n; ++i) ids[i] = g.add_vertex(vertex_label(i));

  Rng rng(seed);
  for (int i = 0; i < n; ++i) {
    double u = rng.uniform01();
    int d = 1 + static_cast<int>(std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
    auto picks = rng.sample_without_replacement(static_cast<std::size_t>(n - 1),
                                                static_cast<std::size_t>(d));
    std::sort(picks.begin(), picks.end());
    for (std::size_t p : picks) {
      int j = static_cast<int>(p);
      if (j >= i) ++j;  // skip self
      g.add_edge(ids[i], ids[j]);
    }
  }
  return g;
}

Graph assign_weights(const Graph& g, WeightMode mode, std::uint64_t seed) {
  Graph out = g;
  if (mode == WeightMode::None) {
    out.set_weighted(false);
    return out;
  }
  out.set_weighted(true);
  Rng rng(seed);
  for (const Edge& e : g.edges()) out.set_edge_weight(e.id, rng.uniform01());
  if (mode == WeightMode::EconomicNormalized) {
    for (VertexId v : out.vertices()) {
      double s = 0.0;
      for (EdgeId e : out.in_edges(v)) s += out.edge(e).weight;
      if (s > 1.0) {
        double u = 1.0 - rng.uniform01();  // in (0,1]
        for (EdgeId e : out.in_edges(v)) out.set_edge_weight(e, out.edge(e).weight * u / s);
      }
    }
  }
  return out;
}

}  // namespace kgshield
