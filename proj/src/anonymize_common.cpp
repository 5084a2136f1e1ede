#include <algorithm>
#include <cmath>

#include "kgshield/anonymize.hpp"
#include "kgshield/metrics.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace kgshield {

FreshLabels::FreshLabels(const std::set<std::string>& taken, std::string prefix)
    : prefix_(std::move(prefix)) {
  if (prefix_.empty()) prefix_ = "n";
  auto clashes = [&]() {
    for (const auto& t : taken)
      if (t.starts_with(prefix_)) return true;
    return false;
  };
  while (clashes()) prefix_ += "_";
}

std::string FreshLabels::next() { return prefix_ + std::to_string(counter_++); }

namespace {

constexpr double kWeightTolerance = 1e-9;

double noised_weight(Rng& rng, const WeightDistribution& p_w, bool must_differ, double old) {
  double w = 0.0;
  for (int attempt = 0; attempt < 100; ++attempt) {
    w = p_w.sample(rng);
    if (!must_differ || std::fabs(w - old) > kWeightTolerance) return w;
  }
  // deterministic nudge as a last resort
  return old <= 0.5 ? old + 1e-6 : old - 1e-6;
}

}  // namespace

Graph weight_noising(const Graph& a, const Graph& g, RuleProgram sigma,
                     const std::set<EdgeId>& edge_subset, const std::vector<Query>& queries,
                     const WeightDistribution& p_w, int m, std::uint64_t seed, int workers) {
  if (m < 1) throw InvalidParameter("weight noising needs at least one trial");
  if (!a.weighted()) throw InvalidParameter("weight noising needs a weighted graph");
  for (EdgeId e : edge_subset)
    if (!a.has_edge_id(e)) throw InvalidVertex("edge subset refers to an unknown edge");
  if (edge_subset.empty()) return a;

  std::vector<EdgeId> order(edge_subset.begin(), edge_subset.end());

  auto trial_weights = [&](int t) {
    Rng rng = Rng::derive(seed, static_cast<std::uint64_t>(t));
    std::vector<double> ws(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
      bool shared = g.has_edge_id(order[i]);
      ws[i] = noised_weight(rng, p_w, shared, shared ? g.edge(order[i]).weight : 0.0);
    }
    return ws;
  };

  int best = 0;
  if (!queries.empty()) {  // without queries every trial scores alike
    std::vector<double> scores(m);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(std::max(workers, 1)) if (workers > 1)
#endif
    for (int t = 0; t < m; ++t) {
      Graph cand = a;
      auto ws = trial_weights(t);
      for (std::size_t i = 0; i < order.size(); ++i) cand.set_edge_weight(order[i], ws[i]);
      scores[t] = utility_sym_ids(g, sigma, cand, queries);
    }
    for (int t = 1; t < m; ++t)
      if (scores[t] < scores[best]) best = t;
  }

  Graph out = a;
  auto ws = trial_weights(best);
  for (std::size_t i = 0; i < order.size(); ++i) out.set_edge_weight(order[i], ws[i]);
  return out;
}

std::vector<int> choose_deg(const Graph& a, Direction dir, const DegreeDistribution& p,
                            const std::vector<VertexId>& vertices, std::uint64_t seed) {
  if (vertices.empty()) throw InvalidParameter("choose_deg needs at least one vertex");
  Rng rng(seed);
  std::vector<int> out;
  out.reserve(vertices.size());
  for (VertexId v : vertices) {
    int d = dir == Direction::Out ? a.out_degree(v) : a.in_degree(v);
    while (std::find(out.begin(), out.end(), d) != out.end())
      d = std::max(d + 1, p.sample(rng));
    out.push_back(d);
  }
  return out;
}

}  // namespace kgshield
