#include <algorithm>

#include "kgshield/anonymize.hpp"

namespace kgshield {

namespace {

void check_queries(const Graph& g, const std::vector<Query>& queries) {
  if (g.weighted()) return;
  for (const Query& q : queries)
    if (q.kind == Query::Kind::TwoQOwns)
      throw UnsupportedProgram("weight-dependent query on an unweighted graph");
}

}  // namespace

AnonymizationResult klone(const Graph& g, RuleProgram sigma, const AnonymizationParams& params) {
  const int k = params.k;
  const int n = static_cast<int>(g.vertex_count());
  if (k < 2) throw InvalidParameter("k must be at least 2");
  if (n == 0) throw InvalidParameter("empty input graph");
  if (!is_weakly_connected(g)) throw NotWeaklyConnected("input graph must be weakly connected");
  check_queries(g, params.query_set);
  const bool weighted = g.weighted();

  AnonymizationResult res;

  std::set<EdgeId> original_edges;
  for (const Edge& e : g.edges()) original_edges.insert(e.id);

  Graph a = g;
  if (weighted)
    a = weight_noising(a, g, sigma, original_edges, params.query_set, params.weight_dist,
                       params.M, Rng::derive_seed(params.seed, 0), params.workers);

  // disjoint copies sharing the noised weights exactly
  std::vector<std::vector<VertexId>> copies(k + 1);
  copies[1] = a.vertices();
  for (VertexId v : copies[1]) res.copy_of[v] = 1;
  std::vector<Edge> base_edges = a.edges();
  for (int j = 2; j <= k; ++j) {
    std::map<VertexId, VertexId> to_copy;
    copies[j].reserve(n);
    for (VertexId v : copies[1]) {
      VertexId nv = a.add_vertex("c" + std::to_string(j) + "_" + std::to_string(v));
      to_copy[v] = nv;
      copies[j].push_back(nv);
      res.copy_of[nv] = j;
      res.synthetic_vertices.insert(nv);
    }
    for (const Edge& e : base_edges) a.add_edge(to_copy[e.src], to_copy[e.dst], e.weight);
  }

  Rng srng = Rng::derive(params.seed, 1);

  // one bridge per consecutive copy pair keeps A weakly connected
  for (int j = 1; j + 1 <= k; ++j) {
    VertexId u = copies[j][srng.below(n)];
    VertexId v = copies[j + 1][srng.below(n)];
    if (srng.below(2) == 1) std::swap(u, v);
    EdgeId e = a.add_edge(u, v, weighted ? params.weight_dist.sample(srng) : 0.0);
    res.synthetic_edges.insert(e);
  }

  DegreeDistribution p_in = params.in_degree_dist.truncated(1, n);
  DegreeDistribution p_out = params.out_degree_dist.truncated(1, n);

  std::set<VertexId> processed;
  std::vector<std::set<VertexId>> copy_sets(k + 1);
  for (int j = 1; j <= k; ++j) copy_sets[j].insert(copies[j].begin(), copies[j].end());

  for (int idx = 0; idx < n; ++idx) {
    processed.insert(copies[1][idx]);
    std::vector<int> taken_in{a.in_degree(copies[1][idx])};
    std::vector<int> taken_out{a.out_degree(copies[1][idx])};

    for (int j = 2; j <= k; ++j) {
      VertexId v = copies[j][idx];
      for (Direction dir : {Direction::In, Direction::Out}) {
        bool in = dir == Direction::In;
        auto& taken = in ? taken_in : taken_out;
        const DegreeDistribution& p = in ? p_in : p_out;

        int cur = in ? a.in_degree(v) : a.out_degree(v);
        int d = cur;
        while (std::find(taken.begin(), taken.end(), d) != taken.end())
          d = std::max(d + 1, p.sample(srng));
        taken.push_back(d);

        int delta = d - cur;
        if (delta > 0) {
          std::set<VertexId> excluded = in ? a.in_neighbors(v) : a.out_neighbors(v);
          excluded.insert(v);
          std::vector<VertexId> cands;
          for (VertexId u : a.vertices()) {
            if (processed.count(u) || copy_sets[j].count(u) || excluded.count(u)) continue;
            cands.push_back(u);
          }
          std::vector<VertexId> chosen;
          std::size_t take = std::min<std::size_t>(delta, cands.size());
          for (std::size_t i : srng.sample_without_replacement(cands.size(), take))
            chosen.push_back(cands[i]);
          while (chosen.size() < static_cast<std::size_t>(delta)) {
            VertexId nv = a.add_vertex("m" + std::to_string(a.vertex_count()));
            res.synthetic_vertices.insert(nv);
            res.unconstrained_vertices.insert(nv);
            chosen.push_back(nv);
          }
          for (VertexId u : chosen) {
            double w = weighted ? params.weight_dist.sample(srng) : 0.0;
            EdgeId e = in ? a.add_edge(u, v, w) : a.add_edge(v, u, w);
            res.synthetic_edges.insert(e);
          }
        }
      }
      processed.insert(v);
    }
  }

  FreshLabels labels(g.label_universe(), params.fresh_label_prefix);
  for (VertexId v : a.vertices()) a.set_label(v, labels.next());

  if (weighted && !res.synthetic_edges.empty())
    a = weight_noising(a, g, sigma, res.synthetic_edges, params.query_set, params.weight_dist,
                       params.M, Rng::derive_seed(params.seed, 2), params.workers);

  res.released = std::move(a);
  for (VertexId v : g.vertices()) res.identity_map[v] = v;
  return res;
}

}  // namespace kgshield
