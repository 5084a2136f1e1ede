#include <algorithm>
#include <numeric>

#include "kgshield/anonymize.hpp"

namespace kgshield {

std::pair<std::vector<VertexId>, std::vector<VertexId>> kl_bisect(const Graph& g,
                                                                  std::uint64_t seed) {
  const auto& ids = g.vertices();
  const int n = static_cast<int>(ids.size());
  if (n < 2) throw InvalidParameter("bisection needs at least two vertices");

  std::map<VertexId, int> pos;
  for (int i = 0; i < n; ++i) pos[ids[i]] = i;
  // undirected connection counts, self-loops ignored
  std::vector<std::map<int, int>> adj(n);
  for (const Edge& e : g.edges()) {
    if (e.src == e.dst) continue;
    int u = pos[e.src], v = pos[e.dst];
    adj[u][v]++;
    adj[v][u]++;
  }

  std::vector<int> side(n);
  {
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    Rng rng(seed);
    for (int i = n; i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
    for (int i = 0; i < n; ++i) side[order[i]] = i < (n + 1) / 2 ? 0 : 1;
  }

  auto dvalue = [&](int v) {
    int d = 0;
    for (auto [u, w] : adj[v]) d += side[u] != side[v] ? w : -w;
    return d;
  };

  for (int pass = 0; pass < 10; ++pass) {
    std::vector<int> d(n);
    for (int v = 0; v < n; ++v) d[v] = dvalue(v);
    std::vector<char> locked(n, 0);
    std::vector<std::pair<int, int>> swaps;  // (a-side vertex, b-side vertex)
    std::vector<int> gains;

    int rounds = std::min(n / 2, n - (n + 1) / 2);
    for (int r = 0; r < rounds; ++r) {
      int best_a = -1, best_b = -1, best_gain = INT32_MIN;
      for (int u = 0; u < n; ++u) {
        if (locked[u] || side[u] != 0) continue;
        for (int v = 0; v < n; ++v) {
          if (locked[v] || side[v] != 1) continue;
          int cuv = 0;
          auto it = adj[u].find(v);
          if (it != adj[u].end()) cuv = it->second;
          int gain = d[u] + d[v] - 2 * cuv;
          if (gain > best_gain) {
            best_gain = gain;
            best_a = u;
            best_b = v;
          }
        }
      }
      if (best_a < 0) break;
      locked[best_a] = locked[best_b] = 1;
      swaps.emplace_back(best_a, best_b);
      gains.push_back(best_gain);
      for (int w = 0; w < n; ++w) {
        if (locked[w]) continue;
        auto ita = adj[w].find(best_a);
        auto itb = adj[w].find(best_b);
        int ca = ita == adj[w].end() ? 0 : ita->second;
        int cb = itb == adj[w].end() ? 0 : itb->second;
        if (side[w] == 0) d[w] += 2 * ca - 2 * cb;
        else d[w] += 2 * cb - 2 * ca;
      }
    }

    int best_prefix = 0, best_total = 0, running = 0;
    for (std::size_t i = 0; i < gains.size(); ++i) {
      running += gains[i];
      if (running > best_total) {
        best_total = running;
        best_prefix = static_cast<int>(i) + 1;
      }
    }
    if (best_prefix == 0) break;
    for (int i = 0; i < best_prefix; ++i) {
      side[swaps[i].first] = 1;
      side[swaps[i].second] = 0;
    }
  }

  std::pair<std::vector<VertexId>, std::vector<VertexId>> out;
  for (int i = 0; i < n; ++i) (side[i] == 0 ? out.first : out.second).push_back(ids[i]);
  return out;
}

namespace {

void decompose(const Graph& g, int max_component, std::uint64_t seed, std::vector<Graph>& parts,
               std::size_t& cut_edges) {
  for (const auto& comp : weakly_connected_components(g)) {
    Graph sub = g.induced_subgraph(comp);
    if (static_cast<int>(sub.vertex_count()) <= max_component) {
      parts.push_back(std::move(sub));
      continue;
    }
    auto [left, right] = kl_bisect(sub, Rng::derive_seed(seed, 17 + parts.size()));
    std::set<VertexId> lset(left.begin(), left.end());
    for (const Edge& e : sub.edges())
      if (lset.count(e.src) != lset.count(e.dst)) ++cut_edges;
    decompose(sub.induced_subgraph(left), max_component, Rng::derive_seed(seed, 1), parts,
              cut_edges);
    decompose(sub.induced_subgraph(right), max_component, Rng::derive_seed(seed, 2), parts,
              cut_edges);
  }
}

}  // namespace

AnonymizationResult split_and_merge(const Graph& g, RuleProgram sigma,
                                    const AnonymizationParams& params, Algo algo,
                                    int max_component) {
  if (max_component < params.x)
    throw InvalidParameter("max component size below the subgraph size x");
  auto run = [&](const Graph& part, std::uint64_t seed) {
    AnonymizationParams p = params;
    p.seed = seed;
    return algo == Algo::Klone ? klone(part, sigma, p) : kguard(part, sigma, p);
  };

  if (static_cast<int>(g.vertex_count()) <= max_component && is_weakly_connected(g))
    return run(g, params.seed);

  std::vector<Graph> parts;
  std::size_t cut_edges = 0;
  decompose(g, max_component, params.seed, parts, cut_edges);

  std::vector<AnonymizationResult> sub(parts.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(std::max(params.workers, 1)) \
    if (params.workers > 1)
#endif
  for (std::size_t i = 0; i < parts.size(); ++i)
    sub[i] = run(parts[i], Rng::derive_seed(params.seed, 2000 + i));

  AnonymizationResult out;
  Graph merged(g.weighted());
  std::vector<std::map<VertexId, VertexId>> remap(parts.size());
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const auto& r = sub[i];
    for (VertexId v : r.released.vertices())
      remap[i][v] = merged.add_vertex("p" + std::to_string(i) + "_" + std::to_string(v));
    for (const Edge& e : r.released.edges()) {
      EdgeId ne = merged.add_edge(remap[i][e.src], remap[i][e.dst], e.weight);
      if (r.synthetic_edges.count(e.id)) out.synthetic_edges.insert(ne);
    }
    for (const auto& [orig, rel] : r.identity_map) out.identity_map[orig] = remap[i][rel];
    for (VertexId v : r.synthetic_vertices) out.synthetic_vertices.insert(remap[i][v]);
    for (VertexId v : r.unconstrained_vertices) out.unconstrained_vertices.insert(remap[i][v]);
  }

  // chain the anonymized parts; endpoints prefer degree-unconstrained
  // synthetic helpers so no component's guarantees shift
  Rng srng = Rng::derive(params.seed, 3000);
  auto pick_endpoint = [&](std::size_t i) {
    std::vector<VertexId> prefer;
    for (VertexId v : sub[i].unconstrained_vertices) prefer.push_back(remap[i][v]);
    if (prefer.empty())
      for (VertexId v : sub[i].synthetic_vertices) prefer.push_back(remap[i][v]);
    if (prefer.empty())
      for (const auto& [old_id, new_id] : remap[i]) prefer.push_back(new_id);
    return prefer[srng.below(prefer.size())];
  };
  for (std::size_t i = 1; i < parts.size(); ++i) {
    VertexId u = pick_endpoint(i - 1);
    VertexId v = pick_endpoint(i);
    if (srng.below(2) == 1) std::swap(u, v);
    double w = g.weighted() ? params.weight_dist.sample(srng) : 0.0;
    out.synthetic_edges.insert(merged.add_edge(u, v, w));
  }

  FreshLabels labels(g.label_universe(), params.fresh_label_prefix);
  for (VertexId v : merged.vertices()) merged.set_label(v, labels.next());

  out.released = std::move(merged);
  out.augmentation_intact = cut_edges == 0;
  return out;
}

}  // namespace kgshield
