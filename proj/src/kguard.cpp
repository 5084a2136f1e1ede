#include <algorithm>
#include <map>
#include <mutex>

#include "kgshield/anonymize.hpp"
#include "kgshield/subiso.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace kgshield {

namespace {

void check_queries(const Graph& g, const std::vector<Query>& queries) {
  if (g.weighted()) return;
  for (const Query& q : queries)
    if (q.kind == Query::Kind::TwoQOwns)
      throw UnsupportedProgram("weight-dependent query on an unweighted graph");
}

}  // namespace

AnonymizationResult kguard(const Graph& g, RuleProgram sigma, const AnonymizationParams& params) {
  const int k = params.k;
  const int x = params.x;
  const int n = static_cast<int>(g.vertex_count());
  if (k < 2) throw InvalidParameter("k must be at least 2");
  if (x < 1) throw InvalidParameter("x must be at least 1");
  if (x > n) throw InvalidParameter("x exceeds the vertex count");
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

  // size-x handles of the noised graph, reasoned in isolation
  std::vector<std::vector<VertexId>> sets;
  {
    std::mutex mu;
    for_each_connected_induced_subgraph(
        a, x,
        [&](const std::vector<VertexId>& s) {
          std::lock_guard<std::mutex> lock(mu);
          sets.push_back(s);
        },
        params.workers);
    std::sort(sets.begin(), sets.end());
  }
  std::vector<HandleKG> handles(sets.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 64) num_threads(std::max(params.workers, 1)) \
    if (params.workers > 1)
#endif
  for (std::size_t i = 0; i < sets.size(); ++i) handles[i] = make_handle(a, sets[i], sigma);

  BucketSet bs = isomorphism_bucketing(handles);
  const int B = static_cast<int>(bs.buckets.size());

  Rng srng = Rng::derive(params.seed, 1);
  std::vector<Edge> base_edges = a.edges();

  // per bucket: k-1 clones of the representative, so every member always has
  // its own clones as disjoint partners (labels are globally fresh, and clone
  // degrees dodge every natural degree seen at the matching slot)
  struct CloneRec {
    int bucket;
    std::vector<VertexId> verts;  // slot i mirrors representative slot i
  };
  std::vector<CloneRec> clones;
  std::map<VertexId, int> clone_index;  // vertex -> index into clones

  for (int b = 0; b < B; ++b) {
    const auto& mem = bs.buckets[b];
    int rep = mem.front();
    const auto& rep_verts = handles[rep].verts;
    for (int c = 0; c < k - 1; ++c) {
      std::map<VertexId, VertexId> to_clone;
      CloneRec rec;
      rec.bucket = b;
      for (VertexId v : rep_verts) {
        VertexId nv = a.add_vertex("k" + std::to_string(a.vertex_count()));
        to_clone[v] = nv;
        rec.verts.push_back(nv);
        res.synthetic_vertices.insert(nv);
        res.copy_of[nv] = 2 + c;
      }
      std::set<VertexId> rep_set(rep_verts.begin(), rep_verts.end());
      for (const Edge& e : base_edges)
        if (rep_set.count(e.src) && rep_set.count(e.dst))
          res.synthetic_edges.insert(a.add_edge(to_clone[e.src], to_clone[e.dst], e.weight));
      for (VertexId nv : rec.verts) clone_index[nv] = static_cast<int>(clones.size());
      clones.push_back(std::move(rec));
    }
  }

  // every clone is its own component: bridge them back to the original graph
  std::set<EdgeId> noisable;
  {
    const auto& originals = g.vertices();
    for (const auto& comp : weakly_connected_components(a)) {
      if (g.has_vertex(comp.front())) continue;
      VertexId u = comp[srng.below(comp.size())];
      VertexId v = originals[srng.below(originals.size())];
      if (srng.below(2) == 1) std::swap(u, v);
      EdgeId e = a.add_edge(u, v, weighted ? params.weight_dist.sample(srng) : 0.0);
      res.synthetic_edges.insert(e);
      noisable.insert(e);
    }
  }

  // natural degrees observed at each representative slot, post-bridge; a
  // clone degree avoiding them can never tie any member of its bucket
  using Slot = std::pair<int, int>;  // (bucket, representative slot)
  std::map<Slot, std::pair<std::set<int>, std::set<int>>> slot_naturals;  // in, out
  for (std::size_t h = 0; h < handles.size(); ++h) {
    int b = bs.bucket_of[h];
    for (int i = 0; i < x; ++i) {
      VertexId v = handles[h].verts[i];
      auto& nat = slot_naturals[{b, bs.map_to_rep[h][i]}];
      nat.first.insert(a.in_degree(v));
      nat.second.insert(a.out_degree(v));
    }
  }

  DegreeDistribution p_in = params.in_degree_dist.truncated(1, n);
  DegreeDistribution p_out = params.out_degree_dist.truncated(1, n);
  std::map<VertexId, int> target_in, target_out;
  for (int b = 0; b < B; ++b) {
    for (int i = 0; i < x; ++i) {
      const auto& naturals = slot_naturals[{b, i}];
      for (Direction dir : {Direction::In, Direction::Out}) {
        bool in = dir == Direction::In;
        const auto& forbidden = in ? naturals.first : naturals.second;
        const DegreeDistribution& p = in ? p_in : p_out;
        std::set<int> used;
        for (const auto& c : clones) {
          if (c.bucket != b) continue;
          VertexId v = c.verts[i];
          int d = in ? a.in_degree(v) : a.out_degree(v);
          while (used.count(d) || forbidden.count(d)) d = std::max(d + 1, p.sample(srng));
          used.insert(d);
          (in ? target_in : target_out)[v] = d;
        }
      }
    }
  }

  // meet the targets; endpoints are clone headroom or minted helpers, never
  // original vertices, so no enumerated subgraph changes shape
  std::vector<VertexId> clone_verts;
  for (const auto& c : clones) clone_verts.insert(clone_verts.end(), c.verts.begin(), c.verts.end());
  std::sort(clone_verts.begin(), clone_verts.end());
  std::vector<VertexId> pool;

  for (VertexId v : clone_verts) {
    for (Direction dir : {Direction::In, Direction::Out}) {
      bool in = dir == Direction::In;
      int cur = in ? a.in_degree(v) : a.out_degree(v);
      int delta = (in ? target_in[v] : target_out[v]) - cur;
      if (delta <= 0) continue;

      std::set<VertexId> existing = in ? a.in_neighbors(v) : a.out_neighbors(v);
      auto own_clone = clone_index.find(v);
      std::vector<VertexId> cands;
      for (VertexId u : clone_verts) {
        if (u == v || existing.count(u)) continue;
        if (own_clone != clone_index.end() && clone_index[u] == own_clone->second) continue;
        int head = in ? target_out[u] - a.out_degree(u) : target_in[u] - a.in_degree(u);
        if (head > 0) cands.push_back(u);
      }
      std::vector<VertexId> chosen;
      std::size_t take = std::min<std::size_t>(delta, cands.size());
      for (std::size_t i : srng.sample_without_replacement(cands.size(), take))
        chosen.push_back(cands[i]);
      for (VertexId w : pool) {
        if (chosen.size() >= static_cast<std::size_t>(delta)) break;
        if (w != v && !existing.count(w)) chosen.push_back(w);
      }
      while (chosen.size() < static_cast<std::size_t>(delta)) {
        VertexId nv = a.add_vertex("m" + std::to_string(a.vertex_count()));
        res.synthetic_vertices.insert(nv);
        res.unconstrained_vertices.insert(nv);
        pool.push_back(nv);
        chosen.push_back(nv);
      }
      for (VertexId u : chosen) {
        double w = weighted ? params.weight_dist.sample(srng) : 0.0;
        EdgeId e = in ? a.add_edge(u, v, w) : a.add_edge(v, u, w);
        res.synthetic_edges.insert(e);
        noisable.insert(e);
      }
    }
  }

  FreshLabels labels(g.label_universe(), params.fresh_label_prefix);
  for (VertexId v : a.vertices()) a.set_label(v, labels.next());

  if (weighted && !noisable.empty())
    a = weight_noising(a, g, sigma, noisable, params.query_set, params.weight_dist, params.M,
                       Rng::derive_seed(params.seed, 2), params.workers);

  res.released = std::move(a);
  for (VertexId v : g.vertices()) res.identity_map[v] = v;
  return res;
}

}  // namespace kgshield
