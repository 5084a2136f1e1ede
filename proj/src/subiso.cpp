#include "kgshield/subiso.hpp"

#include <algorithm>
#include <unordered_map>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace kgshield {

namespace {

std::uint64_t hash_combine(std::uint64_t h, std::uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

// Derived layer of a small induced subgraph, computed in isolation.
std::vector<std::uint8_t> local_derived(int x, const std::vector<double>& wsum,
                                        const std::vector<std::uint16_t>& pos_edge,
                                        bool weighted, RuleProgram sigma) {
  std::vector<std::uint8_t> d(x * x, 0);
  if (sigma == RuleProgram::None) return d;

  if (sigma == RuleProgram::Reachability) {
    std::vector<std::uint8_t> reach(x * x, 0);
    for (int i = 0; i < x; ++i)
      for (int j = 0; j < x; ++j)
        if (pos_edge[i * x + j]) reach[i * x + j] = 1;
    for (int k = 0; k < x; ++k)
      for (int i = 0; i < x; ++i)
        if (reach[i * x + k])
          for (int j = 0; j < x; ++j)
            if (reach[k * x + j]) reach[i * x + j] = 1;
    for (int i = 0; i < x; ++i)
      for (int j = 0; j < x; ++j)
        if (i != j && reach[i * x + j]) d[i * x + j] = 1;
    return d;
  }

  if (!weighted) throw UnsupportedProgram("control rules require a weighted graph");

  // control fixpoint per source
  std::vector<std::uint8_t> control(x * x, 0);
  for (int s = 0; s < x; ++s) {
    std::vector<char> in_c(x, 0);
    std::vector<double> acc(x, 0.0);
    std::vector<int> stack{s};
    in_c[s] = 1;
    while (!stack.empty()) {
      int y = stack.back();
      stack.pop_back();
      for (int z = 0; z < x; ++z) {
        double w = wsum[y * x + z];
        if (w <= 0.0) continue;
        acc[z] += w;
        if (!in_c[z] && acc[z] > 0.5) {
          in_c[z] = 1;
          stack.push_back(z);
        }
      }
    }
    for (int z = 0; z < x; ++z)
      if (z != s && in_c[z]) control[s * x + z] = 1;
  }
  if (sigma == RuleProgram::Control) return control;

  // ultimate controller: keep sources nobody controls
  std::vector<char> controlled(x, 0);
  for (int i = 0; i < x; ++i)
    for (int j = 0; j < x; ++j)
      if (control[i * x + j]) controlled[j] = 1;
  for (int i = 0; i < x; ++i)
    if (!controlled[i])
      for (int j = 0; j < x; ++j) d[i * x + j] = control[i * x + j];
  return d;
}

void finish_handle(HandleKG& h) {
  const int x = h.size;
  // per-vertex iso-invariant signatures, order-independent
  std::vector<std::uint64_t> sig(x, 0);
  for (int i = 0; i < x; ++i) {
    std::uint64_t g_out = 0, g_in = 0, d_out = 0, d_in = 0;
    for (int j = 0; j < x; ++j) {
      if (j == i) continue;
      g_out += h.g_at(i, j);
      g_in += h.g_at(j, i);
      d_out += h.d_at(i, j);
      d_in += h.d_at(j, i);
    }
    sig[i] = hash_combine(
        hash_combine(hash_combine(g_out, g_in * 1315423911ULL), d_out * 2654435761ULL),
        hash_combine(d_in, h.g_at(i, i)));
  }
  std::sort(sig.begin(), sig.end());
  std::uint64_t inv = static_cast<std::uint64_t>(x);
  for (std::uint64_t s : sig) inv = hash_combine(inv, s);
  h.invariant = inv;
}

// position-level key used for candidate pruning during matching
std::uint64_t vertex_key(const HandleKG& h, int i) {
  std::uint64_t g_out = 0, g_in = 0, d_out = 0, d_in = 0;
  for (int j = 0; j < h.size; ++j) {
    if (j == i) continue;
    g_out += h.g_at(i, j);
    g_in += h.g_at(j, i);
    d_out += h.d_at(i, j);
    d_in += h.d_at(j, i);
  }
  return (g_out << 48) ^ (g_in << 32) ^ (d_out << 16) ^ d_in ^
         (static_cast<std::uint64_t>(h.g_at(i, i)) << 60);
}

struct Matcher {
  const HandleKG& a;
  const HandleKG& b;
  std::vector<std::uint64_t> key_a, key_b;
  std::vector<int> map;      // a position -> b position
  std::vector<char> used_b;
  const std::function<bool(const std::vector<int>&)>* visit;
  bool stopped = false;

  Matcher(const HandleKG& a_, const HandleKG& b_) : a(a_), b(b_) {
    key_a.resize(a.size);
    key_b.resize(b.size);
    for (int i = 0; i < a.size; ++i) key_a[i] = vertex_key(a, i);
    for (int i = 0; i < b.size; ++i) key_b[i] = vertex_key(b, i);
    map.assign(a.size, -1);
    used_b.assign(b.size, 0);
  }

  bool consistent(int i, int j) const {
    if (key_a[i] != key_b[j]) return false;
    if (a.g_at(i, i) != b.g_at(j, j)) return false;
    for (int p = 0; p < i; ++p) {
      int q = map[p];
      if (a.g_at(i, p) != b.g_at(j, q) || a.g_at(p, i) != b.g_at(q, j)) return false;
      if (a.d_at(i, p) != b.d_at(j, q) || a.d_at(p, i) != b.d_at(q, j)) return false;
    }
    return true;
  }

  void search(int i) {
    if (stopped) return;
    if (i == a.size) {
      if (!(*visit)(map)) stopped = true;
      return;
    }
    for (int j = 0; j < b.size && !stopped; ++j) {
      if (used_b[j] || !consistent(i, j)) continue;
      map[i] = j;
      used_b[j] = 1;
      search(i + 1);
      used_b[j] = 0;
      map[i] = -1;
    }
  }
};

}  // namespace

HandleKG make_handle(const Graph& g, const std::vector<VertexId>& verts, RuleProgram sigma) {
  HandleKG h;
  h.verts = verts;
  std::sort(h.verts.begin(), h.verts.end());
  const int x = static_cast<int>(h.verts.size());
  h.size = x;
  h.ground.assign(x * x, 0);
  h.derived.assign(x * x, 0);

  std::unordered_map<VertexId, int> pos;
  pos.reserve(x);
  for (int i = 0; i < x; ++i) pos[h.verts[i]] = i;

  std::vector<double> wsum(x * x, 0.0);
  std::vector<std::uint16_t> pos_edge(x * x, 0);
  for (VertexId v : h.verts) {
    int i = pos[v];
    for (EdgeId eid : g.out_edges(v)) {
      const Edge& e = g.edge(eid);
      auto it = pos.find(e.dst);
      if (it == pos.end()) continue;
      int j = it->second;
      h.ground[i * x + j]++;
      double w = g.weighted() ? e.weight : 1.0;
      wsum[i * x + j] += w;
      if (w > 0.0) pos_edge[i * x + j] = 1;
    }
  }
  h.derived = local_derived(x, wsum, pos_edge, g.weighted(), sigma);
  finish_handle(h);
  return h;
}

HandleKG make_handle(const ReasonedGraph& rg) {
  HandleKG h = make_handle(rg.ground, rg.ground.vertices(), RuleProgram::None);
  const int x = h.size;
  std::unordered_map<VertexId, int> pos;
  for (int i = 0; i < x; ++i) pos[h.verts[i]] = i;
  for (const auto& [u, v] : rg.derived) {
    auto iu = pos.find(u);
    auto iv = pos.find(v);
    if (iu != pos.end() && iv != pos.end() && iu->second != iv->second)
      h.derived[iu->second * x + iv->second] = 1;
  }
  finish_handle(h);
  return h;
}

std::optional<std::vector<int>> find_isomorphism(const HandleKG& a, const HandleKG& b) {
  if (a.size != b.size || a.invariant != b.invariant) return std::nullopt;
  std::optional<std::vector<int>> out;
  Matcher m(a, b);
  std::function<bool(const std::vector<int>&)> visit = [&](const std::vector<int>& perm) {
    out = perm;
    return false;  // first match wins
  };
  m.visit = &visit;
  m.search(0);
  return out;
}

void enumerate_isomorphisms(const HandleKG& a, const HandleKG& b,
                            const std::function<bool(const std::vector<int>&)>& visit) {
  if (a.size != b.size || a.invariant != b.invariant) return;
  Matcher m(a, b);
  m.visit = &visit;
  m.search(0);
}

std::optional<IsoMap> kg_isomorphic(const ReasonedGraph& a, const ReasonedGraph& b) {
  HandleKG ha = make_handle(a);
  HandleKG hb = make_handle(b);
  auto perm = find_isomorphism(ha, hb);
  if (!perm) return std::nullopt;
  IsoMap out;
  for (int i = 0; i < ha.size; ++i) out[ha.verts[i]] = hb.verts[(*perm)[i]];
  return out;
}

namespace {

struct EsuContext {
  const std::vector<std::vector<int>>& adj;  // undirected, distinct, no self
  int x;
  const std::function<void(const std::vector<VertexId>&)>& emit;
  const std::vector<VertexId>& ids;
  std::vector<char> visited;
  std::vector<int> current;
  std::vector<VertexId> scratch;

  void extend(std::vector<int>& ext) {
    if (static_cast<int>(current.size()) == x) {
      scratch.clear();
      for (int p : current) scratch.push_back(ids[p]);
      std::sort(scratch.begin(), scratch.end());
      emit(scratch);
      return;
    }
    // each candidate is considered with the remainder of ext only, so every
    // vertex set comes out exactly once
    for (std::size_t idx = 0; idx < ext.size(); ++idx) {
      int w = ext[idx];
      std::vector<int> next(ext.begin() + idx + 1, ext.end());
      std::vector<int> newly;
      for (int u : adj[w]) {
        if (!visited[u]) {
          visited[u] = 1;
          newly.push_back(u);
          next.push_back(u);
        }
      }
      current.push_back(w);
      extend(next);
      current.pop_back();
      for (int u : newly) visited[u] = 0;
    }
  }
};

}  // namespace

void for_each_connected_induced_subgraph(
    const Graph& g, int x, const std::function<void(const std::vector<VertexId>&)>& emit,
    int workers) {
  const auto& ids = g.vertices();
  const int n = static_cast<int>(ids.size());
  if (x < 1 || x > n) throw InvalidParameter("subgraph size out of range");

  std::unordered_map<VertexId, int> pos;
  pos.reserve(n);
  for (int i = 0; i < n; ++i) pos[ids[i]] = i;
  std::vector<std::vector<int>> adj(n);
  for (const Edge& e : g.edges()) {
    if (e.src == e.dst) continue;
    adj[pos[e.src]].push_back(pos[e.dst]);
    adj[pos[e.dst]].push_back(pos[e.src]);
  }
  for (auto& nb : adj) {
    std::sort(nb.begin(), nb.end());
    nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
  }

  auto run_anchor = [&](int v, EsuContext& ctx) {
    std::fill(ctx.visited.begin(), ctx.visited.end(), 0);
    for (int u = 0; u <= v; ++u) ctx.visited[u] = 1;
    ctx.current.assign(1, v);
    std::vector<int> ext;
    for (int u : adj[v])
      if (u > v) {
        ctx.visited[u] = 1;
        ext.push_back(u);
      }
    ctx.extend(ext);
  };

#ifdef _OPENMP
  if (workers > 1) {
#pragma omp parallel num_threads(workers)
    {
      EsuContext ctx{adj, x, emit, ids, std::vector<char>(n, 0), {}, {}};
#pragma omp for schedule(dynamic, 4)
      for (int v = 0; v < n; ++v) run_anchor(v, ctx);
    }
    return;
  }
#endif
  EsuContext ctx{adj, x, emit, ids, std::vector<char>(n, 0), {}, {}};
  for (int v = 0; v < n; ++v) run_anchor(v, ctx);
}

std::vector<std::vector<VertexId>> enumerate_connected_induced_subgraphs(const Graph& g, int x) {
  std::vector<std::vector<VertexId>> out;
  for_each_connected_induced_subgraph(
      g, x, [&](const std::vector<VertexId>& s) { out.push_back(s); }, 1);
  std::sort(out.begin(), out.end());
  return out;
}

BucketSet isomorphism_bucketing(const std::vector<HandleKG>& handles) {
  BucketSet bs;
  bs.bucket_of.assign(handles.size(), -1);
  bs.map_to_rep.resize(handles.size());
  std::unordered_map<std::uint64_t, std::vector<int>> by_invariant;  // -> bucket ids
  for (std::size_t h = 0; h < handles.size(); ++h) {
    auto& candidates = by_invariant[handles[h].invariant];
    int found = -1;
    for (int b : candidates) {
      const HandleKG& rep = handles[bs.buckets[b].front()];
      if (auto perm = find_isomorphism(handles[h], rep)) {
        found = b;
        bs.map_to_rep[h] = std::move(*perm);
        break;
      }
    }
    if (found < 0) {
      found = static_cast<int>(bs.buckets.size());
      bs.buckets.emplace_back();
      candidates.push_back(found);
      std::vector<int> identity(handles[h].size);
      for (int i = 0; i < handles[h].size; ++i) identity[i] = i;
      bs.map_to_rep[h] = std::move(identity);
    }
    bs.buckets[found].push_back(static_cast<int>(h));
    bs.bucket_of[h] = found;
  }
  return bs;
}

std::vector<std::vector<VertexId>> isomorphism_partitioning(const std::vector<VertexId>& pool,
                                                            const std::vector<HandleKG>& handles,
                                                            const BucketSet& buckets) {
  std::map<VertexId, VertexId> parent;
  for (VertexId v : pool) parent[v] = v;
  std::function<VertexId(VertexId)> find = [&](VertexId a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  auto unite = [&](VertexId a, VertexId b) { parent[find(a)] = find(b); };

  // vertices sharing a (bucket, representative-position) slot are related
  std::map<std::pair<int, int>, VertexId> slot_first;
  for (std::size_t h = 0; h < handles.size(); ++h) {
    int b = buckets.bucket_of[h];
    for (int i = 0; i < handles[h].size; ++i) {
      VertexId v = handles[h].verts[i];
      if (!parent.count(v)) continue;
      std::pair<int, int> slot{b, buckets.map_to_rep[h][i]};
      auto [it, fresh] = slot_first.emplace(slot, v);
      if (!fresh) unite(v, it->second);
    }
  }

  std::map<VertexId, std::vector<VertexId>> classes;
  for (VertexId v : pool) classes[find(v)].push_back(v);
  std::vector<std::vector<VertexId>> out;
  for (auto& [root, members] : classes) {
    std::sort(members.begin(), members.end());
    out.push_back(std::move(members));
  }
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return out;
}

}  // namespace kgshield
