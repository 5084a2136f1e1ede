#include "kgshield/graph.hpp"

#include <algorithm>
#include <queue>

namespace kgshield {

const Graph::VertexRec& Graph::rec(VertexId v) const {
  auto it = index_.find(v);
  if (it == index_.end()) throw InvalidVertex("unknown vertex id " + std::to_string(v));
  return it->second;
}

VertexId Graph::add_vertex(std::string label) {
  VertexId id = next_vertex_id_;
  add_vertex(id, std::move(label));
  return id;
}

void Graph::add_vertex(VertexId id, std::string label) {
  if (index_.count(id)) throw InvalidVertex("duplicate vertex id " + std::to_string(id));
  index_.emplace(id, VertexRec{std::move(label), {}, {}});
  verts_.insert(std::lower_bound(verts_.begin(), verts_.end(), id), id);
  if (id >= next_vertex_id_) next_vertex_id_ = id + 1;
}

EdgeId Graph::add_edge(VertexId src, VertexId dst, double weight) {
  auto si = index_.find(src);
  auto di = index_.find(dst);
  if (si == index_.end()) throw InvalidVertex("unknown vertex id " + std::to_string(src));
  if (di == index_.end()) throw InvalidVertex("unknown vertex id " + std::to_string(dst));
  if (weighted_ && (weight < 0.0 || weight > 1.0))
    throw ValidationError("edge weight outside [0,1]");
  EdgeId id = next_edge_id_++;
  edge_index_.emplace(id, edges_.size());
  edges_.push_back(Edge{id, src, dst, weight});
  si->second.out.push_back(id);
  di->second.in.push_back(id);
  return id;
}

const Edge& Graph::edge(EdgeId e) const {
  auto it = edge_index_.find(e);
  if (it == edge_index_.end()) throw InvalidParameter("unknown edge id " + std::to_string(e));
  return edges_[it->second];
}

void Graph::set_edge_weight(EdgeId e, double weight) {
  auto it = edge_index_.find(e);
  if (it == edge_index_.end()) throw InvalidParameter("unknown edge id " + std::to_string(e));
  if (weighted_ && (weight < 0.0 || weight > 1.0))
    throw ValidationError("edge weight outside [0,1]");
  edges_[it->second].weight = weight;
}

const std::string& Graph::label(VertexId v) const { return rec(v).label; }

void Graph::set_label(VertexId v, std::string label) {
  auto it = index_.find(v);
  if (it == index_.end()) throw InvalidVertex("unknown vertex id " + std::to_string(v));
  it->second.label = std::move(label);
}

std::set<std::string> Graph::label_universe() const {
  std::set<std::string> out;
  for (const auto& [v, r] : index_) out.insert(r.label);
  return out;
}

const std::vector<EdgeId>& Graph::out_edges(VertexId v) const { return rec(v).out; }
const std::vector<EdgeId>& Graph::in_edges(VertexId v) const { return rec(v).in; }

SensitiveAttributes Graph::sensitive_attributes(VertexId v) const {
  const VertexRec& r = rec(v);
  return SensitiveAttributes{r.label, static_cast<int>(r.in.size()),
                             static_cast<int>(r.out.size())};
}

std::set<VertexId> Graph::out_neighbors(VertexId v) const {
  std::set<VertexId> out;
  for (EdgeId e : rec(v).out) out.insert(edge(e).dst);
  return out;
}

std::set<VertexId> Graph::in_neighbors(VertexId v) const {
  std::set<VertexId> out;
  for (EdgeId e : rec(v).in) out.insert(edge(e).src);
  return out;
}

Graph Graph::induced_subgraph(const std::vector<VertexId>& x_set) const {
  return induced_subgraph(std::set<VertexId>(x_set.begin(), x_set.end()));
}

Graph Graph::induced_subgraph(const std::set<VertexId>& x_set) const {
  Graph h(weighted_);
  for (VertexId v : x_set) h.add_vertex(v, label(v));  // throws on unknown ids
  for (const Edge& e : edges_) {
    if (x_set.count(e.src) && x_set.count(e.dst)) {
      // preserve the original edge id
      EdgeId id = e.id;
      h.edge_index_.emplace(id, h.edges_.size());
      h.edges_.push_back(e);
      h.index_[e.src].out.push_back(id);
      h.index_[e.dst].in.push_back(id);
      if (id >= h.next_edge_id_) h.next_edge_id_ = id + 1;
    }
  }
  return h;
}

namespace {

// Union-find over vertex positions.
struct Dsu {
  std::vector<int> parent;
  explicit Dsu(std::size_t n) : parent(n) {
    for (std::size_t i = 0; i < n; ++i) parent[i] = static_cast<int>(i);
  }
  int find(int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

std::vector<std::vector<VertexId>> weakly_connected_components(const Graph& g) {
  const auto& vs = g.vertices();
  std::unordered_map<VertexId, int> pos;
  pos.reserve(vs.size());
  for (std::size_t i = 0; i < vs.size(); ++i) pos[vs[i]] = static_cast<int>(i);
  Dsu dsu(vs.size());
  for (const Edge& e : g.edges()) dsu.unite(pos[e.src], pos[e.dst]);
  std::unordered_map<int, std::vector<VertexId>> comps;
  for (std::size_t i = 0; i < vs.size(); ++i) comps[dsu.find(static_cast<int>(i))].push_back(vs[i]);
  std::vector<std::vector<VertexId>> out;
  out.reserve(comps.size());
  for (auto& [root, members] : comps) out.push_back(std::move(members));
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return out;
}

bool is_weakly_connected(const Graph& g) {
  // empty and single-vertex graphs count as connected
  return weakly_connected_components(g).size() <= 1;
}

}  // namespace kgshield
