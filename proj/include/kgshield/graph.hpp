#ifndef KGSHIELD_GRAPH_HPP
#define KGSHIELD_GRAPH_HPP

#include <cstdint>
#include <filesystem>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "kgshield/errors.hpp"

namespace kgshield {

using VertexId = std::int64_t;
using EdgeId = std::int64_t;

// Ground edge of a weighted labeled directed multigraph. `weight` is
// meaningless when the owning graph is unweighted.
struct Edge {
  EdgeId id;
  VertexId src;
  VertexId dst;
  double weight;
};

// Triple of label, in-degree and out-degree. Degrees count ground edges only.
struct SensitiveAttributes {
  std::string label;
  int in_degree;
  int out_degree;

  // Diversity demands that all three components differ at once.
  friend bool fully_distinct(const SensitiveAttributes& a, const SensitiveAttributes& b) {
    return a.label != b.label && a.in_degree != b.in_degree && a.out_degree != b.out_degree;
  }
};

// Weighted labeled directed multigraph. Parallel edges and self-loops are
// allowed; vertex ids are stable opaque identifiers preserved by induced
// subgraphs and anonymization (they never appear in released files).
class Graph {
 public:
  Graph() = default;
  explicit Graph(bool weighted) : weighted_(weighted) {}

  bool weighted() const { return weighted_; }
  void set_weighted(bool w) { weighted_ = w; }

  VertexId add_vertex(std::string label);          // picks a fresh id
  void add_vertex(VertexId id, std::string label); // id must be fresh
  EdgeId add_edge(VertexId src, VertexId dst, double weight = 0.0);
  void set_edge_weight(EdgeId e, double weight);

  std::size_t vertex_count() const { return verts_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  // Vertex ids in ascending order.
  const std::vector<VertexId>& vertices() const { return verts_; }
  const std::vector<Edge>& edges() const { return edges_; }

  bool has_vertex(VertexId v) const { return index_.count(v) != 0; }
  const Edge& edge(EdgeId e) const;
  bool has_edge_id(EdgeId e) const { return edge_index_.count(e) != 0; }

  const std::string& label(VertexId v) const;
  void set_label(VertexId v, std::string label);
  std::set<std::string> label_universe() const;

  // Edge-id lists, in insertion order.
  const std::vector<EdgeId>& out_edges(VertexId v) const;
  const std::vector<EdgeId>& in_edges(VertexId v) const;

  int in_degree(VertexId v) const { return static_cast<int>(in_edges(v).size()); }
  int out_degree(VertexId v) const { return static_cast<int>(out_edges(v).size()); }
  std::pair<int, int> degrees(VertexId v) const { return {in_degree(v), out_degree(v)}; }

  SensitiveAttributes sensitive_attributes(VertexId v) const;

  // Distinct in-/out-neighbors (self excluded only when the edge set says so).
  std::set<VertexId> out_neighbors(VertexId v) const;
  std::set<VertexId> in_neighbors(VertexId v) const;

  Graph induced_subgraph(const std::vector<VertexId>& x_set) const;
  Graph induced_subgraph(const std::set<VertexId>& x_set) const;

  VertexId max_vertex_id() const { return verts_.empty() ? -1 : verts_.back(); }

 private:
  struct VertexRec {
    std::string label;
    std::vector<EdgeId> out;
    std::vector<EdgeId> in;
  };

  bool weighted_ = true;
  std::vector<VertexId> verts_;  // kept sorted
  std::unordered_map<VertexId, VertexRec> index_;
  std::vector<Edge> edges_;
  std::unordered_map<EdgeId, std::size_t> edge_index_;
  EdgeId next_edge_id_ = 0;
  VertexId next_vertex_id_ = 0;

  const VertexRec& rec(VertexId v) const;
};

bool is_weakly_connected(const Graph& g);
std::vector<std::vector<VertexId>> weakly_connected_components(const Graph& g);

// Edge-CSV I/O: header "src,dst,weight" (weight column optional), src/dst are
// label strings unique per vertex. An optional node file "id,label" carries
// isolated vertices. Canonical save order sorts edges by
// (src, dst, weight, insertion index).
Graph load_graph(const std::filesystem::path& edge_file,
                 const std::filesystem::path& node_file = {});
void save_graph(const Graph& g, const std::filesystem::path& edge_file,
                const std::filesystem::path& node_file = {});

}  // namespace kgshield

#endif
