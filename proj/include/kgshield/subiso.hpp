#ifndef KGSHIELD_SUBISO_HPP
#define KGSHIELD_SUBISO_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "kgshield/reasoner.hpp"

namespace kgshield {

// Vertex bijection witnessing a KG-isomorphism.
using IsoMap = std::map<VertexId, VertexId>;

// Compact two-layer view of an induced subgraph: ground-edge multiplicities
// and the derived edges obtained by reasoning on the subgraph in isolation.
struct HandleKG {
  std::vector<VertexId> verts;        // sorted
  int size = 0;
  std::vector<std::uint16_t> ground;  // size*size multiplicity matrix, row-major
  std::vector<std::uint8_t> derived;  // size*size 0/1 matrix (diagonal always 0)
  std::uint64_t invariant = 0;        // iso-invariant hash, used to prune matching

  std::uint16_t g_at(int i, int j) const { return ground[i * size + j]; }
  std::uint8_t d_at(int i, int j) const { return derived[i * size + j]; }
};

// Builds the handle for g[verts] with subgraph-local reasoning sigma.
HandleKG make_handle(const Graph& g, const std::vector<VertexId>& verts, RuleProgram sigma);

// Builds a handle over an entire reasoned graph (layers taken as given).
HandleKG make_handle(const ReasonedGraph& rg);

// Permutation p with a.verts[i] ~ b.verts[p[i]] preserving both layers, or
// nothing. Layers only: labels and weights are not matched.
std::optional<std::vector<int>> find_isomorphism(const HandleKG& a, const HandleKG& b);

// Visits every layer-preserving bijection; stop early by returning false.
void enumerate_isomorphisms(const HandleKG& a, const HandleKG& b,
                            const std::function<bool(const std::vector<int>&)>& visit);

std::optional<IsoMap> kg_isomorphic(const ReasonedGraph& a, const ReasonedGraph& b);

// All vertex sets of size x inducing a weakly connected subgraph, as sorted
// sets in canonical (lexicographic) order.
std::vector<std::vector<VertexId>> enumerate_connected_induced_subgraphs(const Graph& g, int x);

// Streaming form; the callback sees each set (sorted) exactly once. With
// workers > 1 anchors are partitioned across threads and the callback must be
// thread-safe; emission order is then unspecified.
void for_each_connected_induced_subgraph(const Graph& g, int x,
                                         const std::function<void(const std::vector<VertexId>&)>& emit,
                                         int workers = 1);

// Equivalence classes of KG-isomorphic handles. Buckets keep input order;
// each handle stores the witnessing permutation onto its bucket
// representative (the bucket's first member).
struct BucketSet {
  std::vector<std::vector<int>> buckets;      // handle indices
  std::vector<int> bucket_of;                 // handle -> bucket index
  std::vector<std::vector<int>> map_to_rep;   // handle -> permutation onto representative
};

BucketSet isomorphism_bucketing(const std::vector<HandleKG>& handles);

// Finest partition of `pool` closed under the witnessed maps: u,v share a
// class iff a composition of bucket maps relates them. Classes are returned
// sorted by smallest member.
std::vector<std::vector<VertexId>> isomorphism_partitioning(const std::vector<VertexId>& pool,
                                                            const std::vector<HandleKG>& handles,
                                                            const BucketSet& buckets);

}  // namespace kgshield

#endif
