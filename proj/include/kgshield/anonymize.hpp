#ifndef KGSHIELD_ANONYMIZE_HPP
#define KGSHIELD_ANONYMIZE_HPP

#include <map>
#include <set>
#include <string>

#include "kgshield/distributions.hpp"
#include "kgshield/reasoner.hpp"

namespace kgshield {

struct AnonymizationParams {
  int k = 2;
  int x = 1;  // kguard only
  std::vector<Query> query_set;
  WeightDistribution weight_dist;
  DegreeDistribution in_degree_dist = DegreeDistribution::point_mass(1);
  DegreeDistribution out_degree_dist = DegreeDistribution::point_mass(1);
  std::string fresh_label_prefix = "n";
  int M = 10;
  std::uint64_t seed = 0;
  int workers = 1;
};

struct AnonymizationResult {
  Graph released;
  // original vertex -> released vertex; never written to the released file
  std::map<VertexId, VertexId> identity_map;
  std::set<EdgeId> synthetic_edges;
  std::set<VertexId> synthetic_vertices;
  // klone: 1-based copy index of every copy vertex; kguard: clone tag
  std::map<VertexId, int> copy_of;
  // synthetic helpers that carry no degree guarantee (safe bridge endpoints)
  std::set<VertexId> unconstrained_vertices;
  bool augmentation_intact = true;
};

// Labels "<prefix><i>" guaranteed disjoint from the input universe: the
// prefix is extended until no input label starts with it.
class FreshLabels {
 public:
  FreshLabels(const std::set<std::string>& taken, std::string prefix);
  std::string next();

 private:
  std::string prefix_;
  long counter_ = 0;
};

// Alg.: resample the weights of edge_subset m times and keep the candidate
// with the lowest symmetric utility loss against g (ties -> lowest trial).
// Weights of edges shared with g are forced to strictly differ from g's.
Graph weight_noising(const Graph& a, const Graph& g, RuleProgram sigma,
                     const std::set<EdgeId>& edge_subset, const std::vector<Query>& queries,
                     const WeightDistribution& p_w, int m, std::uint64_t seed, int workers = 1);

enum class Direction { In, Out };

// Assigns pairwise distinct degrees to `vertices`: the first keeps its
// current degree, later ones grow via max(cur+1, z~p) until distinct. Every
// output is >= the vertex's current degree.
std::vector<int> choose_deg(const Graph& a, Direction dir, const DegreeDistribution& p,
                            const std::vector<VertexId>& vertices, std::uint64_t seed);

AnonymizationResult klone(const Graph& g, RuleProgram sigma, const AnonymizationParams& params);
AnonymizationResult kguard(const Graph& g, RuleProgram sigma, const AnonymizationParams& params);

enum class Algo { Klone, Kguard };

// Recursively bisects g (Kernighan-Lin style), anonymizes the parts
// independently and merges with synthetic bridges. Cut-set edges are dropped
// from the release, so augmentation_intact is false whenever a cut was made.
AnonymizationResult split_and_merge(const Graph& g, RuleProgram sigma,
                                    const AnonymizationParams& params, Algo algo,
                                    int max_component);

// Balanced bisection minimizing the (undirected) cut, for split_and_merge.
std::pair<std::vector<VertexId>, std::vector<VertexId>> kl_bisect(const Graph& g,
                                                                  std::uint64_t seed);

}  // namespace kgshield

#endif
