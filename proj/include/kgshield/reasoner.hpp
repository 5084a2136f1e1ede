#ifndef KGSHIELD_REASONER_HPP
#define KGSHIELD_REASONER_HPP

#include <set>
#include <utility>
#include <vector>

#include "kgshield/graph.hpp"

namespace kgshield {

// Built-in rule programs. There is no general rule language: the registry is
// fixed to these fixpoint procedures.
enum class RuleProgram { None, Reachability, Control, UltimateController };

RuleProgram rule_program_from_name(const std::string& name);
std::string rule_program_name(RuleProgram p);

using DerivedPair = std::pair<VertexId, VertexId>;

// A graph together with the derived edges its rule program produces. Derived
// pairs form a simple, weight-0 layer; reflexive pairs are never emitted.
struct ReasonedGraph {
  Graph ground;
  RuleProgram program = RuleProgram::None;
  std::set<DerivedPair> derived;
};

// Pairs (x,y), x != y, joined by a directed path of positive-weight edges
// (all edges count when the graph is unweighted).
std::set<DerivedPair> reach_closure(const Graph& g);

// Company control: the least fixpoint per source x of "add z when the
// ownership of z held by x's controlled set sums above 0.5". Reflexive facts
// are kept internal and never emitted.
std::set<DerivedPair> control_closure(const Graph& g, int workers = 1);

// Control pairs whose source is itself controlled by nobody.
std::set<DerivedPair> ultimate_controller(const Graph& g, int workers = 1);

ReasonedGraph reason(const Graph& g, RuleProgram sigma, int workers = 1);

struct Query {
  enum class Kind { TwoOwns, TwoQOwns, HoldingK };
  Kind kind = Kind::TwoOwns;
  double q = 0.0;  // TwoQOwns threshold
  int K = 1;       // HoldingK bound

  static Query two_owns() { return {Kind::TwoOwns, 0.0, 1}; }
  static Query two_q_owns(double q) { return {Kind::TwoQOwns, q, 1}; }
  static Query holding(int K) { return {Kind::HoldingK, 0.0, K}; }
};

Query query_from_spec(const std::string& spec);  // "two-owns" | "two-q-owns:0.5" | "holding:2"
std::string query_spec(const Query& q);

std::set<VertexId> evaluate_query(const ReasonedGraph& rg, const Query& q);

}  // namespace kgshield

#endif
