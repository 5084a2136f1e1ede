// Serial vs parallel timing for the hot kernels: rule closure, subgraph
// enumeration and weight noising.
#include <chrono>
#include <cstdlib>
#include <iostream>
#include <mutex>

#include "kgshield/anonymize.hpp"
#include "kgshield/generators.hpp"
#include "kgshield/subiso.hpp"

using namespace kgshield;
using Clock = std::chrono::steady_clock;

namespace {

template <class F>
double time_s(F&& f) {
  auto t0 = Clock::now();
  f();
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void report(const char* name, double serial, double parallel, int workers) {
  std::cout << name << ": serial " << serial << "s, " << workers << " workers " << parallel
            << "s (speedup " << (parallel > 0 ? serial / parallel : 0.0) << "x)\n";
}

}  // namespace

int main(int argc, char** argv) {
  int n = argc > 1 ? std::atoi(argv[1]) : 400;
  int workers = argc > 2 ? std::atoi(argv[2]) : 4;
  std::uint64_t seed = 7;

  Graph g = assign_weights(erdos_renyi_directed(n, std::nullopt, seed), WeightMode::Uniform01,
                           seed + 1);
  std::cout << "graph: n=" << g.vertex_count() << " m=" << g.edge_count() << "\n";

  std::set<DerivedPair> c1, c2;
  report("control closure", time_s([&] { c1 = control_closure(g, 1); }),
         time_s([&] { c2 = control_closure(g, workers); }), workers);
  if (c1 != c2) {
    std::cerr << "mismatch: control closure differs between serial and parallel\n";
    return 1;
  }

  std::size_t s1 = 0, s2 = 0;
  std::mutex mu;
  double t_enum1 = time_s([&] {
    for_each_connected_induced_subgraph(g, 3, [&](const std::vector<VertexId>&) { ++s1; }, 1);
  });
  double t_enum2 = time_s([&] {
    for_each_connected_induced_subgraph(
        g, 3,
        [&](const std::vector<VertexId>&) {
          std::lock_guard<std::mutex> lock(mu);
          ++s2;
        },
        workers);
  });
  report("x=3 subgraph enumeration", t_enum1, t_enum2, workers);
  if (s1 != s2) {
    std::cerr << "mismatch: enumeration counted " << s1 << " vs " << s2 << "\n";
    return 1;
  }
  std::cout << "  (" << s1 << " subgraphs)\n";

  std::set<EdgeId> all;
  for (const Edge& e : g.edges()) all.insert(e.id);
  std::vector<Query> qs{Query::two_owns(), Query::two_q_owns(0.5)};
  Graph n1, n2;
  report("weight noising (M=20)",
         time_s([&] {
           n1 = weight_noising(g, g, RuleProgram::None, all, qs,
                               WeightDistribution::uniform01(), 20, seed, 1);
         }),
         time_s([&] {
           n2 = weight_noising(g, g, RuleProgram::None, all, qs,
                               WeightDistribution::uniform01(), 20, seed, workers);
         }),
         workers);
  for (const Edge& e : n1.edges())
    if (n2.edge(e.id).weight != e.weight) {
      std::cerr << "mismatch: noising differs between serial and parallel\n";
      return 1;
    }
  std::cout << "all kernels agree between serial and parallel runs\n";
  return 0;
}
