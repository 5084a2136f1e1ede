#ifndef KGSHIELD_GENERATORS_HPP
#define KGSHIELD_GENERATORS_HPP

#include <cstdint>
#include <optional>

#include "kgshield/graph.hpp"

namespace kgshield {

enum class WeightMode { None, Uniform01, EconomicNormalized };

// Directed G(n,m): m distinct ordered pairs sampled uniformly among the n^2
// possible ones (self-loops included unless disabled). Default m is
// round(n ln n / 2), the weak-connectivity threshold.
Graph erdos_renyi_directed(int n, std::optional<long> m, std::uint64_t seed,
                           bool self_loops = true);

// Out-degree of each vertex drawn with probability proportional to d^(-alpha)
// on {1,...,n-1}; out-neighbors sampled uniformly among the other vertices.
Graph scale_free(int n, double alpha, std::uint64_t seed);

// Power-law pmf value P(d) for the scale-free generator, for tests.
double scale_free_pmf(int d, int n, double alpha);

// Returns a weighted copy of g. EconomicNormalized rescales each vertex's
// incoming weights so their sum stays within 1.
Graph assign_weights(const Graph& g, WeightMode mode, std::uint64_t seed);

}  // namespace kgshield

#endif
