#ifndef KGSHIELD_METRICS_HPP
#define KGSHIELD_METRICS_HPP

#include <optional>
#include <string>

#include "kgshield/anonymize.hpp"

namespace kgshield {

// Eq.-style utility losses. Answers of the released graph are mapped back to
// original vertices through identity_map; synthetic answers count as
// released-only. Zero-denominator terms contribute 0.
double utility_u(const Graph& g, RuleProgram sigma, const AnonymizationResult& a,
                 const std::vector<Query>& queries);
double utility_sym(const Graph& g, RuleProgram sigma, const AnonymizationResult& a,
                   const std::vector<Query>& queries);

// Symmetric loss with identity correspondence on shared vertex ids, for
// intermediate graphs that still reuse g's ids (weight noising trials).
double utility_sym_ids(const Graph& g, RuleProgram sigma, const Graph& a,
                       const std::vector<Query>& queries);

// W1 between empirical distributions: mean absolute difference of the sorted
// samples, resampled on a common quantile grid when sizes differ.
double wasserstein1(std::vector<double> a, std::vector<double> b);

// 100 * (|V(A)| - |V(G)|) / |V(G)|
double nodes_overhead(const Graph& g, const AnonymizationResult& a);

struct VerificationItem {
  bool pass = true;
  std::string detail;
};

struct VerificationReport {
  VerificationItem augmentation;    // item 1
  VerificationItem label_disjoint;  // item 2
  VerificationItem weights_differ;  // item 3
  VerificationItem families;        // item 4
  std::size_t nags_checked = 0;
  std::size_t nags_failed = 0;

  bool pass() const {
    return augmentation.pass && label_disjoint.pass && weights_differ.pass && families.pass;
  }
};

VerificationReport verify_kx_anonymisation(const Graph& g, const AnonymizationResult& a,
                                           RuleProgram sigma, int k, int x, int workers = 1);

// Fraction of size-x weakly connected original subgraphs admitting k-1
// disjoint KG-isomorphic diverse partners in the released graph (the same
// per-NAG check the verifier uses). `sample` switches to estimation over
// uniformly drawn NAGs.
double delta_anonymity(const Graph& g, const AnonymizationResult& a, RuleProgram sigma, int k,
                       int x, int workers = 1, std::optional<int> sample = std::nullopt,
                       std::uint64_t seed = 0);

struct MetricsReport {
  std::optional<double> utility_u;
  std::optional<double> utility_sym;
  std::optional<double> w1_degree;
  std::optional<double> w1_weight;
  std::optional<double> nodes_overhead_pct;
  std::optional<double> delta_anonymity;
  std::optional<bool> augmentation_intact;
  std::optional<int> sampled;

  std::string to_json() const;  // numbers, or "n/a" for absent fields
};

}  // namespace kgshield

#endif
