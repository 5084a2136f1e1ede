#ifndef KGSHIELD_DISTRIBUTIONS_HPP
#define KGSHIELD_DISTRIBUTIONS_HPP

#include <vector>

#include "kgshield/errors.hpp"
#include "kgshield/rng.hpp"

namespace kgshield {

// Edge-weight sampler p_w. Kde perturbs a random sample with gaussian noise
// and clamps to [0,1].
struct WeightDistribution {
  enum class Kind { Uniform01, EmpiricalKde };
  Kind kind = Kind::Uniform01;
  std::vector<double> samples;
  double bandwidth = 0.0;

  static WeightDistribution uniform01() { return {}; }
  static WeightDistribution empirical_kde(std::vector<double> samples, double bandwidth);

  double sample(Rng& rng) const;
};

// Degree sampler p_in / p_out. Truncation restricts the support to [lo,hi]
// by rejection, falling back to clamping after too many rejects.
struct DegreeDistribution {
  enum class Kind { NegativeBinomial, PointMass };
  Kind kind = Kind::PointMass;
  double r = 1.0, p = 0.5;  // negative binomial parameters
  int value = 1;            // point mass
  int lo = 0, hi = 0;       // truncation support when hi > 0

  static DegreeDistribution negative_binomial(double r, double p);
  static DegreeDistribution point_mass(int v);
  DegreeDistribution truncated(int lo, int hi) const;

  int sample(Rng& rng) const;
};

}  // namespace kgshield

#endif
