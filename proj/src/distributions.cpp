#include "kgshield/distributions.hpp"

#include <algorithm>
#include <cmath>

namespace kgshield {

WeightDistribution WeightDistribution::empirical_kde(std::vector<double> samples,
                                                     double bandwidth) {
  if (samples.empty()) throw InvalidParameter("kde needs at least one sample");
  for (double s : samples)
    if (!(s >= 0.0 && s <= 1.0)) throw InvalidParameter("kde samples must lie in [0,1]");
  if (bandwidth < 0.0) throw InvalidParameter("kde bandwidth must be nonnegative");
  WeightDistribution d;
  d.kind = Kind::EmpiricalKde;
  d.samples = std::move(samples);
  d.bandwidth = bandwidth;
  return d;
}

double WeightDistribution::sample(Rng& rng) const {
  if (kind == Kind::Uniform01) return rng.uniform01();
  double base = samples[rng.below(samples.size())];
  double w = base + (bandwidth > 0.0 ? rng.normal(0.0, bandwidth) : 0.0);
  return std::clamp(w, 0.0, 1.0);
}

DegreeDistribution DegreeDistribution::negative_binomial(double r, double p) {
  if (r <= 0.0 || p <= 0.0 || p >= 1.0)
    throw InvalidParameter("negative binomial needs r > 0 and p in (0,1)");
  DegreeDistribution d;
  d.kind = Kind::NegativeBinomial;
  d.r = r;
  d.p = p;
  return d;
}

DegreeDistribution DegreeDistribution::point_mass(int v) {
  DegreeDistribution d;
  d.kind = Kind::PointMass;
  d.value = v;
  return d;
}

DegreeDistribution DegreeDistribution::truncated(int lo_, int hi_) const {
  if (lo_ > hi_) throw InvalidParameter("empty truncation support");
  DegreeDistribution d = *this;
  d.lo = lo_;
  d.hi = hi_;
  return d;
}

int DegreeDistribution::sample(Rng& rng) const {
  auto draw = [&]() -> int {
    if (kind == Kind::PointMass) return value;
    // gamma-poisson mixture so r need not be integral
    double lambda = rng.gamma(r, (1.0 - p) / p);
    return static_cast<int>(rng.poisson(lambda));
  };
  if (hi <= 0) return draw();
  for (int attempt = 0; attempt < 1000; ++attempt) {
    int v = draw();
    if (v >= lo && v <= hi) return v;
  }
  return std::clamp(draw(), lo, hi);
}

}  // namespace kgshield
