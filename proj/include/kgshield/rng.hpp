#ifndef KGSHIELD_RNG_HPP
#define KGSHIELD_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace kgshield {

// Seeded random stream. Sub-streams are derived with a splitmix64 hash of
// (seed, stream index) so that parallel units draw independent, reproducible
// randomness regardless of scheduling.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(mix(seed)) {}

  static std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    return mix(seed) ^ mix(stream * 0x9e3779b97f4a7c15ULL + 0x5851f42d4c957f2dULL);
  }

  static Rng derive(std::uint64_t seed, std::uint64_t stream) {
    return Rng(derive_seed(seed, stream));
  }

  std::uint64_t next() { return eng_(); }

  // uniform in [0,1)
  double uniform01() { return std::ldexp(static_cast<double>(eng_() >> 11), -53); }

  // uniform in {0,...,n-1}
  std::uint64_t below(std::uint64_t n) {
    // rejection to avoid modulo bias
    std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v;
    do {
      v = eng_();
    } while (v >= limit);
    return v % n;
  }

  int uniform_int(int lo, int hi) {  // inclusive bounds
    return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo + 1)));
  }

  double normal(double mu, double sigma) {
    std::normal_distribution<double> d(mu, sigma);
    return d(eng_);
  }

  double gamma(double shape, double scale) {
    std::gamma_distribution<double> d(shape, scale);
    return d(eng_);
  }

  long poisson(double mean) {
    std::poisson_distribution<long> d(mean);
    return d(eng_);
  }

  // k distinct indices from {0,...,n-1}, in random order
  std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k);

  std::mt19937_64& engine() { return eng_; }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::mt19937_64 eng_;
};

}  // namespace kgshield

#endif
