#pragma once

#include <cmath>
#include <cstdint>

#include <Eigen/Core>

namespace bstraight {

// Derives an independent stream seed for sample `index` of a scan.  Scans
// hand each sample its own Rng(mix_seed(seed, index)) so the result of a
// sample never depends on which worker ran it or in what order.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t s = seed ^ (0x632be59bd9b4e019ULL * (index + 1));
  std::uint64_t a = splitmix64(s);
  return splitmix64(s) ^ a;
}

// Small deterministic generator.  Distribution helpers are hand-rolled on
// purpose: output must be reproducible for a fixed seed across toolchains,
// which the standard <random> distributions do not guarantee.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() { return splitmix64(state_); }

  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Box-Muller; the spare is discarded to keep the stream stateless.
  double normal() {
    double u1 = uniform01();
    double u2 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  Eigen::VectorXd normal_vector(int n) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = normal();
    return v;
  }

  Eigen::VectorXd unit_sphere(int n) {
    Eigen::VectorXd v = normal_vector(n);
    double s = v.norm();
    while (s < 1e-12) {
      v = normal_vector(n);
      s = v.norm();
    }
    return v / s;
  }

  // Uniform point of the Euclidean simplex {b_i >= 0, sum b_i = 1}.
  Eigen::VectorXd uniform_simplex(int n) {
    Eigen::VectorXd b(n);
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      double u = uniform01();
      while (u <= 0.0) u = uniform01();
      b[i] = -std::log(u);
      total += b[i];
    }
    return b / total;
  }

 private:
  std::uint64_t state_;
};

// Fixed-shape pairwise summation: the reduction tree depends only on the
// length, so sums are identical no matter how many workers produced the
// buffer.
inline double pairwise_sum(const double* x, std::ptrdiff_t n) {
  if (n <= 16) {
    double s = 0.0;
    for (std::ptrdiff_t i = 0; i < n; ++i) s += x[i];
    return s;
  }
  const std::ptrdiff_t h = n / 2;
  return pairwise_sum(x, h) + pairwise_sum(x + h, n - h);
}

inline double pairwise_sum(const Eigen::VectorXd& x) {
  return pairwise_sum(x.data(), x.size());
}

}  // namespace bstraight
