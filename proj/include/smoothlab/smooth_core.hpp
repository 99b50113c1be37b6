#ifndef SMOOTHLAB_SMOOTH_CORE_HPP_
#define SMOOTHLAB_SMOOTH_CORE_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "smoothlab/dickman.hpp"
#include "smoothlab/prime_tables.hpp"

namespace smoothlab {

inline constexpr std::uint64_t kMaxSieveLimit = 100'000'000;
inline constexpr std::uint64_t kDefaultExactCap = 100'000'000;

// Largest-prime-factor table on [1, n]; lpf(1) = 1 so that 1 counts as
// m-smooth for every m >= 1.
class LpfSieve {
 public:
  static LpfSieve build(std::uint64_t n, std::uint64_t max_n = kMaxSieveLimit);

  std::uint64_t limit() const { return n_; }
  std::uint32_t lpf(std::uint64_t k) const { return lpf_[k]; }
  std::span<const std::uint32_t> values() const { return lpf_; }

 private:
  std::uint64_t n_ = 0;
  std::vector<std::uint32_t> lpf_;  // index 0 unused
};

inline LpfSieve build_lpf_sieve(std::uint64_t n) { return LpfSieve::build(n); }

// A (n, m) pair with the smoothness parameter upsilon = log n / log m.
struct SmoothQuery {
  std::uint64_t n;
  std::uint64_t m;

  SmoothQuery(std::uint64_t n_, std::uint64_t m_);  // UsageError unless n, m >= 2
  double upsilon() const;
};

// Psi(n, m) = #{k <= n : lpf(k) <= m}, counting k = 1.
std::uint64_t psi_count(const LpfSieve& sieve, std::uint64_t n, std::uint64_t m);

// sum_{k <= n, lpf(k) <= m} 1/k (compensated).
double harmonic_smooth_sum(const LpfSieve& sieve, std::uint64_t n, std::uint64_t m);

// Harmonic smooth sums for a single n and every smoothness threshold at once.
// Entry i of `sums` is the sum over k <= n with lpf(k) <= thresholds[i].
struct SmoothProfile {
  std::uint64_t n = 0;
  std::vector<std::uint64_t> thresholds;  // 1 followed by the primes <= n
  std::vector<double> sums;
  std::vector<std::uint64_t> counts;

  // Value for an arbitrary m >= 1 (clamped to the largest threshold <= m).
  double sum_for(std::uint64_t m) const;
  std::uint64_t count_for(std::uint64_t m) const;
};
SmoothProfile smooth_profile(const LpfSieve& sieve, std::uint64_t n);

// P[psi(H_n) <= m] = harmonic_smooth_sum(n, m) / L_n.
double psi_h_prob_exact(const LpfSieve& sieve, const SmoothQuery& q);

struct ApproxValue {
  double value = 0.0;
  double upsilon = 0.0;
  bool saturated = false;  // upsilon > u_max; I[rho](u_max) was used
};

// with_gamma: (e^{-gamma}/upsilon) I[rho](upsilon); otherwise
// (1/upsilon) I[rho](upsilon). Requires n >= m >= 2.
ApproxValue psi_h_prob_approx(const DickmanTable& table, const SmoothQuery& q, bool with_gamma);

// Exact CDF of S_m = Z_m / lambda_m, with Z_m = sum_{p<=m} log(p) xi_p and
// xi_p independent geometric with P[xi_p = k] = (1 - 1/p) p^{-k}.
//
// P[prod p^{xi_p} = k] = I_m / k for every m-smooth k, so
//   P[S_m <= z] = I_m * sum_{k m-smooth, log k <= z lambda_m} 1/k.
// The smooth k are enumerated depth-first over prime-exponent vectors (primes
// taken in decreasing order, pruned by the integer bound). The boundary uses
// log k <= z lambda_m + 1e-12, i.e. the slack can only admit k, never drop it.
class SmCdfExact {
 public:
  SmCdfExact(const PrimeTable& table, std::uint64_t m, std::uint64_t cap = kDefaultExactCap);

  std::uint64_t m() const { return m_; }
  double lambda() const { return lambda_; }
  double euler_product() const { return euler_; }

  // Largest integer k with log k <= z lambda_m + slack.
  std::uint64_t bound_for(double z) const;
  bool feasible(double z) const;

  // Throws InfeasibleExact when the bound for z exceeds the cap.
  double cdf(double z) const;
  // One enumeration shared by all z (any order).
  std::vector<double> cdf(std::span<const double> zs) const;
  // sum of 1/k over m-smooth k <= bound, for each bound; no cap check beyond
  // the enumeration itself.
  std::vector<double> smooth_reciprocal_sums(std::span<const std::uint64_t> bounds) const;

 private:
  std::vector<std::uint64_t> primes_;  // primes <= m, ascending
  std::uint64_t m_;
  std::uint64_t cap_;
  double lambda_;
  double euler_;
};

inline double s_m_cdf_exact(const PrimeTable& table, std::uint64_t m, double z,
                            std::uint64_t cap = kDefaultExactCap) {
  return SmCdfExact(table, m, cap).cdf(z);
}

}  // namespace smoothlab

#endif  // SMOOTHLAB_SMOOTH_CORE_HPP_
