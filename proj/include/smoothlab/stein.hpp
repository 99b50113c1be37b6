#ifndef SMOOTHLAB_STEIN_HPP_
#define SMOOTHLAB_STEIN_HPP_

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "smoothlab/dickman.hpp"
#include "smoothlab/prime_tables.hpp"
#include "smoothlab/random.hpp"
#include "smoothlab/samplers.hpp"

namespace smoothlab {

// Explicit part of the Dickman-Stein solution for h = 1[0, z]:
//   f(x) = min(1, z/x) - P[D <= z].
struct SteinF1 {
  double z;
  double dickman_cdf_at_z;

  static SteinF1 from_table(const DickmanTable& table, double z);  // z > 0
  double operator()(double x) const;                                // x > 0
};

inline double f1z_eval(const SteinF1& f, double x) { return f(x); }

struct MeanEstimate {
  double mean = 0.0;
  double ci = 0.0;  // 3 standard errors
  std::size_t count = 0;
};
MeanEstimate estimate_mean(std::span<const double> values);

// Monte Carlo estimate of E[D f(D)] - E[f(D + U)], U uniform(0,1) independent
// of D, using paired draws. Requires count >= 1e5.
MeanEstimate bias_transform_residual(const DickmanTable& table,
                                     const std::function<double(double)>& f,
                                     std::uint64_t count, const RandomSource& rng,
                                     DickmanMethod method = DickmanMethod::kQuantile);

struct SizeBiasResult {
  double lhs = 0.0;  // E[xi f(xi)]
  double rhs = 0.0;  // theta / (1 - theta) E[f(xi + xi' + 1)]
  int truncation = 0;
};

// Smallest T with theta^{T+1} < 1e-14.
int size_bias_truncation(double theta);

// Both sides by exact summation over k <= truncation; the law of xi + xi' is
// the explicit convolution of the truncated pmfs. truncation = 0 picks
// size_bias_truncation(theta).
SizeBiasResult size_bias_check(double theta, const std::function<double(std::int64_t)>& f,
                               int truncation = 0);

// Law of V_m: atoms log(q)/lambda_m with mass log(q)/(q lambda_m), q <= m.
class VmDistribution {
 public:
  // Needs a prime above m in the table for the last interval endpoint.
  VmDistribution(const PrimeTable& table, std::uint64_t m);

  std::uint64_t m() const { return m_; }
  double lambda() const { return lambda_; }
  std::span<const std::uint64_t> primes() const { return primes_; }
  std::span<const double> values() const { return values_; }
  std::span<const double> masses() const { return masses_; }
  std::span<const double> cumulative() const { return cumulative_; }
  // a_p = sum_{q <= p} log(q)/(q lambda_m); b_p = a_p + log(p+)/(p+ lambda_m),
  // p+ the next prime after p.
  std::span<const double> interval_start() const { return a_; }
  std::span<const double> interval_end() const { return b_; }

 private:
  std::uint64_t m_;
  double lambda_;
  std::vector<std::uint64_t> primes_;
  std::vector<double> values_, masses_, cumulative_, a_, b_;
};

// Left inverse of the V_m distribution function, 0 <= u < 1.
double vm_quantile(const VmDistribution& dist, double u);

// max_p log(p) lambda_m max(|a_p - log p/lambda_m|, |b_p - log p/lambda_m|).
// A single atom (m = 2) has no neighbouring interval; returns 0.
double coupling_gap(const VmDistribution& dist);

// Coupling (F^{-1}(U), U) measured on the quantile function itself:
// max over atoms of |log(p)/lambda_m - midpoint of the u-interval mapped to p|.
double quantile_coupling_gap(const VmDistribution& dist);

}  // namespace smoothlab

#endif  // SMOOTHLAB_STEIN_HPP_
