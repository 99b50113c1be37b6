#ifndef SMOOTHLAB_DISTANCE_HPP_
#define SMOOTHLAB_DISTANCE_HPP_

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "smoothlab/prime_tables.hpp"

namespace smoothlab {

// Right-continuous empirical CDF.
class Ecdf {
 public:
  explicit Ecdf(std::vector<double> samples);
  std::size_t size() const { return sorted_.size(); }
  std::span<const double> values() const { return sorted_; }
  double operator()(double x) const;  // #{x_i <= x} / N
  double left_limit(double x) const;  // #{x_i < x} / N

 private:
  std::vector<double> sorted_;
};

// Dvoretzky-Kiefer-Wolfowitz half-width sqrt(ln(2/delta) / (2 N)).
double dkw_band(std::size_t count, double delta = 0.01);

struct KolmogorovReport {
  double distance = 0.0;
  double dkw_band = 0.0;  // delta = 0.01
};

// sup_x |F_hat(x) - F(x)| for continuous F, attained at a sample point from
// the right or the left.
KolmogorovReport kolmogorov_distance(const Ecdf& ecdf, const std::function<double(double)>& cdf);

double ks_two_sample_statistic(const Ecdf& a, const Ecdf& b);
// c(alpha) sqrt((n1 + n2) / (n1 n2)), c(alpha) = sqrt(-ln(alpha / 2) / 2).
double ks_two_sample_critical(std::size_t n1, std::size_t n2, double alpha = 0.01);

// Half the l1 distance between two empirical distributions of integer values.
double empirical_tv(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b);

struct TvReport {
  std::uint64_t n = 0;
  double tv = 0.0;
  double bound = 0.0;       // 61 log log n / log n
  double total_mass = 0.0;  // of the assembled H_n Q_n pmf
};

// Exact total variation between the uniform law on [n] and H_n Q_n, where
// given H_n = h, Q_n is uniform on (primes <= n/h) plus {1}.
// Requires 21 <= n <= 1e5 and n <= table.limit().
TvReport tv_uniform_vs_hq(const PrimeTable& table, std::uint64_t n);

}  // namespace smoothlab

#endif  // SMOOTHLAB_DISTANCE_HPP_
