#include "smoothlab/stein.hpp"

#include <algorithm>
#include <cmath>

#include "smoothlab/errors.hpp"
#include "smoothlab/numeric.hpp"

namespace smoothlab {

SteinF1 SteinF1::from_table(const DickmanTable& table, double z) {
  if (!(z > 0.0)) throw UsageError("stein f1: z must be > 0");
  return {z, table.cdf(z)};
}

double SteinF1::operator()(double x) const {
  if (!(x > 0.0)) throw UsageError("stein f1: x must be > 0");
  return std::min(1.0, z / x) - dickman_cdf_at_z;
}

MeanEstimate estimate_mean(std::span<const double> values) {
  if (values.size() < 2) throw UsageError("estimate_mean: need at least two values");
  CompensatedSum s;
  for (double v : values) s += v;
  const auto n = static_cast<double>(values.size());
  const double mean = s.value() / n;
  CompensatedSum ss;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double var = ss.value() / (n - 1.0);
  return {mean, 3.0 * std::sqrt(var / n), values.size()};
}

MeanEstimate bias_transform_residual(const DickmanTable& table,
                                     const std::function<double(double)>& f,
                                     std::uint64_t count, const RandomSource& rng,
                                     DickmanMethod method) {
  if (count < 100'000) throw UsageError("bias_transform_residual: count must be >= 1e5");
  auto diffs = sample_batch<double>(count, rng, [&](RandomSource& r) {
    const double d = sample_dickman(table, r, method);
    const double u = r.uniform();
    return d * f(d) - f(d + u);
  });
  return estimate_mean(diffs);
}

int size_bias_truncation(double theta) {
  if (!(theta > 0.0 && theta < 1.0)) throw UsageError("size bias: theta must lie in (0, 1)");
  return std::max(1, static_cast<int>(std::ceil(std::log(1e-14) / std::log(theta))));
}

SizeBiasResult size_bias_check(double theta, const std::function<double(std::int64_t)>& f,
                               int truncation) {
  const int t = truncation > 0 ? truncation : size_bias_truncation(theta);
  std::vector<double> pmf(static_cast<std::size_t>(t) + 1);
  for (int k = 0; k <= t; ++k) pmf[k] = (1.0 - theta) * std::pow(theta, k);

  CompensatedSum lhs;
  for (int k = 0; k <= t; ++k) lhs += static_cast<double>(k) * f(k) * pmf[k];

  // pmf of xi + xi' on [0, t], by convolution.
  CompensatedSum rhs;
  for (int s = 0; s <= t; ++s) {
    CompensatedSum conv;
    for (int k = 0; k <= s; ++k) conv += pmf[k] * pmf[s - k];
    rhs += f(s + 1) * conv.value();
  }
  return {lhs.value(), theta / (1.0 - theta) * rhs.value(), t};
}

VmDistribution::VmDistribution(const PrimeTable& table, std::uint64_t m) : m_(m) {
  if (m < 2) throw UsageError("V_m: m must be >= 2");
  lambda_ = table.lambda(m);
  const std::size_t count = table.count_upto(m);
  auto all = table.primes();
  primes_.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(count));
  const std::uint64_t after_last = table.next_prime(primes_.back());

  auto mass_of = [&](std::uint64_t q) {
    const auto x = static_cast<double>(q);
    return std::log(x) / (x * lambda_);
  };
  CompensatedSum running;
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint64_t p = primes_[i];
    values_.push_back(std::log(static_cast<double>(p)) / lambda_);
    masses_.push_back(mass_of(p));
    running += masses_.back();
    cumulative_.push_back(running.value());
    a_.push_back(running.value());
    const std::uint64_t next = (i + 1 < count) ? primes_[i + 1] : after_last;
    b_.push_back(running.value() + mass_of(next));
  }
}

double vm_quantile(const VmDistribution& dist, double u) {
  if (!(u >= 0.0 && u < 1.0)) throw UsageError("vm_quantile: u must lie in [0, 1)");
  const auto c = dist.cumulative();
  auto it = std::lower_bound(c.begin(), c.end(), u);
  std::size_t i = static_cast<std::size_t>(it - c.begin());
  if (i >= c.size()) i = c.size() - 1;  // rounding in the last cumulative
  return dist.values()[i];
}

double coupling_gap(const VmDistribution& dist) {
  if (dist.primes().size() < 2) return 0.0;
  double gap = 0.0;
  for (std::size_t i = 0; i < dist.primes().size(); ++i) {
    const double v = dist.values()[i];
    const double d = std::max(std::fabs(dist.interval_start()[i] - v),
                              std::fabs(dist.interval_end()[i] - v));
    gap = std::max(gap, std::log(static_cast<double>(dist.primes()[i])) * dist.lambda() * d);
  }
  return gap;
}

double quantile_coupling_gap(const VmDistribution& dist) {
  double gap = 0.0, prev = 0.0;
  for (std::size_t i = 0; i < dist.primes().size(); ++i) {
    const double mid = 0.5 * (prev + dist.cumulative()[i]);
    gap = std::max(gap, std::fabs(dist.values()[i] - mid));
    prev = dist.cumulative()[i];
  }
  return gap;
}

}  // namespace smoothlab
