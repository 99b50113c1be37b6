#include "smoothlab/smooth_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "smoothlab/errors.hpp"
#include "smoothlab/numeric.hpp"

namespace smoothlab {

namespace {

constexpr double kBoundarySlack = 1e-12;

void check_query(const LpfSieve& sieve, std::uint64_t n, std::uint64_t m, const char* what) {
  if (m < 1) throw UsageError(std::string(what) + ": m must be >= 1");
  if (n > sieve.limit()) {
    throw RangeError(std::string(what) + ": n = " + std::to_string(n) +
                     " exceeds sieve limit " + std::to_string(sieve.limit()));
  }
}

}  // namespace

LpfSieve LpfSieve::build(std::uint64_t n, std::uint64_t max_n) {
  if (n < 2 || n > max_n) {
    throw UsageError("lpf sieve limit must lie in [2, " + std::to_string(max_n) + "]");
  }
  LpfSieve s;
  s.n_ = n;
  s.lpf_.assign(n + 1, 0);
  s.lpf_[1] = 1;
  // Primes in increasing order overwrite earlier marks, so each entry ends up
  // holding its largest prime factor.
  for (std::uint64_t p = 2; p <= n; ++p) {
    if (s.lpf_[p] != 0) continue;
    const auto tag = static_cast<std::uint32_t>(p);
    for (std::uint64_t j = p; j <= n; j += p) s.lpf_[j] = tag;
  }
  return s;
}

SmoothQuery::SmoothQuery(std::uint64_t n_, std::uint64_t m_) : n(n_), m(m_) {
  if (n < 2 || m < 2) throw UsageError("smooth query requires n >= 2 and m >= 2");
}

double SmoothQuery::upsilon() const {
  return std::log(static_cast<double>(n)) / std::log(static_cast<double>(m));
}

std::uint64_t psi_count(const LpfSieve& sieve, std::uint64_t n, std::uint64_t m) {
  check_query(sieve, n, m, "psi_count");
  if (m >= n) return n;
  const auto v = sieve.values();
  std::uint64_t count = 0;
  for (std::uint64_t k = 1; k <= n; ++k) count += (v[k] <= m);
  return count;
}

double harmonic_smooth_sum(const LpfSieve& sieve, std::uint64_t n, std::uint64_t m) {
  check_query(sieve, n, m, "harmonic_smooth_sum");
  const auto v = sieve.values();
  CompensatedSum s;
  for (std::uint64_t k = n; k >= 1; --k) {
    if (v[k] <= m) s += 1.0 / static_cast<double>(k);
  }
  return s.value();
}

SmoothProfile smooth_profile(const LpfSieve& sieve, std::uint64_t n) {
  check_query(sieve, n, 1, "smooth_profile");
  const auto v = sieve.values();
  std::vector<CompensatedSum> by_lpf(n + 1);
  std::vector<std::uint64_t> count_by_lpf(n + 1, 0);
  for (std::uint64_t k = n; k >= 1; --k) {
    by_lpf[v[k]] += 1.0 / static_cast<double>(k);
    ++count_by_lpf[v[k]];
  }
  SmoothProfile prof;
  prof.n = n;
  CompensatedSum running;
  std::uint64_t running_count = 0;
  for (std::uint64_t q = 1; q <= n; ++q) {
    // q = 1 or q prime are exactly the values an lpf entry can take.
    if (q != 1 && v[q] != q) continue;
    running += by_lpf[q];
    running_count += count_by_lpf[q];
    prof.thresholds.push_back(q);
    prof.sums.push_back(running.value());
    prof.counts.push_back(running_count);
  }
  return prof;
}

double SmoothProfile::sum_for(std::uint64_t m) const {
  if (m < 1) throw UsageError("smooth profile: m must be >= 1");
  auto it = std::upper_bound(thresholds.begin(), thresholds.end(), m);
  return sums[static_cast<std::size_t>(it - thresholds.begin()) - 1];
}

std::uint64_t SmoothProfile::count_for(std::uint64_t m) const {
  if (m < 1) throw UsageError("smooth profile: m must be >= 1");
  auto it = std::upper_bound(thresholds.begin(), thresholds.end(), m);
  return counts[static_cast<std::size_t>(it - thresholds.begin()) - 1];
}

double psi_h_prob_exact(const LpfSieve& sieve, const SmoothQuery& q) {
  return harmonic_smooth_sum(sieve, q.n, q.m) / harmonic(q.n);
}

ApproxValue psi_h_prob_approx(const DickmanTable& table, const SmoothQuery& q, bool with_gamma) {
  if (q.m > q.n) throw UsageError("psi_h_prob_approx: requires n >= m");
  ApproxValue out;
  out.upsilon = q.upsilon();
  double x = out.upsilon;
  if (x > table.u_max()) {
    x = table.u_max();
    out.saturated = true;
  }
  out.value = table.integral(x) / out.upsilon;
  if (with_gamma) out.value *= kExpMinusGamma;
  return out;
}

SmCdfExact::SmCdfExact(const PrimeTable& table, std::uint64_t m, std::uint64_t cap)
    : m_(m), cap_(cap) {
  if (m < 2) throw UsageError("s_m_cdf_exact: m must be >= 2");
  const std::size_t count = table.count_upto(m);
  auto primes = table.primes();
  primes_.assign(primes.begin(), primes.begin() + static_cast<std::ptrdiff_t>(count));
  lambda_ = table.lambda(m);
  euler_ = table.euler_product(m);
}

std::uint64_t SmCdfExact::bound_for(double z) const {
  const double t = z * lambda_ + kBoundarySlack;
  if (t < 0.0) return 0;
  if (t > 43.0) return std::numeric_limits<std::uint64_t>::max();  // beyond 2^62
  auto b = static_cast<std::uint64_t>(std::floor(std::exp(t)));
  while (std::log(static_cast<double>(b + 1)) <= t) ++b;
  while (b > 0 && std::log(static_cast<double>(b)) > t) --b;
  return b;
}

bool SmCdfExact::feasible(double z) const { return bound_for(z) <= cap_; }

std::vector<double> SmCdfExact::smooth_reciprocal_sums(
    std::span<const std::uint64_t> bounds) const {
  std::vector<std::uint64_t> sorted(bounds.begin(), bounds.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::vector<double> out(bounds.size(), 0.0);
  if (sorted.empty() || sorted.back() == 0) return out;

  const std::uint64_t top = sorted.back();
  std::vector<CompensatedSum> bucket(sorted.size());
  auto record = [&](std::uint64_t k) {
    auto it = std::lower_bound(sorted.begin(), sorted.end(), k);
    bucket[static_cast<std::size_t>(it - sorted.begin())] += 1.0 / static_cast<double>(k);
  };
  // k carries prime factors no larger than primes_[max_idx]; extend with
  // primes <= that one so every smooth k is produced exactly once.
  auto dfs = [&](auto&& self, std::uint64_t k, std::size_t max_idx) -> void {
    record(k);
    const std::uint64_t room = top / k;
    auto end = std::upper_bound(primes_.begin(),
                                primes_.begin() + static_cast<std::ptrdiff_t>(max_idx) + 1, room);
    for (auto it = end; it != primes_.begin();) {
      --it;
      self(self, k * *it, static_cast<std::size_t>(it - primes_.begin()));
    }
  };
  dfs(dfs, 1, primes_.size() - 1);

  std::vector<double> cumulative(sorted.size());
  CompensatedSum running;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    running += bucket[i];
    cumulative[i] = running.value();
  }
  for (std::size_t i = 0; i < bounds.size(); ++i) {
    if (bounds[i] == 0) continue;
    auto it = std::lower_bound(sorted.begin(), sorted.end(), bounds[i]);
    out[i] = cumulative[static_cast<std::size_t>(it - sorted.begin())];
  }
  return out;
}

std::vector<double> SmCdfExact::cdf(std::span<const double> zs) const {
  std::vector<std::uint64_t> bounds(zs.size());
  for (std::size_t i = 0; i < zs.size(); ++i) {
    bounds[i] = bound_for(zs[i]);
    if (bounds[i] > cap_) {
      throw InfeasibleExact("s_m_cdf_exact: bound exp(z lambda_m) exceeds cap " +
                                std::to_string(cap_),
                            std::exp(zs[i] * lambda_));
    }
  }
  auto sums = smooth_reciprocal_sums(bounds);
  for (double& s : sums) s *= euler_;
  return sums;
}

double SmCdfExact::cdf(double z) const {
  const double zs[1] = {z};
  return cdf(std::span<const double>(zs, 1))[0];
}

}  // namespace smoothlab
