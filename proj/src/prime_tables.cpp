#include "smoothlab/prime_tables.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "smoothlab/errors.hpp"
#include "smoothlab/numeric.hpp"

namespace smoothlab {

namespace {

constexpr std::uint64_t kSegmentBytes = 1 << 18;

std::uint64_t isqrt(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

}  // namespace

std::vector<std::uint64_t> sieve_primes(std::uint64_t limit) {
  std::vector<std::uint64_t> out;
  if (limit < 2) return out;
  const std::uint64_t root = isqrt(limit);

  std::vector<char> small(root + 1, 1);
  std::vector<std::uint64_t> base;
  for (std::uint64_t i = 2; i <= root; ++i) {
    if (!small[i]) continue;
    base.push_back(i);
    for (std::uint64_t j = i * i; j <= root; j += i) small[j] = 0;
  }

  if (limit > 100) {
    out.reserve(static_cast<std::size_t>(1.1 * limit / std::log(static_cast<double>(limit))));
  }
  std::vector<char> seg(kSegmentBytes);
  for (std::uint64_t low = 2; low <= limit; low += kSegmentBytes) {
    const std::uint64_t high = std::min(low + kSegmentBytes - 1, limit);
    std::fill(seg.begin(), seg.end(), 1);
    for (std::uint64_t p : base) {
      if (p * p > high) break;
      std::uint64_t start = std::max(p * p, (low + p - 1) / p * p);
      for (std::uint64_t j = start; j <= high; j += p) seg[j - low] = 0;
    }
    for (std::uint64_t k = low; k <= high; ++k) {
      if (seg[k - low]) out.push_back(k);
    }
  }
  return out;
}

PrimeTable PrimeTable::build(std::uint64_t limit, std::uint64_t max_limit) {
  if (limit < 2 || limit > max_limit) {
    throw UsageError("prime table limit must lie in [2, " + std::to_string(max_limit) +
                     "], got " + std::to_string(limit));
  }
  PrimeTable t;
  t.limit_ = limit;
  t.primes_ = sieve_primes(limit);
  const std::size_t k = t.primes_.size();
  t.prefix_lambda_.resize(k);
  t.prefix_recip_.resize(k);
  t.prefix_log_euler_.resize(k);

  CompensatedSum lam, recip, log_euler;
  for (std::size_t i = 0; i < k; ++i) {
    const auto p = static_cast<double>(t.primes_[i]);
    lam += std::log(p) / p;
    recip += 1.0 / p;
    log_euler += std::log1p(-1.0 / p);
    t.prefix_lambda_[i] = lam.value();
    t.prefix_recip_[i] = recip.value();
    t.prefix_log_euler_[i] = log_euler.value();
  }
  return t;
}

std::size_t PrimeTable::count_upto(std::uint64_t x) const {
  check_range(x, "count_upto");
  return static_cast<std::size_t>(std::upper_bound(primes_.begin(), primes_.end(), x) -
                                  primes_.begin());
}

void PrimeTable::check_range(std::uint64_t m, const char* what) const {
  if (m > limit_) {
    throw RangeError(std::string(what) + ": argument " + std::to_string(m) +
                     " exceeds prime table limit " + std::to_string(limit_));
  }
}

double PrimeTable::lambda(std::uint64_t m) const {
  if (m < 2) throw UsageError("lambda: m must be >= 2");
  return prefix_lambda_[count_upto(m) - 1];
}

double PrimeTable::reciprocal_sum(std::uint64_t m) const {
  if (m < 2) throw UsageError("reciprocal_sum: m must be >= 2");
  return prefix_recip_[count_upto(m) - 1];
}

double PrimeTable::log_euler_product(std::uint64_t m) const {
  if (m < 2) return 0.0;
  return prefix_log_euler_[count_upto(m) - 1];
}

double PrimeTable::euler_product(std::uint64_t m) const {
  return std::exp(log_euler_product(m));
}

std::uint64_t PrimeTable::next_prime(std::uint64_t x) const {
  auto it = std::upper_bound(primes_.begin(), primes_.end(), x);
  if (it == primes_.end()) {
    throw RangeError("next_prime: no prime above " + std::to_string(x) + " within limit " +
                     std::to_string(limit_));
  }
  return *it;
}

std::optional<std::uint64_t> PrimeTable::prime_floor(std::uint64_t x) const {
  auto it = std::upper_bound(primes_.begin(), primes_.end(), x);
  if (it == primes_.begin()) return std::nullopt;
  return *std::prev(it);
}

double harmonic(std::uint64_t n, std::uint64_t exact_limit) {
  if (n == 0) return 0.0;
  if (n <= exact_limit) {
    // Smallest terms first keeps the compensation term tiny.
    CompensatedSum s;
    for (std::uint64_t j = n; j >= 1; --j) s += 1.0 / static_cast<double>(j);
    return s.value();
  }
  const auto x = static_cast<double>(n);
  const double inv2 = 1.0 / (x * x);
  return std::log(x) + kEulerGamma + 0.5 / x - inv2 / 12.0 + inv2 * inv2 / 120.0;
}

MertensConstantEstimate estimate_mertens_c1(const PrimeTable& table) {
  const std::uint64_t big = table.limit();
  const std::uint64_t small = std::max<std::uint64_t>(isqrt(big), 3);
  auto raw = [&](std::uint64_t x) {
    return table.reciprocal_sum(x) - std::log(std::log(static_cast<double>(x)));
  };
  MertensConstantEstimate est;
  est.raw_at_limit = raw(big);
  est.raw_at_sqrt_limit = raw(small);
  const double wb = std::pow(std::log(static_cast<double>(big)), 2);
  const double ws = std::pow(std::log(static_cast<double>(small)), 2);
  est.c1 = (wb > ws) ? (est.raw_at_limit * wb - est.raw_at_sqrt_limit * ws) / (wb - ws)
                     : est.raw_at_limit;
  return est;
}

namespace {

struct TrudgianTerms {
  double resid;
  double bound;
};

TrudgianTerms trudgian(std::uint64_t n, std::uint64_t pi_n) {
  const auto x = static_cast<double>(n);
  const double l = std::log(x);
  return {std::fabs(static_cast<double>(pi_n) - x / l - x / (l * l)), 184.0 * x / (l * l * l)};
}

}  // namespace

std::vector<MertensRecord> mertens_report(const PrimeTable& table,
                                          std::span<const std::uint64_t> n_grid,
                                          std::optional<double> c1) {
  const double c1_value = c1 ? *c1 : estimate_mertens_c1(table).c1;
  std::vector<MertensRecord> out;
  out.reserve(n_grid.size());
  for (std::uint64_t n : n_grid) {
    if (n < 3) throw UsageError("mertens_report: grid values must be >= 3");
    table.count_upto(n);  // range check
    MertensRecord r;
    r.n = n;
    r.log_n = std::log(static_cast<double>(n));
    r.lambda = table.lambda(n);
    r.first_resid = std::fabs(r.lambda - r.log_n);
    r.first_bound = 2.0 / r.log_n;
    r.first_ok = r.first_resid <= r.first_bound;
    r.second_resid = std::fabs(table.reciprocal_sum(n) - std::log(r.log_n) - c1_value);
    r.second_bound = 5.0 / r.log_n;
    r.second_ok = r.second_resid <= r.second_bound;
    r.third_scaled_resid =
        r.log_n * std::fabs(r.log_n * table.euler_product(n) - kExpMinusGamma);
    r.pi_n = table.count_upto(n);
    if (n >= 229) {
      const auto t = trudgian(n, r.pi_n);
      r.trudgian_resid = t.resid;
      r.trudgian_bound = t.bound;
      r.trudgian_ok = t.resid <= t.bound;
    }
    out.push_back(r);
  }
  return out;
}

MertensSweep sweep_mertens(const PrimeTable& table, std::uint64_t lo, std::uint64_t hi) {
  if (lo < 3 || hi < lo) throw UsageError("sweep_mertens: need 3 <= lo <= hi");
  table.count_upto(hi);
  MertensSweep s;
  s.lo = lo;
  s.hi = hi;
  const std::uint64_t top_decade = std::max(lo, hi / 10);

  auto primes = table.primes();
  std::size_t idx = 0;  // number of primes <= n
  CompensatedSum harm;
  for (std::uint64_t j = 1; j < lo; ++j) harm += 1.0 / static_cast<double>(j);
  double prev_lambda = -1.0, prev_euler = 2.0;

  for (std::uint64_t n = lo; n <= hi; ++n) {
    while (idx < primes.size() && primes[idx] <= n) ++idx;
    harm += 1.0 / static_cast<double>(n);
    const double log_n = std::log(static_cast<double>(n));
    const double lam = table.prefix_lambda()[idx - 1];
    const double euler = std::exp(table.prefix_log_euler()[idx - 1]);
    const double l_n = harm.value();

    const double r1 = std::fabs(lam - log_n);
    s.first_resid_max = std::max(s.first_resid_max, r1);
    if (r1 > 2.0 / log_n) {
      ++s.first_literal_violations;
      if (!s.first_literal_first_violation) s.first_literal_first_violation = n;
    }
    if (r1 > 2.0) ++s.first_classic_violations;

    if (!(log_n <= l_n && l_n <= log_n + 1.0)) ++s.harmonic_bracket_violations;
    if (n >= 21) {
      const double cov = l_n * euler;
      s.coverage_min = std::min(s.coverage_min, cov);
      if (cov < 0.5) ++s.coverage_violations;
    }
    if (n >= 229) {
      const auto t = trudgian(n, idx);
      s.trudgian_ratio_max = std::max(s.trudgian_ratio_max, t.resid / t.bound);
      if (t.resid > t.bound) ++s.trudgian_violations;
    }
    const double third = std::fabs(log_n * euler - kExpMinusGamma);
    const double scaled = log_n * third;
    s.third_scaled_max = std::max(s.third_scaled_max, scaled);
    if (n >= top_decade) {
      s.third_scaled_max_upper = std::max(s.third_scaled_max_upper, scaled);
      s.third_double_scaled_max_upper = std::max(s.third_double_scaled_max_upper, log_n * scaled);
    } else {
      s.third_scaled_max_lower = std::max(s.third_scaled_max_lower, scaled);
      s.third_double_scaled_max_lower = std::max(s.third_double_scaled_max_lower, log_n * scaled);
    }
    if (lam < prev_lambda || euler > prev_euler) ++s.monotonicity_violations;
    prev_lambda = lam;
    prev_euler = euler;
  }
  return s;
}

}  // namespace smoothlab
