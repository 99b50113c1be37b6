#include "smoothlab/distance.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "smoothlab/errors.hpp"
#include "smoothlab/numeric.hpp"

namespace smoothlab {

Ecdf::Ecdf(std::vector<double> samples) : sorted_(std::move(samples)) {
  if (sorted_.empty()) throw UsageError("ecdf: sample must be non-empty");
  std::sort(sorted_.begin(), sorted_.end());
}

double Ecdf::operator()(double x) const {
  auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
  return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

double Ecdf::left_limit(double x) const {
  auto it = std::lower_bound(sorted_.begin(), sorted_.end(), x);
  return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

double dkw_band(std::size_t count, double delta) {
  if (count == 0) throw UsageError("dkw_band: count must be positive");
  return std::sqrt(std::log(2.0 / delta) / (2.0 * static_cast<double>(count)));
}

KolmogorovReport kolmogorov_distance(const Ecdf& ecdf, const std::function<double(double)>& cdf) {
  const auto v = ecdf.values();
  const auto n = static_cast<double>(v.size());
  double sup = 0.0;
  std::size_t i = 0;
  while (i < v.size()) {
    std::size_t j = i;
    while (j < v.size() && v[j] == v[i]) ++j;  // ties share one jump
    const double f = cdf(v[i]);
    sup = std::max(sup, std::fabs(static_cast<double>(j) / n - f));
    sup = std::max(sup, std::fabs(static_cast<double>(i) / n - f));
    i = j;
  }
  return {sup, dkw_band(v.size(), 0.01)};
}

double ks_two_sample_statistic(const Ecdf& a, const Ecdf& b) {
  const auto x = a.values();
  const auto y = b.values();
  const auto nx = static_cast<double>(x.size());
  const auto ny = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double sup = 0.0;
  while (i < x.size() && j < y.size()) {
    const double t = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == t) ++i;
    while (j < y.size() && y[j] == t) ++j;
    sup = std::max(sup, std::fabs(static_cast<double>(i) / nx - static_cast<double>(j) / ny));
  }
  return sup;
}

double ks_two_sample_critical(std::size_t n1, std::size_t n2, double alpha) {
  const double c = std::sqrt(-std::log(alpha / 2.0) / 2.0);
  const auto a = static_cast<double>(n1), b = static_cast<double>(n2);
  return c * std::sqrt((a + b) / (a * b));
}

double empirical_tv(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
  if (a.empty() || b.empty()) throw UsageError("empirical_tv: samples must be non-empty");
  std::unordered_map<std::uint64_t, std::pair<std::uint64_t, std::uint64_t>> counts;
  for (auto v : a) ++counts[v].first;
  for (auto v : b) ++counts[v].second;
  std::vector<std::uint64_t> keys;
  keys.reserve(counts.size());
  for (const auto& [k, _] : counts) keys.push_back(k);
  std::sort(keys.begin(), keys.end());
  const auto na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  CompensatedSum s;
  for (auto k : keys) {
    const auto& c = counts[k];
    s += std::fabs(static_cast<double>(c.first) / na - static_cast<double>(c.second) / nb);
  }
  return 0.5 * s.value();
}

TvReport tv_uniform_vs_hq(const PrimeTable& table, std::uint64_t n) {
  if (n < 21 || n > 100'000) throw UsageError("tv_uniform_vs_hq: n must lie in [21, 1e5]");
  table.count_upto(n);  // range check
  const double l_n = harmonic(n);
  std::vector<double> pmf(n + 1, 0.0);
  auto primes = table.primes();
  for (std::uint64_t h = 1; h <= n; ++h) {
    const std::uint64_t cap = n / h;
    const std::size_t pi = table.count_upto(cap);
    const double mass = 1.0 / (l_n * static_cast<double>(h) * static_cast<double>(pi + 1));
    pmf[h] += mass;  // q = 1
    for (std::size_t i = 0; i < pi; ++i) pmf[h * primes[i]] += mass;
  }
  TvReport r;
  r.n = n;
  const double uniform = 1.0 / static_cast<double>(n);
  CompensatedSum tv, mass;
  for (std::uint64_t j = 1; j <= n; ++j) {
    tv += std::fabs(pmf[j] - uniform);
    mass += pmf[j];
  }
  r.tv = 0.5 * tv.value();
  r.total_mass = mass.value();
  const double ln = std::log(static_cast<double>(n));
  r.bound = 61.0 * std::log(ln) / ln;
  return r;
}

}  // namespace smoothlab
