#include "smoothlab/samplers.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "smoothlab/errors.hpp"
#include "smoothlab/numeric.hpp"

namespace smoothlab {

std::uint64_t sample_geometric_theta(double theta, RandomSource& rng) {
  if (!(theta > 0.0 && theta < 1.0)) throw UsageError("geometric: theta must lie in (0, 1)");
  return static_cast<std::uint64_t>(std::floor(std::log(rng.uniform()) / std::log(theta)));
}

std::uint64_t sample_geometric(std::uint64_t p, RandomSource& rng) {
  if (p < 2) throw UsageError("geometric: p must be >= 2");
  const double log_inv_p = -std::log(static_cast<double>(p));
  return static_cast<std::uint64_t>(std::floor(std::log(rng.uniform()) / log_inv_p));
}

std::uint32_t MultiplicityVector::exponent(std::uint64_t p) const {
  auto it = std::lower_bound(exponents.begin(), exponents.end(), p,
                             [](const auto& e, std::uint64_t v) { return e.first < v; });
  return (it != exponents.end() && it->first == p) ? it->second : 0;
}

std::optional<std::uint64_t> MultiplicityVector::product() const {
  std::uint64_t k = 1;
  for (auto [p, e] : exponents) {
    for (std::uint32_t i = 0; i < e; ++i) {
      if (k > UINT64_MAX / p) return std::nullopt;
      k *= p;
    }
  }
  return k;
}

GeometricProductSampler::GeometricProductSampler(const PrimeTable& table, std::uint64_t m)
    : m_(m) {
  const std::size_t count = table.count_upto(m);
  auto primes = table.primes();
  primes_.assign(primes.begin(), primes.begin() + static_cast<std::ptrdiff_t>(count));
  log_p_.resize(count);
  for (std::size_t i = 0; i < count; ++i) log_p_[i] = std::log(static_cast<double>(primes_[i]));
  std::size_t begin = 0;
  while (begin < count) {
    const std::uint64_t first = primes_[begin];
    std::size_t end = begin;
    while (end < count && primes_[end] < 2 * first) ++end;
    blocks_.push_back({begin, end, std::log1p(-1.0 / static_cast<double>(first))});
    begin = end;
  }
}

template <class Visit>
bool GeometricProductSampler::visit_hits(RandomSource& rng, Visit&& visit) const {
  for (const Block& b : blocks_) {
    const auto first = static_cast<double>(primes_[b.begin]);
    std::size_t pos = b.begin;
    while (true) {
      const double gap = std::floor(std::log(rng.uniform()) / b.log_miss);
      if (gap >= static_cast<double>(b.end - pos)) break;
      pos += static_cast<std::size_t>(gap);
      const auto p = static_cast<double>(primes_[pos]);
      if (pos == b.begin || rng.uniform() * p < first) {
        const auto extra = static_cast<std::uint64_t>(std::floor(std::log(rng.uniform()) /
                                                                 -log_p_[pos]));
        if (!visit(pos, 1 + extra)) return false;
      }
      ++pos;
    }
  }
  return true;
}

double GeometricProductSampler::draw_log(RandomSource& rng) const {
  double z = 0.0;
  visit_hits(rng, [&](std::size_t i, std::uint64_t e) {
    z += static_cast<double>(e) * log_p_[i];
    return true;
  });
  return z;
}

MultiplicityVector GeometricProductSampler::draw(RandomSource& rng) const {
  MultiplicityVector v;
  v.m = m_;
  visit_hits(rng, [&](std::size_t i, std::uint64_t e) {
    v.exponents.emplace_back(primes_[i], static_cast<std::uint32_t>(e));
    v.log_product += static_cast<double>(e) * log_p_[i];
    return true;
  });
  return v;
}

std::optional<MultiplicityVector> GeometricProductSampler::draw_bounded(
    RandomSource& rng, std::uint64_t bound) const {
  MultiplicityVector v;
  v.m = m_;
  std::uint64_t k = 1;
  const bool ok = visit_hits(rng, [&](std::size_t i, std::uint64_t e) {
    const std::uint64_t p = primes_[i];
    for (std::uint64_t j = 0; j < e; ++j) {
      if (k > bound / p) return false;
      k *= p;
    }
    v.exponents.emplace_back(p, static_cast<std::uint32_t>(e));
    v.log_product += static_cast<double>(e) * log_p_[i];
    return true;
  });
  if (!ok) return std::nullopt;
  return v;
}

SmSampler::SmSampler(const PrimeTable& table, std::uint64_t m)
    : product_(table, m), lambda_(table.lambda(m)) {}

double sample_s_m(const PrimeTable& table, std::uint64_t m, RandomSource& rng) {
  return SmSampler(table, m).draw(rng);
}

HarmonicDirectSampler::HarmonicDirectSampler(std::uint64_t n) : n_(n) {
  if (n < 1 || n > kHarmonicDirectCap) {
    throw UsageError("harmonic sampler: n must lie in [1, " +
                     std::to_string(kHarmonicDirectCap) + "]");
  }
  prefix_.resize(n);
  CompensatedSum acc;
  for (std::uint64_t k = 1; k <= n; ++k) {
    acc += 1.0 / static_cast<double>(k);
    prefix_[k - 1] = acc.value();
  }
}

std::uint64_t HarmonicDirectSampler::draw(RandomSource& rng) const {
  const double target = rng.uniform() * prefix_.back();
  auto it = std::upper_bound(prefix_.begin(), prefix_.end(), target);
  if (it == prefix_.end()) --it;
  return static_cast<std::uint64_t>(it - prefix_.begin()) + 1;
}

std::uint64_t sample_harmonic_direct(std::uint64_t n, RandomSource& rng) {
  return HarmonicDirectSampler(n).draw(rng);
}

HarmonicRejectionSampler::HarmonicRejectionSampler(const PrimeTable& table, std::uint64_t n)
    : n_(n) {
  if (n < 1) throw UsageError("harmonic rejection sampler: n must be >= 1");
  table.count_upto(n);  // range check
  if (n >= 2) product_.emplace(table, n);
}

bool HarmonicRejectionSampler::attempt(RandomSource& rng) const {
  if (!product_) return true;
  return product_->draw_bounded(rng, n_).has_value();
}

RejectionDraw HarmonicRejectionSampler::draw(RandomSource& rng) const {
  RejectionDraw out;
  out.multiplicities.m = n_;
  if (!product_) {
    out.attempts = 1;
    return out;
  }
  while (true) {
    ++out.attempts;
    if (auto v = product_->draw_bounded(rng, n_)) {
      out.multiplicities = std::move(*v);
      out.product = *out.multiplicities.product();
      return out;
    }
  }
}

RejectionDraw sample_harmonic_rejection(const PrimeTable& table, std::uint64_t n,
                                        RandomSource& rng) {
  return HarmonicRejectionSampler(table, n).draw(rng);
}

double sample_dickman(const DickmanTable& table, RandomSource& rng, DickmanMethod method,
                      int depth) {
  if (method == DickmanMethod::kQuantile) return table.inverse_cdf(rng.uniform());
  if (depth < 30) throw UsageError("perpetuity sampler: depth must be >= 30");
  double x = 0.0;
  for (int i = 0; i < depth; ++i) x = rng.uniform() * (x + 1.0);
  return x;
}

}  // namespace smoothlab
