#include <doctest.h>

#include <cmath>

#include "smoothlab/distance.hpp"
#include "smoothlab/errors.hpp"
#include "smoothlab/numeric.hpp"
#include "smoothlab/samplers.hpp"

using namespace smoothlab;

TEST_CASE("ecdf basics") {
  Ecdf e({3.0, 1.0, 2.0, 2.0});
  CHECK(e(0.5) == 0.0);
  CHECK(e(1.0) == 0.25);
  CHECK(e(2.0) == 0.75);
  CHECK(e.left_limit(2.0) == 0.25);
  CHECK(e(10.0) == 1.0);
}

TEST_CASE("DKW and KS constants") {
  CHECK(dkw_band(1'000'000) == doctest::Approx(std::sqrt(std::log(200.0) / 2e6)));
  CHECK(dkw_band(1'000'000) == doctest::Approx(0.00163).epsilon(5e-3));
  const double c = std::sqrt(-std::log(0.005) / 2);
  CHECK(ks_two_sample_critical(100, 400) == doctest::Approx(c * std::sqrt(500.0 / 40000.0)));
}

TEST_CASE("Kolmogorov distance to the Dickman law") {
  const auto t = build_dickman();
  auto cdf = [&](double z) { return t.cdf(z); };

  const int n = 2000;
  std::vector<double> q;
  for (int i = 1; i <= n; ++i) q.push_back(t.quantile((i - 0.5) / n));
  CHECK(kolmogorov_distance(Ecdf(q), cdf).distance <= 1.0 / (2 * n) + 1e-9);

  CHECK(kolmogorov_distance(Ecdf({0.0}), cdf).distance == doctest::Approx(1.0));

  auto draws = sample_batch<double>(1'000'000, RandomSource(21), [&](RandomSource& r) {
    return sample_dickman(t, r, DickmanMethod::kQuantile);
  });
  const auto rep = kolmogorov_distance(Ecdf(std::move(draws)), cdf);
  CHECK(rep.dkw_band == doctest::Approx(dkw_band(1'000'000)));
  CHECK(rep.distance <= rep.dkw_band);
}

TEST_CASE("empirical total variation") {
  const std::vector<std::uint64_t> a{1, 2, 3, 3}, b{1, 2, 3, 3}, c{7, 8};
  CHECK(empirical_tv(a, b) == 0.0);
  CHECK(empirical_tv(a, c) == 1.0);
  const std::vector<std::uint64_t> d{1, 1}, e{1, 2};
  CHECK(empirical_tv(d, e) == doctest::Approx(0.5));
}

TEST_CASE("exact TV between uniform and H_n Q_n") {
  const auto t = PrimeTable::build(10'000);
  const auto r21 = tv_uniform_vs_hq(t, 21);
  CHECK(r21.bound == doctest::Approx(22.3).epsilon(1e-3));
  CHECK(r21.tv <= r21.bound);
  const auto r4 = tv_uniform_vs_hq(t, 10'000);
  CHECK(r4.bound == doctest::Approx(14.7).epsilon(1e-3));
  CHECK(r4.tv <= r4.bound);
  CHECK(std::fabs(r4.total_mass - 1.0) <= 1e-12);

  // Divisor-side assembly of the same pmf: P[H Q = j] sums over h | j with
  // j / h equal to 1 or a prime <= n / h.
  const std::uint64_t n = 300;
  const double l = harmonic(n);
  long double tv = 0;
  for (std::uint64_t j = 1; j <= n; ++j) {
    long double p = 0;
    for (std::uint64_t h = 1; h <= j; ++h) {
      if (j % h) continue;
      const std::uint64_t q = j / h;
      bool prime = q >= 2;
      for (std::uint64_t d = 2; d * d <= q && prime; ++d) prime = q % d != 0;
      if (q == 1 || prime) p += 1.0L / (l * h * (t.count_upto(n / h) + 1));
    }
    tv += std::fabs(p - 1.0L / n);
  }
  CHECK(std::fabs(tv_uniform_vs_hq(t, n).tv - static_cast<double>(tv / 2)) <= 1e-13);
  CHECK_THROWS_AS(tv_uniform_vs_hq(t, 20), UsageError);
}
