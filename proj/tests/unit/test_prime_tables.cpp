#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "smoothlab/errors.hpp"
#include "smoothlab/numeric.hpp"
#include "smoothlab/prime_tables.hpp"

using namespace smoothlab;

TEST_CASE("small prime tables") {
  auto t10 = PrimeTable::build(10);
  CHECK(std::vector<std::uint64_t>(t10.primes().begin(), t10.primes().end()) ==
        std::vector<std::uint64_t>{2, 3, 5, 7});
  auto t2 = PrimeTable::build(2);
  REQUIRE(t2.primes().size() == 1);
  CHECK(t2.primes()[0] == 2);
  CHECK(PrimeTable::build(100).count_upto(100) == 25);
}

TEST_CASE("sieve agrees with trial division across segment boundaries") {
  const std::uint64_t limit = (1u << 18) * 2 + 777;
  const auto fast = sieve_primes(limit);
  std::vector<char> composite(limit + 1, 0);
  std::vector<std::uint64_t> slow;
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    slow.push_back(i);
    for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = 1;
  }
  CHECK(fast == slow);
  CHECK(PrimeTable::build(1'000'000).count_upto(1'000'000) == 78498);
}

TEST_CASE("build rejects bad limits") {
  CHECK_THROWS_AS(PrimeTable::build(1), UsageError);
  CHECK_THROWS_AS(PrimeTable::build(1000, 100), UsageError);
}

TEST_CASE("lambda") {
  auto t = PrimeTable::build(1000);
  CHECK(t.lambda(2) == doctest::Approx(std::log(2.0) / 2).epsilon(1e-15));
  CHECK(t.lambda(4) == doctest::Approx(std::log(2.0) / 2 + std::log(3.0) / 3).epsilon(1e-15));
  for (std::uint64_t m : {3u, 10u, 97u, 100u, 997u, 1000u})
    CHECK(std::fabs(t.lambda(m) - oracle::lambda(m)) <= 1e-13);
  CHECK(std::fabs(t.lambda(10) - 1.3126524331402549) <= 1e-14);
  CHECK_THROWS_AS(t.lambda(1), UsageError);
  CHECK_THROWS_AS(t.lambda(1001), RangeError);
}

TEST_CASE("euler product") {
  auto t = PrimeTable::build(1000);
  CHECK(t.euler_product(1) == 1.0);
  CHECK(t.euler_product(3) == doctest::Approx(1.0 / 3).epsilon(1e-15));
  CHECK(t.euler_product(10) == doctest::Approx(8.0 / 35).epsilon(1e-15));
  for (std::uint64_t m : {30u, 500u, 1000u})
    CHECK(t.euler_product(m) == doctest::Approx(oracle::euler_product(m)).epsilon(1e-13));
  CHECK(t.reciprocal_sum(10) == doctest::Approx(0.5 + 1.0 / 3 + 0.2 + 1.0 / 7).epsilon(1e-15));
}

TEST_CASE("harmonic numbers") {
  CHECK(harmonic(1) == 1.0);
  CHECK(harmonic(4) == doctest::Approx(25.0 / 12).epsilon(1e-15));
  CHECK(std::fabs(harmonic(30) - 3.9949871309203906) <= 1e-14);
  CHECK(std::fabs(harmonic(100'000) - oracle::harmonic(100'000)) <= 1e-13);
  // Exact and asymptotic branches meet.
  CHECK(std::fabs(harmonic(1'000'000, 0) - harmonic(1'000'000)) <= 1e-13);
  const double l9 = harmonic(1'000'000'000);
  CHECK(l9 >= std::log(1e9));
  CHECK(l9 <= std::log(1e9) + 1);
  CHECK(l9 == doctest::Approx(std::log(1e9) + kEulerGamma + 5e-10).epsilon(1e-15));
}

TEST_CASE("next prime and prime floor") {
  auto t = PrimeTable::build(100);
  CHECK(t.next_prime(2) == 3);
  CHECK(t.next_prime(7) == 11);
  CHECK(t.next_prime(1) == 2);
  CHECK(t.next_prime(96) == 97);
  CHECK_THROWS_AS(t.next_prime(97), RangeError);
  CHECK(t.prime_floor(10) == 7u);
  CHECK_FALSE(t.prime_floor(1).has_value());
}

TEST_CASE("mertens report rows") {
  auto t = PrimeTable::build(100'000);
  const std::vector<std::uint64_t> grid{3, 100, 229, 100'000};
  const auto rows = mertens_report(t, grid);
  REQUIRE(rows.size() == 4);
  for (const auto& r : rows) {
    CHECK(std::isfinite(r.first_resid));
    CHECK(std::isfinite(r.second_resid));
    CHECK(std::isfinite(r.third_scaled_resid));
  }
  // n = 100: |lambda - log n| is far above 2 / log n.
  CHECK(rows[1].first_resid == doctest::Approx(std::fabs(oracle::lambda(100) - std::log(100.0))).epsilon(1e-12));
  CHECK(rows[1].first_resid == doctest::Approx(1.2356993).epsilon(1e-7));
  CHECK(rows[1].first_bound == doctest::Approx(0.4342945).epsilon(1e-7));
  CHECK_FALSE(rows[1].first_ok);
  CHECK(rows[1].first_resid <= 2.0);
  // Trudgian from n = 229 on.
  CHECK_FALSE(rows[1].trudgian_resid.has_value());
  REQUIRE(rows[2].trudgian_resid.has_value());
  CHECK(rows[2].pi_n == 50);
  CHECK(rows[2].trudgian_ok);
  CHECK(rows[3].pi_n == 9592);
  CHECK_THROWS_AS(mertens_report(t, std::vector<std::uint64_t>{2}), UsageError);
}

TEST_CASE("mertens constant estimate") {
  auto t = PrimeTable::build(1'000'000);
  const auto c = estimate_mertens_c1(t);
  // Meissel-Mertens constant 0.2614972128...
  CHECK(std::fabs(c.c1 - 0.2614972128) < 5e-3);
}

TEST_CASE("mertens sweep") {
  auto t = PrimeTable::build(100'000);
  const auto s = sweep_mertens(t, 3, 100'000);
  CHECK(s.first_classic_violations == 0);
  CHECK(s.harmonic_bracket_violations == 0);
  CHECK(s.coverage_violations == 0);
  CHECK(s.trudgian_violations == 0);
  CHECK(s.monotonicity_violations == 0);
  CHECK(s.coverage_min >= 0.5);
  // The 2/log n first-formula bound already fails at n = 10.
  REQUIRE(s.first_literal_first_violation.has_value());
  CHECK(*s.first_literal_first_violation == 10);
}
