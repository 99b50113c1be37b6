#include <doctest.h>

#include <cmath>
#include <sstream>

#include "oracles.hpp"
#include "smoothlab/dickman.hpp"
#include "smoothlab/errors.hpp"
#include "smoothlab/numeric.hpp"

using namespace smoothlab;

namespace {

const DickmanTable& table() {
  static const DickmanTable t = build_dickman();
  return t;
}

// rho on [2, 3] from the closed form on [1, 2] by one quadrature.
double rho_23(double u) {
  auto g = [](double t) { return (1.0 - std::log(t - 1.0)) / t; };
  return 1.0 - std::log(2.0) - oracle::simpson(g, 2.0, u, 2000);
}

// rho on [3, 4] by a second, nested quadrature.
double rho_34(double u) {
  auto g = [](double t) { return rho_23(t - 1.0) / t; };
  return rho_23(3.0) - oracle::simpson(g, 3.0, u, 400);
}

}  // namespace

TEST_CASE("rho on [0, 2]") {
  const auto& t = table();
  CHECK(t.rho(0.0) == 1.0);
  CHECK(t.rho(0.7) == 1.0);
  CHECK(t.rho(1.0) == 1.0);
  CHECK(std::fabs(t.rho(1.5) - (1.0 - std::log(1.5))) <= 1e-12);
  CHECK(t.rho(1.5) == doctest::Approx(0.5945349).epsilon(1e-7));
  CHECK(std::fabs(t.rho(2.0) - (1.0 - std::log(2.0))) <= 1e-12);
}

TEST_CASE("rho beyond 2 against nested quadrature") {
  const auto& t = table();
  CHECK(std::fabs(t.rho(3.0) - rho_23(3.0)) <= 1e-8);
  CHECK(std::fabs(t.rho(2.5) - rho_23(2.5)) <= 1e-10);
  CHECK(std::fabs(t.rho(3.5) - rho_34(3.5)) <= 1e-9);
  CHECK(std::fabs(t.rho(4.0) - rho_34(4.0)) <= 1e-9);
}

TEST_CASE("integral and cdf") {
  const auto& t = table();
  CHECK(t.integral(0.5) == 0.5);
  CHECK(t.integral(1.0) == 1.0);
  CHECK(std::fabs(t.integral(2.0) - (3.0 - 2.0 * std::log(2.0))) <= 1e-12);
  CHECK(std::fabs(t.integral(20.0) - std::exp(kEulerGamma)) <= 1e-6);
  CHECK(t.cdf(0.0) == 0.0);
  CHECK(t.cdf(-1.0) == 0.0);
  CHECK(std::fabs(t.cdf(1.0) - kExpMinusGamma) <= 1e-15);
  CHECK(std::fabs(t.cdf(20.0) - 1.0) <= 1e-6);
  const auto sat = t.cdf_flagged(25.0);
  CHECK(sat.saturated);
  CHECK(sat.value == t.cdf(20.0));
  CHECK(t.density(1.5) == doctest::Approx(kExpMinusGamma * t.rho(1.5)));
  CHECK(t.density(-0.5) == 0.0);
}

TEST_CASE("delay identity") {
  const auto& t = table();
  double worst = 0.0;
  for (int i = 0; i <= 1000; ++i) {
    const double u = 1.0 + 19.0 * i / 1000.0;
    worst = std::max(worst, std::fabs(u * t.rho(u) - (t.integral(u) - t.integral(u - 1.0))));
  }
  CHECK(worst <= 1e-9);
}

TEST_CASE("quantile") {
  const auto& t = table();
  CHECK(t.quantile(0.0) == 0.0);
  CHECK(std::fabs(t.quantile(kExpMinusGamma) - 1.0) <= 1e-7);
  const double z = t.quantile(0.9);
  CHECK(std::fabs(t.cdf(z) - 0.9) <= 1e-9);
  CHECK_THROWS_AS(t.quantile(1.0), UsageError);
  CHECK_THROWS_AS(t.quantile(-0.1), UsageError);
  CHECK(t.inverse_cdf(1.0 - 1e-12) <= t.u_max());
}

TEST_CASE("argument errors") {
  const auto& t = table();
  CHECK_THROWS_AS(t.rho(-1.0), UsageError);
  CHECK_THROWS_AS(t.rho(std::nan("")), UsageError);
  CHECK_THROWS_AS(t.rho(20.5), RangeError);
  CHECK_THROWS_AS(t.integral(21.0), RangeError);
  DickmanOptions o;
  o.u_max = 0.5;
  CHECK_THROWS_AS(DickmanTable::build(o), UsageError);
  o = {};
  o.tol = 1e-20;
  CHECK_THROWS_AS(DickmanTable::build(o), UsageError);
}

TEST_CASE("certification failure surfaces as SolverFailure") {
  DickmanOptions o;
  o.u_max = 10.0;
  o.tol = 1e-14;
  o.nodes_per_unit = 1;
  o.max_refinements = 0;
  CHECK_THROWS_AS(DickmanTable::build(o), SolverFailure);
}

TEST_CASE("mesh doubling") {
  const auto& t = table();
  CHECK(t.error_estimate() <= t.tol());
  const auto fine = DickmanTable::build_uncertified(20.0, 128);
  for (int i = 0; i <= 400; ++i) {
    const double u = 20.0 * i / 400.0 + 0.013;
    if (u > 20.0) break;
    CHECK(std::fabs(t.rho(u) - fine.rho(u)) <= 1e-10);
  }
}

TEST_CASE("cache round trip") {
  DickmanOptions o;
  o.u_max = 8.0;
  const auto t = DickmanTable::build(o);
  std::stringstream ss;
  t.save(ss);
  const auto back = DickmanTable::load(ss);
  CHECK(back.u_max() == t.u_max());
  for (int i = 0; i < 200; ++i) {
    const double u = 8.0 * i / 199.0;
    CHECK(back.rho(u) == t.rho(u));
    CHECK(back.integral(u) == t.integral(u));
  }
  std::stringstream bad("# not a table\n1 2 3\n");
  CHECK_THROWS_AS(DickmanTable::load(bad), FormatError);
}
