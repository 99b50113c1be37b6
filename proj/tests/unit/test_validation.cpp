#include <doctest.h>

#include <cmath>
#include <sstream>

#include "smoothlab/distance.hpp"
#include "smoothlab/errors.hpp"
#include "smoothlab/numeric.hpp"
#include "smoothlab/validation.hpp"

using namespace smoothlab;

namespace {

ScanConfig small_config() {
  ScanConfig c;
  c.n_grid = {1'000, 10'000};
  c.m_grid = {100, 1'000};
  c.debruijn_n_grid = {1'000, 10'000};
  c.mertens_limit = 10'000;
  c.coverage_limit = 10'000;
  c.lemma51_limit = 300;
  c.tv_n = {21, 100};
  c.vm_m = {100};
  c.acceptance_n = {21, 100};
  c.acceptance_attempts = 20'000;
  c.mc_count = 1'000'000;
  c.ks_count = 5'000;
  return c;
}

}  // namespace

TEST_CASE("config parsing") {
  std::istringstream in(
      "# scan settings\n"
      "n_grid = 1000, 10000 ,1e5\n"
      "z-grid = [0.5, 2]\n"
      "mc_count = 1e5   # inline comment\n"
      "gamma = on\n"
      "format = json\n");
  const auto c = parse_scan_config(in);
  CHECK(c.n_grid == std::vector<std::uint64_t>{1000, 10000, 100000});
  CHECK(c.z_grid == std::vector<double>{0.5, 2.0});
  CHECK(c.mc_count == 100000);
  CHECK(c.assert_gamma);
  CHECK(c.format == "json");
  CHECK_NOTHROW(c.validate());

  std::istringstream unknown("colour = blue\n");
  CHECK_THROWS_AS(parse_scan_config(unknown), UsageError);
  std::istringstream garbage("n_grid = 10,abc\n");
  CHECK_THROWS_AS(parse_scan_config(garbage), UsageError);
  std::istringstream fractional("mc_count = 1.5e4\n");
  CHECK_NOTHROW(parse_scan_config(fractional));
  std::istringstream nonint("seed = 0.5\n");
  CHECK_THROWS_AS(parse_scan_config(nonint), UsageError);

  ScanConfig low;
  low.mc_count = 10;
  CHECK_THROWS_AS(low.validate(), UsageError);
  ScanConfig empty;
  empty.z_grid.clear();
  CHECK_THROWS_AS(empty.validate(), UsageError);
}

TEST_CASE("grid helpers") {
  const auto g = geometric_grid(16, 1000, 16);
  CHECK(g.size() == 16);
  CHECK(g.front() == 16);
  CHECK(g.back() == 1000);
  CHECK(std::is_sorted(g.begin(), g.end()));
  CHECK(integer_root(100, 2.0) == 10);
  CHECK(integer_root(99, 2.0) == 9);
  CHECK(integer_root(1'000'000, 3.0) == 100);
  CHECK(integer_root(10'000, 1.5) == 464);
  CHECK(integer_root(12345, 1.0) == 12345);
  CHECK(m_for_upsilon(1'000'000, 2.0) == 1000);
  const std::vector<double> x{1, 2, 3}, y{2, 4, 6};
  CHECK(trend_slope(x, y) == doctest::Approx(2.0));
  const std::vector<double> s{std::exp(1.0), std::exp(2.0)}, v{std::exp(1.0), std::exp(2.0)};
  CHECK(log_trend(s, v) == doctest::Approx(1.0));
}

TEST_CASE("main-theorem scan records") {
  ScanConfig c = small_config();
  const auto r = scan_main_theorem(c);
  REQUIRE_FALSE(r.records.empty());
  for (const auto& rec : r.records) {
    CHECK(rec.m >= 16);
    CHECK(rec.abs_err == std::fabs(rec.exact - rec.approx));
    CHECK(rec.scaled_err == doctest::Approx(std::log(double(rec.n)) * rec.abs_err));
    CHECK(rec.method == ScanMethod::kExact);
    CHECK(rec.mc_ci == 0.0);
    if (rec.m == rec.n && rec.variant == "gamma-off") {
      CHECK(rec.exact == doctest::Approx(1.0).epsilon(1e-14));
      CHECK(rec.approx == 1.0);
    }
  }
  // Both variants, at least 16 m values per n.
  std::size_t per_n = 0;
  for (const auto& rec : r.records) per_n += rec.n == 1'000 && rec.variant == "gamma-on";
  CHECK(per_n >= 16);
  for (const char* v : {"gamma-on", "gamma-off"}) {
    const auto* s = r.summary(v);
    REQUIRE(s != nullptr);
    double sup = 0;
    for (const auto& rec : r.records)
      if (rec.variant == v) sup = std::max(sup, rec.scaled_err);
    CHECK(s->sup_scaled_err == sup);
  }
  CHECK(std::is_sorted(r.records.begin(), r.records.end(), [](const ScanRecord& a, const ScanRecord& b) {
    return std::tie(a.n, a.m, a.variant) < std::tie(b.n, b.m, b.variant);
  }));
}

TEST_CASE("main-theorem scan outside the m >= 16 range") {
  ScanConfig c = small_config();
  c.n_grid = {4};
  c.m_min = 2;
  c.m_points = 2;
  const auto r = scan_main_theorem(c);
  bool seen = false;
  for (const auto& rec : r.records) {
    if (rec.m != 2 || rec.variant != "gamma-on") continue;
    seen = true;
    CHECK(rec.exact == doctest::Approx(0.84));
    CHECK(rec.abs_err == doctest::Approx(0.387).epsilon(1e-3));
    CHECK(rec.scaled_err == doctest::Approx(0.536).epsilon(1e-3));
  }
  CHECK(seen);
}

TEST_CASE("sieve cap skips n with a warning") {
  ScanConfig c = small_config();
  c.n_grid = {1'000, 50'000};
  c.sieve_cap = 20'000;
  const auto r = scan_main_theorem(c);
  CHECK(r.warnings.size() == 1);
  for (const auto& rec : r.records) CHECK(rec.n == 1'000);
}

TEST_CASE("kolmogorov scan") {
  ScanConfig c = small_config();
  c.m_grid = {2};
  c.z_grid = {4.0, 1e-9};
  const auto r = scan_kolmogorov(c);
  REQUIRE(r.records.size() == 2);
  const auto& tiny = r.records[0];
  const auto& four = r.records[1];
  CHECK(*four.z == 4.0);
  CHECK(four.exact == doctest::Approx(0.875));
  CHECK(four.approx == doctest::Approx(kExpMinusGamma * build_dickman().integral(4.0)));
  CHECK(tiny.exact == doctest::Approx(0.5));
  CHECK(std::isfinite(tiny.scaled_err));
  CHECK(tiny.scaled_err <= 1e-12);

  // Monte Carlo fallback when the enumeration is capped.
  ScanConfig mc = small_config();
  mc.m_grid = {1000};
  mc.z_grid = {2.0, 3.0};
  mc.exact_cap = 1000;
  const auto a = scan_kolmogorov(mc);
  const auto b = scan_kolmogorov(mc);
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    const auto& rec = a.records[i];
    CHECK(rec.method == ScanMethod::kMonteCarlo);
    CHECK(rec.mc_ci == doctest::Approx(dkw_band(mc.mc_count)));
    CHECK(rec.exact == b.records[i].exact);
  }
  const auto ex = SmCdfExact(PrimeTable::build(1000), 1000).cdf(2.0);
  CHECK(std::fabs(a.records[0].exact - ex) <= a.records[0].mc_ci);
}

TEST_CASE("de Bruijn scan") {
  ScanConfig c = small_config();
  c.debruijn_n_grid = {100, 10'000};
  c.x_grid = {1.0, 2.0, 3.0};
  const auto r = scan_debruijn(c);
  for (const auto& rec : r.records) {
    if (rec.upsilon == 1.0) {
      CHECK(rec.exact == 1.0);
      CHECK(rec.abs_err == 0.0);
    }
    if (rec.n == 100 && rec.upsilon == 2.0) {
      CHECK(rec.m == 10);
      CHECK(rec.exact == doctest::Approx(0.46));
      CHECK(rec.approx == doctest::Approx(1.0 - std::log(2.0)));
    }
  }
  REQUIRE(r.summary("x=3") != nullptr);
  CHECK(r.summary("x=3")->extras.front().first == "fitted_C");
}

TEST_CASE("run_all on a reduced configuration") {
  ScanConfig c = small_config();
  const auto rep = run_all(c);
  for (const auto& s : rep.suites)
    for (const auto& chk : s.checks) {
      INFO(s.suite << ": " << chk.name);
      CHECK((chk.pass || !chk.asserted));
    }
  CHECK(rep.pass());
  const std::string j1 = report_to_json(rep);
  CHECK(j1 == report_to_json(run_all(c)));

  c.assert_gamma = true;
  const auto bad = run_all(c);
  CHECK_FALSE(bad.pass());
  const auto& scans = bad.suites.back();
  CHECK_FALSE(scans.checks.front().pass);
  CHECK(scans.checks.front().note.find("trend") != std::string::npos);
}

TEST_CASE("report writers") {
  ScanConfig c = small_config();
  c.debruijn_n_grid = {100};
  c.x_grid = {2.0};
  const auto r = scan_debruijn(c);
  std::ostringstream csv;
  write_scan_csv(csv, r);
  const std::string text = csv.str();
  CHECK(text.rfind("n,m,z,upsilon,exact,approx,abs_err,scaled_err,method,mc_ci,variant\n", 0) == 0);
  CHECK(text.find("100,10,,2,0.46") != std::string::npos);
  CHECK(text.find("# summary variant=all") != std::string::npos);
  CHECK(scan_to_json(r).find("\"scan\": \"debruijn\"") != std::string::npos);
}
