// Acceptance criteria, one pass/fail line each. Run without arguments for all
// ten, or with --criterion N for one.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "smoothlab/dickman.hpp"
#include "smoothlab/distance.hpp"
#include "smoothlab/numeric.hpp"
#include "smoothlab/prime_tables.hpp"
#include "smoothlab/smooth_core.hpp"
#include "smoothlab/validation.hpp"

using namespace smoothlab;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

void append(Outcome& o, const std::string& text) {
  if (!o.detail.empty()) o.detail += "; ";
  o.detail += text;
}

void require(Outcome& o, bool ok, const std::string& text) {
  o.pass = o.pass && ok;
  append(o, std::string(ok ? "" : "FAILED ") + text);
}

// Folds a suite into the outcome; every asserted check must pass.
void require_suite(Outcome& o, const SuiteResult& s) {
  for (const auto& c : s.checks) {
    if (!c.asserted) continue;
    if (!c.pass) {
      std::string m;
      for (const auto& [k, v] : c.metrics) m += " " + k + "=" + fmt("%.6g", v);
      require(o, false, s.suite + ": " + c.name + m);
    }
  }
  if (s.pass()) append(o, s.suite + " checks ok (" + std::to_string(s.checks.size()) + ")");
}

const DickmanTable& dickman() {
  static const DickmanTable t = build_dickman(20.0, 1e-10);
  return t;
}

Outcome criterion1() {
  Outcome o;
  double closed = 0.0;
  for (int i = 0; i < 200; ++i) {
    const double u = 1.0 + i / 199.0;
    closed = std::max(closed, std::fabs(dickman().rho(u) - (1.0 - std::log(u))));
  }
  require(o, closed <= 1e-9, "max |rho(u) - (1 - ln u)| on [1,2] = " + fmt("%.3g", closed));
  bool ones = true;
  for (int i = 0; i <= 1000; ++i) ones = ones && dickman().rho(i / 1000.0) == 1.0;
  require(o, ones, "rho == 1 exactly on [0,1]");
  return o;
}

Outcome criterion2() {
  Outcome o;
  const double norm = std::fabs(kExpMinusGamma * dickman().integral(20.0) - 1.0);
  require(o, norm <= 1e-6, "|e^-gamma I(20) - 1| = " + fmt("%.3g", norm));
  double delay = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double u = 1.0 + 19.0 * i / 999.0;
    delay = std::max(delay, std::fabs(u * dickman().rho(u) - (dickman().integral(u) - dickman().integral(u - 1))));
  }
  require(o, delay <= 1e-9, "delay identity residual = " + fmt("%.3g", delay));
  return o;
}

Outcome criterion3() {
  Outcome o;
  const auto primes = PrimeTable::build(2000);
  const auto sieve = LpfSieve::build(2000);
  const auto s = lemma51_suite(primes, sieve, 2000);
  require(o, s.pass(), "max discrepancy over n <= 2000, 2 <= m <= n = " +
                           fmt("%.3g", s.checks.front().metric("max_discrepancy")));
  return o;
}

ScanConfig acceptance_config() {
  ScanConfig c;
  c.n_grid = {1'000, 10'000, 100'000, 1'000'000};
  c.m_min = 16;
  c.m_points = 16;
  c.m_grid = {100, 1'000, 10'000};
  c.z_grid = {0.5, 1.0, 1.5, 2.0, 3.0};
  c.mc_count = 1'000'000;
  c.seed = 42;
  return c;
}

Outcome criterion4() {
  Outcome o;
  const ScanConfig c = acceptance_config();
  Workbench bench(c);
  const auto scan = scan_main_theorem(c, bench);
  std::size_t fewest = SIZE_MAX;
  for (auto n : c.n_grid) {
    std::size_t k = 0;
    for (const auto& r : scan.records) k += r.n == n && r.variant == "gamma-on";
    fewest = std::min(fewest, k);
  }
  require(o, fewest >= 16, "m points per n >= 16 (" + std::to_string(fewest) + ")");
  const auto on = judge_main_theorem(scan, "gamma-on");
  require(o, on.metric("sup_scaled_err") <= kScaledErrorCeiling,
          "e^-gamma variant sup log(n)|err| = " + fmt("%.4g", on.metric("sup_scaled_err")) + " <= 10");
  require(o, on.metric("max_trend") <= kTrendThreshold,
          "e^-gamma variant trend at fixed upsilon = " + fmt("%.4g", on.metric("max_trend")) +
              " (no increasing trend needs <= " + fmt("%.2g", kTrendThreshold) + ")");
  const auto off = judge_main_theorem(scan, "gamma-off");
  require(o, off.metric("max_trend") > kTrendThreshold,
          "variant without e^-gamma grows like log: trend = " + fmt("%.4g", off.metric("max_trend")) +
              ", sup = " + fmt("%.4g", off.metric("sup_scaled_err")));
  return o;
}

Outcome criterion5() {
  Outcome o;
  const ScanConfig c = acceptance_config();
  Workbench bench(c);
  const auto scan = scan_kolmogorov(c, bench);
  std::size_t mc = 0;
  for (const auto& r : scan.records) mc += r.method == ScanMethod::kMonteCarlo;
  const auto k = judge_kolmogorov(scan);
  require(o, k.metric("sup_scaled_err_mc_reduced") <= kScaledErrorCeiling,
          "sup scaled error = " + fmt("%.4g", k.metric("sup_scaled_err")) + " (" + std::to_string(mc) +
              " Monte Carlo points, widened by 3 DKW = " + fmt("%.4g", 3 * dkw_band(c.mc_count)) + ")");
  require(o, k.metric("trend_in_m") <= kTrendThreshold,
          "trend across m = " + fmt("%.4g", k.metric("trend_in_m")));
  return o;
}

Outcome criterion6() {
  Outcome o;
  ScanConfig c;
  c.acceptance_n = {21, 50, 100, 1'000};
  c.acceptance_attempts = 100'000;
  c.representation_n = 100;
  c.mc_count = 1'000'000;
  c.coverage_limit = 100'000;
  const auto primes = PrimeTable::build(100'000);
  require_suite(o, representation_suite(primes, c));
  return o;
}

Outcome criterion7() {
  Outcome o;
  const auto primes = PrimeTable::build(1'000'000);
  const auto sw = sweep_mertens(primes, 3, 1'000'000);
  std::string first = "first formula |lambda_n - log n| <= 2/log n on [3, 1e6]: " +
                      std::to_string(sw.first_literal_violations) + " violations";
  if (sw.first_literal_first_violation)
    first += ", first at n = " + std::to_string(*sw.first_literal_first_violation);
  first += ", sup residual " + fmt("%.4f", sw.first_resid_max);
  require(o, sw.first_literal_violations == 0, first);
  require(o, sw.third_double_scaled_max_upper <= sw.third_double_scaled_max_lower,
          "third formula log^2(m)|log(m) I_m - e^-gamma| bounded, fitted C = " +
              fmt("%.4g", std::max(sw.third_double_scaled_max_upper, sw.third_double_scaled_max_lower)));
  require(o, sw.trudgian_violations == 0,
          "Trudgian on [229, 1e6]: max resid/bound = " + fmt("%.4g", sw.trudgian_ratio_max));
  return o;
}

Outcome criterion8() {
  Outcome o;
  ScanConfig c;
  c.mc_count = 1'000'000;
  c.ks_count = 100'000;
  c.seed = 42;
  const auto sb = sizebias_suite();
  require(o, sb.checks.size() == 9, "size-bias combinations = " + std::to_string(sb.checks.size()));
  require_suite(o, sb);
  require_suite(o, stein_suite(dickman(), c));
  return o;
}

Outcome criterion9() {
  Outcome o;
  const auto primes = PrimeTable::build(10'000);
  const std::vector<std::uint64_t> ns{21, 100, 1'000, 10'000};
  const auto s = tv_suite(primes, ns);
  require_suite(o, s);
  for (const auto& c : s.checks) append(o, c.name + " = " + fmt("%.4g", c.metric("tv")));
  return o;
}

Outcome criterion10(const std::string& cli) {
  Outcome o;
  if (cli.empty()) {
    require(o, false, "no --cli path given");
    return o;
  }
  namespace fs = std::filesystem;
  const fs::path a = fs::temp_directory_path() / "smoothlab_acceptance_a.json";
  const fs::path b = fs::temp_directory_path() / "smoothlab_acceptance_b.json";
  const int ra = std::system((cli + " verify all --seed 42 --out " + a.string()).c_str());
  const int rb = std::system((cli + " verify all --seed 42 --out " + b.string()).c_str());
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
  };
  const std::string ta = slurp(a), tb = slurp(b);
  require(o, ra == 0 && rb == 0, "both runs exit 0");
  require(o, !ta.empty() && ta == tb, "reports byte-identical (" + std::to_string(ta.size()) + " bytes)");
  fs::remove(a);
  fs::remove(b);
  return o;
}

struct Criterion {
  const char* title;
  double budget_s;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  int only = 0;
  std::string cli;
  app.add_option("--criterion", only, "run a single criterion (1-10)")->check(CLI::Range(1, 10));
  app.add_option("--cli", cli, "path to the smoothlab executable");
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> all{
      {"Dickman closed form on [1,2]", 1, criterion1},
      {"normalization and delay identity", 5, criterion2},
      {"exact harmonic/S_m identity for n <= 2000", 60, criterion3},
      {"harmonic smoothness vs Dickman, scaled error", 300, criterion4},
      {"S_m vs Dickman distribution, scaled error", 300, criterion5},
      {"rejection representation of H_n", 120, criterion6},
      {"Mertens formulas", 30, criterion7},
      {"Stein and size-bias identities", 120, criterion8},
      {"total variation bound", 120, criterion9},
      {"reproducible verify-all report", 600, [&] { return criterion10(cli); }},
  };

  int failed = 0;
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (only && static_cast<int>(i) + 1 != only) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o = all[i].run();
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs < all[i].budget_s;
    if (!in_time) o.pass = false;
    std::printf("criterion %zu %s: %s | %s | %.2fs (budget %.0fs%s)\n", i + 1, o.pass ? "PASS" : "FAIL",
                all[i].title, o.detail.c_str(), secs, all[i].budget_s, in_time ? "" : ", exceeded");
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed ? 1 : 0;
}
