#ifndef SMOOTHLAB_VALIDATION_HPP_
#define SMOOTHLAB_VALIDATION_HPP_

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "smoothlab/dickman.hpp"
#include "smoothlab/prime_tables.hpp"
#include "smoothlab/smooth_core.hpp"

namespace smoothlab {

enum class ScanMethod { kExact, kMonteCarlo };
const char* to_string(ScanMethod m);

struct ScanRecord {
  std::uint64_t n = 0;
  std::uint64_t m = 0;
  std::optional<double> z;
  double upsilon = 0.0;
  double exact = 0.0;
  double approx = 0.0;
  double abs_err = 0.0;
  double scaled_err = 0.0;
  ScanMethod method = ScanMethod::kExact;
  double mc_ci = 0.0;   // DKW half-width for Monte Carlo values, else 0
  std::string variant;  // gamma-on / gamma-off for the main-theorem scan
};

struct ScanSummary {
  std::string variant;
  double sup_scaled_err = 0.0;
  // Largest per-group least-squares slope of scaled_err against log n (log m
  // for the Kolmogorov scan). scaled_err = log(n) abs_err, so the slope
  // estimates the part of abs_err that does not vanish: near 0 for errors of
  // order 1/log n, near the limiting error when the approximation is biased.
  std::optional<double> max_trend;
  std::vector<std::pair<std::string, double>> extras;
};

struct ScanResult {
  std::string scan;
  std::vector<ScanRecord> records;
  std::vector<ScanSummary> summaries;
  std::vector<std::string> warnings;

  const ScanSummary* summary(const std::string& variant) const;
};

// "No increasing trend": max_trend at or below this value.
inline constexpr double kTrendThreshold = 0.1;
inline constexpr double kScaledErrorCeiling = 10.0;

struct ScanConfig {
  // main-theorem
  std::vector<std::uint64_t> n_grid{1'000, 10'000, 100'000, 1'000'000};
  int m_points = 16;  // geometric m-grid in [m_min, n] per n
  std::uint64_t m_min = 16;
  std::vector<double> upsilon_grid{1.0, 1.25, 1.5, 2.0, 2.5};  // fixed-upsilon trend points
  bool assert_gamma = false;  // variant asserted by run_all

  // kolmogorov
  std::vector<std::uint64_t> m_grid{100, 1'000, 10'000};
  std::vector<double> z_grid{0.5, 1.0, 1.5, 2.0, 3.0};
  std::uint64_t exact_cap = kDefaultExactCap;

  // debruijn
  std::vector<double> x_grid{1.0, 1.5, 2.0, 2.5, 3.0};
  std::vector<std::uint64_t> debruijn_n_grid{10'000, 100'000, 1'000'000, 10'000'000};
  std::uint64_t sieve_cap = 10'000'000;

  // verification suites
  std::uint64_t lemma51_limit = 2'000;
  std::uint64_t mertens_limit = 1'000'000;
  std::uint64_t coverage_limit = 100'000;
  std::vector<std::uint64_t> acceptance_n{21, 50, 100, 1'000};
  std::uint64_t acceptance_attempts = 100'000;
  std::uint64_t representation_n = 100;
  std::vector<std::uint64_t> tv_n{21, 100, 1'000, 10'000};
  std::uint64_t ks_count = 100'000;
  std::vector<std::uint64_t> vm_m{100, 1'000, 10'000};

  std::uint64_t mc_count = 1'000'000;
  std::uint64_t seed = 42;
  double u_max = 20.0;
  double dickman_tol = 1e-10;

  std::string out;
  std::string format = "csv";

  // UsageError on empty grids, mc_count < 1e4 or out-of-range values.
  void validate() const;
};

// Flat "key = value" file, '#' comments, grids as comma lists.
ScanConfig parse_scan_config(std::istream& in, ScanConfig base = {});
ScanConfig load_scan_config(const std::string& path, ScanConfig base = {});
// Applies one key/value pair; UsageError for unknown keys or bad values.
void apply_config_value(ScanConfig& cfg, const std::string& key, const std::string& value);

// Tables shared by scans and suites, built on first use.
class Workbench {
 public:
  explicit Workbench(const ScanConfig& cfg) : cfg_(cfg) {}
  const PrimeTable& primes(std::uint64_t at_least);
  const LpfSieve& sieve(std::uint64_t at_least);
  const DickmanTable& dickman();

 private:
  ScanConfig cfg_;
  std::unique_ptr<PrimeTable> primes_;
  std::unique_ptr<LpfSieve> sieve_;
  std::unique_ptr<DickmanTable> dickman_;
};

// Geometric grid of `points` integers in [lo, hi] (deduplicated).
std::vector<std::uint64_t> geometric_grid(std::uint64_t lo, std::uint64_t hi, int points);
// m with m^upsilon closest to n.
std::uint64_t m_for_upsilon(std::uint64_t n, double upsilon);
// floor(n^{1/x}) computed in integers.
std::uint64_t integer_root(std::uint64_t n, double x);

// Least-squares slope of values against x.
double trend_slope(std::span<const double> x, std::span<const double> values);
// Least-squares slope of log(max(value, 1e-12)) against log(scale).
double log_trend(std::span<const double> scale, std::span<const double> values);

ScanResult scan_main_theorem(const ScanConfig& cfg, Workbench& bench);
ScanResult scan_kolmogorov(const ScanConfig& cfg, Workbench& bench);
ScanResult scan_debruijn(const ScanConfig& cfg, Workbench& bench);
ScanResult scan_main_theorem(const ScanConfig& cfg);
ScanResult scan_kolmogorov(const ScanConfig& cfg);
ScanResult scan_debruijn(const ScanConfig& cfg);

struct CheckResult {
  std::string name;
  bool pass = true;
  bool asserted = true;  // false: reported only
  std::vector<std::pair<std::string, double>> metrics;
  std::string note;

  double metric(const std::string& key) const;
};

struct SuiteResult {
  std::string suite;
  std::vector<CheckResult> checks;
  bool pass() const;
};

// Main-theorem verdict for one variant: sup scaled error <= 10 and no
// increasing trend at fixed upsilon.
CheckResult judge_main_theorem(const ScanResult& scan, const std::string& variant);
// Lemma-5.2 verdict: sup of the scaled error, with Monte Carlo rows reduced by
// 3 mc_ci first, <= 10 and no increasing trend across m.
CheckResult judge_kolmogorov(const ScanResult& scan);

SuiteResult mertens_suite(const PrimeTable& table, std::uint64_t limit);
SuiteResult dickman_suite(const DickmanTable& table, std::uint64_t seed);
SuiteResult lemma51_suite(const PrimeTable& table, const LpfSieve& sieve, std::uint64_t limit);
SuiteResult representation_suite(const PrimeTable& table, const ScanConfig& cfg);
SuiteResult tv_suite(const PrimeTable& table, std::span<const std::uint64_t> ns);
SuiteResult stein_suite(const DickmanTable& table, const ScanConfig& cfg);
SuiteResult sizebias_suite();
SuiteResult vm_suite(const PrimeTable& table, std::span<const std::uint64_t> ms);

struct RunAllReport {
  std::vector<SuiteResult> suites;
  std::vector<ScanResult> scans;
  bool pass() const;
};

RunAllReport run_all(const ScanConfig& cfg);

// Serialization. Output depends only on the values, never on timing.
void write_scan_csv(std::ostream& out, const ScanResult& scan);
std::string scan_to_json(const ScanResult& scan);
std::string suite_to_json(const SuiteResult& suite);
std::string report_to_json(const RunAllReport& report);
void write_mertens_csv(std::ostream& out, std::span<const MertensRecord> rows);
std::string mertens_to_json(std::span<const MertensRecord> rows, double c1);

}  // namespace smoothlab

#endif  // SMOOTHLAB_VALIDATION_HPP_
