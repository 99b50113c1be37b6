#ifndef SMOOTHLAB_PRIME_TABLES_HPP_
#define SMOOTHLAB_PRIME_TABLES_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace smoothlab {

inline constexpr std::uint64_t kMaxPrimeLimit = 1'000'000'000;

// Above this n, harmonic() switches from exact summation to the
// Euler-Maclaurin expansion.
inline constexpr std::uint64_t kHarmonicExactLimit = 100'000'000;

// Primes up to `limit` together with running sums over them. All prefix
// arrays are indexed like `primes`: entry i covers primes[0..i].
class PrimeTable {
 public:
  // Throws UsageError unless 2 <= limit <= max_limit.
  static PrimeTable build(std::uint64_t limit, std::uint64_t max_limit = kMaxPrimeLimit);

  std::uint64_t limit() const { return limit_; }
  std::span<const std::uint64_t> primes() const { return primes_; }
  std::span<const double> prefix_lambda() const { return prefix_lambda_; }
  std::span<const double> prefix_recip() const { return prefix_recip_; }
  std::span<const double> prefix_log_euler() const { return prefix_log_euler_; }

  // pi(x) for x <= limit.
  std::size_t count_upto(std::uint64_t x) const;

  // lambda_m = sum_{p <= m} log(p)/p, in nats. Requires 2 <= m <= limit.
  double lambda(std::uint64_t m) const;

  // sum_{p <= m} 1/p. Requires 2 <= m <= limit.
  double reciprocal_sum(std::uint64_t m) const;

  // sum_{p <= m} log(1 - 1/p); zero for m < 2.
  double log_euler_product(std::uint64_t m) const;

  // I_m = prod_{p <= m} (1 - 1/p); 1 for m < 2.
  double euler_product(std::uint64_t m) const;

  // Smallest prime strictly greater than x. Throws RangeError when the table
  // holds no such prime.
  std::uint64_t next_prime(std::uint64_t x) const;

  // Largest prime <= x, if any.
  std::optional<std::uint64_t> prime_floor(std::uint64_t x) const;

 private:
  void check_range(std::uint64_t m, const char* what) const;

  std::uint64_t limit_ = 0;
  std::vector<std::uint64_t> primes_;
  std::vector<double> prefix_lambda_;
  std::vector<double> prefix_recip_;
  std::vector<double> prefix_log_euler_;
};

inline PrimeTable build_prime_table(std::uint64_t limit) { return PrimeTable::build(limit); }

// Ascending primes <= limit (segmented sieve of Eratosthenes).
std::vector<std::uint64_t> sieve_primes(std::uint64_t limit);

// L_n = sum_{j <= n} 1/j. Exact compensated summation for n <= exact_limit,
// Euler-Maclaurin beyond.
double harmonic(std::uint64_t n, std::uint64_t exact_limit = kHarmonicExactLimit);

// Second Mertens constant c1, estimated from the table itself: the residual
// sum 1/p - log log x is Richardson-extrapolated from x = sqrt(limit) and
// x = limit assuming an error term proportional to 1/log^2 x.
struct MertensConstantEstimate {
  double c1 = 0.0;
  double raw_at_limit = 0.0;       // sum_{p<=N} 1/p - log log N
  double raw_at_sqrt_limit = 0.0;  // same at sqrt(N)
};
MertensConstantEstimate estimate_mertens_c1(const PrimeTable& table);

// One row of the Mertens report. Columns follow the CLI's CSV layout.
struct MertensRecord {
  std::uint64_t n = 0;
  double lambda = 0.0;
  double log_n = 0.0;
  double first_resid = 0.0;   // |lambda_n - log n|
  double first_bound = 0.0;   // 2 / log n
  double second_resid = 0.0;  // |sum 1/p - log log n - c1|
  double second_bound = 0.0;  // 5 / log n
  double third_scaled_resid = 0.0;  // log n * |log(n) I_n - e^{-gamma}|
  std::uint64_t pi_n = 0;
  std::optional<double> trudgian_resid;  // only for n >= 229
  std::optional<double> trudgian_bound;
  bool first_ok = false;
  bool second_ok = false;
  bool trudgian_ok = true;
  bool pass() const { return first_ok && second_ok && trudgian_ok; }
};

// Requires every n in the grid to satisfy 3 <= n <= table.limit().
std::vector<MertensRecord> mertens_report(const PrimeTable& table,
                                          std::span<const std::uint64_t> n_grid,
                                          std::optional<double> c1 = std::nullopt);

// Exhaustive sweep over every integer n in [lo, hi], used by the invariant
// suites. Violation counts are reported rather than thrown.
struct MertensSweep {
  std::uint64_t lo = 0, hi = 0;
  std::uint64_t first_literal_violations = 0;  // |lambda - log n| > 2/log n
  std::optional<std::uint64_t> first_literal_first_violation;
  double first_resid_max = 0.0;                // sup |lambda_n - log n|
  std::uint64_t first_classic_violations = 0;  // |lambda - log n| > 2
  std::uint64_t harmonic_bracket_violations = 0;  // log n <= L_n <= log n + 1
  std::uint64_t coverage_violations = 0;          // L_n I_n >= 1/2 for n >= 21
  double coverage_min = 1.0;
  std::uint64_t trudgian_violations = 0;  // n >= 229
  double trudgian_ratio_max = 0.0;        // resid / bound
  double third_scaled_max = 0.0;          // sup log n |log n I_n - e^{-gamma}|
  double third_scaled_max_upper = 0.0;    // same sup restricted to the top decade
  double third_scaled_max_lower = 0.0;    // same sup below the top decade
  double third_double_scaled_max_upper = 0.0;  // log^2 n |...| on the top decade
  double third_double_scaled_max_lower = 0.0;
  std::uint64_t monotonicity_violations = 0;
};
MertensSweep sweep_mertens(const PrimeTable& table, std::uint64_t lo, std::uint64_t hi);

}  // namespace smoothlab

#endif  // SMOOTHLAB_PRIME_TABLES_HPP_
