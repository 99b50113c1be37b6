#ifndef SMOOTHLAB_SAMPLERS_HPP_
#define SMOOTHLAB_SAMPLERS_HPP_

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "smoothlab/dickman.hpp"
#include "smoothlab/parallel.hpp"
#include "smoothlab/prime_tables.hpp"
#include "smoothlab/random.hpp"

namespace smoothlab {

inline constexpr std::uint64_t kHarmonicDirectCap = 10'000'000;
inline constexpr int kDefaultPerpetuityDepth = 60;

// Geometric on {0, 1, ...} with P[k] = (1 - theta) theta^k, by inversion.
std::uint64_t sample_geometric_theta(double theta, RandomSource& rng);

// xi_p: P[xi_p = k] = (1 - 1/p) p^{-k}; k = floor(log U / log(1/p)).
std::uint64_t sample_geometric(std::uint64_t p, RandomSource& rng);

// Prime multiplicities of one draw. Only non-zero exponents are stored,
// ascending by prime.
struct MultiplicityVector {
  std::uint64_t m = 0;
  std::vector<std::pair<std::uint64_t, std::uint32_t>> exponents;
  double log_product = 0.0;

  std::uint32_t exponent(std::uint64_t p) const;
  // prod p^e, or nullopt on 64-bit overflow.
  std::optional<std::uint64_t> product() const;
};

// Draws (xi_p)_{p <= m} jointly. Primes are grouped into dyadic blocks
// [2^b, 2^{b+1}); within a block, positions with xi_p >= 1 are found by
// geometric gaps at the block's largest rate 1/p_first and thinned by
// p_first / p. Given xi_p >= 1, xi_p - 1 is again geometric. The joint law is
// exactly that of independent xi_p, at O(log log m) work per draw.
class GeometricProductSampler {
 public:
  GeometricProductSampler(const PrimeTable& table, std::uint64_t m);

  std::uint64_t m() const { return m_; }

  // Z_m = sum log(p) xi_p.
  double draw_log(RandomSource& rng) const;
  MultiplicityVector draw(RandomSource& rng) const;
  // The draw restricted to the event prod p^{xi_p} <= bound, visiting primes
  // in increasing order and stopping as soon as the product exceeds bound.
  // Returns nullopt when the event fails.
  std::optional<MultiplicityVector> draw_bounded(RandomSource& rng, std::uint64_t bound) const;

 private:
  struct Block {
    std::size_t begin, end;
    double log_miss;  // log(1 - 1/p_first)
  };
  template <class Visit>
  bool visit_hits(RandomSource& rng, Visit&& visit) const;

  std::uint64_t m_;
  std::vector<std::uint64_t> primes_;
  std::vector<double> log_p_;
  std::vector<Block> blocks_;
};

// S_m = Z_m / lambda_m.
class SmSampler {
 public:
  SmSampler(const PrimeTable& table, std::uint64_t m);
  double draw(RandomSource& rng) const { return product_.draw_log(rng) / lambda_; }
  double lambda() const { return lambda_; }

 private:
  GeometricProductSampler product_;
  double lambda_;
};

double sample_s_m(const PrimeTable& table, std::uint64_t m, RandomSource& rng);

// H_n with P[H_n = k] = 1 / (L_n k), via binary search on prefix sums.
class HarmonicDirectSampler {
 public:
  explicit HarmonicDirectSampler(std::uint64_t n);  // UsageError above 1e7
  std::uint64_t n() const { return n_; }
  std::uint64_t draw(RandomSource& rng) const;

 private:
  std::uint64_t n_;
  std::vector<double> prefix_;  // prefix_[k-1] = L_k
};

std::uint64_t sample_harmonic_direct(std::uint64_t n, RandomSource& rng);

struct RejectionDraw {
  MultiplicityVector multiplicities;
  std::uint64_t attempts = 0;
  std::uint64_t product = 1;
};

// (xi_p)_{p <= n} conditioned on prod p^{xi_p} <= n; the product is then
// harmonically distributed on [n].
class HarmonicRejectionSampler {
 public:
  HarmonicRejectionSampler(const PrimeTable& table, std::uint64_t n);
  std::uint64_t n() const { return n_; }
  RejectionDraw draw(RandomSource& rng) const;
  // A single attempt: true when the draw lands in A_n.
  bool attempt(RandomSource& rng) const;

 private:
  std::uint64_t n_;
  std::optional<GeometricProductSampler> product_;  // empty for n = 1
};

RejectionDraw sample_harmonic_rejection(const PrimeTable& table, std::uint64_t n,
                                        RandomSource& rng);

enum class DickmanMethod { kQuantile, kPerpetuity };

// kQuantile inverts the tabulated CDF; kPerpetuity iterates x <- U (x + 1)
// from x = 0, `depth` times (depth >= 30).
double sample_dickman(const DickmanTable& table, RandomSource& rng, DickmanMethod method,
                      int depth = kDefaultPerpetuityDepth);

inline constexpr std::uint64_t kSampleChunk = 1 << 15;

// count draws of fn(rng), chunk c drawn from base.substream(c); the output is
// independent of the number of worker threads.
template <class T, class Fn>
std::vector<T> sample_batch(std::uint64_t count, const RandomSource& base, Fn&& fn) {
  std::vector<T> out(count);
  const std::uint64_t chunks = (count + kSampleChunk - 1) / kSampleChunk;
  parallel_for(chunks, [&](std::size_t c) {
    RandomSource rng = base.substream(c);
    const std::uint64_t lo = c * kSampleChunk;
    const std::uint64_t hi = std::min(count, lo + kSampleChunk);
    for (std::uint64_t i = lo; i < hi; ++i) out[i] = fn(rng);
  });
  return out;
}

}  // namespace smoothlab

#endif  // SMOOTHLAB_SAMPLERS_HPP_
