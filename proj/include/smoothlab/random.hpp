#ifndef SMOOTHLAB_RANDOM_HPP_
#define SMOOTHLAB_RANDOM_HPP_

#include <cstdint>
#include <random>

namespace smoothlab {

// Deterministic, splittable uniform stream. The engine is std::mt19937_64
// seeded from a SplitMix64 mix of (seed, stream); both algorithms are fully
// defined bit for bit, so streams are identical across platforms.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  // Independent child stream; the result depends only on (seed, stream, index).
  RandomSource substream(std::uint64_t index) const;

  std::uint64_t next_u64() { return engine_(); }
  // Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace smoothlab

#endif  // SMOOTHLAB_RANDOM_HPP_
