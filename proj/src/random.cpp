#include "smoothlab/random.hpp"

namespace smoothlab {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

RandomSource::RandomSource(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed), stream_(stream), engine_(splitmix64(splitmix64(seed) ^ stream)) {}

RandomSource RandomSource::substream(std::uint64_t index) const {
  return RandomSource(seed_, splitmix64(stream_ * 0x2545f4914f6cdd1dULL + index + 1));
}

}  // namespace smoothlab
