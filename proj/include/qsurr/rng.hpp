#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace qsurr {

// splitmix64 finalizer, used to decorrelate derived seeds.
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Derives an independent stream seed from a master seed, a purpose tag and a
// running index. Every RNG stream in a run is rooted here so that a single
// master seed reproduces the whole experiment.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t tag,
                                 std::uint64_t index = 0) {
  return mix64(mix64(master + 0x9e3779b97f4a7c15ULL * (tag + 1)) +
               0xd1b54a32d192ed03ULL * (index + 1));
}

// mt19937_64 core with hand-rolled distributions. The standard engine output
// is pinned by the C++ standard, and the conversions below avoid the
// implementation-defined behavior of std::uniform_*_distribution, so streams
// are reproducible across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // uniform in [0, 1) with 53-bit resolution
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // uniform integer in [0, n), rejection sampled
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      const std::uint64_t r = engine_();
      if (r >= threshold) return r % n;
    }
  }

  // fair coin over {-1, +1}
  int sign() { return (engine_() & 1u) ? +1 : -1; }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i)
      std::swap(v[i - 1], v[below(i)]);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace qsurr
