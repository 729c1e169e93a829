#pragma once

#include <array>
#include <cstdint>
#include <cstddef>

namespace isodepth {

// splitmix64; used for seeding and for deriving per-stream keys.
struct SplitMix64 {
  std::uint64_t state;

  constexpr std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
};

// Deterministic 64-bit key for a substream; Rng::for_stream(seed, s) and
// Rng(derive_seed(seed, s)) give unrelated but equally usable streams.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  SplitMix64 sm{seed};
  const std::uint64_t a = sm.next();
  SplitMix64 sm2{a ^ (stream * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL)};
  return sm2.next();
}

// xoshiro256** seeded via splitmix64. All draws are implemented in plain
// integer/double arithmetic so streams are identical across platforms and
// standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    SplitMix64 sm{seed};
    for (auto& word : state_) word = sm.next();
  }

  // Deterministic substream keyed by (seed, stream); used for per-tree,
  // per-trial and per-cell independence.
  static Rng for_stream(std::uint64_t seed, std::uint64_t stream) {
    SplitMix64 sm{seed};
    std::uint64_t a = sm.next();
    SplitMix64 sm2{a ^ (stream * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL)};
    Rng rng(0);
    for (auto& word : rng.state_) word = sm2.next();
    return rng;
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform in [0, 1) with 53-bit resolution.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in [lo, hi). Rounding can still land on hi when the interval is
  // wide; callers that must exclude hi re-draw.
  double uniform(double lo, double hi) { return lo + next_double() * (hi - lo); }

  // Uniform in [0, bound). bound <= 1 returns 0 without consuming a draw, so
  // degenerate choices (e.g. a single candidate attribute) leave the stream
  // untouched.
  std::size_t uniform_index(std::size_t bound) {
    if (bound <= 1) return 0;
    const std::uint64_t b = bound;
    // Lemire's multiply-shift with rejection; unbiased and deterministic.
    std::uint64_t x = next_u64();
    unsigned __int128 m = static_cast<unsigned __int128>(x) * b;
    auto low = static_cast<std::uint64_t>(m);
    if (low < b) {
      const std::uint64_t threshold = (0 - b) % b;
      while (low < threshold) {
        x = next_u64();
        m = static_cast<unsigned __int128>(x) * b;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::size_t>(m >> 64);
  }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::array<std::uint64_t, 4> state_{};
};

}  // namespace isodepth
