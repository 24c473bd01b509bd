#pragma once

#include <cstdint>

namespace fairmab {

// SplitMix64 finalizer. Full-avalanche 64-bit mix; the basis for both the
// sequential counter stream and keyed (counter-addressed) draws.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Purpose tags for stream derivation. Kept in one place so every module
// derives non-colliding streams from the same experiment seed.
enum class StreamPurpose : std::uint64_t {
  instance = 1,  // instance/means generation (shared across algorithms)
  reward = 2,    // reward draws
  policy = 3,    // arm sampling from within-group policies
  aux = 4,       // test oracles, L1 estimation, misc sampling
};

// A counter-based random stream keyed by (seed, run, purpose[, algorithm]).
//
// Stream key derivation (the documented mixing function):
//   key = mix64(mix64(mix64(mix64(seed) ^ run) ^ purpose) ^ algo)
// Distinct (seed, run, purpose, algo) tuples give unrelated keys.
//
// Two access modes, both pure functions of (key, counter):
//   - next_u64()/next_u01(): sequential, advances an internal counter;
//   - u01_at(a, b): addressed draw for a 2d counter (e.g. arm, pull ordinal),
//     independent of the sequential counter.
class RngStream {
 public:
  RngStream() = default;
  RngStream(std::uint64_t seed, std::uint64_t run, StreamPurpose purpose,
            std::uint64_t algo = 0) noexcept
      : key_(derive_key(seed, run, purpose, algo)) {}

  static std::uint64_t derive_key(std::uint64_t seed, std::uint64_t run,
                                  StreamPurpose purpose,
                                  std::uint64_t algo) noexcept {
    std::uint64_t k = mix64(seed);
    k = mix64(k ^ run);
    k = mix64(k ^ static_cast<std::uint64_t>(purpose));
    k = mix64(k ^ algo);
    return k;
  }

  std::uint64_t key() const noexcept { return key_; }

  std::uint64_t next_u64() noexcept { return mix64(key_ + ++counter_ * kGamma); }

  // Uniform on [0, 1): top 53 bits scaled by 2^-53. Never returns 1.0.
  double next_u01() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  std::uint64_t u64_at(std::uint64_t a, std::uint64_t b) const noexcept {
    std::uint64_t h = mix64(key_ ^ (a * 0xd1342543de82ef95ULL));
    return mix64(h ^ (b * 0xaf251af3b0f025b5ULL));
  }

  double u01_at(std::uint64_t a, std::uint64_t b) const noexcept {
    return static_cast<double>(u64_at(a, b) >> 11) * 0x1.0p-53;
  }

 private:
  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;
  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
};

}  // namespace fairmab
