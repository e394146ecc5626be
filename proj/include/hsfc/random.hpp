#pragma once

#include <cstdint>
#include <random>

namespace hsfc {

// 64-bit finalizer (splitmix64 / Stafford variant 13). Bijective on uint64.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Child seed = first 8 bytes of SHA-256(parent || tag), both little-endian.
// Used for per-replication seeds and for splitting one replication seed into
// independent sub-streams (scrambler, residual draws, ...).
std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t tag);

// Sub-stream tags.
enum class Stream : std::uint64_t {
  scrambler = 1,
  residual = 2,
  points = 3,
  net_dimension = 0x100,  // + coordinate index
};

inline std::uint64_t derive_seed(std::uint64_t parent, Stream tag) {
  return derive_seed(parent, static_cast<std::uint64_t>(tag));
}

// Uniform doubles on [0,1) with 53 random bits. The engine is fully specified by
// the standard, and the conversion is done by hand, so streams are bit-identical
// across standard libraries.
class UniformStream {
 public:
  explicit UniformStream(std::uint64_t seed) : engine_(seed) {}

  double operator()() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  std::uint64_t bits() { return engine_(); }

  // Uniform integer in [0, bound); bound > 0. Lemire's multiply-shift with rejection.
  std::uint64_t below(std::uint64_t bound);

 private:
  std::mt19937_64 engine_;
};

}  // namespace hsfc
