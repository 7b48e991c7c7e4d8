#pragma once

#include <cstdint>

namespace mrsim {

/// Minimal deterministic RNG (splitmix64 core, Box-Muller normals).
/// Self-contained so that seeded draws are byte-identical across toolchains,
/// which the logging/replay contract relies on.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Standard normal draw (Box-Muller, no cached spare).
  double normal();

 private:
  std::uint64_t state_;
};

}  // namespace mrsim
