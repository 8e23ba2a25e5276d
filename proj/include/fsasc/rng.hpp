#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace fsasc {

/// Portable seeded random source: std::mt19937_64 (whose output sequence is
/// fixed by the standard) plus hand-written uniform and normal transforms,
/// so draws are bit-identical across standard library implementations.
///
/// Independent streams come from `derive`, which mixes a parent seed with a
/// list of stream identifiers through SplitMix64. Generators for different
/// purposes (subspace i's basis, subspace i's points, trial t, ...) each get
/// their own stream so adding one consumer never shifts another's draws.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  static std::uint64_t derive(std::uint64_t seed, std::initializer_list<std::uint64_t> stream);

  std::uint64_t next() { return engine_(); }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  /// Uniform integer on [0, bound), unbiased.
  std::uint64_t below(std::uint64_t bound);
  /// Standard normal via the Marsaglia polar method.
  double normal();

private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace fsasc
