#pragma once
#include <cstdint>
#include <random>

namespace treecouple {

// Mixing step of splitmix64; used to derive independent stream seeds.
std::uint64_t splitmix64(std::uint64_t x);

// Seed of the stream for trial `index` under `master`. The derivation is
// counter based, so a trial's draws do not depend on how trials are sharded:
//   stream_seed = splitmix64(splitmix64(master) ^ splitmix64(index + 0x9e3779b97f4a7c15))
std::uint64_t stream_seed(std::uint64_t master, std::uint64_t index);

/**
 * Stream of uniform draws injected into every sampler.
 *
 * Wraps a 64-bit Mersenne twister. Bounded integers use rejection on the
 * raw 64-bit output so the draw sequence is identical on every standard
 * library (std::uniform_int_distribution is implementation defined).
 */
class Rng {
public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  static Rng for_trial(std::uint64_t master, std::uint64_t index) {
    return Rng(stream_seed(master, index));
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }
  result_type operator()() { return engine_(); }

  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n);

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  bool coin() { return (engine_() >> 63) != 0; }

private:
  std::mt19937_64 engine_;
};

} // namespace treecouple
