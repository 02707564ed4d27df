#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>

namespace insdecay {

/// Counter-based generator: every draw is a pure function of
/// (seed, stream, counter), so results do not depend on call order,
/// thread schedule or the platform's <random> distributions.
class CounterRng {
 public:
  constexpr CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept
      : key_(mix(seed ^ mix(stream + 0x632be59bd9b4e019ULL))) {}

  /// Named stream, e.g. CounterRng(seed, "velocity-phase").
  constexpr CounterRng(std::uint64_t seed, std::string_view name) noexcept
      : CounterRng(seed, hash_name(name)) {}

  constexpr std::uint64_t bits(std::uint64_t counter) const noexcept {
    return mix(key_ + mix(counter ^ 0x9e3779b97f4a7c15ULL));
  }

  /// Uniform double in [0, 1).
  constexpr double uniform(std::uint64_t counter) const noexcept {
    return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
  }

  double uniform(std::uint64_t counter, double lo, double hi) const noexcept {
    return lo + (hi - lo) * uniform(counter);
  }

  /// Uniform phase in [0, 2 pi).
  double phase(std::uint64_t counter) const noexcept {
    return 2.0 * std::numbers::pi * uniform(counter);
  }

  /// Standard normal via Box-Muller on two consecutive counters.
  double normal(std::uint64_t counter) const noexcept {
    const double u1 = 1.0 - uniform(2 * counter);
    const double u2 = uniform(2 * counter + 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  static constexpr std::uint64_t hash_name(std::string_view name) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
    for (char c : name) {
      h ^= static_cast<unsigned char>(c);
      h *= 0x100000001b3ULL;
    }
    return h;
  }

 private:
  // SplitMix64 finalizer.
  static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t key_;
};

}  // namespace insdecay
