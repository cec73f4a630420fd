#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <string_view>

namespace edepth {

/// Seedable counter-based generator (SplitMix64 output function over a
/// keyed counter). Substreams are derived by hashing a name and index into
/// a fresh key, so independent noise sources never share draws and toggling
/// one source leaves the others untouched.
class Rng {
public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) : key_(mix(seed ^ 0x6a09e667f3bcc909ULL)) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() { return mix(key_ + (++counter_) * 0x9e3779b97f4a7c15ULL); }

  Rng substream(std::string_view name, std::uint64_t index = 0) const;

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal draw (Box-Muller; one draw per call, no cached pair).
  double normal();
  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  std::uint64_t key() const noexcept { return key_; }

  static std::uint64_t mix(std::uint64_t z);

private:
  Rng(std::uint64_t key, int) : key_(key) {}

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

} // namespace edepth
