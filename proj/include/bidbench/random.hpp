#pragma once

#include <array>
#include <cstdint>
#include <limits>

#include "bidbench/error.hpp"

namespace bidbench {

/// splitmix64 generator. Used for seeding and stream derivation only.
class SplitMix64 {
 public:
  explicit constexpr SplitMix64(std::uint64_t state) noexcept : state_(state) {}

  constexpr std::uint64_t next() noexcept {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix(state_);
  }

  // The splitmix64 output finalizer.
  static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

/// xoshiro256** seeded from splitmix64. This is the only random source the
/// synthesis pipeline uses; every draw helper below is defined on top of
/// next() so any implementation reproduces identical datasets.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  explicit constexpr RandomStream(std::uint64_t seed) noexcept {
    SplitMix64 sm(seed);
    for (auto& s : state_) s = sm.next();
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }
  constexpr result_type operator()() noexcept { return next(); }

  constexpr std::uint64_t next() noexcept {
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

  // Uniform in [0,1) from the high 53 bits.
  constexpr double uniform() noexcept {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  constexpr double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [lo, hi] (inclusive). Modulo with rejection of the
  // biased tail, so the mapping is exact and portable.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    if (hi < lo) throw InvalidArgument("uniform_int: empty range");
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    if (span == 0) return static_cast<std::int64_t>(next());
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % span;
    std::uint64_t x = next();
    while (x >= limit) x = next();
    return lo + static_cast<std::int64_t>(x % span);
  }

  constexpr bool bernoulli(double p) noexcept { return uniform() < p; }

  [[nodiscard]] constexpr const std::array<std::uint64_t, 4>& state() const noexcept { return state_; }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }

  std::array<std::uint64_t, 4> state_{};
};

/// Random lanes used per sample. Each lane is an independent stream so that
/// adding draws to one stage never shifts another stage's values.
enum class Lane : std::uint32_t {
  kCase = 0,
  kAssets = 1,
  kParams = 2,
  kRaindrops = 3,
  kAugment = 4,
};

inline constexpr std::uint64_t stream_key(std::uint64_t sample_index, std::uint32_t lane) noexcept {
  return SplitMix64::mix(sample_index * 0x9E3779B97F4A7C15ULL ^
                         SplitMix64::mix(static_cast<std::uint64_t>(lane) + 0xD1B54A32D192ED03ULL));
}

/// Stream for (master_seed, sample_index, lane); independent of call order.
inline constexpr RandomStream derive_stream(std::uint64_t master_seed, std::uint64_t sample_index,
                                            std::uint32_t lane) noexcept {
  return RandomStream(master_seed ^ stream_key(sample_index, lane));
}

inline constexpr RandomStream derive_stream(std::uint64_t master_seed, std::uint64_t sample_index,
                                            Lane lane) noexcept {
  return derive_stream(master_seed, sample_index, static_cast<std::uint32_t>(lane));
}

}  // namespace bidbench
