#pragma once

#include <cstdint>
#include <random>

namespace selfnorm {

using Rng = std::mt19937_64;

/// A reproducible random stream identified by (master seed, index). Streams
/// with distinct indices are statistically independent for practical
/// purposes; the same pair always yields the same engine state.
struct Substream {
  std::uint64_t master = 0;
  std::uint64_t index = 0;

  [[nodiscard]] Rng engine() const;
  [[nodiscard]] Substream child(std::uint64_t i) const;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

}  // namespace selfnorm
