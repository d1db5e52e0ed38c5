#include "selfnorm/random.hpp"

namespace selfnorm {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

Rng Substream::engine() const {
  std::seed_seq seq{static_cast<std::uint32_t>(master), static_cast<std::uint32_t>(master >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                    static_cast<std::uint32_t>(splitmix64(master ^ splitmix64(index)))};
  return Rng(seq);
}

Substream Substream::child(std::uint64_t i) const {
  return {splitmix64(master ^ splitmix64(index + 0x632BE59BD9B4E019ULL)), i};
}

}  // namespace selfnorm
