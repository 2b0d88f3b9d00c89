#ifndef QTG_RNG_HPP
#define QTG_RNG_HPP

#include <array>
#include <cstdint>

namespace qtg {

/// MT19937 generator with the standard 2002 seeding routine. Hand-rolled so
/// that the derived draws below are bit-identical everywhere:
///   - next_real53(): uniform in [0,1) from 53 bits (27 + 26 bit halves),
///   - uniform_in_range(): rejection sampling, no modulo bias.
class Mt19937 {
public:
  explicit Mt19937(std::uint32_t seed);

  std::uint32_t next_u32();

  /// Uniform double in [0, 1) with 53-bit resolution; consumes two words.
  double next_real53();

  /// Uniform integer in [lo, hi], both inclusive. Consumes two words per
  /// attempt; a degenerate range consumes none.
  std::uint64_t uniform_in_range(std::uint64_t lo, std::uint64_t hi);

private:
  void twist();

  std::array<std::uint32_t, 624> state_;
  std::size_t index_;
};

} // namespace qtg

#endif // QTG_RNG_HPP
