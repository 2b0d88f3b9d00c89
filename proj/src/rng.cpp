#include "qtg/rng.hpp"

namespace qtg {

namespace {
constexpr std::size_t kN = 624;
constexpr std::size_t kM = 397;
constexpr std::uint32_t kMatrixA = 0x9908b0dfu;
constexpr std::uint32_t kUpperMask = 0x80000000u;
constexpr std::uint32_t kLowerMask = 0x7fffffffu;
} // namespace

Mt19937::Mt19937(std::uint32_t seed) : index_(kN) {
  state_[0] = seed;
  for (std::size_t i = 1; i < kN; ++i)
    state_[i] = 1812433253u * (state_[i - 1] ^ (state_[i - 1] >> 30)) +
                static_cast<std::uint32_t>(i);
}

void Mt19937::twist() {
  for (std::size_t i = 0; i < kN; ++i) {
    const std::uint32_t y =
        (state_[i] & kUpperMask) | (state_[(i + 1) % kN] & kLowerMask);
    state_[i] = state_[(i + kM) % kN] ^ (y >> 1) ^ ((y & 1u) ? kMatrixA : 0u);
  }
  index_ = 0;
}

std::uint32_t Mt19937::next_u32() {
  if (index_ >= kN) twist();
  std::uint32_t y = state_[index_++];
  y ^= y >> 11;
  y ^= (y << 7) & 0x9d2c5680u;
  y ^= (y << 15) & 0xefc60000u;
  y ^= y >> 18;
  return y;
}

double Mt19937::next_real53() {
  const std::uint32_t a = next_u32() >> 5; // 27 bits
  const std::uint32_t b = next_u32() >> 6; // 26 bits
  return (a * 67108864.0 + b) / 9007199254740992.0; // (a*2^26 + b) / 2^53
}

std::uint64_t Mt19937::uniform_in_range(std::uint64_t lo, std::uint64_t hi) {
  if (lo > hi) return lo;
  const std::uint64_t span = hi - lo + 1;
  if (span == 1) return lo;
  if (span == 0) // full 64-bit range
    return (static_cast<std::uint64_t>(next_u32()) << 32) | next_u32();
  // Rejection sampling over 64-bit draws keeps the distribution exactly
  // uniform for any span.
  const std::uint64_t limit = span * (~std::uint64_t{0} / span);
  for (;;) {
    const std::uint64_t draw =
        (static_cast<std::uint64_t>(next_u32()) << 32) | next_u32();
    if (draw < limit) return lo + draw % span;
  }
}

} // namespace qtg
