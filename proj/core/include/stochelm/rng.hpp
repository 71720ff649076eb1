#ifndef STOCHELM_RNG_HPP
#define STOCHELM_RNG_HPP

#include <cstdint>

namespace stochelm
{

// Counter-based uniform stream keyed on (seed, index, stream tag). The n-th draw is a pure
// function of the key and n, so sample i never depends on samples drawn before it.
class KeyedStream
{
public:
  KeyedStream(std::uint64_t seed, std::uint64_t index, std::uint64_t tag = 0);

  // Raw 64-bit output for counter value n.
  std::uint64_t bits(std::uint64_t n) const;

  // Uniform on [-1/2, 1/2) with 53-bit resolution.
  double centered_uniform(std::uint64_t n) const;

  // Sequential access.
  double next_centered_uniform() { return centered_uniform(counter_++); }

  std::uint64_t key() const { return key_; }

private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

// SplitMix64 finaliser.
std::uint64_t mix64(std::uint64_t x);

// Stream tags used across the library.
inline constexpr std::uint64_t kCoefficientStream = 0x636f656666ULL;
inline constexpr std::uint64_t kSourceAmplitudeStream = 0x736f757263ULL;

}  // namespace stochelm

#endif  // STOCHELM_RNG_HPP
