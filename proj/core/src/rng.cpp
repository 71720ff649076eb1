#include "stochelm/rng.hpp"

namespace stochelm
{

namespace
{
constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
}

std::uint64_t mix64(std::uint64_t x)
{
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

KeyedStream::KeyedStream(std::uint64_t seed, std::uint64_t index, std::uint64_t tag)
  : key_(mix64(mix64(seed + kGolden) ^ mix64(index * kGolden + tag)) ^ tag)
{
}

std::uint64_t KeyedStream::bits(std::uint64_t n) const
{
  return mix64(key_ + (n + 1) * kGolden);
}

double KeyedStream::centered_uniform(std::uint64_t n) const
{
  constexpr double kScale = 1.0 / 9007199254740992.0;  // 2^-53
  return static_cast<double>(bits(n) >> 11) * kScale - 0.5;
}

}  // namespace stochelm
