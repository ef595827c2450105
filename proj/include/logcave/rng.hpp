#pragma once

#include <cstdint>
#include <random>

namespace logcave {

//! splitmix64 finalizer; used to derive independent child seeds.
constexpr std::uint64_t
mix_seed(std::uint64_t z) noexcept
{
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

//! Seeded random stream. Variates are built from raw 64-bit engine output
//! rather than std:: distributions so that streams are identical across
//! standard library implementations.
class Rng
{
public:
  explicit Rng(std::uint64_t seed)
    : engine_(seed)
  {}

  //! Uniform on [0, 1) with 53 random bits.
  double uniform()
  {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  //! Uniform on the open interval (0, 1).
  double uniform_open()
  {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  double exponential();

  //! Standard normal via Box-Muller (one variate per call).
  double normal();

private:
  std::mt19937_64 engine_;
};

} // namespace logcave
