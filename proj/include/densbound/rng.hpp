#pragma once

#include <cstdint>
#include <cmath>

// Counter-based random numbers (Philox4x32-10). Every normal increment is
// addressed by (seed, path, step, coord, stream), so a batch partitioned
// across threads produces bitwise the same stream as a serial run.

namespace densbound::rng {

struct Block {
  std::uint32_t v[4];
};

inline void philox_round(std::uint32_t (&c)[4], std::uint32_t k0, std::uint32_t k1) {
  const std::uint64_t p0 = std::uint64_t{0xD2511F53u} * c[0];
  const std::uint64_t p1 = std::uint64_t{0xCD9E8D57u} * c[2];
  const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
  const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
  const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
  const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
  c[0] = hi1 ^ c[1] ^ k0;
  c[1] = lo1;
  c[2] = hi0 ^ c[3] ^ k1;
  c[3] = lo0;
}

inline Block philox4x32_10(std::uint32_t c0, std::uint32_t c1, std::uint32_t c2,
                           std::uint32_t c3, std::uint64_t seed) {
  std::uint32_t c[4] = {c0, c1, c2, c3};
  std::uint32_t k0 = static_cast<std::uint32_t>(seed);
  std::uint32_t k1 = static_cast<std::uint32_t>(seed >> 32);
  for (int r = 0; r < 10; ++r) {
    philox_round(c, k0, k1);
    k0 += 0x9E3779B9u;
    k1 += 0xBB67AE85u;
  }
  return Block{{c[0], c[1], c[2], c[3]}};
}

// 53-bit uniform in the open interval (0,1).
inline double uniform_open(std::uint32_t hi, std::uint32_t lo) {
  const std::uint64_t bits = (std::uint64_t{hi} << 32) | lo;
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1p-53;
}

// Inverse of the standard normal distribution function (Acklam's rational
// approximation, relative error ~1.15e-9 — ample for Monte Carlo use).
inline double inverse_normal_cdf(double p) {
  static constexpr double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                  -2.759285104469687e+02, 1.383577518672690e+02,
                                  -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                  -1.556989798598866e+02, 6.680131188771972e+01,
                                  -1.328068155288572e+01};
  static constexpr double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                  -2.400758277161838e+00, -2.549732539343734e+00,
                                  4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                  2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > 1.0 - p_low) {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

// Stream ids separate independent uses of the same (path, step, coord) slot.
enum Stream : std::uint32_t { kIncrements = 0u };

// Standard normal increment for (path, step, coord). One Philox block
// carries two 53-bit uniforms; consecutive steps share a block via the
// low bit of the step index, which halves the generator cost.
inline double normal(std::uint64_t seed, std::uint64_t path, std::uint64_t step,
                     std::uint32_t coord, std::uint32_t stream = kIncrements) {
  const Block blk =
      philox4x32_10(static_cast<std::uint32_t>(step >> 1),
                    static_cast<std::uint32_t>(path),
                    coord | (stream << 24),
                    static_cast<std::uint32_t>(path >> 32) ^ static_cast<std::uint32_t>(step >> 33),
                    seed);
  const double u = (step & 1u) ? uniform_open(blk.v[2], blk.v[3])
                               : uniform_open(blk.v[0], blk.v[1]);
  return inverse_normal_cdf(u);
}

}  // namespace densbound::rng
