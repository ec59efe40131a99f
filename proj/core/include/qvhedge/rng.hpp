#pragma once

#include <array>
#include <cstdint>

namespace qvhedge {

/// Philox4x32-10 counter-based generator (Salmon, Moraes, Dror, Shaw 2011).
/// Every output block is a pure function of (counter, key).
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter generate(Counter counter, Key key);
};

/// Standard normal quantile, Wichura's AS241 (PPND16), relative accuracy ~1e-16.
/// p must lie in (0, 1).
double inverse_normal_cdf(double p);

/// Maps 64 random bits to a double strictly inside (0, 1).
inline double to_open_unit(std::uint64_t bits) {
  return (static_cast<double>(bits >> 12) + 0.5) * 0x1.0p-52;
}

struct NormalPair {
  double z1;
  double z2;
};

/// Independent per-path stream: draw j depends only on (seed, path, j), so a path
/// is reproduced exactly no matter which worker simulates it or in what order.
class PathStream {
public:
  PathStream(std::uint64_t seed, std::uint64_t path);

  /// Two independent N(0,1) variates for time step `step`.
  [[nodiscard]] NormalPair normals(std::uint64_t step) const;

private:
  Philox4x32::Key key_;
  std::uint32_t path_lo_;
  std::uint32_t path_hi_;
};

}  // namespace qvhedge
