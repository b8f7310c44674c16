#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "qmimo/linalg.hpp"

namespace qmimo {

// Uniform PAM constellation: points a*(2m - 1 - M), m = 1..M, M = 2^bits.
// Zero bits means the single point {0}.
struct Constellation {
  unsigned bits_per_symbol = 0;  // log2 of the point count
  double power = 0.0;
  double scale = 0.0;  // a
  std::vector<double> points;

  std::size_t size() const { return points.size(); }
};

namespace detail {

inline Constellation make_pam(unsigned effective_bits, double power) {
  if (power < 0.0)
    throw std::invalid_argument("constellation: negative power");
  Constellation c;
  c.bits_per_symbol = effective_bits;
  c.power = power;
  if (effective_bits == 0) {
    c.scale = 0.0;
    c.points = {0.0};
    return c;
  }
  const double big_m = std::ldexp(1.0, static_cast<int>(effective_bits));
  c.scale = std::sqrt(3.0 * power / (big_m * big_m - 1.0));
  c.points.resize(static_cast<std::size_t>(big_m));
  for (std::size_t m = 1; m <= c.points.size(); ++m)
    c.points[m - 1] = c.scale * (2.0 * static_cast<double>(m) - 1.0 - big_m);
  return c;
}

}  // namespace detail

// Point-to-point subchannel constellation: M = 2^bits, a = sqrt(3P/(M^2-1)).
inline Constellation make_constellation_ptp(unsigned bits, double power) {
  return detail::make_pam(bits, power);
}

// Broadcast subchannel constellation: each ADC-bit budget n_q buys 2*n_q
// refinement steps per sample, so M = 2^(2*n_q) and a = sqrt(3P/(M^2-1)).
inline Constellation make_constellation_bc(unsigned bits_budget, double power) {
  return detail::make_pam(2 * bits_budget, power);
}

namespace detail {

inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline double uniform01(std::uint64_t word) {
  // (0,1]: avoids log(0) in the Box-Muller transform below.
  return (static_cast<double>(word >> 11) + 1.0) * 0x1.0p-53;
}

}  // namespace detail

// Counter-based Gaussian stream: sample i is a pure function of
// (seed, stream_id, i), so chunks may be drawn in any order and distinct
// stream ids are independent.
class NoiseStream {
 public:
  NoiseStream(std::uint64_t seed, std::uint64_t stream_id)
      : key_(detail::mix64(seed ^ detail::mix64(stream_id ^ 0xda3e39cb94b95bdbULL))) {}

  double normal_at(std::uint64_t index) const {
    const std::uint64_t w1 = detail::mix64(key_ ^ (2 * index));
    const std::uint64_t w2 = detail::mix64(key_ ^ (2 * index + 1));
    const double u1 = detail::uniform01(w1);
    const double u2 = detail::uniform01(w2);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
  }

  double next() { return normal_at(counter_++); }

  void fill(std::vector<double>& out) {
    for (double& v : out) v = next();
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

// Counter-based uniform index stream, companion to NoiseStream. Used to
// draw constellation symbols independently of the noise.
class SymbolStream {
 public:
  SymbolStream(std::uint64_t seed, std::uint64_t stream_id)
      : key_(detail::mix64(seed ^ detail::mix64(stream_id ^ 0xa0761d6478bd642fULL))) {}

  std::size_t index_at(std::uint64_t counter, std::size_t num_points) const {
    const std::uint64_t w = detail::mix64(key_ ^ counter);
    // Multiply-shift keeps the draw unbiased enough for power-of-two sizes.
    return static_cast<std::size_t>((static_cast<unsigned __int128>(w) * num_points) >> 64);
  }

  std::size_t next(std::size_t num_points) { return index_at(counter_++, num_points); }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

// Y = h x + N with unit-variance Gaussian noise from the stream.
inline std::vector<double> apply_channel(const Matrix& h,
                                         const std::vector<double>& x,
                                         NoiseStream& noise) {
  std::vector<double> y = matvec(h, x);
  for (double& v : y) v += noise.next();
  return y;
}

// Noiseless variant for deterministic checks.
inline std::vector<double> apply_channel_noiseless(const Matrix& h,
                                                   const std::vector<double>& x) {
  return matvec(h, x);
}

}  // namespace qmimo
