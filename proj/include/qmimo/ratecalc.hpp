#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "qmimo/infotheory.hpp"
#include "qmimo/linalg.hpp"
#include "qmimo/receiver.hpp"
#include "qmimo/signal.hpp"

namespace qmimo {

// Per-subchannel ADC-bit counts and transmit powers.
struct Allocation {
  std::vector<unsigned> bits;
  std::vector<double> powers;
};

struct PtpRateResult {
  double rate_quantized = 0.0;   // operational figure (SAR receiver)
  double rate_continuous = 0.0;  // unquantized-output figure
  Allocation best_allocation;
  std::vector<double> per_subchannel_mi;
};

struct RateRegion {
  std::vector<Point2D> vertices;  // convex, counterclockwise
  double r1_max = 0.0;
  double r2_max = 0.0;
};

// All compositions of budget into parts nonnegative integers, in
// lexicographic order ((0,..,budget) first component ascending).
inline std::vector<std::vector<unsigned>> enumerate_bit_allocations(unsigned budget,
                                                                    std::size_t parts) {
  if (parts < 1) throw std::invalid_argument("enumerate_bit_allocations: parts must be >= 1");
  std::vector<std::vector<unsigned>> out;
  std::vector<unsigned> cur(parts, 0);
  std::function<void(std::size_t, unsigned)> rec = [&](std::size_t idx, unsigned left) {
    if (idx + 1 == parts) {
      cur[idx] = left;
      out.push_back(cur);
      return;
    }
    for (unsigned v = 0; v <= left; ++v) {
      cur[idx] = v;
      rec(idx + 1, left - v);
    }
  };
  rec(0, budget);
  return out;
}

// Per-subchannel MI as a function of (bits, power, sigma).
using SubchannelMiFn = std::function<double(unsigned, double, double)>;

// Quantized-output MI of one point-to-point subchannel.
inline double subchannel_mi_ptp(unsigned bits, double power, double sigma) {
  if (bits == 0 || sigma == 0.0 || power <= 0.0) return 0.0;
  const Constellation c = make_constellation_ptp(bits, power);
  return mi_pam_quantized(c, sigma, build_uniform_quantizer(bits, c.scale, sigma)).value;
}

// Quantized-output MI of one broadcast subchannel (2*bits refinement steps
// per sample); the half rate factor is applied by the caller.
inline double subchannel_mi_bc(unsigned bits_budget, double power, double sigma) {
  if (bits_budget == 0 || sigma == 0.0 || power <= 0.0) return 0.0;
  const Constellation c = make_constellation_bc(bits_budget, power);
  return mi_pam_quantized(c, sigma, build_uniform_quantizer(2 * bits_budget, c.scale, sigma))
      .value;
}

namespace detail {

inline double eval_total_mi(const std::vector<unsigned>& bits,
                            const std::vector<double>& sigmas,
                            const std::vector<double>& powers,
                            const SubchannelMiFn& mi_fn) {
  double total = 0.0;
  for (std::size_t k = 0; k < bits.size(); ++k)
    total += mi_fn(bits[k], powers[k], sigmas[k]);
  return total;
}

// Golden-section maximization of f over [lo, hi].
inline double golden_max(const std::function<double(double)>& f, double lo, double hi,
                         double tol, double& best_x) {
  const double phi = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > tol) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = f(x1);
    }
  }
  best_x = 0.5 * (a + b);
  return f(best_x);
}

}  // namespace detail

// Maximizes sum_k mi_fn(bits_k, P_k, sigma_k) over the power simplex.
// Subchannels with zero bits or zero gain get zero power; any residual
// budget is parked on the first subchannel (its MI does not depend on it).
inline std::pair<std::vector<double>, double> optimize_power(
    const std::vector<unsigned>& bits, const std::vector<double>& sigmas,
    double total_power, const SubchannelMiFn& mi_fn) {
  if (bits.size() != sigmas.size())
    throw std::invalid_argument("optimize_power: bits/sigmas length mismatch");
  if (total_power < 0.0) throw std::invalid_argument("optimize_power: negative power");
  const std::size_t s = bits.size();
  std::vector<double> powers(s, 0.0);

  std::vector<std::size_t> active;
  for (std::size_t k = 0; k < s; ++k)
    if (bits[k] > 0 && sigmas[k] > 0.0) active.push_back(k);

  if (active.empty() || total_power == 0.0) {
    powers[active.empty() ? 0 : active.front()] = total_power;
    return {powers, 0.0};
  }
  if (active.size() == 1) {
    powers[active.front()] = total_power;
    return {powers, detail::eval_total_mi(bits, sigmas, powers, mi_fn)};
  }

  if (active.size() == 2) {
    const std::size_t i = active[0], j = active[1];
    auto eval = [&](double p_i) {
      return mi_fn(bits[i], p_i, sigmas[i]) + mi_fn(bits[j], total_power - p_i, sigmas[j]);
    };
    double best_p = 0.0;
    const double rate = detail::golden_max(eval, 0.0, total_power,
                                           1e-8 * std::max(total_power, 1.0), best_p);
    powers[i] = best_p;
    powers[j] = total_power - best_p;
    return {powers, rate};
  }

  // s >= 3: pairwise coordinate ascent with multi-start.
  std::vector<double> best_powers;
  double best_rate = -1.0;
  std::uint64_t rng = 0x2545f4914f6cdd1dULL;
  auto next_u01 = [&rng]() {
    rng ^= rng << 13;
    rng ^= rng >> 7;
    rng ^= rng << 17;
    return static_cast<double>(rng >> 11) * 0x1.0p-53;
  };
  for (int restart = 0; restart < 9; ++restart) {
    std::vector<double> p(s, 0.0);
    if (restart == 0) {
      for (std::size_t k : active) p[k] = total_power / static_cast<double>(active.size());
    } else {
      double norm = 0.0;
      std::vector<double> draw(active.size());
      for (double& d : draw) {
        d = -std::log(1.0 - next_u01());
        norm += d;
      }
      for (std::size_t a = 0; a < active.size(); ++a)
        p[active[a]] = total_power * draw[a] / norm;
    }
    double rate = detail::eval_total_mi(bits, sigmas, p, mi_fn);
    for (int round = 0; round < 60; ++round) {
      double improved = 0.0;
      for (std::size_t a = 0; a + 1 < active.size(); ++a) {
        for (std::size_t b = a + 1; b < active.size(); ++b) {
          const std::size_t i = active[a], j = active[b];
          const double pool = p[i] + p[j];
          if (pool <= 0.0) continue;
          auto eval = [&](double p_i) {
            return mi_fn(bits[i], p_i, sigmas[i]) + mi_fn(bits[j], pool - p_i, sigmas[j]);
          };
          const double before = mi_fn(bits[i], p[i], sigmas[i]) +
                                mi_fn(bits[j], p[j], sigmas[j]);
          double best_p = 0.0;
          const double after =
              detail::golden_max(eval, 0.0, pool, 1e-6 * std::max(pool, 1.0), best_p);
          if (after > before) {
            improved += after - before;
            p[i] = best_p;
            p[j] = pool - best_p;
            rate += after - before;
          }
        }
      }
      if (improved < 1e-10) break;
    }
    rate = detail::eval_total_mi(bits, sigmas, p, mi_fn);
    if (rate > best_rate) {
      best_rate = rate;
      best_powers = p;
    }
  }
  return {best_powers, best_rate};
}

// Achievable point-to-point rate: exhaustive search over ADC-bit
// compositions, power optimization per composition. Ties go to the
// lexicographically smallest bit vector.
inline PtpRateResult theorem1_rate(const Matrix& h, unsigned n_q, double total_power) {
  if (total_power < 0.0) throw std::invalid_argument("theorem1_rate: negative power");
  const SvdFactors f = svd(h);
  const std::vector<double>& sigmas = f.singular_values;
  const std::size_t s = sigmas.size();

  PtpRateResult result;
  result.best_allocation.bits.assign(s, 0);
  result.best_allocation.powers.assign(s, 0.0);
  result.best_allocation.powers[0] = total_power;
  result.per_subchannel_mi.assign(s, 0.0);

  double best_rate = -1.0;
  for (const auto& bits : enumerate_bit_allocations(n_q, s)) {
    auto [powers, rate] = optimize_power(bits, sigmas, total_power, subchannel_mi_ptp);
    if (rate > best_rate + 1e-9) {
      best_rate = rate;
      result.best_allocation.bits = bits;
      result.best_allocation.powers = powers;
    }
  }
  result.rate_quantized = std::max(0.0, best_rate);

  for (std::size_t k = 0; k < s; ++k) {
    const unsigned b = result.best_allocation.bits[k];
    const double p = result.best_allocation.powers[k];
    result.per_subchannel_mi[k] = subchannel_mi_ptp(b, p, sigmas[k]);
    if (b > 0 && sigmas[k] > 0.0 && p > 0.0)
      result.rate_continuous +=
          mi_pam_continuous(make_constellation_ptp(b, p), sigmas[k]).value;
  }
  return result;
}

struct BcUserResult {
  double rate = 0.0;  // half the per-sample MI sum
  Allocation allocation;
};

// Best single-user broadcast rate: same exhaustive search as theorem1_rate
// but with the doubled-resolution constellations and the half-rate factor.
inline BcUserResult bc_user_best(const Matrix& h, unsigned n_q, double total_power) {
  const SvdFactors f = svd(h);
  const std::size_t s = f.singular_values.size();
  BcUserResult best;
  best.allocation.bits.assign(s, 0);
  best.allocation.powers.assign(s, 0.0);
  best.allocation.powers[0] = total_power;
  double best_rate = -1.0;
  for (const auto& bits : enumerate_bit_allocations(n_q, s)) {
    auto [powers, rate] =
        optimize_power(bits, f.singular_values, total_power, subchannel_mi_bc);
    if (rate > best_rate + 1e-9) {
      best_rate = rate;
      best.allocation.bits = bits;
      best.allocation.powers = powers;
    }
  }
  best.rate = 0.5 * std::max(0.0, best_rate);
  return best;
}

// Two-user broadcast region under the time-sharing scheme: the per-user
// bounds decouple, so the region is the rectangle [0, R1*] x [0, R2*].
inline RateRegion theorem2_region(const Matrix& h1, const Matrix& h2, unsigned n_q1,
                                  unsigned n_q2, double total_power) {
  if (total_power < 0.0) throw std::invalid_argument("theorem2_region: negative power");
  RateRegion region;
  region.r1_max = bc_user_best(h1, n_q1, total_power).rate;
  region.r2_max = bc_user_best(h2, n_q2, total_power).rate;
  std::vector<Point2D> corners{{0.0, 0.0},
                               {region.r1_max, 0.0},
                               {region.r1_max, region.r2_max},
                               {0.0, region.r2_max}};
  region.vertices = convex_hull_2d(corners);
  return region;
}

// Mutual information of the one-shot ternary-cell channel from Example 1
// style configurations: two thresholds, explicit input points, unit gain.
inline double one_shot_rate_example1(double total_power, double t1, double t2,
                                     const std::vector<double>& input_points) {
  if (t1 >= t2) throw std::invalid_argument("one_shot_rate_example1: need t1 < t2");
  double msq = 0.0;
  for (double x : input_points) msq += x * x;
  msq /= static_cast<double>(input_points.size());
  if (msq > total_power * (1.0 + 1e-9))
    throw std::invalid_argument("one_shot_rate_example1: input power exceeds budget");
  const DmcMatrix dmc = one_shot_channel({t1, t2}, input_points, 1.0);
  const std::vector<double> uniform(input_points.size(),
                                    1.0 / static_cast<double>(input_points.size()));
  return mi_dmc(dmc, uniform).value;
}

// Grid search over symmetric ternary placements {-c, 0, c} with thresholds
// at +-c/2, subject to the power budget.
inline double one_shot_rate_example1_optimized(double total_power) {
  if (total_power <= 0.0) return 0.0;
  const double c_max = std::sqrt(1.5 * total_power);  // mean square = 2c^2/3
  double best = 0.0;
  for (int g = 1; g <= 64; ++g) {
    const double c = c_max * static_cast<double>(g) / 64.0;
    best = std::max(best, one_shot_rate_example1(total_power, -0.5 * c, 0.5 * c,
                                                 {-c, 0.0, c}));
  }
  return best;
}

// Example 2 one-shot broadcast: superposed input
// X = (-1)^U1 * sqrt(P')/2 + (-1)^U2 * sqrt(P'), P' = 4P/5. The
// zero-threshold receiver decodes U2; the offset-threshold receiver sits
// its threshold at sqrt(P') + epsilon, between the two positive points,
// which turns the channel to U1 into a Z-channel with crossover 1/2 at
// high SNR. R2 is that channel's capacity.
inline double one_shot_sumrate_example2(double total_power, double epsilon) {
  if (total_power <= 0.0) return 0.0;
  if (epsilon <= 0.0) throw std::invalid_argument("one_shot_sumrate_example2: epsilon must be > 0");
  const double base = std::sqrt(0.8 * total_power);
  // Index order (U1, U2): (0,0), (0,1), (1,0), (1,1).
  const std::vector<double> x{1.5 * base, -0.5 * base, 0.5 * base, -1.5 * base};

  const DmcMatrix rx1 = one_shot_channel({0.0}, x, 1.0);
  DmcMatrix u2_channel{2, 2, {{0.0, 0.0}, {0.0, 0.0}}};
  for (int u2 = 0; u2 < 2; ++u2)
    for (int out = 0; out < 2; ++out)
      u2_channel.transitions[u2][out] =
          0.5 * (rx1.transitions[u2][out] + rx1.transitions[2 + u2][out]);
  const double r1 = mi_dmc(u2_channel, {0.5, 0.5}).value;

  const DmcMatrix rx2 = one_shot_channel({base + epsilon}, x, 1.0);
  DmcMatrix u1_channel{2, 2, {{0.0, 0.0}, {0.0, 0.0}}};
  for (int u1 = 0; u1 < 2; ++u1)
    for (int out = 0; out < 2; ++out)
      u1_channel.transitions[u1][out] =
          0.5 * (rx2.transitions[2 * u1][out] + rx2.transitions[2 * u1 + 1][out]);
  const double r2 = blahut_arimoto(u1_channel, 1e-9).first;
  return r1 + r2;
}

// Both receivers at zero threshold: the users' channels coincide, so the
// sum rate collapses to at most one bit.
inline double one_shot_sumrate_example2_zero(double total_power) {
  if (total_power <= 0.0) return 0.0;
  const double base = std::sqrt(0.8 * total_power);
  const std::vector<double> x{1.5 * base, -0.5 * base, 0.5 * base, -1.5 * base};
  const DmcMatrix rx = one_shot_channel({0.0}, x, 1.0);
  DmcMatrix u2_channel{2, 2, {{0.0, 0.0}, {0.0, 0.0}}};
  DmcMatrix u1_channel{2, 2, {{0.0, 0.0}, {0.0, 0.0}}};
  for (int u = 0; u < 2; ++u)
    for (int out = 0; out < 2; ++out) {
      u2_channel.transitions[u][out] =
          0.5 * (rx.transitions[u][out] + rx.transitions[2 + u][out]);
      u1_channel.transitions[u][out] =
          0.5 * (rx.transitions[2 * u][out] + rx.transitions[2 * u + 1][out]);
    }
  return mi_dmc(u2_channel, {0.5, 0.5}).value + mi_dmc(u1_channel, {0.5, 0.5}).value;
}

}  // namespace qmimo
