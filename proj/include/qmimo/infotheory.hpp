#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "qmimo/dmc.hpp"
#include "qmimo/receiver.hpp"
#include "qmimo/signal.hpp"

namespace qmimo {

struct MiResult {
  double value = 0.0;  // bits per channel-use
  enum class Method { exact_dmc, quadrature, monte_carlo } method = Method::exact_dmc;
  double error_estimate = 0.0;
};

inline double binary_entropy(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

// Capacity of the binary Z-channel where input 1 flips with probability p.
inline double z_channel_capacity(double p) {
  if (p >= 1.0) return 0.0;
  if (p <= 0.0) return 1.0;
  return std::log2(1.0 + (1.0 - p) * std::pow(p, p / (1.0 - p)));
}

// Exact I(X;Y) in bits for a DMC under the given input distribution.
inline MiResult mi_dmc(const DmcMatrix& channel, const std::vector<double>& input_dist) {
  channel.validate();
  if (input_dist.size() != channel.num_inputs)
    throw std::invalid_argument("mi_dmc: input distribution length mismatch");
  double mass = 0.0;
  for (double p : input_dist) {
    if (p < 0.0) throw std::invalid_argument("mi_dmc: negative probability");
    mass += p;
  }
  if (std::abs(mass - 1.0) > 1e-9)
    throw std::invalid_argument("mi_dmc: input distribution does not sum to 1");

  std::vector<double> out(channel.num_outputs, 0.0);
  for (std::size_t x = 0; x < channel.num_inputs; ++x)
    for (std::size_t y = 0; y < channel.num_outputs; ++y)
      out[y] += input_dist[x] * channel.transitions[x][y];

  double mi = 0.0;
  for (std::size_t x = 0; x < channel.num_inputs; ++x) {
    if (input_dist[x] == 0.0) continue;
    for (std::size_t y = 0; y < channel.num_outputs; ++y) {
      const double pyx = channel.transitions[x][y];
      if (pyx <= 0.0 || out[y] <= 0.0) continue;
      mi += input_dist[x] * pyx * std::log2(pyx / out[y]);
    }
  }
  MiResult r;
  r.value = std::max(0.0, mi);
  r.method = MiResult::Method::exact_dmc;
  r.error_estimate = 1e-12;
  return r;
}

// Blahut-Arimoto capacity with the standard upper/lower iteration gap as
// the stopping certificate.
inline std::pair<double, std::vector<double>> blahut_arimoto(const DmcMatrix& channel,
                                                             double tolerance) {
  channel.validate();
  if (tolerance <= 0.0) throw std::invalid_argument("blahut_arimoto: tolerance must be > 0");
  const std::size_t nx = channel.num_inputs, ny = channel.num_outputs;
  std::vector<double> r(nx, 1.0 / static_cast<double>(nx));
  std::vector<double> d(nx), out(ny);

  for (std::size_t it = 0; it < 100000; ++it) {
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t x = 0; x < nx; ++x)
      for (std::size_t y = 0; y < ny; ++y)
        out[y] += r[x] * channel.transitions[x][y];

    double lower = 0.0, upper = -1.0;
    for (std::size_t x = 0; x < nx; ++x) {
      double dx = 0.0;
      for (std::size_t y = 0; y < ny; ++y) {
        const double pyx = channel.transitions[x][y];
        if (pyx > 0.0 && out[y] > 0.0) dx += pyx * std::log2(pyx / out[y]);
      }
      d[x] = dx;
      lower += r[x] * dx;
      upper = std::max(upper, dx);
    }
    if (upper - lower < tolerance) return {lower, r};

    double norm = 0.0;
    for (std::size_t x = 0; x < nx; ++x) {
      r[x] *= std::exp2(d[x]);
      norm += r[x];
    }
    for (double& v : r) v /= norm;
  }
  throw std::runtime_error("blahut_arimoto: did not converge in 1e5 iterations");
}

// DMC from a PAM constellation through gain*x + N followed by a uniform
// quantizer; transition probabilities are Gaussian tail differences of the
// boundary offsets.
inline DmcMatrix pam_quantized_dmc(const Constellation& constellation, double gain,
                                   const QuantizerSpec& quantizer) {
  DmcMatrix dmc;
  dmc.num_inputs = constellation.size();
  dmc.num_outputs = quantizer.num_bins();
  dmc.transitions.assign(dmc.num_inputs, std::vector<double>(dmc.num_outputs, 0.0));
  for (std::size_t x = 0; x < dmc.num_inputs; ++x) {
    const double mean = gain * constellation.points[x];
    double prev_tail = 1.0;
    for (std::size_t c = 0; c < quantizer.boundaries.size(); ++c) {
      const double tail = gaussian_tail(quantizer.boundaries[c] - mean);
      dmc.transitions[x][c] = std::max(0.0, prev_tail - tail);
      prev_tail = tail;
    }
    dmc.transitions[x][dmc.num_outputs - 1] = prev_tail;
  }
  dmc.validate();
  return dmc;
}

// I(X; quantize(gain*X + N)) for uniform X over the constellation.
inline MiResult mi_pam_quantized(const Constellation& constellation, double gain,
                                 const QuantizerSpec& quantizer) {
  if (constellation.size() < 2) {
    MiResult r;
    r.method = MiResult::Method::exact_dmc;
    return r;
  }
  const DmcMatrix dmc = pam_quantized_dmc(constellation, gain, quantizer);
  const std::vector<double> uniform(constellation.size(),
                                    1.0 / static_cast<double>(constellation.size()));
  return mi_dmc(dmc, uniform);
}

namespace detail {

// Gauss-Hermite nodes/weights for integral of exp(-t^2) f(t), by Newton
// iteration on the Hermite recurrence.
inline void gauss_hermite(unsigned n, std::vector<double>& nodes,
                          std::vector<double>& weights) {
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  const double pim4 = 0.7511255444649425;  // pi^(-1/4)
  double z = 0.0;
  for (unsigned i = 0; i < (n + 1) / 2; ++i) {
    if (i == 0)
      z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -0.16667);
    else if (i == 1)
      z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
    else if (i == 2)
      z = 1.86 * z - 0.86 * nodes[0];
    else if (i == 3)
      z = 1.91 * z - 0.91 * nodes[1];
    else
      z = 2.0 * z - nodes[i - 2];

    double pp = 0.0;
    for (int iter = 0; iter < 200; ++iter) {
      double p1 = pim4, p2 = 0.0;
      for (unsigned j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / j) * p2 - std::sqrt((j - 1.0) / j) * p3;
      }
      pp = std::sqrt(2.0 * n) * p2;
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) < 1e-15) break;
    }
    nodes[i] = z;
    nodes[n - 1 - i] = -z;
    weights[i] = 2.0 / (pp * pp);
    weights[n - 1 - i] = weights[i];
  }
}

// Differential entropy h(Y) in bits for the Gaussian mixture
// Y = sum of uniform point means + unit-variance noise.
inline double mixture_entropy_bits(const std::vector<double>& means, unsigned nodes_n) {
  std::vector<double> t, w;
  gauss_hermite(nodes_n, t, w);
  const std::size_t m = means.size();
  const double inv_m = 1.0 / static_cast<double>(m);
  const double inv_sqrt_2pi = 0.3989422804014326779399461;
  const double inv_sqrt_pi = 0.5641895835477562869480795;
  double h = 0.0;
  for (std::size_t a = 0; a < m; ++a) {
    double acc = 0.0;
    for (unsigned i = 0; i < nodes_n; ++i) {
      const double y = means[a] + 1.4142135623730951 * t[i];
      double f = 0.0;
      for (std::size_t b = 0; b < m; ++b) {
        const double d = y - means[b];
        f += std::exp(-0.5 * d * d);
      }
      f *= inv_m * inv_sqrt_2pi;
      acc += w[i] * std::log2(f);
    }
    h -= inv_m * inv_sqrt_pi * acc;
  }
  return h;
}

}  // namespace detail

// I(X; gain*X + N) for uniform X over the constellation, by Gauss-Hermite
// quadrature over the output Gaussian mixture. The error estimate comes
// from doubling the node count.
inline MiResult mi_pam_continuous(const Constellation& constellation, double gain) {
  if (gain < 0.0) throw std::invalid_argument("mi_pam_continuous: negative gain");
  MiResult r;
  r.method = MiResult::Method::quadrature;
  if (constellation.size() < 2 || gain == 0.0 || constellation.power == 0.0) return r;

  std::vector<double> means(constellation.size());
  for (std::size_t i = 0; i < means.size(); ++i)
    means[i] = gain * constellation.points[i];

  const double half_log_2pie = 0.5 * std::log2(2.0 * 3.14159265358979323846 * std::exp(1.0));
  const double coarse = detail::mixture_entropy_bits(means, 63) - half_log_2pie;
  const double fine = detail::mixture_entropy_bits(means, 127) - half_log_2pie;
  r.value = std::max(0.0, fine);
  r.error_estimate = std::abs(fine - coarse);
  return r;
}

}  // namespace qmimo
