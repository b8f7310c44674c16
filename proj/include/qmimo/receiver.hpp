#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "qmimo/dmc.hpp"
#include "qmimo/linalg.hpp"

namespace qmimo {

// Q(x) = 2*1{x >= 0} - 1. Zero maps to +1.
inline int sign_bit(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("sign_bit: non-finite");
  return x >= 0.0 ? +1 : -1;
}

// Adaptive-threshold receiver configuration: block length n, spatial
// combiner v (n_q x n_r), fixed thresholds t (n_q), temporal combiner b
// (n x n, upper-triangular) and adaptive coefficients u (n x n, strictly
// upper-triangular).
struct AtRxConfig {
  std::size_t block_length = 0;
  Matrix spatial;
  std::vector<double> fixed_thresholds;
  Matrix temporal;
  Matrix adaptive_coeffs;

  void validate() const {
    const std::size_t n = block_length;
    const std::size_t nq = spatial.rows();
    if (fixed_thresholds.size() != nq)
      throw std::invalid_argument("AtRxConfig: threshold length != n_q");
    if (temporal.rows() != n || temporal.cols() != n ||
        adaptive_coeffs.rows() != n || adaptive_coeffs.cols() != n)
      throw std::invalid_argument("AtRxConfig: temporal matrices must be n x n");
    if (!spatial.all_finite() || !temporal.all_finite() ||
        !adaptive_coeffs.all_finite())
      throw std::invalid_argument("AtRxConfig: non-finite entries");
    for (double t : fixed_thresholds)
      if (!std::isfinite(t))
        throw std::invalid_argument("AtRxConfig: non-finite threshold");
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < i; ++j)
        if (temporal(i, j) != 0.0)
          throw std::runtime_error("AtRxConfig: b must be upper-triangular");
      for (std::size_t j = 0; j <= i; ++j)
        if (adaptive_coeffs(i, j) != 0.0)
          throw std::runtime_error("AtRxConfig: u must be strictly upper-triangular");
    }
  }
};

// Runs the adaptive-threshold state machine over a received block
// Y (n_r x n), producing the ADC output matrix W (n_q x n) with entries
// in {-1, +1}. Column i thresholds v*(Y b)(i) against -(W u)(i) - t, using
// only past ADC outputs (strict upper-triangularity of u).
inline Matrix at_rx_run(const AtRxConfig& cfg, const Matrix& received) {
  cfg.validate();
  const std::size_t n = cfg.block_length;
  const std::size_t nq = cfg.spatial.rows();
  if (received.cols() != n || received.rows() != cfg.spatial.cols())
    throw std::invalid_argument("at_rx_run: dimension mismatch");

  const Matrix combined = matmul(received, cfg.temporal);  // Ybar, n_r x n
  Matrix out(nq, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t a = 0; a < nq; ++a) {
      double z = cfg.fixed_thresholds[a];
      for (std::size_t r = 0; r < cfg.spatial.cols(); ++r)
        z += cfg.spatial(a, r) * combined(r, i);
      for (std::size_t j = 0; j < i; ++j)  // adaptive part, past columns only
        z += out(a, j) * cfg.adaptive_coeffs(j, i);
      out(a, i) = sign_bit(z);
    }
  }
  return out;
}

// Symmetric uniform quantizer: L bins given by strictly increasing interior
// boundaries; inputs beyond the extremes saturate into the outer bins.
struct QuantizerSpec {
  std::vector<double> boundaries;  // length L-1

  std::size_t num_bins() const { return boundaries.size() + 1; }

  // A boundary point falls into the upper bin, matching Q(0) = +1.
  std::size_t quantize(double y) const {
    return static_cast<std::size_t>(std::distance(
        boundaries.begin(),
        std::upper_bound(boundaries.begin(), boundaries.end(), y)));
  }
};

// Uniform quantizer with 2^bits bins, step 2*a*gain, interior boundaries at
// even multiples of a*gain. Bin centers coincide with the scaled PAM points.
inline QuantizerSpec build_uniform_quantizer(unsigned bits, double a, double gain) {
  if (bits == 0) throw std::invalid_argument("build_uniform_quantizer: bits must be >= 1");
  if (a <= 0.0 || gain <= 0.0)
    throw std::invalid_argument("build_uniform_quantizer: scale and gain must be > 0");
  const int half = 1 << (bits - 1);
  QuantizerSpec q;
  q.boundaries.reserve(2 * half - 1);
  for (int m = -(half - 1); m <= half - 1; ++m)
    q.boundaries.push_back(2.0 * m * a * gain);
  return q;
}

namespace detail {

inline std::size_t sar_value_to_bin(long value, unsigned total_bits) {
  // value is an odd integer in [-(2^b - 1), 2^b - 1].
  return static_cast<std::size_t>((value + (1L << total_bits) - 1) / 2);
}

}  // namespace detail

// Pipelined point-to-point SAR quantization. The input is the subchannel
// output normalized by 1/(a*sigma); ADC j at channel-use i refines sample
// i-j+1 against the running sum of the higher-significance decisions,
// emitting weight 2^(bits-j). The block is extended by the pipeline depth
// so every sample is fully resolved. Returns one bin index per sample,
// identical to build_uniform_quantizer on the same (normalized) grid.
inline std::vector<std::size_t> sar_ptp_run(unsigned bits,
                                            const std::vector<double>& normalized_input) {
  if (bits < 1) throw std::invalid_argument("sar_ptp_run: bits must be >= 1");
  const std::size_t n = normalized_input.size();
  // decisions[j][i]: weighted output of ADC j+1 at channel-use i+1.
  std::vector<std::vector<long>> decisions(bits, std::vector<long>(n + bits, 0));
  for (std::size_t i = 1; i <= n + bits - 1; ++i) {
    for (unsigned j = 1; j <= bits; ++j) {
      if (i < j || i - j + 1 > n) continue;  // pipeline fill / drain
      long threshold = 0;
      for (unsigned jp = 1; jp < j; ++jp)
        threshold += decisions[j - jp - 1][i - jp - 1];
      const int q = sign_bit(normalized_input[i - j] - static_cast<double>(threshold));
      decisions[j - 1][i - 1] = static_cast<long>(q) << (bits - j);
    }
  }
  std::vector<std::size_t> bins(n);
  for (std::size_t s = 0; s < n; ++s) {
    long value = 0;
    for (unsigned j = 1; j <= bits; ++j) value += decisions[j - 1][s + j - 1];
    bins[s] = detail::sar_value_to_bin(value, bits);
  }
  return bins;
}

// Broadcast-side SAR quantization for one user's subchannel. Samples land
// every second channel-use; each is refined by one sign decision per
// channel-use for 2*bits_budget channel-uses, the ADC group cycling over
// the bits_budget samples in flight. Net effect per sample: a uniform
// quantizer with 2^(2*bits_budget) bins.
inline std::vector<std::size_t> sar_bc_run(unsigned bits_budget,
                                           const std::vector<double>& sampled_input) {
  if (bits_budget < 1) throw std::invalid_argument("sar_bc_run: bits_budget must be >= 1");
  const unsigned steps = 2 * bits_budget;
  const std::size_t n = sampled_input.size();
  std::vector<std::size_t> bins(n);

  struct AdcState {
    std::size_t sample = 0;
    unsigned step = 0;  // decisions taken so far
    long acc = 0;
    bool active = false;
  };
  std::vector<AdcState> adcs(bits_budget);

  // Channel-use clock; sample s arrives at use 2s. Runs past the last
  // arrival until every ADC has drained.
  std::size_t next_sample = 0;
  for (std::size_t use = 0;; ++use) {
    if (use % 2 == 0 && next_sample < n) {
      AdcState& a = adcs[next_sample % bits_budget];
      a.sample = next_sample++;
      a.step = 0;
      a.acc = 0;
      a.active = true;
    }
    bool any_active = false;
    for (AdcState& a : adcs) {
      if (!a.active) continue;
      const int q = sign_bit(sampled_input[a.sample] - static_cast<double>(a.acc));
      a.acc += static_cast<long>(q) << (steps - 1 - a.step);
      if (++a.step == steps) {
        bins[a.sample] = detail::sar_value_to_bin(a.acc, steps);
        a.active = false;
      } else {
        any_active = true;
      }
    }
    if (!any_active && next_sample == n) break;
  }
  return bins;
}

// One-shot quantized SISO channel: fixed thresholds partition the real line
// into at most n_q + 1 realizable cells; the transition matrix from the
// input points to the cells follows from Gaussian tail probabilities.
// Coincident thresholds merge into a single cell boundary.
inline DmcMatrix one_shot_channel(std::vector<double> thresholds,
                                  const std::vector<double>& input_points,
                                  double channel_gain) {
  for (double t : thresholds)
    if (!std::isfinite(t))
      throw std::invalid_argument("one_shot_channel: non-finite threshold");
  if (input_points.empty())
    throw std::invalid_argument("one_shot_channel: empty input set");
  std::sort(thresholds.begin(), thresholds.end());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()),
                   thresholds.end());

  DmcMatrix dmc;
  dmc.num_inputs = input_points.size();
  dmc.num_outputs = thresholds.size() + 1;
  dmc.transitions.assign(dmc.num_inputs, std::vector<double>(dmc.num_outputs, 0.0));
  for (std::size_t x = 0; x < input_points.size(); ++x) {
    const double mean = channel_gain * input_points[x];
    double upper_tail_prev = 1.0;  // P(Y >= -inf)
    for (std::size_t c = 0; c < thresholds.size(); ++c) {
      const double tail = gaussian_tail(thresholds[c] - mean);
      dmc.transitions[x][c] = upper_tail_prev - tail;
      upper_tail_prev = tail;
    }
    dmc.transitions[x][thresholds.size()] = upper_tail_prev;
  }
  dmc.validate();
  return dmc;
}

}  // namespace qmimo
