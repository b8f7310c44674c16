#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "qmimo/infotheory.hpp"
#include "qmimo/linalg.hpp"
#include "qmimo/ratecalc.hpp"
#include "qmimo/receiver.hpp"
#include "qmimo/signal.hpp"

namespace qmimo {

enum class SimMode { ptp, bc_user1, bc_user2 };

struct SimConfig {
  Matrix channel;
  Allocation allocation;
  double power = 0.0;
  std::size_t num_symbols = 0;
  std::uint64_t seed = 0;
  SimMode mode = SimMode::ptp;
};

struct SimReport {
  std::vector<double> empirical_mi_per_subchannel;  // per transmitted sample
  std::vector<double> symbol_error_rate;
  std::vector<double> analytic_mi;
  double empirical_rate = 0.0;  // bits per channel-use (halved for BC)
  double mean_tx_power = 0.0;   // empirical E||Xtilde||^2
  std::size_t samples = 0;
  std::uint64_t seed = 0;
};

namespace detail {

constexpr std::size_t kSimChunk = 4096;

inline double plugin_mi_bits(const std::vector<std::vector<std::uint64_t>>& joint,
                             std::uint64_t total) {
  if (total == 0) return 0.0;
  const std::size_t nx = joint.size();
  const std::size_t ny = joint.empty() ? 0 : joint[0].size();
  std::vector<double> px(nx, 0.0), py(ny, 0.0);
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t y = 0; y < ny; ++y) {
      px[x] += static_cast<double>(joint[x][y]);
      py[y] += static_cast<double>(joint[x][y]);
    }
  double mi = 0.0;
  const double n = static_cast<double>(total);
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t y = 0; y < ny; ++y) {
      const double c = static_cast<double>(joint[x][y]);
      if (c == 0.0) continue;
      mi += (c / n) * std::log2(c * n / (px[x] * py[y]));
    }
  return std::max(0.0, mi);
}

struct SimContext {
  SvdFactors factors;
  std::vector<Constellation> constellations;
  std::vector<QuantizerSpec> quantizers;
  std::vector<bool> active;
};

inline SimContext prepare(const SimConfig& cfg, bool broadcast) {
  if (cfg.num_symbols < 1) throw std::invalid_argument("sim: num_symbols must be >= 1");
  SimContext ctx;
  ctx.factors = svd(cfg.channel);
  const std::size_t s = ctx.factors.singular_values.size();
  if (cfg.allocation.bits.size() != s || cfg.allocation.powers.size() != s)
    throw std::invalid_argument("sim: allocation length != singular value count");
  double total = 0.0;
  for (double p : cfg.allocation.powers) {
    if (p < 0.0) throw std::invalid_argument("sim: negative subchannel power");
    total += p;
  }
  if (std::abs(total - cfg.power) > 1e-6 * std::max(1.0, cfg.power))
    throw std::invalid_argument("sim: allocation powers do not sum to the power budget");

  ctx.constellations.resize(s);
  ctx.quantizers.resize(s);
  ctx.active.resize(s);
  for (std::size_t k = 0; k < s; ++k) {
    const unsigned b = cfg.allocation.bits[k];
    const double p = cfg.allocation.powers[k];
    const double sig = ctx.factors.singular_values[k];
    ctx.constellations[k] = broadcast ? make_constellation_bc(b, p)
                                      : make_constellation_ptp(b, p);
    ctx.active[k] = b > 0 && sig > 0.0 && p > 0.0;
    if (ctx.active[k]) {
      const unsigned eff = broadcast ? 2 * b : b;
      ctx.quantizers[k] = build_uniform_quantizer(eff, ctx.constellations[k].scale, sig);
    }
  }
  return ctx;
}

}  // namespace detail

// End-to-end point-to-point chain: uniform PAM symbols per subchannel,
// SVD precoding, channel with fresh noise, receiver-side rotation,
// normalization and pipelined SAR quantization. Empirical MI is the
// plug-in estimate on the joint (symbol, bin) histogram; SER counts
// minimum-distance (= bin index) decision errors.
inline SimReport run_ptp_sim(const SimConfig& cfg) {
  if (cfg.mode != SimMode::ptp) throw std::invalid_argument("run_ptp_sim: mode must be ptp");
  const detail::SimContext ctx = detail::prepare(cfg, /*broadcast=*/false);
  const std::size_t s = ctx.factors.singular_values.size();
  const std::size_t nt = cfg.channel.cols();
  const std::size_t nr = cfg.channel.rows();
  const Matrix left_t = ctx.factors.left.transposed();
  const Matrix precode = ctx.factors.right.transposed();

  std::vector<std::vector<std::vector<std::uint64_t>>> joint(s);
  std::vector<std::uint64_t> errors(s, 0);
  for (std::size_t k = 0; k < s; ++k)
    if (ctx.active[k])
      joint[k].assign(ctx.constellations[k].size(),
                      std::vector<std::uint64_t>(ctx.quantizers[k].num_bins(), 0));

  double power_acc = 0.0;
  std::vector<std::size_t> sym(s);
  std::vector<double> xt(nt), x(nt), y(nr), yt(nr);
  std::vector<std::vector<double>> normalized(s);
  std::vector<std::vector<std::size_t>> syms_chunk(s);

  for (std::size_t chunk = 0; chunk * detail::kSimChunk < cfg.num_symbols; ++chunk) {
    const std::size_t lo = chunk * detail::kSimChunk;
    const std::size_t hi = std::min(cfg.num_symbols, lo + detail::kSimChunk);
    NoiseStream noise(cfg.seed, chunk);
    SymbolStream symbols(cfg.seed, 0x10000 + chunk);
    for (std::size_t k = 0; k < s; ++k) {
      normalized[k].clear();
      syms_chunk[k].clear();
    }
    for (std::size_t i = lo; i < hi; ++i) {
      std::fill(xt.begin(), xt.end(), 0.0);
      for (std::size_t k = 0; k < s; ++k) {
        sym[k] = symbols.next(ctx.constellations[k].size());
        xt[k] = ctx.constellations[k].points[sym[k]];
        power_acc += xt[k] * xt[k];
      }
      x = matvec(precode, xt);
      y = apply_channel(cfg.channel, x, noise);
      yt = matvec(left_t, y);
      for (std::size_t k = 0; k < s; ++k) {
        if (!ctx.active[k]) continue;
        const double denom = ctx.constellations[k].scale * ctx.factors.singular_values[k];
        normalized[k].push_back(yt[k] / denom);
        syms_chunk[k].push_back(sym[k]);
      }
    }
    for (std::size_t k = 0; k < s; ++k) {
      if (!ctx.active[k]) continue;
      const std::vector<std::size_t> bins =
          sar_ptp_run(cfg.allocation.bits[k], normalized[k]);
      for (std::size_t i = 0; i < bins.size(); ++i) {
        joint[k][syms_chunk[k][i]][bins[i]]++;
        if (bins[i] != syms_chunk[k][i]) errors[k]++;
      }
    }
  }

  SimReport report;
  report.samples = cfg.num_symbols;
  report.seed = cfg.seed;
  report.mean_tx_power = power_acc / static_cast<double>(cfg.num_symbols);
  report.empirical_mi_per_subchannel.assign(s, 0.0);
  report.symbol_error_rate.assign(s, 0.0);
  report.analytic_mi.assign(s, 0.0);
  for (std::size_t k = 0; k < s; ++k) {
    if (!ctx.active[k]) continue;
    report.empirical_mi_per_subchannel[k] =
        detail::plugin_mi_bits(joint[k], cfg.num_symbols);
    report.symbol_error_rate[k] =
        static_cast<double>(errors[k]) / static_cast<double>(cfg.num_symbols);
    report.analytic_mi[k] =
        mi_pam_quantized(ctx.constellations[k], ctx.factors.singular_values[k],
                         ctx.quantizers[k])
            .value;
    report.empirical_rate += report.empirical_mi_per_subchannel[k];
  }
  return report;
}

// Broadcast-side chain for one user of the time-sharing schedule: the
// user's samples occupy every second channel-use and are refined by
// sar_bc_run, so the per-user rate is half the per-sample MI.
inline SimReport run_bc_sim(const SimConfig& cfg) {
  if (cfg.mode == SimMode::ptp)
    throw std::invalid_argument("run_bc_sim: mode must be bc-user1 or bc-user2");
  const detail::SimContext ctx = detail::prepare(cfg, /*broadcast=*/true);
  const std::size_t s = ctx.factors.singular_values.size();
  const std::size_t nt = cfg.channel.cols();
  const std::size_t nr = cfg.channel.rows();
  const Matrix left_t = ctx.factors.left.transposed();
  const Matrix precode = ctx.factors.right.transposed();
  const std::uint64_t stream_base = cfg.mode == SimMode::bc_user1 ? 0x20000 : 0x40000;

  std::vector<std::vector<std::vector<std::uint64_t>>> joint(s);
  std::vector<std::uint64_t> errors(s, 0);
  for (std::size_t k = 0; k < s; ++k)
    if (ctx.active[k])
      joint[k].assign(ctx.constellations[k].size(),
                      std::vector<std::uint64_t>(ctx.quantizers[k].num_bins(), 0));

  double power_acc = 0.0;
  std::vector<std::size_t> sym(s);
  std::vector<double> xt(nt), x(nt), y(nr), yt(nr);
  std::vector<std::vector<double>> normalized(s);
  std::vector<std::vector<std::size_t>> syms_chunk(s);

  for (std::size_t chunk = 0; chunk * detail::kSimChunk < cfg.num_symbols; ++chunk) {
    const std::size_t lo = chunk * detail::kSimChunk;
    const std::size_t hi = std::min(cfg.num_symbols, lo + detail::kSimChunk);
    NoiseStream noise(cfg.seed, stream_base + chunk);
    SymbolStream symbols(cfg.seed, stream_base + 0x10000 + chunk);
    for (std::size_t k = 0; k < s; ++k) {
      normalized[k].clear();
      syms_chunk[k].clear();
    }
    for (std::size_t i = lo; i < hi; ++i) {
      std::fill(xt.begin(), xt.end(), 0.0);
      for (std::size_t k = 0; k < s; ++k) {
        sym[k] = symbols.next(ctx.constellations[k].size());
        xt[k] = ctx.constellations[k].points[sym[k]];
        power_acc += xt[k] * xt[k];
      }
      x = matvec(precode, xt);
      y = apply_channel(cfg.channel, x, noise);
      yt = matvec(left_t, y);
      for (std::size_t k = 0; k < s; ++k) {
        if (!ctx.active[k]) continue;
        const double denom = ctx.constellations[k].scale * ctx.factors.singular_values[k];
        normalized[k].push_back(yt[k] / denom);
        syms_chunk[k].push_back(sym[k]);
      }
    }
    for (std::size_t k = 0; k < s; ++k) {
      if (!ctx.active[k]) continue;
      const std::vector<std::size_t> bins =
          sar_bc_run(cfg.allocation.bits[k], normalized[k]);
      for (std::size_t i = 0; i < bins.size(); ++i) {
        joint[k][syms_chunk[k][i]][bins[i]]++;
        if (bins[i] != syms_chunk[k][i]) errors[k]++;
      }
    }
  }

  SimReport report;
  report.samples = cfg.num_symbols;
  report.seed = cfg.seed;
  report.mean_tx_power = power_acc / static_cast<double>(cfg.num_symbols);
  report.empirical_mi_per_subchannel.assign(s, 0.0);
  report.symbol_error_rate.assign(s, 0.0);
  report.analytic_mi.assign(s, 0.0);
  for (std::size_t k = 0; k < s; ++k) {
    if (!ctx.active[k]) continue;
    report.empirical_mi_per_subchannel[k] =
        detail::plugin_mi_bits(joint[k], cfg.num_symbols);
    report.symbol_error_rate[k] =
        static_cast<double>(errors[k]) / static_cast<double>(cfg.num_symbols);
    report.analytic_mi[k] =
        mi_pam_quantized(ctx.constellations[k], ctx.factors.singular_values[k],
                         ctx.quantizers[k])
            .value;
    report.empirical_rate += 0.5 * report.empirical_mi_per_subchannel[k];
  }
  return report;
}

}  // namespace qmimo
