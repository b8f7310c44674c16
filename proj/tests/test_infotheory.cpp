#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "qmimo/infotheory.hpp"

using namespace qmimo;

namespace {

DmcMatrix bsc(double p) {
  return DmcMatrix{2, 2, {{1.0 - p, p}, {p, 1.0 - p}}};
}

DmcMatrix z_channel(double p) {
  return DmcMatrix{2, 2, {{1.0, 0.0}, {p, 1.0 - p}}};
}

}  // namespace

TEST_CASE("gaussian tail values") {
  CHECK(gaussian_tail(0.0) == Catch::Approx(0.5).margin(1e-15));
  CHECK(gaussian_tail(2.0) == Catch::Approx(0.02275013194817921).epsilon(1e-12));
  CHECK(gaussian_tail(40.0) < 1e-300);
  CHECK(gaussian_tail(-40.0) == Catch::Approx(1.0).margin(1e-15));
  CHECK_THROWS_AS(gaussian_tail(std::nan("")), std::invalid_argument);
}

TEST_CASE("dmc mutual information basics") {
  const std::vector<double> uniform{0.5, 0.5};
  CHECK(mi_dmc(bsc(0.0), uniform).value == Catch::Approx(1.0).margin(1e-12));
  CHECK(mi_dmc(bsc(0.5), uniform).value == Catch::Approx(0.0).margin(1e-12));
  CHECK_THROWS_AS(mi_dmc(bsc(0.1), {0.5}), std::invalid_argument);
  CHECK_THROWS_AS(mi_dmc(bsc(0.1), {0.9, 0.9}), std::invalid_argument);
}

TEST_CASE("z-channel capacity closed form, MI and Blahut-Arimoto agree") {
  const double closed = z_channel_capacity(0.5);
  CHECK(closed == Catch::Approx(std::log2(1.25)).margin(1e-12));

  const auto [capacity, input] = blahut_arimoto(z_channel(0.5), 1e-9);
  CHECK(capacity == Catch::Approx(closed).margin(1e-6));
  CHECK(mi_dmc(z_channel(0.5), input).value == Catch::Approx(closed).margin(1e-6));
}

TEST_CASE("blahut-arimoto on identity and BSC") {
  const auto [cap_id, in_id] = blahut_arimoto(DmcMatrix{2, 2, {{1, 0}, {0, 1}}}, 1e-9);
  CHECK(cap_id == Catch::Approx(1.0).margin(1e-6));

  const auto [cap_bsc, in_bsc] = blahut_arimoto(bsc(0.11), 1e-9);
  CHECK(cap_bsc == Catch::Approx(1.0 - binary_entropy(0.11)).margin(1e-6));

  CHECK_THROWS_AS(blahut_arimoto(DmcMatrix{2, 2, {{0.7, 0.7}, {0.5, 0.5}}}, 1e-9),
                  std::invalid_argument);
  // capacity dominates the uniform-input MI
  CHECK(cap_bsc + 1e-9 >= mi_dmc(bsc(0.11), {0.5, 0.5}).value);
}

TEST_CASE("quantized PAM MI reduces to a BSC for one bit") {
  // sigma*sqrt(P) = 2: BSC with crossover Q(2).
  const auto c = make_constellation_ptp(1, 4.0);
  const auto q = build_uniform_quantizer(1, c.scale, 1.0);
  const double crossover = gaussian_tail(2.0);
  const double expected = 1.0 - binary_entropy(crossover);
  CHECK(mi_pam_quantized(c, 1.0, q).value == Catch::Approx(expected).margin(1e-12));
}

TEST_CASE("quantized PAM MI edge cases") {
  const auto zero_power = make_constellation_ptp(2, 0.0);
  const auto q = build_uniform_quantizer(2, 1.0, 1.0);
  CHECK(mi_pam_quantized(zero_power, 1.0, q).value == Catch::Approx(0.0).margin(1e-12));

  const auto c = make_constellation_ptp(2, 1e6);
  const auto q2 = build_uniform_quantizer(2, c.scale, 1.0);
  CHECK(mi_pam_quantized(c, 1.0, q2).value == Catch::Approx(2.0).margin(1e-3));
}

TEST_CASE("continuous PAM MI limits") {
  CHECK(mi_pam_continuous(make_constellation_ptp(2, 10.0), 0.0).value == 0.0);
  CHECK(mi_pam_continuous(make_constellation_ptp(1, 1.0), 1000.0).value ==
        Catch::Approx(1.0).margin(1e-9));
}

TEST_CASE("continuous PAM MI matches a Monte Carlo estimate") {
  const auto c = make_constellation_ptp(2, 10.0);
  const double quad = mi_pam_continuous(c, 1.0).value;

  // Independent estimate of h(Y) via E[-log2 f(Y)].
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> noise;
  std::uniform_int_distribution<std::size_t> pick(0, c.size() - 1);
  const double inv_sqrt_2pi = 0.3989422804014327;
  const std::size_t n = 10000000;
  double sum = 0.0, sumsq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double y = c.points[pick(rng)] + noise(rng);
    double f = 0.0;
    for (double p : c.points) {
      const double d = y - p;
      f += std::exp(-0.5 * d * d);
    }
    f *= inv_sqrt_2pi / static_cast<double>(c.size());
    const double v = -std::log2(f);
    sum += v;
    sumsq += v * v;
  }
  const double h_mc = sum / n;
  const double se = std::sqrt((sumsq / n - h_mc * h_mc) / n);
  const double mi_mc = h_mc - 0.5 * std::log2(2.0 * M_PI * std::exp(1.0));
  CHECK(std::abs(quad - mi_mc) < 3.0 * se + 1e-6);
}

TEST_CASE("MI bounds and data processing across a power grid") {
  double prev_q = -1.0, prev_c = -1.0;
  for (double p : {0.01, 0.1, 1.0, 10.0, 100.0, 1e4}) {
    const auto c = make_constellation_ptp(2, p);
    const auto q = build_uniform_quantizer(2, c.scale, 1.0);
    const auto quant = mi_pam_quantized(c, 1.0, q);
    const auto cont = mi_pam_continuous(c, 1.0);
    CHECK(quant.value >= 0.0);
    CHECK(quant.value <= 2.0 + 1e-9);
    CHECK(cont.value <= 0.5 * std::log2(1.0 + p) + 1e-9);
    CHECK(quant.value <= cont.value + cont.error_estimate + 1e-9);
    CHECK(quant.value >= prev_q - 1e-9);  // nondecreasing in P
    CHECK(cont.value >= prev_c - 1e-9);
    prev_q = quant.value;
    prev_c = cont.value;
  }
}

TEST_CASE("both MI variants converge to the bit count at high power") {
  for (unsigned bits = 1; bits <= 3; ++bits) {
    const auto c = make_constellation_ptp(bits, 1e6);
    const auto q = build_uniform_quantizer(bits, c.scale, 1.0);
    CHECK(static_cast<double>(bits) - mi_pam_quantized(c, 1.0, q).value < 0.01);
    CHECK(static_cast<double>(bits) - mi_pam_continuous(c, 1.0).value < 0.01);
  }
}
