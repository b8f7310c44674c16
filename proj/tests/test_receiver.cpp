#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "qmimo/receiver.hpp"

using namespace qmimo;

namespace {

// The two-ADC adaptive configuration from the SISO motivating example:
// first ADC at zero threshold, second ADC threshold set to half the first
// ADC's previous output.
AtRxConfig example1_config() {
  AtRxConfig cfg;
  cfg.block_length = 2;
  cfg.spatial = Matrix(2, 1, {1.0, 1.0});
  cfg.fixed_thresholds = {0.0, 0.0};
  cfg.temporal = Matrix::identity(2);
  cfg.adaptive_coeffs = Matrix(2, 2, {0.0, -0.5, 0.0, 0.0});
  return cfg;
}

// Reference evaluator that recomputes the full adaptive threshold matrix
// W*u from scratch at every channel-use instead of accumulating.
Matrix at_rx_reference(const AtRxConfig& cfg, const Matrix& received) {
  const std::size_t n = cfg.block_length;
  const std::size_t nq = cfg.spatial.rows();
  const Matrix combined = matmul(received, cfg.temporal);
  Matrix w(nq, n);
  for (std::size_t i = 0; i < n; ++i) {
    Matrix adaptive = matmul(w, cfg.adaptive_coeffs);  // uses columns < i only
    for (std::size_t a = 0; a < nq; ++a) {
      double z = cfg.fixed_thresholds[a] + adaptive(a, i);
      for (std::size_t r = 0; r < cfg.spatial.cols(); ++r)
        z += cfg.spatial(a, r) * combined(r, i);
      w(a, i) = sign_bit(z);
    }
  }
  return w;
}

}  // namespace

TEST_CASE("sign convention") {
  CHECK(sign_bit(0.0) == +1);
  CHECK(sign_bit(-3.2) == -1);
  CHECK(sign_bit(1e-15) == +1);
  CHECK_THROWS_AS(sign_bit(std::nan("")), std::invalid_argument);
}

TEST_CASE("adaptive receiver reproduces the four-interval case table") {
  const AtRxConfig cfg = example1_config();
  struct Row {
    double y;
    int w1, w2;
  };
  // Noiseless representatives of the four intervals split by -1/2, 0, 1/2.
  const std::vector<Row> table{{-0.8, -1, -1}, {-0.3, -1, +1}, {0.3, +1, -1},
                               {0.8, +1, +1}};
  for (const Row& row : table) {
    const Matrix y(1, 2, {row.y, row.y});
    const Matrix w = at_rx_run(cfg, y);
    CHECK(w(0, 0) == row.w1);
    CHECK(w(1, 1) == row.w2);
  }
}

TEST_CASE("zero adaptation degenerates to a memoryless sign") {
  AtRxConfig cfg;
  cfg.block_length = 3;
  cfg.spatial = Matrix(2, 2, {1.0, 0.0, 0.0, -1.0});
  cfg.fixed_thresholds = {0.0, 0.0};
  cfg.temporal = Matrix::identity(3);
  cfg.adaptive_coeffs = Matrix(3, 3);
  const Matrix y(2, 3, {0.5, -0.2, 0.0, 1.0, -1.0, 0.3});
  const Matrix w = at_rx_run(cfg, y);
  const Matrix vy = matmul(cfg.spatial, y);
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t i = 0; i < 3; ++i) CHECK(w(a, i) == sign_bit(vy(a, i)));
}

TEST_CASE("adaptive receiver matches the direct-evaluation reference") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> dist;
  for (int trial = 0; trial < 20; ++trial) {
    AtRxConfig cfg;
    cfg.block_length = 4;
    cfg.spatial = Matrix(2, 3);
    for (std::size_t r = 0; r < 2; ++r)
      for (std::size_t c = 0; c < 3; ++c) cfg.spatial(r, c) = dist(rng);
    cfg.fixed_thresholds = {dist(rng), dist(rng)};
    cfg.temporal = Matrix(4, 4);
    cfg.adaptive_coeffs = Matrix(4, 4);
    for (std::size_t r = 0; r < 4; ++r)
      for (std::size_t c = r; c < 4; ++c) {
        cfg.temporal(r, c) = dist(rng);
        if (c > r) cfg.adaptive_coeffs(r, c) = dist(rng);
      }
    Matrix y(3, 4);
    for (std::size_t r = 0; r < 3; ++r)
      for (std::size_t c = 0; c < 4; ++c) y(r, c) = dist(rng);

    const Matrix got = at_rx_run(cfg, y);
    const Matrix ref = at_rx_reference(cfg, y);
    for (std::size_t a = 0; a < 2; ++a)
      for (std::size_t i = 0; i < 4; ++i) CHECK(got(a, i) == ref(a, i));
  }
}

TEST_CASE("causality: future columns cannot change past outputs") {
  const AtRxConfig cfg = example1_config();
  const Matrix y1(1, 2, {0.3, 5.0});
  const Matrix y2(1, 2, {0.3, -5.0});
  CHECK(at_rx_run(cfg, y1)(0, 0) == at_rx_run(cfg, y2)(0, 0));
  CHECK(at_rx_run(cfg, y1)(1, 0) == at_rx_run(cfg, y2)(1, 0));
}

TEST_CASE("configuration validation") {
  AtRxConfig cfg = example1_config();
  cfg.adaptive_coeffs(1, 1) = 0.5;  // diagonal entry breaks causality
  CHECK_THROWS_AS(at_rx_run(cfg, Matrix(1, 2)), std::runtime_error);
  AtRxConfig cfg2 = example1_config();
  cfg2.temporal(1, 0) = 1.0;
  CHECK_THROWS_AS(at_rx_run(cfg2, Matrix(1, 2)), std::runtime_error);
  CHECK_THROWS_AS(at_rx_run(example1_config(), Matrix(2, 2)), std::invalid_argument);
}

TEST_CASE("uniform quantizer boundaries") {
  CHECK(build_uniform_quantizer(1, 1.0, 1.0).boundaries == std::vector<double>{0.0});

  // The case-table thresholds -1/2, 0, 1/2 arise from a*sigma = 1/4.
  const auto q2 = build_uniform_quantizer(2, 0.25, 1.0);
  REQUIRE(q2.boundaries.size() == 3);
  CHECK(q2.boundaries[0] == Catch::Approx(-0.5).margin(1e-15));
  CHECK(q2.boundaries[1] == Catch::Approx(0.0).margin(1e-15));
  CHECK(q2.boundaries[2] == Catch::Approx(0.5).margin(1e-15));

  const auto q3 = build_uniform_quantizer(3, 1.0, 1.0);
  const std::vector<double> expected{-6, -4, -2, 0, 2, 4, 6};
  REQUIRE(q3.boundaries.size() == expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i)
    CHECK(q3.boundaries[i] == Catch::Approx(expected[i]).margin(1e-15));

  CHECK_THROWS_AS(build_uniform_quantizer(0, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("quantizer is monotone and saturating") {
  const auto q = build_uniform_quantizer(3, 0.7, 1.3);
  double prev_bin = 0;
  for (double y = -20.0; y <= 20.0; y += 0.01) {
    const double bin = static_cast<double>(q.quantize(y));
    CHECK(bin >= prev_bin);
    prev_bin = bin;
  }
  CHECK(q.quantize(-1e9) == 0);
  CHECK(q.quantize(1e9) == q.num_bins() - 1);
}

TEST_CASE("ptp SAR pipeline matches the case-table bin") {
  // Raw y = 0.3 with a*sigma = 1/4 normalizes to 1.2; bin 2 of the four
  // cells split at -1/2, 0, 1/2.
  const auto bins = sar_ptp_run(2, {0.3 / 0.25});
  REQUIRE(bins.size() == 1);
  CHECK(bins[0] == 2);
  CHECK(sar_ptp_run(2, {-100.0})[0] == 0);
  CHECK_THROWS_AS(sar_ptp_run(0, {1.0}), std::invalid_argument);
}

TEST_CASE("ptp SAR equals the uniform quantizer on a dense grid") {
  std::mt19937_64 rng(3);
  for (unsigned bits = 1; bits <= 4; ++bits) {
    const auto q = build_uniform_quantizer(bits, 1.0, 1.0);  // boundaries 2m
    const double span = std::ldexp(1.0, bits);
    std::vector<double> input(100000);
    std::uniform_real_distribution<double> dist(-span, span);
    for (double& v : input) v = dist(rng);
    const auto bins = sar_ptp_run(bits, input);
    std::size_t mismatches = 0;
    for (std::size_t i = 0; i < input.size(); ++i)
      if (bins[i] != q.quantize(input[i])) ++mismatches;
    CHECK(mismatches == 0);
  }
}

TEST_CASE("bc SAR equals the doubled-resolution uniform quantizer") {
  std::mt19937_64 rng(5);
  for (unsigned budget = 1; budget <= 2; ++budget) {
    const auto q = build_uniform_quantizer(2 * budget, 1.0, 1.0);
    const double span = std::ldexp(1.0, 2 * budget);
    std::vector<double> input(10000);
    std::uniform_real_distribution<double> dist(-span, span);
    for (double& v : input) v = dist(rng);
    const auto bins = sar_bc_run(budget, input);
    REQUIRE(bins.size() == input.size());
    std::size_t mismatches = 0;
    for (std::size_t i = 0; i < input.size(); ++i)
      if (bins[i] != q.quantize(input[i])) ++mismatches;
    CHECK(mismatches == 0);
  }
  // Sample exactly at zero lands in the upper-middle bin.
  CHECK(sar_bc_run(1, {0.0})[0] == 2);
  CHECK(sar_bc_run(2, {0.0})[0] == 8);
  CHECK_THROWS_AS(sar_bc_run(0, {1.0}), std::invalid_argument);
}

TEST_CASE("one-shot channel cell structure") {
  // Two distinct thresholds make three realizable cells; (-1,+1) has none.
  const auto dmc = one_shot_channel({-1.0, 1.0}, {-3.0, 0.0, 3.0}, 1.0);
  CHECK(dmc.num_outputs == 3);
  for (const auto& row : dmc.transitions) {
    double s = 0.0;
    for (double p : row) {
      CHECK(p >= 0.0);
      s += p;
    }
    CHECK(s == Catch::Approx(1.0).margin(1e-12));
  }
  // Duplicate thresholds merge instead of erroring.
  CHECK(one_shot_channel({0.5, 0.5}, {0.0}, 1.0).num_outputs == 2);
}

TEST_CASE("one-shot channel approaches a noiseless BSC at high SNR") {
  const double amp = std::sqrt(1e6);
  const auto dmc = one_shot_channel({0.0}, {-amp, amp}, 1.0);
  CHECK(dmc.transitions[0][0] == Catch::Approx(1.0).margin(1e-9));
  CHECK(dmc.transitions[1][1] == Catch::Approx(1.0).margin(1e-9));
}

TEST_CASE("offset threshold between superposition points induces a Z structure") {
  const double base = std::sqrt(0.8 * 1e6);
  const std::vector<double> x{1.5 * base, -0.5 * base, 0.5 * base, -1.5 * base};
  const auto dmc = one_shot_channel({base + 0.01}, x, 1.0);
  CHECK(dmc.transitions[0][1] == Catch::Approx(1.0).margin(1e-9));  // 1.5 base above
  CHECK(dmc.transitions[1][0] == Catch::Approx(1.0).margin(1e-9));
  CHECK(dmc.transitions[2][0] == Catch::Approx(1.0).margin(1e-9));  // 0.5 base below
  CHECK(dmc.transitions[3][0] == Catch::Approx(1.0).margin(1e-9));
}
