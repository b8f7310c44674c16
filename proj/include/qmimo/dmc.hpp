#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace qmimo {

// P(N > x) for standard normal N.
inline double gaussian_tail(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("gaussian_tail: non-finite");
  return 0.5 * std::erfc(x / 1.4142135623730950488016887);
}

// Discrete memoryless channel as a row-stochastic transition matrix,
// transitions[input][output].
struct DmcMatrix {
  std::size_t num_inputs = 0;
  std::size_t num_outputs = 0;
  std::vector<std::vector<double>> transitions;

  void validate(double tol = 1e-12) const {
    if (transitions.size() != num_inputs)
      throw std::invalid_argument("DmcMatrix: row count mismatch");
    for (const auto& row : transitions) {
      if (row.size() != num_outputs)
        throw std::invalid_argument("DmcMatrix: column count mismatch");
      double s = 0.0;
      for (double p : row) {
        if (p < -tol || p > 1.0 + tol)
          throw std::invalid_argument("DmcMatrix: entry outside [0,1]");
        s += p;
      }
      if (std::abs(s - 1.0) > 1e-9)
        throw std::invalid_argument("DmcMatrix: row does not sum to 1");
    }
  }
};

}  // namespace qmimo
