#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace qmimo {

// Small dense row-major matrix. Everything in this project is <= 8x8.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {
    if (rows == 0 || cols == 0)
      throw std::invalid_argument("Matrix: dimensions must be >= 1");
  }
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
      : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (rows == 0 || cols == 0)
      throw std::invalid_argument("Matrix: dimensions must be >= 1");
    if (data_.size() != rows * cols)
      throw std::invalid_argument("Matrix: entry count != rows*cols");
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  const std::vector<double>& data() const { return data_; }

  bool all_finite() const {
    return std::all_of(data_.begin(), data_.end(),
                       [](double v) { return std::isfinite(v); });
  }

  Matrix transposed() const {
    Matrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

inline Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows())
    throw std::invalid_argument("matmul: inner dimensions differ");
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

inline std::vector<double> matvec(const Matrix& a, const std::vector<double>& x) {
  if (a.cols() != x.size())
    throw std::invalid_argument("matvec: dimension mismatch");
  std::vector<double> y(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) y[i] += a(i, j) * x[j];
  return y;
}

inline double frobenius_norm(const Matrix& m) {
  double s = 0.0;
  for (double v : m.data()) s += v * v;
  return std::sqrt(s);
}

// SVD of h as left * diag(singular_values) * right^T.
// left is rows x rows, right is cols x cols; min(rows, cols) singular
// values are reported, sorted nonincreasing.
struct SvdFactors {
  Matrix left;
  std::vector<double> singular_values;
  Matrix right;
};

namespace detail {

// One-sided Jacobi on the columns of a (rows >= cols assumed).
// Orthogonalizes column pairs until all rotations are below tolerance.
inline void one_sided_jacobi(Matrix& a, Matrix& v) {
  const std::size_t n = a.cols();
  const std::size_t m = a.rows();
  const double eps = 1e-15;
  for (int sweep = 0; sweep < 60; ++sweep) {
    bool converged = true;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double app = 0.0, aqq = 0.0, apq = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
          app += a(i, p) * a(i, p);
          aqq += a(i, q) * a(i, q);
          apq += a(i, p) * a(i, q);
        }
        if (std::abs(apq) <= eps * std::sqrt(app * aqq) || apq == 0.0) continue;
        converged = false;
        const double tau = (aqq - app) / (2.0 * apq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t i = 0; i < m; ++i) {
          const double ap = a(i, p), aq = a(i, q);
          a(i, p) = c * ap - s * aq;
          a(i, q) = s * ap + c * aq;
        }
        for (std::size_t i = 0; i < n; ++i) {
          const double vp = v(i, p), vq = v(i, q);
          v(i, p) = c * vp - s * vq;
          v(i, q) = s * vp + c * vq;
        }
      }
    }
    if (converged) break;
  }
}

}  // namespace detail

// One-sided Jacobi SVD. Sign convention: the first nonzero component of
// each right-singular vector is made positive so factors are reproducible.
inline SvdFactors svd(const Matrix& m) {
  if (!m.all_finite()) throw std::invalid_argument("svd: non-finite input");

  const bool transposed = m.rows() < m.cols();
  Matrix a = transposed ? m.transposed() : m;
  const std::size_t rows = a.rows(), cols = a.cols();

  Matrix v = Matrix::identity(cols);
  detail::one_sided_jacobi(a, v);

  // Column norms are the singular values; normalized columns form U.
  std::vector<std::size_t> order(cols);
  std::vector<double> sigma(cols);
  for (std::size_t j = 0; j < cols; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < rows; ++i) s += a(i, j) * a(i, j);
    sigma[j] = std::sqrt(s);
    order[j] = j;
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return sigma[x] > sigma[y]; });

  Matrix u(rows, rows);
  Matrix vmat(cols, cols);
  std::vector<double> sorted_sigma(cols);
  for (std::size_t jj = 0; jj < cols; ++jj) {
    const std::size_t j = order[jj];
    sorted_sigma[jj] = sigma[j];
    for (std::size_t i = 0; i < cols; ++i) vmat(i, jj) = v(i, j);
    if (sigma[j] > 1e-300) {
      for (std::size_t i = 0; i < rows; ++i) u(i, jj) = a(i, j) / sigma[j];
    }
  }

  // Complete U to an orthonormal basis for null columns (sigma == 0 or
  // jj >= cols) by Gram-Schmidt against the unit vectors.
  for (std::size_t jj = 0; jj < rows; ++jj) {
    double norm = 0.0;
    for (std::size_t i = 0; i < rows; ++i) norm += u(i, jj) * u(i, jj);
    if (norm > 0.5) continue;
    for (std::size_t e = 0; e < rows; ++e) {
      std::vector<double> cand(rows, 0.0);
      cand[e] = 1.0;
      for (std::size_t k = 0; k < rows; ++k) {
        if (k == jj) continue;
        double dot = 0.0;
        for (std::size_t i = 0; i < rows; ++i) dot += cand[i] * u(i, k);
        for (std::size_t i = 0; i < rows; ++i) cand[i] -= dot * u(i, k);
      }
      double cn = 0.0;
      for (double c : cand) cn += c * c;
      if (cn > 1e-6) {
        cn = std::sqrt(cn);
        for (std::size_t i = 0; i < rows; ++i) u(i, jj) = cand[i] / cn;
        break;
      }
    }
  }

  // m = left * diag(sigma) * right, with right rows the right-singular
  // vectors. Sign convention: first nonzero of each right-singular vector
  // is positive.
  SvdFactors f;
  sorted_sigma.resize(std::min(rows, cols));
  if (!transposed) {
    f.left = u;
    f.right = vmat.transposed();
  } else {
    f.left = vmat;
    f.right = u.transposed();
  }
  f.singular_values = std::move(sorted_sigma);

  const std::size_t nv = f.right.rows();
  for (std::size_t k = 0; k < nv; ++k) {
    double sign = 1.0;
    for (std::size_t i = 0; i < f.right.cols(); ++i) {
      if (std::abs(f.right(k, i)) > 1e-14) {
        sign = f.right(k, i) > 0.0 ? 1.0 : -1.0;
        break;
      }
    }
    if (sign < 0.0) {
      for (std::size_t i = 0; i < f.right.cols(); ++i) f.right(k, i) = -f.right(k, i);
      if (k < f.left.cols())
        for (std::size_t i = 0; i < f.left.rows(); ++i) f.left(i, k) = -f.left(i, k);
    }
  }
  return f;
}

struct Point2D {
  double x = 0.0;
  double y = 0.0;
};

inline bool operator==(const Point2D& a, const Point2D& b) {
  return a.x == b.x && a.y == b.y;
}

// Monotone-chain convex hull, counterclockwise, collinear points dropped.
inline std::vector<Point2D> convex_hull_2d(std::vector<Point2D> pts) {
  if (pts.empty()) throw std::invalid_argument("convex_hull_2d: empty input");
  std::sort(pts.begin(), pts.end(), [](const Point2D& a, const Point2D& b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  const std::size_t n = pts.size();
  if (n <= 2) return pts;

  auto cross = [](const Point2D& o, const Point2D& a, const Point2D& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
  };

  std::vector<Point2D> hull(2 * n);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  const std::size_t lower = k + 1;
  for (std::size_t i = n - 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  // All input collinear: the chain degenerates to the two extremes.
  if (hull.size() < 3) {
    std::vector<Point2D> seg{pts.front(), pts.back()};
    if (seg[0] == seg[1]) seg.pop_back();
    return seg;
  }
  return hull;
}

// True if p is inside or on the (counterclockwise) hull, within tol on the
// half-plane inequalities.
inline bool hull_contains(const std::vector<Point2D>& hull, const Point2D& p,
                          double tol = 1e-12) {
  if (hull.empty()) return false;
  if (hull.size() == 1)
    return std::abs(p.x - hull[0].x) <= tol && std::abs(p.y - hull[0].y) <= tol;
  if (hull.size() == 2) {
    const double cross = (hull[1].x - hull[0].x) * (p.y - hull[0].y) -
                         (hull[1].y - hull[0].y) * (p.x - hull[0].x);
    if (std::abs(cross) > tol) return false;
    const double dot = (p.x - hull[0].x) * (hull[1].x - hull[0].x) +
                       (p.y - hull[0].y) * (hull[1].y - hull[0].y);
    const double len2 = (hull[1].x - hull[0].x) * (hull[1].x - hull[0].x) +
                        (hull[1].y - hull[0].y) * (hull[1].y - hull[0].y);
    return dot >= -tol && dot <= len2 + tol;
  }
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const Point2D& a = hull[i];
    const Point2D& b = hull[(i + 1) % hull.size()];
    const double cross = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
    if (cross < -tol) return false;
  }
  return true;
}

}  // namespace qmimo
