#include "opfrob/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <type_traits>

#include "opfrob/taylor.hpp"

namespace opfrob {

template <class T>
Matrix<T> solve(const Matrix<T>& a, const Matrix<T>& b) {
  const std::size_t n = a.size();
  if (b.size() != n) throw InputError("solve: dimension mismatch");
  Matrix<T> lu = a;
  Matrix<T> x = b;
  const double threshold = kSingularPivot * max_abs_value(a);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    double best = std::abs(value_of(lu(col, col)));
    for (std::size_t r = col + 1; r < n; ++r) {
      const double v = std::abs(value_of(lu(r, col)));
      if (v > best) {
        best = v;
        pivot = r;
      }
    }
    if (best == 0.0 || best < threshold) throw SingularMatrixError("matrix is singular to working tolerance");
    if (pivot != col) {
      for (std::size_t c = 0; c < n; ++c) {
        std::swap(lu(pivot, c), lu(col, c));
        std::swap(x(pivot, c), x(col, c));
      }
    }
    const T inv = T(1.0) / lu(col, col);
    for (std::size_t r = col + 1; r < n; ++r) {
      if constexpr (std::is_same_v<T, double>) {
        if (lu(r, col) == 0.0) continue;
      }
      const T f = lu(r, col) * inv;
      for (std::size_t c = col; c < n; ++c) lu(r, c) -= f * lu(col, c);
      for (std::size_t c = 0; c < n; ++c) x(r, c) -= f * x(col, c);
    }
  }
  for (std::size_t col = n; col-- > 0;) {
    for (std::size_t c = 0; c < n; ++c) {
      T acc = x(col, c);
      for (std::size_t k = col + 1; k < n; ++k) acc -= lu(col, k) * x(k, c);
      x(col, c) = acc / lu(col, col);
    }
  }
  return x;
}

template <class T>
std::vector<T> solve(const Matrix<T>& a, std::span<const T> b) {
  const std::size_t n = a.size();
  if (b.size() != n) throw InputError("solve: dimension mismatch");
  Matrix<T> rhs(n);
  for (std::size_t i = 0; i < n; ++i) rhs(i, 0) = b[i];
  // Solving against a padded right-hand side keeps one elimination routine.
  Matrix<T> x = solve(a, rhs);
  std::vector<T> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = x(i, 0);
  return out;
}

template <class T>
Matrix<T> inverse(const Matrix<T>& a) {
  return solve(a, Matrix<T>::identity(a.size()));
}

std::size_t rank(const Matrix<double>& a, double tol) {
  const std::size_t n = a.size();
  Matrix<double> m = a;
  std::size_t r = 0;
  double first = 0.0;
  std::vector<bool> used_col(n, false);
  for (std::size_t step = 0; step < n; ++step) {
    double best = 0.0;
    std::size_t br = 0, bc = 0;
    for (std::size_t i = step; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        if (used_col[j]) continue;
        if (std::abs(m(i, j)) > best) {
          best = std::abs(m(i, j));
          br = i;
          bc = j;
        }
      }
    if (step == 0) first = best;
    if (best == 0.0 || best <= tol * first) break;
    for (std::size_t j = 0; j < n; ++j) std::swap(m(step, j), m(br, j));
    used_col[bc] = true;
    for (std::size_t i = step + 1; i < n; ++i) {
      const double f = m(i, bc) / m(step, bc);
      for (std::size_t j = 0; j < n; ++j) m(i, j) -= f * m(step, j);
    }
    ++r;
  }
  return r;
}

std::size_t rank_of_columns(std::span<const std::vector<double>> columns, double tol) {
  const std::size_t n = columns.size();
  Matrix<double> m(n);
  for (std::size_t j = 0; j < n; ++j) {
    if (columns[j].size() != n) throw InputError("rank_of_columns: expected a square arrangement");
    for (std::size_t i = 0; i < n; ++i) m(i, j) = columns[j][i];
  }
  return rank(m, tol);
}

double determinant(const Matrix<double>& a) {
  const std::size_t n = a.size();
  Matrix<double> m = a;
  double det = 1.0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(m(r, col)) > std::abs(m(pivot, col))) pivot = r;
    if (m(pivot, col) == 0.0) return 0.0;
    if (pivot != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(m(pivot, c), m(col, c));
      det = -det;
    }
    det *= m(col, col);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = m(r, col) / m(col, col);
      for (std::size_t c = col; c < n; ++c) m(r, c) -= f * m(col, c);
    }
  }
  return det;
}

Matrix<double> sqrt_near_identity(const Matrix<double>& s, const SqrtOptions& options) {
  const std::size_t n = s.size();
  const double scale = std::max(max_abs(s), 1e-300);
  Matrix<double> y = s;
  Matrix<double> z = Matrix<double>::identity(n);
  for (int it = 0; it < options.max_iterations; ++it) {
    Matrix<double> y_inv, z_inv;
    try {
      y_inv = inverse(y);
      z_inv = inverse(z);
    } catch (const SingularMatrixError&) {
      throw ConvergenceError("square root iteration hit a singular iterate; spectrum not in the right half-plane");
    }
    Matrix<double> y_next = 0.5 * (y + z_inv);
    Matrix<double> z_next = 0.5 * (z + y_inv);
    const double step = max_abs(y_next - y) / std::max(1.0, max_abs(y_next));
    y = std::move(y_next);
    z = std::move(z_next);
    if (step < 1e-15) break;
  }
  for (double v : y.data())
    if (!std::isfinite(v)) throw ConvergenceError("square root iteration diverged");
  const double residual = max_abs(y * y - s);
  if (residual > options.residual_tol * scale)
    throw ConvergenceError("square root iteration did not converge; spectrum not in the right half-plane");
  return y;
}

template Matrix<double> solve(const Matrix<double>&, const Matrix<double>&);
template Matrix<Jet> solve(const Matrix<Jet>&, const Matrix<Jet>&);
template Matrix<Series> solve(const Matrix<Series>&, const Matrix<Series>&);
template std::vector<double> solve(const Matrix<double>&, std::span<const double>);
template std::vector<Jet> solve(const Matrix<Jet>&, std::span<const Jet>);
template std::vector<Series> solve(const Matrix<Series>&, std::span<const Series>);
template Matrix<double> inverse(const Matrix<double>&);
template Matrix<Jet> inverse(const Matrix<Jet>&);
template Matrix<Series> inverse(const Matrix<Series>&);

}  // namespace opfrob
