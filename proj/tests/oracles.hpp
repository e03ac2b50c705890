#pragma once

// Independent reference computations for the tests: central differences and
// brute-force least squares. Nothing here uses jets or the library's solver.

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include "opfrob/field.hpp"
#include "opfrob/matrix.hpp"

namespace oracle {

using opfrob::Matrix;

constexpr double kStep = 1e-6;

inline double central_difference(const std::function<double(const std::vector<double>&)>& f,
                                 std::vector<double> u, std::size_t k, double h = kStep) {
  const double x = u[k];
  u[k] = x + h;
  const double fp = f(u);
  u[k] = x - h;
  const double fm = f(u);
  return (fp - fm) / (2.0 * h);
}

inline Matrix<double> matrix_difference(const opfrob::OperatorField& field, std::vector<double> u, std::size_t k,
                                        double h = kStep) {
  const double x = u[k];
  u[k] = x + h;
  const Matrix<double> fp = field(u);
  u[k] = x - h;
  const Matrix<double> fm = field(u);
  return (1.0 / (2.0 * h)) * (fp - fm);
}

// T^i_{jk} from the coordinate formula with finite-difference partials.
inline std::vector<double> bracket(const opfrob::OperatorField& l, const opfrob::OperatorField& m,
                                   const std::vector<double>& u) {
  const std::size_t n = u.size();
  const Matrix<double> lv = l(u), mv = m(u);
  std::vector<Matrix<double>> dl, dm;
  for (std::size_t s = 0; s < n; ++s) {
    dl.push_back(matrix_difference(l, u, s));
    dm.push_back(matrix_difference(m, u, s));
  }
  std::vector<double> t(n * n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        double acc = 0.0;
        for (std::size_t s = 0; s < n; ++s)
          acc += lv(s, j) * dm[s](i, k) - mv(s, k) * dl[s](i, j) - lv(i, s) * dm[j](s, k) + mv(i, s) * dl[k](s, j);
        t[(i * n + j) * n + k] = acc;
      }
  return t;
}

// Gaussian elimination with partial pivoting on a small dense system, kept
// separate from the library's solver.
inline std::vector<double> gauss(std::vector<std::vector<double>> a, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(a[r][c]) > std::abs(a[p][c])) p = r;
    std::swap(a[p], a[c]);
    std::swap(b[p], b[c]);
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  std::vector<double> x(n);
  for (std::size_t c = n; c-- > 0;) {
    double acc = b[c];
    for (std::size_t k = c + 1; k < n; ++k) acc -= a[c][k] * x[k];
    x[c] = acc / a[c][c];
  }
  return x;
}

// a_{ij}^k by least squares over all n^2 matrix entries (normal equations).
inline std::vector<double> structure_constants_lsq(const std::vector<Matrix<double>>& k) {
  const std::size_t n = k.size();
  std::vector<std::vector<double>> g(n, std::vector<double>(n, 0.0));
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t t = 0; t < n; ++t)
      for (std::size_t e = 0; e < n * n; ++e) g[s][t] += k[s].data()[e] * k[t].data()[e];
  std::vector<double> out(n * n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const Matrix<double> prod = k[i] * k[j];
      std::vector<double> r(n, 0.0);
      for (std::size_t s = 0; s < n; ++s)
        for (std::size_t e = 0; e < n * n; ++e) r[s] += k[s].data()[e] * prod.data()[e];
      const auto x = gauss(g, r);
      for (std::size_t s = 0; s < n; ++s) out[(i * n + j) * n + s] = x[s];
    }
  return out;
}

// {F, G} with u-derivatives of F = p^T h p taken by central differences.
inline double poisson_bracket(const opfrob::OperatorField& hf, const opfrob::OperatorField& hg,
                              const std::vector<double>& u, const std::vector<double>& p) {
  const std::size_t n = u.size();
  auto value = [&](const opfrob::OperatorField& h, const std::vector<double>& x) {
    const Matrix<double> m = h(x);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) acc += m(i, j) * p[i] * p[j];
    return acc;
  };
  auto grad_p = [&](const opfrob::OperatorField& h) {
    const Matrix<double> m = h(u);
    std::vector<double> g(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) g[i] += (m(i, k) + m(k, i)) * p[k];
    return g;
  };
  const auto fp = grad_p(hf), gp = grad_p(hg);
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double gu = central_difference([&](const std::vector<double>& x) { return value(hg, x); }, u, i);
    const double fu = central_difference([&](const std::vector<double>& x) { return value(hf, x); }, u, i);
    acc += fp[i] * gu - fu * gp[i];
  }
  return acc;
}

// {F, G} for F(u, p), G(u, p) with every derivative by central differences.
template <class F, class G>
double poisson_bracket_fd(F f, G g, const std::vector<double>& u, const std::vector<double>& p) {
  const std::size_t n = u.size();
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double fp = central_difference([&](const std::vector<double>& x) { return f(u, x); }, p, i);
    const double gp = central_difference([&](const std::vector<double>& x) { return g(u, x); }, p, i);
    const double fu = central_difference([&](const std::vector<double>& x) { return f(x, p); }, u, i);
    const double gu = central_difference([&](const std::vector<double>& x) { return g(x, p); }, u, i);
    acc += fp * gu - fu * gp;
  }
  return acc;
}

inline bool close_rel(double a, double b, double rel, double abs_floor = 1e-9) {
  return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b)) + abs_floor;
}

}  // namespace oracle
