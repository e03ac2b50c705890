#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "opfrob/field.hpp"
#include "opfrob/frobalg.hpp"
#include "opfrob/opfields.hpp"

namespace opfrob {

// Coefficients c0 + c1 t + c2 t^2 + ...
using Polynomial = std::vector<double>;

// Horner evaluation of p(X) for a square matrix X.
template <class T>
Matrix<T> matrix_polynomial(const Polynomial& p, const Matrix<T>& x) {
  const std::size_t n = x.size();
  Matrix<T> acc(n);
  for (std::size_t k = p.size(); k-- > 0;) {
    acc = acc * x;
    for (std::size_t i = 0; i < n; ++i) acc(i, i) += T(p[k]);
  }
  return acc;
}

// Constant commuting matrices M^1..M^n spanning a Frobenius algebra with Id,
// together with a generic vector xi. Flat coordinates u are defined by
// d/du^i = M^i xi, i.e. x = C u with C = [M^1 xi | ... | M^n xi].
class FlatBasis {
 public:
  static FlatBasis create(std::vector<Matrix<double>> m, std::optional<std::vector<double>> xi = std::nullopt,
                          double tol = 1e-9);

  std::size_t dimension() const noexcept { return m_.size(); }
  const std::vector<Matrix<double>>& matrices() const noexcept { return m_; }
  const std::vector<double>& xi() const noexcept { return xi_; }
  const Matrix<double>& to_flat() const noexcept { return c_inv_; }
  const StructureConstants<double>& constants() const noexcept { return sc_; }
  const std::vector<double>& identity_coordinates() const noexcept { return identity_; }
  OperatorBasis basis() const;

  template <class T>
  std::vector<T> flat_coordinates(std::span<const T> x) const {
    return Matrix<T>::cast(c_inv_).apply(x);
  }

  // U(x) = sum_i u^i(x) M^i.
  template <class T>
  Matrix<T> canonical(std::span<const T> x) const {
    const auto u = flat_coordinates(x);
    Matrix<T> out(dimension());
    for (std::size_t i = 0; i < dimension(); ++i) out += u[i] * Matrix<T>::cast(m_[i]);
    return out;
  }

 private:
  std::vector<Matrix<double>> m_;
  std::vector<double> xi_;
  Matrix<double> c_inv_;
  StructureConstants<double> sc_;
  std::vector<double> identity_;
};

OperatorField canonical_symmetry_U(const FlatBasis& flat);

// M = sum_i f_i(U) M^i.
OperatorField analytic_symmetry(const FlatBasis& flat, std::vector<Polynomial> f);

// Pointwise product of two operator fields.
OperatorField product_field(const OperatorField& a, const OperatorField& b);

// Commutation with every M^i, decomposition candidate = sum g_i M^i, and
// strong symmetry against every M^i.
Report sym_membership(const OperatorBasis& m, const OperatorField& candidate, const PointSet& points,
                      const CheckOptions& options = {});

}  // namespace opfrob
