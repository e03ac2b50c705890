#pragma once

// Hand-entered fixture data shared by the test suites.

#include <string>
#include <vector>

#include "opfrob/field.hpp"
#include "opfrob/matrix.hpp"

namespace fx {

using opfrob::Matrix;

inline Matrix<double> unit(std::size_t n, std::size_t r, std::size_t c) {
  Matrix<double> m(n);
  m(r, c) = 1.0;
  return m;
}

// Natural basis of the four-dimensional algebra: Id, e2e1^T + e4e2^T,
// e3e1^T + e4e3^T, e4e1^T (0-based indices below).
inline std::vector<Matrix<double>> example52() {
  return {Matrix<double>::identity(4), unit(4, 1, 0) + unit(4, 3, 1), unit(4, 2, 0) + unit(4, 3, 2), unit(4, 3, 0)};
}

inline opfrob::OperatorBasis constant_basis(const std::vector<Matrix<double>>& ms) {
  std::vector<opfrob::OperatorField> f;
  for (const auto& m : ms) f.push_back(opfrob::OperatorField::constant(m));
  return opfrob::OperatorBasis(std::move(f));
}

inline opfrob::OperatorField field(const std::vector<std::vector<std::string>>& grid) {
  return opfrob::OperatorField::parse(grid, grid.size());
}

// The non-constant basis built from f_1 = 1, u1; f_2 = u1; f_1 = u1^2.
inline std::vector<std::vector<std::vector<std::string>>> example52_tilde() {
  return {
      {{"1", "0", "0", "0"}, {"0", "1", "0", "0"}, {"0", "0", "1", "0"}, {"0", "0", "0", "1"}},
      {{"u1", "0", "0", "0"}, {"u2", "u1", "0", "0"}, {"u3", "0", "u1", "0"}, {"u4", "u2", "u3", "u1"}},
      {{"0", "0", "0", "0"}, {"u1", "0", "0", "0"}, {"0", "0", "0", "0"}, {"u2", "u1", "0", "0"}},
      {{"u1^2", "0", "0", "0"},
       {"2*u1*u2", "u1^2", "0", "0"},
       {"2*u1*u3", "0", "u1^2", "0"},
       {"u2^2+u3^2+2*u1*u4", "2*u1*u2", "2*u1*u3", "u1^2"}},
  };
}

inline std::vector<std::string> example52_rational() {
  return {
      "(2*p1*p4*u1*u3+p2^2*u1*u3-2*p2*p4*u2*u3+p3^2*u1*u3-2*p3*p4*u1*u4+2*p3*p4*u2^2)/(u1*u3*(u2^2+u3^2))",
      "2*p4*(p2*u3-u2*p3)/(u1*u3)",
      "-2*(2*p1*p4*u1*u3+p2^2*u1*u3-2*p2*p4*u2*u3+p3^2*u1*u3-2*p3*p4*u1*u4+p3*p4*u2^2-p3*p4*u3^2)/((u2^2+u3^2)*u3)",
      "(2*p1*p4*u1^2*u3+p2^2*u1^2*u3-2*p2*p4*u1*u2*u3+p3^2*u1^2*u3-2*p3*p4*u1^2*u4-2*p3*p4*u1*u3^2+p4^2*u2^2*u3+"
      "p4^2*u3^3)/((u2^2+u3^2)*u3)",
  };
}

}  // namespace fx
