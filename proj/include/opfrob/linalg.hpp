#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "opfrob/matrix.hpp"

namespace opfrob {

// Pivots below this fraction of the largest |entry| are treated as zero.
inline constexpr double kSingularPivot = 1e-12;
inline constexpr double kDefaultRankTol = 1e-9;

// Solves A X = B by partially pivoted elimination. Pivoting uses the value
// part of each entry, so jets and series propagate derivatives through the
// same elimination sequence. Throws SingularMatrixError.
template <class T>
Matrix<T> solve(const Matrix<T>& a, const Matrix<T>& b);

template <class T>
std::vector<T> solve(const Matrix<T>& a, std::span<const T> b);

template <class T>
Matrix<T> inverse(const Matrix<T>& a);

// Numerical rank by full-pivot row reduction; pivots smaller than
// tol * (largest pivot) are dropped.
std::size_t rank(const Matrix<double>& a, double tol = kDefaultRankTol);

// Rank of the n x n matrix whose columns are the given vectors.
std::size_t rank_of_columns(std::span<const std::vector<double>> columns, double tol = kDefaultRankTol);

double determinant(const Matrix<double>& a);

struct SqrtOptions {
  int max_iterations = 60;
  double residual_tol = 1e-10;
};

// Principal square root by the Denman-Beavers coupled iteration. Requires the
// spectrum in the open right half-plane; otherwise the iteration does not
// settle and ConvergenceError is thrown.
Matrix<double> sqrt_near_identity(const Matrix<double>& s, const SqrtOptions& options = {});

}  // namespace opfrob
