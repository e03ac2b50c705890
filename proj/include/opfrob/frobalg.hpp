#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "opfrob/field.hpp"
#include "opfrob/linalg.hpp"
#include "opfrob/matrix.hpp"
#include "opfrob/parallel.hpp"
#include "opfrob/report.hpp"
#include "opfrob/sampling.hpp"

namespace opfrob {

// Seed of the draw sequence used whenever a generic vector is needed
// internally (dual fields, decompositions). Fixed so results are reproducible.
inline constexpr std::uint64_t kGenericSeed = 0x0f0b5eedULL;
inline constexpr std::size_t kGenericDraws = 32;

// a_{ij}^k with K_i K_j = sum_k a_{ij}^k K_k.
template <class T>
struct StructureConstants {
  std::size_t n = 0;
  std::vector<T> a;
  // max |K_i K_j - sum_s a_{ij}^s K_s| / (1 + largest entry), on values.
  double closure_residual = 0.0;

  T& operator()(std::size_t i, std::size_t j, std::size_t k) { return a[(i * n + j) * n + k]; }
  const T& operator()(std::size_t i, std::size_t j, std::size_t k) const { return a[(i * n + j) * n + k]; }
};

template <class T>
struct FrobeniusPointData {
  StructureConstants<T> constants;
  Matrix<T> b;
  Matrix<T> b_inv;
  std::vector<Matrix<T>> dual;  // M^j = sum_i b^{ji} K_i
  std::vector<T> identity;      // a^j, with sum_j a^j K_j = Id
};

bool is_generic_vector(std::span<const Matrix<double>> k, std::span<const double> xi, double tol = kDefaultRankTol);
bool is_generic_covector(std::span<const Matrix<double>> k, std::span<const double> a,
                         double tol = kDefaultRankTol);

// Rejection sampling of xi in [-1, 1]^n; the first draw that passes wins.
std::optional<std::vector<double>> find_generic_vector(std::span<const Matrix<double>> k, Rng& rng,
                                                       std::size_t draws = kGenericDraws,
                                                       double tol = kDefaultRankTol);
std::optional<std::vector<double>> find_generic_covector(std::span<const Matrix<double>> k, Rng& rng,
                                                         std::size_t draws = kGenericDraws,
                                                         double tol = kDefaultRankTol);

// Same as above with a fresh Rng(kGenericSeed); throws InputError on failure.
std::vector<double> generic_vector(std::span<const Matrix<double>> k);

// Coordinates of x in the basis, from x xi = sum_s c_s K_s xi.
template <class T>
std::vector<T> coordinates_in_basis(std::span<const Matrix<T>> k, const Matrix<T>& x, std::span<const double> xi);

template <class T>
StructureConstants<T> structure_constants(std::span<const Matrix<T>> k, std::span<const double> xi);

// Throws InputError if the span is not closed under multiplication.
void require_closed(double closure_residual, double tol);

template <class T>
FrobeniusPointData<T> dual_basis(std::span<const Matrix<T>> k, const StructureConstants<T>& sc,
                                 std::span<const double> a);

// Generic vector, structure constants, closure and dual basis in one call.
template <class T>
FrobeniusPointData<T> frobenius_data(std::span<const Matrix<T>> k, std::span<const double> a,
                                     double closure_tol = 1e-9);

// M^j as lazily evaluated fields; valid over double, Jet and Series.
OperatorBasis dual_fields(const OperatorBasis& k, std::vector<double> a);

double associativity_residual(const StructureConstants<double>& sc);

struct CheckOptions {
  double tol = 1e-9;
  double rank_tol = kDefaultRankTol;
  std::size_t draws = kGenericDraws;
  std::uint64_t seed = 42;
  Execution exec = Execution::parallel;
};

// Commutativity, (A1), (A2), closure, associativity and, given a covector,
// nondegeneracy of b, the pairing b(K_i, M^j) = delta and Id in the span.
Report verify_algebra(const OperatorBasis& k, const std::optional<std::vector<double>>& a, const PointSet& points,
                      const CheckOptions& options = {});

}  // namespace opfrob
