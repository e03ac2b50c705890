#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "opfrob/field.hpp"
#include "opfrob/frobalg.hpp"
#include "opfrob/report.hpp"

namespace opfrob {

// Components T^i_{jk} of <L, M> at one point.
struct BracketTensor {
  std::size_t n = 0;
  std::vector<double> t;
  // 1 + |L||dM| + |M||dL|; residuals below are divided by it.
  double magnitude = 1.0;

  double operator()(std::size_t i, std::size_t j, std::size_t k) const { return t[(i * n + j) * n + k]; }
  // max |T^i_{jk} + T^i_{kj}| / magnitude
  double symmetric_residual() const;
  // max |T^i_{jk}| / magnitude
  double full_residual() const;
};

// T^i_{jk} = L^s_j d_s M^i_k - M^s_k d_s L^i_j - L^i_r d_j M^r_k + M^i_s d_k L^s_j.
// Both matrices must carry jets seeded on all coordinates.
BracketTensor bracket(const Matrix<Jet>& l, const Matrix<Jet>& m, double commute_tol = 1e-9);
BracketTensor bracket(const OperatorField& l, const OperatorField& m, std::span<const double> u,
                      double commute_tol = 1e-9);

CheckResult symmetry_check(const OperatorField& l, const OperatorField& m, const PointSet& points,
                           const CheckOptions& options, std::string name = "symmetry");
CheckResult strong_symmetry_check(const OperatorField& l, const OperatorField& m, const PointSet& points,
                                  const CheckOptions& options, std::string name = "strong symmetry");
CheckResult nijenhuis_check(const OperatorField& l, const PointSet& points, const CheckOptions& options,
                            std::string name = "Nijenhuis torsion");

enum class BracketNorm { symmetric, full };

// Max over all pairs i < j (and i == j for the full norm) of the family.
CheckResult pairwise_check(const OperatorBasis& family, BracketNorm norm, const PointSet& points,
                           const CheckOptions& options, std::string name);
CheckResult pairwise_check(const std::vector<OperatorField>& family, BracketNorm norm, const PointSet& points,
                           const CheckOptions& options, std::string name);

// dalpha = 0 is checked first and reported as an error if it fails; then the
// curl of (M^* alpha)_k = alpha_i M^i_k.
Report conservation_law_check(const OperatorField& m, const OneFormField& alpha, const PointSet& points,
                              const CheckOptions& options);

double curl_residual(const std::vector<Jet>& form);

struct DualizeResult {
  OperatorBasis dual;
  Report report;
};

DualizeResult dualize_family(const OperatorBasis& k, const std::vector<double>& a, const PointSet& points,
                             const CheckOptions& options = {});

// K_i^* dh^j = a_{is}^j dh^s at every point.
Report symmetry_coefficient_check(const OperatorBasis& k, const FunctionTuple& h, const PointSet& points,
                                  const CheckOptions& options = {});

}  // namespace opfrob
