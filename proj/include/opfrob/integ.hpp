#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "opfrob/field.hpp"
#include "opfrob/frobalg.hpp"
#include "opfrob/opfields.hpp"

namespace opfrob {

// F(u, p) = h^{ij}(u) p_i p_j with symmetric h.
class QuadraticHamiltonian {
 public:
  QuadraticHamiltonian() = default;

  // h is used as given; only its symmetric part enters F.
  static QuadraticHamiltonian from_matrix(OperatorField h, std::string label = {});
  static QuadraticHamiltonian from_grid(const std::vector<std::vector<std::string>>& grid, std::size_t dimension);
  // Expression in u1..un, p1..pn; h is recovered by polarization in p, so the
  // expression must be a quadratic form in the momenta (see quadratic_residual).
  static QuadraticHamiltonian parse(const std::string& text, std::size_t dimension);

  std::size_t dimension() const noexcept { return h_.dimension(); }
  const OperatorField& coefficients() const noexcept { return h_; }
  const std::string& text() const noexcept { return text_; }
  const std::optional<Expression>& expression() const noexcept { return expr_; }

  template <class T>
  Matrix<T> h(std::span<const T> u) const {
    return h_.eval(u);
  }
  double value(std::span<const double> u, std::span<const double> p) const;

  // |F(u,p) - p^T h(u) p| / (1 + |F|) at the given point; zero for matrix input.
  double quadratic_residual(std::span<const double> u, std::span<const double> p) const;

 private:
  OperatorField h_;
  std::string text_;
  std::optional<Expression> expr_;
};

// {F, G} = sum_i dF/dp_i dG/du^i - dF/du^i dG/dp_i.
double poisson_bracket(const QuadraticHamiltonian& f, const QuadraticHamiltonian& g, std::span<const double> u,
                       std::span<const double> p);

struct IntegOptions : CheckOptions {
  std::size_t momentum_draws = 50;
};

// Momenta used at sample index `point`; deterministic in (seed, point, draw).
std::vector<std::vector<double>> momentum_samples(std::size_t n, std::uint64_t seed, std::size_t point,
                                                  std::size_t draws);

// max over points, momenta and pairs of |{F_i, F_j}| / (1 + |F_i||F_j|).
CheckResult commuting_check(const std::vector<QuadraticHamiltonian>& family, const PointSet& points,
                            const IntegOptions& options, std::string name = {});
Report verify_commuting_family(const std::vector<QuadraticHamiltonian>& family, const PointSet& points,
                               const IntegOptions& options = {});

// det(dF/dp) != 0 at random p: rank test on the rows 2 h_s p, up to three
// momentum draws per point.
CheckResult momentum_jacobian_check(const std::vector<QuadraticHamiltonian>& family, const PointSet& points,
                                    const IntegOptions& options);

struct IntegrableSystem {
  std::size_t n = 0;
  OperatorBasis basis;
  OneFormField alpha;
  std::optional<FunctionTuple> chart;
  // Hamiltonians in the input coordinates u: h_s = J^{-1} A_s J^{-T}, where
  // J has rows M^{i*} alpha and (A_s)^{ij} = a^{ij}_s.
  std::vector<QuadraticHamiltonian> hamiltonians;
  // Exact coefficients when basis and alpha are constant.
  bool constant = false;
  Matrix<double> jacobian;
  std::vector<Matrix<double>> chart_coefficients;
  std::vector<Matrix<double>> ambient_coefficients;
  Report report;
};

IntegrableSystem generate_system(const OperatorBasis& basis, const OneFormField& alpha,
                                 const std::optional<FunctionTuple>& chart, const PointSet& points,
                                 const IntegOptions& options = {});

// Text form of sum h^{ij} p_i p_j for constant h, e.g. "2*p1*p4+p2^2+p3^2".
std::string format_quadratic(const Matrix<double>& h, const char* momentum = "p");

// K_s = h_s h_1^{-1} at a point. Throws InputError when h_1 is degenerate.
std::vector<Matrix<double>> killing_tensors_at(const std::vector<QuadraticHamiltonian>& family,
                                               std::span<const double> u);

// Killing tensors of a generated system: commutation, the duality
// M^i = a^{is}_1 K_s and self-adjointness of every M^i w.r.t. every h_s.
Report killing_tensors(const IntegrableSystem& system, const PointSet& points, const IntegOptions& options = {});

// (sqrt(sum c_i M^i))^* alpha.
std::vector<double> hj_differential(std::span<const Matrix<double>> m, std::span<const double> alpha,
                                    std::span<const double> c, const SqrtOptions& sqrt_options = {});

// F_s(u, dW) = c_s for every level set and point, and the finite-difference
// curl of u -> dW(u, c).
Report hj_check(const IntegrableSystem& system, const std::vector<std::vector<double>>& levels,
                const PointSet& points, const IntegOptions& options = {}, double consistency_tol = 1e-8,
                double curl_tol = 1e-6);

struct InverseResult {
  OperatorBasis killing;        // K_s = h_s h_1^{-1}
  OperatorBasis reconstructed;  // dual of K with respect to the covector
  Report report;
};

InverseResult inverse_verify(const std::vector<QuadraticHamiltonian>& family, const std::vector<double>& a,
                             const PointSet& points, const IntegOptions& options = {});

}  // namespace opfrob
