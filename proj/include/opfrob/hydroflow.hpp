#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "opfrob/field.hpp"
#include "opfrob/taylor.hpp"

namespace opfrob {

// u0(x) as polynomials in (x - x0): coefficients[a][k] multiplies (x - x0)^k
// in component a.
struct InitialCurve {
  std::vector<std::vector<double>> coefficients;
  double x0 = 0.0;
};

struct FlowOptions {
  int order = 4;
  int max_order = 6;
};

// Truncated Taylor expansion of u(x, t_1..t_m) about (x0, 0). Variable 0 of
// the layout is x, variable 1 + j is t_j.
struct JetSolution {
  std::shared_ptr<const TaylorLayout> layout;
  std::vector<Series> u;
  std::vector<OperatorField> flows;
  int order = 0;
  bool generic_initial_curve = true;

  // Coefficient of (x-x0)^a t^beta in component c.
  double coefficient(std::size_t c, int a, std::span<const int> beta) const;
};

// u_{t_j} = K_j(u) u_x solved order by order. Each coefficient with t-degree k
// comes from the first flow j with beta_j > 0.
JetSolution taylor_flow(const std::vector<OperatorField>& flows, const InitialCurve& u0,
                        const FlowOptions& options = {});

// K_j(u) u_x for the truncated solution.
std::vector<Series> flow_velocity(const JetSolution& sol, std::size_t j);

// max |d_{t_i} d_{t_j} u| discrepancy between the two evolution routes, over
// every coefficient reachable through both flows.
double flow_compatibility_residual(const JetSolution& sol, std::size_t i, std::size_t j);

// max |beta_j c[a, beta] - [K_j u_x][a, beta - e_j]| over all coefficients.
double evolution_residual(const JetSolution& sol, std::size_t j);

}  // namespace opfrob
