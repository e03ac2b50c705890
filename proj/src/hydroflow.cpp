#include "opfrob/hydroflow.hpp"

#include <algorithm>
#include <cmath>

#include "opfrob/linalg.hpp"

namespace opfrob {

double JetSolution::coefficient(std::size_t c, int a, std::span<const int> beta) const {
  std::vector<int> e{a};
  e.insert(e.end(), beta.begin(), beta.end());
  const std::size_t idx = layout->index_of(e);
  return idx == TaylorLayout::npos ? 0.0 : u[c].coefficient(idx);
}

std::vector<Series> flow_velocity(const JetSolution& sol, std::size_t j) {
  const std::size_t n = sol.u.size();
  const auto k = sol.flows.at(j).eval(std::span<const Series>(sol.u));
  std::vector<Series> ux;
  ux.reserve(n);
  for (const auto& c : sol.u) ux.push_back(c.derivative(0));
  return k.apply(std::span<const Series>(ux));
}

JetSolution taylor_flow(const std::vector<OperatorField>& flows, const InitialCurve& u0, const FlowOptions& opt) {
  if (flows.empty()) throw InputError("need at least one flow");
  const std::size_t n = flows[0].dimension();
  for (const auto& f : flows)
    if (f.dimension() != n) throw InputError("flows must share the dimension");
  if (u0.coefficients.size() != n) throw InputError("initial curve needs n components");
  if (opt.order < 1) throw InputError("truncation order must be positive");
  if (opt.order > opt.max_order) throw InputError("truncation order exceeds the configured cap");
  const std::size_t m = flows.size();
  const int d = opt.order;

  JetSolution sol;
  sol.layout = std::make_shared<const TaylorLayout>(m + 1, d);
  sol.flows = flows;
  sol.order = d;
  const auto& layout = *sol.layout;

  std::vector<int> e(m + 1, 0);
  for (std::size_t c = 0; c < n; ++c) {
    Series s(sol.layout);
    const auto& poly = u0.coefficients[c];
    for (int k = 0; k <= d && k < static_cast<int>(poly.size()); ++k) {
      e[0] = k;
      s.coefficients()[layout.index_of(e)] = poly[k];
    }
    sol.u.push_back(std::move(s));
  }

  // Genericity of du0/dx at x0: K_j(u0) u0' independent.
  {
    std::vector<double> base(n), slope(n);
    for (std::size_t c = 0; c < n; ++c) {
      const auto& poly = u0.coefficients[c];
      base[c] = poly.empty() ? 0.0 : poly[0];
      slope[c] = poly.size() > 1 ? poly[1] : 0.0;
    }
    std::vector<std::vector<double>> cols;
    for (const auto& f : flows) cols.push_back(f(base).apply(slope));
    Matrix<double> a(std::max(n, m));
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t r = 0; r < n; ++r) a(r, j) = cols[j][r];
    sol.generic_initial_curve = rank(a) == std::min(n, m);
  }

  for (int k = 1; k <= d; ++k) {
    std::vector<std::vector<Series>> vel(m);
    for (std::size_t j = 0; j < m; ++j) vel[j] = flow_velocity(sol, j);
    for (std::size_t idx = 0; idx < layout.size(); ++idx) {
      const auto ex = layout.exponents(idx);
      int tdeg = 0;
      for (std::size_t j = 0; j < m; ++j) tdeg += ex[1 + j];
      if (tdeg != k) continue;
      std::size_t j = 0;
      while (ex[1 + j] == 0) ++j;
      const std::size_t lower = layout.lowered(idx, 1 + j);
      for (std::size_t c = 0; c < n; ++c)
        sol.u[c].coefficients()[idx] = vel[j][c].coefficient(lower) / static_cast<double>(ex[1 + j]);
    }
  }
  return sol;
}

double flow_compatibility_residual(const JetSolution& sol, std::size_t i, std::size_t j) {
  if (i == j) return 0.0;
  const auto vi = flow_velocity(sol, i);
  const auto vj = flow_velocity(sol, j);
  const auto& layout = *sol.layout;
  double worst = 0.0;
  for (std::size_t idx = 0; idx < layout.size(); ++idx) {
    const auto ex = layout.exponents(idx);
    const int bi = ex[1 + i], bj = ex[1 + j];
    if (bi == 0 || bj == 0) continue;
    const std::size_t li = layout.lowered(idx, 1 + i);
    const std::size_t lj = layout.lowered(idx, 1 + j);
    for (std::size_t c = 0; c < sol.u.size(); ++c) {
      const double route_i = vi[c].coefficient(li) / bi;
      const double route_j = vj[c].coefficient(lj) / bj;
      worst = std::max(worst, std::abs(route_i - route_j));
    }
  }
  return worst;
}

double evolution_residual(const JetSolution& sol, std::size_t j) {
  const auto v = flow_velocity(sol, j);
  const auto& layout = *sol.layout;
  double worst = 0.0;
  for (std::size_t idx = 0; idx < layout.size(); ++idx) {
    const int b = layout.exponents(idx)[1 + j];
    if (b == 0) continue;
    const std::size_t l = layout.lowered(idx, 1 + j);
    for (std::size_t c = 0; c < sol.u.size(); ++c)
      worst = std::max(worst, std::abs(b * sol.u[c].coefficient(idx) - v[c].coefficient(l)));
  }
  return worst;
}

}  // namespace opfrob
