#include "opfrob/symalg.hpp"

#include <algorithm>
#include <cmath>

namespace opfrob {

FlatBasis FlatBasis::create(std::vector<Matrix<double>> m, std::optional<std::vector<double>> xi, double tol) {
  const std::size_t n = m.size();
  if (n == 0) throw InputError("flat basis must not be empty");
  for (const auto& x : m)
    if (x.size() != n) throw InputError("flat basis needs n matrices of size n");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (commutator_residual(m[i], m[j]) > tol) throw InputError("flat basis matrices do not commute");
  FlatBasis f;
  f.m_ = std::move(m);
  const std::span<const Matrix<double>> ms(f.m_);
  if (xi) {
    if (xi->size() != n) throw InputError("flat vector has the wrong dimension");
    if (!is_generic_vector(ms, *xi)) throw InputError("flat vector is not generic: condition (A1) fails");
    f.xi_ = *xi;
  } else {
    f.xi_ = generic_vector(ms);
  }
  Rng rng(kGenericSeed);
  if (!find_generic_covector(ms, rng)) throw InputError("no generic covector: condition (A2) fails");
  f.sc_ = structure_constants(ms, std::span<const double>(f.xi_));
  require_closed(f.sc_.closure_residual, tol);
  Matrix<double> c(n);
  for (std::size_t s = 0; s < n; ++s) {
    const auto col = f.m_[s].apply(f.xi_);
    for (std::size_t r = 0; r < n; ++r) c(r, s) = col[r];
  }
  f.c_inv_ = inverse(c);
  f.identity_ = f.c_inv_.apply(f.xi_);
  Matrix<double> id(n);
  for (std::size_t s = 0; s < n; ++s) id += f.identity_[s] * f.m_[s];
  if (max_abs(id - Matrix<double>::identity(n)) > tol) throw InputError("identity is not in the span of the flat basis");
  return f;
}

OperatorBasis FlatBasis::basis() const {
  std::vector<OperatorField> out;
  for (const auto& x : m_) out.push_back(OperatorField::constant(x));
  return OperatorBasis(std::move(out));
}

OperatorField canonical_symmetry_U(const FlatBasis& flat) {
  return OperatorField::from_function(flat.dimension(), [flat](auto x) { return flat.canonical(x); });
}

OperatorField analytic_symmetry(const FlatBasis& flat, std::vector<Polynomial> f) {
  const std::size_t n = flat.dimension();
  if (f.size() != n) throw InputError("need one polynomial per basis element");
  bool constant = true;
  for (const auto& p : f)
    for (std::size_t k = 1; k < p.size(); ++k)
      if (p[k] != 0.0) constant = false;
  return OperatorField::from_function(
      n,
      [flat, f](auto x) {
        using T = typename decltype(x)::value_type;
        const Matrix<T> u = flat.canonical(x);
        Matrix<T> out(flat.dimension());
        for (std::size_t i = 0; i < f.size(); ++i) {
          if (f[i].empty()) continue;
          out += matrix_polynomial(f[i], u) * Matrix<T>::cast(flat.matrices()[i]);
        }
        return out;
      },
      constant);
}

OperatorField product_field(const OperatorField& a, const OperatorField& b) {
  if (a.dimension() != b.dimension()) throw InputError("product of fields of different dimension");
  return OperatorField::from_function(
      a.dimension(), [a, b](auto x) { return a.eval(x) * b.eval(x); }, a.is_constant() && b.is_constant());
}

Report sym_membership(const OperatorBasis& m, const OperatorField& candidate, const PointSet& points,
                      const CheckOptions& opt) {
  Report report("symcheck");
  const std::size_t n = m.dimension();
  if (candidate.dimension() != n) throw InputError("candidate has the wrong dimension");
  auto comm = evaluate_points(points.size(), opt.exec, [&](std::size_t p) {
    const std::span<const double> u(points[p]);
    const auto ms = m.eval(u);
    const auto c = candidate.eval(u);
    double worst = 0.0;
    for (const auto& x : ms) worst = std::max(worst, commutator_residual(c, x));
    return worst;
  });
  report.add(summarize("commutes with basis", comm, opt.tol, &points));
  auto decomp = evaluate_points(points.size(), opt.exec, [&](std::size_t p) {
    const std::span<const double> u(points[p]);
    const auto ms = m.eval(u);
    const auto c = candidate.eval(u);
    const auto xi = generic_vector(ms);
    const auto g = coordinates_in_basis(std::span<const Matrix<double>>(ms), c, std::span<const double>(xi));
    Matrix<double> rebuilt(n);
    for (std::size_t i = 0; i < n; ++i) rebuilt += g[i] * ms[i];
    return max_abs(rebuilt - c) / (1.0 + max_abs(c));
  });
  report.add(summarize("decomposition in span", decomp, opt.tol, &points));
  auto strong = evaluate_points(points.size(), opt.exec, [&](std::size_t p) {
    const auto jets = seed_jets(points[p]);
    const std::span<const Jet> ju(jets);
    const auto ms = m.eval(ju);
    const auto c = candidate.eval(ju);
    double worst = 0.0;
    for (const auto& x : ms) worst = std::max(worst, bracket(c, x, opt.tol).full_residual());
    return worst;
  });
  report.add(summarize("strong symmetry with basis", strong, opt.tol, &points));
  return report;
}

}  // namespace opfrob
