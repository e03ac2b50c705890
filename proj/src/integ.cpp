#include "opfrob/integ.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

namespace opfrob {

namespace {

template <class T>
T quadratic_form(const Matrix<T>& h, std::span<const double> p) {
  T acc(0.0);
  for (std::size_t i = 0; i < h.size(); ++i)
    for (std::size_t j = 0; j < h.size(); ++j) acc += h(i, j) * T(p[i] * p[j]);
  return acc;
}

// (h + h^T) p
std::vector<double> momentum_gradient(const Matrix<double>& h, std::span<const double> p) {
  const std::size_t n = h.size();
  std::vector<double> g(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) g[i] += (h(i, k) + h(k, i)) * p[k];
  return g;
}

double bracket_from(const Matrix<Jet>& hf, const Matrix<Jet>& hg, std::span<const double> p) {
  const std::size_t n = hf.size();
  const auto fp = momentum_gradient(values(hf), p);
  const auto gp = momentum_gradient(values(hg), p);
  const Jet fv = quadratic_form(hf, p);
  const Jet gv = quadratic_form(hg, p);
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += fp[i] * gv.partial(i) - fv.partial(i) * gp[i];
  return acc;
}

std::string term_coefficient(double c, bool first) {
  const double r = std::round(c);
  std::string s;
  if (std::abs(c - r) <= 1e-12 * std::max(1.0, std::abs(c))) {
    const long long v = static_cast<long long>(r);
    if (v == 1) return first ? "" : "+";
    if (v == -1) return "-";
    s = std::to_string(v);
  } else {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", c);
    s = buf;
  }
  if (!first && c > 0) s = "+" + s;
  return s + "*";
}

std::string format_linear(std::span<const double> row, const char* var) {
  double scale = 0.0;
  for (double v : row) scale = std::max(scale, std::abs(v));
  std::string out;
  for (std::size_t k = 0; k < row.size(); ++k) {
    if (std::abs(row[k]) <= 1e-14 * std::max(1.0, scale)) continue;
    out += term_coefficient(row[k], out.empty()) + var + std::to_string(k + 1);
  }
  return out.empty() ? "0" : out;
}

Matrix<double> inverse_or_throw(const Matrix<double>& m, const char* what) {
  try {
    return inverse(m);
  } catch (const SingularMatrixError&) {
    throw InputError(what);
  }
}

template <class T>
Matrix<T> inverse_or_throw(const Matrix<T>& m, const char* what) {
  try {
    return inverse(m);
  } catch (const SingularMatrixError&) {
    throw InputError(what);
  }
}

template <class T>
Matrix<T> chart_jacobian(std::span<const Matrix<T>> ms, std::span<const T> a) {
  const std::size_t n = ms.size();
  Matrix<T> j(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = ms[i].pullback(a);
    for (std::size_t k = 0; k < n; ++k) j(i, k) = row[k];
  }
  return j;
}

// h_s = J^{-1} A_s J^{-T} for all s.
template <class T>
std::vector<Matrix<T>> ambient_forms(const OperatorBasis& basis, const OneFormField& alpha, std::span<const T> u) {
  const std::size_t n = basis.dimension();
  const auto ms = basis.eval(u);
  const auto a = alpha.eval(u);
  const auto j = chart_jacobian(std::span<const Matrix<T>>(ms), std::span<const T>(a));
  const auto j_inv = inverse_or_throw(j, "the covectors M^i* alpha are linearly dependent here");
  std::vector<Matrix<double>> mv;
  for (const auto& m : ms) mv.push_back(values(m));
  const auto xi = generic_vector(mv);
  const auto sc = structure_constants(std::span<const Matrix<T>>(ms), std::span<const double>(xi));
  require_closed(sc.closure_residual, 1e-9);
  const auto j_inv_t = j_inv.transposed();
  std::vector<Matrix<T>> out;
  out.reserve(n);
  for (std::size_t s = 0; s < n; ++s) {
    Matrix<T> as(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) as(i, k) = sc(i, k, s);
    out.push_back(j_inv * as * j_inv_t);
  }
  return out;
}

std::string pairs_label(std::size_t n) {
  const std::size_t pairs = n * (n - 1) / 2;
  return "poisson brackets (" + std::to_string(pairs) + (pairs == 1 ? " pair)" : " pairs)");
}

nlohmann::ordered_json matrix_json(const Matrix<double>& m) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < m.size(); ++i) {
    std::vector<double> row;
    for (std::size_t j = 0; j < m.size(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

QuadraticHamiltonian QuadraticHamiltonian::from_matrix(OperatorField h, std::string label) {
  QuadraticHamiltonian q;
  q.h_ = std::move(h);
  q.text_ = std::move(label);
  return q;
}

QuadraticHamiltonian QuadraticHamiltonian::from_grid(const std::vector<std::vector<std::string>>& grid,
                                                     std::size_t dimension) {
  auto h = OperatorField::parse(grid, dimension);
  std::string label;
  if (h.is_constant()) label = format_quadratic(h(std::vector<double>(dimension, 0.0)));
  return from_matrix(std::move(h), std::move(label));
}

QuadraticHamiltonian QuadraticHamiltonian::parse(const std::string& text, std::size_t dimension) {
  const Expression e = Expression::parse(text, dimension, VariableSet::phase_space);
  QuadraticHamiltonian q;
  q.text_ = text;
  q.expr_ = e;
  // h^{ii} = F(u, e_i), h^{ij} = (F(u, e_i + e_j) - F(u, e_i) - F(u, e_j)) / 2.
  q.h_ = OperatorField::from_function(dimension, [e, dimension](auto u) {
    using T = typename decltype(u)::value_type;
    std::vector<T> z(2 * dimension, T(0.0));
    for (std::size_t i = 0; i < dimension; ++i) z[i] = u[i];
    const std::span<const T> zs(z);
    std::vector<T> diag(dimension);
    for (std::size_t i = 0; i < dimension; ++i) {
      z[dimension + i] = T(1.0);
      diag[i] = e.eval(zs);
      z[dimension + i] = T(0.0);
    }
    Matrix<T> h(dimension);
    for (std::size_t i = 0; i < dimension; ++i) {
      h(i, i) = diag[i];
      for (std::size_t j = i + 1; j < dimension; ++j) {
        z[dimension + i] = T(1.0);
        z[dimension + j] = T(1.0);
        const T both = e.eval(zs);
        z[dimension + i] = T(0.0);
        z[dimension + j] = T(0.0);
        h(i, j) = (both - diag[i] - diag[j]) * T(0.5);
        h(j, i) = h(i, j);
      }
    }
    return h;
  });
  return q;
}

double QuadraticHamiltonian::value(std::span<const double> u, std::span<const double> p) const {
  if (expr_) {
    std::vector<double> z(u.begin(), u.end());
    z.insert(z.end(), p.begin(), p.end());
    return expr_->eval(std::span<const double>(z));
  }
  return quadratic_form(h_(u), p);
}

double QuadraticHamiltonian::quadratic_residual(std::span<const double> u, std::span<const double> p) const {
  if (!expr_) return 0.0;
  const double f = value(u, p);
  return std::abs(f - quadratic_form(h_(u), p)) / (1.0 + std::abs(f));
}

double poisson_bracket(const QuadraticHamiltonian& f, const QuadraticHamiltonian& g, std::span<const double> u,
                       std::span<const double> p) {
  const auto jets = seed_jets(u);
  const std::span<const Jet> ju(jets);
  return bracket_from(f.h(ju), g.h(ju), p);
}

std::vector<std::vector<double>> momentum_samples(std::size_t n, std::uint64_t seed, std::size_t point,
                                                  std::size_t draws) {
  Rng rng(derive_seed(seed ^ 0x6d6f6d656e7461ULL, point));
  std::vector<std::vector<double>> out;
  out.reserve(draws);
  for (std::size_t d = 0; d < draws; ++d) out.push_back(rng.uniform_vector(n, -1.0, 1.0));
  return out;
}

CheckResult commuting_check(const std::vector<QuadraticHamiltonian>& family, const PointSet& points,
                            const IntegOptions& opt, std::string name) {
  const std::size_t m = family.size();
  if (m == 0) throw InputError("empty Hamiltonian family");
  const std::size_t n = family[0].dimension();
  auto out = evaluate_points(points.size(), opt.exec, [&](std::size_t pt) {
    const auto jets = seed_jets(points[pt]);
    const std::span<const Jet> ju(jets);
    std::vector<Matrix<Jet>> hs;
    for (const auto& f : family) hs.push_back(f.h(ju));
    double worst = 0.0;
    for (const auto& p : momentum_samples(n, opt.seed, pt, opt.momentum_draws)) {
      std::vector<double> fv;
      for (const auto& h : hs) fv.push_back(value_of(quadratic_form(h, p)));
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j) {
          const double b = bracket_from(hs[i], hs[j], p);
          worst = std::max(worst, std::abs(b) / (1.0 + std::abs(fv[i]) * std::abs(fv[j])));
        }
    }
    return worst;
  });
  return summarize(name.empty() ? pairs_label(m) : std::move(name), out, opt.tol, &points);
}

CheckResult momentum_jacobian_check(const std::vector<QuadraticHamiltonian>& family, const PointSet& points,
                                    const IntegOptions& opt) {
  const std::size_t m = family.size();
  const std::size_t n = m ? family[0].dimension() : 0;
  auto out = evaluate_points(points.size(), opt.exec, [&](std::size_t pt) {
    if (m != n) return 1.0;
    const std::span<const double> u(points[pt]);
    std::vector<Matrix<double>> hs;
    for (const auto& f : family) hs.push_back(f.h(u));
    // Full rank for one of a few random p certifies det(dF/dp) is not identically zero.
    for (const auto& p : momentum_samples(n, opt.seed ^ 0xde7ULL, pt, 3)) {
      Matrix<double> d(n);
      for (std::size_t s = 0; s < n; ++s) {
        const auto g = momentum_gradient(hs[s], p);
        double scale = 0.0;
        for (double v : g) scale = std::max(scale, std::abs(v));
        for (std::size_t i = 0; i < n; ++i) d(s, i) = scale > 0.0 ? g[i] / scale : 0.0;
      }
      if (rank(d, opt.rank_tol) == n) return 0.0;
    }
    return 1.0;
  });
  std::size_t fails = 0;
  std::string err;
  for (const auto& o : out) {
    if (!o.error.empty() && err.empty()) err = o.error;
    if (!o.error.empty() || o.residual > 0.0) ++fails;
  }
  return boolean_check("det(dF/dp) nonzero", fails, points.size(), err);
}

Report verify_commuting_family(const std::vector<QuadraticHamiltonian>& family, const PointSet& points,
                               const IntegOptions& opt) {
  Report report("poisson-check");
  auto quad = evaluate_points(points.size(), opt.exec, [&](std::size_t pt) {
    double worst = 0.0;
    const std::size_t n = family[0].dimension();
    for (const auto& p : momentum_samples(n, opt.seed ^ 0x71ULL, pt, 3))
      for (const auto& f : family) worst = std::max(worst, f.quadratic_residual(points[pt], p));
    return worst;
  });
  report.add(summarize("quadratic in momenta", quad, opt.tol, &points));
  report.add(commuting_check(family, points, opt));
  return report;
}

std::string format_quadratic(const Matrix<double>& h, const char* momentum) {
  const std::size_t n = h.size();
  const double scale = std::max(1.0, max_abs(h));
  std::string out;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      const double c = i == j ? h(i, i) : h(i, j) + h(j, i);
      if (std::abs(c) <= 1e-13 * scale) continue;
      std::string mono = std::string(momentum) + std::to_string(i + 1);
      mono += i == j ? "^2" : "*" + std::string(momentum) + std::to_string(j + 1);
      out += term_coefficient(c, out.empty()) + mono;
    }
  return out.empty() ? "0" : out;
}

IntegrableSystem generate_system(const OperatorBasis& basis, const OneFormField& alpha,
                                 const std::optional<FunctionTuple>& chart, const PointSet& points,
                                 const IntegOptions& opt) {
  const std::size_t n = basis.dimension();
  if (alpha.size() != n || alpha.dimension() != n) throw InputError("one-form must have n components");
  if (chart && (chart->size() != n || chart->dimension() != n)) throw InputError("chart must have n functions");
  IntegrableSystem sys;
  sys.n = n;
  sys.basis = basis;
  sys.alpha = alpha;
  sys.chart = chart;
  sys.constant = basis.is_constant() && alpha.is_constant();
  sys.report = Report("generate");
  Report& report = sys.report;

  for (std::size_t s = 0; s < n; ++s) {
    auto h = OperatorField::from_function(
        n, [basis, alpha, s](auto u) { return ambient_forms(basis, alpha, u)[s]; }, sys.constant);
    sys.hamiltonians.push_back(QuadraticHamiltonian::from_matrix(std::move(h)));
  }

  if (sys.constant) {
    const std::vector<double> origin(n, 0.0);
    const std::span<const double> u(origin);
    const auto ms = basis.eval(u);
    const auto a = alpha.eval(u);
    sys.jacobian = chart_jacobian(std::span<const Matrix<double>>(ms), std::span<const double>(a));
    const auto xi = generic_vector(ms);
    const auto sc = structure_constants(std::span<const Matrix<double>>(ms), std::span<const double>(xi));
    for (std::size_t s = 0; s < n; ++s) {
      Matrix<double> as(n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) as(i, k) = sc(i, k, s);
      sys.chart_coefficients.push_back(as);
    }
    sys.ambient_coefficients = ambient_forms(basis, alpha, u);
    nlohmann::ordered_json chart_text = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<double> row;
      for (std::size_t k = 0; k < n; ++k) row.push_back(sys.jacobian(i, k));
      chart_text.push_back("v" + std::to_string(i + 1) + " = " + format_linear(row, "u"));
    }
    nlohmann::ordered_json chart_h = nlohmann::ordered_json::array();
    nlohmann::ordered_json ambient_h = nlohmann::ordered_json::array();
    for (std::size_t s = 0; s < n; ++s) {
      chart_h.push_back("F" + std::to_string(s + 1) + " = " + format_quadratic(sys.chart_coefficients[s], "q"));
      const std::string text = format_quadratic(sys.ambient_coefficients[s]);
      ambient_h.push_back("F" + std::to_string(s + 1) + " = " + text);
      sys.hamiltonians[s] = QuadraticHamiltonian::from_matrix(sys.hamiltonians[s].coefficients(), text);
    }
    report.data()["chart"] = chart_text;
    report.data()["hamiltonians_chart"] = chart_h;
    report.data()["hamiltonians"] = ambient_h;
  }

  auto alpha_closed = evaluate_points(points.size(), opt.exec, [&](std::size_t pt) {
    const auto jets = seed_jets(points[pt]);
    return curl_residual(alpha.eval(std::span<const Jet>(jets)));
  });
  auto ac = summarize("alpha closed", alpha_closed, opt.tol, &points);
  if (ac.status == Status::fail) {
    ac.status = Status::error;
    ac.detail = "alpha is not closed, so it cannot be a conservation law";
  }
  report.add(ac);

  auto laws = evaluate_points(points.size(), opt.exec, [&](std::size_t pt) {
    const auto jets = seed_jets(points[pt]);
    const std::span<const Jet> ju(jets);
    const auto ms = basis.eval(ju);
    const auto a = alpha.eval(ju);
    double worst = 0.0;
    for (const auto& m : ms) worst = std::max(worst, curl_residual(m.pullback(std::span<const Jet>(a))));
    return worst;
  });
  report.add(summarize("M^i* alpha closed", laws, opt.tol, &points));

  auto indep = evaluate_points(points.size(), opt.exec, [&](std::size_t pt) {
    const std::span<const double> u(points[pt]);
    const auto ms = basis.eval(u);
    const auto a = alpha.eval(u);
    return rank(chart_jacobian(std::span<const Matrix<double>>(ms), std::span<const double>(a)), opt.rank_tol) == n
               ? 0.0
               : 1.0;
  });
  std::size_t fails = 0;
  std::string err;
  for (const auto& o : indep) {
    if (!o.error.empty() && err.empty()) err = o.error;
    if (!o.error.empty() || o.residual > 0.0) ++fails;
  }
  report.add(boolean_check("M^i* alpha independent", fails, points.size(), err));

  if (chart) {
    auto cd = evaluate_points(points.size(), opt.exec, [&](std::size_t pt) {
      const auto jets = seed_jets(points[pt]);
      const std::span<const Jet> ju(jets);
      const auto ms = basis.eval(ju);
      const auto a = alpha.eval(ju);
      const auto s = chart->eval(ju);
      const auto j = values(chart_jacobian(std::span<const Matrix<Jet>>(ms), std::span<const Jet>(a)));
      double worst = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) worst = std::max(worst, std::abs(s[i].partial(k) - j(i, k)));
      return worst / (1.0 + max_abs(j));
    });
    report.add(summarize("chart differential ds^i = M^i* alpha", cd, opt.tol, &points));
  }

  report.add(commuting_check(sys.hamiltonians, points, opt));
  report.add(momentum_jacobian_check(sys.hamiltonians, points, opt));

  auto square = evaluate_points(points.size(), opt.exec, [&](std::size_t pt) {
    const std::span<const double> u(points[pt]);
    const auto ms = basis.eval(u);
    const auto a = alpha.eval(u);
    const auto j_inv_t =
        inverse_or_throw(chart_jacobian(std::span<const Matrix<double>>(ms), std::span<const double>(a)),
                         "the covectors M^i* alpha are linearly dependent here")
            .transposed();
    const auto hs = ambient_forms(basis, alpha, u);
    double worst = 0.0;
    for (const auto& p : momentum_samples(n, opt.seed ^ 0x15ULL, pt, 5)) {
      const auto q = j_inv_t.apply(p);
      Matrix<double> x(n), rhs(n);
      for (std::size_t i = 0; i < n; ++i) {
        x += q[i] * ms[i];
        rhs += quadratic_form(hs[i], p) * ms[i];
      }
      const Matrix<double> lhs = x * x;
      worst = std::max(worst, max_abs(lhs - rhs) / (1.0 + max_abs(lhs)));
    }
    return worst;
  });
  report.add(summarize("(sum p M)^2 = sum F M", square, opt.tol, &points));

  if (!points.empty() && !sys.constant) {
    try {
      const auto hs = ambient_forms(basis, alpha, std::span<const double>(points[0]));
      nlohmann::ordered_json arr = nlohmann::ordered_json::array();
      for (const auto& h : hs) arr.push_back(matrix_json(h));
      report.data()["first_point"] = points[0];
      report.data()["h_at_first_point"] = arr;
    } catch (const Error&) {
    }
  }
  return sys;
}

std::vector<Matrix<double>> killing_tensors_at(const std::vector<QuadraticHamiltonian>& family,
                                               std::span<const double> u) {
  if (family.empty()) throw InputError("empty Hamiltonian family");
  const auto h1_inv = inverse_or_throw(family[0].h(u), "h_1 is degenerate: Killing tensors undefined");
  std::vector<Matrix<double>> out;
  for (const auto& f : family) out.push_back(f.h(u) * h1_inv);
  return out;
}

Report killing_tensors(const IntegrableSystem& sys, const PointSet& points, const IntegOptions& opt) {
  Report report("killing");
  const std::size_t n = sys.n;
  auto comm = evaluate_points(points.size(), opt.exec, [&](std::size_t pt) {
    const auto ks = killing_tensors_at(sys.hamiltonians, points[pt]);
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) worst = std::max(worst, commutator_residual(ks[i], ks[j]));
    return worst;
  });
  report.add(summarize("Killing tensors commute", comm, opt.tol, &points));

  auto duality = evaluate_points(points.size(), opt.exec, [&](std::size_t pt) {
    const std::span<const double> u(points[pt]);
    const auto ks = killing_tensors_at(sys.hamiltonians, u);
    const auto ms = sys.basis.eval(u);
    const auto xi = generic_vector(ms);
    const auto sc = structure_constants(std::span<const Matrix<double>>(ms), std::span<const double>(xi));
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      Matrix<double> rebuilt(n);
      for (std::size_t s = 0; s < n; ++s) rebuilt += sc(i, s, 0) * ks[s];
      worst = std::max(worst, max_abs(rebuilt - ms[i]) / (1.0 + max_abs(ms[i])));
    }
    return worst;
  });
  report.add(summarize("duality M^i = a^{is}_1 K_s", duality, opt.tol, &points));

  auto adjoint = evaluate_points(points.size(), opt.exec, [&](std::size_t pt) {
    const std::span<const double> u(points[pt]);
    const auto ms = sys.basis.eval(u);
    double worst = 0.0;
    for (const auto& f : sys.hamiltonians) {
      const auto h = f.h(u);
      for (const auto& m : ms) {
        const auto mh = m * h;
        worst = std::max(worst, max_abs(mh - mh.transposed()) / (1.0 + max_abs(m) * max_abs(h)));
      }
    }
    return worst;
  });
  report.add(summarize("M^i self-adjoint w.r.t. h_s", adjoint, opt.tol, &points));

  if (!points.empty()) {
    try {
      const auto ks = killing_tensors_at(sys.hamiltonians, points[0]);
      nlohmann::ordered_json arr = nlohmann::ordered_json::array();
      for (const auto& k : ks) arr.push_back(matrix_json(k));
      report.data()["killing_at_first_point"] = arr;
    } catch (const Error&) {
    }
  }
  return report;
}

std::vector<double> hj_differential(std::span<const Matrix<double>> m, std::span<const double> alpha,
                                    std::span<const double> c, const SqrtOptions& sqrt_options) {
  const std::size_t n = m.size();
  if (c.size() != n || alpha.size() != n) throw InputError("level vector and one-form must have n components");
  Matrix<double> s(n);
  for (std::size_t i = 0; i < n; ++i) s += c[i] * m[i];
  return sqrt_near_identity(s, sqrt_options).pullback(alpha);
}

Report hj_check(const IntegrableSystem& sys, const std::vector<std::vector<double>>& levels, const PointSet& points,
                const IntegOptions& opt, double consistency_tol, double curl_tol) {
  Report report("hj");
  const std::size_t n = sys.n;
  for (const auto& c : levels)
    if (c.size() != n) throw InputError("each level vector needs n components");
  auto dw_at = [&](std::span<const double> u, std::span<const double> c) {
    const auto ms = sys.basis.eval(u);
    const auto a = sys.alpha.eval(u);
    return hj_differential(std::span<const Matrix<double>>(ms), std::span<const double>(a), c);
  };
  auto consistency = evaluate_points(points.size(), opt.exec, [&](std::size_t pt) {
    const std::span<const double> u(points[pt]);
    double worst = 0.0;
    for (const auto& c : levels) {
      const auto dw = dw_at(u, c);
      double scale = 0.0;
      for (double v : c) scale = std::max(scale, std::abs(v));
      for (std::size_t s = 0; s < n; ++s) {
        const double f = quadratic_form(sys.hamiltonians[s].h(u), std::span<const double>(dw));
        worst = std::max(worst, std::abs(f - c[s]) / (1.0 + scale));
      }
    }
    return worst;
  });
  report.add(summarize("F_s(u, dW) = c_s", consistency, consistency_tol, &points));

  auto curl = evaluate_points(points.size(), opt.exec, [&](std::size_t pt) {
    constexpr double step = 1e-6;
    double worst = 0.0;
    for (const auto& c : levels) {
      Matrix<double> d(n);
      for (std::size_t k = 0; k < n; ++k) {
        auto up = points[pt], dn = points[pt];
        up[k] += step;
        dn[k] -= step;
        const auto wp = dw_at(up, c);
        const auto wm = dw_at(dn, c);
        for (std::size_t j = 0; j < n; ++j) d(j, k) = (wp[j] - wm[j]) / (2.0 * step);
      }
      worst = std::max(worst, max_abs(d - d.transposed()) / (1.0 + max_abs(d)));
    }
    return worst;
  });
  report.add(summarize("dW curl-free (finite differences)", curl, curl_tol, &points));

  if (!points.empty()) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& c : levels) {
      try {
        arr.push_back({{"c", c}, {"dW", dw_at(points[0], c)}});
      } catch (const Error& e) {
        arr.push_back({{"c", c}, {"error", e.what()}});
      }
    }
    report.data()["first_point"] = points[0];
    report.data()["dW_at_first_point"] = arr;
  }
  return report;
}

InverseResult inverse_verify(const std::vector<QuadraticHamiltonian>& family, const std::vector<double>& a,
                             const PointSet& points, const IntegOptions& opt) {
  const std::size_t n = family.size();
  if (n == 0) throw InputError("empty Hamiltonian family");
  for (const auto& f : family)
    if (f.dimension() != n) throw InputError("inverse problem needs n Hamiltonians in dimension n");
  if (a.size() != n) throw InputError("covector has the wrong dimension");

  Report report("inverse");
  report.add(summarize("quadratic in momenta",
                       evaluate_points(points.size(), opt.exec,
                                       [&](std::size_t pt) {
                                         double worst = 0.0;
                                         for (const auto& p : momentum_samples(n, opt.seed ^ 0x71ULL, pt, 3))
                                           for (const auto& f : family)
                                             worst = std::max(worst, f.quadratic_residual(points[pt], p));
                                         return worst;
                                       }),
                       opt.tol, &points));
  report.add(commuting_check(family, points, opt, "(i) " + pairs_label(n)));
  auto jac = momentum_jacobian_check(family, points, opt);
  jac.name = "(ii) " + jac.name;
  report.add(jac);

  std::vector<OperatorField> kf;
  for (std::size_t s = 0; s < n; ++s) {
    kf.push_back(OperatorField::from_function(n, [family, s](auto u) {
      const auto h1 = family[0].h(u);
      return family[s].h(u) * inverse_or_throw(h1, "h_1 is degenerate: Killing tensors undefined");
    }));
  }
  OperatorBasis killing(std::move(kf));

  auto comm = evaluate_points(points.size(), opt.exec, [&](std::size_t pt) {
    const auto ks = killing_tensors_at(family, points[pt]);
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) worst = std::max(worst, commutator_residual(ks[i], ks[j]));
    return worst;
  });
  report.add(summarize("(iii) Killing tensors commute", comm, opt.tol, &points));

  auto a1 = evaluate_points(points.size(), opt.exec, [&](std::size_t pt) {
    const auto ks = killing_tensors_at(family, points[pt]);
    Rng rng(derive_seed(opt.seed, pt));
    return find_generic_vector(ks, rng, opt.draws, opt.rank_tol) ? 0.0 : 1.0;
  });
  std::size_t fails = 0;
  std::string err;
  for (const auto& o : a1) {
    if (!o.error.empty() && err.empty()) err = o.error;
    if (!o.error.empty() || o.residual > 0.0) ++fails;
  }
  report.add(boolean_check("Killing span A1", fails, points.size(), err));

  auto closure = evaluate_points(points.size(), opt.exec, [&](std::size_t pt) {
    const auto ks = killing_tensors_at(family, points[pt]);
    const auto xi = generic_vector(ks);
    return structure_constants(std::span<const Matrix<double>>(ks), std::span<const double>(xi)).closure_residual;
  });
  report.add(summarize("Killing span closed", closure, opt.tol, &points));

  auto adjoint = evaluate_points(points.size(), opt.exec, [&](std::size_t pt) {
    const std::span<const double> u(points[pt]);
    const auto g = inverse_or_throw(family[0].h(u), "h_1 is degenerate");
    const auto ks = killing_tensors_at(family, u);
    double worst = 0.0;
    for (const auto& k : ks) {
      const auto gk = g * k;
      worst = std::max(worst, max_abs(gk - gk.transposed()) / (1.0 + max_abs(g) * max_abs(k)));
    }
    return worst;
  });
  report.add(summarize("K_s self-adjoint w.r.t. h_1^-1", adjoint, opt.tol, &points));

  OperatorBasis rebuilt = dual_fields(killing, a);
  auto torsion = evaluate_points(points.size(), opt.exec, [&](std::size_t pt) {
    const auto jets = seed_jets(points[pt]);
    const auto ms = rebuilt.eval(std::span<const Jet>(jets));
    double worst = 0.0;
    for (const auto& m : ms) worst = std::max(worst, bracket(m, m, opt.tol).full_residual());
    return worst;
  });
  report.add(summarize("reconstructed Nijenhuis torsion", torsion, opt.tol, &points));

  auto strong = evaluate_points(points.size(), opt.exec, [&](std::size_t pt) {
    const auto jets = seed_jets(points[pt]);
    const auto ms = rebuilt.eval(std::span<const Jet>(jets));
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) worst = std::max(worst, bracket(ms[i], ms[j], opt.tol).full_residual());
    return worst;
  });
  report.add(summarize("reconstructed strong symmetry", strong, opt.tol, &points));

  if (!points.empty()) {
    try {
      const auto ms = rebuilt.eval(std::span<const double>(points[0]));
      nlohmann::ordered_json arr = nlohmann::ordered_json::array();
      for (const auto& m : ms) arr.push_back(matrix_json(m));
      report.data()["first_point"] = points[0];
      report.data()["reconstructed_at_first_point"] = arr;
    } catch (const Error&) {
    }
  }
  return {std::move(killing), std::move(rebuilt), std::move(report)};
}

}  // namespace opfrob
