#include "opfrob/opfields.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace opfrob {

namespace {

double max_partial(const Matrix<Jet>& m, std::size_t dims) {
  double r = 0.0;
  for (const auto& x : m.data())
    for (std::size_t k = 0; k < dims; ++k) r = std::max(r, std::abs(x.partial(k)));
  return r;
}

std::string pair_name(std::size_t i, std::size_t j) {
  return "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
}

}  // namespace

double BracketTensor::symmetric_residual() const {
  double r = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = j; k < n; ++k) r = std::max(r, std::abs((*this)(i, j, k) + (*this)(i, k, j)));
  return r / magnitude;
}

double BracketTensor::full_residual() const {
  double r = 0.0;
  for (double v : t) r = std::max(r, std::abs(v));
  return r / magnitude;
}

BracketTensor bracket(const Matrix<Jet>& l, const Matrix<Jet>& m, double commute_tol) {
  const std::size_t n = l.size();
  if (m.size() != n) throw InputError("bracket: dimension mismatch");
  const Matrix<double> lv = values(l), mv = values(m);
  if (commutator_residual(lv, mv) > commute_tol)
    throw InputError("bracket is only a tensor for commuting operators; inputs do not commute here");
  BracketTensor b;
  b.n = n;
  b.t.assign(n * n * n, 0.0);
  // dl[s](i, j) = d_s L^i_j
  std::vector<Matrix<double>> dl, dm;
  for (std::size_t s = 0; s < n; ++s) {
    dl.push_back(partial(l, s));
    dm.push_back(partial(m, s));
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        double acc = 0.0;
        for (std::size_t s = 0; s < n; ++s) {
          acc += lv(s, j) * dm[s](i, k);
          acc -= mv(s, k) * dl[s](i, j);
          acc -= lv(i, s) * dm[j](s, k);
          acc += mv(i, s) * dl[k](s, j);
        }
        b.t[(i * n + j) * n + k] = acc;
      }
  b.magnitude = 1.0 + max_abs(lv) * max_partial(m, n) + max_abs(mv) * max_partial(l, n);
  return b;
}

BracketTensor bracket(const OperatorField& l, const OperatorField& m, std::span<const double> u, double commute_tol) {
  const auto jets = seed_jets(u);
  const std::span<const Jet> ju(jets);
  return bracket(l.eval(ju), m.eval(ju), commute_tol);
}

CheckResult symmetry_check(const OperatorField& l, const OperatorField& m, const PointSet& points,
                           const CheckOptions& opt, std::string name) {
  auto out = evaluate_points(points.size(), opt.exec, [&](std::size_t p) {
    return bracket(l, m, points[p], opt.tol).symmetric_residual();
  });
  return summarize(std::move(name), out, opt.tol, &points);
}

CheckResult strong_symmetry_check(const OperatorField& l, const OperatorField& m, const PointSet& points,
                                  const CheckOptions& opt, std::string name) {
  auto out = evaluate_points(points.size(), opt.exec, [&](std::size_t p) {
    return bracket(l, m, points[p], opt.tol).full_residual();
  });
  return summarize(std::move(name), out, opt.tol, &points);
}

CheckResult nijenhuis_check(const OperatorField& l, const PointSet& points, const CheckOptions& opt, std::string name) {
  return strong_symmetry_check(l, l, points, opt, std::move(name));
}

CheckResult pairwise_check(const OperatorBasis& family, BracketNorm norm, const PointSet& points,
                           const CheckOptions& opt, std::string name) {
  return pairwise_check(family.fields(), norm, points, opt, std::move(name));
}

CheckResult pairwise_check(const std::vector<OperatorField>& family, BracketNorm norm, const PointSet& points,
                           const CheckOptions& opt, std::string name) {
  const std::size_t n = family.size();
  std::vector<std::string> worst_pair(points.size());
  auto out = evaluate_points(points.size(), opt.exec, [&](std::size_t p) {
    const auto jets = seed_jets(points[p]);
    std::vector<Matrix<Jet>> ms;
    for (const auto& f : family) ms.push_back(f.eval(std::span<const Jet>(jets)));
    double worst = -1.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = (norm == BracketNorm::full ? i : i + 1); j < n; ++j) {
        const auto t = bracket(ms[i], ms[j], opt.tol);
        const double r = norm == BracketNorm::full ? t.full_residual() : t.symmetric_residual();
        if (r > worst) {
          worst = r;
          worst_pair[p] = pair_name(i, j);
        }
      }
    return std::max(worst, 0.0);
  });
  auto c = summarize(std::move(name), out, opt.tol, &points);
  if (c.status == Status::fail && c.worst_index) c.detail = "worst pair " + worst_pair[*c.worst_index];
  return c;
}

double curl_residual(const std::vector<Jet>& form) {
  const std::size_t n = form.size();
  double worst = 0.0, scale = 0.0;
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k) {
      scale = std::max(scale, std::abs(form[j].partial(k)));
      if (k > j) worst = std::max(worst, std::abs(form[k].partial(j) - form[j].partial(k)));
    }
  return worst / (1.0 + scale);
}

Report conservation_law_check(const OperatorField& m, const OneFormField& alpha, const PointSet& points,
                              const CheckOptions& opt) {
  Report report("conservation-law");
  const std::size_t n = m.dimension();
  if (alpha.size() != n) throw InputError("one-form must have n components");
  auto closed = evaluate_points(points.size(), opt.exec, [&](std::size_t p) {
    const auto jets = seed_jets(points[p]);
    return curl_residual(alpha.eval(std::span<const Jet>(jets)));
  });
  auto c = summarize("one-form closed", closed, opt.tol, &points);
  if (c.status == Status::fail) {
    c.status = Status::error;
    c.detail = "alpha is not closed, so it cannot be a conservation law";
  }
  report.add(c);
  auto pulled = evaluate_points(points.size(), opt.exec, [&](std::size_t p) {
    const auto jets = seed_jets(points[p]);
    const std::span<const Jet> ju(jets);
    const auto a = alpha.eval(ju);
    const auto mm = m.eval(ju);
    return curl_residual(mm.pullback(std::span<const Jet>(a)));
  });
  report.add(summarize("pullback closed", pulled, opt.tol, &points));
  return report;
}

DualizeResult dualize_family(const OperatorBasis& k, const std::vector<double>& a, const PointSet& points,
                             const CheckOptions& opt) {
  Report report("dualize");
  report.add(pairwise_check(k, BracketNorm::symmetric, points, opt, "K pairwise symmetry"));
  Report algebra = verify_algebra(k, a, points, opt);
  for (const auto& c : algebra.checks()) report.add(c);
  OperatorBasis dual = dual_fields(k, a);
  auto involution = evaluate_points(points.size(), opt.exec, [&](std::size_t p) {
    const std::span<const double> u(points[p]);
    const auto ks = k.eval(u);
    const auto data = frobenius_data(std::span<const Matrix<double>>(ks), std::span<const double>(a));
    // Dualize again with the identity coordinates a^j = a(M^j).
    const auto back =
        frobenius_data(std::span<const Matrix<double>>(data.dual), std::span<const double>(data.identity)).dual;
    double worst = 0.0;
    for (std::size_t i = 0; i < ks.size(); ++i)
      worst = std::max(worst, max_abs(back[i] - ks[i]) / (1.0 + max_abs(ks[i])));
    return worst;
  });
  report.add(summarize("involution (K*)* = K", involution, opt.tol, &points));
  report.add(pairwise_check(dual, BracketNorm::symmetric, points, opt, "dual pairwise symmetry"));
  if (!points.empty()) {
    try {
      const auto ms = dual.eval(std::span<const double>(points[0]));
      nlohmann::ordered_json arr = nlohmann::ordered_json::array();
      for (const auto& m : ms) {
        nlohmann::ordered_json rows = nlohmann::ordered_json::array();
        for (std::size_t i = 0; i < m.size(); ++i) {
          std::vector<double> row;
          for (std::size_t j = 0; j < m.size(); ++j) row.push_back(m(i, j));
          rows.push_back(row);
        }
        arr.push_back(rows);
      }
      report.data()["dual_at_first_point"] = arr;
      report.data()["first_point"] = points[0];
    } catch (const Error&) {
      // already reported by the checks above
    }
  }
  return {std::move(dual), std::move(report)};
}

Report symmetry_coefficient_check(const OperatorBasis& k, const FunctionTuple& h, const PointSet& points,
                                  const CheckOptions& opt) {
  Report report("symmetry-coefficients");
  const std::size_t n = k.dimension();
  if (h.size() != n) throw InputError("need n coefficient functions");
  auto out = evaluate_points(points.size(), opt.exec, [&](std::size_t p) {
    const std::span<const double> u(points[p]);
    const auto ks = k.eval(u);
    const auto xi = generic_vector(ks);
    const auto sc = structure_constants(std::span<const Matrix<double>>(ks), std::span<const double>(xi));
    require_closed(sc.closure_residual, opt.tol);
    const auto jets = seed_jets(u);
    const auto hv = h.eval(std::span<const Jet>(jets));
    double worst = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t c = 0; c < n; ++c) {
          double lhs = 0.0, rhs = 0.0;
          for (std::size_t m = 0; m < n; ++m) lhs += ks[i](m, c) * hv[j].partial(m);
          for (std::size_t s = 0; s < n; ++s) rhs += sc(i, s, j) * hv[s].partial(c);
          scale = std::max({scale, std::abs(lhs), std::abs(rhs)});
          worst = std::max(worst, std::abs(lhs - rhs));
        }
    return worst / (1.0 + scale);
  });
  report.add(summarize("coefficient relation", out, opt.tol, &points));
  return report;
}

}  // namespace opfrob
