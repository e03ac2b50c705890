#include "opfrob/frobalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace opfrob {

namespace {

std::vector<std::vector<double>> images(std::span<const Matrix<double>> k, std::span<const double> xi) {
  std::vector<std::vector<double>> cols;
  cols.reserve(k.size());
  for (const auto& m : k) cols.push_back(m.apply(xi));
  return cols;
}

std::vector<std::vector<double>> coimages(std::span<const Matrix<double>> k, std::span<const double> a) {
  std::vector<std::vector<double>> cols;
  cols.reserve(k.size());
  for (const auto& m : k) cols.push_back(m.pullback(a));
  return cols;
}

template <class T>
std::vector<T> lift(std::span<const double> v) {
  return std::vector<T>(v.begin(), v.end());
}

template <class T>
Matrix<T> column_matrix(std::span<const Matrix<T>> k, std::span<const double> xi) {
  const std::size_t n = k.size();
  const auto x = lift<T>(xi);
  Matrix<T> c(n);
  for (std::size_t s = 0; s < n; ++s) {
    auto col = k[s].apply(x);
    for (std::size_t r = 0; r < n; ++r) c(r, s) = col[r];
  }
  return c;
}

std::size_t count_failures(const std::vector<PointOutcome>& outcomes, std::string& first_error) {
  std::size_t failures = 0;
  for (const auto& o : outcomes) {
    if (!o.error.empty()) {
      if (first_error.empty()) first_error = o.error;
      ++failures;
    } else if (o.residual > 0.0) {
      ++failures;
    }
  }
  return failures;
}

}  // namespace

bool is_generic_vector(std::span<const Matrix<double>> k, std::span<const double> xi, double tol) {
  if (k.empty() || xi.size() != k[0].size() || k.size() != xi.size()) return false;
  auto cols = images(k, xi);
  return rank_of_columns(cols, tol) == k.size();
}

bool is_generic_covector(std::span<const Matrix<double>> k, std::span<const double> a, double tol) {
  if (k.empty() || a.size() != k[0].size() || k.size() != a.size()) return false;
  auto cols = coimages(k, a);
  return rank_of_columns(cols, tol) == k.size();
}

std::optional<std::vector<double>> find_generic_vector(std::span<const Matrix<double>> k, Rng& rng,
                                                       std::size_t draws, double tol) {
  const std::size_t n = k.empty() ? 0 : k[0].size();
  for (std::size_t d = 0; d < draws; ++d) {
    auto xi = rng.uniform_vector(n, -1.0, 1.0);
    if (is_generic_vector(k, xi, tol)) return xi;
  }
  return std::nullopt;
}

std::optional<std::vector<double>> find_generic_covector(std::span<const Matrix<double>> k, Rng& rng,
                                                         std::size_t draws, double tol) {
  const std::size_t n = k.empty() ? 0 : k[0].size();
  for (std::size_t d = 0; d < draws; ++d) {
    auto a = rng.uniform_vector(n, -1.0, 1.0);
    if (is_generic_covector(k, a, tol)) return a;
  }
  return std::nullopt;
}

std::vector<double> generic_vector(std::span<const Matrix<double>> k) {
  Rng rng(kGenericSeed);
  auto xi = find_generic_vector(k, rng);
  if (!xi) throw InputError("no generic vector found: condition (A1) fails at this point");
  return *xi;
}

template <class T>
std::vector<T> coordinates_in_basis(std::span<const Matrix<T>> k, const Matrix<T>& x, std::span<const double> xi) {
  const auto c = column_matrix(k, xi);
  const auto rhs = x.apply(lift<T>(xi));
  return solve(c, std::span<const T>(rhs));
}

template <class T>
StructureConstants<T> structure_constants(std::span<const Matrix<T>> k, std::span<const double> xi) {
  const std::size_t n = k.size();
  if (n == 0 || k[0].size() != n || xi.size() != n) throw InputError("structure constants need n operators of size n");
  const auto c_inv = inverse(column_matrix(k, xi));
  const auto x = lift<T>(xi);
  StructureConstants<T> sc;
  sc.n = n;
  sc.a.assign(n * n * n, T(0.0));
  std::vector<Matrix<T>> kx;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const Matrix<T> prod = k[i] * k[j];
      const auto coeff = c_inv.apply(prod.apply(x));
      for (std::size_t s = 0; s < n; ++s) {
        sc(i, j, s) = coeff[s];
        sc(j, i, s) = coeff[s];
      }
      // Closure is judged on values; derivatives follow the same solve.
      Matrix<double> diff = values(prod);
      double scale = max_abs(diff);
      for (std::size_t s = 0; s < n; ++s) {
        const Matrix<double> ks = values(k[s]);
        scale = std::max(scale, max_abs(ks));
        diff -= value_of(coeff[s]) * ks;
      }
      sc.closure_residual = std::max(sc.closure_residual, max_abs(diff) / (1.0 + scale));
      if (i != j) {
        const Matrix<double> other = values(k[j] * k[i]);
        sc.closure_residual =
            std::max(sc.closure_residual, max_abs(other - values(prod)) / (1.0 + max_abs(other)));
      }
    }
  }
  return sc;
}

void require_closed(double closure_residual, double tol) {
  if (closure_residual > tol)
    throw InputError("span is not closed under multiplication (closure residual " + format_real(closure_residual) + ")");
}

template <class T>
FrobeniusPointData<T> dual_basis(std::span<const Matrix<T>> k, const StructureConstants<T>& sc,
                                 std::span<const double> a) {
  const std::size_t n = k.size();
  if (a.size() != n) throw InputError("covector has the wrong dimension");
  FrobeniusPointData<T> d;
  d.constants = sc;
  d.b = Matrix<T>(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      T acc(0.0);
      for (std::size_t s = 0; s < n; ++s) acc += sc(i, j, s) * T(a[s]);
      d.b(i, j) = acc;
    }
  try {
    d.b_inv = inverse(d.b);
  } catch (const SingularMatrixError&) {
    throw InputError("Frobenius form is degenerate at this point: covector not admissible");
  }
  d.dual.assign(n, Matrix<T>(n));
  d.identity.assign(n, T(0.0));
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) {
      d.dual[j] += d.b_inv(j, i) * k[i];
      d.identity[j] += d.b_inv(j, i) * T(a[i]);
    }
  return d;
}

template <class T>
FrobeniusPointData<T> frobenius_data(std::span<const Matrix<T>> k, std::span<const double> a, double closure_tol) {
  std::vector<Matrix<double>> kv;
  kv.reserve(k.size());
  for (const auto& m : k) kv.push_back(values(m));
  const auto xi = generic_vector(kv);
  auto sc = structure_constants(k, std::span<const double>(xi));
  require_closed(sc.closure_residual, closure_tol);
  return dual_basis(k, sc, a);
}

OperatorBasis dual_fields(const OperatorBasis& k, std::vector<double> a) {
  const std::size_t n = k.dimension();
  if (a.size() != n) throw InputError("covector has the wrong dimension");
  std::vector<OperatorField> out;
  out.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    out.push_back(OperatorField::from_function(
        n,
        [k, a, j](auto u) {
          using T = typename decltype(u)::value_type;
          const auto ks = k.eval(u);
          auto d = frobenius_data(std::span<const Matrix<T>>(ks), std::span<const double>(a));
          return d.dual[j];
        },
        k.is_constant()));
  }
  return OperatorBasis(std::move(out));
}

double associativity_residual(const StructureConstants<double>& sc) {
  const std::size_t n = sc.n;
  double worst = 0.0, scale = 0.0;
  for (double v : sc.a) scale = std::max(scale, std::abs(v));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l) {
          double lhs = 0.0, rhs = 0.0;
          for (std::size_t m = 0; m < n; ++m) {
            lhs += sc(i, j, m) * sc(m, k, l);
            rhs += sc(j, k, m) * sc(i, m, l);
          }
          worst = std::max(worst, std::abs(lhs - rhs));
        }
  return worst / (1.0 + scale * scale);
}

Report verify_algebra(const OperatorBasis& k, const std::optional<std::vector<double>>& a, const PointSet& points,
                      const CheckOptions& opt) {
  Report report("verify-algebra");
  const std::size_t n = k.dimension();
  const std::size_t count = points.size();
  if (a && a->size() != n) throw InputError("covector has the wrong dimension");

  auto values_at = [&](std::size_t p) {
    return k.eval(std::span<const double>(points[p]));
  };

  auto commut = evaluate_points(count, opt.exec, [&](std::size_t p) {
    const auto ks = values_at(p);
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) worst = std::max(worst, commutator_residual(ks[i], ks[j]));
    return worst;
  });
  report.add(summarize("commutativity", commut, opt.tol, &points));

  auto a1 = evaluate_points(count, opt.exec, [&](std::size_t p) {
    const auto ks = values_at(p);
    Rng rng(derive_seed(opt.seed, p));
    return find_generic_vector(ks, rng, opt.draws, opt.rank_tol) ? 0.0 : 1.0;
  });
  std::string err;
  std::size_t fails = count_failures(a1, err);
  report.add(boolean_check("A1 generic vector", fails, count, err));

  auto a2 = evaluate_points(count, opt.exec, [&](std::size_t p) {
    const auto ks = values_at(p);
    Rng rng(derive_seed(opt.seed ^ 0xa2a2a2a2ULL, p));
    return find_generic_covector(ks, rng, opt.draws, opt.rank_tol) ? 0.0 : 1.0;
  });
  err.clear();
  fails = count_failures(a2, err);
  report.add(boolean_check("A2 generic covector", fails, count, err));

  std::vector<StructureConstants<double>> constants(count);
  auto closure = evaluate_points(count, opt.exec, [&](std::size_t p) {
    const auto ks = values_at(p);
    Rng rng(derive_seed(opt.seed, p));
    auto xi = find_generic_vector(ks, rng, opt.draws, opt.rank_tol);
    if (!xi) throw InputError("no generic vector: structure constants undefined");
    constants[p] = structure_constants(std::span<const Matrix<double>>(ks), std::span<const double>(*xi));
    return constants[p].closure_residual;
  });
  report.add(summarize("closure", closure, opt.tol, &points));

  auto assoc = evaluate_points(count, opt.exec, [&](std::size_t p) {
    if (!closure[p].error.empty()) throw InputError(closure[p].error);
    return associativity_residual(constants[p]);
  });
  report.add(summarize("associativity", assoc, opt.tol, &points));

  if (a) {
    auto form = evaluate_points(count, opt.exec, [&](std::size_t p) {
      if (!closure[p].error.empty()) throw InputError(closure[p].error);
      const auto ks = values_at(p);
      const auto d = dual_basis(std::span<const Matrix<double>>(ks), constants[p], *a);
      // b(K_i, M^j) = delta_i^j and sum_j a^j K_j = Id.
      double worst = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          double pairing = 0.0;
          for (std::size_t s = 0; s < n; ++s) pairing += d.b(i, s) * d.b_inv(s, j);
          worst = std::max(worst, std::abs(pairing - (i == j ? 1.0 : 0.0)));
        }
      Matrix<double> id(n);
      for (std::size_t j = 0; j < n; ++j) id += d.identity[j] * ks[j];
      worst = std::max(worst, max_abs(id - Matrix<double>::identity(n)));
      return worst;
    });
    report.add(summarize("dual pairing and identity", form, opt.tol, &points));
  }

  if (count > 0 && closure[0].error.empty()) {
    nlohmann::ordered_json sc = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j)
        for (std::size_t s = 0; s < n; ++s) {
          const double v = constants[0](i, j, s);
          if (std::abs(v) > 1e-12) sc.push_back({{"i", i + 1}, {"j", j + 1}, {"k", s + 1}, {"value", v}});
        }
    report.data()["structure_constants_at_first_point"] = sc;
  }
  return report;
}

#define OPFROB_INSTANTIATE(T)                                                                                    \
  template std::vector<T> coordinates_in_basis(std::span<const Matrix<T>>, const Matrix<T>&,                     \
                                               std::span<const double>);                                         \
  template StructureConstants<T> structure_constants(std::span<const Matrix<T>>, std::span<const double>);        \
  template FrobeniusPointData<T> dual_basis(std::span<const Matrix<T>>, const StructureConstants<T>&,            \
                                            std::span<const double>);                                            \
  template FrobeniusPointData<T> frobenius_data(std::span<const Matrix<T>>, std::span<const double>, double);

OPFROB_INSTANTIATE(double)
OPFROB_INSTANTIATE(Jet)
OPFROB_INSTANTIATE(Series)

#undef OPFROB_INSTANTIATE

}  // namespace opfrob
