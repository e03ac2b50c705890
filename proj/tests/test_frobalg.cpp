#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "fixtures.hpp"
#include "opfrob/frobalg.hpp"
#include "oracles.hpp"

using opfrob::Matrix;

namespace {

Matrix<double> nilpotent2() {
  Matrix<double> n(2);
  n(1, 0) = 1.0;
  return n;
}

template <class T>
std::span<const Matrix<T>> span_of(const std::vector<Matrix<T>>& v) {
  return std::span<const Matrix<T>>(v);
}

// Random element of the centraliser of a Jordan block: c0 Id + c1 N + c2 N^2.
std::vector<Matrix<double>> jordan_centraliser_basis(opfrob::Rng& rng, std::size_t n) {
  Matrix<double> shift(n);
  for (std::size_t i = 1; i < n; ++i) shift(i, i - 1) = 1.0;
  std::vector<Matrix<double>> powers{Matrix<double>::identity(n)};
  for (std::size_t k = 1; k < n; ++k) powers.push_back(powers.back() * shift);
  std::vector<Matrix<double>> out;
  for (std::size_t i = 0; i < n; ++i) {
    Matrix<double> m(n);
    for (std::size_t k = 0; k < n; ++k) m += rng.uniform(-1.0, 1.0) * powers[k];
    out.push_back(m);
  }
  return out;
}

}  // namespace

TEST_CASE("generic vector checks") {
  const auto ms = fx::example52();
  CHECK_FALSE(opfrob::is_generic_vector(span_of(ms), std::vector<double>{0, 0, 0, 1}));
  CHECK(opfrob::is_generic_vector(span_of(ms), std::vector<double>{1, 0, 0, 0}));
  const std::vector<Matrix<double>> id{Matrix<double>::identity(1)};
  CHECK(opfrob::is_generic_vector(span_of(id), std::vector<double>{0.3}));
  opfrob::Rng rng(42);
  CHECK(opfrob::find_generic_vector(span_of(ms), rng).has_value());
}

TEST_CASE("generic covector checks") {
  const auto ms = fx::example52();
  CHECK(opfrob::is_generic_covector(span_of(ms), std::vector<double>{0, 0, 0, 1}));
  CHECK_FALSE(opfrob::is_generic_covector(span_of(ms), std::vector<double>{1, 0, 0, 0}));
  const std::vector<Matrix<double>> id{Matrix<double>::identity(1)};
  CHECK(opfrob::is_generic_covector(span_of(id), std::vector<double>{-2.0}));
}

TEST_CASE("structure constants of the four-dimensional algebra") {
  const auto ms = fx::example52();
  const std::vector<double> xi{1, 0, 0, 0};
  const auto sc = opfrob::structure_constants(span_of(ms), std::span<const double>(xi));
  CHECK(sc(1, 1, 3) == 1.0);
  CHECK(sc(2, 2, 3) == 1.0);
  for (std::size_t s = 0; s < 4; ++s) CHECK(sc(1, 2, s) == 0.0);
  CHECK(sc.closure_residual == 0.0);
  CHECK(opfrob::associativity_residual(sc) == 0.0);
}

TEST_CASE("structure constants of small algebras") {
  const std::vector<Matrix<double>> k{Matrix<double>::identity(2), nilpotent2()};
  const std::vector<double> xi{1, 0};
  const auto sc = opfrob::structure_constants(span_of(k), std::span<const double>(xi));
  CHECK(sc(0, 0, 0) == 1.0);
  CHECK(sc(0, 1, 1) == 1.0);
  CHECK(sc(1, 1, 0) == 0.0);
  CHECK(sc(1, 1, 1) == 0.0);
  const std::vector<Matrix<double>> id{Matrix<double>::identity(1)};
  const std::vector<double> one{1.0};
  CHECK(opfrob::structure_constants(span_of(id), std::span<const double>(one))(0, 0, 0) == 1.0);
}

TEST_CASE("a span that is not closed is rejected") {
  // {Id, E12, E23}: E12 E23 = E13 is outside the span.
  std::vector<Matrix<double>> k{Matrix<double>::identity(3), fx::unit(3, 0, 1), fx::unit(3, 1, 2)};
  const std::vector<double> xi{0.2, 0.7, 1.1};
  const auto sc = opfrob::structure_constants(span_of(k), std::span<const double>(xi));
  CHECK(sc.closure_residual > 1e-3);
  CHECK_THROWS_AS(opfrob::require_closed(sc.closure_residual, 1e-9), opfrob::InputError);
}

TEST_CASE("dual basis examples") {
  SUBCASE("nilpotent pair") {
    const std::vector<Matrix<double>> k{Matrix<double>::identity(2), nilpotent2()};
    const std::vector<double> a{0, 1};
    const auto d = opfrob::frobenius_data(span_of(k), std::span<const double>(a));
    CHECK(opfrob::max_abs(d.b - fx::unit(2, 0, 1) - fx::unit(2, 1, 0)) <= 1e-15);
    CHECK(opfrob::max_abs(d.dual[0] - nilpotent2()) <= 1e-15);
    CHECK(opfrob::max_abs(d.dual[1] - Matrix<double>::identity(2)) <= 1e-15);
  }
  SUBCASE("companion field at (1, 2)") {
    const auto basis = opfrob::OperatorBasis({fx::field({{"1", "0"}, {"0", "1"}}), fx::field({{"u1", "1"}, {"u2", "0"}})});
    const std::vector<double> u{1, 2};
    const auto k = basis.eval(std::span<const double>(u));
    const std::vector<double> a{1, 0};
    const auto d = opfrob::frobenius_data(span_of(k), std::span<const double>(a));
    CHECK(d.b(0, 0) == doctest::Approx(1.0));
    CHECK(d.b(1, 1) == doctest::Approx(2.0));
    CHECK(std::abs(d.b(0, 1)) <= 1e-14);
    Matrix<double> expected(2);
    expected(0, 0) = 0.5;
    expected(0, 1) = 0.5;
    expected(1, 0) = 1.0;
    CHECK(opfrob::max_abs(d.dual[1] - expected) <= 1e-14);
  }
  SUBCASE("identity alone") {
    const std::vector<Matrix<double>> k{Matrix<double>::identity(1)};
    const std::vector<double> a{1};
    const auto d = opfrob::frobenius_data(span_of(k), std::span<const double>(a));
    CHECK(d.dual[0](0, 0) == doctest::Approx(1.0).epsilon(1e-15));
  }
  SUBCASE("degenerate form") {
    const std::vector<Matrix<double>> k{Matrix<double>::identity(2), nilpotent2()};
    const std::vector<double> a{1, 0};
    CHECK_THROWS_AS(opfrob::frobenius_data(span_of(k), std::span<const double>(a)), opfrob::InputError);
  }
}

TEST_CASE("duality is an involution") {
  opfrob::Rng rng(9);
  for (int t = 0; t < 20; ++t) {
    const std::size_t n = 2 + t % 3;
    const auto k = jordan_centraliser_basis(rng, n);
    const auto a = rng.uniform_vector(n, -1.0, 1.0);
    const auto d = opfrob::frobenius_data(span_of(k), std::span<const double>(a));
    std::vector<double> a_dual;
    for (double v : d.identity) a_dual.push_back(v);
    const auto back = opfrob::frobenius_data(span_of(d.dual), std::span<const double>(a_dual));
    for (std::size_t i = 0; i < n; ++i) CHECK(opfrob::max_abs(back.dual[i] - k[i]) <= 1e-9 * (1.0 + opfrob::max_abs(k[i])));
  }
}

TEST_CASE("dual structure constants satisfy a^{ij}_k = b^{jb} a_{kb}^i") {
  opfrob::Rng rng(10);
  for (int t = 0; t < 10; ++t) {
    const std::size_t n = 3;
    const auto k = jordan_centraliser_basis(rng, n);
    const auto a = rng.uniform_vector(n, -1.0, 1.0);
    const auto d = opfrob::frobenius_data(span_of(k), std::span<const double>(a));
    const auto xi = opfrob::generic_vector(d.dual);
    const auto up = opfrob::structure_constants(span_of(d.dual), std::span<const double>(xi));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t c = 0; c < n; ++c) {
          double rhs = 0.0;
          for (std::size_t b = 0; b < n; ++b) rhs += d.b_inv(j, b) * d.constants(c, b, i);
          CHECK(std::abs(up(i, j, c) - rhs) <= 1e-9 * (1.0 + std::abs(rhs)));
        }
  }
}

TEST_CASE("linear solve agrees with the least-squares oracle") {
  opfrob::Rng rng(12);
  for (int t = 0; t < 10; ++t) {
    const auto k = jordan_centraliser_basis(rng, 3);
    const auto xi = opfrob::generic_vector(k);
    const auto sc = opfrob::structure_constants(span_of(k), std::span<const double>(xi));
    const auto lsq = oracle::structure_constants_lsq(k);
    for (std::size_t e = 0; e < lsq.size(); ++e) CHECK(std::abs(sc.a[e] - lsq[e]) <= 1e-9);
  }
}

TEST_CASE("jet structure constants carry derivatives") {
  const auto basis = opfrob::OperatorBasis({fx::field({{"1", "0"}, {"0", "1"}}), fx::field({{"u1", "1"}, {"u2", "0"}})});
  const std::vector<double> u{0.4, -0.7};
  const auto jets = opfrob::seed_jets(u);
  const auto k = basis.eval(std::span<const opfrob::Jet>(jets));
  const std::vector<double> xi{0.3, 0.9};
  const auto sc = opfrob::structure_constants(span_of(k), std::span<const double>(xi));
  // L^2 = u1 L + u2 Id
  CHECK(sc(1, 1, 0).value() == doctest::Approx(-0.7));
  CHECK(sc(1, 1, 0).partial(1) == doctest::Approx(1.0));
  CHECK(sc(1, 1, 1).partial(0) == doctest::Approx(1.0));
}

TEST_CASE("verify_algebra on the four-dimensional algebra") {
  const auto basis = fx::constant_basis(fx::example52());
  opfrob::SamplingSpec spec;
  spec.count = 10;
  const auto points = opfrob::sample_points(4, spec);
  const auto report = opfrob::verify_algebra(basis, std::vector<double>{0, 0, 0, 1}, points);
  CHECK(report.passed());
  const auto bad = opfrob::verify_algebra(basis, std::vector<double>{1, 0, 0, 0}, points);
  CHECK_FALSE(bad.passed());
}

TEST_CASE("serial and parallel reports agree") {
  const auto basis = opfrob::OperatorBasis({fx::field({{"1", "0"}, {"0", "1"}}), fx::field({{"u1", "1"}, {"u2", "0"}})});
  opfrob::SamplingSpec spec;
  const auto points = opfrob::sample_points(2, spec);
  opfrob::CheckOptions serial, parallel;
  serial.exec = opfrob::Execution::serial;
  const auto a = opfrob::verify_algebra(basis, std::vector<double>{1, 0}, points, serial);
  const auto b = opfrob::verify_algebra(basis, std::vector<double>{1, 0}, points, parallel);
  CHECK(a.to_json(spec).dump() == b.to_json(spec).dump());
}
