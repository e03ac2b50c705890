#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "fixtures.hpp"
#include "opfrob/symalg.hpp"
#include "oracles.hpp"

using opfrob::Matrix;
using opfrob::OperatorField;

namespace {

opfrob::PointSet points(std::size_t n, std::size_t count, std::uint64_t seed = 42) {
  opfrob::SamplingSpec spec;
  spec.count = count;
  spec.seed = seed;
  return opfrob::sample_points(n, spec);
}

opfrob::FlatBasis flat52() { return opfrob::FlatBasis::create(fx::example52(), std::vector<double>{1, 0, 0, 0}); }

double field_distance(const OperatorField& a, const OperatorField& b, const opfrob::PointSet& ps) {
  double worst = 0.0;
  for (const auto& u : ps) worst = std::max(worst, opfrob::max_abs(a(u) - b(u)));
  return worst;
}

}  // namespace

TEST_CASE("matrix polynomial by Horner") {
  const Matrix<double> x{{1, 2}, {0, 3}};
  const auto p = opfrob::matrix_polynomial<double>({1, -2, 1}, x);  // (X - Id)^2
  const auto want = (x - Matrix<double>::identity(2)) * (x - Matrix<double>::identity(2));
  CHECK(opfrob::max_abs(p - want) == 0.0);
  CHECK(opfrob::max_abs(opfrob::matrix_polynomial<double>({}, x)) == 0.0);
}

TEST_CASE("canonical symmetry U") {
  const Matrix<double> nil{{0, 0}, {1, 0}};
  const auto flat = opfrob::FlatBasis::create({Matrix<double>::identity(2), nil}, std::vector<double>{1, 0});
  const auto u = opfrob::canonical_symmetry_U(flat);
  const auto m = u(std::vector<double>{0.3, -0.7});
  CHECK(m(0, 0) == doctest::Approx(0.3));
  CHECK(m(0, 1) == 0.0);
  CHECK(m(1, 0) == doctest::Approx(-0.7));
  CHECK(m(1, 1) == doctest::Approx(0.3));
  const auto f52 = flat52();
  const auto ps = points(4, 20);
  CHECK(field_distance(opfrob::canonical_symmetry_U(f52), fx::field(fx::example52_tilde()[1]), ps) <= 1e-14);
}

TEST_CASE("flat coordinates for a non-standard flat vector") {
  const auto ms = fx::example52();
  const std::vector<double> xi{1, 0.5, -0.25, 2};
  const auto flat = opfrob::FlatBasis::create(ms, xi);
  // d/du^i = M^i xi: moving along u^i moves x by M^i xi.
  const std::vector<double> x{0.1, 0.2, 0.3, 0.4};
  const auto u0 = flat.flat_coordinates(std::span<const double>(x));
  for (std::size_t i = 0; i < 4; ++i) {
    auto x1 = x;
    const auto step = ms[i].apply(xi);
    for (std::size_t k = 0; k < 4; ++k) x1[k] += step[k];
    const auto u1 = flat.flat_coordinates(std::span<const double>(x1));
    for (std::size_t k = 0; k < 4; ++k) CHECK(u1[k] - u0[k] == doctest::Approx(i == k ? 1.0 : 0.0));
  }
}

TEST_CASE("U on the ray through the flat vector") {
  const auto f52 = flat52();
  const auto u = opfrob::canonical_symmetry_U(f52);
  for (double t : {-0.9, 0.1, 0.5}) {
    const auto m = u(std::vector<double>{t, 0, 0, 0});
    CHECK(opfrob::max_abs(m - t * Matrix<double>::identity(4)) <= 1e-15);
  }
}

TEST_CASE("analytic symmetries of the four-dimensional algebra") {
  const auto f52 = flat52();
  const auto tilde = fx::example52_tilde();
  const auto ps = points(4, 30);
  CHECK(field_distance(opfrob::analytic_symmetry(f52, {{0, 0, 1}, {}, {}, {}}), fx::field(tilde[3]), ps) <= 1e-14);
  CHECK(field_distance(opfrob::analytic_symmetry(f52, {{0, 1}, {}, {}, {}}), fx::field(tilde[1]), ps) <= 1e-14);
  CHECK(field_distance(opfrob::analytic_symmetry(f52, {{}, {0, 1}, {}, {}}), fx::field(tilde[2]), ps) <= 1e-14);
  CHECK(field_distance(opfrob::analytic_symmetry(f52, {{1}, {}, {}, {}}), fx::field(tilde[0]), ps) == 0.0);
  CHECK(opfrob::analytic_symmetry(f52, {{2}, {1}, {}, {}}).is_constant());
  CHECK_THROWS_AS(opfrob::analytic_symmetry(f52, {{1}}), opfrob::InputError);
}

TEST_CASE("flat basis rejects bad input") {
  CHECK_THROWS_AS(opfrob::FlatBasis::create({Matrix<double>::identity(2), Matrix<double>{{0, 1}, {1, 0}}},
                                            std::vector<double>{1, 1}),
                  opfrob::InputError);
  CHECK_THROWS_AS(opfrob::FlatBasis::create({Matrix<double>::identity(2), Matrix<double>{{0, 1}, {0, 0}},
                                             Matrix<double>::identity(2)}),
                  opfrob::InputError);
  CHECK_THROWS_AS(opfrob::FlatBasis::create({Matrix<double>{{1, 0}, {0, 0}}, Matrix<double>{{0, 1}, {0, 0}}}),
                  opfrob::InputError);
}

TEST_CASE("membership in the symmetry algebra") {
  const auto b52 = fx::constant_basis(fx::example52());
  const auto ps = points(4, 30);
  CHECK(opfrob::sym_membership(b52, OperatorField::constant(Matrix<double>::identity(4)), ps).passed());
  for (const auto& g : fx::example52_tilde()) CHECK(opfrob::sym_membership(b52, fx::field(g), ps).passed());
  const auto bad = opfrob::sym_membership(b52, fx::field({{"u2", "0", "0", "0"},
                                                          {"0", "u1", "0", "0"},
                                                          {"0", "0", "0", "0"},
                                                          {"0", "0", "0", "0"}}),
                                          ps);
  CHECK_FALSE(bad.passed());
  CHECK(bad.find("commutes with basis")->status == opfrob::Status::fail);
}

TEST_CASE("products and polynomials of members stay members") {
  const auto b52 = fx::constant_basis(fx::example52());
  const auto tilde = fx::example52_tilde();
  const auto ps = points(4, 20);
  const auto prod = opfrob::product_field(fx::field(tilde[1]), fx::field(tilde[2]));
  CHECK(opfrob::sym_membership(b52, prod, ps).passed());
  const auto f52 = flat52();
  const auto poly = opfrob::analytic_symmetry(f52, {{0.5, -1, 0, 2}, {1, 0, 3}, {0, 2}, {-1, 0, 0, 0, 1}});
  CHECK(opfrob::sym_membership(b52, poly, ps).passed());
  // Pairwise strong symmetry among members.
  std::vector<OperatorField> members;
  for (const auto& g : tilde) members.push_back(fx::field(g));
  members.push_back(prod);
  members.push_back(poly);
  CHECK(opfrob::pairwise_check(members, opfrob::BracketNorm::full, ps, {}, "members").passed());
}

TEST_CASE("members share the conservation laws of the basis") {
  const auto du4 = opfrob::OneFormField::parse({"0", "0", "0", "1"}, 4);
  const auto ps = points(4, 20);
  for (const auto& g : fx::example52_tilde())
    CHECK(opfrob::conservation_law_check(fx::field(g), du4, ps, {}).passed());
  const auto poly = opfrob::analytic_symmetry(flat52(), {{0, 0, 0, 1}, {0, 1}, {}, {1}});
  CHECK(opfrob::conservation_law_check(poly, du4, ps, {}).passed());
}

TEST_CASE("members for a diagonal algebra") {
  std::vector<Matrix<double>> ms{fx::unit(3, 0, 0), fx::unit(3, 1, 1), fx::unit(3, 2, 2)};
  const auto flat = opfrob::FlatBasis::create(ms);
  const auto sym = opfrob::analytic_symmetry(flat, {{0, 0, 1}, {0, 1}, {2, 0, 0, 1}});
  const auto ps = points(3, 20);
  CHECK(opfrob::sym_membership(flat.basis(), sym, ps).passed());
  CHECK(opfrob::nijenhuis_check(sym, ps, {}).passed());
}
