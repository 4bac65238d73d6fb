#include <catch_amalgamated.hpp>

#include <cmath>

#include "grflab/random.hpp"
#include "grflab/variational.hpp"

using namespace grflab;

namespace {

PolyGeometry round_geometry(const Rational& s = 2) {
  auto m = su2_lie_model();
  return PolyGeometry(m, model_metric<Polynomial>(m), volume_form(Polynomial(s)));
}

bool zero(const PolyTensor& t) {
  for (const auto& x : t.data())
    if (!x.is_zero()) return false;
  return true;
}

PolyTensor random_tensor(Rng& rng, int rank, unsigned degree, std::size_t terms = 3) {
  PolyTensor t(3, rank);
  for (auto& x : t.data()) x = random_polynomial(rng, degree, terms);
  return t;
}

// omega^L_i (x) omega^R_j in the left frame.
PolyTensor left_right(int i, int j) {
  PolyTensor t(3, 2);
  auto right = frame_field(j, Chirality::right);
  for (int b = 0; b < 3; ++b) {
    auto left = frame_field(b, Chirality::left);
    for (int c = 0; c < 4; ++c) t(i, b) += left[c] * right[c];
  }
  return t;
}

Tensor<Rational> random_spd(Rng& rng) {
  Tensor<Rational> g(3, 2, Symmetry::symmetric);
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) {
      g(i, j) = (i == j ? Rational(3, 2) : Rational(0)) + random_rational(rng, 1, 3) / 3;
      g(j, i) = g(i, j);
    }
  return g;
}

// lambda for constant data is the constant potential R - |H|^2/12.
Rational homogeneous_lambda(const Tensor<Rational>& g, const Rational& s) {
  Geometry<Rational> geo(su2_lie_model(), g, volume_form(s));
  return geo.scalar_curvature() - geo.H_norm2() / 12;
}

}  // namespace

TEST_CASE("lambda at the round sphere", "[lambda]") {
  auto crit = lambda_min(round_geometry(), 2);
  CHECK(crit.lambda == Catch::Approx(4).margin(1e-9));
  CHECK(crit.f_constant);
  CHECK(crit.residual < 1e-10);
  CHECK(crit.f_value == Catch::Approx(std::log(2 * M_PI * M_PI)).epsilon(1e-12));
  CHECK(crit.warnings.empty());

  auto bare = lambda_min(round_geometry(0), 2);
  CHECK(bare.lambda == Catch::Approx(6).margin(1e-9));
  CHECK(bare.f_value == Catch::Approx(crit.f_value).epsilon(1e-12));
  // spectrum of -4 Delta + 6: 6 + 4 k (k + 2) with multiplicity (k + 1)^2
  std::vector<double> expect;
  for (int k = 0; k <= 2; ++k)
    for (int m = 0; m < (k + 1) * (k + 1); ++m) expect.push_back(6 + 4 * k * (k + 2));
  REQUIRE(bare.eigenvalues.size() == expect.size());
  for (std::size_t i = 0; i < expect.size(); ++i) CHECK(bare.eigenvalues[i] == Catch::Approx(expect[i]).margin(1e-9));
  // constant shift of the potential by |H|^2/12 = 2
  for (std::size_t i = 0; i < expect.size(); ++i) CHECK(crit.eigenvalues[i] == Catch::Approx(expect[i] - 2).margin(1e-9));

  Rng rng(2);
  auto g = random_spd(rng);
  PolyGeometry squashed(su2_lie_model(), lift<Polynomial>(g), volume_form(Polynomial(1L)));
  CHECK(lambda_min(squashed, 2).lambda == Catch::Approx(to_double(homogeneous_lambda(g, 1))).epsilon(1e-10));
}

TEST_CASE("first variation", "[lambda]") {
  auto geo = round_geometry();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      PolyTensor e(3, 2);
      e(i, j) = Polynomial(1L);
      CHECK(first_variation(geo, e) == 0);
    }
  auto bare = round_geometry(0);
  auto rc = bare.bakry_emery(Polynomial());
  CHECK(first_variation(bare, rc) == -12);
  CHECK_THROWS_AS(first_variation(geo, PolyTensor(3, 2), parse_polynomial("x1")), PreconditionFailed);

  // central differences of lambda along constant symmetric h at non-critical data
  Rng rng(9);
  for (int trial = 0; trial < 3; ++trial) {
    auto g = random_spd(rng);
    Rational s = random_rational(rng, 3, 1) + 4;
    Tensor<Rational> h(3, 2, Symmetry::symmetric);
    for (int i = 0; i < 3; ++i)
      for (int j = i; j < 3; ++j) h(i, j) = h(j, i) = random_rational(rng);
    const Rational step(1, 10000);
    auto gp = g, gm = g;
    for (std::size_t k = 0; k < 9; ++k) {
      gp.data()[k] += step * h.data()[k];
      gm.data()[k] -= step * h.data()[k];
    }
    PolyGeometry plus(su2_lie_model(), lift<Polynomial>(gp), volume_form(Polynomial(s)));
    PolyGeometry minus(su2_lie_model(), lift<Polynomial>(gm), volume_form(Polynomial(s)));
    double fd = (lambda_min(plus, 1).lambda - lambda_min(minus, 1).lambda) / (2 * step.get_d());
    PolyGeometry base(su2_lie_model(), lift<Polynomial>(g), volume_form(Polynomial(s)));
    CHECK(fd == Catch::Approx(to_double(first_variation(base, lift<Polynomial>(h)))).margin(1e-6));
  }
}

TEST_CASE("Poisson solver", "[operators]") {
  auto geo = round_geometry();
  PoissonSolver solver(geo, 3);
  Rng rng(4);
  for (int trial = 0; trial < 5; ++trial) {
    Polynomial s = random_polynomial(rng, 3, 5);
    s -= Polynomial(average(s));
    Polynomial u = solver.solve(s);
    CHECK(geo.laplacian(u) == s);
    CHECK(average(u) == 0);
  }
  CHECK_THROWS_AS(solver.solve(Polynomial(1L)), InconsistentSource);
  CHECK_THROWS_AS(solver.solve(parse_polynomial("x1^4")), PreconditionFailed);
}

TEST_CASE("operator B", "[operators]") {
  auto geo = round_geometry();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(zero(operator_B(geo, left_right(i, j))));
  Rng rng(12);
  for (const auto& g : {round_geometry(), round_geometry(0)}) {
    for (int trial = 0; trial < 3; ++trial) {
      auto gamma = random_tensor(rng, 2, 2);
      // <B gamma, gamma> = 1/2 |nabla-bar gamma|^2 - <R+ gamma, gamma>
      auto dg = g.mixed_connection_apply(gamma);
      Rational lhs = average_pairing(g, operator_B(g, gamma), gamma);
      Rational rhs = average(g.inner(dg, dg)) / 2 - average_pairing(g, g.curvature_action(gamma), gamma);
      CHECK(lhs == rhs);
    }
  }
  // without torsion B is -1/2 rough Laplacian - R(gamma)
  auto bare = round_geometry(0);
  auto gamma = random_tensor(rng, 2, 2);
  auto expect = bare.rough_laplacian(gamma, Polynomial());
  expect.scale(Rational(-1, 2));
  expect -= bare.curvature_action(gamma, Conn::levi_civita);
  CHECK(operator_B(bare, gamma) == expect);
}

TEST_CASE("operator A", "[operators]") {
  auto geo = round_geometry();
  Rng rng(21);
  // slice-tangent directions: A = B
  auto slice = slice_tangent_basis(geo, 1);
  for (std::size_t k = 0; k < slice.size(); k += 7) CHECK(operator_A(geo, slice[k]) == operator_B(geo, slice[k]));
  auto g = model_metric<Polynomial>(su2_lie_model());
  auto parts = operator_A_parts(geo, g);
  CHECK(parts.U.is_zero());
  CHECK(parts.result == operator_B(geo, g));

  PoissonSolver solver(geo, 2);
  for (int trial = 0; trial < 4; ++trial) {
    auto g1 = random_tensor(rng, 2, 2), g2 = random_tensor(rng, 2, 2);
    auto p = operator_A_parts(geo, g2, {}, &solver);
    CHECK(geo.laplacian(p.U) == p.source);
    CHECK(average(p.U) == 0);
    // self-adjoint
    CHECK(average_pairing(geo, operator_A(geo, g1, {}, &solver), g2) ==
          average_pairing(geo, g1, operator_A(geo, g2, {}, &solver)));
  }
  // gauge directions div*(u, v) are annihilated at the critical point
  for (int trial = 0; trial < 4; ++trial) {
    auto u = random_tensor(rng, 1, 2), v = random_tensor(rng, 1, 2);
    CHECK(zero(operator_A(geo, geo.divergence_adjoint({u, v}))));
  }
  CHECK_THROWS_AS(operator_A(geo, g, parse_polynomial("x1")), PreconditionFailed);
}

TEST_CASE("contracted Bianchi identity", "[bianchi]") {
  Rng rng(33);
  for (int trial = 0; trial < 5; ++trial) {
    auto g = lift<Polynomial>(random_spd(rng));
    auto s = random_polynomial(rng, 2, 3);
    auto f = random_polynomial(rng, 2, 4);
    PolyGeometry geo(su2_lie_model(), g, volume_form(s));
    CHECK(zero(bianchi_contracted_residual(geo, f)));
  }
  // beta annihilates the twisted Bakry-Emery tensor on constant data
  auto geo = round_geometry();
  auto [a, b] = bianchi(geo, geo.bakry_emery(Polynomial()));
  CHECK(zero(a));
  CHECK(zero(b));
}

TEST_CASE("Phi relation", "[bianchi]") {
  auto geo = round_geometry();
  Rng rng(44);
  for (int trial = 0; trial < 5; ++trial) {
    auto r = phi_relation_residual(geo, random_tensor(rng, 2, 2));
    CHECK(zero(r.first));
    CHECK(zero(r.second));
  }
  // without torsion Phi is -1/2 the rough Laplacian on each entry
  auto bare = round_geometry(0);
  PolyTensor u(3, 1), v(3, 1);
  u(0) = Polynomial(1L);
  v(2) = Polynomial(Rational(3));
  auto phi = phi_operator(bare, {u, v});
  auto lu = bare.rough_laplacian(u, Polynomial()), lv = bare.rough_laplacian(v, Polynomial());
  CHECK(phi.first == lu.scale(Rational(-1, 2)));
  CHECK(phi.second == lv.scale(Rational(-1, 2)));
}

TEST_CASE("second variation", "[second-variation]") {
  auto geo = round_geometry();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(second_variation_form(geo, left_right(i, j), left_right(i, j)) == 0);

  Rng rng(55);
  auto gamma = random_tensor(rng, 2, 1);
  Rational q = second_variation_form(geo, gamma, gamma);
  PolyTensor scaled_gamma = gamma;
  scaled_gamma.scale(Rational(3));
  CHECK(second_variation_form(geo, scaled_gamma, scaled_gamma) == 9 * q);

  // matches the second difference of lambda along constant symmetric directions
  Tensor<Rational> g0 = model_metric(su2_lie_model());
  for (int trial = 0; trial < 3; ++trial) {
    Tensor<Rational> h(3, 2, Symmetry::symmetric);
    for (int i = 0; i < 3; ++i)
      for (int j = i; j < 3; ++j) h(i, j) = h(j, i) = random_rational(rng);
    const Rational step(1, 1000000);
    auto gp = g0, gm = g0;
    for (std::size_t k = 0; k < 9; ++k) {
      gp.data()[k] += step * h.data()[k];
      gm.data()[k] -= step * h.data()[k];
    }
    Rational second = (homogeneous_lambda(gp, 2) - 2 * homogeneous_lambda(g0, 2) + homogeneous_lambda(gm, 2)) / (step * step);
    double exact = to_double(second_variation_form(geo, lift<Polynomial>(h), lift<Polynomial>(h)));
    CHECK(to_double(second) == Catch::Approx(exact).margin(1e-6));
  }
  // constant 2-forms are closed and leave lambda unchanged
  PolyTensor K(3, 2);
  K(0, 1) = Polynomial(1L);
  K(1, 0) = Polynomial(-1L);
  CHECK(second_variation_form(geo, K, K) == 0);

  // negative semidefinite on the slice
  auto basis = slice_tangent_basis(geo, 1);
  auto m = second_variation_matrix(geo, basis);
  CHECK(is_symmetric(m.entries));
  CHECK(is_symmetric(m.gram));
  auto spec = relative_spectrum(m);
  CHECK(spec.back() <= 1e-9);
}
