#include <catch_amalgamated.hpp>

#include <cmath>

#include "grflab/geometry.hpp"
#include "grflab/integrate.hpp"
#include "grflab/random.hpp"

using namespace grflab;

namespace {

using PT = Tensor<Polynomial>;
using RT = Tensor<Rational>;

Polynomial P(const char* s) { return parse_polynomial(s); }

Geometry<Polynomial> round_geometry() { return bi_invariant_geometry<Polynomial>(su2_lie_model()); }

template <class S>
bool all_zero(const Tensor<S>& t) {
  for (const auto& x : t.data())
    if (!ScalarTraits<S>::is_zero(x)) return false;
  return true;
}

PT random_tensor(Rng& rng, int rank, unsigned degree, std::size_t terms = 3) {
  PT t(3, rank);
  for (auto& x : t.data()) x = random_polynomial(rng, degree, terms);
  return t;
}

// Random symmetric positive definite rational metric: identity plus a small symmetric perturbation.
RT random_metric(Rng& rng) {
  RT g(3, 2, Symmetry::symmetric);
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) {
      Rational e = random_rational(rng, 1, 4) / 4;
      g(i, j) = (i == j ? Rational(2) : Rational(0)) + e;
      g(j, i) = g(i, j);
    }
  return g;
}

// Round sphere curvature: Rm_{ijkl} = delta_jk delta_il - delta_ik delta_jl.
Rational round_rm(int i, int j, int k, int l) { return Rational((j == k && i == l) - (i == k && j == l)); }

}  // namespace

TEST_CASE("round sphere data", "[geometry]") {
  auto geo = round_geometry();
  const auto& lc = geo.connection(Conn::levi_civita);
  const auto& plus = geo.connection(Conn::plus);
  const auto& minus = geo.connection(Conn::minus);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) {
        // Gamma = c / 2 = epsilon, Gamma^+ = 2 epsilon, Gamma^- = 0
        Rational eps = geo.H()(i, j, k).constant_term() / 2;
        CHECK(lc(i, j, k) == Polynomial(eps));
        CHECK(plus(i, j, k) == Polynomial(Rational(2 * eps)));
        CHECK(minus(i, j, k).is_zero());
      }
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) {
          CHECK(geo.Rm()(i, j, k, l) == Polynomial(round_rm(i, j, k, l)));
          CHECK(geo.Rm_plus()(i, j, k, l).is_zero());
        }
  CHECK(geo.Rm()(0, 1, 1, 0) == Polynomial(1L));  // sectional curvature 1
  auto rc = geo.ricci();
  auto h2 = geo.H2();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      CHECK(rc(i, j) == Polynomial(Rational(i == j ? 2 : 0)));
      CHECK(h2(i, j) == Polynomial(Rational(i == j ? 8 : 0)));
    }
  CHECK(geo.scalar_curvature() == Polynomial(6L));
  CHECK(geo.H_norm2() == Polynomial(24L));
  CHECK(all_zero(geo.dstar_H()));
  CHECK(all_zero(geo.ricci(Conn::plus)));
  CHECK(all_zero(geo.bakry_emery(Polynomial())));
  CHECK(geo.generalized_scalar(Polynomial()) == Polynomial(4L));
}

TEST_CASE("scalar operators agree with the frame Laplacian", "[geometry]") {
  auto geo = round_geometry();
  Rng rng(3);
  for (int trial = 0; trial < 6; ++trial) {
    auto f = random_polynomial(rng, 4, 5);
    CHECK(geo.laplacian(f) == laplacian_scalar(f));
    auto hess = geo.hessian(f);
    CHECK(symmetry_holds(hess));
    // antisymmetric part of the nabla^+ Hessian is -(1/2) i_{grad f} H
    auto hp = geo.hessian(f, Conn::plus);
    auto anti = antisym_part(hp);
    auto ih = geo.interior(geo.grad(f), geo.H());
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) CHECK(anti(i, j) == ih(i, j) * Rational(-1, 2));
  }
}

TEST_CASE("Levi-Civita and Bismut axioms on random constant metrics", "[geometry]") {
  Rng rng(17);
  auto model = su2_lie_model();
  for (int trial = 0; trial < 8; ++trial) {
    RT g = random_metric(rng);
    Rational s = random_rational(rng);
    Geometry<Rational> geo(model, g, volume_form(s));
    for (Conn c : {Conn::levi_civita, Conn::plus, Conn::minus}) {
      CHECK(all_zero(geo.covariant(g, c)));  // metric compatible
      const auto& G = geo.connection(c);
      // torsion T(e_i, e_j) = Gamma^k_ij - Gamma^k_ji - c^k_ij, lowered with g
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
          for (int l = 0; l < 3; ++l) {
            Rational t = 0;
            for (int k = 0; k < 3; ++k) t += (G(i, j, k) - G(j, i, k) - model.C(k, i, j)) * g(k, l);
            Rational expect = c == Conn::levi_civita ? Rational(0) : (c == Conn::plus ? 1 : -1) * geo.H()(i, j, l);
            CHECK(t == expect);
          }
    }
  }
}

TEST_CASE("curvature by operator commutators", "[geometry]") {
  // R(e_i, e_j) = [nabla_i, nabla_j] - nabla_{[e_i, e_j]} as 3x3 matrices.
  Rng rng(23);
  auto model = su2_lie_model();
  for (int trial = 0; trial < 5; ++trial) {
    RT g = random_metric(rng);
    Geometry<Rational> geo(model, g, volume_form(random_rational(rng)));
    for (Conn c : {Conn::levi_civita, Conn::plus}) {
      const auto& G = geo.connection(c);
      auto nab = [&](int i) {  // matrix M[a][b]: nabla_i e_b = M[a][b] e_a
        std::array<std::array<Rational, 3>, 3> m;
        for (int a = 0; a < 3; ++a)
          for (int b = 0; b < 3; ++b) m[a][b] = G(i, b, a);
        return m;
      };
      auto rm = geo.riemann(c);
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
          auto A = nab(i), B = nab(j);
          for (int k = 0; k < 3; ++k)
            for (int l = 0; l < 3; ++l) {
              Rational comp = 0;  // component a of R(e_i,e_j) e_k, lowered on l
              for (int a = 0; a < 3; ++a) {
                Rational r = 0;
                for (int b = 0; b < 3; ++b) r += A[a][b] * B[b][k] - B[a][b] * A[b][k];
                for (int m = 0; m < 3; ++m) r -= model.C(m, i, j) * nab(m)[a][k];
                comp += r * g(a, l);
              }
              CHECK(rm(i, j, k, l) == comp);
            }
        }
    }
    // algebraic symmetries of the Levi-Civita tensor
    const auto& rm = geo.Rm();
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k)
          for (int l = 0; l < 3; ++l) {
            CHECK(rm(i, j, k, l) == -rm(j, i, k, l));
            CHECK(rm(i, j, k, l) == -rm(i, j, l, k));
            CHECK(rm(i, j, k, l) == rm(k, l, i, j));
            CHECK(rm(i, j, k, l) + rm(j, k, i, l) + rm(k, i, j, l) == 0);
          }
  }
}

TEST_CASE("Ricci of diagonal metrics matches principal curvatures", "[geometry]") {
  // Orthonormal f_i = E_i / sqrt(a_i) has [f2, f3] = l1 f1 with l1 = 2 sqrt(a1 / (a2 a3));
  // with mu_i = (l1 + l2 + l3)/2 - l_i the principal Ricci curvatures are 2 mu_j mu_k.
  auto model = su2_lie_model();
  const double as[3][3] = {{1, 1, 1}, {1, 2, 3}, {0.5, 4, 1.5}};
  for (const auto& a : as) {
    RT g(3, 2, Symmetry::symmetric);
    for (int i = 0; i < 3; ++i) g(i, i) = Rational(a[i]);
    Geometry<Rational> geo(model, g, volume_form(Rational(0)));
    double l[3], mu[3];
    for (int i = 0; i < 3; ++i) l[i] = 2 * std::sqrt(a[i] / (a[(i + 1) % 3] * a[(i + 2) % 3]));
    for (int i = 0; i < 3; ++i) mu[i] = (l[0] + l[1] + l[2]) / 2 - l[i];
    auto rc = geo.ricci();
    for (int i = 0; i < 3; ++i) {
      double expect = a[i] * 2 * mu[(i + 1) % 3] * mu[(i + 2) % 3];
      CHECK(to_double(rc(i, i)) == Catch::Approx(expect).epsilon(1e-12));
      CHECK(rc(i, (i + 1) % 3) == 0);
    }
  }
}

TEST_CASE("Bismut curvature identities", "[geometry]") {
  Rng rng(31);
  auto model = su2_lie_model();
  for (int trial = 0; trial < 6; ++trial) {
    RT g = random_metric(rng);
    Geometry<Rational> geo(model, g, volume_form(random_rational(rng)));
    CHECK(geo.Rm_plus() == geo.rm_plus_formula());
    CHECK(geo.ricci(Conn::plus) == geo.rc_plus_formula());
    CHECK(geo.scalar_curvature(Conn::plus) == geo.scalar_curvature() - geo.H_norm2() / 4);
  }
  // polynomial torsion on the round metric
  for (int trial = 0; trial < 3; ++trial) {
    Geometry<Polynomial> geo(su2_lie_model(), model_metric<Polynomial>(model), volume_form(random_polynomial(rng, 2, 3)));
    CHECK(geo.Rm_plus() == geo.rm_plus_formula());
    CHECK(geo.scalar_curvature(Conn::plus) == geo.scalar_curvature() - geo.H_norm2() * Rational(1, 4));
  }
}

TEST_CASE("exterior derivative and codifferential", "[geometry]") {
  auto geo = round_geometry();
  Rng rng(41);
  for (int trial = 0; trial < 4; ++trial) {
    auto f = random_polynomial(rng, 3, 4);
    PT f0(3, 0);
    f0() = f;
    CHECK(all_zero(geo.exterior_derivative(geo.exterior_derivative(f0))));
    auto alpha = random_tensor(rng, 1, 2);
    CHECK(all_zero(geo.exterior_derivative(geo.exterior_derivative(alpha))));
    // integration by parts: full contraction <d alpha, K> integrates to 2 <alpha, d*K>
    PT K(3, 2, Symmetry::antisymmetric);
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j) {
        K(i, j) = random_polynomial(rng, 2, 3);
        K(j, i) = -K(i, j);
      }
    auto lhs = integrate_s3(geo.inner(geo.exterior_derivative(alpha), K));
    auto rhs = integrate_s3(geo.inner(alpha, geo.codifferential(K)));
    CHECK(lhs == Rational(2) * rhs);
  }
}

TEST_CASE("mixed connection on invariant forms", "[geometry]") {
  // left-invariant covectors are nabla^- parallel, right-invariant ones nabla^+ parallel
  auto geo = round_geometry();
  auto right = frame_field(0, Chirality::right);
  for (int a = 0; a < 3; ++a) {
    PT gamma(3, 2);
    for (int j = 0; j < 3; ++j) {
      auto left = frame_field(j, Chirality::left);
      Polynomial dot;
      for (int c = 0; c < 4; ++c) dot += left[c] * right[c];
      gamma(a, j) = dot;
    }
    CHECK(all_zero(geo.mixed_connection_apply(gamma)));
    auto [d1, d2] = geo.twisted_divergence(gamma, Polynomial());
    CHECK(all_zero(d1));
    CHECK(all_zero(d2));
  }
}

TEST_CASE("divergence adjoint identity", "[geometry]") {
  // <div_f gamma, (u, v)> - <gamma, div*(u, v)> = div_f V with V_m = gamma_ml u^l + gamma_lm v^l
  auto geo = round_geometry();
  Rng rng(53);
  for (int trial = 0; trial < 4; ++trial) {
    auto gamma = random_tensor(rng, 2, 2);
    auto u = random_tensor(rng, 1, 2), v = random_tensor(rng, 1, 2);
    for (const auto& f : {Polynomial(), random_polynomial(rng, 2, 3)}) {
      auto [a, b] = geo.twisted_divergence(gamma, f);
      Polynomial lhs = geo.inner(a, u) + geo.inner(b, v) - geo.inner(gamma, geo.divergence_adjoint({u, v}));
      PT V(3, 1);
      for (int m = 0; m < 3; ++m)
        for (int l = 0; l < 3; ++l) V(m) += gamma(m, l) * u(l) + gamma(l, m) * v(l);
      CHECK(lhs == geo.divergence_1form(V, f));
      if (f.is_zero()) CHECK(integrate_s3(lhs).is_zero());
    }
  }
}

TEST_CASE("mixed Laplacian closed form", "[geometry]") {
  auto geo = round_geometry();
  Rng rng(61);
  for (int trial = 0; trial < 4; ++trial) {
    auto gamma = random_tensor(rng, 2, 2);
    CHECK(geo.mixed_laplacian(gamma, Polynomial()) == geo.mixed_laplacian_formula(gamma, Polynomial()));
  }
  // torsion dV on the round metric, still co-closed
  Geometry<Polynomial> half(su2_lie_model(), model_metric<Polynomial>(su2_lie_model()), volume_form(Polynomial(1L)));
  auto gamma = random_tensor(rng, 2, 3);
  CHECK(half.mixed_laplacian(gamma, Polynomial()) == half.mixed_laplacian_formula(gamma, Polynomial()));
  // self-adjointness of the definition path
  auto g2 = random_tensor(rng, 2, 2);
  CHECK(integrate_s3(geo.inner(geo.mixed_laplacian(gamma, Polynomial()), g2)) ==
        integrate_s3(geo.inner(gamma, geo.mixed_laplacian(g2, Polynomial()))));
}

TEST_CASE("jet metrics are metric compatible", "[geometry]") {
  Polynomial u = P("x1x2");
  Tensor<JetScalar> g(3, 2, Symmetry::symmetric), H = volume_form(JetScalar::linear(Polynomial(2L), u * Rational(4)));
  for (int i = 0; i < 3; ++i) g(i, i) = JetScalar::linear(Polynomial(1L), u);
  Geometry<JetScalar> geo(su2_lie_model(), g, H);
  CHECK(all_zero(geo.covariant(g)));
  CHECK(all_zero(geo.covariant(g, Conn::plus)));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      JetScalar id;
      for (int k = 0; k < 3; ++k) id += geo.ginv()(i, k) * g(k, j);
      CHECK(id == JetScalar(Rational(i == j ? 1 : 0)));
    }
  // order-0 part is the round sphere
  CHECK(geo.scalar_curvature().c0 == Polynomial(6L));
}

TEST_CASE("invalid input is rejected", "[geometry]") {
  auto model = su2_lie_model();
  RT g = model_metric(model);
  RT bad = volume_form(Rational(1));
  bad(0, 1, 2) = 3;
  CHECK_THROWS_AS(Geometry<Rational>(model, g, bad), PreconditionFailed);
  RT sing(3, 2);
  CHECK_THROWS_AS(Geometry<Rational>(model, sing, volume_form(Rational(1))), SingularMetric);
  CHECK_THROWS_AS(Geometry<Rational>(model, RT(3, 1), volume_form(Rational(1))), BadRank);
  auto geo = round_geometry();
  CHECK_THROWS_AS(geo.twisted_divergence(PT(3, 1), Polynomial()), BadRank);
  CHECK_THROWS_AS(geo.g()(0, 3), BadIndex);
}
