#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "grflab/grflab.hpp"

using namespace grflab;

namespace {

struct Criterion {
  std::string name;
  double limit_s;  // 0 means no runtime bound
  std::function<bool(std::string&)> body;
};

Tensor<Rational> random_invariant_metric(Rng& rng) {
  Tensor<Rational> g(3, 2, Symmetry::symmetric);
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j)
      g(i, j) = g(j, i) = (i == j ? Rational(2) : Rational(0)) + random_rational(rng, 1, 5) / 4;
  return g;
}

PolyTensor random_tensor(Rng& rng, unsigned degree) {
  PolyTensor t(3, 2);
  for (auto& x : t.data()) x = random_polynomial(rng, degree, 3);
  return t;
}

long double_factorial(int n) {
  long r = 1;
  for (int k = n; k > 1; k -= 2) r *= k;
  return r;
}

// Surface integral over the unit S^3 in units of pi^2, from the Gaussian moment formula:
// mean of prod x_i^{a_i} = prod (a_i - 1)!! / (4 * 6 * ... * (2 + |a|)) for even a_i, area 2 pi^2.
Rational moment_oracle(const Polynomial& p) {
  Rational total;
  for (const auto& [m, c] : p.terms()) {
    auto e = m.exps();
    bool odd = false;
    int deg = 0;
    long num = 1;
    for (unsigned a : e) {
      if (a % 2) odd = true;
      deg += static_cast<int>(a);
      num *= double_factorial(static_cast<int>(a) - 1);
    }
    if (odd) continue;
    long den = 1;
    for (int k = 4; k < 4 + deg; k += 2) den *= k;
    total += c * Rational(2 * num, den);
  }
  return total;
}

}  // namespace

int main() {
  const PolyGeometry round = round_su2_geometry();
  const auto model = su2_lie_model();
  Rng rng(20240601);

  std::vector<Criterion> criteria;

  criteria.push_back({"Bismut flatness on the round S^3", 1.0, [&](std::string& det) {
    PolyGeometry geo = round_su2_geometry();
    bool rm = is_zero_tensor(geo.Rm_plus());
    bool dh = is_zero_tensor(geo.covariant(geo.H()));
    bool rc = is_zero_tensor(geo.ricci() - PolyTensor(geo.H2()).scale(Rational(1, 4)));
    bool ds = is_zero_tensor(geo.dstar_H());
    det = "Rm+=0:" + std::to_string(rm) + " nablaH=0:" + std::to_string(dh) + " Rc=H2/4:" + std::to_string(rc) +
          " d*H=0:" + std::to_string(ds);
    return rm && dh && rc && ds;
  }});

  criteria.push_back({"Bismut Ricci dual path on random invariant metrics", 10.0, [&](std::string& det) {
    int ok = 0;
    const int trials = 24;
    for (int k = 0; k < trials; ++k) {
      Geometry<Rational> geo(model, random_invariant_metric(rng), volume_form(random_rational(rng)));
      if (geo.ricci(Conn::plus) == geo.rc_plus_formula()) ++ok;
    }
    det = std::to_string(ok) + "/" + std::to_string(trials) + " exact";
    return ok == trials;
  }});

  criteria.push_back({"Mixed Laplacian dual path on random rank-2 tensors", 0, [&](std::string& det) {
    int ok = 0;
    const int trials = 20;
    for (int k = 0; k < trials; ++k) {
      PolyTensor gamma = random_tensor(rng, 2);
      if (round.mixed_laplacian(gamma, Polynomial()) == round.mixed_laplacian_formula(gamma, Polynomial())) ++ok;
    }
    det = std::to_string(ok) + "/" + std::to_string(trials) + " exact";
    return ok == trials;
  }});

  criteria.push_back({"Contracted Bianchi identity", 0, [&](std::string& det) {
    int ok = 0;
    const int trials = 20;
    for (int k = 0; k < trials; ++k) {
      PolyGeometry geo(model, lift<Polynomial>(random_invariant_metric(rng)),
                       volume_form(Polynomial(random_rational(rng))));
      if (is_zero_tensor(bianchi_contracted_residual(geo, random_polynomial(rng, 2, 5)))) ++ok;
    }
    det = std::to_string(ok) + "/" + std::to_string(trials) + " zero residuals";
    return ok == trials;
  }});

  criteria.push_back({"lambda at the critical point", 0, [&](std::string& det) {
    auto r = lambda_min(round, 2);
    bool fv = true;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        PolyTensor e(3, 2);
        e(i, j) = Polynomial(Rational(1));
        if (sgn(first_variation(round, e)) != 0) fv = false;
      }
    char buf[160];
    std::snprintf(buf, sizeof buf, "lambda=%.15f f_variation=%.2e residual=%.2e", r.lambda, r.f_variation,
                  r.residual);
    det = buf;
    return std::abs(r.lambda - 4) < 1e-9 && r.f_constant && r.f_variation < 1e-10 && r.residual < 1e-10 && fv;
  }});

  criteria.push_back({"Linear stability on the slice", 0, [&](std::string& det) {
    auto slice = slice_tangent_basis(round, 2);
    auto m = second_variation_matrix(round, slice);
    auto ev = relative_spectrum(m);
    const double top = ev.back();
    char buf[120];
    std::snprintf(buf, sizeof buf, "slice_dim=%zu max_eigenvalue=%.3e", slice.size(), top);
    det = buf;
    return is_symmetric(m.entries) && top <= 1e-9;
  }});

  std::vector<Deformation> kernel2;
  criteria.push_back({"Kernel dimension and spanning families", 60.0, [&](std::string& det) {
    kernel2 = igsd_kernel(round, 2);
    auto kernel3 = igsd_kernel(round, 3);
    auto par = gammas(parallel_deformations());
    auto can = gammas(canonical_deformations(round));
    bool spans = same_span(gammas(kernel2), par) && same_span(gammas(kernel2), can) &&
                 same_span(gammas(kernel3), par) && same_span(gammas(kernel3), can);
    det = "dim(d=2)=" + std::to_string(kernel2.size()) + " dim(d=3)=" + std::to_string(kernel3.size()) +
          " spans=" + std::to_string(spans);
    return kernel2.size() == 9 && kernel3.size() == 9 && spans;
  }});

  criteria.push_back({"No trace-free Einstein deformations", 0, [&](std::string& det) {
    auto iged = iged_basis(round, kernel2.empty() ? igsd_kernel(round, 2) : kernel2);
    det = "dim=" + std::to_string(iged.size());
    return iged.empty();
  }});

  criteria.push_back({"Integral identities on the kernel basis", 0, [&](std::string& det) {
    const auto& k = kernel2.empty() ? (kernel2 = igsd_kernel(round, 2)) : kernel2;
    int ok = 0;
    for (const auto& d : k) {
      auto r = integral_identities(round, d.gamma);
      if (r.curvature_chain() && r.gradient_equality() && r.ricci_identity()) ++ok;
    }
    det = std::to_string(ok) + "/" + std::to_string(k.size()) + " hold";
    return ok == 9;
  }});

  criteria.push_back({"Second-order obstruction", 5.0, [&](std::string& det) {
    const auto u = parse_polynomial("x1^2-x2^2"), w = parse_polynomial("x1^2-x3^2");
    const IntegralValue v = obstruction(u, w);
    const Rational oracle = Rational(-12) * moment_oracle(u * u * w);
    bool zeros = true;
    for (const char* s : {"x1*x2+x3*x4", "x1*x2-x3*x4"}) {
      const auto p = parse_polynomial(s);
      for (const auto& [name, b] : quadratic_eigenfunctions())
        if (!obstruction(p, b).is_zero()) zeros = false;
    }
    det = "value=" + to_string(v.coeff) + " pi^2 oracle=" + to_string(oracle) + " pi^2 zeros=" + std::to_string(zeros);
    return v.coeff == oracle && oracle == -1 && zeros;
  }});

  criteria.push_back({"Jet cross-check of the second variation", 120.0, [&](std::string& det) {
    const auto basis = quadratic_eigenfunctions();
    bool formulas = true;
    for (const char* s : {"x1*x2", "x1^2-x2^2"}) {
      JetSecondVariation jv(parse_polynomial(s));
      if (!jv.all_hold()) formulas = false;
    }
    std::vector<int> matched(basis.size(), 0);
    parallel_for(basis.size(), [&](std::size_t a) {
      JetSecondVariation jv(basis[a].second);
      for (const auto& [wn, w] : basis)
        if (jv.pairing(w).coeff == obstruction(basis[a].second, w).coeff) ++matched[a];
    });
    int total = 0;
    for (int m : matched) total += m;
    det = "formulas=" + std::to_string(formulas) + " pairings=" + std::to_string(total) + "/81";
    return formulas && total == 81;
  }});

  criteria.push_back({"Generalized Ricci flow on SU(2)", 60.0, [&](std::string& det) {
    FlowState fixed;
    const FlowRhs r = grf_rhs(fixed);
    const bool fixed_ok = r.dg.cwiseAbs().maxCoeff() == 0 && r.db.cwiseAbs().maxCoeff() == 0 &&
                          soliton_residual(fixed) == 0;
    FlowState s;
    s.g(0, 0) = 1.01;
    FlowOptions opt;
    opt.dt = 1e-3;
    opt.steps = 10000;
    opt.sample_every = 1;
    auto traj = run_flow(s, opt);
    std::size_t bad_res = 0, bad_lam = 0;
    double worst_lam = 0;
    for (std::size_t k = 1; k < traj.size(); ++k) {
      if (traj[k].residual > traj[k - 1].residual + 1e-13) ++bad_res;
      const double drop = traj[k].lambda - traj[k - 1].lambda;
      worst_lam = std::min(worst_lam, drop);
      if (drop < -1e-8) ++bad_lam;
    }
    FlowState b;
    b.g(0, 0) = 1.05;
    const double order = observed_order(b, 0.5, 10);
    char buf[200];
    std::snprintf(buf, sizeof buf, "fixed=%d steps=%zu residual_increases=%zu worst_lambda_step=%.2e order=%.3f",
                  fixed_ok, traj.size() - 1, bad_res, worst_lam, order);
    det = buf;
    return fixed_ok && traj.size() == 10001 && bad_res == 0 && bad_lam == 0 && order > 3.7 && order < 4.3;
  }});

  int failures = 0;
  for (std::size_t n = 0; n < criteria.size(); ++n) {
    const auto& c = criteria[n];
    std::string det;
    bool ok = false;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      ok = c.body(det);
    } catch (const std::exception& ex) {
      det = std::string("exception: ") + ex.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (ok && c.limit_s > 0 && secs > c.limit_s) {
      ok = false;
      det += " (over " + std::to_string(c.limit_s) + "s limit)";
    }
    if (!ok) ++failures;
    std::printf("%s %zu. %s (%.2fs) %s\n", ok ? "PASS" : "FAIL", n + 1, c.name.c_str(), secs, det.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
