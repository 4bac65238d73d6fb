#pragma once

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "grflab/integrate.hpp"
#include "grflab/variational.hpp"

namespace grflab {

using JetTensor = Tensor<JetScalar>;
using JetGeometry = Geometry<JetScalar>;

/// Round unit S^3 = SU(2) with H = 2 dV; Bismut-flat with Einstein constant 2.
inline PolyGeometry round_su2_geometry() {
  auto m = su2_lie_model();
  return PolyGeometry(m, model_metric<Polynomial>(m), volume_form(Polynomial(Rational(2))));
}

inline bool is_zero_tensor(const PolyTensor& t) {
  return std::all_of(t.data().begin(), t.data().end(), [](const Polynomial& p) { return p.is_zero(); });
}

inline PolyTensor times(const Polynomial& p, const PolyTensor& t) {
  return t.map([&](const Polynomial& c) { return Polynomial(p * c); });
}

/// a_i b_j.
inline PolyTensor outer(const PolyTensor& a, const PolyTensor& b) {
  PolyTensor out(a.dim(), 2);
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j) out(i, j) = a(i) * b(j);
  return out;
}

inline void require_bismut_flat(const PolyGeometry& geo) {
  if (!is_zero_tensor(geo.Rm_plus())) throw PreconditionFailed("background is not Bismut-flat");
}

/// mu with Rc = mu g and mu constant.
inline Rational einstein_constant(const PolyGeometry& geo) {
  const PolyTensor rc = geo.ricci();
  const Polynomial& g00 = geo.g()(0, 0);
  if (!g00.is_constant() || !rc(0, 0).is_constant()) throw PreconditionFailed("metric is not Einstein with constant factor");
  Rational mu = rc(0, 0).constant_term() / g00.constant_term();
  PolyTensor diff = rc - PolyTensor(geo.g()).scale(mu);
  if (!is_zero_tensor(diff)) throw PreconditionFailed("metric is not Einstein");
  return mu;
}

inline void require_eigenfunction(const PolyGeometry& geo, const Polynomial& u, const Rational& mu) {
  if (geo.laplacian(u) != u * Rational(-4 * mu)) throw NotEigenfunction("expected Delta u = -4 mu u");
}

// ---- deformations ----

struct Provenance {
  enum class Kind { parallel, canonical, kernel_vector };
  Kind kind = Kind::kernel_vector;
  int i = 0, j = 0;
  Polynomial u;
  std::size_t index = 0;

  std::string describe() const {
    switch (kind) {
      case Kind::parallel:
        return "parallel(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
      case Kind::canonical:
        return "canonical(" + u.to_string() + ")";
      case Kind::kernel_vector:
        break;
    }
    return "kernel-vector(" + std::to_string(index) + ")";
  }
};

/// gamma = h - K with h symmetric and K antisymmetric.
struct Deformation {
  PolyTensor gamma, h, K;
  Provenance provenance;

  static Deformation from_gamma(PolyTensor gamma, Provenance p) {
    Deformation d;
    d.h = sym_part(gamma);
    d.K = -antisym_part(gamma);
    d.gamma = std::move(gamma);
    d.provenance = std::move(p);
    return d;
  }
};

/// omega^L_i (x) omega^R_j in the left frame; indices 0..2.
inline Deformation parallel_from_invariant_forms(int i, int j) {
  if (i < 0 || i > 2 || j < 0 || j > 2) throw BadIndex("invariant form index must be 0, 1 or 2");
  PolyTensor t(3, 2);
  auto right = frame_field(j, Chirality::right);
  for (int b = 0; b < 3; ++b) {
    auto left = frame_field(b, Chirality::left);
    for (int c = 0; c < 4; ++c) t(i, b) += left[c] * right[c];
  }
  Provenance p;
  p.kind = Provenance::Kind::parallel;
  p.i = i;
  p.j = j;
  return Deformation::from_gamma(std::move(t), p);
}

inline std::vector<Deformation> parallel_deformations() {
  std::vector<Deformation> out;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out.push_back(parallel_from_invariant_forms(i, j));
  return out;
}

/// gamma = 2 mu u g + nabla^2 u - 1/2 d*(u H) for Delta u = -4 mu u.
inline Deformation canonical_igsd(const PolyGeometry& geo, const Polynomial& u) {
  const Rational mu = einstein_constant(geo);
  require_eigenfunction(geo, u, mu);
  PolyTensor gamma = times(u * Rational(2 * mu), geo.g());
  gamma.set_symmetry(Symmetry::none);
  gamma += geo.hessian(u);
  PolyTensor dstar = geo.codifferential(times(u, geo.H()));
  gamma -= dstar.scale(Rational(1, 2));
  gamma.set_symmetry(Symmetry::none);
  Provenance p;
  p.kind = Provenance::Kind::canonical;
  p.u = u;
  return Deformation::from_gamma(std::move(gamma), p);
}

inline std::vector<Deformation> canonical_deformations(const PolyGeometry& geo) {
  std::vector<Deformation> out;
  for (const auto& u : harmonic_basis(2)) out.push_back(canonical_igsd(geo, u));
  return out;
}

/// Exact basis of ker B intersected with ker div-bar on tensors of degree <= d (f = 0).
inline std::vector<Deformation> igsd_kernel(const PolyGeometry& geo, unsigned degree) {
  if (degree < 2) throw PreconditionFailed("igsd_kernel needs degree >= 2");
  TensorSpace two(degree, 2), one(degree, 1);
  const Polynomial f;
  RationalMatrix rows = map_matrix(two, two.size() + 2 * one.size(), [&](const PolyTensor& e) {
    RationalVector v = two.coordinates(operator_B(geo, e, f));
    RationalVector w = divergence_coordinates(geo, one, e, f);
    v.insert(v.end(), w.begin(), w.end());
    return v;
  });
  std::vector<Deformation> out;
  std::size_t k = 0;
  for (const auto& v : nullspace(rows, two.size())) {
    Provenance p;
    p.index = k++;
    out.push_back(Deformation::from_gamma(two.tensor(v), p));
  }
  return out;
}

/// Kernel vectors with tr_g h = 0; empty when no essential Einstein deformation exists.
inline std::vector<PolyTensor> iged_basis(const PolyGeometry& geo, const std::vector<Deformation>& kernel) {
  if (kernel.empty()) return {};
  unsigned degree = 0;
  for (const auto& d : kernel)
    for (const auto& c : d.gamma.data())
      if (!c.is_zero()) degree = std::max(degree, static_cast<unsigned>(c.degree()));
  MonomialIndex index(canonical_monomials(degree));
  RationalMatrix rows(index.size(), RationalVector(kernel.size(), Rational(0)));
  for (std::size_t a = 0; a < kernel.size(); ++a) {
    RationalVector t = index.coordinates(geo.trace(kernel[a].h));
    for (std::size_t r = 0; r < t.size(); ++r) rows[r][a] = t[r];
  }
  std::vector<PolyTensor> out;
  for (const auto& c : nullspace(rows, kernel.size())) {
    PolyTensor t(3, 2);
    for (std::size_t a = 0; a < kernel.size(); ++a)
      if (sgn(c[a]) != 0) t += PolyTensor(kernel[a].gamma).scale(c[a]);
    out.push_back(std::move(t));
  }
  return out;
}

/// Exact rank of a family of rank-2 polynomial tensors.
inline std::size_t span_rank(const std::vector<PolyTensor>& ts) {
  unsigned degree = 0;
  for (const auto& t : ts)
    for (const auto& c : t.data())
      if (!c.is_zero()) degree = std::max(degree, static_cast<unsigned>(c.degree()));
  TensorSpace space(degree, 2);
  RationalMatrix rows;
  for (const auto& t : ts) rows.push_back(space.coordinates(t));
  return rank(rows, space.size());
}

inline std::vector<PolyTensor> gammas(const std::vector<Deformation>& ds) {
  std::vector<PolyTensor> out;
  for (const auto& d : ds) out.push_back(d.gamma);
  return out;
}

inline bool same_span(const std::vector<PolyTensor>& a, const std::vector<PolyTensor>& b) {
  std::vector<PolyTensor> both = a;
  both.insert(both.end(), b.begin(), b.end());
  const std::size_t r = span_rank(both);
  return span_rank(a) == r && span_rank(b) == r;
}

// ---- four-way equivalence ----

inline bool in_igsd(const PolyGeometry& geo, const PolyTensor& gamma) {
  auto [a, b] = geo.twisted_divergence(gamma, Polynomial());
  return is_zero_tensor(a) && is_zero_tensor(b) && is_zero_tensor(operator_B(geo, gamma));
}

/// Residuals of nabla_m h_ij + 1/2 (H_mik K_jk + H_mjk K_ik) and nabla_m K_ij + 1/2 (H_mjk h_ik - H_mik h_jk).
inline std::pair<PolyTensor, PolyTensor> first_order_system(const PolyGeometry& geo, const PolyTensor& h,
                                                           const PolyTensor& K) {
  PolyTensor Hr = geo.raise_slot(geo.H(), 2);
  PolyTensor rh = geo.covariant(h), rk = geo.covariant(K);
  const int n = geo.dim();
  for (int m = 0; m < n; ++m)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Polynomial a, b;
        for (int k = 0; k < n; ++k) {
          a += Hr(m, i, k) * K(j, k) + Hr(m, j, k) * K(i, k);
          b += Hr(m, j, k) * h(i, k) - Hr(m, i, k) * h(j, k);
        }
        rh(m, i, j) += a * Rational(1, 2);
        rk(m, i, j) += b * Rational(1, 2);
      }
  return {std::move(rh), std::move(rk)};
}

struct EquivalenceReport {
  bool igsd = false;                 // B gamma = 0 and div-bar gamma = 0
  bool parallel = false;             // nabla-bar gamma = 0
  bool first_order = false;          // coupled h/K system
  bool second_variation_zero = false;
  Rational second_variation;

  bool consistent() const {
    return igsd == parallel && parallel == first_order && first_order == second_variation_zero;
  }
};

inline EquivalenceReport equivalence_check(const PolyGeometry& geo, const PolyTensor& gamma) {
  require_bismut_flat(geo);
  EquivalenceReport r;
  r.igsd = in_igsd(geo, gamma);
  r.parallel = is_zero_tensor(geo.mixed_connection_apply(gamma));
  auto [rh, rk] = first_order_system(geo, sym_part(gamma), -antisym_part(gamma));
  r.first_order = is_zero_tensor(rh) && is_zero_tensor(rk);
  r.second_variation = second_variation_form(geo, gamma, gamma);
  r.second_variation_zero = sgn(r.second_variation) == 0;
  return r;
}

// ---- integral identities ----

struct IntegralIdentityReport {
  IntegralValue curvature_h;   // (R(h), h)
  IntegralValue curvature_K;   // (R(K), K)
  IntegralValue div_h;         // |div h|^2
  IntegralValue grad_h;        // |nabla h|^2
  IntegralValue grad_K;        // |nabla K|^2
  IntegralValue ricci_h;       // R_ij h_jk h_ik
  IntegralValue ricci_K;       // R_ij K_jk K_ik

  bool curvature_chain() const {
    return curvature_h.coeff == -div_h.coeff / 2 && curvature_h.coeff == -curvature_K.coeff;
  }
  bool gradient_equality() const { return grad_h.coeff == grad_K.coeff; }
  bool ricci_identity() const { return ricci_h.coeff - div_h.coeff == ricci_K.coeff; }
  bool holds() const { return curvature_chain() && gradient_equality() && ricci_identity(); }
};

/// R^{ij} a_j^k b_ik.
inline Polynomial ricci_triple(const PolyGeometry& geo, const PolyTensor& a, const PolyTensor& b) {
  PolyTensor rc = geo.raise_slot(geo.raise_slot(geo.ricci(), 0), 1);
  PolyTensor ar = geo.raise_slot(a, 1);
  Polynomial s;
  const int n = geo.dim();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) s += rc(i, j) * ar(j, k) * b(i, k);
  return s;
}

inline IntegralIdentityReport integral_identities(const PolyGeometry& geo, const PolyTensor& gamma) {
  require_bismut_flat(geo);
  if (!in_igsd(geo, gamma)) throw PreconditionFailed("integral identities need a kernel deformation");
  const PolyTensor h = sym_part(gamma), K = -antisym_part(gamma);
  IntegralIdentityReport r;
  r.curvature_h = integrate_s3(geo.inner(geo.curvature_action(h, Conn::levi_civita), h));
  r.curvature_K = integrate_s3(geo.inner(geo.curvature_action(K, Conn::levi_civita), K));
  PolyTensor dh = geo.divergence_f(h, Polynomial());
  r.div_h = integrate_s3(geo.inner(dh, dh));
  PolyTensor nh = geo.covariant(h), nk = geo.covariant(K);
  r.grad_h = integrate_s3(geo.inner(nh, nh));
  r.grad_K = integrate_s3(geo.inner(nk, nk));
  r.ricci_h = integrate_s3(ricci_triple(geo, h, h));
  r.ricci_K = integrate_s3(ricci_triple(geo, K, K));
  return r;
}

// ---- second-order obstruction ----

/// -6 mu int u^2 w on the round S^3 (mu = 2).
inline IntegralValue obstruction(const Polynomial& u, const Polynomial& w) {
  const Rational mu = 2;
  const Polynomial target_u = u * Rational(-4 * mu), target_w = w * Rational(-4 * mu);
  if (laplacian_scalar(u) != target_u || laplacian_scalar(w) != target_w)
    throw NotEigenfunction("obstruction needs Delta u = -8u and Delta w = -8w");
  return Rational(-6 * mu) * integrate_s3(u * u * w);
}

struct ObstructionReport {
  Polynomial u;
  std::vector<std::pair<std::string, IntegralValue>> pairings;
  bool integrable_order2 = false;
};

inline ObstructionReport integrability_report(const Polynomial& u) {
  ObstructionReport r;
  r.u = u;
  auto basis = quadratic_eigenfunctions();
  r.pairings.resize(basis.size());
  parallel_for(basis.size(), [&](std::size_t k) { r.pairings[k] = {basis[k].first, obstruction(u, basis[k].second)}; });
  r.integrable_order2 = std::all_of(r.pairings.begin(), r.pairings.end(), [](const auto& p) { return p.second.is_zero(); });
  return r;
}

// ---- jet cross-check of the variation formulas ----

struct NamedCheck {
  std::string name;
  bool holds = false;
};

inline PolyTensor jet_part(const JetTensor& t, int order) {
  return t.map([order](const JetScalar& s) { return order == 0 ? s.c0 : (order == 1 ? s.c1 : s.c2); });
}

inline JetTensor jet_times(const JetScalar& s, const JetTensor& t) {
  return t.map([&](const JetScalar& c) { return JetScalar(s * c); });
}

/// Family g_t = (1 + t u) g, H_t = (1 + 2 t u) H around the round background, with the
/// minimizing potential expanded to second order.
class JetSecondVariation {
 public:
  explicit JetSecondVariation(const Polynomial& u)
      : u_(u), base_(round_su2_geometry()), mu_(einstein_constant(base_)), jet_(build(base_, u)) {
    require_eigenfunction(base_, u, mu_);
    check_first_order();
    solve_potential();
    check_second_order();
  }

  const Polynomial& u() const { return u_; }
  const Polynomial& f1() const { return f1_; }
  const Polynomial& f2() const { return f2_; }
  const Rational& lambda1() const { return lambda1_; }
  const Rational& lambda2() const { return lambda2_; }
  const std::vector<NamedCheck>& checks() const { return checks_; }
  const PolyTensor& bakry_emery_second() const { return rc_hf2_; }

  bool all_hold() const {
    return std::all_of(checks_.begin(), checks_.end(), [](const NamedCheck& c) { return c.holds; });
  }

  /// int < d^2/dt^2 Rc^{H,f}, w g - (1/2 mu) d*(w H) >.
  IntegralValue pairing(const Polynomial& w) const {
    require_eigenfunction(base_, w, mu_);
    PolyTensor test = times(w, base_.g());
    test.set_symmetry(Symmetry::none);
    PolyTensor dstar = base_.codifferential(times(w, base_.H()));
    test -= dstar.scale(1 / (2 * mu_));
    return integrate_s3(base_.inner(rc_hf2_, test));
  }

 private:
  static JetGeometry build(const PolyGeometry& base, const Polynomial& u) {
    const JetScalar a = JetScalar::linear(Polynomial(Rational(1)), u);
    const JetScalar b = JetScalar::linear(Polynomial(Rational(1)), u * Rational(2));
    auto lift_poly = [](const PolyTensor& t) { return t.map([](const Polynomial& p) { return JetScalar(p); }); };
    return JetGeometry(base.model(), jet_times(a, lift_poly(base.g())), jet_times(b, lift_poly(base.H())));
  }

  void add(std::string name, bool holds) { checks_.push_back({std::move(name), holds}); }

  void check_first_order() {
    const PolyGeometry& g = base_;
    const PolyTensor du = g.grad(u_), du_up = g.raise(du), hess = g.hessian(u_);
    const Polynomial lap = g.laplacian(u_), grad2 = g.inner(du, du);
    const int n = g.dim();

    PolyTensor dgamma(n, 3);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          Polynomial v;
          if (j == k) v += du(i);
          if (i == k) v += du(j);
          v -= du_up(k) * g.g()(i, j);
          dgamma(i, j, k) = v * Rational(1, 2);
        }
    add("connection first variation", jet_part(jet_.connection(Conn::levi_civita), 1) == dgamma);

    PolyTensor ric = times(lap * Rational(-1, 2), g.g()) - PolyTensor(hess).scale(Rational(1, 2));
    add("Ricci first variation", same(jet_part(jet_.ricci(), 1), ric));
    add("scalar curvature first variation",
        jet_.scalar_curvature().c1 == lap * Rational(-2) - u_ * g.scalar_curvature());

    PolyTensor hess_var = outer(du, du).scale(Rational(-1)) + times(grad2 * Rational(1, 2), g.g());
    add("Hessian operator first variation", same(jet_part(jet_.hessian(JetScalar(u_)), 1), hess_var));
    add("Laplacian operator first variation",
        jet_.laplacian(JetScalar(u_)).c1 == -(u_ * lap) + grad2 * Rational(1, 2));

    add("H^2 first variation", same(jet_part(jet_.H2(), 1), times(u_ * Rational(2), g.H2())));
    add("|H|^2 first variation", jet_.H_norm2().c1 == u_ * g.H_norm2());

    PolyTensor dstar = times(-u_, g.dstar_H()) + g.codifferential(times(u_ * Rational(2), g.H())) +
                       PolyTensor(g.interior(du, g.H())).scale(Rational(3, 2));
    add("d*H first variation", same(jet_part(jet_.dstar_H(), 1), dstar));

    // f_t = u + t u^2 as a probe family
    const Polynomial p0 = u_, p1 = u_ * u_;
    const JetScalar ft = JetScalar::linear(p0, p1);
    const PolyTensor dp0 = g.grad(p0), dp1 = g.grad(p1);
    const JetTensor dft = jet_.grad(ft);
    add("|grad f|^2 first variation",
        jet_.inner(dft, dft).c1 == -(u_ * g.inner(dp0, dp0)) + g.inner(dp0, dp1) * Rational(2));
    add("i_grad f H first variation", same(jet_part(jet_.interior(dft, jet_.H()), 1),
                                           times(u_, g.interior(dp0, g.H())) + g.interior(dp1, g.H())));
  }

  void solve_potential() {
    const PoissonSolver solver(base_, 2 * static_cast<unsigned>(std::max(1, u_.degree())));
    // R^{H,f_t} = lambda(t) order by order; f_0 is constant.
    const Polynomial s1 = jet_.generalized_scalar(JetScalar::linear(Polynomial(), Polynomial())).c1;
    lambda1_ = average(s1);
    f1_ = solver.solve((Polynomial(lambda1_) - s1) * Rational(1, 2));
    const Polynomial s2 = jet_.generalized_scalar(JetScalar(Polynomial(), f1_, Polynomial())).c2;
    lambda2_ = average(s2);
    f2_ = solver.solve((Polynomial(lambda2_) - s2) * Rational(1, 2));

    const PolyTensor du = base_.grad(u_);
    const Polynomial grad2 = base_.inner(du, du), u2 = u_ * u_;
    add("potential first derivative", f1_ == u_ * Rational(1, 2));
    add("lambda first derivative", sgn(lambda1_) == 0);
    add("lambda second derivative", sgn(lambda2_) == 0);
    add("potential second derivative",
        base_.laplacian(f2_) == u2 * Rational(7 * mu_) - grad2 * Rational(7, 4));
    add("scalar curvature second variation",
        jet_.scalar_curvature().c2 == u2 * Rational(-26 * mu_) + grad2 * Rational(3));
    add("|H|^2 second variation", jet_.H_norm2().c2 == u2 * Rational(-4) * base_.H_norm2());
  }

  void check_second_order() {
    const PolyGeometry& g = base_;
    const PolyTensor du = g.grad(u_), hess = g.hessian(u_), iu = g.interior(du, g.H());
    const PolyTensor df2 = g.grad(f2_), if2 = g.interior(df2, g.H()), hess_f2 = g.hessian(f2_);
    const Polynomial grad2 = g.inner(du, du), u2 = u_ * u_;
    const PolyTensor dudu = outer(du, du);
    const JetScalar ft(Polynomial(), f1_, f2_);

    PolyTensor ric = times(grad2 * Rational(1, 2) - u2 * Rational(4 * mu_), g.g()) +
                     PolyTensor(dudu).scale(Rational(3, 2)) + times(u_, hess);
    add("Ricci second variation", same(jet_part(jet_.ricci(), 2), ric));
    add("H^2 second variation", same(jet_part(jet_.H2(), 2), times(u2 * Rational(-8 * mu_), g.g())));

    PolyTensor hf = PolyTensor(dudu).scale(Rational(-1)) + times(grad2 * Rational(1, 2), g.g()) + hess_f2;
    add("Hessian of f second variation", same(jet_part(jet_.hessian(ft), 2), hf));
    add("d*H second variation", same(jet_part(jet_.dstar_H(), 2), times(u_ * Rational(4), iu)));
    add("i_grad f H second variation",
        same(jet_part(jet_.interior(jet_.grad(ft), jet_.H()), 2), times(u_, iu) + if2));

    rc_hf2_ = jet_part(jet_.bakry_emery(ft), 2);
    PolyTensor total = times(grad2 - u2 * Rational(2 * mu_), g.g()) + PolyTensor(dudu).scale(Rational(1, 2)) +
                       times(u_, hess) + hess_f2;
    total -= times(u_ * Rational(5, 2), iu) + PolyTensor(if2).scale(Rational(1, 2));
    add("Bakry-Emery second variation", same(rc_hf2_, total));
  }

  static bool same(const PolyTensor& a, const PolyTensor& b) { return is_zero_tensor(a - b); }

  Polynomial u_;
  PolyGeometry base_;
  Rational mu_;
  JetGeometry jet_;
  Polynomial f1_, f2_;
  Rational lambda1_, lambda2_;
  PolyTensor rc_hf2_;
  std::vector<NamedCheck> checks_;
};

struct JetCheckReport {
  std::vector<NamedCheck> checks;
  IntegralValue pairing, expected;

  bool formulas_hold() const {
    return std::all_of(checks.begin(), checks.end(), [](const NamedCheck& c) { return c.holds; });
  }
  /// Pairing minus the closed-form obstruction, in units of pi^2.
  Rational residual() const { return pairing.coeff - expected.coeff; }
};

inline JetCheckReport jet_second_variation_check(const Polynomial& u, const Polynomial& w) {
  JetSecondVariation jv(u);
  return {jv.checks(), jv.pairing(w), obstruction(u, w)};
}

}  // namespace grflab
