#pragma once

#include <utility>
#include <vector>

#include "grflab/lie_frame.hpp"
#include "grflab/scalar.hpp"
#include "grflab/tensor.hpp"

namespace grflab {

/// Which connection differentiates a tensor slot.
enum class Conn { levi_civita, plus, minus };

template <class S>
using Pair = std::pair<Tensor<S>, Tensor<S>>;

/// Everything derived from an invariant frame: connections and curvature of
/// (g, H) with components in S. Indices are frame indices 0..n-1; a connection
/// tensor stores Gamma(i, j, k) = Gamma^k_{ij}, i.e. nabla_{e_i} e_j = Gamma^k_{ij} e_k.
template <class S>
class Geometry {
 public:
  using T = Tensor<S>;
  using Traits = ScalarTraits<S>;

  Geometry(const LieGroupModel& model, T g, T H) : model_(model), n_(model.n), g_(std::move(g)), H_(std::move(H)) {
    if (g_.rank() != 2 || g_.dim() != n_) throw BadRank("metric must be a rank-2 tensor on the model");
    if (H_.rank() != 3 || H_.dim() != n_) throw BadRank("H must be a rank-3 tensor on the model");
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        if (!(g_(i, j) == g_(j, i))) throw PreconditionFailed("metric is not symmetric");
    H_.set_symmetry(Symmetry::antisymmetric);
    if (!symmetry_holds(H_)) throw PreconditionFailed("H is not totally antisymmetric");
    g_.set_symmetry(Symmetry::symmetric);
    invert_metric();
    build_connections();
    rm_ = riemann(Conn::levi_civita);
    rm_plus_ = riemann(Conn::plus);
  }

  int dim() const { return n_; }
  const LieGroupModel& model() const { return model_; }
  const T& g() const { return g_; }
  const T& ginv() const { return gi_; }
  const T& H() const { return H_; }
  const T& connection(Conn c) const {
    return c == Conn::levi_civita ? lc_ : (c == Conn::plus ? plus_ : minus_);
  }
  const T& Rm() const { return rm_; }
  const T& Rm_plus() const { return rm_plus_; }
  const S& metric_determinant() const { return det_; }

  static S mul(const S& a, const S& b) { return S(a * b); }

  /// Frame derivative; constant scalars differentiate to zero on any model.
  S d(const S& s, int i) const {
    if (Traits::is_constant(s)) return S{};
    if (!model_.sphere_frame) throw PreconditionFailed("non-constant coefficients need the S^3 frame");
    return Traits::derive(s, i);
  }

  // ---- index gymnastics ----

  T raise(const T& covector) const {
    require_rank(covector, 1);
    T out(n_, 1);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        if (!Traits::is_zero(gi_(i, j))) out(i) += mul(gi_(i, j), covector(j));
    return out;
  }

  /// Full contraction <a, b> with the inverse metric, any rank.
  S inner(const T& a, const T& b) const {
    if (a.rank() != b.rank() || a.dim() != b.dim()) throw BadRank("inner product of mismatched tensors");
    T raised = a;
    for (int slot = 0; slot < a.rank(); ++slot) raised = raise_slot(raised, slot);
    S s{};
    for (std::size_t f = 0; f < a.size(); ++f)
      if (!Traits::is_zero(raised.data()[f]) && !Traits::is_zero(b.data()[f])) s += mul(raised.data()[f], b.data()[f]);
    return s;
  }

  /// Raises one slot: out_{..i..} = g^{ij} t_{..j..} (stored in the same position).
  T raise_slot(const T& t, int slot) const {
    if (is_identity_) return t;
    T out(t.dim(), t.rank(), Symmetry::none);
    for (std::size_t f = 0; f < t.size(); ++f) {
      if (Traits::is_zero(t.data()[f])) continue;
      auto idx = t.index_of(f);
      int j = idx[slot];
      for (int i = 0; i < n_; ++i) {
        if (Traits::is_zero(gi_(i, j))) continue;
        idx[slot] = i;
        std::size_t g = 0;
        for (int v : idx) g = g * n_ + v;
        out.data()[g] += mul(gi_(i, j), t.data()[f]);
      }
    }
    return out;
  }

  S trace(const T& t) const {
    require_rank(t, 2);
    S s{};
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        if (!Traits::is_zero(gi_(i, j))) s += mul(gi_(i, j), t(i, j));
    return s;
  }

  /// Contracts slot a of t with slot b of t (a < b) using g^{-1}; result drops both slots.
  T contract_slots(const T& t, int a, int b) const {
    if (a >= b || b >= t.rank()) throw BadRank("invalid contraction slots");
    T out(n_, t.rank() - 2);
    for (std::size_t f = 0; f < t.size(); ++f) {
      if (Traits::is_zero(t.data()[f])) continue;
      auto idx = t.index_of(f);
      const S& w = gi_(idx[a], idx[b]);
      if (Traits::is_zero(w)) continue;
      std::size_t g = 0;
      for (int s = 0; s < t.rank(); ++s)
        if (s != a && s != b) g = g * n_ + idx[s];
      out.data()[g] += mul(w, t.data()[f]);
    }
    return out;
  }

  // ---- derivatives ----

  T grad(const S& f) const {
    T out(n_, 1);
    for (int i = 0; i < n_; ++i) out(i) = d(f, i);
    return out;
  }

  /// (D_m t)_{i1..ir} with the given connection on each slot; derivative index first.
  T covariant(const T& t, const std::vector<Conn>& slots) const {
    if (static_cast<int>(slots.size()) != t.rank()) throw BadRank("one connection per slot required");
    if (t.rank() >= 4) throw BadRank("covariant derivative of rank-4 tensors is not supported");
    T out(n_, t.rank() + 1);
    const std::size_t block = t.size();
    for (int m = 0; m < n_; ++m) {
      for (std::size_t f = 0; f < block; ++f) {
        S v = d(t.data()[f], m);
        auto idx = t.index_of(f);
        for (int s = 0; s < t.rank(); ++s) {
          const T& G = connection(slots[s]);
          const int is = idx[s];
          auto jdx = idx;
          for (int a = 0; a < n_; ++a) {
            const S& gam = G(m, is, a);
            if (Traits::is_zero(gam)) continue;
            jdx[s] = a;
            std::size_t g = 0;
            for (int q : jdx) g = g * n_ + q;
            if (Traits::is_zero(t.data()[g])) continue;
            v -= mul(gam, t.data()[g]);
          }
        }
        out.data()[m * block + f] = std::move(v);
      }
    }
    return out;
  }
  T covariant(const T& t, Conn c = Conn::levi_civita) const {
    return covariant(t, std::vector<Conn>(t.rank(), c));
  }

  /// (nabla^2 f)_{ij} = E_i E_j f - Gamma^k_{ij} E_k f for the chosen connection.
  T hessian(const S& f, Conn c = Conn::levi_civita) const {
    T df = grad(f);
    T out = covariant(df, c);
    out.set_symmetry(c == Conn::levi_civita ? Symmetry::symmetric : Symmetry::none);
    return out;
  }

  S laplacian(const S& f) const { return trace(hessian(f)); }

  /// Delta_f u = Delta u - <grad f, grad u>.
  S laplacian_f(const S& u, const S& f) const {
    S s = laplacian(u);
    if (!Traits::is_constant(f)) s -= inner(grad(f), grad(u));
    return s;
  }

  /// f-divergence on the first slot: g^{mn} nabla_n t_{m..} - g^{mn} f_n t_{m..}.
  T divergence_f(const T& t, const S& f) const {
    if (t.rank() < 1) throw BadRank("divergence needs rank >= 1");
    T dt = covariant(t);
    T out = contract_slots(dt, 0, 1);
    if (!Traits::is_constant(f)) out -= interior(grad(f), t);
    return out;
  }

  /// Interior product with the vector dual to a covector: g^{mn} x_n t_{m..}.
  T interior(const T& covector, const T& t) const {
    require_rank(covector, 1);
    T x = raise(covector);
    T out(n_, t.rank() - 1);
    for (std::size_t f = 0; f < t.size(); ++f) {
      if (Traits::is_zero(t.data()[f])) continue;
      auto idx = t.index_of(f);
      if (Traits::is_zero(x(idx[0]))) continue;
      std::size_t g = 0;
      for (int s = 1; s < t.rank(); ++s) g = g * n_ + idx[s];
      out.data()[g] += mul(x(idx[0]), t.data()[f]);
    }
    return out;
  }

  /// d*_f K = -div_f K on forms; f constant gives the plain codifferential.
  T codifferential(const T& form, const S& f = S{}) const { return -divergence_f(form, f); }

  /// Exterior derivative of 0-, 1- and 2-forms in the frame (bracket terms from c).
  T exterior_derivative(const T& form) const {
    if (form.rank() == 0) return grad(form());
    if (form.rank() == 1) {
      T out(n_, 2, Symmetry::antisymmetric);
      for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) {
          S v = d(form(j), i) - d(form(i), j);
          for (int l = 0; l < n_; ++l) v -= scaled(form(l), model_.C(l, i, j));
          out(i, j) = std::move(v);
        }
      return out;
    }
    if (form.rank() == 2) {
      T out(n_, 3, Symmetry::antisymmetric);
      auto Kb = [&](int i, int j, int k) {  // K([e_i, e_j], e_k)
        S v{};
        for (int l = 0; l < n_; ++l)
          if (sgn(model_.C(l, i, j)) != 0) v += scaled(form(l, k), model_.C(l, i, j));
        return v;
      };
      for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j)
          for (int k = 0; k < n_; ++k)
            out(i, j, k) = d(form(j, k), i) - d(form(i, k), j) + d(form(i, j), k) - Kb(i, j, k) + Kb(i, k, j) -
                           Kb(j, k, i);
      return out;
    }
    throw BadRank("exterior derivative implemented for forms of degree <= 2");
  }

  // ---- curvature ----

  /// Rm(e_i, e_j, e_k, e_l) = <R(e_i, e_j) e_k, e_l> for the chosen connection.
  T riemann(Conn c) const {
    const T& G = connection(c);
    T Rup(n_, 4);  // Rup(i,j,k,l) = R^l_{ijk}
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        for (int k = 0; k < n_; ++k)
          for (int l = 0; l < n_; ++l) {
            S v = d(G(j, k, l), i) - d(G(i, k, l), j);
            for (int m = 0; m < n_; ++m) {
              if (!Traits::is_zero(G(j, k, m)) && !Traits::is_zero(G(i, m, l))) v += mul(G(j, k, m), G(i, m, l));
              if (!Traits::is_zero(G(i, k, m)) && !Traits::is_zero(G(j, m, l))) v -= mul(G(i, k, m), G(j, m, l));
              if (sgn(model_.C(m, i, j)) != 0) v -= scaled(G(m, k, l), model_.C(m, i, j));
            }
            Rup(i, j, k, l) = std::move(v);
          }
    T out(n_, 4);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        for (int k = 0; k < n_; ++k)
          for (int l = 0; l < n_; ++l) {
            S v{};
            for (int m = 0; m < n_; ++m)
              if (!Traits::is_zero(g_(m, l))) v += mul(Rup(i, j, k, m), g_(m, l));
            out(i, j, k, l) = std::move(v);
          }
    return out;
  }

  /// Rc(Y, Z) = tr(X -> R(X, Y) Z), i.e. Rc_{jk} = g^{il} Rm_{ijkl}.
  T ricci_from(const T& rm) const {
    return contract_slots(rm, 0, 3);
  }
  T ricci(Conn c = Conn::levi_civita) const { return ricci_from(c == Conn::plus ? rm_plus_ : (c == Conn::levi_civita ? rm_ : riemann(c))); }
  S scalar_curvature(Conn c = Conn::levi_civita) const { return trace(ricci(c)); }

  /// H^2_{ij} = H_{ipq} H_j^{pq}.
  T H2() const {
    T raisedH = raise_slot(raise_slot(H_, 1), 2);
    T out(n_, 2, Symmetry::symmetric);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) {
        S v{};
        for (int p = 0; p < n_; ++p)
          for (int q = 0; q < n_; ++q)
            if (!Traits::is_zero(H_(i, p, q)) && !Traits::is_zero(raisedH(j, p, q))) v += mul(H_(i, p, q), raisedH(j, p, q));
        out(i, j) = std::move(v);
      }
    return out;
  }
  /// |H|^2 as a full contraction (no 1/3! factor).
  S H_norm2() const { return trace(H2()); }
  T dstar_H(const S& f = S{}) const { return codifferential(H_, f); }

  /// <H(X, W), H(Y, Z)> as a tensor Q(x, y, z, w).
  T HH() const {
    T out(n_, 4);
    T raisedH = raise_slot(H_, 2);
    for (int x = 0; x < n_; ++x)
      for (int y = 0; y < n_; ++y)
        for (int z = 0; z < n_; ++z)
          for (int w = 0; w < n_; ++w) {
            S v{};
            for (int a = 0; a < n_; ++a)
              if (!Traits::is_zero(raisedH(x, w, a)) && !Traits::is_zero(H_(y, z, a))) v += mul(raisedH(x, w, a), H_(y, z, a));
            out(x, y, z, w) = std::move(v);
          }
    return out;
  }

  /// Rm + 1/2 nabla_X H(Y,Z,W) - 1/2 nabla_Y H(X,Z,W) - 1/4 <H(X,W),H(Y,Z)> + 1/4 <H(Y,W),H(X,Z)>.
  T rm_plus_formula() const {
    T dH = covariant(H_);
    T hh = HH();
    T out(n_, 4);
    for (int x = 0; x < n_; ++x)
      for (int y = 0; y < n_; ++y)
        for (int z = 0; z < n_; ++z)
          for (int w = 0; w < n_; ++w)
            out(x, y, z, w) = rm_(x, y, z, w) + scaled(S(dH(x, y, z, w) - dH(y, x, z, w)), Rational(1, 2)) +
                              scaled(S(hh(y, x, z, w) - hh(x, y, z, w)), Rational(1, 4));
    return out;
  }

  /// Rc - H^2/4 - d*H/2.
  T rc_plus_formula() const {
    T out = ricci() - T(H2()).scale(Rational(1, 4)) - T(dstar_H()).scale(Rational(1, 2));
    return out;
  }

  /// Rc^{H,f} = Rc - H^2/4 + c nabla^2 f - 1/2 (d*H + i_{grad f} H).
  T bakry_emery(const S& f, const Rational& hessian_coeff = 1) const {
    T out = ricci() - T(H2()).scale(Rational(1, 4)) - T(dstar_H()).scale(Rational(1, 2));
    if (!Traits::is_constant(f)) {
      out += T(hessian(f)).scale(hessian_coeff);
      out -= T(interior(grad(f), H_)).scale(Rational(1, 2));
    }
    out.set_symmetry(Symmetry::none);
    return out;
  }

  /// R^{H,f} = R - |H|^2/12 + 2 Delta f - |grad f|^2.
  S generalized_scalar(const S& f) const {
    S s = scalar_curvature() - scaled(H_norm2(), Rational(1, 12));
    if (!Traits::is_constant(f)) {
      T df = grad(f);
      s += scaled(laplacian(f), Rational(2)) - inner(df, df);
    }
    return s;
  }

  // ---- mixed Bismut calculus on 2-tensors ----

  /// nabla-bar_m gamma_{ij}: nabla^- on the first slot, nabla^+ on the second.
  T mixed_connection_apply(const T& gamma) const {
    require_rank(gamma, 2);
    return covariant(gamma, {Conn::minus, Conn::plus});
  }

  /// (g^{mn} nabla-bar_n gamma_{ml} - f^m gamma_{ml}, g^{mn} nabla-bar_n gamma_{lm} - f^m gamma_{lm}).
  Pair<S> twisted_divergence(const T& gamma, const S& f) const {
    require_rank(gamma, 2);
    T dg = mixed_connection_apply(gamma);
    T first = contract_slots(dg, 0, 1);
    T second = contract_slots(dg, 0, 2);
    if (!Traits::is_constant(f)) {
      T df = grad(f);
      first -= interior(df, gamma);
      second -= interior(df, transpose(gamma));
    }
    return {std::move(first), std::move(second)};
  }

  /// div_f of a 1-form.
  S divergence_1form(const T& u, const S& f) const { return divergence_f(u, f)(); }

  /// (div_f u + div_f v) / 2.
  S pair_divergence(const Pair<S>& uv, const S& f) const {
    return scaled(S(divergence_1form(uv.first, f) + divergence_1form(uv.second, f)), Rational(1, 2));
  }

  /// Formal adjoint of the twisted divergence: -(nabla^+_i u)_j - (nabla^-_j v)_i.
  T divergence_adjoint(const Pair<S>& uv) const {
    require_rank(uv.first, 1);
    require_rank(uv.second, 1);
    T du = covariant(uv.first, Conn::plus);
    T dv = covariant(uv.second, Conn::minus);
    T out(n_, 2);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) out(i, j) = -du(i, j) - dv(j, i);
    return out;
  }

  /// -nabla-bar^{*f} nabla-bar gamma computed from the definition.
  T mixed_laplacian(const T& gamma, const S& f) const {
    T dg = mixed_connection_apply(gamma);
    T ddg = covariant(dg, {Conn::levi_civita, Conn::minus, Conn::plus});
    T out = contract_slots(ddg, 0, 1);
    if (!Traits::is_constant(f)) out -= interior(grad(f), dg);
    return out;
  }

  /// Rough f-Laplacian g^{mn} nabla_n nabla_m t - nabla_{grad f} t.
  T rough_laplacian(const T& t, const S& f) const {
    T dt = covariant(t);
    T out = contract_slots(covariant(dt), 0, 1);
    if (!Traits::is_constant(f)) out -= interior(grad(f), dt);
    return out;
  }

  /// Closed-form mixed Laplacian in terms of the Levi-Civita calculus; equals
  /// mixed_laplacian when d*_f H = 0.
  T mixed_laplacian_formula(const T& gamma, const S& f) const {
    require_rank(gamma, 2);
    T out = rough_laplacian(gamma, f);
    T dg = covariant(gamma);                       // dg(m, i, j) = nabla_m gamma_{ij}
    T Hr = raise_slot(raise_slot(H_, 0), 2);       // H^{m}{}_{j}{}^{k}
    T h2 = H2();
    T gr = raise_slot(gamma, 0);                   // gamma^{p}{}_{j}
    T gr1 = raise_slot(gamma, 1);                  // gamma_{i}{}^{p}
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) {
        S v{};
        for (int m = 0; m < n_; ++m)
          for (int k = 0; k < n_; ++k) {
            // - H_{mjk} nabla_m gamma_{ik} + H_{mik} nabla_m gamma_{kj}
            if (!Traits::is_zero(Hr(m, j, k))) v -= mul(Hr(m, j, k), dg(m, i, k));
            if (!Traits::is_zero(Hr(m, i, k))) v += mul(Hr(m, i, k), dg(m, k, j));
          }
        for (int l = 0; l < n_; ++l) {
          // -1/4 (H^2_{jl} gamma_{il} + H^2_{il} gamma_{lj})
          v -= scaled(S(mul(h2(j, l), gr1(i, l)) + mul(h2(i, l), gr(l, j))), Rational(1, 4));
        }
        out(i, j) += v;
      }
    out += HH_gamma_term(gamma);
    return out;
  }

  /// Bismut curvature action R+(gamma)_{jk} = Rm+_{ijkl} gamma^{il}.
  T curvature_action(const T& gamma, Conn c = Conn::plus) const {
    const T& rm = c == Conn::plus ? rm_plus_ : rm_;
    T gr = raise_slot(raise_slot(gamma, 0), 1);
    T out(n_, 2);
    for (int j = 0; j < n_; ++j)
      for (int k = 0; k < n_; ++k) {
        S v{};
        for (int i = 0; i < n_; ++i)
          for (int l = 0; l < n_; ++l)
            if (!Traits::is_zero(rm(i, j, k, l)) && !Traits::is_zero(gr(i, l))) v += mul(rm(i, j, k, l), gr(i, l));
        out(j, k) = std::move(v);
      }
    return out;
  }

  /// Delta^+_f u_l = Delta_f u_l + H_{mkl} nabla^m u^k - 1/4 H^2_{jl} u^j (sign = +1), and the
  /// minus version with the H-gradient term negated.
  T bismut_laplacian_1form(const T& u, const S& f, int sign) const {
    require_rank(u, 1);
    T out = rough_laplacian(u, f);
    T du = covariant(u);
    T dur = raise_slot(raise_slot(du, 0), 1);
    T ur = raise(u);
    T h2 = H2();
    for (int l = 0; l < n_; ++l) {
      S v{};
      for (int m = 0; m < n_; ++m)
        for (int k = 0; k < n_; ++k)
          if (!Traits::is_zero(H_(m, k, l)) && !Traits::is_zero(dur(m, k))) v += mul(H_(m, k, l), dur(m, k));
      if (sign < 0) v = -v;
      for (int j = 0; j < n_; ++j) v -= scaled(mul(h2(j, l), ur(j)), Rational(1, 4));
      out(l) += v;
    }
    return out;
  }

 private:
  LieGroupModel model_;
  int n_;
  T g_, gi_, H_;
  S det_;
  T lc_, plus_, minus_;
  T rm_, rm_plus_;
  bool is_identity_ = false;
  static void require_rank(const T& t, int r) {
    if (t.rank() != r) throw BadRank("expected a tensor of rank " + std::to_string(r));
  }

  // -1/2 H_{mkj} H_{mli} gamma^{lk}, all indices raised with g^{-1}.
  T HH_gamma_term(const T& gamma) const {
    T gr = raise_slot(raise_slot(gamma, 0), 1);  // gamma^{lk}
    T Hm = raise_slot(H_, 0);                    // H^{m}{}_{kj}
    T out(n_, 2);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) {
        S v{};
        for (int m = 0; m < n_; ++m)
          for (int k = 0; k < n_; ++k)
            for (int l = 0; l < n_; ++l) {
              if (Traits::is_zero(Hm(m, k, j)) || Traits::is_zero(H_(m, l, i)) || Traits::is_zero(gr(l, k))) continue;
              v += mul(Hm(m, k, j), mul(H_(m, l, i), gr(l, k)));
            }
        out(i, j) = scaled(v, Rational(-1, 2));
      }
    return out;
  }

  static S determinant(const std::vector<std::vector<S>>& a) {
    const std::size_t n = a.size();
    if (n == 1) return a[0][0];
    if (n == 2) return mul(a[0][0], a[1][1]) - mul(a[0][1], a[1][0]);
    S det{};
    for (std::size_t c = 0; c < n; ++c) {
      if (Traits::is_zero(a[0][c])) continue;
      std::vector<std::vector<S>> minor(n - 1, std::vector<S>(n - 1));
      for (std::size_t r = 1; r < n; ++r)
        for (std::size_t k = 0, kk = 0; k < n; ++k)
          if (k != c) minor[r - 1][kk++] = a[r][k];
      S term = mul(a[0][c], determinant(minor));
      if (c % 2) det -= term;
      else det += term;
    }
    return det;
  }

  void invert_metric() {
    std::vector<std::vector<S>> a(n_, std::vector<S>(n_));
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) a[i][j] = g_(i, j);
    det_ = determinant(a);
    S inv = Traits::inverse(det_);
    gi_ = T(n_, 2, Symmetry::symmetric);
    is_identity_ = true;
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) {
        S cof;
        if (n_ == 1) {
          cof = Traits::from_rational(1);
        } else {
          std::vector<std::vector<S>> minor(n_ - 1, std::vector<S>(n_ - 1));
          for (int r = 0, rr = 0; r < n_; ++r) {
            if (r == j) continue;
            for (int c = 0, cc = 0; c < n_; ++c)
              if (c != i) minor[rr][cc++] = a[r][c];
            ++rr;
          }
          cof = determinant(minor);
          if ((i + j) % 2) cof = -cof;
        }
        gi_(i, j) = mul(cof, inv);
        if (!(gi_(i, j) == Traits::from_rational(i == j ? 1 : 0))) is_identity_ = false;
      }
  }

  void build_connections() {
    // Koszul: Gamma_{ijk} = <nabla_i e_j, e_k>
    T low(n_, 3);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        for (int k = 0; k < n_; ++k) {
          S v = d(g_(j, k), i) + d(g_(i, k), j) - d(g_(i, j), k);
          for (int l = 0; l < n_; ++l) {
            if (sgn(model_.C(l, i, j)) != 0) v += scaled(g_(l, k), model_.C(l, i, j));
            if (sgn(model_.C(l, i, k)) != 0) v -= scaled(g_(l, j), model_.C(l, i, k));
            if (sgn(model_.C(l, j, k)) != 0) v -= scaled(g_(l, i), model_.C(l, j, k));
          }
          low(i, j, k) = scaled(v, Rational(1, 2));
        }
    auto raise_last = [&](const T& t) {
      T out(n_, 3);
      for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j)
          for (int k = 0; k < n_; ++k) {
            S v{};
            for (int l = 0; l < n_; ++l)
              if (!Traits::is_zero(gi_(k, l)) && !Traits::is_zero(t(i, j, l))) v += mul(gi_(k, l), t(i, j, l));
            out(i, j, k) = std::move(v);
          }
      return out;
    };
    T halfH = H_;
    halfH.scale(Rational(1, 2));
    lc_ = raise_last(low);
    plus_ = raise_last(low + halfH);
    minus_ = raise_last(low - halfH);
  }
};

/// Converts an exact tensor to another scalar type.
template <class S>
Tensor<S> lift(const Tensor<Rational>& t) {
  return t.map([](const Rational& q) { return ScalarTraits<S>::from_rational(q); });
}

/// The model's invariant metric g0 as a tensor.
template <class S = Rational>
Tensor<S> model_metric(const LieGroupModel& m) {
  Tensor<S> g(m.n, 2, Symmetry::symmetric);
  for (int i = 0; i < m.n; ++i)
    for (int j = 0; j < m.n; ++j) g(i, j) = ScalarTraits<S>::from_rational(m.G(i, j));
  return g;
}

/// s * e^0 ^ e^1 ^ e^2 in three dimensions.
template <class S>
Tensor<S> volume_form(const S& s) {
  Tensor<S> h(3, 3, Symmetry::antisymmetric);
  const int perm[6][3] = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}, {1, 0, 2}, {0, 2, 1}, {2, 1, 0}};
  for (int p = 0; p < 6; ++p) h(perm[p][0], perm[p][1], perm[p][2]) = p < 3 ? s : S(-s);
  return h;
}

/// Bi-invariant metric and torsion of the model.
template <class S>
Geometry<S> bi_invariant_geometry(const LieGroupModel& m) {
  return Geometry<S>(m, model_metric<S>(m), lift<S>(torsion_form(m)));
}

}  // namespace grflab
