#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "grflab/geometry.hpp"
#include "grflab/integrate.hpp"
#include "grflab/linalg.hpp"
#include "grflab/parallel.hpp"
#include "grflab/tensor_space.hpp"

namespace grflab {

using PolyTensor = Tensor<Polynomial>;
using PolyGeometry = Geometry<Polynomial>;

/// Average over S^3 of a polynomial; invariant metrics have constant volume density,
/// so this is also the average against e^{-f} dV_g for constant f.
inline Rational average(const Polynomial& p) { return sphere_mean(p); }

inline Rational average_pairing(const PolyGeometry& geo, const PolyTensor& a, const PolyTensor& b) {
  return average(geo.inner(a, b));
}

inline void require_constant_f(const Polynomial& f, const char* what) {
  if (!f.is_constant()) throw PreconditionFailed(std::string(what) + " requires a constant potential f");
}

// ---- lambda functional ----

struct LambdaResult {
  double lambda = 0;
  std::vector<double> eigenvalues;   // ascending
  std::vector<Polynomial> basis;     // harmonic basis of degree <= d
  std::vector<double> ground_state;  // coefficients, normalized to int psi^2 dV_g = 1
  bool f_constant = false;
  double f_value = 0;      // f = -2 log psi when the ground state is constant
  double f_variation = 0;  // largest non-constant coefficient of the ground state
  double residual = 0;     // max |(A - lambda M) c|
  std::vector<std::string> warnings;
};

/// Lowest eigenvalue of -4 Delta + R - |H|^2/12 on span(harmonic_basis(0..d)).
/// The matrices are assembled exactly; only the eigen-solve is floating point.
inline LambdaResult lambda_min(const PolyGeometry& geo, unsigned degree) {
  LambdaResult out;
  for (unsigned k = 0; k <= degree; ++k)
    for (auto& h : harmonic_basis(k)) out.basis.push_back(std::move(h));
  const std::size_t n = out.basis.size();
  Polynomial potential = geo.scalar_curvature() - geo.H_norm2() * Rational(1, 12);
  if (!potential.is_constant())
    out.warnings.push_back("potential is not constant; the ground state is a Galerkin approximation of degree " +
                           std::to_string(degree));

  std::vector<PolyTensor> grads(n);
  for (std::size_t a = 0; a < n; ++a) grads[a] = geo.grad(out.basis[a]);
  RationalMatrix A(n, RationalVector(n)), M(n, RationalVector(n));
  parallel_for(n, [&](std::size_t a) {
    for (std::size_t b = a; b < n; ++b) {
      A[a][b] = integrate_s3(Rational(4) * geo.inner(grads[a], grads[b]) + potential * out.basis[a] * out.basis[b]).coeff;
      M[a][b] = integrate_s3(out.basis[a] * out.basis[b]).coeff;
    }
  });
  Eigen::MatrixXd Ad(n, n), Md(n, n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a; b < n; ++b) {
      Ad(a, b) = Ad(b, a) = A[a][b].get_d();
      Md(a, b) = Md(b, a) = M[a][b].get_d();
    }
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(Ad, Md);
  if (es.info() != Eigen::Success) throw SolverError("generalized eigen-solve failed");
  out.lambda = es.eigenvalues()(0);
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) out.eigenvalues.push_back(es.eigenvalues()(i));
  Eigen::VectorXd c = es.eigenvectors().col(0);  // c^T M c = 1 in units of pi^2
  if (c(0) < 0) c = -c;
  out.residual = (Ad * c - out.lambda * Md * c).cwiseAbs().maxCoeff();

  const double det = to_double(geo.metric_determinant().constant_term());
  const double scale = std::sqrt(std::numbers::pi * std::numbers::pi * std::sqrt(det));
  for (Eigen::Index i = 0; i < c.size(); ++i) out.ground_state.push_back(c(i) / scale);
  for (Eigen::Index i = 1; i < c.size(); ++i) out.f_variation = std::max(out.f_variation, std::abs(out.ground_state[i]));
  out.f_constant = out.f_variation < 1e-10;
  out.f_value = -2 * std::log(out.ground_state[0]);  // basis[0] = 1
  return out;
}

/// -int <gamma, Rc^{H,f}> e^{-f} dV for constant f, i.e. minus the average pairing.
inline Rational first_variation(const PolyGeometry& geo, const PolyTensor& gamma, const Polynomial& f = {},
                                const Rational& hessian_coeff = 1) {
  require_constant_f(f, "first_variation");
  return -average_pairing(geo, gamma, geo.bakry_emery(f, hessian_coeff));
}

// ---- linearized operators ----

/// Solves Delta U = s with mean-zero U on polynomials of degree <= d (exact).
class PoissonSolver {
 public:
  PoissonSolver(const PolyGeometry& geo, unsigned degree) : index_(canonical_monomials(degree)) {
    const std::size_t n = index_.size();
    RationalMatrix rows(n + 1, RationalVector(n, Rational(0)));
    for (std::size_t j = 0; j < n; ++j) {
      Polynomial m = Polynomial::from_canonical_terms({{index_.monomials()[j], Rational(1)}});
      RationalVector col = index_.coordinates(geo.laplacian(m));
      for (std::size_t i = 0; i < n; ++i) rows[i][j] = col[i];
      rows[n][j] = average(m);
    }
    solutions_.resize(n);
    for (std::size_t r = 0; r < n; ++r) {
      Polynomial m = Polynomial::from_canonical_terms({{index_.monomials()[r], Rational(1)}});
      RationalVector rhs = index_.coordinates(m - Polynomial(average(m)));
      rhs.push_back(0);
      auto x = grflab::solve(rows, rhs, n);
      if (!x) throw SolverError("Laplacian is not onto the mean-zero polynomials");
      solutions_[r] = std::move(*x);
    }
  }

  unsigned degree() const {
    unsigned d = 0;
    for (const auto& m : index_.monomials()) d = std::max(d, m.degree());
    return d;
  }

  Polynomial solve(const Polynomial& s) const {
    if (!s.is_zero() && static_cast<unsigned>(s.degree()) > degree()) throw PreconditionFailed("Poisson source exceeds the solver degree");
    if (sgn(average(s)) != 0) throw InconsistentSource("Poisson source has nonzero mean: " + to_string(average(s)));
    RationalVector coords = index_.coordinates(s);
    RationalVector u(index_.size(), Rational(0));
    for (std::size_t r = 0; r < coords.size(); ++r) {
      if (sgn(coords[r]) == 0) continue;
      for (std::size_t j = 0; j < u.size(); ++j)
        if (sgn(solutions_[r][j]) != 0) u[j] += coords[r] * solutions_[r][j];
    }
    return index_.polynomial(u);
  }

 private:
  MonomialIndex index_;
  std::vector<RationalVector> solutions_;
};

/// B(gamma) = -1/2 mixed Laplacian - R+(gamma).
inline PolyTensor operator_B(const PolyGeometry& geo, const PolyTensor& gamma, const Polynomial& f = {}) {
  PolyTensor out = geo.mixed_laplacian(gamma, f);
  out.scale(Rational(-1, 2));
  out -= geo.curvature_action(gamma, Conn::plus);
  return out;
}

/// Pieces of the A-operator, kept for reporting.
struct OperatorAParts {
  PolyTensor B;
  Pair<Polynomial> divergence;
  Polynomial source;  // pair divergence of the twisted divergence
  Polynomial U;       // Delta U = source, mean zero
  PolyTensor result;
};

/// A(gamma) = B(gamma) - 1/2 div*(div gamma) - 1/2 (nabla^+)^2 U with Delta U = div div gamma.
inline OperatorAParts operator_A_parts(const PolyGeometry& geo, const PolyTensor& gamma, const Polynomial& f = {},
                                       const PoissonSolver* solver = nullptr) {
  require_constant_f(f, "operator_A");
  OperatorAParts p;
  p.B = operator_B(geo, gamma, f);
  p.divergence = geo.twisted_divergence(gamma, f);
  p.source = geo.pair_divergence(p.divergence, f);
  if (p.source.is_zero()) {
    p.U = Polynomial();
  } else if (solver && static_cast<unsigned>(p.source.degree()) <= solver->degree()) {
    p.U = solver->solve(p.source);
  } else {
    p.U = PoissonSolver(geo, static_cast<unsigned>(p.source.degree())).solve(p.source);
  }
  p.result = p.B;
  PolyTensor adj = geo.divergence_adjoint(p.divergence);
  p.result -= adj.scale(Rational(1, 2));
  if (!p.U.is_zero()) {
    PolyTensor hess = geo.hessian(p.U, Conn::plus);
    p.result -= hess.scale(Rational(1, 2));
  }
  return p;
}

inline PolyTensor operator_A(const PolyGeometry& geo, const PolyTensor& gamma, const Polynomial& f = {},
                             const PoissonSolver* solver = nullptr) {
  return operator_A_parts(geo, gamma, f, solver).result;
}

/// Bianchi operator: the twisted divergence pair.
inline Pair<Polynomial> bianchi(const PolyGeometry& geo, const PolyTensor& gamma, const Polynomial& f = {}) {
  return geo.twisted_divergence(gamma, f);
}

/// div_f(Rc - H^2/4 + Hess f)_l - 1/2 d_l R^{H,f} - 1/4 (d*_f H)_{ab} H_l^{ab}; identically zero.
template <class S>
Tensor<S> bianchi_contracted_residual(const Geometry<S>& geo, const S& f) {
  Tensor<S> T = geo.ricci() - Tensor<S>(geo.H2()).scale(Rational(1, 4));
  T += geo.hessian(f);
  Tensor<S> out = geo.divergence_f(T, f);
  Tensor<S> dR = geo.grad(geo.generalized_scalar(f));
  out -= dR.scale(Rational(1, 2));
  Tensor<S> dsf = geo.codifferential(geo.H(), f);
  Tensor<S> Hr = geo.raise_slot(geo.raise_slot(geo.H(), 1), 2);
  for (int l = 0; l < geo.dim(); ++l) {
    S v{};
    for (int a = 0; a < geo.dim(); ++a)
      for (int b = 0; b < geo.dim(); ++b) v += Geometry<S>::mul(dsf(a, b), Hr(l, a, b));
    out(l) -= scaled(v, Rational(1, 4));
  }
  return out;
}

/// Phi(u, v) = (-1/2 Delta^+_f u, -1/2 Delta^-_f v).
inline Pair<Polynomial> phi_operator(const PolyGeometry& geo, const Pair<Polynomial>& uv, const Polynomial& f = {}) {
  PolyTensor a = geo.bismut_laplacian_1form(uv.first, f, +1);
  PolyTensor b = geo.bismut_laplacian_1form(uv.second, f, -1);
  return {a.scale(Rational(-1, 2)), b.scale(Rational(-1, 2))};
}

/// beta(B gamma) - Phi(div gamma).
inline Pair<Polynomial> phi_relation_residual(const PolyGeometry& geo, const PolyTensor& gamma,
                                              const Polynomial& f = {}) {
  auto lhs = bianchi(geo, operator_B(geo, gamma, f), f);
  auto rhs = phi_operator(geo, bianchi(geo, gamma, f), f);
  return {lhs.first - rhs.first, lhs.second - rhs.second};
}

// ---- second variation ----

/// Second variation of lambda at a critical point: -<gamma1, A gamma2> against the normalized measure.
inline Rational second_variation_form(const PolyGeometry& geo, const PolyTensor& g1, const PolyTensor& g2,
                                      const Polynomial& f = {}, const PoissonSolver* solver = nullptr) {
  return -average_pairing(geo, g1, operator_A(geo, g2, f, solver));
}

struct OperatorMatrix {
  std::vector<PolyTensor> basis;
  RationalMatrix entries;  // -<gamma_a, A gamma_b>, averaged
  RationalMatrix gram;     // <gamma_a, gamma_b>, averaged
};

inline OperatorMatrix second_variation_matrix(const PolyGeometry& geo, std::vector<PolyTensor> basis,
                                              const Polynomial& f = {}) {
  OperatorMatrix out;
  out.basis = std::move(basis);
  const std::size_t n = out.basis.size();
  unsigned degree = 0;
  for (const auto& t : out.basis)
    for (const auto& c : t.data())
      if (!c.is_zero()) degree = std::max(degree, static_cast<unsigned>(c.degree()));
  PoissonSolver solver(geo, degree);
  std::vector<PolyTensor> images(n);
  parallel_for(n, [&](std::size_t b) { images[b] = operator_A(geo, out.basis[b], f, &solver); });
  out.entries.assign(n, RationalVector(n));
  out.gram.assign(n, RationalVector(n));
  parallel_for(n, [&](std::size_t a) {
    for (std::size_t b = 0; b < n; ++b) {
      out.entries[a][b] = -average_pairing(geo, out.basis[a], images[b]);
      out.gram[a][b] = average_pairing(geo, out.basis[a], out.basis[b]);
    }
  });
  return out;
}

inline bool is_symmetric(const RationalMatrix& m) {
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = i + 1; j < m.size(); ++j)
      if (m[i][j] != m[j][i]) return false;
  return true;
}

/// Eigenvalues of entries relative to the Gram matrix (ascending).
inline std::vector<double> relative_spectrum(const OperatorMatrix& m) {
  const auto n = static_cast<Eigen::Index>(m.basis.size());
  Eigen::MatrixXd A(n, n), G(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      A(i, j) = m.entries[i][j].get_d();
      G(i, j) = m.gram[i][j].get_d();
    }
  A = (A + A.transpose()) / 2;
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(A, G, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw SolverError("relative eigen-solve failed");
  return {es.eigenvalues().data(), es.eigenvalues().data() + n};
}

/// Matrix of a linear map on a tensor space: row r holds output coordinate r of every basis image.
template <class Map>
RationalMatrix map_matrix(const TensorSpace& in, std::size_t out_size, Map&& fn) {
  const std::size_t n = in.size();
  std::vector<RationalVector> cols(n);
  parallel_for(n, [&](std::size_t k) { cols[k] = fn(in.element(k)); });
  RationalMatrix rows(out_size, RationalVector(n, Rational(0)));
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t r = 0; r < out_size; ++r)
      if (sgn(cols[k][r]) != 0) rows[r][k] = cols[k][r];
  return rows;
}

/// Coordinates of the twisted divergence pair, first component then second.
inline RationalVector divergence_coordinates(const PolyGeometry& geo, const TensorSpace& one_forms,
                                             const PolyTensor& gamma, const Polynomial& f) {
  auto [a, b] = geo.twisted_divergence(gamma, f);
  RationalVector v = one_forms.coordinates(a);
  RationalVector w = one_forms.coordinates(b);
  v.insert(v.end(), w.begin(), w.end());
  return v;
}

/// Exact basis of {gamma of degree <= d : div gamma = 0}.
inline std::vector<PolyTensor> slice_tangent_basis(const PolyGeometry& geo, unsigned degree, const Polynomial& f = {}) {
  TensorSpace two(degree, 2), one(degree, 1);
  RationalMatrix rows = map_matrix(two, 2 * one.size(), [&](const PolyTensor& e) {
    return divergence_coordinates(geo, one, e, f);
  });
  std::vector<PolyTensor> out;
  for (const auto& v : nullspace(rows, two.size())) out.push_back(two.tensor(v));
  return out;
}

}  // namespace grflab
