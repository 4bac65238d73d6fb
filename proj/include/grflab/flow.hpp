#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "grflab/variational.hpp"

namespace grflab {

using Mat3 = Eigen::Matrix3d;

/// Left-invariant data on SU(2): metric g, 2-form b, background H0 = c e^1 ^ e^2 ^ e^3.
struct FlowState {
  Mat3 g = Mat3::Identity();
  Mat3 b = Mat3::Zero();
  double H0_coeff = 2;
  double t = 0;
};

struct FlowSample {
  double t = 0;
  Mat3 g, b;
  double lambda = 0;
  double residual = 0;  // |Rc^{H,f}|_g with the constant minimizer
};

using Trajectory = std::vector<FlowSample>;

class FlowBlowup : public Error {
 public:
  FlowBlowup(const std::string& what, Trajectory partial) : Error(what), partial_(std::move(partial)) {}
  const Trajectory& partial() const { return partial_; }

 private:
  Trajectory partial_;
};

inline Tensor<double> to_tensor(const Mat3& m, Symmetry sym = Symmetry::none) {
  Tensor<double> t(3, 2, sym);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) t(i, j) = m(i, j);
  return t;
}

inline Mat3 to_matrix(const Tensor<double>& t) {
  Mat3 m;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m(i, j) = t(i, j);
  return m;
}

inline double min_eigenvalue(const Mat3& g) {
  Eigen::SelfAdjointEigenSolver<Mat3> es(g, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

/// Geometry of a flow state with H = H0 + db.
inline Geometry<double> flow_geometry(const FlowState& s) {
  if (!(min_eigenvalue(s.g) > 0)) throw SingularMetric("flow metric is not positive definite");
  const auto model = su2_lie_model();
  Geometry<double> base(model, to_tensor(s.g, Symmetry::symmetric), volume_form(s.H0_coeff));
  Tensor<double> db = base.exterior_derivative(to_tensor(s.b, Symmetry::antisymmetric));
  if (std::all_of(db.data().begin(), db.data().end(), [](double x) { return x == 0.0; })) return base;
  return Geometry<double>(model, to_tensor(s.g, Symmetry::symmetric), base.H() + db);
}

struct FlowRhs {
  Mat3 dg, db;
};

/// dg = -2 Rc + 1/2 H^2, db = -d*H.
inline FlowRhs grf_rhs(const FlowState& s) {
  const auto geo = flow_geometry(s);
  Tensor<double> dg = geo.ricci().scale(-2) + Tensor<double>(geo.H2()).scale(Rational(1, 2));
  Tensor<double> db = -geo.dstar_H();
  return {to_matrix(dg), to_matrix(db)};
}

/// max |(dg - db) + 2 Rc+| with Rc+ from the Bismut curvature tensor.
inline double rhs_dual_residual(const FlowState& s) {
  const auto geo = flow_geometry(s);
  const FlowRhs r = grf_rhs(s);
  const Mat3 rc_plus = to_matrix(geo.ricci(Conn::plus));
  return ((r.dg - r.db) + 2 * rc_plus).cwiseAbs().maxCoeff();
}

inline double soliton_residual(const FlowState& s) {
  const auto geo = flow_geometry(s);
  const Tensor<double> rc = geo.bakry_emery(0.0);
  return std::sqrt(std::max(0.0, geo.inner(rc, rc)));
}

/// lambda of the state via the exact-assembly eigen-solve (entries converted exactly).
inline double flow_lambda(const FlowState& s, unsigned degree = 1) {
  const auto model = su2_lie_model();
  PolyTensor g(3, 2, Symmetry::symmetric);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) g(i, j) = Polynomial(Rational(s.g(i, j)));
  const Rational c(s.H0_coeff);
  PolyGeometry geo(model, g, volume_form(Polynomial(c)));
  return lambda_min(geo, degree).lambda;
}

inline FlowState step_rk4(const FlowState& s, double dt) {
  if (!(dt > 0)) throw PreconditionFailed("step size must be positive");
  auto shifted = [&](const FlowRhs& k, double h) {
    FlowState x = s;
    x.g += h * k.dg;
    x.b += h * k.db;
    x.t += h;
    return x;
  };
  const FlowRhs k1 = grf_rhs(s);
  const FlowRhs k2 = grf_rhs(shifted(k1, dt / 2));
  const FlowRhs k3 = grf_rhs(shifted(k2, dt / 2));
  const FlowRhs k4 = grf_rhs(shifted(k3, dt));
  FlowState out = s;
  out.g += dt / 6 * (k1.dg + 2 * k2.dg + 2 * k3.dg + k4.dg);
  out.b += dt / 6 * (k1.db + 2 * k2.db + 2 * k3.db + k4.db);
  out.g = (out.g + out.g.transpose()) / 2;
  out.b = (out.b - out.b.transpose()) / 2;
  out.t = s.t + dt;
  return out;
}

inline FlowSample sample(const FlowState& s, unsigned lambda_degree) {
  return {s.t, s.g, s.b, flow_lambda(s, lambda_degree), soliton_residual(s)};
}

struct FlowOptions {
  double dt = 1e-3;
  std::size_t steps = 1000;
  std::size_t sample_every = 1;
  unsigned lambda_degree = 1;
};

/// Integrates with fixed-step RK4, sampling the initial state and every sample_every steps.
inline Trajectory run_flow(const FlowState& initial, const FlowOptions& opt) {
  if (opt.sample_every == 0) throw PreconditionFailed("sample_every must be positive");
  Trajectory traj;
  FlowState s = initial;
  traj.push_back(sample(s, opt.lambda_degree));
  for (std::size_t k = 1; k <= opt.steps; ++k) {
    try {
      s = step_rk4(s, opt.dt);
    } catch (const SingularMetric&) {
      throw FlowBlowup("metric degenerated near t = " + std::to_string(s.t), std::move(traj));
    }
    if (!(min_eigenvalue(s.g) >= 1e-10))
      throw FlowBlowup("metric degenerated at t = " + std::to_string(s.t), std::move(traj));
    if (k % opt.sample_every == 0 || k == opt.steps) traj.push_back(sample(s, opt.lambda_degree));
  }
  return traj;
}

inline Trajectory run_flow(const FlowState& initial, double dt, std::size_t steps) {
  FlowOptions opt;
  opt.dt = dt;
  opt.steps = steps;
  return run_flow(initial, opt);
}

/// Endpoint after `steps` RK4 steps, without sampling.
inline FlowState integrate(FlowState s, double dt, std::size_t steps) {
  for (std::size_t k = 0; k < steps; ++k) s = step_rk4(s, dt);
  return s;
}

/// log2 of the error-reduction ratio under step halving over [0, horizon]; about 4 for RK4.
inline double observed_order(const FlowState& s, double horizon, std::size_t base_steps) {
  const double dt = horizon / static_cast<double>(base_steps);
  const FlowState a = integrate(s, dt, base_steps);
  const FlowState b = integrate(s, dt / 2, 2 * base_steps);
  const FlowState c = integrate(s, dt / 4, 4 * base_steps);
  const double e1 = (a.g - b.g).norm() + (a.b - b.b).norm();
  const double e2 = (b.g - c.g).norm() + (b.b - c.b).norm();
  return std::log2(e1 / e2);
}

}  // namespace grflab
