#pragma once

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "grflab/deformations.hpp"
#include "grflab/flow.hpp"
#include "grflab/json_io.hpp"
#include "grflab/random.hpp"

namespace grflab {

inline const std::vector<std::string>& known_commands() {
  static const std::vector<std::string> c = {"verify", "spectrum", "igsd", "obstruction", "flow", "lambda"};
  return c;
}

struct RunConfig {
  std::string command;
  int degree = 2;
  std::uint64_t seed = 7;
  std::string h0 = "2";
  std::string metric = "round";  // round | diag:a,b,c | sym:g11,g12,g13,g22,g23,g33
  std::string u = "x1x2+x3x4";   // polynomial, or coeffs:c1,...,c9 over the degree-2 harmonic basis
  std::string output;
  std::string format = "json";
  double dt = 1e-3;
  std::size_t steps = 1000;
  std::size_t sample_every = 100;
  bool timings = false;
  bool jet = false;
};

inline void validate(const RunConfig& cfg) {
  if (std::find(known_commands().begin(), known_commands().end(), cfg.command) == known_commands().end())
    throw ParseError("unknown command '" + cfg.command + "'");
  if (cfg.degree < 0) throw ParseError("degree must be >= 0");
  if (cfg.format != "json" && cfg.format != "csv") throw ParseError("format must be json or csv");
  if (!(cfg.dt > 0)) throw ParseError("dt must be positive");
  if (cfg.sample_every == 0) throw ParseError("sample-every must be positive");
}

/// Applies the keys present in a JSON config object.
inline void apply_config(RunConfig& cfg, const Json& j) {
  if (!j.is_object()) throw ParseError("config must be a JSON object");
  static const std::vector<std::string> keys = {"command", "degree", "seed", "h0", "g", "u", "output", "format",
                                                "dt", "steps", "sample_every", "timings", "jet"};
  for (const auto& [k, v] : j.items())
    if (std::find(keys.begin(), keys.end(), k) == keys.end()) throw ParseError("unknown config key '" + k + "'");
  try {
    if (j.contains("command")) cfg.command = j["command"].get<std::string>();
    if (j.contains("degree")) cfg.degree = j["degree"].get<int>();
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("h0")) cfg.h0 = j["h0"].is_string() ? j["h0"].get<std::string>() : j["h0"].dump();
    if (j.contains("g")) cfg.metric = j["g"].get<std::string>();
    if (j.contains("u")) cfg.u = j["u"].get<std::string>();
    if (j.contains("output")) cfg.output = j["output"].get<std::string>();
    if (j.contains("format")) cfg.format = j["format"].get<std::string>();
    if (j.contains("dt")) cfg.dt = j["dt"].get<double>();
    if (j.contains("steps")) cfg.steps = j["steps"].get<std::size_t>();
    if (j.contains("sample_every")) cfg.sample_every = j["sample_every"].get<std::size_t>();
    if (j.contains("timings")) cfg.timings = j["timings"].get<bool>();
    if (j.contains("jet")) cfg.jet = j["jet"].get<bool>();
  } catch (const Json::exception& ex) {
    throw ParseError(std::string("malformed config value: ") + ex.what());
  }
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config file " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& ex) {
    throw ParseError(std::string("config is not valid JSON: ") + ex.what());
  }
}

inline std::vector<Rational> parse_rational_list(const std::string& text) {
  std::vector<Rational> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_rational(item));
  return out;
}

/// Frame components of a constant metric from "round", "diag:a,b,c" or "sym:g11,g12,g13,g22,g23,g33".
inline Tensor<Rational> parse_metric(const std::string& text) {
  Tensor<Rational> g(3, 2, Symmetry::symmetric);
  if (text == "round") {
    for (int i = 0; i < 3; ++i) g(i, i) = 1;
    return g;
  }
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw ParseError("metric string must be round, diag:... or sym:...");
  const std::string kind = text.substr(0, colon);
  const auto v = parse_rational_list(text.substr(colon + 1));
  if (kind == "diag" && v.size() == 3) {
    for (int i = 0; i < 3; ++i) g(i, i) = v[i];
  } else if (kind == "sym" && v.size() == 6) {
    const int idx[6][2] = {{0, 0}, {0, 1}, {0, 2}, {1, 1}, {1, 2}, {2, 2}};
    for (int k = 0; k < 6; ++k) g(idx[k][0], idx[k][1]) = g(idx[k][1], idx[k][0]) = v[k];
  } else {
    throw ParseError("metric string '" + text + "' has the wrong number of entries");
  }
  for (int k = 1; k <= 3; ++k) {
    // leading principal minors
    Rational m = k == 1 ? g(0, 0)
                 : k == 2 ? Rational(g(0, 0) * g(1, 1) - g(0, 1) * g(1, 0))
                          : Rational(g(0, 0) * (g(1, 1) * g(2, 2) - g(1, 2) * g(2, 1)) -
                                     g(0, 1) * (g(1, 0) * g(2, 2) - g(1, 2) * g(2, 0)) +
                                     g(0, 2) * (g(1, 0) * g(2, 1) - g(1, 1) * g(2, 0)));
    if (sgn(m) <= 0) throw ParseError("metric string is not positive definite");
  }
  return g;
}

/// A quadratic eigenfunction from a polynomial string or "coeffs:c1,...,c9" over harmonic_basis(2).
inline Polynomial parse_eigenfunction(const std::string& text) {
  if (text.rfind("coeffs:", 0) == 0) {
    auto c = parse_rational_list(text.substr(7));
    auto basis = harmonic_basis(2);
    if (c.size() != basis.size()) throw ParseError("coefficient vector needs 9 entries");
    Polynomial u;
    for (std::size_t k = 0; k < c.size(); ++k) u += basis[k] * c[k];
    return u;
  }
  return parse_polynomial(text);
}

inline std::string pi_string(const IntegralValue& v) { return to_string(v.coeff) + " · π²"; }

inline std::string fixed(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12e", x);
  return buf;
}

struct Outcome {
  std::string text;
  int exit_code = 0;
};

// ---- verify ----

struct Assertion {
  std::string anchor;
  bool passed = false;
  std::string detail;
};

class Suite {
 public:
  void check(std::string anchor, const std::function<bool(std::string&)>& body) {
    Assertion a;
    a.anchor = std::move(anchor);
    try {
      a.passed = body(a.detail);
    } catch (const std::exception& ex) {
      a.passed = false;
      a.detail = std::string("exception: ") + ex.what();
    }
    items_.push_back(std::move(a));
  }
  const std::vector<Assertion>& items() const { return items_; }
  bool passed() const {
    return std::all_of(items_.begin(), items_.end(), [](const Assertion& a) { return a.passed; });
  }

 private:
  std::vector<Assertion> items_;
};

inline Tensor<Rational> random_metric(Rng& rng) {
  Tensor<Rational> g(3, 2, Symmetry::symmetric);
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) g(i, j) = g(j, i) = (i == j ? Rational(2) : Rational(0)) + random_rational(rng, 1, 4) / 4;
  return g;
}

inline PolyTensor random_rank2(Rng& rng, unsigned degree) {
  PolyTensor t(3, 2);
  for (auto& x : t.data()) x = random_polynomial(rng, degree, 3);
  return t;
}

inline Suite verify_suite(std::uint64_t seed, unsigned degree, int trials = 5) {
  Suite s;
  Rng rng(seed);
  const auto model = su2_lie_model();
  const PolyGeometry round = round_su2_geometry();
  const unsigned d = std::max(degree, 1u);

  s.check("su(2) structure constants: antisymmetry, Jacobi, ad-invariance", [&](std::string& det) {
    auto v = validate_structure(model);
    det = std::to_string(v.size()) + " violations";
    return v.empty();
  });
  s.check("S^3 frames: tangency, orthonormality, brackets, left/right commutation", [&](std::string& det) {
    auto m = su2_model();
    auto v = frame_check(m.model, m.frame);
    det = std::to_string(v.size()) + " violations";
    return v.empty();
  });
  s.check("Bismut flatness: Rm+ = 0 and nabla H = 0 on (S^3, H = 2 dV)", [&](std::string&) {
    return is_zero_tensor(round.Rm_plus()) && is_zero_tensor(round.covariant(round.H()));
  });
  s.check("Einstein balance: Rc = H^2/4 and d*H = 0", [&](std::string&) {
    return is_zero_tensor(round.ricci() - PolyTensor(round.H2()).scale(Rational(1, 4))) &&
           is_zero_tensor(round.dstar_H());
  });
  s.check("Bismut Ricci: Rc+ = Rc - H^2/4 - d*H/2 on random invariant data", [&](std::string& det) {
    for (int k = 0; k < trials; ++k) {
      Geometry<Rational> geo(model, random_metric(rng), volume_form(random_rational(rng)));
      if (geo.ricci(Conn::plus) != geo.rc_plus_formula()) {
        det = "trial " + std::to_string(k);
        return false;
      }
      if (geo.scalar_curvature(Conn::plus) != geo.scalar_curvature() - geo.H_norm2() / 4) {
        det = "scalar, trial " + std::to_string(k);
        return false;
      }
    }
    return true;
  });
  s.check("Mixed Laplacian: closed form equals -nablabar* nablabar", [&](std::string&) {
    for (int k = 0; k < trials; ++k) {
      auto gamma = random_rank2(rng, d);
      if (round.mixed_laplacian(gamma, Polynomial()) != round.mixed_laplacian_formula(gamma, Polynomial())) return false;
    }
    return true;
  });
  s.check("Twisted divergence adjoint: integration by parts", [&](std::string&) {
    for (int k = 0; k < trials; ++k) {
      auto gamma = random_rank2(rng, d);
      PolyTensor u(3, 1), v(3, 1);
      for (auto& x : u.data()) x = random_polynomial(rng, d, 2);
      for (auto& x : v.data()) x = random_polynomial(rng, d, 2);
      auto [a, b] = round.twisted_divergence(gamma, Polynomial());
      auto lhs = integrate_s3(round.inner(a, u) + round.inner(b, v));
      auto rhs = integrate_s3(round.inner(gamma, round.divergence_adjoint({u, v})));
      if (lhs.coeff != rhs.coeff) return false;
    }
    return true;
  });
  s.check("Contracted Bianchi identity for Rc^{H,f}", [&](std::string&) {
    for (int k = 0; k < trials; ++k) {
      PolyGeometry geo(model, lift<Polynomial>(random_metric(rng)), volume_form(Polynomial(random_rational(rng))));
      if (!is_zero_tensor(bianchi_contracted_residual(geo, random_polynomial(rng, std::min(d, 2u), 4)))) return false;
    }
    return true;
  });
  s.check("lambda = 4 at the Bismut-flat point with constant minimizer", [&](std::string& det) {
    auto r = lambda_min(round, std::min(degree, 3u));
    det = "lambda = " + fixed(r.lambda);
    return std::abs(r.lambda - 4) < 1e-9 && r.f_variation < 1e-10;
  });
  s.check("First variation vanishes at the critical point", [&](std::string&) {
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        PolyTensor e(3, 2);
        e(i, j) = Polynomial(Rational(1));
        if (sgn(first_variation(round, e)) != 0) return false;
      }
    return true;
  });
  s.check("Essential solitonic deformations form a 9-dimensional space", [&](std::string& det) {
    auto k = igsd_kernel(round, std::max(degree, 2u));
    det = "kernel_dim = " + std::to_string(k.size());
    return k.size() == 9 && same_span(gammas(k), gammas(parallel_deformations()));
  });
  s.check("Obstruction: (x1^2-x2^2, x1^2-x3^2) pairs to -pi^2", [&](std::string& det) {
    auto v = obstruction(parse_polynomial("x1^2-x2^2"), parse_polynomial("x1^2-x3^2"));
    det = pi_string(v);
    return v.coeff == -1;
  });
  s.check("Jet second variation matches the closed-form obstruction", [&](std::string& det) {
    auto basis = quadratic_eigenfunctions();
    std::uniform_int_distribution<std::size_t> pick(0, basis.size() - 1);
    const auto& [un, u] = basis[pick(rng)];
    const auto& [wn, w] = basis[pick(rng)];
    auto r = jet_second_variation_check(u, w);
    det = "u = " + un + ", w = " + wn + ", pairing = " + pi_string(r.pairing);
    return r.formulas_hold() && r.residual() == 0;
  });
  s.check("Homogeneous flow: Bismut-flat point is fixed; dual-path RHS", [&](std::string& det) {
    FlowState fs;
    auto r = grf_rhs(fs);
    std::uniform_real_distribution<double> u(-0.1, 0.1);
    FlowState p;
    p.g(0, 0) += u(rng);
    p.g(1, 2) = p.g(2, 1) = u(rng);
    double dual = rhs_dual_residual(p);
    det = "dual residual " + fixed(dual);
    return r.dg.cwiseAbs().maxCoeff() == 0 && r.db.cwiseAbs().maxCoeff() == 0 && dual < 1e-12;
  });
  return s;
}

// ---- commands ----

inline PolyGeometry config_geometry(const RunConfig& cfg) {
  return PolyGeometry(su2_lie_model(), lift<Polynomial>(parse_metric(cfg.metric)),
                      volume_form(Polynomial(parse_rational(cfg.h0))));
}

class Stopwatch {
 public:
  double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count(); }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

inline Outcome run_verify(const RunConfig& cfg) {
  Stopwatch sw;
  Suite s = verify_suite(cfg.seed, static_cast<unsigned>(cfg.degree));
  if (cfg.format == "csv") {
    std::string out = "anchor,passed,detail\n";
    for (const auto& a : s.items()) out += "\"" + a.anchor + "\"," + (a.passed ? "true" : "false") + ",\"" + a.detail + "\"\n";
    return {out, s.passed() ? 0 : 1};
  }
  Json j = {{"command", "verify"}, {"degree", cfg.degree}, {"seed", cfg.seed}};
  Json items = Json::array();
  for (const auto& a : s.items()) items.push_back({{"anchor", a.anchor}, {"passed", a.passed}, {"detail", a.detail}});
  j["assertions"] = items;
  j["passed"] = s.passed();
  if (cfg.timings) j["timings"] = {{"total_s", sw.seconds()}};
  return {j.dump(2) + "\n", s.passed() ? 0 : 1};
}

inline Outcome run_lambda(const RunConfig& cfg) {
  auto geo = config_geometry(cfg);
  Stopwatch sw;
  auto r = lambda_min(geo, static_cast<unsigned>(cfg.degree));
  if (cfg.format == "csv") {
    std::string out = "index,eigenvalue\n";
    for (std::size_t k = 0; k < r.eigenvalues.size(); ++k) out += std::to_string(k) + "," + fixed(r.eigenvalues[k]) + "\n";
    return {out, 0};
  }
  Json j = {{"command", "lambda"}, {"degree", cfg.degree}, {"metric", cfg.metric}, {"h0", cfg.h0}};
  j["lambda"] = r.lambda;
  j["eigenvalues"] = r.eigenvalues;
  j["f_constant"] = r.f_constant;
  j["f_value"] = r.f_value;
  j["residual"] = r.residual;
  j["warnings"] = r.warnings;
  if (cfg.timings) j["timings"] = {{"total_s", sw.seconds()}};
  return {j.dump(2) + "\n", 0};
}

inline Outcome run_spectrum(const RunConfig& cfg) {
  auto geo = config_geometry(cfg);
  const unsigned d = static_cast<unsigned>(cfg.degree);
  Stopwatch sw;
  auto lam = lambda_min(geo, d);
  const double t_lambda = sw.seconds();
  auto slice = slice_tangent_basis(geo, d);
  auto m = second_variation_matrix(geo, slice);
  auto ev = relative_spectrum(m);
  const double t_matrix = sw.seconds() - t_lambda;
  // exact kernel of the form on the slice
  std::size_t kernel_dim = nullspace(m.entries, m.basis.size()).size();
  if (cfg.format == "csv") {
    std::string out = "index,eigenvalue\n";
    for (std::size_t k = 0; k < ev.size(); ++k) out += std::to_string(k) + "," + fixed(ev[k]) + "\n";
    return {out, 0};
  }
  Json j = {{"command", "spectrum"}, {"degree", cfg.degree}, {"metric", cfg.metric}, {"h0", cfg.h0}};
  j["lambda"] = lam.lambda;
  j["eigenvalues"] = ev;
  j["kernel_dim"] = kernel_dim;
  j["slice_dim"] = slice.size();
  j["symmetric"] = is_symmetric(m.entries);
  if (cfg.timings) j["timings"] = {{"lambda_s", t_lambda}, {"second_variation_s", t_matrix}};
  return {j.dump(2) + "\n", 0};
}

inline Outcome run_igsd(const RunConfig& cfg) {
  auto geo = config_geometry(cfg);
  require_bismut_flat(geo);
  Stopwatch sw;
  auto kernel = igsd_kernel(geo, static_cast<unsigned>(std::max(cfg.degree, 2)));
  const double t_kernel = sw.seconds();
  Json j = {{"command", "igsd"}, {"degree", std::max(cfg.degree, 2)}};
  j["kernel_dim"] = kernel.size();
  j["parallel_span_equal"] = same_span(gammas(kernel), gammas(parallel_deformations()));
  j["canonical_span_equal"] = same_span(gammas(kernel), gammas(canonical_deformations(geo)));
  j["iged_dim"] = iged_basis(geo, kernel).size();
  Json basis = Json::array();
  bool ok = true;
  for (const auto& d : kernel) {
    auto eq = equivalence_check(geo, d.gamma);
    auto ids = integral_identities(geo, d.gamma);
    ok = ok && eq.consistent() && eq.igsd && ids.holds();
    basis.push_back({{"provenance", d.provenance.describe()},
                     {"equivalence", {{"igsd", eq.igsd}, {"parallel", eq.parallel}, {"first_order", eq.first_order},
                                      {"second_variation_zero", eq.second_variation_zero}}},
                     {"identities",
                      {{"curvature_h", to_json(ids.curvature_h)}, {"curvature_K", to_json(ids.curvature_K)},
                       {"div_h", to_json(ids.div_h)}, {"grad_h", to_json(ids.grad_h)}, {"grad_K", to_json(ids.grad_K)},
                       {"holds", ids.holds()}}},
                     {"gamma", to_json(d.gamma)}});
  }
  j["basis"] = basis;
  j["all_checks_pass"] = ok;
  if (cfg.timings) j["timings"] = {{"kernel_s", t_kernel}, {"total_s", sw.seconds()}};
  return {j.dump(2) + "\n", ok ? 0 : 1};
}

inline Outcome run_obstruction(const RunConfig& cfg) {
  const Polynomial u = parse_eigenfunction(cfg.u);
  Stopwatch sw;
  auto rep = integrability_report(u);
  std::unique_ptr<JetSecondVariation> jet;
  if (cfg.jet) jet = std::make_unique<JetSecondVariation>(u);
  bool ok = true;
  if (cfg.format == "csv") {
    std::string out = "w,coeff_pi2\n";
    for (const auto& [name, v] : rep.pairings) out += name + "," + to_string(v.coeff) + "\n";
    return {out, 0};
  }
  Json j = {{"command", "obstruction"}, {"u", u.to_string()}, {"u_polynomial", to_json(u)}};
  Json pairs = Json::array();
  auto basis = quadratic_eigenfunctions();
  for (std::size_t k = 0; k < rep.pairings.size(); ++k) {
    Json p = {{"w", rep.pairings[k].first}, {"value", pi_string(rep.pairings[k].second)},
              {"integral", to_json(rep.pairings[k].second)}};
    if (jet) {
      auto v = jet->pairing(basis[k].second);
      p["jet_pairing"] = pi_string(v);
      ok = ok && v.coeff == rep.pairings[k].second.coeff;
    }
    pairs.push_back(p);
  }
  j["pairings"] = pairs;
  j["integrable_order2"] = rep.integrable_order2;
  if (jet) {
    ok = ok && jet->all_hold();
    Json checks = Json::array();
    for (const auto& c : jet->checks()) checks.push_back({{"formula", c.name}, {"holds", c.holds}});
    j["jet_checks"] = checks;
    j["jet_agrees"] = ok;
  }
  if (cfg.timings) j["timings"] = {{"total_s", sw.seconds()}};
  return {j.dump(2) + "\n", ok ? 0 : 1};
}

inline Outcome run_flow_command(const RunConfig& cfg) {
  FlowState s;
  auto g = parse_metric(cfg.metric);
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) s.g(i, k) = g(i, k).get_d();
  s.H0_coeff = parse_rational(cfg.h0).get_d();
  FlowOptions opt;
  opt.dt = cfg.dt;
  opt.steps = cfg.steps;
  opt.sample_every = cfg.sample_every;
  Trajectory traj;
  int code = 0;
  std::string error;
  try {
    traj = run_flow(s, opt);
  } catch (const FlowBlowup& e) {
    traj = e.partial();
    error = e.what();
    code = 1;
  }
  if (cfg.format == "csv") {
    std::string out = "t";
    for (const char* name : {"g", "b"})
      for (int i = 1; i <= 3; ++i)
        for (int k = 1; k <= 3; ++k) out += std::string(",") + name + std::to_string(i) + std::to_string(k);
    out += ",lambda,residual\n";
    for (const auto& x : traj) {
      out += fixed(x.t);
      for (const Mat3* m : {&x.g, &x.b})
        for (int i = 0; i < 3; ++i)
          for (int k = 0; k < 3; ++k) out += "," + fixed((*m)(i, k));
      out += "," + fixed(x.lambda) + "," + fixed(x.residual) + "\n";
    }
    if (!error.empty()) out += "# " + error + "\n";
    return {out, code};
  }
  Json j = {{"command", "flow"}, {"metric", cfg.metric}, {"h0", cfg.h0}, {"dt", cfg.dt}, {"steps", cfg.steps}};
  Json samples = Json::array();
  for (const auto& x : traj) {
    Json gj = Json::array(), bj = Json::array();
    for (int i = 0; i < 3; ++i)
      for (int k = 0; k < 3; ++k) {
        gj.push_back(x.g(i, k));
        bj.push_back(x.b(i, k));
      }
    samples.push_back({{"t", x.t}, {"g", gj}, {"b", bj}, {"lambda", x.lambda}, {"residual", x.residual}});
  }
  j["samples"] = samples;
  if (!error.empty()) j["error"] = error;
  return {j.dump(2) + "\n", code};
}

inline Outcome dispatch(const RunConfig& cfg) {
  validate(cfg);
  if (cfg.command == "verify") return run_verify(cfg);
  if (cfg.command == "lambda") return run_lambda(cfg);
  if (cfg.command == "spectrum") return run_spectrum(cfg);
  if (cfg.command == "igsd") return run_igsd(cfg);
  if (cfg.command == "obstruction") return run_obstruction(cfg);
  return run_flow_command(cfg);
}

}  // namespace grflab
