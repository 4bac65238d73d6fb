#include <cstring>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "grflab/cli.hpp"

namespace {

// --config is read before the other flags so that explicit flags win.
grflab::RunConfig initial_config(int argc, char** argv) {
  grflab::RunConfig cfg;
  for (int i = 1; i < argc; ++i) {
    std::string a = argv[i];
    std::string path;
    if (a == "--config" && i + 1 < argc) path = argv[i + 1];
    else if (a.rfind("--config=", 0) == 0) path = a.substr(9);
    if (!path.empty()) grflab::apply_config(cfg, grflab::read_json_file(path));
  }
  return cfg;
}

void add_common(CLI::App* sub, grflab::RunConfig& cfg, std::string& config_path) {
  sub->add_option("--config", config_path, "JSON config file (explicit flags override it)");
  sub->add_option("--degree", cfg.degree, "polynomial / harmonic degree")->capture_default_str();
  sub->add_option("--seed", cfg.seed, "seed for randomized suites")->capture_default_str();
  sub->add_option("--h0", cfg.h0, "torsion coefficient c in H = c e1^e2^e3")->capture_default_str();
  sub->add_option("--g", cfg.metric, "metric: round | diag:a,b,c | sym:g11,g12,g13,g22,g23,g33")->capture_default_str();
  sub->add_option("--format", cfg.format, "json | csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  sub->add_option("--output", cfg.output, "write the report to this file instead of stdout");
  sub->add_flag("--timings", cfg.timings, "include wall-clock timings (breaks byte-identical output)");
}

}  // namespace

int main(int argc, char** argv) {
  grflab::RunConfig cfg;
  try {
    cfg = initial_config(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  CLI::App app{"grflab: generalized Ricci flow laboratory on SU(2)"};
  app.require_subcommand(1);
  std::string config_path;

  auto* verify = app.add_subcommand("verify", "run the randomized identity suites");
  auto* spectrum = app.add_subcommand("spectrum", "lambda and second-variation spectrum on the slice");
  auto* igsd = app.add_subcommand("igsd", "kernel of essential solitonic deformations");
  auto* obstruction = app.add_subcommand("obstruction", "second-order integrability pairings");
  auto* flow = app.add_subcommand("flow", "homogeneous generalized Ricci flow");
  auto* lambda = app.add_subcommand("lambda", "lambda functional at a homogeneous state");
  for (auto* sub : {verify, spectrum, igsd, obstruction, flow, lambda}) add_common(sub, cfg, config_path);
  obstruction->add_option("--u", cfg.u, "polynomial (e.g. x1x2+x3x4) or coeffs:c1,...,c9")->capture_default_str();
  obstruction->add_flag("--jet", cfg.jet, "cross-check every pairing with the jet computation");
  flow->add_option("--dt", cfg.dt, "time step")->capture_default_str();
  flow->add_option("--steps", cfg.steps, "number of RK4 steps")->capture_default_str();
  flow->add_option("--sample-every", cfg.sample_every, "sampling stride")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }
  for (auto* sub : app.get_subcommands()) cfg.command = sub->get_name();

  try {
    auto outcome = grflab::dispatch(cfg);
    if (cfg.output.empty()) {
      std::cout << outcome.text;
    } else {
      std::ofstream out(cfg.output);
      if (!out) throw grflab::ParseError("cannot write " + cfg.output);
      out << outcome.text;
    }
    return outcome.exit_code;
  } catch (const grflab::ParseError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
