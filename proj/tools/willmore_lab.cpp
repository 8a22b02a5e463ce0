// willmore_lab: command-line front end.

#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "willmore/cli.hpp"

namespace {

using willmore::cli::Command;
using willmore::cli::RunConfig;

struct Flags {
  std::string format = "json";
  std::string mode = "simons";
  std::string derivatives = "auto";
  std::string kind = "auto";
  std::uint64_t trials = 0;
  double tol = 0.0;
};

void add_common(CLI::App* sub, RunConfig& cfg, Flags& f) {
  sub->add_option("--format", f.format, "Output format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  sub->add_option("--out", cfg.out_path, "Write the CSV table (grid or profile) to this path");
  sub->add_option("--tol", f.tol, "Tolerance for the checked expectation");
  sub->add_flag("--assert", cfg.assert_mode, "Exit with status 1 when an expectation fails");
}

void add_grid(CLI::App* sub, RunConfig& cfg, Flags& f) {
  sub->add_option("--resolution", cfg.resolution, "Nodes per axis (one value, or one per axis)")
      ->delimiter(',')
      ->capture_default_str();
  sub->add_option("--fd-step", cfg.fd_step, "Finite-difference step")->capture_default_str();
  sub->add_option("--derivatives", f.derivatives, "Derivative source")
      ->check(CLI::IsMember({"auto", "exact", "fd"}))
      ->capture_default_str();
}

void add_random(CLI::App* sub, RunConfig& cfg, Flags& f) {
  sub->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
  sub->add_option("--trials", f.trials, "Number of random trials");
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  Flags f;
  CLI::App app{"Numerical laboratory for Willmore submanifolds of spheres"};
  app.require_subcommand(1);

  std::map<CLI::App*, Command> commands;
  auto make = [&](const char* name, const char* help, Command c) {
    CLI::App* sub = app.add_subcommand(name, help);
    commands[sub] = c;
    add_common(sub, cfg, f);
    return sub;
  };
  const char* id_help = "Catalog ID (see `catalog`)";

  make("catalog", "List catalog IDs", Command::catalog);

  auto* shape = make("shape", "Shape data at a parameter point", Command::shape);
  shape->add_option("id", cfg.example_id, id_help)->required();
  shape->add_option("--point", cfg.point, "Parameter point")->delimiter(',');
  add_grid(shape, cfg, f);

  auto* energy = make("energy", "Willmore energy with a convergence table", Command::energy);
  energy->add_option("id", cfg.example_id, id_help)->required();
  add_grid(energy, cfg, f);

  auto* el = make("el-check", "Euler-Lagrange residual", Command::el_check);
  el->add_option("id", cfg.example_id, id_help)->required();
  el->add_option("--kind", f.kind, "Residual: isoparametric or surface (grid)")
      ->check(CLI::IsMember({"auto", "isoparametric", "surface"}))
      ->capture_default_str();
  add_grid(el, cfg, f);

  auto* pinch = make("pinch", "Pinching integral and threshold classification", Command::pinch);
  pinch->add_option("id", cfg.example_id, id_help)->required();
  pinch->add_option("--mode", f.mode, "Pinching constant")
      ->check(CLI::IsMember({"simons", "li"}))
      ->capture_default_str();
  add_grid(pinch, cfg, f);

  auto* props = make("matrix-props", "Randomized matrix and tensor inequality suites",
                     Command::matrix_props);
  add_random(props, cfg, f);

  auto* conformal = make("conformal-test", "Energy before and after random Moebius maps",
                         Command::conformal_test);
  conformal->add_option("id", cfg.example_id, id_help)->required();
  add_grid(conformal, cfg, f);
  add_random(conformal, cfg, f);

  auto* opt = make("optimize", "Critical radius of S^m(r) x S^{n-m}(sqrt(1-r^2))", Command::optimize);
  opt->add_option("family", cfg.example_id, "m,n")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : willmore::cli::kExitUsage;
  }

  for (const auto& [sub, c] : commands)
    if (sub->parsed()) cfg.command = c;
  cfg.format = f.format == "csv" ? willmore::cli::Format::csv : willmore::cli::Format::json;
  cfg.pinch_mode = f.mode == "li" ? willmore::PinchingMode::li : willmore::PinchingMode::simons;
  if (f.derivatives == "exact") cfg.derivatives = willmore::Derivatives::exact;
  if (f.derivatives == "fd") cfg.derivatives = willmore::Derivatives::finite_difference;
  if (f.kind == "isoparametric") cfg.el_kind = willmore::cli::ElKind::isoparametric;
  if (f.kind == "surface") cfg.el_kind = willmore::cli::ElKind::surface;
  for (const auto& [sub, c] : commands) {
    if (!sub->parsed()) continue;
    if (auto* o = sub->get_option_no_throw("--trials"); o && o->count() > 0) cfg.trials = f.trials;
    if (auto* o = sub->get_option_no_throw("--tol"); o && o->count() > 0) cfg.tolerance = f.tol;
  }
  return willmore::cli::run(cfg, std::cout, std::cerr);
}
