#pragma once

// Command runner behind the willmore_lab executable. Argument parsing lives
// in the tool; run() takes a validated RunConfig and writes results.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "willmore/catalog.hpp"
#include "willmore/error.hpp"
#include "willmore/functional.hpp"
#include "willmore/immersion.hpp"
#include "willmore/io.hpp"
#include "willmore/mobius.hpp"
#include "willmore/optimize.hpp"
#include "willmore/quadrature.hpp"
#include "willmore/random.hpp"
#include "willmore/suites.hpp"

namespace willmore::cli {

enum class Command { catalog, shape, energy, el_check, pinch, matrix_props, conformal_test, optimize };
enum class Format { json, csv };
enum class ElKind { automatic, isoparametric, surface };

inline constexpr int kExitOk = 0;
inline constexpr int kExitAssertion = 1;
inline constexpr int kExitUsage = 2;

struct RunConfig {
  Command command = Command::catalog;
  std::string example_id;            // catalog ID, or "m,n" for optimize
  std::vector<double> point;         // shape: parameter point (default: a fixed interior point)
  std::vector<std::size_t> resolution{64};  // one value for all axes, or one per axis
  double fd_step = kDefaultStep;
  Derivatives derivatives = Derivatives::automatic;
  std::uint64_t seed = 42;
  std::optional<std::uint64_t> trials;
  std::optional<double> tolerance;
  Format format = Format::json;
  std::string out_path;
  bool assert_mode = false;
  PinchingMode pinch_mode = PinchingMode::simons;
  ElKind el_kind = ElKind::automatic;
};

/// Checks the RunConfig invariants; throws DomainError.
inline void validate(const RunConfig& cfg) {
  for (std::size_t r : cfg.resolution)
    if (r < 8) throw DomainError("resolution must be at least 8 per axis");
  if (cfg.resolution.empty()) throw DomainError("resolution must be given");
  if (!(cfg.fd_step >= 1e-7 && cfg.fd_step <= 1e-2))
    throw DomainError("fd-step must lie in [1e-7, 1e-2]");
  if (cfg.trials && *cfg.trials < 1) throw DomainError("trials must be at least 1");
  if (cfg.tolerance && !(*cfg.tolerance > 0.0)) throw DomainError("tolerance must be positive");
  const bool needs_id = cfg.command != Command::catalog && cfg.command != Command::matrix_props;
  if (needs_id && cfg.example_id.empty()) throw DomainError("this command needs an example ID");
}

namespace detail {

inline std::vector<std::size_t> counts_for(const RunConfig& cfg, std::size_t dim) {
  if (cfg.resolution.size() == 1) return std::vector<std::size_t>(dim, cfg.resolution[0]);
  if (cfg.resolution.size() != dim)
    throw DomainError("resolution needs 1 or " + std::to_string(dim) + " values");
  return cfg.resolution;
}

inline std::string derivative_label(const ImmersionPatch& patch, Derivatives d) {
  if (d == Derivatives::finite_difference || !patch.has_exact()) return "fd";
  return "exact";
}

inline void emit(std::ostream& out, const Json& j, Format fmt) {
  if (fmt == Format::json)
    out << j.dump(2) << '\n';
  else
    write_flat_csv(out, j);
}

template <class Writer>
void write_out(const std::string& path, Writer&& w) {
  if (path.empty()) return;
  std::ofstream f(path);
  if (!f) throw DomainError("cannot open output file '" + path + "'");
  w(f);
}

inline Vector default_point(const ImmersionPatch& patch) {
  Vector u;
  for (const Axis& ax : patch.domain) u.push_back(ax.lo + 0.3711 * ax.length());
  return u;
}

struct Outcome {
  Outcome(Json r = Json::object()) : result(std::move(r)) {}  // NOLINT: implicit from a result

  Json result;
  bool failed = false;  // a checked expectation did not hold
  std::string message;
};

inline Outcome run_catalog() {
  Json ids = catalog_ids();
  return {Json{{"ids", ids}}};
}

inline Outcome run_shape(const RunConfig& cfg) {
  const CatalogEntry e = catalog_entry(cfg.example_id);
  const Vector u = cfg.point.empty() ? default_point(e.patch) : cfg.point;
  const ShapeData sd = shape_data(e.patch, u, cfg.fd_step, cfg.derivatives);
  Json j{{"id", cfg.example_id}, {"point", u}, {"mode", derivative_label(e.patch, cfg.derivatives)}};
  j.update(to_json(sd));
  if (sd.n >= 2) j["R"] = scalar_curvature(sd);
  return {j};
}

inline Outcome run_energy(const RunConfig& cfg) {
  const CatalogEntry e = catalog_entry(cfg.example_id);
  const double tol = cfg.tolerance.value_or(1e-6);
  const auto counts = counts_for(cfg, e.patch.n);
  Json table = Json::array();
  std::vector<std::size_t> coarse = counts;
  for (auto& c : coarse) c = std::max<std::size_t>(8, c / 2);
  double previous = 0.0, value = 0.0;
  for (const auto& cs : {coarse, counts}) {
    const QuadratureGrid grid(e.patch.domain, cs);
    previous = value;
    value = willmore_energy(e.patch, grid, cfg.fd_step, cfg.derivatives);
    table.push_back(Json{{"grid", cs}, {"value", value}});
  }
  const double drift = std::abs(value - previous) / std::max(1.0, std::abs(value));
  Json j{{"id", cfg.example_id},
         {"grid", counts},
         {"value", value},
         {"mode", derivative_label(e.patch, cfg.derivatives)},
         {"convergence", table},
         {"relative_change", drift}};
  Outcome o{j};
  if (drift > tol) {
    o.failed = true;
    o.message = "energy changed by " + format_real(drift) + " (relative) between resolutions";
  }
  return o;
}

inline Outcome run_el_check(const RunConfig& cfg) {
  const CatalogEntry e = catalog_entry(cfg.example_id);
  ElKind kind = cfg.el_kind;
  if (kind == ElKind::automatic) kind = e.spec ? ElKind::isoparametric : ElKind::surface;
  if (kind == ElKind::isoparametric) {
    if (!e.spec) throw DomainError("'" + cfg.example_id + "' has no constant shape operators");
    const double tol = cfg.tolerance.value_or(1e-12);
    const ELResidual r = el_residual_isoparametric(*e.spec);
    const bool willmore = r.norm <= tol;
    Json j{{"id", cfg.example_id}, {"kind", "isoparametric"}, {"residual", r.values},
           {"norm", r.norm},       {"scale", r.scale},         {"willmore", willmore}};
    Outcome o{j};
    if (!willmore) {
      o.failed = true;
      o.message = "Euler-Lagrange residual " + format_real(r.norm) + " exceeds " + format_real(tol);
    }
    return o;
  }
  const double tol = cfg.tolerance.value_or(1e-6);
  const QuadratureGrid grid(e.patch.domain, counts_for(cfg, e.patch.n));
  const SurfaceResidual r = el_residual_surface(e.patch, grid, cfg.fd_step, cfg.derivatives);
  write_out(cfg.out_path, [&](std::ostream& os) { write_csv(os, r.values); });
  const bool willmore = r.max_abs <= tol;
  Json j{{"id", cfg.example_id},   {"kind", "surface"},        {"grid", grid.shape()},
         {"max_residual", r.max_abs}, {"mode", derivative_label(e.patch, cfg.derivatives)},
         {"willmore", willmore}};
  Outcome o{j};
  if (!willmore) {
    o.failed = true;
    o.message = "surface residual " + format_real(r.max_abs) + " exceeds " + format_real(tol);
  }
  return o;
}

inline Outcome run_pinch(const RunConfig& cfg) {
  const CatalogEntry e = catalog_entry(cfg.example_id);
  const double tol = cfg.tolerance.value_or(1e-8);
  const QuadratureGrid grid(e.patch.domain, counts_for(cfg, e.patch.n));
  const double value = pinching_integral(e.patch, grid, cfg.pinch_mode, cfg.fd_step, cfg.derivatives);
  const double c = pinching_constant(e.patch.n, e.patch.codim(), cfg.pinch_mode);
  Json j{{"id", cfg.example_id}, {"grid", grid.shape()}, {"value", value},
         {"mode", to_string(cfg.pinch_mode)}, {"threshold", c}};
  if (e.spec) {
    const Classification cl = classify_willmore(*e.spec, e.spec->rho_sq());
    j["rho_sq"] = e.spec->rho_sq();
    Json cj{{"kind", to_string(cl.kind)}, {"threshold", cl.threshold}};
    if (cl.kind == WillmoreClass::WillmoreTorus) {
      cj["m"] = cl.m;
      cj["mirror"] = cl.mirror;
    }
    j["classification"] = cj;
  }
  Outcome o{j};
  if (value > tol) {
    o.failed = true;
    o.message = "pinching integral " + format_real(value) + " is positive";
  }
  return o;
}

inline Outcome run_matrix_props(const RunConfig& cfg) {
  const std::uint64_t trials = cfg.trials.value_or(100000);
  const SuiteReport chern = chern_suite(cfg.seed, trials);
  const SuiteReport li = li_suite(cfg.seed, trials);
  const SuiteReport f = f_tensor_suite(cfg.seed, trials);
  auto report = [](const SuiteReport& r) {
    return Json{{"trials", r.trials}, {"violations", r.violations}, {"min_slack", r.min_slack}};
  };
  Json fj = report(f);
  fj["max_residual"] = f.max_residual;
  Json j{{"seed", cfg.seed}, {"trials", trials}, {"chern", report(chern)}, {"li", report(li)},
         {"f_tensor", fj}};
  Outcome o{j};
  const double tol = cfg.tolerance.value_or(1e-12);
  if (chern.violations + li.violations + f.violations > 0 || f.max_residual > tol) {
    o.failed = true;
    o.message = "matrix inequality violated";
  }
  return o;
}

inline Outcome run_conformal_test(const RunConfig& cfg) {
  const CatalogEntry e = catalog_entry(cfg.example_id);
  const double tol = cfg.tolerance.value_or(1e-3);
  const std::uint64_t trials = cfg.trials.value_or(10);
  const QuadratureGrid grid(e.patch.domain, counts_for(cfg, e.patch.n));
  const double base = willmore_energy(e.patch, grid, cfg.fd_step, cfg.derivatives);
  Json maps = Json::array();
  double worst = 0.0;
  for (std::uint64_t k = 0; k < trials; ++k) {
    Rng rng = Rng::stream(cfg.seed, k);
    const auto [map, image] = random_mobius_image(rng, e.patch);
    const double w = willmore_energy(image, grid, cfg.fd_step, cfg.derivatives);
    const double drift = std::abs(w - base) / base;
    worst = std::max(worst, drift);
    maps.push_back(Json{{"dilation", map.dilation()},
                        {"shift", norm(map.translation())},
                        {"value", w},
                        {"relative_drift", drift}});
  }
  Json j{{"id", cfg.example_id}, {"grid", grid.shape()}, {"value", base},
         {"mode", derivative_label(e.patch, cfg.derivatives)}, {"maps", maps},
         {"max_relative_drift", worst}};
  Outcome o{j};
  if (worst > tol) {
    o.failed = true;
    o.message = "energy drift " + format_real(worst) + " exceeds " + format_real(tol);
  }
  return o;
}

inline Outcome run_optimize(const RunConfig& cfg) {
  const auto args = willmore::detail::split_args(cfg.example_id);
  if (args.size() != 2) throw UnknownIdError("optimize expects 'm,n', got '" + cfg.example_id + "'");
  const TorusFamily fam(willmore::detail::parse_count(cfg.example_id, args[0]),
                       willmore::detail::parse_count(cfg.example_id, args[1]));
  const double tol = cfg.tolerance.value_or(1e-6);
  const CriticalRadius c = find_critical_radius(fam, std::min(std::max(tol * 1e-2, 1e-12), 1e-3));
  const double expected = fam.willmore_radius();
  write_out(cfg.out_path, [&](std::ostream& os) {
    std::vector<std::vector<double>> rows;
    for (const auto& r : family_profile(fam, 181)) rows.push_back({r.r, r.energy, r.slope});
    write_csv(os, {"r", "W", "dW_dr"}, rows);
  });
  const double err = std::abs(c.radius - expected);
  Json j{{"m", fam.m},
         {"n", fam.n},
         {"radius", c.radius},
         {"expected", expected},
         {"error", err},
         {"energy", family_energy(fam, c.radius)},
         {"slope", c.slope},
         {"second_difference", c.second_difference},
         {"sign_changes", c.sign_changes}};
  Outcome o{j};
  if (err > tol) {
    o.failed = true;
    o.message = "critical radius off by " + format_real(err);
  }
  return o;
}

}  // namespace detail

/// Executes one command. Returns 0, 1 (a checked expectation failed; only in
/// assert mode, except for matrix inequality violations) or 2 (usage error).
inline int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  detail::Outcome o;
  try {
    validate(cfg);
    switch (cfg.command) {
      case Command::catalog: o = detail::run_catalog(); break;
      case Command::shape: o = detail::run_shape(cfg); break;
      case Command::energy: o = detail::run_energy(cfg); break;
      case Command::el_check: o = detail::run_el_check(cfg); break;
      case Command::pinch: o = detail::run_pinch(cfg); break;
      case Command::matrix_props: o = detail::run_matrix_props(cfg); break;
      case Command::conformal_test: o = detail::run_conformal_test(cfg); break;
      case Command::optimize: o = detail::run_optimize(cfg); break;
    }
  } catch (const UnknownIdError& e) {
    err << "error: " << e.what() << "\nknown IDs:\n";
    for (const auto& id : catalog_ids()) err << "  " << id << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DimensionError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitAssertion;
  }
  if (cfg.command == Command::catalog && cfg.format == Format::csv) {
    out << "id\n";
    for (const auto& id : o.result["ids"]) out << id.get<std::string>() << '\n';
  } else {
    detail::emit(out, o.result, cfg.format);
  }
  const bool always = cfg.command == Command::matrix_props;
  if (o.failed && (cfg.assert_mode || always)) {
    err << "assertion failed: " << o.message << '\n';
    return kExitAssertion;
  }
  if (o.failed) err << "note: " << o.message << '\n';
  return kExitOk;
}

}  // namespace willmore::cli
