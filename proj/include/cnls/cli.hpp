#pragma once

// Command implementations behind the `cnls` executable. Each command takes a
// parsed configuration, writes its files under output.dir and returns the
// process exit code.

#include <filesystem>
#include <functional>
#include <ostream>
#include <string>

#include "cnls/beta_threshold.hpp"
#include "cnls/config.hpp"
#include "cnls/coupled_solver.hpp"
#include "cnls/energy.hpp"
#include "cnls/error.hpp"
#include "cnls/io.hpp"
#include "cnls/scalar_solver.hpp"

namespace cnls::cli {

enum ExitCode : int { ok = 0, config_error = 1, numeric_error = 2, certification_error = 3, partial = 4 };

inline int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::ConfigError:
    case ErrorCode::ParseError:
    case ErrorCode::InvalidArgument:
    case ErrorCode::InvalidExponent:
    case ErrorCode::InvalidNonlinearity:
    case ErrorCode::InvalidProfile:
    case ErrorCode::LengthMismatch:
    case ErrorCode::GridMismatch:
    case ErrorCode::NegativeBeta:
    case ErrorCode::InvalidBracket:
      return config_error;
    case ErrorCode::CertificationFailure:
      return certification_error;
    default:
      return numeric_error;
  }
}

namespace detail {

inline int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code(e.code());
  }
}

inline const Nonlinearity& require_nl(const std::optional<Nonlinearity>& nl, const char* name) {
  if (!nl) throw Error(ErrorCode::ConfigError, std::string("missing ") + name + ".family");
  return *nl;
}

inline double require_beta(const RunConfig& cfg) {
  if (!cfg.beta) throw Error(ErrorCode::ConfigError, "missing beta");
  if (!(*cfg.beta > 0.0)) throw Error(ErrorCode::NegativeBeta, "beta must be positive for radial coupled solves");
  return *cfg.beta;
}

inline std::filesystem::path out_path(const RunConfig& cfg, const char* name) {
  return std::filesystem::path(cfg.output_dir) / name;
}

}  // namespace detail

inline RunConfig load_config(const std::filesystem::path& path) {
  std::string text;
  try {
    text = io::read_file(path);
  } catch (const Error& e) {
    throw Error(ErrorCode::ConfigError, e.what());
  }
  return parse_config(text);
}

inline int cmd_scalar(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    const auto& f = detail::require_nl(cfg.f, "f");
    const auto grid = make_grid(cfg.grid_R, cfg.grid_N);
    const auto gs = solve_scalar(f, grid, cfg.shooting);
    const EnergyParams params{f, Nonlinearity::zero(), 0.0};
    const auto rep = energy_report(State(gs.profile, Profile::zero(grid)), params);
    io::write_atomic(detail::out_path(cfg, "u0.csv"), io::profile_csv(gs.profile));
    io::write_atomic(detail::out_path(cfg, "u0.report"), io::report_text(rep));
    out << "a_star=" << io::fmt(gs.center_value) << " action=" << io::fmt(gs.action)
        << " residual=" << io::fmt(gs.residual) << "\n";
    return rep.residual_u < 1e-6 ? ok : numeric_error;
  });
}

inline int cmd_coupled(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    const EnergyParams params{detail::require_nl(cfg.f, "f"), detail::require_nl(cfg.g, "g"), detail::require_beta(cfg)};
    const auto grid = make_grid(cfg.grid_R, cfg.grid_N);
    const auto gs = solve_coupled(params, grid, cfg.solver, cfg.shooting);
    const auto rep = energy_report(gs.state, params);
    io::write_atomic(detail::out_path(cfg, "state.csv"), io::state_csv(gs.state));
    io::write_atomic(detail::out_path(cfg, "state.report"), io::report_text(rep));
    out << "kind=" << to_string(gs.kind) << " m=" << io::fmt(gs.energy) << " beta=" << io::fmt(params.beta) << "\n";
    if (auto clause = certificate_violation(rep)) {
      err << "certification failed: " << *clause << "\n";
      return certification_error;
    }
    return ok;
  });
}

inline int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    if (!cfg.beta_list || cfg.beta_list->empty()) throw Error(ErrorCode::ConfigError, "missing or empty beta_list");
    const EnergyParams base{detail::require_nl(cfg.f, "f"), detail::require_nl(cfg.g, "g"), 0.0};
    const auto grid = make_grid(cfg.grid_R, cfg.grid_N);
    const auto baselines = compute_baselines(base, grid, cfg.shooting);
    const auto result = sweep(base, *cfg.beta_list, grid, cfg.solver, baselines);
    io::write_atomic(detail::out_path(cfg, "sweep.csv"), io::sweep_csv(result));
    bool all_ok = true;
    for (const auto& row : result.rows) {
      if (!row.ok) {
        all_ok = false;
        err << "beta=" << io::fmt(row.beta) << " failed: " << row.error << "\n";
      }
    }
    if (result.beta0_bracket) {
      const auto [lo, hi] = *result.beta0_bracket;
      out << "beta0_bracket=" << io::fmt(lo) << "," << io::fmt(hi) << "\n";
      if (cfg.bisect_tol) {
        const double b0 = bisect_beta0(base, *result.beta0_bracket, *cfg.bisect_tol, grid, cfg.solver, baselines);
        out << "beta0=" << io::fmt(b0) << "\n";
      }
    } else {
      out << "beta0_bracket=none\n";
    }
    return all_ok ? ok : partial;
  });
}

inline int cmd_check(const RunConfig& cfg, const std::filesystem::path& state_csv, std::ostream& out,
                     std::ostream& err) {
  return detail::guarded(err, [&] {
    const EnergyParams params{detail::require_nl(cfg.f, "f"), detail::require_nl(cfg.g, "g"),
                              cfg.beta ? *cfg.beta : throw Error(ErrorCode::ConfigError, "missing beta")};
    const auto grid = make_grid(cfg.grid_R, cfg.grid_N);
    std::string text;
    try {
      text = io::read_file(state_csv);
    } catch (const Error& e) {
      throw Error(ErrorCode::ParseError, e.what());
    }
    const auto state = io::parse_state_csv(text, grid);
    const auto rep = energy_report(state, params);
    out << io::report_text(rep);
    if (auto clause = certificate_violation(rep)) {
      err << "certification failed: " << *clause << "\n";
      return certification_error;
    }
    return ok;
  });
}

}  // namespace cnls::cli
