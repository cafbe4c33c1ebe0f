// Copyright 2026 The bosonic-dd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "bdd_cli/commands.hpp"

#include "bdd/csv.hpp"
#include "bdd/dyson.hpp"
#include "bdd/evolution.hpp"
#include "bdd/pauli_basis.hpp"
#include "bdd/random.hpp"
#include "bdd/spin_boson.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <memory>
#include <sstream>
#include <thread>

namespace bdd::cli {

namespace {

const char* const kSubcommands[] = {"schedule", "decouple-sweep", "homogenize-sweep", "verify",
                                    "spectrum"};

std::unique_ptr<CLI::App> build_app(RunConfig& cfg) {
  auto app = std::make_unique<CLI::App>("Bosonic dynamical decoupling and homogenization toolkit", "bdd");
  app->config_formatter(std::make_shared<CLI::ConfigINI>());
  app->set_config("--config", "", "key=value configuration file; flags take precedence");
  app->option_defaults()->always_capture_default();

  app->add_option("--seed", cfg.seed, "RNG seed (required for randomized inputs)");
  app->add_option("--N", cfg.N, "Suppression order / pulses per UDD level")->check(CLI::Range(1, 12));
  app->add_option("--m", cfg.m, "Number of mode-label bits (2^m system modes)")->check(CLI::Range(0, 4));
  app->add_option("--nS", cfg.n_s, "System modes")->check(CLI::Range(1, 64));
  app->add_option("--nE", cfg.n_e, "Environment modes")->check(CLI::Range(0, 64));
  app->add_option("--tmin", cfg.t_min, "Smallest grid value")->check(CLI::PositiveNumber);
  app->add_option("--tmax", cfg.t_max, "Largest grid value")->check(CLI::PositiveNumber);
  app->add_option("--points", cfg.points, "Grid points")->check(CLI::Range(1, 10000));
  app->add_option("--tol", cfg.tol, "Integrator tolerance (sweeps) or zero tolerance (verify)")
      ->check(CLI::PositiveNumber);
  app->add_option("--out", cfg.out, "Output path, '-' for stdout");

  app->add_option("--scheme", cfg.scheme, "Schedule kind")
      ->check(CLI::IsMember({"udd", "nudd", "homogenization"}));
  app->add_option("--degree", cfg.degree, "Polynomial degree of random generators")->check(CLI::Range(0, 4));
  app->add_option("--scale-ss", cfg.scale_ss, "System block scale")->check(CLI::NonNegativeNumber);
  app->add_option("--scale-se", cfg.scale_se, "Coupling block scale")->check(CLI::NonNegativeNumber);
  app->add_option("--scale-ee", cfg.scale_ee, "Environment block scale")->check(CLI::NonNegativeNumber);
  app->add_option("--window-lo", cfg.window_lo, "Lower residual bound of the fit window")
      ->check(CLI::PositiveNumber);
  app->add_option("--window-hi", cfg.window_hi, "Upper residual bound of the fit window")
      ->check(CLI::PositiveNumber);
  app->add_option("--threads", cfg.threads, "Worker threads (default: BDD_THREADS or all cores)")
      ->check(CLI::Range(1, 1024));
  app->add_option("--slope-lo", cfg.slope_margin_lo, "Accepted slope is at least N + this");
  app->add_option("--slope-hi", cfg.slope_margin_hi, "Accepted slope is at most N + this");

  app->add_flag("--basis", cfg.check_basis, "verify: basis algebra checks");
  app->add_flag("--dyson", cfg.check_dyson, "verify: Dyson integral conditions");
  app->add_flag("--correspondence", cfg.check_correspondence, "verify: qubit/bosonic sign functions");
  app->add_flag("--mutate", cfg.mutate, "verify: corrupt one homogenization pulse first");
  app->add_option("--max-tuples", cfg.max_tuples, "verify: tuple budget before sampling")
      ->check(CLI::PositiveNumber);

  app->add_option("--bath", cfg.bath_size, "spectrum: bath modes")->check(CLI::Range(1, 64));
  app->add_option("--beta", cfg.beta, "spectrum: inverse temperature")->check(CLI::PositiveNumber);
  app->add_flag("--vacuum", cfg.beta_infinite, "spectrum: zero-temperature bath");
  app->add_option("--sweep", cfg.sweep, "spectrum: sweep variable")->check(CLI::IsMember({"T", "omega"}));
  app->add_flag("--cross-validate", cfg.cross_validate, "spectrum: add a simulation deviation column");

  for (const char* name : kSubcommands) {
    app->add_subcommand(name)->fallthrough();
  }
  app->get_subcommand("schedule")->description("Write a pulse schedule file");
  app->get_subcommand("decouple-sweep")->description("Decoupling residual against T");
  app->get_subcommand("homogenize-sweep")->description("Homogenization residual against T");
  app->get_subcommand("verify")->description("Basis, Dyson and correspondence checks");
  app->get_subcommand("spectrum")->description("Spin-boson channel parameters and filter function");
  app->require_subcommand(1);
  return app;
}

std::uint64_t require_seed(const RunConfig& cfg) {
  if (!cfg.seed) {
    throw UsageError(cfg.subcommand + ": --seed is required");
  }
  return *cfg.seed;
}

std::vector<double> grid(const RunConfig& cfg) {
  if (cfg.t_max < cfg.t_min) {
    throw UsageError("--tmax must not be below --tmin");
  }
  return logspace(cfg.t_min, cfg.t_max, cfg.points);
}

PropagatorConfig propagator(const RunConfig& cfg) {
  PropagatorConfig p;
  if (cfg.tol) p.tolerance = *cfg.tol;
  return p;
}

std::string flag(bool b) { return b ? "1" : "0"; }

std::string sweep_csv(const SweepResult& r) {
  CsvTable table({"T", "residual", "omega", "bound", "floor_flag"});
  for (std::size_t i = 0; i < r.T.size(); ++i) {
    table.add_row({format_double(r.T[i]), format_double(r.residual[i]), format_double(r.omega[i]),
                   format_double(r.bound[i]), flag(r.floor_flag[i])});
  }
  return table.str();
}

int judge_sweep(const RunConfig& cfg, const SweepResult& r, const char* what, std::ostream& log) {
  const bool all_floor = std::all_of(r.floor_flag.begin(), r.floor_flag.end(), [](bool f) { return f; });
  if (!r.slope) {
    if (all_floor) {
      log << what << ": every residual is at the integrator floor; nothing to suppress\n";
      return kExitOk;
    }
    log << what << ": fewer than 3 points inside the fit window\n";
    return kExitAcceptanceFailure;
  }
  const double lo = cfg.N + cfg.slope_margin_lo;
  const double hi = cfg.N + cfg.slope_margin_hi;
  const bool pass = *r.slope >= lo && *r.slope <= hi;
  log << what << ": N=" << cfg.N << " slope=" << format_double(*r.slope) << " accepted=[" << lo << ", "
      << hi << "] " << (pass ? "PASS" : "FAIL") << '\n';
  return pass ? kExitOk : kExitAcceptanceFailure;
}

PulseSchedule mutated(PulseSchedule s) {
  for (ScheduledPulse& p : s.pulses) {
    if (!p.index.is_zero()) {
      p.index = p.index ^ symplectic_form_index(s.m);
      return s;
    }
  }
  return s;
}

struct CheckRow {
  std::string name;
  int N;
  int m;
  std::size_t items;
  double deviation;
  bool exhaustive;
  bool pass;
};

BathSpec seeded_bath(const RunConfig& cfg) {
  Rng rng(require_seed(cfg));
  BathSpec bath;
  for (int j = 0; j < cfg.bath_size; ++j) {
    bath.lambda.push_back(rng.uniform(-1.0, 1.0));
    bath.omega.push_back(rng.uniform(0.2, 1.0));
  }
  const double top = *std::max_element(bath.omega.begin(), bath.omega.end());
  for (double& w : bath.omega) w /= top;
  bath.beta = cfg.beta;
  bath.beta_infinite = cfg.beta_infinite;
  return bath;
}

std::vector<double> periodic_times(std::size_t L) {
  std::vector<double> d;
  for (std::size_t j = 1; j <= L; ++j) d.push_back((static_cast<double>(j) - 0.5) / static_cast<double>(L));
  return d;
}

}  // namespace

unsigned default_threads() {
  if (const char* env = std::getenv("BDD_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 1 || v > 1024) {
      throw UsageError("BDD_THREADS must be an integer in 1..1024");
    }
    return static_cast<unsigned>(v);
  }
  return std::max(1U, std::thread::hardware_concurrency());
}

RunConfig parse_arguments(int argc, const char* const* argv) {
  RunConfig cfg;
  auto app = build_app(cfg);
  try {
    app->parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    throw;
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }
  for (const char* name : kSubcommands) {
    if (app->got_subcommand(name)) cfg.subcommand = name;
  }
  if (app->count("--threads") == 0) cfg.threads = default_threads();
  return cfg;
}

int cmd_schedule(const RunConfig& cfg, std::ostream& out, std::ostream& log) {
  PulseSchedule s;
  if (cfg.scheme == "udd") {
    s = decoupling_schedule(cfg.N);
  } else if (cfg.scheme == "nudd") {
    s = nudd_schedule(cfg.N, cfg.m);
  } else if (cfg.scheme == "homogenization") {
    s = homogenization_schedule(cfg.N, cfg.m);
  } else {
    throw UsageError("schedule: unknown scheme " + cfg.scheme);
  }
  write_schedule(out, s);
  log << "schedule: " << s.scheme << " N=" << s.N << " m=" << s.m << " pulses=" << s.size() << '\n';
  return kExitOk;
}

int cmd_decouple_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& log) {
  const ModeLayout layout(static_cast<std::size_t>(cfg.n_s.value_or(1)), static_cast<std::size_t>(cfg.n_e));
  if (cfg.n_e < 1) {
    throw UsageError("decouple-sweep: needs at least one environment mode");
  }
  const AnalyticGenerator gen = random_generator(
      layout, require_seed(cfg), GeneratorScales{cfg.scale_ss, cfg.scale_se, cfg.scale_ee}, cfg.degree);
  SweepOptions options;
  options.window_lo = cfg.window_lo;
  options.window_hi = cfg.window_hi;
  options.threads = cfg.threads;
  options.with_bound = cfg.degree == 0;
  const SweepResult r = order_sweep(gen, SweepScheme{SweepKind::decoupling, cfg.N, 0}, grid(cfg),
                                    propagator(cfg), options);
  out << sweep_csv(r);
  return judge_sweep(cfg, r, "decouple-sweep", log);
}

int cmd_homogenize_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& log) {
  const int modes = 1 << cfg.m;
  if (cfg.n_s && *cfg.n_s != modes) {
    throw UsageError("homogenize-sweep: --nS must equal 2^m");
  }
  if (std::pow(cfg.N + 1.0, 2.0 * cfg.m + 2.0) > 1e6) {
    throw UsageError("homogenize-sweep: (N+1)^{2m+2} exceeds 10^6");
  }
  const ModeLayout layout(static_cast<std::size_t>(modes), static_cast<std::size_t>(cfg.n_e));
  const AnalyticGenerator gen = random_generator(
      layout, require_seed(cfg), GeneratorScales{cfg.scale_ss, 0.0, cfg.scale_ee}, cfg.degree);
  SweepOptions options;
  options.window_lo = cfg.window_lo;
  options.window_hi = cfg.window_hi;
  options.threads = cfg.threads;
  const SweepResult r = order_sweep(gen, SweepScheme{SweepKind::homogenization, cfg.N, cfg.m}, grid(cfg),
                                    propagator(cfg), options);
  out << sweep_csv(r);
  return judge_sweep(cfg, r, "homogenize-sweep", log);
}

int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& log) {
  if (!cfg.check_basis && !cfg.check_dyson && !cfg.check_correspondence) {
    throw UsageError("verify: choose at least one of --basis, --dyson, --correspondence");
  }
  const double tol = cfg.tol.value_or(1e-10);
  const TupleBudget budget{cfg.max_tuples, cfg.seed.value_or(1)};
  std::vector<CheckRow> rows;

  if (cfg.check_basis) {
    for (int m = 0; m <= std::min(cfg.m, 3); ++m) {
      const std::size_t expected = 2 * (std::size_t{1} << (2 * m)) + (std::size_t{1} << m);
      const auto gamma = enumerate_gamma(m);
      rows.push_back({"gamma-count", 0, m, gamma.size(), 0.0, true, gamma.size() == expected});

      const Matrix j = canonical_form(std::size_t{1} << m);
      double worst = 0.0;
      const auto tilde = enumerate_gamma_tilde(m);
      for (const MultiIndex& b : tilde) {
        const Matrix s = s_matrix(b);
        worst = std::max({worst, (s * j * s.transpose() - j).norm(),
                          (s.transpose() * s - Matrix::Identity(s.rows(), s.cols())).norm()});
      }
      rows.push_back({"gamma-tilde-orthosymplectic", 0, m, tilde.size(), worst, true, worst <= 1e-12});

      const AdjointActionReport adj = verify_adjoint_action(m, 1e-12, m <= 2 ? 100000 : 1000, budget.seed);
      rows.push_back({"adjoint-action", 0, m, adj.pairs_checked, adj.max_deviation, adj.exhaustive, adj.passed()});
    }
  }

  if (cfg.check_dyson) {
    if (cfg.N <= 8) {
      const ConditionReport udd = check_udd_condition(cfg.N, tol);
      rows.push_back({"udd-condition", cfg.N, 0, udd.tuples.size(), udd.max_violation, true, udd.passed()});
      const ConditionReport bos = check_bosonic_decoupling_condition(cfg.N, tol);
      rows.push_back({"bosonic-decoupling-condition", cfg.N, 0, bos.tuples.size(), bos.max_violation, true,
                      bos.passed()});
      const int order = first_violated_udd_order(cfg.N);
      rows.push_back({"udd-first-violated-order", cfg.N, 0, static_cast<std::size_t>(std::max(order, 0)), 0.0,
                      true, order == cfg.N + 1});
    }
    if (cfg.m >= 1 && std::pow(cfg.N + 1.0, 2.0 * cfg.m + 2.0) <= 1e4) {
      PulseSchedule h = homogenization_schedule(cfg.N, cfg.m);
      if (cfg.mutate) h = mutated(h);
      const ConditionReport r = check_homogenization_schedule(h, budget, tol);
      rows.push_back({"homogenization-condition", cfg.N, cfg.m, r.tuples.size(), r.max_violation, r.exhaustive,
                      r.passed()});
      const ConditionReport q = check_qubit_nudd_condition(cfg.N, cfg.m, budget, tol);
      rows.push_back({"qubit-nudd-condition", cfg.N, cfg.m, q.tuples.size(), q.max_violation, q.exhaustive,
                      q.passed()});
    }
  }

  if (cfg.check_correspondence && cfg.m >= 1) {
    const PulseSchedule qubit = nudd_schedule(cfg.N, cfg.m);
    PulseSchedule bosonic = substitute_bosonic(qubit);
    if (cfg.mutate) bosonic = mutated(bosonic);
    const CorrespondenceReport c = compare_qubit_bosonic(qubit, bosonic);
    rows.push_back({"qubit-bosonic-correspondence", cfg.N, cfg.m, c.checked, static_cast<double>(c.mismatches),
                    true, c.passed()});
  }

  CsvTable table({"check", "N", "m", "items", "max_deviation", "exhaustive", "pass"});
  bool all = true;
  for (const CheckRow& r : rows) {
    all = all && r.pass;
    table.add_row({r.name, std::to_string(r.N), std::to_string(r.m), std::to_string(r.items),
                   format_double(r.deviation), flag(r.exhaustive), flag(r.pass)});
  }
  out << table.str();
  log << "verify: " << rows.size() << " checks, " << (all ? "PASS" : "FAIL") << '\n';
  return all ? kExitOk : kExitAcceptanceFailure;
}

int cmd_spectrum(const RunConfig& cfg, std::ostream& out, std::ostream& log) {
  const std::vector<double> udd = udd_times(cfg.N);
  if (udd.size() % 2 != 0) {
    throw UsageError("spectrum: the pulse train length N must be even");
  }
  const std::vector<double> periodic = periodic_times(udd.size());
  const std::vector<double> xs = grid(cfg);
  std::vector<std::string> header;
  if (cfg.sweep == "T") {
    header = {"T", "x_res_udd", "y_res_udd", "filter_udd", "x_res_periodic", "y_res_periodic", "filter_periodic"};
  } else {
    header = {"omega", "x_res_udd", "y_res_udd", "filter_udd", "x_res_periodic", "y_res_periodic",
              "filter_periodic"};
  }
  if (cfg.cross_validate) header.push_back("cv_deviation");
  CsvTable table(header);

  const BathSpec bath = seeded_bath(cfg);
  double worst = 0.0;
  for (double v : xs) {
    // T sweep: the seeded bath at total time v. Omega sweep: one unit-coupling line at v, T = 1.
    BathSpec b = bath;
    double T = v;
    if (cfg.sweep == "omega") {
      b.lambda = {1.0};
      b.omega = {v};
      T = 1.0;
    }
    const double z = cfg.sweep == "omega" ? v : v * *std::max_element(b.omega.begin(), b.omega.end());
    std::vector<std::string> row{format_double(v),
                                 format_double(x_res(T, b, udd)),
                                 format_double(y_res(T, b, udd)),
                                 format_double(std::norm(y_L(z, udd))),
                                 format_double(x_res(T, b, periodic)),
                                 format_double(y_res(T, b, periodic)),
                                 format_double(std::norm(y_L(z, periodic)))};
    if (cfg.cross_validate) {
      const double dev = cross_validate(b, udd, T, Matrix::Identity(2, 2), propagator(cfg)).deviation;
      worst = std::max(worst, dev);
      row.push_back(format_double(dev));
    }
    table.add_row(row);
  }
  out << table.str();
  const bool pass = worst <= 1e-8;
  log << "spectrum: " << xs.size() << " rows";
  if (cfg.cross_validate) log << ", max deviation " << format_double(worst) << (pass ? " PASS" : " FAIL");
  log << '\n';
  return pass ? kExitOk : kExitAcceptanceFailure;
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& log) {
  std::ostringstream buffer;
  int code = kExitUsage;
  if (cfg.subcommand == "schedule") {
    code = cmd_schedule(cfg, buffer, log);
  } else if (cfg.subcommand == "decouple-sweep") {
    code = cmd_decouple_sweep(cfg, buffer, log);
  } else if (cfg.subcommand == "homogenize-sweep") {
    code = cmd_homogenize_sweep(cfg, buffer, log);
  } else if (cfg.subcommand == "verify") {
    code = cmd_verify(cfg, buffer, log);
  } else if (cfg.subcommand == "spectrum") {
    code = cmd_spectrum(cfg, buffer, log);
  } else {
    throw UsageError("unknown subcommand '" + cfg.subcommand + "'");
  }
  if (cfg.out.empty() || cfg.out == "-") {
    out << buffer.str();
  } else {
    write_text(cfg.out, buffer.str());
  }
  return code;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& log) {
  try {
    return run(parse_arguments(argc, argv), out, log);
  } catch (const CLI::CallForHelp&) {
    RunConfig scratch;
    out << build_app(scratch)->help();
    return kExitOk;
  } catch (const UsageError& e) {
    log << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ResourceGuardError& e) {
    log << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    log << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
    return kExitAcceptanceFailure;
  }
}

}  // namespace bdd::cli
