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

#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace bdd::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitAcceptanceFailure = 1;
inline constexpr int kExitUsage = 2;

/// Invalid or missing parameters; maps to exit code 2.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct RunConfig {
  std::string subcommand;
  std::optional<std::uint64_t> seed;
  int N = 2;
  int m = 1;
  std::optional<int> n_s;
  int n_e = 1;
  double t_min = 1e-3;
  double t_max = 1e-1;
  int points = 10;
  std::optional<double> tol;
  std::string out = "-";

  // Settable from the config file or the long flags below.
  std::string scheme = "udd";  ///< schedule: udd | nudd | homogenization
  int degree = 0;
  double scale_ss = 1.0;
  double scale_se = 1.0;
  double scale_ee = 1.0;
  double window_lo = 1e-12;
  double window_hi = 1e-2;
  double slope_margin_lo = 0.7;
  double slope_margin_hi = 1.5;
  unsigned threads = 1;

  // verify
  bool check_basis = false;
  bool check_dyson = false;
  bool check_correspondence = false;
  bool mutate = false;
  std::size_t max_tuples = 100000;

  // spectrum
  int bath_size = 3;
  double beta = 1.0;
  bool beta_infinite = false;
  std::string sweep = "T";  ///< T | omega
  bool cross_validate = false;
};

/// Parses argv (flags override the key=value config file). Throws UsageError.
RunConfig parse_arguments(int argc, const char* const* argv);

/// Worker count from BDD_THREADS, else the hardware concurrency.
unsigned default_threads();

/// Each command writes its primary output to `out` and a one-line summary to `log`.
int cmd_schedule(const RunConfig& cfg, std::ostream& out, std::ostream& log);
int cmd_decouple_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& log);
int cmd_homogenize_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& log);
int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& log);
int cmd_spectrum(const RunConfig& cfg, std::ostream& out, std::ostream& log);

/// Dispatches on cfg.subcommand, writing to cfg.out (or `out` for "-").
int run(const RunConfig& cfg, std::ostream& out, std::ostream& log);

/// Parses and runs; exceptions become exit codes.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& log);

}  // namespace bdd::cli
