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

#include "bdd/schedules.hpp"
#include "bdd/symplectic.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

namespace bdd {

/// Step halving ran out of depth before meeting the tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Homogenization fit with c1 = c2 = 0.
class FitUndefinedError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// X(t) = sum_r X_r t^r and optional linear terms b(t) = sum_r b_r t^r.
struct AnalyticGenerator {
  ModeLayout layout{1, 0};
  std::vector<Matrix> x;
  std::vector<Vector> b;
  bool decoupled = false;

  Matrix at(double t) const;
  Vector linear_at(double t) const;
  bool time_independent() const { return x.size() <= 1; }

  /// Throws if a coefficient is outside the algebra or breaks the decoupled flag.
  void validate(double tol = 1e-10) const;
};

/// Step halving stops once successive results differ by at most
/// tolerance * max(1, |S|) in the Frobenius norm.
struct PropagatorConfig {
  int substeps = 16;
  double tolerance = 1e-12;
  int max_depth = 8;
};

/// Time-ordered exponential of X(t) on [t0, t1].
Matrix propagate(const AnalyticGenerator& gen, double t0, double t1, const PropagatorConfig& cfg = {});

/// Same, for an arbitrary matrix-valued function.
Matrix propagate_function(const std::function<Matrix(double)>& x, Eigen::Index dim, double t0,
                          double t1, const PropagatorConfig& cfg = {});

/// The pulse matrix for one schedule entry, embedded as P (+) I_E.
Matrix embedded_pulse(const ScheduledPulse& pulse, PulseKind kind, const ModeLayout& layout);

/// Free evolution interleaved with the schedule's pulses at Delta_j * T.
/// Pulses at Delta = 1 act after the last free segment.
Matrix resulting_evolution(const AnalyticGenerator& gen, const PulseSchedule& schedule, double T,
                           const PropagatorConfig& cfg = {});

/// S_ctr(t)^{-1} X(t) S_ctr(t), with S_ctr the product of pulses before t.
Matrix toggling_generator(const AnalyticGenerator& gen, const PulseSchedule& schedule, double T,
                          double t);

double decoupling_residual(const Matrix& s, const ModeLayout& layout);

/// Spectral norm of the off-diagonal blocks.
double decoupling_residual_spectral(const Matrix& s, const ModeLayout& layout);

struct HomogenizationFit {
  double omega = 0.0;
  double residual = 0.0;
};

/// Projects S_sys onto span{I, J} and measures the distance to e^{omega T J}.
HomogenizationFit homogenization_fit(const Matrix& s_sys, double T);

struct BoundResult {
  double value = 0.0;
  bool closed_form = true;  ///< false when (J0 + Jz) T > 1 and the series form is used
};

BoundResult suppression_bound(double j0, double jz, int N, double T);

/// J0 = |X_EE|, Jz = |X_SS| + |X_SE| in spectral norm, for a time-independent generator.
std::pair<double, double> coupling_strengths(const AnalyticGenerator& gen);

enum class SweepKind { decoupling, homogenization };

struct SweepScheme {
  SweepKind kind = SweepKind::decoupling;
  int N = 1;
  int m = 1;
};

struct SweepOptions {
  double window_lo = 1e-12;
  double window_hi = 1e-2;
  unsigned threads = 1;
  bool with_bound = false;
};

struct SweepResult {
  std::vector<double> T;
  std::vector<double> residual;
  std::vector<double> omega;  ///< NaN for decoupling sweeps
  std::vector<double> bound;  ///< NaN unless requested
  std::vector<bool> floor_flag;
  std::optional<double> slope;
  double window_lo = 0.0;
  double window_hi = 0.0;

  std::size_t usable_points() const;
};

SweepResult order_sweep(const AnalyticGenerator& gen, const SweepScheme& scheme,
                        const std::vector<double>& t_grid, const PropagatorConfig& cfg = {},
                        const SweepOptions& options = {});

/// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

/// n log-spaced points from lo to hi inclusive.
std::vector<double> logspace(double lo, double hi, int n);

struct AffineResult {
  Matrix s;
  Matrix covariance;
  Vector displacement;
};

/// Covariance and displacement under d' = X(t) d + J b(t), optionally with pulses.
AffineResult affine_propagate(const AnalyticGenerator& gen, const Matrix& m0, const Vector& d0,
                              double T, const PropagatorConfig& cfg = {},
                              const PulseSchedule* schedule = nullptr);

struct GeneratorScales {
  double ss = 1.0;
  double se = 1.0;
  double ee = 1.0;
};

/// X_r = A_r J with A_r symmetric, entries uniform in [-1, 1] scaled per block.
AnalyticGenerator random_generator(const ModeLayout& layout, std::uint64_t seed,
                                   const GeneratorScales& scales, int degree);

/// Random linear coefficients b_r with entries uniform in [-scale, scale].
std::vector<Vector> random_linear_terms(const ModeLayout& layout, std::uint64_t seed, double scale,
                                        int degree);

}  // namespace bdd
