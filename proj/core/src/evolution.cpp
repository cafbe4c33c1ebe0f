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

#include "bdd/evolution.hpp"

#include "bdd/random.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numbers>
#include <thread>

namespace bdd {

namespace {

// Fourth-order commutator-free step with Gauss-Legendre nodes.
const double kSqrt3 = std::sqrt(3.0);
const double kC1 = 0.5 - kSqrt3 / 6.0;
const double kC2 = 0.5 + kSqrt3 / 6.0;
const double kA1 = (3.0 - 2.0 * kSqrt3) / 12.0;
const double kA2 = (3.0 + 2.0 * kSqrt3) / 12.0;

Matrix cf4_sweep(const std::function<Matrix(double)>& x, Eigen::Index dim, double t0, double t1,
                 int steps) {
  Matrix s = Matrix::Identity(dim, dim);
  const double h = (t1 - t0) / steps;
  for (int k = 0; k < steps; ++k) {
    const double t = t0 + k * h;
    const Matrix x1 = x(t + kC1 * h);
    const Matrix x2 = x(t + kC2 * h);
    const Matrix first = matrix_exponential(h * (kA2 * x1 + kA1 * x2));
    const Matrix second = matrix_exponential(h * (kA1 * x1 + kA2 * x2));
    s = second * first * s;
  }
  return s;
}

template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& body) {
  threads = std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(count)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < threads; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

void check_schedule_fits(const PulseSchedule& schedule, const ModeLayout& layout) {
  if (schedule.kind != PulseKind::indexed) {
    return;
  }
  const std::size_t expected = std::size_t{2} << schedule.m;
  if (expected != static_cast<std::size_t>(layout.system_dimension())) {
    throw DimensionError("schedule pulses do not match the system dimension 2 * 2^m");
  }
}

// Free segments interleaved with pulses. `segment(t0, t1)` returns the free propagator,
// `pulse(p)` the matrix of one entry.
Matrix run_schedule(const PulseSchedule* schedule, double T, Eigen::Index dim,
                    const std::function<Matrix(double, double)>& segment,
                    const std::function<Matrix(const ScheduledPulse&)>& pulse) {
  Matrix s = Matrix::Identity(dim, dim);
  double prev = 0.0;
  std::size_t j = 0;
  if (schedule != nullptr) {
    for (; j < schedule->pulses.size() && schedule->pulses[j].delta < 1.0; ++j) {
      const double t = schedule->pulses[j].delta * T;
      s = pulse(schedule->pulses[j]) * segment(prev, t) * s;
      prev = t;
    }
  }
  s = segment(prev, T) * s;
  if (schedule != nullptr) {
    for (; j < schedule->pulses.size(); ++j) {
      s = pulse(schedule->pulses[j]) * s;
    }
  }
  return s;
}

}  // namespace

Matrix AnalyticGenerator::at(double t) const {
  const Eigen::Index dim = layout.dimension();
  Matrix out = Matrix::Zero(dim, dim);
  for (auto it = x.rbegin(); it != x.rend(); ++it) {
    out = out * t + *it;
  }
  return out;
}

Vector AnalyticGenerator::linear_at(double t) const {
  const Eigen::Index dim = layout.dimension();
  Vector out = Vector::Zero(dim);
  for (auto it = b.rbegin(); it != b.rend(); ++it) {
    out = out * t + *it;
  }
  return out;
}

void AnalyticGenerator::validate(double tol) const {
  const Matrix j = build_symplectic_form(layout);
  const Eigen::Index dim = layout.dimension();
  for (const Matrix& xr : x) {
    if (xr.rows() != dim || xr.cols() != dim) {
      throw DimensionError("AnalyticGenerator: coefficient dimension mismatch");
    }
    if (!is_in_sp_algebra(xr, j, tol)) {
      throw std::invalid_argument("AnalyticGenerator: coefficient outside the symplectic algebra");
    }
    if (decoupled && offdiag_residual(xr, layout) > tol) {
      throw std::invalid_argument("AnalyticGenerator: decoupled flag with nonzero coupling");
    }
  }
  for (const Vector& br : b) {
    if (br.size() != dim) {
      throw DimensionError("AnalyticGenerator: linear term dimension mismatch");
    }
  }
}

Matrix propagate_function(const std::function<Matrix(double)>& x, Eigen::Index dim, double t0,
                          double t1, const PropagatorConfig& cfg) {
  if (t1 < t0) {
    throw std::invalid_argument("propagate: t1 < t0");
  }
  if (cfg.substeps < 1 || !(cfg.tolerance > 0.0) || cfg.max_depth < 0) {
    throw std::invalid_argument("propagate: invalid configuration");
  }
  if (t1 == t0) {
    return Matrix::Identity(dim, dim);
  }
  int steps = cfg.substeps;
  Matrix coarse = cf4_sweep(x, dim, t0, t1, steps);
  if (cfg.max_depth == 0) {
    return coarse;  // unverified single pass
  }
  for (int depth = 0; depth < cfg.max_depth; ++depth) {
    steps *= 2;
    Matrix fine = cf4_sweep(x, dim, t0, t1, steps);
    if ((fine - coarse).norm() <= cfg.tolerance * std::max(1.0, fine.norm())) {
      return fine;
    }
    coarse = std::move(fine);
  }
  throw ConvergenceError("propagate: step halving did not reach the tolerance");
}

Matrix propagate(const AnalyticGenerator& gen, double t0, double t1, const PropagatorConfig& cfg) {
  const Eigen::Index dim = gen.layout.dimension();
  if (t1 < t0) {
    throw std::invalid_argument("propagate: t1 < t0");
  }
  if (gen.x.empty()) {
    return Matrix::Identity(dim, dim);
  }
  if (gen.time_independent()) {
    return matrix_exponential((t1 - t0) * gen.x.front());
  }
  return propagate_function([&](double t) { return gen.at(t); }, dim, t0, t1, cfg);
}

Matrix embedded_pulse(const ScheduledPulse& pulse, PulseKind kind, const ModeLayout& layout) {
  const Eigen::Index ds = layout.system_dimension();
  Matrix p = Matrix::Identity(layout.dimension(), layout.dimension());
  if (kind == PulseKind::phase_flip) {
    p.topLeftCorner(ds, ds) *= -static_cast<double>(pulse.sign);
    return p;
  }
  const Matrix s = s_matrix(pulse.index);
  if (s.rows() != ds) {
    throw DimensionError("embedded_pulse: pulse dimension differs from the system dimension");
  }
  p.topLeftCorner(ds, ds) = pulse.sign * s;
  return p;
}

Matrix resulting_evolution(const AnalyticGenerator& gen, const PulseSchedule& schedule, double T,
                           const PropagatorConfig& cfg) {
  if (T < 0.0) {
    throw std::invalid_argument("resulting_evolution: negative total time");
  }
  check_schedule_fits(schedule, gen.layout);
  return run_schedule(
      &schedule, T, gen.layout.dimension(),
      [&](double a, double b) { return propagate(gen, a, b, cfg); },
      [&](const ScheduledPulse& p) { return embedded_pulse(p, schedule.kind, gen.layout); });
}

Matrix toggling_generator(const AnalyticGenerator& gen, const PulseSchedule& schedule, double T,
                          double t) {
  if (t < 0.0 || t > T) {
    throw std::invalid_argument("toggling_generator: t outside [0, T]");
  }
  check_schedule_fits(schedule, gen.layout);
  const Eigen::Index dim = gen.layout.dimension();
  Matrix control = Matrix::Identity(dim, dim);
  for (const ScheduledPulse& p : schedule.pulses) {
    if (p.delta * T >= t) {
      break;
    }
    control = embedded_pulse(p, schedule.kind, gen.layout) * control;
  }
  return control.inverse() * gen.at(t) * control;
}

double decoupling_residual(const Matrix& s, const ModeLayout& layout) {
  return offdiag_residual(s, layout);
}

double decoupling_residual_spectral(const Matrix& s, const ModeLayout& layout) {
  BlockParts parts = block_decompose(s, layout);
  parts.ss.setZero();
  parts.ee.setZero();
  return spectral_norm(block_assemble(parts));
}

HomogenizationFit homogenization_fit(const Matrix& s_sys, double T) {
  if (s_sys.rows() != s_sys.cols() || s_sys.rows() % 2 != 0) {
    throw DimensionError("homogenization_fit: expected an even square matrix");
  }
  if (!(T > 0.0)) {
    throw std::invalid_argument("homogenization_fit: T must be positive");
  }
  const Eigen::Index dim = s_sys.rows();
  const Matrix j = canonical_form(static_cast<std::size_t>(dim / 2));
  const double c1 = s_sys.trace() / static_cast<double>(dim);
  const double c2 = (j.transpose() * s_sys).trace() / static_cast<double>(dim);
  if (std::hypot(c1, c2) < 1e-14) {
    throw FitUndefinedError("homogenization_fit: no component along span{I, J}");
  }
  const double theta = std::atan2(c2, c1);
  const Matrix target = std::cos(theta) * Matrix::Identity(dim, dim) + std::sin(theta) * j;
  return HomogenizationFit{theta / T, (s_sys - target).norm()};
}

BoundResult suppression_bound(double j0, double jz, int N, double T) {
  if (j0 < 0.0 || jz < 0.0 || T < 0.0 || N < 0) {
    throw std::invalid_argument("suppression_bound: negative argument");
  }
  const double x = (j0 + jz) * T;
  if (x <= 1.0) {
    const double value = std::numbers::e * std::numbers::sqrt2 * std::pow(x, N + 1) /
                         std::tgamma(static_cast<double>(N) + 2.0);
    return {value, true};
  }
  double head = 0.0;
  double term = 1.0;
  for (int s = 0; s <= N; ++s) {
    head += term;
    term *= x / (s + 1);
  }
  return {std::numbers::sqrt2 * (std::exp(x) - head), false};
}

std::pair<double, double> coupling_strengths(const AnalyticGenerator& gen) {
  if (!gen.time_independent()) {
    throw std::invalid_argument("coupling_strengths: generator must be time independent");
  }
  if (gen.x.empty()) {
    return {0.0, 0.0};
  }
  const BlockParts parts = block_decompose(gen.x.front(), gen.layout);
  const double j0 = parts.ee.size() ? spectral_norm(parts.ee) : 0.0;
  const double jz = spectral_norm(parts.ss) + (parts.se.size() ? spectral_norm(parts.se) : 0.0);
  return {j0, jz};
}

std::size_t SweepResult::usable_points() const {
  std::size_t n = 0;
  for (std::size_t i = 0; i < residual.size(); ++i) {
    if (!floor_flag[i] && residual[i] <= window_hi) ++n;
  }
  return n;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("loglog_slope: need at least two points");
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(y.size());
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

std::vector<double> logspace(double lo, double hi, int n) {
  if (n < 1 || !(lo > 0.0) || !(hi > 0.0)) {
    throw std::invalid_argument("logspace: need n >= 1 and positive bounds");
  }
  std::vector<double> out;
  if (n == 1) {
    return {lo};
  }
  const double a = std::log10(lo);
  const double b = std::log10(hi);
  for (int i = 0; i < n; ++i) {
    out.push_back(std::pow(10.0, a + (b - a) * i / (n - 1)));
  }
  return out;
}

SweepResult order_sweep(const AnalyticGenerator& gen, const SweepScheme& scheme,
                        const std::vector<double>& t_grid, const PropagatorConfig& cfg,
                        const SweepOptions& options) {
  const PulseSchedule schedule = scheme.kind == SweepKind::decoupling
                                     ? decoupling_schedule(scheme.N)
                                     : homogenization_schedule(scheme.N, scheme.m);
  if (scheme.kind == SweepKind::homogenization && !gen.decoupled) {
    throw std::invalid_argument("order_sweep: homogenization needs a decoupled generator");
  }
  const std::size_t n = t_grid.size();
  SweepResult out;
  out.T = t_grid;
  out.window_lo = options.window_lo;
  out.window_hi = options.window_hi;
  out.residual.assign(n, 0.0);
  out.omega.assign(n, std::numeric_limits<double>::quiet_NaN());
  out.bound.assign(n, std::numeric_limits<double>::quiet_NaN());
  out.floor_flag.assign(n, false);
  std::vector<char> floor(n, 0);

  std::pair<double, double> strengths{0.0, 0.0};
  if (options.with_bound) {
    strengths = coupling_strengths(gen);
  }

  // The pulse product may be -I rather than I; it is divided out before the fit so
  // that omega stays continuous as T -> 0.
  const Eigen::Index ds = gen.layout.system_dimension();
  Matrix pulse_product = Matrix::Identity(ds, ds);
  if (scheme.kind == SweepKind::homogenization) {
    for (const ScheduledPulse& p : schedule.pulses) {
      pulse_product = embedded_pulse(p, schedule.kind, gen.layout).topLeftCorner(ds, ds) * pulse_product;
    }
  }

  auto measure = [&](double T, const PropagatorConfig& c, double& omega) {
    const Matrix s = resulting_evolution(gen, schedule, T, c);
    if (scheme.kind == SweepKind::decoupling) {
      return decoupling_residual(s, gen.layout);
    }
    const Matrix s_sys = pulse_product.transpose() * block_decompose(s, gen.layout).ss;
    const HomogenizationFit fit = homogenization_fit(s_sys, T);
    omega = fit.omega;
    return fit.residual;
  };

  parallel_for(n, options.threads, [&](std::size_t i) {
    const double T = t_grid[i];
    double omega = std::numeric_limits<double>::quiet_NaN();
    double residual = measure(T, cfg, omega);
    bool at_floor = false;
    if (!gen.time_independent() && residual > 0.0 && cfg.tolerance > residual / 100.0) {
      PropagatorConfig tight = cfg;
      tight.tolerance = std::max(residual / 100.0, 1e-14);
      try {
        residual = measure(T, tight, omega);
      } catch (const ConvergenceError&) {
        at_floor = true;
      }
    }
    out.residual[i] = residual;
    out.omega[i] = omega;
    floor[i] = (at_floor || residual < options.window_lo) ? 1 : 0;
    if (options.with_bound) {
      out.bound[i] = suppression_bound(strengths.first, strengths.second, scheme.N, T).value;
    }
  });

  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < n; ++i) {
    out.floor_flag[i] = floor[i] != 0;
    if (!out.floor_flag[i] && out.residual[i] <= options.window_hi) {
      xs.push_back(t_grid[i]);
      ys.push_back(out.residual[i]);
    }
  }
  if (xs.size() >= 3) {
    out.slope = loglog_slope(xs, ys);
  }
  return out;
}

AffineResult affine_propagate(const AnalyticGenerator& gen, const Matrix& m0, const Vector& d0,
                              double T, const PropagatorConfig& cfg, const PulseSchedule* schedule) {
  const Eigen::Index dim = gen.layout.dimension();
  if (m0.rows() != dim || m0.cols() != dim || d0.size() != dim) {
    throw DimensionError("affine_propagate: dimension mismatch");
  }
  if ((m0 - m0.transpose()).norm() > 1e-12 * std::max(1.0, m0.norm())) {
    throw std::invalid_argument("affine_propagate: covariance is not symmetric");
  }
  if (schedule != nullptr) {
    check_schedule_fits(*schedule, gen.layout);
  }
  const Matrix j = build_symplectic_form(gen.layout);
  // Augmented generator [[X, J b], [0, 0]] carries the displacement shift in its last column.
  auto augmented = [&](double t) {
    Matrix a = Matrix::Zero(dim + 1, dim + 1);
    a.topLeftCorner(dim, dim) = gen.at(t);
    a.topRightCorner(dim, 1) = j * gen.linear_at(t);
    return a;
  };
  const bool constant = gen.x.size() <= 1 && gen.b.size() <= 1;
  auto segment = [&](double a, double b) -> Matrix {
    if (constant) {
      return matrix_exponential((b - a) * augmented(0.0));
    }
    return propagate_function(augmented, dim + 1, a, b, cfg);
  };
  auto pulse = [&](const ScheduledPulse& p) {
    Matrix out = Matrix::Identity(dim + 1, dim + 1);
    out.topLeftCorner(dim, dim) = embedded_pulse(p, schedule->kind, gen.layout);
    return out;
  };
  const Matrix full = run_schedule(schedule, T, dim + 1, segment, pulse);
  AffineResult out;
  out.s = full.topLeftCorner(dim, dim);
  out.covariance = out.s * m0 * out.s.transpose();
  out.displacement = out.s * d0 + full.topRightCorner(dim, 1);
  return out;
}

AnalyticGenerator random_generator(const ModeLayout& layout, std::uint64_t seed,
                                   const GeneratorScales& scales, int degree) {
  if (scales.ss < 0.0 || scales.se < 0.0 || scales.ee < 0.0) {
    throw std::invalid_argument("random_generator: scales must be non-negative");
  }
  if (degree < 0 || degree > 4) {
    throw std::invalid_argument("random_generator: degree must lie in 0..4");
  }
  const Eigen::Index dim = layout.dimension();
  const Eigen::Index ds = layout.system_dimension();
  const Matrix j = build_symplectic_form(layout);
  Rng rng(seed);
  AnalyticGenerator gen;
  gen.layout = layout;
  gen.decoupled = scales.se == 0.0 || layout.environment_modes() == 0;
  for (int r = 0; r <= degree; ++r) {
    Matrix a(dim, dim);
    for (Eigen::Index row = 0; row < dim; ++row) {
      for (Eigen::Index col = row; col < dim; ++col) {
        const bool sys_row = row < ds;
        const bool sys_col = col < ds;
        const double scale = sys_row && sys_col ? scales.ss : (!sys_row && !sys_col ? scales.ee : scales.se);
        const double v = scale * rng.uniform(-1.0, 1.0);
        a(row, col) = v;
        a(col, row) = v;
      }
    }
    gen.x.push_back(a * j);
  }
  return gen;
}

std::vector<Vector> random_linear_terms(const ModeLayout& layout, std::uint64_t seed, double scale,
                                        int degree) {
  if (degree < 0 || degree > 4 || scale < 0.0) {
    throw std::invalid_argument("random_linear_terms: invalid degree or scale");
  }
  Rng rng(seed);
  std::vector<Vector> out;
  for (int r = 0; r <= degree; ++r) {
    Vector b(layout.dimension());
    for (Eigen::Index i = 0; i < b.size(); ++i) b(i) = scale * rng.uniform(-1.0, 1.0);
    out.push_back(b);
  }
  return out;
}

}  // namespace bdd
