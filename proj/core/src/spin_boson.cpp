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

#include "bdd/spin_boson.hpp"

#include <cmath>
#include <stdexcept>

namespace bdd {

namespace {

using Complex = std::complex<double>;

void require_even(const std::vector<double>& deltas) {
  if (deltas.size() % 2 != 0) {
    throw std::invalid_argument("pulse train length must be even");
  }
}

// (e^{ix} - 1) / (ix) = e^{ix/2} sin(x/2) / (x/2), without cancellation near 0.
Complex phase_increment(double x) {
  const double half = 0.5 * x;
  const double sinc = std::abs(half) < 1e-8 ? 1.0 - half * half / 6.0 : std::sin(half) / half;
  return std::polar(sinc, half);
}

// (h - sin(z h) / z) / z.
double shear_self_term(double z, double h) {
  const double x = z * h;
  if (std::abs(x) < 1e-3) {
    const double x2 = x * x;
    return h * h * x * (1.0 / 6.0 - x2 / 120.0 + x2 * x2 / 5040.0);
  }
  return (h - std::sin(x) / z) / z;
}

// int_0^1 dtau int_0^tau du sigma(tau) sigma(u) sin(z (tau - u)).
double shear_integral(double z, const std::vector<double>& deltas) {
  if (z == 0.0) {
    return 0.0;
  }
  std::vector<double> t{0.0};
  t.insert(t.end(), deltas.begin(), deltas.end());
  t.push_back(1.0);
  double total = 0.0;
  Complex acc{0.0, 0.0};
  for (std::size_t k = 0; k + 1 < t.size(); ++k) {
    const double h = t[k + 1] - t[k];
    const double s = (k % 2 == 0) ? 1.0 : -1.0;
    total += shear_self_term(z, h);
    const Complex e = std::polar(1.0, z * t[k]) * h * phase_increment(z * h);
    total += s * (e * acc).imag();
    acc += s * std::conj(e);
  }
  return total;
}

}  // namespace

void BathSpec::validate() const {
  if (lambda.size() != omega.size()) {
    throw std::invalid_argument("BathSpec: lambda and omega lengths differ");
  }
  for (double w : omega) {
    if (!(w > 0.0)) {
      throw std::invalid_argument("BathSpec: frequencies must be positive");
    }
  }
  if (!beta_infinite && !(beta > 0.0)) {
    throw std::invalid_argument("BathSpec: beta must be positive");
  }
}

double BathSpec::occupation_factor(std::size_t j) const {
  if (beta_infinite) {
    return 1.0;
  }
  return 1.0 / std::tanh(0.5 * beta * omega.at(j));
}

Complex y_L(double z, const std::vector<double>& deltas) {
  require_even(deltas);
  Complex sum{0.0, 0.0};
  for (std::size_t m = 0; m < deltas.size(); ++m) {
    const double sign = (m % 2 == 0) ? -1.0 : 1.0;
    sum += sign * std::polar(1.0, z * deltas[m]);
  }
  return 2.0 * sum + 1.0 - std::polar(1.0, z);
}

Complex f_L(double z, const std::vector<double>& deltas) {
  require_even(deltas);
  Complex sum{0.0, 0.0};
  for (std::size_t m = 0; m < deltas.size(); ++m) {
    const double sign = (m % 2 == 0) ? -1.0 : 1.0;
    sum += sign * std::polar(1.0, -z * deltas[m]);
  }
  return Complex{0.0, 2.0} * sum;
}

double x_res(double T, const BathSpec& bath, const std::vector<double>& deltas) {
  require_even(deltas);
  bath.validate();
  double total = 0.0;
  for (std::size_t j = 0; j < bath.size(); ++j) {
    const double l = bath.lambda[j];
    total += l * l * T * T * shear_integral(bath.omega[j] * T, deltas);
  }
  return total;
}

double y_res(double T, const BathSpec& bath, const std::vector<double>& deltas) {
  require_even(deltas);
  bath.validate();
  double total = 0.0;
  for (std::size_t j = 0; j < bath.size(); ++j) {
    const double ratio = bath.lambda[j] / bath.omega[j];
    total += ratio * ratio * bath.occupation_factor(j) * std::norm(y_L(bath.omega[j] * T, deltas));
  }
  return total;
}

double noise_spectrum_eval(const BathSpec& lines, double T, const std::vector<double>& deltas) {
  require_even(deltas);
  lines.validate();
  double total = 0.0;
  for (std::size_t j = 0; j < lines.size(); ++j) {
    const double w = lines.omega[j];
    const double spectral_weight = lines.lambda[j] * lines.lambda[j] * lines.occupation_factor(j);
    total += spectral_weight / (w * w) * std::norm(y_L(w * T, deltas));
  }
  return total;
}

ChannelParams channel_params(double T, const BathSpec& bath, const std::vector<double>& deltas) {
  return ChannelParams{x_res(T, bath, deltas), y_res(T, bath, deltas)};
}

Matrix thermal_covariance(const BathSpec& bath) {
  bath.validate();
  const auto n = static_cast<Eigen::Index>(bath.size());
  Matrix m = Matrix::Zero(2 * n, 2 * n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double c = bath.occupation_factor(static_cast<std::size_t>(j));
    m(j, j) = c;
    m(n + j, n + j) = c;
  }
  return m;
}

Matrix bath_hamiltonian_matrix(const BathSpec& bath) {
  bath.validate();
  const auto n = static_cast<Eigen::Index>(bath.size());
  Matrix a = Matrix::Zero(2 * n + 2, 2 * n + 2);
  for (Eigen::Index j = 0; j < n; ++j) {
    a(0, 2 + j) = bath.lambda[static_cast<std::size_t>(j)];
    a(2 + j, 0) = bath.lambda[static_cast<std::size_t>(j)];
    a(2 + j, 2 + j) = bath.omega[static_cast<std::size_t>(j)];
    a(2 + n + j, 2 + n + j) = bath.omega[static_cast<std::size_t>(j)];
  }
  return a;
}

AnalyticGenerator bath_generator(const BathSpec& bath) {
  AnalyticGenerator gen;
  gen.layout = ModeLayout(1, bath.size());
  const Matrix j = build_symplectic_form(gen.layout);
  gen.x = {-bath_hamiltonian_matrix(bath) * j};
  gen.decoupled = false;
  return gen;
}

Matrix uncontrolled_propagator(const BathSpec& bath, double t) {
  bath.validate();
  if (t < 0.0) {
    throw std::invalid_argument("uncontrolled_propagator: t must be non-negative");
  }
  const auto n = static_cast<Eigen::Index>(bath.size());
  Vector v(n), w(n), c(n), s(n);
  double x = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    const double om = bath.omega[static_cast<std::size_t>(j)];
    const double l = bath.lambda[static_cast<std::size_t>(j)];
    c(j) = std::cos(om * t);
    s(j) = std::sin(om * t);
    v(j) = (c(j) - 1.0) * l / om;
    w(j) = -s(j) * l / om;
    x += t * l * l / om - l * l * s(j) / (om * om);
  }
  Matrix out = Matrix::Zero(2 * n + 2, 2 * n + 2);
  out(0, 0) = 1.0;
  out(1, 1) = 1.0;
  out(0, 1) = x;
  out.block(0, 2, 1, n) = v.transpose();
  out.block(0, 2 + n, 1, n) = w.transpose();
  out.block(2, 1, n, 1) = w;
  out.block(2 + n, 1, n, 1) = v;
  out.block(2, 2, n, n) = c.asDiagonal();
  out.block(2, 2 + n, n, n) = -Matrix(s.asDiagonal());
  out.block(2 + n, 2, n, n) = s.asDiagonal();
  out.block(2 + n, 2 + n, n, n) = c.asDiagonal();
  return out;
}

Matrix channel_apply(const Matrix& m0, const ChannelParams& params) {
  if (m0.rows() != 2 || m0.cols() != 2) {
    throw DimensionError("channel_apply: expected a 2x2 covariance");
  }
  Matrix shear(2, 2);
  shear << 1.0, params.x_res, 0.0, 1.0;
  Matrix out = shear * m0 * shear.transpose();
  out(0, 0) += params.y_res;
  return out;
}

CrossValidation cross_validate(const BathSpec& bath, const std::vector<double>& deltas, double T,
                               const Matrix& m0, const PropagatorConfig& cfg) {
  require_even(deltas);
  const AnalyticGenerator gen = bath_generator(bath);
  PulseSchedule schedule;
  schedule.scheme = "pulse-train";
  schedule.kind = PulseKind::phase_flip;
  for (double d : deltas) {
    schedule.pulses.push_back(ScheduledPulse{d, MultiIndex(), 1});
  }
  const Matrix s = resulting_evolution(gen, schedule, T, cfg);
  const Matrix full = direct_sum(m0, thermal_covariance(bath));
  CrossValidation out;
  out.simulated = (s * full * s.transpose()).topLeftCorner(2, 2);
  out.closed_form = channel_apply(m0, channel_params(T, bath, deltas));
  out.deviation = (out.simulated - out.closed_form).norm();
  return out;
}

}  // namespace bdd
