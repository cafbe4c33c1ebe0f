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

#include "bdd/evolution.hpp"

#include <complex>
#include <vector>

namespace bdd {

/// Discrete bath: couplings lambda_j, frequencies omega_j > 0, inverse temperature beta.
struct BathSpec {
  std::vector<double> lambda;
  std::vector<double> omega;
  double beta = 1.0;
  bool beta_infinite = false;  ///< vacuum bath, coth -> 1

  std::size_t size() const { return omega.size(); }
  void validate() const;
  /// coth(beta omega_j / 2), or 1 for the vacuum flag.
  double occupation_factor(std::size_t j) const;
};

struct ChannelParams {
  double x_res = 0.0;
  double y_res = 0.0;
};

/// 2 sum_m (-1)^m e^{i z Delta_m} + 1 - e^{i z}; L must be even.
std::complex<double> y_L(double z, const std::vector<double>& deltas);

/// 2i sum_m (-1)^m e^{-i z Delta_m}; L must be even.
std::complex<double> f_L(double z, const std::vector<double>& deltas);

/// Shear parameter of the channel. Independent of beta.
double x_res(double T, const BathSpec& bath, const std::vector<double>& deltas);

/// Added noise sum_j lambda_j^2 / omega_j^2 coth(beta omega_j / 2) |y_L(omega_j T)|^2.
double y_res(double T, const BathSpec& bath, const std::vector<double>& deltas);

/// Same sum read as a line spectrum S(omega) / omega^2 weighted by |y_L(omega T)|^2.
double noise_spectrum_eval(const BathSpec& lines, double T, const std::vector<double>& deltas);

ChannelParams channel_params(double T, const BathSpec& bath, const std::vector<double>& deltas);

/// diag(coth(beta omega / 2)) (+) the same.
Matrix thermal_covariance(const BathSpec& bath);

/// The matrix A of H = Q sum_j lambda_j Q_j + H_E in (Q, P, Q_1..Q_n, P_1..P_n) order.
Matrix bath_hamiltonian_matrix(const BathSpec& bath);

/// Time-independent generator X = -A J on one system mode and n bath modes.
AnalyticGenerator bath_generator(const BathSpec& bath);

/// Closed form of exp(t X) for the bath generator.
Matrix uncontrolled_propagator(const BathSpec& bath, double t);

/// [[1, x], [0, 1]] M0 [[1, 0], [x, 1]] + diag(y, 0).
Matrix channel_apply(const Matrix& m0, const ChannelParams& params);

struct CrossValidation {
  Matrix simulated;
  Matrix closed_form;
  double deviation = 0.0;  ///< Frobenius norm of the difference
};

/// Simulates phase flips at Delta * T on the full system plus bath and compares the
/// reduced covariance with channel_apply.
CrossValidation cross_validate(const BathSpec& bath, const std::vector<double>& deltas, double T,
                               const Matrix& m0, const PropagatorConfig& cfg = {});

}  // namespace bdd
