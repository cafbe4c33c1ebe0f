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

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace bdd {

/// Polynomials on a shared breakpoint grid. Interval i holds coefficients in
/// the local variable (u - grid[i]).
struct PiecewisePolynomial {
  std::vector<double> grid;
  std::vector<std::vector<double>> coefficients;

  double evaluate(double u) const;
};

/// Highest polynomial degree the integrator will build.
inline constexpr int kMaxIntegralDegree = 24;

/// int_0^1 dtau_s ... int_0^{tau_2} dtau_1 prod_k F_k(tau_k) tau_k^{r_k},
/// by exact piecewise antidifferentiation.
double iterated_integral(std::span<const SignFunction> functions, std::span<const int> powers);

/// The running integral g_s(tau) as a piecewise polynomial.
PiecewisePolynomial iterated_antiderivative(std::span<const SignFunction> functions,
                                            std::span<const int> powers);

struct TupleResult {
  std::vector<int> powers;
  std::vector<std::string> labels;
  double value = 0.0;
  bool required_zero = false;
  bool pass = true;
};

struct ConditionReport {
  std::string scheme;
  int N = 0;
  int m = 0;
  int max_order = 0;  ///< tuples satisfy s + sum(r) <= max_order
  double tolerance = 0.0;
  bool exhaustive = true;
  double max_violation = 0.0;
  std::vector<TupleResult> tuples;

  bool passed() const { return max_violation <= tolerance; }
  std::size_t failures() const;
};

struct TupleBudget {
  std::size_t max_tuples = 100000;  ///< beyond this the tuples are sampled
  std::uint64_t seed = 1;
};

/// Columns: s, r, labels, value, required_zero, pass.
std::string report_csv(const ConditionReport& report);

/// UDD functions F_0 = 1, F_1 = sigma: every tuple with s + sum(r) <= N and
/// odd gamma parity vanishes.
ConditionReport check_udd_condition(int N, double tol);

/// Same tuples, with sigma taken from the phase-flip decoupling schedule.
ConditionReport check_bosonic_decoupling_condition(int N, double tol);

/// Qubit NUDD functions over all of (Z_2^2)^{m+1}; XOR of labels nonzero must vanish.
ConditionReport check_qubit_nudd_condition(int N, int m, const TupleBudget& budget, double tol);

/// Homogenization functions over Gamma; products in {0, (1,1,0..)} are exempt.
ConditionReport check_homogenization_condition(int N, int m, const TupleBudget& budget,
                                               double tol);

/// The homogenization check on an explicit indexed schedule of order N over m + 1 slots.
ConditionReport check_homogenization_schedule(const PulseSchedule& schedule, const TupleBudget& budget,
                                              double tol);

/// Smallest s + sum(r) whose UDD tuples include one with |value| > threshold.
int first_violated_udd_order(int N, double threshold = 1e-6);

struct CorrespondenceReport {
  int N = 0;
  int m = 0;
  std::size_t checked = 0;
  std::size_t mismatches = 0;
  bool passed() const { return mismatches == 0; }
};

/// alpha' = (c, c, 0, ..., 0) xor alpha with c the first bit of a_0.
MultiIndex qubit_partner(const MultiIndex& alpha);

/// F^bos_alpha equals F^qubit_{alpha'} breakpoint for breakpoint, for every alpha in Gamma.
CorrespondenceReport verify_qubit_bosonic_correspondence(int N, int m);

/// Same comparison for explicit qubit and bosonic schedules.
CorrespondenceReport compare_qubit_bosonic(const PulseSchedule& qubit, const PulseSchedule& bosonic);

}  // namespace bdd
