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

#include "bdd/pauli_basis.hpp"

#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <vector>

namespace bdd {

/// What a schedule entry applies to the system.
enum class PulseKind {
  phase_flip,  ///< -I on the system, identity on the environment
  indexed,     ///< sign * S_index on the system
};

struct ScheduledPulse {
  double delta = 0.0;  ///< fraction of the total time in (0, 1]
  MultiIndex index;    ///< empty for phase flips
  int sign = 1;
};

/// Ordered pulse train. Total time is supplied by the caller at evolution time.
struct PulseSchedule {
  std::string scheme;
  int N = 0;
  int m = 0;
  PulseKind kind = PulseKind::indexed;
  std::vector<ScheduledPulse> pulses;

  std::size_t size() const { return pulses.size(); }
};

/// Piecewise constant +-1 function on (0, 1]. Interval i is (breaks[i], breaks[i+1]].
struct SignFunction {
  std::vector<double> breaks{0.0, 1.0};
  std::vector<int> values{1};

  int value_at(double tau) const;
  /// Merges neighbouring intervals with equal values.
  SignFunction canonical() const;
  /// Inserts extra breakpoints without changing the function.
  SignFunction refine(const std::vector<double>& extra) const;

  bool operator==(const SignFunction&) const = default;
};

/// Delta_j = sin^2(j pi / (2(N+1))), j = 1..N.
std::vector<double> udd_times(int N);

/// N phase flips at the UDD times.
PulseSchedule decoupling_schedule(int N);

/// +1 before the first flip, switching sign at every flip.
SignFunction sigma_function(const PulseSchedule& schedule);

/// Level labels lambda = (l_0, ..., l_{2m+1}) with l_0 the innermost level.
using NuddLabel = std::vector<int>;

/// Nested Uhrig times, keyed by label. The all-zero label maps to 1.
std::map<NuddLabel, double> nudd_times(int N, int m);

/// Qubit Pauli pulse per label.
std::map<NuddLabel, MultiIndex> nudd_pulses(int N, int m);

/// Time-ordered qubit schedule with (N+1)^{2m+2} entries.
PulseSchedule nudd_schedule(int N, int m);

/// Replaces a_0 of each pulse by y for a_0 in {x, y} and by I otherwise.
/// Pulses that become the identity are dropped, except a terminal one at Delta = 1.
PulseSchedule substitute_bosonic(const PulseSchedule& qubit);

/// substitute_bosonic(nudd_schedule(N, m)).
PulseSchedule homogenization_schedule(int N, int m);

/// F_alpha: flips at every pulse with <alpha, beta_j> = 1.
SignFunction toggling_sign_function(const PulseSchedule& schedule, const MultiIndex& alpha);

/// Block parity form for phase-flip schedules: gamma = 0 gives 1, gamma = 1 gives sigma.
SignFunction toggling_sign_function(const PulseSchedule& schedule, int gamma);

/// Merges pulses with equal Delta into their product. Two phase flips cancel.
PulseSchedule merge_coincident(const PulseSchedule& schedule);

void write_schedule(std::ostream& out, const PulseSchedule& schedule);
PulseSchedule read_schedule(std::istream& in);

}  // namespace bdd
