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

#include "bdd/schedules.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace bdd {

namespace {

constexpr std::size_t kMaxNuddLabels = 1000000;

void check_nudd_args(int N, int m) {
  if (N < 1) {
    throw std::invalid_argument("NUDD: N must be at least 1");
  }
  if (m < 0) {
    throw std::invalid_argument("NUDD: m must be non-negative");
  }
  double count = std::pow(static_cast<double>(N + 1), 2.0 * m + 2.0);
  if (count > static_cast<double>(kMaxNuddLabels) || m + 1 > static_cast<int>(MultiIndex::kMaxLength)) {
    throw ResourceGuardError("NUDD: (N+1)^{2m+2} exceeds 10^6 labels");
  }
}

// Every label in {0..N}^levels, l_0 varying fastest.
std::vector<NuddLabel> all_labels(int N, int levels) {
  std::vector<NuddLabel> out;
  NuddLabel label(static_cast<std::size_t>(levels), 0);
  while (true) {
    out.push_back(label);
    int k = 0;
    while (k < levels && label[k] == N) {
      label[k] = 0;
      ++k;
    }
    if (k == levels) {
      break;
    }
    ++label[k];
  }
  return out;
}

// Delta_0 = 0, Delta_1..Delta_N, Delta_{N+1} = 1.
std::vector<double> padded_udd(int N) {
  std::vector<double> d{0.0};
  for (double t : udd_times(N)) {
    d.push_back(t);
  }
  d.push_back(1.0);
  return d;
}

MultiIndex slot_letter(int m, int slot, Z2Pair value) {
  MultiIndex idx(static_cast<std::size_t>(m) + 1);
  idx.set(static_cast<std::size_t>(slot), value);
  return idx;
}

MultiIndex y_string(int m, int last_slot) {
  MultiIndex idx(static_cast<std::size_t>(m) + 1);
  for (int j = 0; j <= last_slot; ++j) {
    idx.set(static_cast<std::size_t>(j), kPairY);
  }
  return idx;
}

SignedIndex compose(const ScheduledPulse& first, const ScheduledPulse& second) {
  const MultiIndex factors[] = {second.index, first.index};
  SignedIndex out = product_index(factors);
  out.sign *= first.sign * second.sign;
  return out;
}

std::string scheme_or_default(const std::string& s) { return s.empty() ? "custom" : s; }

}  // namespace

int SignFunction::value_at(double tau) const {
  if (tau <= breaks.front()) {
    return values.front();
  }
  auto it = std::lower_bound(breaks.begin() + 1, breaks.end(), tau);
  if (it == breaks.end()) {
    return values.back();
  }
  return values[static_cast<std::size_t>(it - breaks.begin() - 1)];
}

SignFunction SignFunction::canonical() const {
  SignFunction out;
  out.breaks = {breaks.front()};
  out.values.clear();
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!out.values.empty() && out.values.back() == values[i]) {
      out.breaks.back() = breaks[i + 1];
    } else {
      out.values.push_back(values[i]);
      out.breaks.push_back(breaks[i + 1]);
    }
  }
  return out;
}

SignFunction SignFunction::refine(const std::vector<double>& extra) const {
  std::vector<double> grid = breaks;
  for (double t : extra) {
    if (t > breaks.front() && t < breaks.back()) {
      grid.push_back(t);
    }
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  SignFunction out;
  out.breaks = grid;
  out.values.clear();
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    out.values.push_back(value_at(grid[i + 1]));
  }
  return out;
}

std::vector<double> udd_times(int N) {
  if (N < 1) {
    throw std::invalid_argument("udd_times: N must be at least 1");
  }
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(N));
  for (int j = 1; j <= N; ++j) {
    if (2 * j == N + 1) {
      out.push_back(0.5);
      continue;
    }
    const double s = std::sin(j * std::numbers::pi / (2.0 * (N + 1)));
    out.push_back(s * s);
  }
  return out;
}

PulseSchedule decoupling_schedule(int N) {
  PulseSchedule schedule;
  schedule.scheme = "udd";
  schedule.N = N;
  schedule.m = 0;
  schedule.kind = PulseKind::phase_flip;
  for (double t : udd_times(N)) {
    schedule.pulses.push_back(ScheduledPulse{t, MultiIndex(), 1});
  }
  return schedule;
}

SignFunction sigma_function(const PulseSchedule& schedule) {
  if (schedule.kind != PulseKind::phase_flip) {
    throw std::invalid_argument("sigma_function: schedule contains non-flip pulses");
  }
  return toggling_sign_function(schedule, 1);
}

std::map<NuddLabel, double> nudd_times(int N, int m) {
  check_nudd_args(N, m);
  const int levels = 2 * m + 2;
  const std::vector<double> d = padded_udd(N);
  std::map<NuddLabel, double> out;
  for (const NuddLabel& label : all_labels(N, levels)) {
    if (std::all_of(label.begin(), label.end(), [](int l) { return l == 0; })) {
      out.emplace(label, 1.0);
      continue;
    }
    // Each outer level rescales the inner time into its own UDD interval.
    double t = d[static_cast<std::size_t>(label[0])];
    for (int k = 1; k < levels; ++k) {
      const auto l = static_cast<std::size_t>(label[k]);
      t = d[l] + (d[l + 1] - d[l]) * t;
    }
    out.emplace(label, t);
  }
  return out;
}

std::map<NuddLabel, MultiIndex> nudd_pulses(int N, int m) {
  check_nudd_args(N, m);
  const int levels = 2 * m + 2;
  std::map<NuddLabel, MultiIndex> out;
  for (const NuddLabel& label : all_labels(N, levels)) {
    const auto nz = std::find_if(label.begin(), label.end(), [](int l) { return l != 0; });
    MultiIndex pulse(static_cast<std::size_t>(m) + 1);
    if (nz == label.end()) {
      if (N % 2 == 1) {
        pulse = y_string(m, m);
      }
    } else {
      const int r = static_cast<int>(nz - label.begin());
      const int k = r / 2;
      const bool x_level = (r % 2) == 1;
      if (N % 2 == 0) {
        pulse = slot_letter(m, k, x_level ? kPairX : kPairZ);
      } else if (x_level) {
        pulse = y_string(m, k);
      } else {
        pulse = slot_letter(m, k, kPairZ) ^ y_string(m, k - 1);
      }
    }
    out.emplace(label, pulse);
  }
  return out;
}

PulseSchedule nudd_schedule(int N, int m) {
  const auto times = nudd_times(N, m);
  const auto pulses = nudd_pulses(N, m);
  PulseSchedule schedule;
  schedule.scheme = "nudd";
  schedule.N = N;
  schedule.m = m;
  schedule.kind = PulseKind::indexed;
  for (const auto& [label, t] : times) {
    schedule.pulses.push_back(ScheduledPulse{t, pulses.at(label), 1});
  }
  std::stable_sort(schedule.pulses.begin(), schedule.pulses.end(),
                   [](const ScheduledPulse& a, const ScheduledPulse& b) { return a.delta < b.delta; });
  return merge_coincident(schedule);
}

PulseSchedule substitute_bosonic(const PulseSchedule& qubit) {
  if (qubit.kind != PulseKind::indexed) {
    throw std::invalid_argument("substitute_bosonic: schedule must carry indexed pulses");
  }
  PulseSchedule out;
  out.scheme = "homogenization";
  out.N = qubit.N;
  out.m = qubit.m;
  out.kind = PulseKind::indexed;
  for (const ScheduledPulse& p : qubit.pulses) {
    ScheduledPulse q = p;
    q.sign = 1;
    q.index.set(0, p.index[0].first ? kPairY : kPairI);
    if (q.index.is_zero() && q.delta < 1.0) {
      continue;
    }
    out.pulses.push_back(q);
  }
  return out;
}

PulseSchedule homogenization_schedule(int N, int m) {
  return substitute_bosonic(nudd_schedule(N, m));
}

namespace {

SignFunction build_sign_function(const PulseSchedule& schedule,
                                 const std::function<bool(const ScheduledPulse&)>& flips) {
  SignFunction f;
  f.breaks = {0.0};
  f.values.clear();
  int value = 1;
  for (const ScheduledPulse& p : schedule.pulses) {
    if (!flips(p) || p.delta >= 1.0) {
      continue;
    }
    if (f.breaks.back() == p.delta) {
      value = -value;  // coincident flips; the zero-length interval is skipped
      continue;
    }
    f.values.push_back(value);
    f.breaks.push_back(p.delta);
    value = -value;
  }
  f.values.push_back(value);
  f.breaks.push_back(1.0);
  return f;
}

}  // namespace

SignFunction toggling_sign_function(const PulseSchedule& schedule, const MultiIndex& alpha) {
  if (schedule.kind != PulseKind::indexed) {
    throw std::invalid_argument("toggling_sign_function: use the block parity overload");
  }
  return build_sign_function(schedule, [&](const ScheduledPulse& p) {
    return symplectic_inner_product(alpha, p.index) == 1;
  });
}

SignFunction toggling_sign_function(const PulseSchedule& schedule, int gamma) {
  if (schedule.kind != PulseKind::phase_flip) {
    throw std::invalid_argument("toggling_sign_function: block parity needs a phase-flip schedule");
  }
  if (gamma != 0 && gamma != 1) {
    throw std::invalid_argument("toggling_sign_function: gamma must be 0 or 1");
  }
  return build_sign_function(schedule, [&](const ScheduledPulse&) { return gamma == 1; });
}

PulseSchedule merge_coincident(const PulseSchedule& schedule) {
  PulseSchedule out = schedule;
  out.pulses.clear();
  for (const ScheduledPulse& p : schedule.pulses) {
    if (!out.pulses.empty() && out.pulses.back().delta > p.delta) {
      throw std::invalid_argument("merge_coincident: pulses are not time ordered");
    }
    if (out.pulses.empty() || out.pulses.back().delta != p.delta) {
      out.pulses.push_back(p);
      continue;
    }
    if (schedule.kind == PulseKind::phase_flip) {
      out.pulses.pop_back();
      continue;
    }
    const SignedIndex merged = compose(out.pulses.back(), p);
    out.pulses.back().index = merged.index;
    out.pulses.back().sign = merged.sign;
  }
  return out;
}

void write_schedule(std::ostream& out, const PulseSchedule& schedule) {
  out << "#scheme " << scheme_or_default(schedule.scheme) << '\n';
  out << "#N " << schedule.N << '\n';
  out << "#m " << schedule.m << '\n';
  char buf[64];
  for (const ScheduledPulse& p : schedule.pulses) {
    std::snprintf(buf, sizeof buf, "%.17g", p.delta);
    out << buf << '\t' << (p.sign < 0 ? "-" : "")
        << (schedule.kind == PulseKind::phase_flip ? std::string("1") : p.index.bits()) << '\n';
  }
}

PulseSchedule read_schedule(std::istream& in) {
  PulseSchedule schedule;
  schedule.scheme.clear();
  bool any_pulse = false;
  bool flips = false;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) {
      continue;
    }
    if (line.front() == '#') {
      std::istringstream header(line.substr(1));
      std::string key;
      header >> key;
      if (key == "scheme") {
        header >> schedule.scheme;
      } else if (key == "N") {
        header >> schedule.N;
      } else if (key == "m") {
        header >> schedule.m;
      }
      continue;
    }
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw std::invalid_argument("read_schedule: expected a tab-separated line");
    }
    ScheduledPulse p;
    p.delta = std::stod(line.substr(0, tab));
    std::string label = line.substr(tab + 1);
    if (!label.empty() && label.front() == '-') {
      p.sign = -1;
      label.erase(0, 1);
    }
    const bool is_flip = label == "1";
    if (any_pulse && is_flip != flips) {
      throw std::invalid_argument("read_schedule: mixed phase-flip and indexed pulses");
    }
    flips = is_flip;
    any_pulse = true;
    if (!is_flip) {
      p.index = MultiIndex::from_bits(label);
    }
    if (!(p.delta > 0.0 && p.delta <= 1.0)) {
      throw std::invalid_argument("read_schedule: Delta outside (0, 1]");
    }
    if (!schedule.pulses.empty() && schedule.pulses.back().delta >= p.delta) {
      throw std::invalid_argument("read_schedule: Delta values must increase strictly");
    }
    schedule.pulses.push_back(p);
  }
  schedule.kind = flips ? PulseKind::phase_flip : PulseKind::indexed;
  return schedule;
}

}  // namespace bdd
