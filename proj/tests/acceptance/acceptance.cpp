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

// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include "bdd/dyson.hpp"
#include "bdd/evolution.hpp"
#include "bdd/pauli_basis.hpp"
#include "bdd/spin_boson.hpp"
#include "bdd_cli/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace bdd;

struct Outcome {
  bool pass = true;
  std::string detail;
};

void note(Outcome& o, bool ok, const std::string& what) {
  if (!ok) {
    o.pass = false;
    if (!o.detail.empty()) o.detail += "; ";
    o.detail += what;
  }
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

bool slope_ok(const SweepResult& r, int N) { return r.slope && *r.slope >= N + 0.7 && *r.slope <= N + 1.5; }

std::string slope_text(const SweepResult& r) { return r.slope ? fmt(*r.slope) : std::string("none"); }

const std::vector<double> kGrid = logspace(1e-3, 1e-1, 10);

Outcome decoupling_order(int degree, int max_N, std::uint64_t seed_base) {
  Outcome o;
  double lo = 1e9;
  double hi = -1e9;
  for (std::size_t ns : {1, 2}) {
    for (std::size_t ne : {1, 2}) {
      for (int N = 1; N <= max_N; ++N) {
        const std::uint64_t seed = seed_base + 100 * ns + 10 * ne + static_cast<std::uint64_t>(N);
        const AnalyticGenerator gen = random_generator(ModeLayout(ns, ne), seed, {}, degree);
        const SweepResult r = order_sweep(gen, {SweepKind::decoupling, N, 0}, kGrid);
        const double s = r.slope.value_or(std::nan(""));
        lo = std::min(lo, s - N);
        hi = std::max(hi, s - N);
        note(o, slope_ok(r, N),
             "nS=" + std::to_string(ns) + " nE=" + std::to_string(ne) + " N=" + std::to_string(N) +
                 " slope=" + slope_text(r));
      }
    }
  }
  if (o.pass) o.detail = "slope - N in [" + fmt(lo) + ", " + fmt(hi) + "]";
  return o;
}

Outcome criterion1() { return decoupling_order(0, 3, 1000); }

Outcome criterion2() { return decoupling_order(2, 2, 2000); }

Outcome criterion3() {
  Outcome o;
  std::string slopes;
  const std::pair<int, int> cases[] = {{1, 1}, {2, 1}, {1, 2}};
  for (auto [N, m] : cases) {
    const ModeLayout layout(std::size_t{1} << m, 1);
    const AnalyticGenerator gen = random_generator(layout, 3000 + 10 * m + N, {1.0, 0.0, 1.0}, 0);
    const SweepResult r = order_sweep(gen, {SweepKind::homogenization, N, m}, kGrid);
    const std::string label = "(N=" + std::to_string(N) + ",m=" + std::to_string(m) + ")";
    slopes += (slopes.empty() ? "" : " ") + label + " " + slope_text(r);
    note(o, slope_ok(r, N), label + " slope=" + slope_text(r));
  }
  if (o.pass) o.detail = "slopes " + slopes;
  return o;
}

Outcome criterion4() {
  Outcome o;
  int checked = 0;
  double worst_ratio = 0.0;
  for (std::uint64_t seed = 4000; seed < 4020; ++seed) {
    const std::size_t ns = 1 + seed % 2;
    const std::size_t ne = 1 + (seed / 2) % 2;
    const AnalyticGenerator gen = random_generator(ModeLayout(ns, ne), seed, {}, 0);
    const auto [j0, jz] = coupling_strengths(gen);
    for (int N = 1; N <= 3; ++N) {
      const PulseSchedule schedule = decoupling_schedule(N);
      for (double x : {0.05, 0.2, 0.5, 1.0}) {
        const double T = x / (j0 + jz);
        const double residual = decoupling_residual_spectral(resulting_evolution(gen, schedule, T), gen.layout);
        const double bound = suppression_bound(j0, jz, N, T).value;
        worst_ratio = std::max(worst_ratio, residual / bound);
        ++checked;
        note(o, residual <= bound,
             "seed=" + std::to_string(seed) + " N=" + std::to_string(N) + " residual " + fmt(residual) +
                 " > bound " + fmt(bound));
      }
    }
  }
  if (o.pass) o.detail = std::to_string(checked) + " cases, max residual/bound " + fmt(worst_ratio);
  return o;
}

Outcome criterion5() {
  Outcome o;
  for (int N = 1; N <= 6; ++N) {
    note(o, check_udd_condition(N, 1e-10).passed(), "UDD condition N=" + std::to_string(N));
    const int order = first_violated_udd_order(N);
    note(o, order == N + 1, "first violated order for N=" + std::to_string(N) + " is " + std::to_string(order));
  }
  const ConditionReport h11 = check_homogenization_condition(1, 1, {}, 1e-10);
  const ConditionReport h21 = check_homogenization_condition(2, 1, {}, 1e-10);
  note(o, h11.passed() && h11.exhaustive, "homogenization (1,1)");
  note(o, h21.passed() && h21.exhaustive, "homogenization (2,1)");
  const ConditionReport h22 = check_homogenization_condition(2, 2, TupleBudget{1000, 5}, 1e-10);
  note(o, h22.passed() && h22.tuples.size() <= 1000, "homogenization (2,2) sampled");
  if (o.pass) {
    o.detail = "UDD N<=6, homogenization " + std::to_string(h11.tuples.size()) + "+" +
               std::to_string(h21.tuples.size()) + " exhaustive, " + std::to_string(h22.tuples.size()) +
               " sampled, max violation " + fmt(std::max({h11.max_violation, h21.max_violation, h22.max_violation}));
  }
  return o;
}

Outcome criterion6() {
  Outcome o;
  for (int m = 0; m <= 3; ++m) {
    const std::size_t expected = 2 * (std::size_t{1} << (2 * m)) + (std::size_t{1} << m);
    note(o, enumerate_gamma(m).size() == expected, "|Gamma| for m=" + std::to_string(m));
    const Matrix j = canonical_form(std::size_t{1} << m);
    for (const MultiIndex& b : enumerate_gamma_tilde(m)) {
      const Matrix s = s_matrix(b);
      const double err = std::max((s * j * s.transpose() - j).norm(),
                                  (s.transpose() * s - Matrix::Identity(s.rows(), s.cols())).norm());
      note(o, err <= 1e-12, "Gamma-tilde element not orthogonal-symplectic at m=" + std::to_string(m));
    }
  }
  for (int m = 0; m <= 2; ++m) {
    const AdjointActionReport r = verify_adjoint_action(m, 1e-12);
    note(o, r.passed() && r.exhaustive, "adjoint action m=" + std::to_string(m));
  }
  const AdjointActionReport r3 = verify_adjoint_action(3, 1e-12, 1000, 6);
  note(o, r3.passed() && r3.pairs_checked == 1000, "adjoint action m=3 sampled");
  if (o.pass) o.detail = "m<=3 counts and orthosymplecticity, sign law exhaustive m<=2, 1000 samples m=3";
  return o;
}

Outcome criterion7() {
  Outcome o;
  double worst = 0.0;
  for (int size : {1, 3}) {
    BathSpec bath;
    for (int j = 0; j < size; ++j) {
      bath.lambda.push_back(0.3 + 0.25 * j);
      bath.omega.push_back(1.0 - 0.3 * j);
    }
    bath.beta = 2.0;
    for (int L : {2, 4}) {
      const std::vector<double> deltas = udd_times(L);
      for (double T : {0.1, 0.5, 1.0}) {
        Matrix m0a = Matrix::Identity(2, 2);
        Matrix m0b(2, 2);
        m0b << 2.0, 0.3, 0.3, 0.7;
        for (const Matrix& m0 : {m0a, m0b}) {
          const double dev = cross_validate(bath, deltas, T, m0, PropagatorConfig{16, 1e-13, 10}).deviation;
          worst = std::max(worst, dev);
          note(o, dev <= 1e-8, "cross-validation deviation " + fmt(dev));
        }
      }
    }
  }

  BathSpec bath{{0.4, 0.7}, {1.0, 0.6}, 0.1, false};
  const std::vector<double> deltas = udd_times(4);
  const double x_ref = x_res(0.7, bath, deltas);
  double x_spread = 0.0;
  for (double beta : {1.0, 10.0}) {
    bath.beta = beta;
    x_spread = std::max(x_spread, std::abs(x_res(0.7, bath, deltas) - x_ref));
  }
  note(o, x_spread <= 1e-12, "x_res depends on beta by " + fmt(x_spread));

  std::string slopes;
  for (int N : {1, 2}) {
    const std::vector<double> T = logspace(1e-3, 1e-2, 8);
    // A terminal pulse at Delta = 1 evens out odd trains without changing the channel.
    std::vector<double> train = udd_times(N);
    if (train.size() % 2 != 0) train.push_back(1.0);
    std::vector<double> y;
    for (double t : T) y.push_back(y_res(t, bath, train));
    const double s = loglog_slope(T, y);
    slopes += " " + fmt(s);
    note(o, std::abs(s - 2.0 * (N + 1)) <= 0.4, "y_res slope for N=" + std::to_string(N) + " is " + fmt(s));
  }
  if (o.pass) {
    o.detail = "max deviation " + fmt(worst) + ", x_res beta spread " + fmt(x_spread) + ", y_res slopes" + slopes;
  }
  return o;
}

Outcome criterion8() {
  Outcome o;
  std::size_t checked = 0;
  for (int N : {1, 2}) {
    const CorrespondenceReport r = verify_qubit_bosonic_correspondence(N, 1);
    checked += r.checked;
    note(o, r.passed(), "N=" + std::to_string(N) + " mismatches " + std::to_string(r.mismatches));
  }
  if (o.pass) o.detail = std::to_string(checked) + " sign functions identical";
  return o;
}

Outcome criterion9() {
  Outcome o;
  double worst = 0.0;
  const PropagatorConfig cfg{16, 1e-13, 10};
  for (std::uint64_t seed = 9000; seed < 9010; ++seed) {
    const ModeLayout layout(1 + seed % 2, 1);
    AnalyticGenerator gen = random_generator(layout, seed, {}, 1);
    const Matrix m0 = Matrix::Identity(layout.dimension(), layout.dimension());
    const Vector d0 = Vector::Zero(layout.dimension());
    const PulseSchedule schedule = decoupling_schedule(2);
    gen.b = random_linear_terms(layout, seed + 1, 1.0, 2);
    const AffineResult a = affine_propagate(gen, m0, d0, 0.5, cfg, &schedule);
    gen.b = random_linear_terms(layout, seed + 2, 3.0, 1);
    const AffineResult b = affine_propagate(gen, m0, d0, 0.5, cfg, &schedule);
    const double diff = (a.covariance - b.covariance).norm();
    worst = std::max(worst, diff);
    note(o, diff <= 1e-11, "seed=" + std::to_string(seed) + " covariance differs by " + fmt(diff));
    note(o, (a.displacement - b.displacement).norm() > 1e-6, "displacements unexpectedly equal");
  }
  if (o.pass) o.detail = "10 cases, max covariance difference " + fmt(worst);
  return o;
}

std::string run_cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv{"bdd"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream log;
  bdd::cli::main_entry(static_cast<int>(argv.size()), argv.data(), out, log);
  return out.str();
}

Outcome criterion10() {
  Outcome o;
  const std::vector<std::vector<std::string>> commands{
      {"decouple-sweep", "--seed", "17", "--N", "2", "--nS", "2", "--degree", "1"},
      {"homogenize-sweep", "--seed", "18", "--N", "1", "--m", "1"},
      {"spectrum", "--seed", "19", "--N", "2", "--cross-validate"},
      {"verify", "--dyson", "--N", "2", "--m", "2", "--max-tuples", "500", "--seed", "20"},
      {"schedule", "--scheme", "nudd", "--N", "2", "--m", "1"}};
  for (const auto& c : commands) {
    auto one = c;
    auto two = c;
    one.insert(one.end(), {"--threads", "1"});
    two.insert(two.end(), {"--threads", "2"});
    const std::string a = run_cli(one);
    const std::string b = run_cli(two);
    note(o, !a.empty() && a == b, c.front() + " output differs between runs");
  }
  if (o.pass) o.detail = std::to_string(commands.size()) + " subcommands byte-identical across runs";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::function<Outcome()>> criteria{criterion1, criterion2, criterion3, criterion4, criterion5,
                                                       criterion6, criterion7, criterion8, criterion9, criterion10};
  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[k]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %zu: %s  %s  (%.1f s)\n", k + 1, o.pass ? "PASS" : "FAIL", o.detail.c_str(), seconds);
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
