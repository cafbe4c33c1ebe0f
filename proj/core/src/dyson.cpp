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

#include "bdd/dyson.hpp"

#include "bdd/random.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace bdd {

namespace {

constexpr int kMaxUddOrder = 8;

std::vector<double> union_grid(std::span<const SignFunction> functions) {
  std::vector<double> grid;
  for (const SignFunction& f : functions) {
    if (f.breaks.size() != f.values.size() + 1 || f.breaks.front() != 0.0 || f.breaks.back() != 1.0) {
      throw std::invalid_argument("iterated_integral: malformed sign function");
    }
    grid.insert(grid.end(), f.breaks.begin(), f.breaks.end());
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

double horner(const std::vector<double>& c, double h) {
  double v = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) {
    v = v * h + *it;
  }
  return v;
}

// Coefficients of u^r in the local variable (u - a).
std::vector<double> shifted_monomial(int r, double a) {
  std::vector<double> c(static_cast<std::size_t>(r) + 1, 0.0);
  double binom = 1.0;
  for (int p = 0; p <= r; ++p) {
    c[static_cast<std::size_t>(p)] = binom * std::pow(a, r - p);
    binom = binom * (r - p) / (p + 1);
  }
  return c;
}

std::vector<double> multiply(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      out[i + j] += a[i] * b[j];
    }
  }
  return out;
}

// One tuple of the enumeration: powers r_k and label indices into the function table.
struct Tuple {
  std::vector<int> powers;
  std::vector<std::size_t> labels;
};

// All r vectors of length s with non-negative entries summing to at most `budget`.
std::vector<std::vector<int>> compositions(int s, int budget) {
  std::vector<std::vector<int>> out;
  std::vector<int> r(static_cast<std::size_t>(s), 0);
  std::function<void(int, int)> rec = [&](int k, int left) {
    if (k == s) {
      out.push_back(r);
      return;
    }
    for (int v = 0; v <= left; ++v) {
      r[static_cast<std::size_t>(k)] = v;
      rec(k + 1, left - v);
    }
  };
  rec(0, budget);
  return out;
}

double ipow(double base, int e) {
  double v = 1.0;
  for (int i = 0; i < e; ++i) v *= base;
  return v;
}

// Visits every tuple with s + sum(r) <= max_order, or a seeded sample when the
// full count exceeds the budget. Returns whether the visit was exhaustive.
bool for_each_tuple(int max_order, std::size_t label_count, const TupleBudget& budget,
                    const std::function<void(const Tuple&)>& visit) {
  std::vector<std::vector<std::vector<int>>> comps(static_cast<std::size_t>(max_order) + 1);
  std::vector<double> weight(static_cast<std::size_t>(max_order) + 1, 0.0);
  double total = 0.0;
  for (int s = 1; s <= max_order; ++s) {
    comps[s] = compositions(s, max_order - s);
    weight[s] = static_cast<double>(comps[s].size()) * ipow(static_cast<double>(label_count), s);
    total += weight[s];
  }
  if (total <= static_cast<double>(budget.max_tuples)) {
    for (int s = 1; s <= max_order; ++s) {
      const std::size_t combos = static_cast<std::size_t>(ipow(static_cast<double>(label_count), s));
      for (const auto& r : comps[s]) {
        for (std::size_t code = 0; code < combos; ++code) {
          Tuple t{r, std::vector<std::size_t>(static_cast<std::size_t>(s))};
          std::size_t c = code;
          for (int k = s - 1; k >= 0; --k) {
            t.labels[static_cast<std::size_t>(k)] = c % label_count;
            c /= label_count;
          }
          visit(t);
        }
      }
    }
    return true;
  }
  Rng rng(budget.seed);
  for (std::size_t n = 0; n < budget.max_tuples; ++n) {
    double pick = rng.uniform() * total;
    int s = 1;
    while (s < max_order && pick >= weight[s]) {
      pick -= weight[s];
      ++s;
    }
    Tuple t{comps[s][rng.index(comps[s].size())], std::vector<std::size_t>(static_cast<std::size_t>(s))};
    for (auto& l : t.labels) {
      l = rng.index(label_count);
    }
    visit(t);
  }
  return false;
}

void record(ConditionReport& report, const Tuple& tuple, std::span<const SignFunction> table,
            const std::vector<std::string>& names, bool required_zero) {
  std::vector<SignFunction> fs;
  fs.reserve(tuple.labels.size());
  TupleResult row;
  row.powers = tuple.powers;
  for (std::size_t l : tuple.labels) {
    fs.push_back(table[l]);
    row.labels.push_back(names[l]);
  }
  row.value = iterated_integral(fs, row.powers);
  row.required_zero = required_zero;
  if (required_zero) {
    const double v = std::abs(row.value);
    row.pass = v <= report.tolerance;
    report.max_violation = std::max(report.max_violation, v);
  }
  report.tuples.push_back(std::move(row));
}

ConditionReport udd_style_report(const std::string& scheme, int N, double tol,
                                 const SignFunction& sigma) {
  if (N < 1 || N > kMaxUddOrder) {
    throw ResourceGuardError("UDD condition: N must lie in 1..8");
  }
  ConditionReport report;
  report.scheme = scheme;
  report.N = N;
  report.max_order = N;
  report.tolerance = tol;
  const SignFunction table[] = {SignFunction{}, sigma};
  const std::vector<std::string> names = {"0", "1"};
  TupleBudget unlimited;
  unlimited.max_tuples = std::numeric_limits<std::size_t>::max();
  report.exhaustive = for_each_tuple(N, 2, unlimited, [&](const Tuple& t) {
    std::size_t parity = 0;
    for (std::size_t l : t.labels) parity ^= l;
    if (parity == 1) {
      record(report, t, table, names, true);
    }
  });
  return report;
}

SignFunction udd_sigma(int N) {
  SignFunction f;
  f.breaks = {0.0};
  f.values.clear();
  int v = 1;
  for (double t : udd_times(N)) {
    f.values.push_back(v);
    f.breaks.push_back(t);
    v = -v;
  }
  f.values.push_back(v);
  f.breaks.push_back(1.0);
  return f;
}

ConditionReport indexed_report(const std::string& scheme, int N, int m, const TupleBudget& budget,
                               double tol, const PulseSchedule& schedule,
                               const std::vector<MultiIndex>& alphabet,
                               const std::function<bool(const MultiIndex&)>& exempt) {
  ConditionReport report;
  report.scheme = scheme;
  report.N = N;
  report.m = m;
  report.max_order = N;
  report.tolerance = tol;
  std::vector<SignFunction> table;
  std::vector<std::string> names;
  for (const MultiIndex& a : alphabet) {
    table.push_back(toggling_sign_function(schedule, a));
    names.push_back(a.bits());
  }
  report.exhaustive = for_each_tuple(N, alphabet.size(), budget, [&](const Tuple& t) {
    MultiIndex product(static_cast<std::size_t>(m) + 1);
    for (std::size_t l : t.labels) product ^= alphabet[l];
    record(report, t, table, names, !exempt(product));
  });
  return report;
}

}  // namespace

double PiecewisePolynomial::evaluate(double u) const {
  if (grid.size() < 2) {
    throw std::logic_error("PiecewisePolynomial: empty grid");
  }
  auto it = std::upper_bound(grid.begin(), grid.end(), u);
  std::size_t i = it == grid.begin() ? 0 : static_cast<std::size_t>(it - grid.begin() - 1);
  i = std::min(i, coefficients.size() - 1);
  return horner(coefficients[i], u - grid[i]);
}

PiecewisePolynomial iterated_antiderivative(std::span<const SignFunction> functions,
                                            std::span<const int> powers) {
  if (functions.empty() || functions.size() != powers.size()) {
    throw std::invalid_argument("iterated_integral: need equal, non-empty lists");
  }
  int degree = 0;
  for (int r : powers) {
    if (r < 0) {
      throw std::invalid_argument("iterated_integral: powers must be non-negative");
    }
    degree += r + 1;
  }
  if (degree > kMaxIntegralDegree) {
    throw ResourceGuardError("iterated_integral: polynomial degree above 24");
  }

  PiecewisePolynomial g;
  g.grid = union_grid(functions);
  const std::size_t intervals = g.grid.size() - 1;
  g.coefficients.assign(intervals, std::vector<double>{1.0});

  for (std::size_t k = 0; k < functions.size(); ++k) {
    double start = 0.0;
    for (std::size_t i = 0; i < intervals; ++i) {
      const double a = g.grid[i];
      const double h = g.grid[i + 1] - a;
      const double sign = functions[k].value_at(g.grid[i + 1]);
      const std::vector<double> integrand =
          multiply(g.coefficients[i], shifted_monomial(powers[k], a));
      std::vector<double> next(integrand.size() + 1, 0.0);
      next[0] = start;
      for (std::size_t p = 0; p < integrand.size(); ++p) {
        next[p + 1] = sign * integrand[p] / static_cast<double>(p + 1);
      }
      start = horner(next, h);
      g.coefficients[i] = std::move(next);
    }
  }
  return g;
}

double iterated_integral(std::span<const SignFunction> functions, std::span<const int> powers) {
  const PiecewisePolynomial g = iterated_antiderivative(functions, powers);
  return horner(g.coefficients.back(), g.grid.back() - g.grid[g.grid.size() - 2]);
}

std::size_t ConditionReport::failures() const {
  return static_cast<std::size_t>(
      std::count_if(tuples.begin(), tuples.end(), [](const TupleResult& t) { return !t.pass; }));
}

std::string report_csv(const ConditionReport& report) {
  std::ostringstream out;
  out << "s,r,labels,value,required_zero,pass\n";
  char buf[64];
  for (const TupleResult& t : report.tuples) {
    out << t.powers.size() << ',';
    for (std::size_t k = 0; k < t.powers.size(); ++k) {
      out << (k ? " " : "") << t.powers[k];
    }
    out << ',';
    for (std::size_t k = 0; k < t.labels.size(); ++k) {
      out << (k ? " " : "") << t.labels[k];
    }
    std::snprintf(buf, sizeof buf, "%.17g", t.value);
    out << ',' << buf << ',' << (t.required_zero ? 1 : 0) << ',' << (t.pass ? 1 : 0) << '\n';
  }
  return out.str();
}

ConditionReport check_udd_condition(int N, double tol) {
  return udd_style_report("udd", N, tol, udd_sigma(N));
}

ConditionReport check_bosonic_decoupling_condition(int N, double tol) {
  ConditionReport report = udd_style_report(
      "bosonic-decoupling", N, tol, toggling_sign_function(decoupling_schedule(N), 1));
  const ConditionReport reference = check_udd_condition(N, tol);
  bool same = reference.tuples.size() == report.tuples.size();
  for (std::size_t i = 0; same && i < report.tuples.size(); ++i) {
    same = reference.tuples[i].powers == report.tuples[i].powers &&
           reference.tuples[i].labels == report.tuples[i].labels &&
           reference.tuples[i].value == report.tuples[i].value;
  }
  if (!same) {
    report.max_violation = std::numeric_limits<double>::infinity();
  }
  return report;
}

ConditionReport check_qubit_nudd_condition(int N, int m, const TupleBudget& budget, double tol) {
  const std::size_t labels = std::size_t{1} << (2 * (m + 1));
  if (std::pow(N + 1.0, 2.0 * m + 2.0) > 1e4 || labels > 1024) {
    throw ResourceGuardError("check_qubit_nudd_condition: schedule above 10^4 pulses");
  }
  return indexed_report("qubit-nudd", N, m, budget, tol, nudd_schedule(N, m), enumerate_all(m),
                        [](const MultiIndex& p) { return p.is_zero(); });
}

ConditionReport check_homogenization_condition(int N, int m, const TupleBudget& budget,
                                               double tol) {
  if (std::pow(N + 1.0, 2.0 * m + 2.0) > 1e4) {
    throw ResourceGuardError("check_homogenization_condition: schedule above 10^4 pulses");
  }
  return check_homogenization_schedule(homogenization_schedule(N, m), budget, tol);
}

ConditionReport check_homogenization_schedule(const PulseSchedule& schedule, const TupleBudget& budget,
                                              double tol) {
  if (schedule.kind != PulseKind::indexed || schedule.N < 1) {
    throw std::invalid_argument("check_homogenization_schedule: need an indexed schedule with N >= 1");
  }
  const MultiIndex j_index = symplectic_form_index(schedule.m);
  return indexed_report("homogenization", schedule.N, schedule.m, budget, tol, schedule,
                        enumerate_gamma(schedule.m), [&](const MultiIndex& p) {
                          return p.is_zero() || p == j_index;
                        });
}

int first_violated_udd_order(int N, double threshold) {
  if (N < 1 || N > kMaxUddOrder) {
    throw ResourceGuardError("first_violated_udd_order: N must lie in 1..8");
  }
  const SignFunction table[] = {SignFunction{}, udd_sigma(N)};
  for (int order = 1; order <= N + 2; ++order) {
    for (int s = 1; s <= order; ++s) {
      for (const auto& r : compositions(s, order - s)) {
        int sum = s;
        for (int v : r) sum += v;
        if (sum != order) {
          continue;
        }
        for (std::size_t code = 0; code < (std::size_t{1} << s); ++code) {
          if (std::popcount(code) % 2 == 0) {
            continue;
          }
          std::vector<SignFunction> fs;
          for (int k = 0; k < s; ++k) fs.push_back(table[(code >> k) & 1U]);
          if (std::abs(iterated_integral(fs, r)) > threshold) {
            return order;
          }
        }
      }
    }
  }
  return -1;
}

MultiIndex qubit_partner(const MultiIndex& alpha) {
  MultiIndex shift(alpha.size());
  const std::uint8_t c = alpha[0].first;
  shift.set(0, Z2Pair{c, c});
  return alpha ^ shift;
}

CorrespondenceReport verify_qubit_bosonic_correspondence(int N, int m) {
  const PulseSchedule qubit = nudd_schedule(N, m);
  return compare_qubit_bosonic(qubit, substitute_bosonic(qubit));
}

CorrespondenceReport compare_qubit_bosonic(const PulseSchedule& qubit, const PulseSchedule& bosonic) {
  if (qubit.m != bosonic.m) {
    throw DimensionError("compare_qubit_bosonic: schedules act on different mode counts");
  }
  CorrespondenceReport report;
  report.N = qubit.N;
  report.m = qubit.m;
  for (const MultiIndex& alpha : enumerate_gamma(qubit.m)) {
    const SignFunction fb = toggling_sign_function(bosonic, alpha).canonical();
    const SignFunction fq = toggling_sign_function(qubit, qubit_partner(alpha)).canonical();
    ++report.checked;
    if (!(fb == fq)) {
      ++report.mismatches;
    }
  }
  return report;
}

}  // namespace bdd
