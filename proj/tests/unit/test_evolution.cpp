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

#include "test_helpers.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

namespace bdd {
namespace {

AnalyticGenerator coupled(std::uint64_t seed, std::size_t ns = 1, std::size_t ne = 1, int degree = 0) {
  return random_generator(ModeLayout(ns, ne), seed, GeneratorScales{1.0, 1.0, 1.0}, degree);
}

TEST(Generator, RandomIsDeterministicAndValid) {
  const AnalyticGenerator a = coupled(3, 2, 1, 2);
  const AnalyticGenerator b = coupled(3, 2, 1, 2);
  ASSERT_EQ(a.x.size(), 3U);
  for (std::size_t r = 0; r < a.x.size(); ++r) EXPECT_EQ(a.x[r], b.x[r]);
  EXPECT_NO_THROW(a.validate());
  EXPECT_FALSE(a.decoupled);
  const AnalyticGenerator d = random_generator(ModeLayout(1, 1), 3, GeneratorScales{1.0, 0.0, 1.0}, 1);
  EXPECT_TRUE(d.decoupled);
  EXPECT_NO_THROW(d.validate());
  EXPECT_THROW(random_generator(ModeLayout(1, 1), 3, GeneratorScales{}, 5), std::invalid_argument);
}

TEST(Generator, ValidateRejectsBadCoefficients) {
  AnalyticGenerator g;
  g.layout = ModeLayout(1, 1);
  g.x = {Matrix::Identity(4, 4)};
  EXPECT_THROW(g.validate(), std::invalid_argument);
  AnalyticGenerator h = coupled(1);
  h.decoupled = true;
  EXPECT_THROW(h.validate(), std::invalid_argument);
}

TEST(Propagate, ConstantGenerator) {
  const AnalyticGenerator g = coupled(7);
  EXPECT_LT((propagate(g, 0.2, 0.9) - matrix_exponential(0.7 * g.x[0])).norm(), 1e-12);
  // The CF4 path must agree too.
  const Matrix cf = propagate_function([&](double) { return g.x[0]; }, 4, 0.2, 0.9);
  EXPECT_LT((cf - matrix_exponential(0.7 * g.x[0])).norm(), 1e-12);
}

TEST(Propagate, ZeroGenerator) {
  AnalyticGenerator g;
  g.layout = ModeLayout(1, 1);
  EXPECT_EQ(propagate(g, 0.0, 1.0), Matrix::Identity(4, 4));
  g.x = {Matrix::Zero(4, 4), Matrix::Zero(4, 4)};
  EXPECT_LT((propagate(g, 0.0, 1.0) - Matrix::Identity(4, 4)).norm(), 1e-15);
}

TEST(Propagate, ScalarModulatedGenerator) {
  // X(t) = (1 + 2t + 3t^2) X0 commutes with itself; the result is exp(int f X0).
  const AnalyticGenerator base = coupled(11);
  AnalyticGenerator g;
  g.layout = base.layout;
  g.x = {base.x[0], 2.0 * base.x[0], 3.0 * base.x[0]};
  const double t0 = 0.1, t1 = 1.3;
  auto F = [](double t) { return t + t * t + t * t * t; };
  const Matrix expected = matrix_exponential((F(t1) - F(t0)) * base.x[0]);
  EXPECT_LT((propagate(g, t0, t1) - expected).norm(), 1e-12);
}

TEST(Propagate, FourthOrderConvergence) {
  const AnalyticGenerator g = coupled(5, 1, 1, 3);
  auto x = [&](double t) { return g.at(t); };
  const Matrix ref = propagate_function(x, 4, 0.0, 1.0, PropagatorConfig{1024, 1e-11, 4});
  std::vector<double> hs, errs;
  for (int steps : {2, 4, 8, 16}) {
    // A loose tolerance returns after a single halving.
    const Matrix approx = propagate_function(x, 4, 0.0, 1.0, PropagatorConfig{steps, 1e9, 1});
    hs.push_back(1.0 / (2 * steps));
    errs.push_back((approx - ref).norm());
  }
  const double order = loglog_slope(hs, errs);
  EXPECT_GT(order, 3.7) << "observed order " << order;
  EXPECT_LT(order, 4.5);
}

TEST(Propagate, SymplecticAndErrors) {
  const AnalyticGenerator g = coupled(8, 2, 1, 2);
  const Matrix s = propagate(g, 0.0, 2.0);
  EXPECT_TRUE(is_symplectic(s, build_symplectic_form(g.layout), 1e-10));
  EXPECT_THROW(propagate(g, 1.0, 0.5), std::invalid_argument);
  EXPECT_THROW(propagate(g, 0.0, 50.0, PropagatorConfig{1, 1e-30, 1}), ConvergenceError);
}

TEST(ResultingEvolution, EmptyScheduleAndCancellingPulses) {
  const AnalyticGenerator g = coupled(2);
  PulseSchedule empty;
  empty.kind = PulseKind::phase_flip;
  EXPECT_EQ(resulting_evolution(g, empty, 0.7), propagate(g, 0.0, 0.7));
  AnalyticGenerator zero;
  zero.layout = ModeLayout(1, 1);
  EXPECT_EQ(resulting_evolution(zero, decoupling_schedule(2), 1.0), Matrix::Identity(4, 4));
}

TEST(ResultingEvolution, ManualProduct) {
  const AnalyticGenerator g = coupled(2);
  const Matrix flip = direct_sum(-Matrix::Identity(2, 2), Matrix::Identity(2, 2));
  const double T = 0.8;
  const Matrix expected = matrix_exponential(0.5 * T * g.x[0]) * flip * matrix_exponential(0.5 * T * g.x[0]);
  EXPECT_LT((resulting_evolution(g, decoupling_schedule(1), T) - expected).norm(), 1e-14);
}

TEST(ResultingEvolution, TerminalPulseAppliedLast) {
  AnalyticGenerator g = random_generator(ModeLayout(2, 0), 4, GeneratorScales{}, 0);
  PulseSchedule s;
  s.kind = PulseKind::indexed;
  s.m = 1;
  s.pulses = {{1.0, MultiIndex{kPairY, kPairI}, 1}};
  const Matrix expected = s_matrix(MultiIndex{kPairY, kPairI}) * matrix_exponential(g.x[0]);
  EXPECT_LT((resulting_evolution(g, s, 1.0) - expected).norm(), 1e-14);
}

TEST(ResultingEvolution, FirstOrderDecoupling) {
  const AnalyticGenerator g = coupled(12, 1, 1);
  const SweepResult r = order_sweep(g, SweepScheme{SweepKind::decoupling, 1, 0}, logspace(1e-3, 1e-1, 10));
  ASSERT_TRUE(r.slope.has_value());
  EXPECT_NEAR(*r.slope, 2.0, 0.3);
}

TEST(Toggling, DecouplingBlockSigns) {
  const AnalyticGenerator g = coupled(6, 1, 2, 1);
  const PulseSchedule s = decoupling_schedule(3);
  const SignFunction sigma = sigma_function(s);
  const double T = 2.0;
  for (int k = 0; k <= 40; ++k) {
    const double t = T * k / 40.0;
    const Matrix tf = toggling_generator(g, s, T, t);
    const BlockParts a = block_decompose(tf, g.layout);
    const BlockParts b = block_decompose(g.at(t), g.layout);
    const double sg = sigma.value_at(t / T);
    EXPECT_LT((a.ss - b.ss).norm(), 1e-14);
    EXPECT_LT((a.ee - b.ee).norm(), 1e-14);
    EXPECT_LT((a.se - sg * b.se).norm(), 1e-14);
    EXPECT_LT((a.es - sg * b.es).norm(), 1e-14);
  }
  EXPECT_EQ(toggling_generator(g, s, T, 0.1), g.at(0.1));
}

TEST(Toggling, HomogenizationCoefficientsPickUpSigns) {
  const int m = 1;
  const AnalyticGenerator g = random_generator(ModeLayout(2, 0), 9, GeneratorScales{}, 0);
  const PulseSchedule s = homogenization_schedule(1, m);
  const auto base = expand_in_basis(g.x[0], m);
  for (double tau : {0.05, 0.3, 0.51, 0.77, 0.99}) {
    const auto toggled = expand_in_basis(toggling_generator(g, s, 1.0, tau), m);
    for (const auto& [alpha, value] : base) {
      const double f = toggling_sign_function(s, alpha).value_at(tau);
      EXPECT_NEAR(toggled.at(alpha), f * value, 1e-13) << alpha.bits() << " at " << tau;
    }
  }
}

TEST(HomogenizationFit, Examples) {
  const Matrix j = canonical_form(2);
  const HomogenizationFit a = homogenization_fit(matrix_exponential(0.3 * j), 1.0);
  EXPECT_NEAR(a.omega, 0.3, 1e-14);
  EXPECT_LT(a.residual, 1e-12);
  EXPECT_EQ(homogenization_fit(Matrix::Identity(4, 4), 2.0).omega, 0.0);
  const Matrix perturb = s_matrix(MultiIndex{kPairX, kPairZ});
  const double eps = 1e-5;
  const HomogenizationFit c = homogenization_fit(matrix_exponential(0.3 * j) + eps * perturb, 1.0);
  EXPECT_NEAR(c.residual, eps * perturb.norm(), 1e-12);
  EXPECT_THROW(homogenization_fit(perturb, 1.0), FitUndefinedError);
}

TEST(Bound, Examples) {
  EXPECT_EQ(suppression_bound(1.0, 2.0, 2, 0.0).value, 0.0);
  const BoundResult b = suppression_bound(0.5, 0.5, 1, 1.0);
  EXPECT_TRUE(b.closed_form);
  EXPECT_NEAR(b.value, std::numbers::e * std::numbers::sqrt2 / 2.0, 1e-14);
  EXPECT_NEAR(b.value, 1.9221, 1e-4);
  const BoundResult series = suppression_bound(1.0, 1.0, 1, 1.0);
  EXPECT_FALSE(series.closed_form);
  EXPECT_NEAR(series.value, std::numbers::sqrt2 * (std::exp(2.0) - 3.0), 1e-13);
}

TEST(Bound, HoldsForRandomGenerators) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const AnalyticGenerator g = coupled(seed, 1, 2);
    const auto [j0, jz] = coupling_strengths(g);
    for (int N = 1; N <= 3; ++N) {
      const double T = 0.5 / (j0 + jz);
      const Matrix s = resulting_evolution(g, decoupling_schedule(N), T);
      EXPECT_LE(decoupling_residual_spectral(s, g.layout), suppression_bound(j0, jz, N, T).value);
    }
  }
}

TEST(Sweep, ZeroCouplingIsFloorFlagged) {
  const AnalyticGenerator g = random_generator(ModeLayout(1, 1), 3, GeneratorScales{1.0, 0.0, 1.0}, 0);
  const SweepResult r = order_sweep(g, SweepScheme{SweepKind::decoupling, 2, 0}, logspace(1e-3, 1e-1, 6));
  for (bool f : r.floor_flag) EXPECT_TRUE(f);
  EXPECT_FALSE(r.slope.has_value());
}

TEST(Sweep, ThreadCountDoesNotChangeResults) {
  const AnalyticGenerator g = coupled(4, 1, 2, 2);
  const auto grid = logspace(1e-3, 1e-1, 8);
  SweepOptions one;
  SweepOptions many;
  many.threads = 4;
  const SweepResult a = order_sweep(g, SweepScheme{SweepKind::decoupling, 2, 0}, grid, {}, one);
  const SweepResult b = order_sweep(g, SweepScheme{SweepKind::decoupling, 2, 0}, grid, {}, many);
  EXPECT_EQ(a.residual, b.residual);
}

TEST(Sweep, HalvingSubstepsIsStable) {
  const AnalyticGenerator g = coupled(4, 1, 1, 2);
  const auto grid = logspace(1e-2, 1e-1, 4);
  const SweepResult a = order_sweep(g, SweepScheme{SweepKind::decoupling, 2, 0}, grid, PropagatorConfig{16, 1e-12, 8});
  const SweepResult b = order_sweep(g, SweepScheme{SweepKind::decoupling, 2, 0}, grid, PropagatorConfig{32, 1e-12, 8});
  for (std::size_t i = 0; i < grid.size(); ++i) {
    EXPECT_LT(std::abs(a.residual[i] - b.residual[i]), std::max(0.01 * a.residual[i], 1e-13));
  }
}

TEST(Sweep, HomogenizationSlope) {
  const AnalyticGenerator g = random_generator(ModeLayout(2, 1), 21, GeneratorScales{1.0, 0.0, 1.0}, 0);
  const SweepResult r = order_sweep(g, SweepScheme{SweepKind::homogenization, 1, 1}, logspace(1e-3, 1e-1, 10));
  ASSERT_TRUE(r.slope.has_value());
  EXPECT_GE(*r.slope, 1.7);
  EXPECT_LE(*r.slope, 2.5);
  EXPECT_THROW(order_sweep(coupled(1, 2, 1), SweepScheme{SweepKind::homogenization, 1, 1}, {0.1}),
               std::invalid_argument);
}

TEST(Sweep, HomogenizationOmegaStabilises) {
  const AnalyticGenerator g = random_generator(ModeLayout(2, 0), 22, GeneratorScales{}, 2);
  const SweepResult r = order_sweep(g, SweepScheme{SweepKind::homogenization, 2, 1}, logspace(1e-3, 1e-1, 10));
  const double w0 = r.omega[0], w1 = r.omega[1], w2 = r.omega[2];
  EXPECT_LT(std::abs(w0 - w1), 0.1 * std::abs(w0));
  EXPECT_LT(std::abs(w0 - w2), 0.1 * std::abs(w0));
}

TEST(Affine, NoLinearTermsGivesPlainTransport) {
  const AnalyticGenerator g = coupled(14, 1, 1, 1);
  Rng rng(2);
  const Vector d0 = testing::random_matrix(rng, 4, 1);
  const AffineResult r = affine_propagate(g, Matrix::Identity(4, 4), d0, 0.9);
  EXPECT_LT((r.displacement - r.s * d0).norm(), 1e-13);
  EXPECT_LT((r.s - propagate(g, 0.0, 0.9)).norm(), 1e-11);
}

TEST(Affine, CovarianceIgnoresLinearTerms) {
  AnalyticGenerator a = coupled(15, 1, 1, 2);
  AnalyticGenerator b = a;
  a.b = random_linear_terms(a.layout, 1, 1.0, 2);
  b.b = random_linear_terms(b.layout, 2, 3.0, 1);
  Rng rng(3);
  const Matrix m0 = testing::random_symmetric(rng, 4) + 4.0 * Matrix::Identity(4, 4);
  const Vector d0 = Vector::Zero(4);
  const AffineResult ra = affine_propagate(a, m0, d0, 1.1);
  const AffineResult rb = affine_propagate(b, m0, d0, 1.1);
  EXPECT_LT((ra.covariance - rb.covariance).norm(), 1e-11);
  EXPECT_GT((ra.displacement - rb.displacement).norm(), 1e-3);
}

TEST(Affine, ConstantDriveAgainstFineSteps) {
  AnalyticGenerator g;
  g.layout = ModeLayout(1, 0);
  g.x = {Matrix::Zero(2, 2)};
  g.b = {(Vector(2) << 0.3, -0.7).finished()};
  const Vector d0 = (Vector(2) << 1.0, 2.0).finished();
  const AffineResult r = affine_propagate(g, Matrix::Identity(2, 2), d0, 2.0);
  EXPECT_EQ(r.covariance, Matrix::Identity(2, 2));
  // d' = J b with X = 0 is a straight line.
  const Vector expected = d0 + 2.0 * canonical_form(1) * g.b[0];
  EXPECT_LT((r.displacement - expected).norm(), 1e-14);
}

TEST(Affine, TimeDependentDriveAgainstRk4) {
  AnalyticGenerator g = coupled(16, 1, 1, 1);
  g.b = random_linear_terms(g.layout, 4, 1.0, 2);
  const Matrix j = build_symplectic_form(g.layout);
  const Vector d0 = Vector::Ones(4);
  auto rhs = [&](double t, const Vector& d) -> Vector { return g.at(t) * d + j * g.linear_at(t); };
  Vector d = d0;
  const int n = 20000;
  const double T = 1.0, h = T / n;
  for (int i = 0; i < n; ++i) {
    const double t = i * h;
    const Vector k1 = rhs(t, d);
    const Vector k2 = rhs(t + h / 2, d + h / 2 * k1);
    const Vector k3 = rhs(t + h / 2, d + h / 2 * k2);
    const Vector k4 = rhs(t + h, d + h * k3);
    d += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
  }
  const AffineResult r = affine_propagate(g, Matrix::Identity(4, 4), d0, T);
  EXPECT_LT((r.displacement - d).norm(), 1e-10);
}

TEST(Affine, RejectsAsymmetricCovariance) {
  const AnalyticGenerator g = coupled(1);
  Matrix m0 = Matrix::Identity(4, 4);
  m0(0, 1) = 0.5;
  EXPECT_THROW(affine_propagate(g, m0, Vector::Zero(4), 1.0), std::invalid_argument);
}

TEST(Helpers, LogspaceAndSlope) {
  const auto g = logspace(1e-3, 1e-1, 3);
  EXPECT_NEAR(g[1], 1e-2, 1e-17);
  std::vector<double> y;
  for (double t : g) y.push_back(5.0 * t * t * t);
  EXPECT_NEAR(loglog_slope(g, y), 3.0, 1e-12);
}

}  // namespace
}  // namespace bdd
