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

#include <Eigen/Dense>

#include <cstddef>
#include <stdexcept>

namespace bdd {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Thrown when operands have incompatible shapes.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Mode counts of a system coupled to an environment.
///
/// Phase-space coordinates are QP-blocked per subsystem:
/// (Q^S_1..Q^S_nS, P^S_1..P^S_nS, Q^E_1..Q^E_nE, P^E_1..P^E_nE).
class ModeLayout {
 public:
  ModeLayout(std::size_t system_modes, std::size_t environment_modes);

  std::size_t system_modes() const { return n_s_; }
  std::size_t environment_modes() const { return n_e_; }
  std::size_t modes() const { return n_s_ + n_e_; }

  /// Phase-space dimension 2(nS + nE).
  Eigen::Index dimension() const { return static_cast<Eigen::Index>(2 * modes()); }
  Eigen::Index system_dimension() const { return static_cast<Eigen::Index>(2 * n_s_); }
  Eigen::Index environment_dimension() const { return static_cast<Eigen::Index>(2 * n_e_); }

  bool operator==(const ModeLayout&) const = default;

 private:
  std::size_t n_s_;
  std::size_t n_e_;
};

/// The four blocks of a matrix partitioned along the system/environment split.
struct BlockParts {
  Matrix ss;
  Matrix se;
  Matrix es;
  Matrix ee;
};

/// [[0, I], [-I, 0]] for `modes` modes in QP ordering.
Matrix canonical_form(std::size_t modes);

/// J_{nS} (+) J_{nE}.
Matrix build_symplectic_form(const ModeLayout& layout);

/// True iff ||X^T J + J X||_F <= tol.
bool is_in_sp_algebra(const Matrix& x, const Matrix& j, double tol);

/// True iff ||S J S^T - J||_F <= tol.
bool is_symplectic(const Matrix& s, const Matrix& j, double tol);

/// exp(X) by Pade scaling and squaring. Throws std::domain_error on non-finite input.
Matrix matrix_exponential(const Matrix& x);

BlockParts block_decompose(const Matrix& m, const ModeLayout& layout);
Matrix block_assemble(const BlockParts& parts);

/// Direct sum a (+) b.
Matrix direct_sum(const Matrix& a, const Matrix& b);

/// sqrt(||M_SE||_F^2 + ||M_ES||_F^2).
double offdiag_residual(const Matrix& m, const ModeLayout& layout);

/// Largest singular value by power iteration on M^T M.
///
/// Iterates until the relative change of the Rayleigh quotient drops below
/// `tol`, or `max_iterations` is reached.
double spectral_norm(const Matrix& m, double tol = 1e-10, int max_iterations = 10000);

}  // namespace bdd
