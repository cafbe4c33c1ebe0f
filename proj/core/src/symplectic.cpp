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

#include "bdd/symplectic.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <string>

namespace bdd {

namespace {

void require_square(const Matrix& m, const char* what) {
  if (m.rows() != m.cols()) {
    throw DimensionError(std::string(what) + ": matrix is not square");
  }
}

void require_same_shape(const Matrix& a, const Matrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError(std::string(what) + ": dimension mismatch");
  }
}

void require_layout(const Matrix& m, const ModeLayout& layout, const char* what) {
  if (m.rows() != layout.dimension() || m.cols() != layout.dimension()) {
    throw DimensionError(std::string(what) + ": matrix does not match layout dimension");
  }
}

}  // namespace

ModeLayout::ModeLayout(std::size_t system_modes, std::size_t environment_modes)
    : n_s_(system_modes), n_e_(environment_modes) {
  if (n_s_ < 1) {
    throw std::invalid_argument("ModeLayout: at least one system mode is required");
  }
}

Matrix canonical_form(std::size_t modes) {
  const auto n = static_cast<Eigen::Index>(modes);
  Matrix j = Matrix::Zero(2 * n, 2 * n);
  j.topRightCorner(n, n).setIdentity();
  j.bottomLeftCorner(n, n) = -Matrix::Identity(n, n);
  return j;
}

Matrix build_symplectic_form(const ModeLayout& layout) {
  return direct_sum(canonical_form(layout.system_modes()),
                    canonical_form(layout.environment_modes()));
}

bool is_in_sp_algebra(const Matrix& x, const Matrix& j, double tol) {
  require_square(x, "is_in_sp_algebra");
  require_same_shape(x, j, "is_in_sp_algebra");
  return (x.transpose() * j + j * x).norm() <= tol;
}

bool is_symplectic(const Matrix& s, const Matrix& j, double tol) {
  require_square(s, "is_symplectic");
  require_same_shape(s, j, "is_symplectic");
  return (s * j * s.transpose() - j).norm() <= tol;
}

Matrix matrix_exponential(const Matrix& x) {
  require_square(x, "matrix_exponential");
  if (!x.allFinite()) {
    throw std::domain_error("matrix_exponential: non-finite entries");
  }
  if (x.size() == 0) {
    return x;
  }
  return x.exp();
}

BlockParts block_decompose(const Matrix& m, const ModeLayout& layout) {
  require_layout(m, layout, "block_decompose");
  const Eigen::Index s = layout.system_dimension();
  const Eigen::Index e = layout.environment_dimension();
  return BlockParts{m.topLeftCorner(s, s), m.topRightCorner(s, e), m.bottomLeftCorner(e, s),
                    m.bottomRightCorner(e, e)};
}

Matrix block_assemble(const BlockParts& parts) {
  const Eigen::Index s = parts.ss.rows();
  const Eigen::Index e = parts.ee.rows();
  if (parts.ss.cols() != s || parts.ee.cols() != e || parts.se.rows() != s ||
      parts.se.cols() != e || parts.es.rows() != e || parts.es.cols() != s) {
    throw DimensionError("block_assemble: inconsistent block shapes");
  }
  Matrix m(s + e, s + e);
  m.topLeftCorner(s, s) = parts.ss;
  m.topRightCorner(s, e) = parts.se;
  m.bottomLeftCorner(e, s) = parts.es;
  m.bottomRightCorner(e, e) = parts.ee;
  return m;
}

Matrix direct_sum(const Matrix& a, const Matrix& b) {
  Matrix m = Matrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  m.topLeftCorner(a.rows(), a.cols()) = a;
  m.bottomRightCorner(b.rows(), b.cols()) = b;
  return m;
}

double offdiag_residual(const Matrix& m, const ModeLayout& layout) {
  require_layout(m, layout, "offdiag_residual");
  const Eigen::Index s = layout.system_dimension();
  const Eigen::Index e = layout.environment_dimension();
  return std::hypot(m.topRightCorner(s, e).norm(), m.bottomLeftCorner(e, s).norm());
}

double spectral_norm(const Matrix& m, double tol, int max_iterations) {
  if (m.size() == 0) {
    return 0.0;
  }
  const Matrix gram = m.transpose() * m;
  // A ones start vector can be orthogonal to the top singular vector; a fixed
  // irregular start keeps the result deterministic without that risk.
  Vector v(gram.cols());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    v(i) = 1.0 + 0.1234567 * static_cast<double>(i % 7) + 0.01 * static_cast<double>(i);
  }
  v.normalize();
  double lambda = 0.0;
  for (int it = 0; it < max_iterations; ++it) {
    Vector w = gram * v;
    const double norm = w.norm();
    if (norm == 0.0) {
      return 0.0;
    }
    const double next = v.dot(w);
    v = w / norm;
    if (std::abs(next - lambda) <= tol * std::abs(next)) {
      lambda = next;
      break;
    }
    lambda = next;
  }
  return std::sqrt(std::max(lambda, 0.0));
}

}  // namespace bdd
