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

#include "bdd/symplectic.hpp"

#include <compare>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bdd {

/// Thrown when an exhaustive construction would exceed its resource guard.
class ResourceGuardError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Element of Z_2^2 labelling one tensor factor: (0,0)=I, (1,0)=x, (1,1)=y, (0,1)=z.
struct Z2Pair {
  std::uint8_t first = 0;
  std::uint8_t second = 0;

  bool operator==(const Z2Pair&) const = default;
};

inline constexpr Z2Pair kPairI{0, 0};
inline constexpr Z2Pair kPairX{1, 0};
inline constexpr Z2Pair kPairY{1, 1};
inline constexpr Z2Pair kPairZ{0, 1};

/// alpha = (a_0, a_1, ..., a_m) in (Z_2^2)^{m+1}. Slot 0 is the quadrature
/// (q/p) factor; slots 1..m are the mode-label bits.
///
/// Stored as two bit masks so XOR and the symplectic form are word operations.
class MultiIndex {
 public:
  static constexpr std::size_t kMaxLength = 16;

  MultiIndex() = default;
  explicit MultiIndex(std::size_t length);
  MultiIndex(std::initializer_list<Z2Pair> pairs);

  /// Parses the bit string written by bits(), e.g. "1100" for (y, I).
  static MultiIndex from_bits(std::string_view bits);

  std::size_t size() const { return length_; }
  Z2Pair operator[](std::size_t k) const;
  void set(std::size_t k, Z2Pair value);

  bool is_zero() const { return first_ == 0 && second_ == 0; }

  /// Two characters per slot, slot 0 first.
  std::string bits() const;

  /// Number of slots equal to y = (1,1).
  int y_count() const;

  std::uint32_t first_mask() const { return first_; }
  std::uint32_t second_mask() const { return second_; }

  friend MultiIndex operator^(const MultiIndex& a, const MultiIndex& b);
  MultiIndex& operator^=(const MultiIndex& other);

  bool operator==(const MultiIndex&) const = default;
  std::strong_ordering operator<=>(const MultiIndex& other) const;

 private:
  std::size_t length_ = 0;
  std::uint32_t first_ = 0;
  std::uint32_t second_ = 0;
};

/// The index (1,1,0,...,0) with S = y (x) I = -J.
MultiIndex symplectic_form_index(int m);

/// Index of the product of an ordered list of basis matrices, with its sign:
/// S_{a_1} S_{a_2} ... S_{a_s} = sign * S_index.
struct SignedIndex {
  MultiIndex index;
  int sign = 1;
};

/// S_alpha = S_{a_0} (x) ... (x) S_{a_m}; dimension 2^{m+1}.
Matrix s_matrix(const MultiIndex& alpha);

/// Gamma: indices whose S_alpha span sp(2 * 2^m). |Gamma| = 2*4^m + 2^m.
std::vector<MultiIndex> enumerate_gamma(int m);

/// Gamma-tilde: indices with a_0 in {I, y}; their S_beta are orthogonal symplectic.
std::vector<MultiIndex> enumerate_gamma_tilde(int m);

/// Every index of length m+1, in increasing bit order.
std::vector<MultiIndex> enumerate_all(int m);

/// sum_j a_j^T [[0,1],[-1,0]] b_j mod 2.
int symplectic_inner_product(const MultiIndex& alpha, const MultiIndex& beta);

struct AdjointActionReport {
  int m = 0;
  std::size_t pairs_checked = 0;
  std::size_t failures = 0;
  double max_deviation = 0.0;
  bool exhaustive = true;
  bool passed() const { return failures == 0; }
};

/// Checks S_beta^{-1} S_alpha S_beta = (-1)^<alpha,beta> S_alpha over
/// Gamma x Gamma-tilde. Exhaustive when the pair count fits `max_pairs`,
/// otherwise a seeded sample of `max_pairs` pairs.
AdjointActionReport verify_adjoint_action(int m, double tol, std::size_t max_pairs = 100000,
                                          std::uint64_t seed = 1);

/// Coefficients B_alpha = tr(S_alpha^T X) / 2^{m+1} over Gamma.
/// Throws std::invalid_argument if X is not in sp(2 * 2^m) within `tol`.
std::map<MultiIndex, double> expand_in_basis(const Matrix& x, int m, double tol = 1e-10);

/// sum_alpha B_alpha S_alpha.
Matrix reconstruct_from_basis(const std::map<MultiIndex, double>& coefficients, int m);

SignedIndex product_index(std::span<const MultiIndex> factors);

/// Homogenization pulse generators y_0, x_i, y_i, z_i (1 <= i <= m).
enum class PulseAxis { y0, x, y, z };

struct PulseLabel {
  PulseAxis axis = PulseAxis::y0;
  int mode_bit = 0;  ///< i in 1..m; ignored for y0.
};

MultiIndex pulse_index(const PulseLabel& label, int m);
Matrix pulse_matrix(const PulseLabel& label, int m);

/// A generator G in sp(2 * 2^m) with exp(G) = sign * pulse_matrix(label).
struct PulseGenerator {
  Matrix generator;
  int sign = 1;
};

/// pi/2 y_0, pi/2 y_0 (x_i + I), pi/2 y_i and pi/2 y_0 (z_i + I) respectively.
PulseGenerator pulse_generator(const PulseLabel& label, int m);

}  // namespace bdd
