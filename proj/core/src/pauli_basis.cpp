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

#include "bdd/pauli_basis.hpp"

#include "bdd/random.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <stdexcept>
#include <cmath>
#include <numbers>

namespace bdd {

namespace {

constexpr int kMaxBasisOrder = 4;

void guard_order(int m, const char* what) {
  if (m < 0) {
    throw std::invalid_argument(std::string(what) + ": m must be non-negative");
  }
  if (m > kMaxBasisOrder) {
    throw ResourceGuardError(std::string(what) + ": m > 4 exceeds the enumeration guard");
  }
}

int letter(Z2Pair p) { return 2 * p.first + p.second; }

Eigen::Matrix2d letter_matrix(Z2Pair p) {
  Eigen::Matrix2d m;
  if (p == kPairI) {
    m << 1, 0, 0, 1;
  } else if (p == kPairX) {
    m << 0, 1, 1, 0;
  } else if (p == kPairY) {
    m << 0, -1, 1, 0;
  } else {
    m << 1, 0, 0, -1;
  }
  return m;
}

Z2Pair pair_of_letter(int l) {
  return Z2Pair{static_cast<std::uint8_t>(l >> 1), static_cast<std::uint8_t>(l & 1)};
}

// sign[a][b] with S_a S_b = sign * S_{a xor b}, found by multiplying the 2x2 matrices.
std::array<std::array<int, 4>, 4> build_sign_table() {
  std::array<std::array<int, 4>, 4> table{};
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      const Z2Pair pa = pair_of_letter(a);
      const Z2Pair pb = pair_of_letter(b);
      const Eigen::Matrix2d product = letter_matrix(pa) * letter_matrix(pb);
      const Z2Pair pc{static_cast<std::uint8_t>(pa.first ^ pb.first),
                      static_cast<std::uint8_t>(pa.second ^ pb.second)};
      const double overlap = (letter_matrix(pc).transpose() * product).trace() / 2.0;
      table[a][b] = overlap > 0 ? 1 : -1;
    }
  }
  return table;
}

const std::array<std::array<int, 4>, 4>& sign_table() {
  static const auto table = build_sign_table();
  return table;
}

bool in_gamma(const MultiIndex& alpha) {
  const Z2Pair a0 = alpha[0];
  const int offdiagonal_head = (a0 == kPairX || a0 == kPairZ) ? 1 : 0;
  return (alpha.y_count() + offdiagonal_head) % 2 == 1;
}

MultiIndex single_slot(int m, std::size_t slot, Z2Pair value) {
  MultiIndex idx(static_cast<std::size_t>(m) + 1);
  idx.set(slot, value);
  return idx;
}

}  // namespace

MultiIndex::MultiIndex(std::size_t length) : length_(length) {
  if (length > kMaxLength) {
    throw ResourceGuardError("MultiIndex: length exceeds 16 slots");
  }
}

MultiIndex::MultiIndex(std::initializer_list<Z2Pair> pairs) : MultiIndex(pairs.size()) {
  std::size_t k = 0;
  for (const Z2Pair& p : pairs) {
    set(k++, p);
  }
}

MultiIndex MultiIndex::from_bits(std::string_view bits) {
  if (bits.size() % 2 != 0) {
    throw std::invalid_argument("MultiIndex::from_bits: odd number of bits");
  }
  MultiIndex idx(bits.size() / 2);
  for (std::size_t k = 0; k < idx.size(); ++k) {
    const char a = bits[2 * k];
    const char b = bits[2 * k + 1];
    if ((a != '0' && a != '1') || (b != '0' && b != '1')) {
      throw std::invalid_argument("MultiIndex::from_bits: expected only '0' and '1'");
    }
    idx.set(k, Z2Pair{static_cast<std::uint8_t>(a - '0'), static_cast<std::uint8_t>(b - '0')});
  }
  return idx;
}

Z2Pair MultiIndex::operator[](std::size_t k) const {
  if (k >= length_) {
    throw std::out_of_range("MultiIndex: slot out of range");
  }
  return Z2Pair{static_cast<std::uint8_t>((first_ >> k) & 1U),
                static_cast<std::uint8_t>((second_ >> k) & 1U)};
}

void MultiIndex::set(std::size_t k, Z2Pair value) {
  if (k >= length_) {
    throw std::out_of_range("MultiIndex: slot out of range");
  }
  if (value.first > 1 || value.second > 1) {
    throw std::invalid_argument("MultiIndex: entries must be bits");
  }
  const std::uint32_t bit = 1U << k;
  first_ = value.first ? (first_ | bit) : (first_ & ~bit);
  second_ = value.second ? (second_ | bit) : (second_ & ~bit);
}

std::string MultiIndex::bits() const {
  std::string out;
  out.reserve(2 * length_);
  for (std::size_t k = 0; k < length_; ++k) {
    const Z2Pair p = (*this)[k];
    out.push_back(static_cast<char>('0' + p.first));
    out.push_back(static_cast<char>('0' + p.second));
  }
  return out;
}

int MultiIndex::y_count() const { return std::popcount(first_ & second_); }

MultiIndex operator^(const MultiIndex& a, const MultiIndex& b) {
  MultiIndex out = a;
  out ^= b;
  return out;
}

MultiIndex& MultiIndex::operator^=(const MultiIndex& other) {
  if (length_ != other.length_) {
    throw DimensionError("MultiIndex: length mismatch");
  }
  first_ ^= other.first_;
  second_ ^= other.second_;
  return *this;
}

std::strong_ordering MultiIndex::operator<=>(const MultiIndex& other) const {
  if (auto c = length_ <=> other.length_; c != 0) {
    return c;
  }
  // Slot 0 is most significant, matching the lexicographic order of bits().
  for (std::size_t k = 0; k < length_; ++k) {
    const int a = letter((*this)[k]);
    const int b = letter(other[k]);
    if (a != b) {
      return a <=> b;
    }
  }
  return std::strong_ordering::equal;
}

MultiIndex symplectic_form_index(int m) {
  return single_slot(m, 0, kPairY);
}

Matrix s_matrix(const MultiIndex& alpha) {
  if (alpha.size() == 0) {
    throw std::invalid_argument("s_matrix: empty index");
  }
  Matrix out = Matrix::Ones(1, 1);
  for (std::size_t k = 0; k < alpha.size(); ++k) {
    const Eigen::Matrix2d f = letter_matrix(alpha[k]);
    // Slot 0 is the most significant Kronecker factor.
    Matrix next(out.rows() * 2, out.cols() * 2);
    for (Eigen::Index r = 0; r < out.rows(); ++r) {
      for (Eigen::Index c = 0; c < out.cols(); ++c) {
        next.block<2, 2>(2 * r, 2 * c) = out(r, c) * f;
      }
    }
    out = std::move(next);
  }
  return out;
}

std::vector<MultiIndex> enumerate_all(int m) {
  guard_order(m, "enumerate_all");
  const std::size_t slots = static_cast<std::size_t>(m) + 1;
  const std::size_t count = std::size_t{1} << (2 * slots);
  std::vector<MultiIndex> out;
  out.reserve(count);
  for (std::size_t code = 0; code < count; ++code) {
    MultiIndex idx(slots);
    for (std::size_t k = 0; k < slots; ++k) {
      const int l = static_cast<int>((code >> (2 * (slots - 1 - k))) & 3U);
      idx.set(k, pair_of_letter(l));
    }
    out.push_back(idx);
  }
  return out;
}

std::vector<MultiIndex> enumerate_gamma(int m) {
  guard_order(m, "enumerate_gamma");
  std::vector<MultiIndex> out;
  for (const MultiIndex& alpha : enumerate_all(m)) {
    if (in_gamma(alpha)) {
      out.push_back(alpha);
    }
  }
  return out;
}

std::vector<MultiIndex> enumerate_gamma_tilde(int m) {
  guard_order(m, "enumerate_gamma_tilde");
  std::vector<MultiIndex> out;
  for (const MultiIndex& beta : enumerate_all(m)) {
    const Z2Pair b0 = beta[0];
    if (b0 == kPairI || b0 == kPairY) {
      out.push_back(beta);
    }
  }
  return out;
}

int symplectic_inner_product(const MultiIndex& alpha, const MultiIndex& beta) {
  if (alpha.size() != beta.size()) {
    throw DimensionError("symplectic_inner_product: length mismatch");
  }
  // a^T [[0,1],[-1,0]] b = a1 b2 - a2 b1, reduced mod 2.
  const std::uint32_t terms =
      (alpha.first_mask() & beta.second_mask()) ^ (alpha.second_mask() & beta.first_mask());
  return std::popcount(terms) % 2;
}

AdjointActionReport verify_adjoint_action(int m, double tol, std::size_t max_pairs,
                                          std::uint64_t seed) {
  const std::vector<MultiIndex> gamma = enumerate_gamma(m);
  const std::vector<MultiIndex> tilde = enumerate_gamma_tilde(m);
  std::vector<Matrix> gamma_mats;
  std::vector<Matrix> tilde_mats;
  for (const auto& a : gamma) gamma_mats.push_back(s_matrix(a));
  for (const auto& b : tilde) tilde_mats.push_back(s_matrix(b));

  AdjointActionReport report;
  report.m = m;
  auto check = [&](std::size_t ia, std::size_t ib) {
    const Matrix& sa = gamma_mats[ia];
    const Matrix& sb = tilde_mats[ib];
    // S_beta is orthogonal, so its inverse is the transpose.
    const Matrix conj = sb.transpose() * sa * sb;
    const double sign = symplectic_inner_product(gamma[ia], tilde[ib]) ? -1.0 : 1.0;
    const double dev = (conj - sign * sa).norm();
    report.max_deviation = std::max(report.max_deviation, dev);
    if (dev > tol) {
      ++report.failures;
    }
    ++report.pairs_checked;
  };

  const std::size_t total = gamma.size() * tilde.size();
  if (total <= max_pairs) {
    for (std::size_t ia = 0; ia < gamma.size(); ++ia) {
      for (std::size_t ib = 0; ib < tilde.size(); ++ib) {
        check(ia, ib);
      }
    }
  } else {
    report.exhaustive = false;
    Rng rng(seed);
    for (std::size_t k = 0; k < max_pairs; ++k) {
      check(rng.index(gamma.size()), rng.index(tilde.size()));
    }
  }
  return report;
}

std::map<MultiIndex, double> expand_in_basis(const Matrix& x, int m, double tol) {
  guard_order(m, "expand_in_basis");
  const Eigen::Index dim = Eigen::Index{2} << m;
  if (x.rows() != dim || x.cols() != dim) {
    throw DimensionError("expand_in_basis: matrix dimension is not 2^{m+1}");
  }
  const Matrix j = -s_matrix(symplectic_form_index(m));
  if (!is_in_sp_algebra(x, j, tol)) {
    throw std::invalid_argument("expand_in_basis: matrix is not in the symplectic algebra");
  }
  std::map<MultiIndex, double> coefficients;
  for (const MultiIndex& alpha : enumerate_gamma(m)) {
    coefficients[alpha] = (s_matrix(alpha).transpose() * x).trace() / static_cast<double>(dim);
  }
  return coefficients;
}

Matrix reconstruct_from_basis(const std::map<MultiIndex, double>& coefficients, int m) {
  const Eigen::Index dim = Eigen::Index{2} << m;
  Matrix x = Matrix::Zero(dim, dim);
  for (const auto& [alpha, value] : coefficients) {
    x += value * s_matrix(alpha);
  }
  return x;
}

SignedIndex product_index(std::span<const MultiIndex> factors) {
  if (factors.empty()) {
    return SignedIndex{MultiIndex(1), 1};
  }
  SignedIndex acc{factors.front(), 1};
  const auto& table = sign_table();
  for (std::size_t f = 1; f < factors.size(); ++f) {
    const MultiIndex& next = factors[f];
    if (next.size() != acc.index.size()) {
      throw DimensionError("product_index: length mismatch");
    }
    for (std::size_t k = 0; k < next.size(); ++k) {
      acc.sign *= table[letter(acc.index[k])][letter(next[k])];
    }
    acc.index ^= next;
  }
  return acc;
}

MultiIndex pulse_index(const PulseLabel& label, int m) {
  guard_order(m, "pulse_index");
  if (label.axis == PulseAxis::y0) {
    return symplectic_form_index(m);
  }
  if (label.mode_bit < 1 || label.mode_bit > m) {
    throw std::out_of_range("pulse_index: mode bit must lie in 1..m");
  }
  const auto slot = static_cast<std::size_t>(label.mode_bit);
  switch (label.axis) {
    case PulseAxis::x:
      return single_slot(m, slot, kPairX);
    case PulseAxis::y:
      return single_slot(m, slot, kPairY);
    case PulseAxis::z:
      return single_slot(m, slot, kPairZ);
    case PulseAxis::y0:
      break;
  }
  return symplectic_form_index(m);
}

Matrix pulse_matrix(const PulseLabel& label, int m) { return s_matrix(pulse_index(label, m)); }

PulseGenerator pulse_generator(const PulseLabel& label, int m) {
  constexpr double half_pi = std::numbers::pi / 2.0;
  const Matrix y0 = s_matrix(symplectic_form_index(m));
  const Eigen::Index dim = y0.rows();
  const Matrix identity = Matrix::Identity(dim, dim);
  switch (label.axis) {
    case PulseAxis::y0:
      return {half_pi * y0, 1};
    case PulseAxis::y:
      return {half_pi * pulse_matrix(label, m), 1};
    case PulseAxis::x:
    case PulseAxis::z:
      return {half_pi * y0 * (pulse_matrix(label, m) + identity), -1};
  }
  return {};
}

}  // namespace bdd
