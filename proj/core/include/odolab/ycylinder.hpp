// Copyright 2026 The odolab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ODOLAB_YCYLINDER_HPP
#define ODOLAB_YCYLINDER_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "odolab/numeric.hpp"

// Cylinder sets on Y = prod_{n<=-1}[0,q) x E_pq x prod_{m>=1}[0,p) with
// exact rational measure, closed under the two skew-product generator maps.
//
// A cylinder fixes finitely many outer digits and restricts the window
// coordinate to a set of residues mod p^alpha q^beta. The one-step image of
// such a cylinder is again a finite disjoint union of them: unconstrained
// consumed digits split the cylinder, a window class that does not determine
// the consumed residue is lifted one level first. All measures stay exact.

namespace odolab::ycylinder {

class YCylinder {
 public:
  YCylinder(std::int64_t p, std::int64_t q);

  std::int64_t p() const { return p_; }
  std::int64_t q() const { return q_; }

  // Fixes the digit at a negative position (alphabet q) or a positive
  // position (alphabet p). Conflicting constraints throw.
  void require_neg(std::int64_t position, std::int64_t digit);
  void require_pos(std::int64_t position, std::int64_t digit);

  // Restricts the window to the given residues mod p^alpha q^beta. Residues
  // must be distinct and canonical; only one restriction may be installed.
  void restrict_window(int alpha, int beta, std::vector<BigInt> residues);

  const std::map<std::int64_t, std::int64_t>& neg() const { return neg_; }
  const std::map<std::int64_t, std::int64_t>& pos() const { return pos_; }
  int alpha() const { return alpha_; }
  int beta() const { return beta_; }
  const std::vector<BigInt>& window_residues() const { return residues_; }
  BigInt window_modulus() const;

  // q^-#neg * |S| / (p^alpha q^beta) * p^-#pos.
  Rational measure() const;

  // Membership from digit accessors; y0_mod must return the window value
  // reduced mod the passed modulus.
  bool matches(const std::function<std::int64_t(std::int64_t)>& neg_digit,
               const std::function<BigInt(const BigInt&)>& y0_mod,
               const std::function<std::int64_t(std::int64_t)>& pos_digit) const;

 private:
  std::int64_t p_;
  std::int64_t q_;
  std::map<std::int64_t, std::int64_t> neg_;
  std::map<std::int64_t, std::int64_t> pos_;
  int alpha_ = 0;
  int beta_ = 0;
  std::vector<BigInt> residues_{BigInt(0)};  // mod p^alpha q^beta
};

// Exact image decompositions under one generator step. The pieces are
// pairwise disjoint and their measures sum to the input's measure; the
// forward map consumes the digit at -1 and the window's mod-p residue, the
// inverse map consumes the digit at +1 and the window's mod-q residue.
std::vector<YCylinder> transport_t(const YCylinder& c);
std::vector<YCylinder> transport_t_inv(const YCylinder& c);

Rational total_measure(const std::vector<YCylinder>& pieces);

}  // namespace odolab::ycylinder

#endif  // ODOLAB_YCYLINDER_HPP
