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

#ifndef ODOLAB_STABILITY_HPP
#define ODOLAB_STABILITY_HPP

#include <cstdint>
#include <vector>

#include "odolab/actions.hpp"
#include "odolab/bsgroup.hpp"
#include "odolab/numeric.hpp"
#include "odolab/spaces.hpp"

// Block machinery over the product of the binary odometer and the digit
// space. Level j partitions the odometer into 2^{j+1} cells; over cell l
// the set B_j pins a width-m block of window digits in the t^{-l} frame
// (for p = 1 the frame is a literal position shift). The translating
// element U_j restores B_j up to the cell that wraps, which drives the
// asymptotic-invariance and non-triviality estimates.

namespace odolab::stability {

struct BlockFamily {
  std::int64_t p = 1;
  std::int64_t q = 2;
  std::int64_t r = 2;
  int m = 2;  // block width in base digits

  // Smallest width whose block can tell 0 from r: base^m > r.
  static int minimal_width(std::int64_t p, std::int64_t q, std::int64_t r);
  // Validates 1 <= p < q coprime, r >= 1, r * p >= 2; picks the minimal width.
  static BlockFamily make(std::int64_t p, std::int64_t q, std::int64_t r);

  std::int64_t block_base() const { return p == 1 ? q : p * q; }
  BigInt block_modulus() const;

  // Anchor position of block j. For p = 1 blocks tile contiguously and the
  // cell shift moves them; for p > 1 the anchor clears every cell shift
  // (anchor(j) > l for all level-j cells l) so the frame lemma applies.
  std::int64_t anchor(int j) const;

  // Exponent of the central candidate V_j = a^{r base^{j m}}.
  BigInt v_exponent(int j) const;
  // Window addend of U_j seen in the t^{-l} frame: r at the anchor digit.
  BigInt u_frame_addend(int j) const;
  // Y-side addend of U_j on cell l (an integer: the frame addend times
  // (q/p)^l, and l stays below the anchor).
  BigInt u_cell_exponent(int j, std::int64_t l) const;
  // The same element as a group word t^l a^{c_j} t^{-l}.
  bsgroup::Word u_cell_word(int j, std::int64_t l) const;
};

// tau_j(y): window digits [j m, (j+1) m) as a value in [0, base^m).
std::int64_t tau_block(const BlockFamily& f, const actions::YPtr& y, int j);

// pi_j(x, y) for all j <= j_max; B_j = {pi_j = 0}. For p > 1 one inverse
// chain serves every level because the cells are nested.
std::vector<std::int64_t> pi_blocks(const BlockFamily& f, const actions::XPoint& x,
                                    const actions::YPtr& y, int j_max);

// U_j on the Y factor: adds u_cell_exponent(j, cell_j(x)).
actions::YPtr apply_u(const BlockFamily& f, int j, const actions::XPoint& x,
                      const actions::YPtr& y);
// V_j on the Y factor.
actions::YPtr apply_v(const BlockFamily& f, int j, const actions::YPtr& y);

// Exact fraction of the finite grid (window value mod base^{l+d+m}, l
// positive digits) whose l-step inverse chain shows block value v at digits
// [d, d+m). Enumerates the full grid; throws when it exceeds 2^24 states.
Rational chained_pattern_fraction(std::int64_t p, std::int64_t q, std::int64_t l,
                                  int d, int m, std::int64_t v);

// The closed form the enumeration certifies: base^{-m} for every v as long
// as d >= l (each window residue class mod p^l meets the pattern set in the
// same number of points). Throws when d < l.
Rational chained_pattern_measure(std::int64_t p, std::int64_t q, std::int64_t l,
                                 int d, int m);

// p = 1 piece of {pi_j = v} over cell l as a plain product cylinder.
// Coordinate keys: 2i is odometer bit i (alphabet 2), 2k+1 is window digit
// k (alphabet q).
spaces::ProductCylinder p1_piece(const BlockFamily& f, int j, std::int64_t l,
                                 std::int64_t v);

// Exact translate-gap certificate: the translate misses the set entirely
// and the symmetric difference has the stated exact measure. Pointwise
// confirmation maps sampled members and re-tests their block values.
struct GapCertificate {
  bool disjoint = false;
  Rational sym_diff;
  int members_checked = 0;
  bool members_ok = false;
};
GapCertificate u_gap(const BlockFamily& f, int j, int member_samples,
                     std::uint64_t seed);
GapCertificate v_gap(const BlockFamily& f, int j, int member_samples,
                     std::uint64_t seed);

// Sampled symmetric differences of B_j against its t and a translates,
// every level in one pass over the samples.
struct DiffSeries {
  std::vector<std::int64_t> t_hits;
  std::vector<std::int64_t> a_hits;
  std::int64_t samples = 0;
};
DiffSeries diff_series(const BlockFamily& f, int j_max, std::int64_t samples,
                       std::uint64_t seed);

// Exact push-forward of the product measure through (pi_0..pi_d) for the
// p = 1 family: the preimage of a target digit vector decomposes into one
// cylinder per level-d cell. Sampled points confirm the decomposition.
struct PushforwardReport {
  Rational measure;
  Rational expected;
  bool decomposition_ok = false;
};
PushforwardReport p1_pushforward(const BlockFamily& f,
                                 const std::vector<std::int64_t>& target,
                                 std::int64_t member_samples, std::uint64_t seed);

// Commutation of U_j with a generator ('a' or 't'): per-cell word
// identities in the group (exact Britton arithmetic), then sampled
// digitwise comparison of the two map orders on the product space. For 't'
// the only disagreements allowed are on the wrapping cell.
struct CommutationReport {
  bool words_ok = false;
  std::int64_t samples = 0;
  std::int64_t disagreements = 0;
  std::int64_t off_wrap_disagreements = 0;
};
CommutationReport u_commutation(const BlockFamily& f, int j, char gen,
                                std::int64_t samples, std::uint64_t seed);

// V_j against a and t a t^{-1}: exact commutators in the group, with the
// divisibility threshold from conj_exponents.
struct CentralReport {
  bool commutes_with_a = false;
  bool commutes_with_conj = false;
  bool threshold_met = false;
};
CentralReport v_commutation(const BlockFamily& f, int j);

}  // namespace odolab::stability

#endif  // ODOLAB_STABILITY_HPP
