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

#ifndef ODOLAB_VAES_HPP
#define ODOLAB_VAES_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "odolab/numeric.hpp"
#include "odolab/spaces.hpp"

// Finite-level laboratory for the matrix construction: modules
// H_n = (Z/p_n Z)^3 carrying SL(3) mod p_n, the truncated coset space X,
// the product space Y, the factor map pi, the greedy translate-disjoint
// sets I_n, and the full-group elements U_n built from them.

namespace odolab::vaes {

using Mat3 = std::array<std::array<std::int64_t, 3>, 3>;
using HElem = std::array<std::int64_t, 3>;

Mat3 mat_identity();
Mat3 mat_mul(const Mat3& a, const Mat3& b, std::int64_t p);
std::int64_t mat_det(const Mat3& a, std::int64_t p);
// Inverse of a determinant-one matrix (the adjugate).
Mat3 mat_inverse_sl(const Mat3& a, std::int64_t p);
HElem mat_apply(const Mat3& a, const HElem& v, std::int64_t p);
HElem h_add(const HElem& a, const HElem& b, std::int64_t p);
HElem h_neg(const HElem& a, std::int64_t p);

std::int64_t h_encode(const HElem& v, std::int64_t p);
HElem h_decode(std::int64_t code, std::int64_t p);

struct VaesConfig {
  std::vector<std::int64_t> primes;  // distinct, each >= 2
  static VaesConfig make(std::vector<std::int64_t> primes);
  int levels() const { return static_cast<int>(primes.size()); }
};

// Elementary transvection E_{row,col}(sign): identity plus sign at
// (row, col). These generate the integral special linear group, so words
// in them are the Lambda elements we can name exactly.
struct ElemGen {
  int row = 0;
  int col = 1;
  int sign = 1;
};
using LambdaWord = std::vector<ElemGen>;

Mat3 elem_matrix(const ElemGen& g, std::int64_t p);
// Images of the word at every configured level.
std::vector<Mat3> lambda_levels(const VaesConfig& cfg, const LambdaWord& w);

// Word of transvections whose product is the given determinant-one matrix,
// by Gaussian elimination with row additions only. Certifies that the
// level maps hit every target.
LambdaWord transvection_decompose(const Mat3& target, std::int64_t p);

struct XCosetPoint {
  std::vector<Mat3> coset;  // level n: a matrix of determinant 1 mod p_n
};
struct VaesYPoint {
  std::vector<HElem> val;
};

// Uniform level matrices: rejection-sample an invertible matrix from the
// tape, then rescale one fixed row by det^{-1}; every determinant-one
// matrix has exactly p-1 preimages.
XCosetPoint sample_x(const VaesConfig& cfg, const spaces::TapeSource& tape);
VaesYPoint sample_y(const VaesConfig& cfg, const spaces::TapeSource& tape);

XCosetPoint act_x(const VaesConfig& cfg, const std::vector<Mat3>& lam,
                  const XCosetPoint& x);
VaesYPoint act_y_lambda(const VaesConfig& cfg, const std::vector<Mat3>& lam,
                        const VaesYPoint& y);
// The summand generator h of H_m: adds at coordinate m, fixes the rest.
VaesYPoint act_y_k(const VaesConfig& cfg, int m, const HElem& h, const VaesYPoint& y);

// pi(w)_n = lambda^{-1} y_n with lambda the level-n coset coordinate.
HElem pi_vaes(const VaesConfig& cfg, const XCosetPoint& x, const VaesYPoint& y, int n);

// First nonzero element in enumeration order; the translating element of
// every level.
HElem h_pick();

// U_n: adds (x_n applied to h_pick) at coordinate n, leaves x alone.
VaesYPoint u_apply(const VaesConfig& cfg, int n, const XCosetPoint& x,
                   const VaesYPoint& y);

// Greedy translate-disjoint subset of a group enumerated 0..size-1 with
// translation step(c): picks the least available element until reaching
// ceil(size / 3) members. Throws if it ever runs dry (it cannot).
std::vector<std::int64_t> greedy_disjoint_set(
    std::int64_t size, const std::function<std::int64_t(std::int64_t)>& step);

// The H_n instance: greedy set against translation by h, encoded indices.
std::vector<std::int64_t> build_I_n(std::int64_t p, const HElem& h);

struct VaesLevelReport {
  std::int64_t prime = 0;
  std::int64_t set_size = 0;
  Rational gap;       // |(h + I) symdiff I| / |H| = 2 |I| / |H|
  bool disjoint = false;
  bool gap_ok = false;  // gap >= 2/3
};

struct VaesSuiteReport {
  std::vector<VaesLevelReport> levels;
  int words = 0;
  std::int64_t samples = 0;
  bool lambda_commutation_ok = false;  // U_n vs random Lambda words, pointwise
  bool k_commutation_ok = false;       // U_n vs H_m generators, all m
  bool pi_invariance_ok = false;       // pi(lambda w) = pi(w)
  bool semidirect_ok = false;          // (k,l) h (k,l)^{-1} = l of h, group level
  bool cylinder_fix_ok = false;        // U_n fixes cylinders over coords < n
  bool flip_ok = false;                // w in B_n forces U_n w outside B_n
  // Sampled translate differences of B_n per level, for one fixed
  // K-generator of H_0 and one fixed Lambda generator. pi is exactly
  // Lambda-invariant, so the second series must be identically zero.
  std::vector<double> k_decay;
  std::vector<double> lambda_decay;
};

VaesSuiteReport vaes_suite(const VaesConfig& cfg, int words, std::int64_t samples,
                           std::uint64_t seed);

}  // namespace odolab::vaes

#endif  // ODOLAB_VAES_HPP
