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

#include "odolab/ycylinder.hpp"

#include <algorithm>
#include <stdexcept>

namespace odolab::ycylinder {

YCylinder::YCylinder(std::int64_t p, std::int64_t q) : p_(p), q_(q) {
  if (p < 1 || q <= p) throw std::invalid_argument("YCylinder: need 1 <= p < q");
}

void YCylinder::require_neg(std::int64_t position, std::int64_t digit) {
  if (position > -1) throw std::invalid_argument("require_neg: position must be <= -1");
  if (digit < 0 || digit >= q_) throw std::invalid_argument("require_neg: digit out of range");
  auto it = neg_.find(position);
  if (it != neg_.end() && it->second != digit)
    throw std::invalid_argument("require_neg: conflicting constraint");
  neg_[position] = digit;
}

void YCylinder::require_pos(std::int64_t position, std::int64_t digit) {
  if (position < 1) throw std::invalid_argument("require_pos: position must be >= 1");
  if (digit < 0 || digit >= p_) throw std::invalid_argument("require_pos: digit out of range");
  auto it = pos_.find(position);
  if (it != pos_.end() && it->second != digit)
    throw std::invalid_argument("require_pos: conflicting constraint");
  pos_[position] = digit;
}

void YCylinder::restrict_window(int alpha, int beta, std::vector<BigInt> residues) {
  if (alpha_ != 0 || beta_ != 0 || residues_ != std::vector<BigInt>{BigInt(0)})
    throw std::invalid_argument("restrict_window: window already restricted");
  if (alpha < 0 || beta < 0) throw std::invalid_argument("restrict_window: negative level");
  if (p_ == 1 && alpha != 0)
    throw std::invalid_argument("restrict_window: alpha must be 0 when p == 1");
  BigInt mod = bi_pow(p_, alpha) * bi_pow(q_, beta);
  std::sort(residues.begin(), residues.end());
  if (residues.empty()) throw std::invalid_argument("restrict_window: empty residue set");
  for (std::size_t i = 0; i < residues.size(); ++i) {
    if (residues[i] < 0 || residues[i] >= mod)
      throw std::invalid_argument("restrict_window: residue out of range");
    if (i > 0 && residues[i] == residues[i - 1])
      throw std::invalid_argument("restrict_window: duplicate residue");
  }
  alpha_ = alpha;
  beta_ = beta;
  residues_ = std::move(residues);
}

BigInt YCylinder::window_modulus() const {
  return bi_pow(p_, alpha_) * bi_pow(q_, beta_);
}

Rational YCylinder::measure() const {
  Rational m(static_cast<std::int64_t>(residues_.size()), 1);
  m /= Rational(window_modulus());
  m /= Rational(bi_pow(q_, static_cast<std::int64_t>(neg_.size())));
  m /= Rational(bi_pow(p_, static_cast<std::int64_t>(pos_.size())));
  return m;
}

bool YCylinder::matches(
    const std::function<std::int64_t(std::int64_t)>& neg_digit,
    const std::function<BigInt(const BigInt&)>& y0_mod,
    const std::function<std::int64_t(std::int64_t)>& pos_digit) const {
  for (const auto& [n, d] : neg_)
    if (neg_digit(n) != d) return false;
  for (const auto& [m, d] : pos_)
    if (pos_digit(m) != d) return false;
  BigInt r = y0_mod(window_modulus());
  return std::binary_search(residues_.begin(), residues_.end(), r);
}

namespace {

// Raises alpha resp. beta by one, replacing each residue by its full fiber
// of lifts. Measure is unchanged.
YCylinder lift_window(const YCylinder& c, bool raise_alpha) {
  std::int64_t fan = raise_alpha ? c.p() : c.q();
  BigInt mod = c.window_modulus();
  std::vector<BigInt> lifted;
  lifted.reserve(c.window_residues().size() * static_cast<std::size_t>(fan));
  for (const BigInt& s : c.window_residues())
    for (std::int64_t i = 0; i < fan; ++i) lifted.push_back(s + mod * i);
  YCylinder out(c.p(), c.q());
  for (const auto& [n, d] : c.neg()) out.require_neg(n, d);
  for (const auto& [m, d] : c.pos()) out.require_pos(m, d);
  out.restrict_window(c.alpha() + (raise_alpha ? 1 : 0),
                      c.beta() + (raise_alpha ? 0 : 1), std::move(lifted));
  return out;
}

// Groups residues by their value mod the divisor (p or q of the window
// modulus); each group is homogeneous for the corresponding consumed digit.
std::map<std::int64_t, std::vector<BigInt>> split_by_residue(
    const std::vector<BigInt>& residues, std::int64_t divisor) {
  std::map<std::int64_t, std::vector<BigInt>> groups;
  for (const BigInt& s : residues)
    groups[static_cast<std::int64_t>(mod_floor(s, divisor))].push_back(s);
  return groups;
}

}  // namespace

std::vector<YCylinder> transport_t(const YCylinder& c_in) {
  const std::int64_t p = c_in.p(), q = c_in.q();
  // The image window class lives mod p^{alpha-1} q^{beta+1}; when p > 1 the
  // consumed mod-p residue must be readable, so ensure alpha >= 1 first.
  const YCylinder c = (p > 1 && c_in.alpha() == 0) ? lift_window(c_in, true) : c_in;

  std::vector<std::int64_t> kvals;
  if (auto it = c.neg().find(-1); it != c.neg().end()) {
    kvals.push_back(it->second);
  } else {
    for (std::int64_t k = 0; k < q; ++k) kvals.push_back(k);
  }

  auto groups = split_by_residue(c.window_residues(), p);

  BigInt image_mod = bi_pow(p, c.alpha() - (p > 1 ? 1 : 0)) * bi_pow(q, c.beta() + 1);
  std::vector<YCylinder> pieces;
  for (std::int64_t k : kvals) {
    for (const auto& [i, subset] : groups) {
      YCylinder piece(p, q);
      for (const auto& [n, d] : c.neg())
        if (n <= -2) piece.require_neg(n + 1, d);
      if (p > 1) piece.require_pos(1, i);
      for (const auto& [m, d] : c.pos()) piece.require_pos(m + 1, d);
      std::vector<BigInt> image;
      image.reserve(subset.size());
      for (const BigInt& s : subset)
        image.push_back(mod_floor(k + q * ((s - i) / p), image_mod));
      piece.restrict_window(c.alpha() - (p > 1 ? 1 : 0), c.beta() + 1,
                            std::move(image));
      pieces.push_back(std::move(piece));
    }
  }
  return pieces;
}

std::vector<YCylinder> transport_t_inv(const YCylinder& c_in) {
  const std::int64_t p = c_in.p(), q = c_in.q();
  const YCylinder c = (c_in.beta() == 0) ? lift_window(c_in, false) : c_in;

  std::vector<std::int64_t> uvals;
  if (p == 1) {
    uvals.push_back(0);
  } else if (auto it = c.pos().find(1); it != c.pos().end()) {
    uvals.push_back(it->second);
  } else {
    for (std::int64_t u = 0; u < p; ++u) uvals.push_back(u);
  }

  auto groups = split_by_residue(c.window_residues(), q);

  BigInt image_mod = bi_pow(p, c.alpha() + 1) * bi_pow(q, c.beta() - 1);
  if (p == 1) image_mod = bi_pow(q, c.beta() - 1);
  std::vector<YCylinder> pieces;
  for (std::int64_t u : uvals) {
    for (const auto& [z, subset] : groups) {
      YCylinder piece(p, q);
      piece.require_neg(-1, z);
      for (const auto& [n, d] : c.neg()) piece.require_neg(n - 1, d);
      for (const auto& [m, d] : c.pos())
        if (m >= 2) piece.require_pos(m - 1, d);
      std::vector<BigInt> image;
      image.reserve(subset.size());
      for (const BigInt& s : subset)
        image.push_back(mod_floor(u + p * ((s - z) / q), image_mod));
      piece.restrict_window(p > 1 ? c.alpha() + 1 : 0, c.beta() - 1,
                            std::move(image));
      pieces.push_back(std::move(piece));
    }
  }
  return pieces;
}

Rational total_measure(const std::vector<YCylinder>& pieces) {
  Rational total = 0;
  for (const YCylinder& c : pieces) total += c.measure();
  return total;
}

}  // namespace odolab::ycylinder
