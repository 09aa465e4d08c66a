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

#include "odolab/exactnum.hpp"

#include <boost/multiprecision/cpp_int.hpp>

namespace odolab::exactnum {

AdicWindow AdicWindow::from_digits(std::int64_t base,
                                   const std::vector<std::int64_t>& digits) {
  BigInt v = 0;
  for (std::size_t i = digits.size(); i-- > 0;) {
    v = v * base + digits[i];
  }
  return AdicWindow(base, static_cast<int>(digits.size()), v);
}

std::int64_t AdicWindow::digit(int i) const {
  if (i < 0 || i >= precision_) {
    throw std::out_of_range("AdicWindow::digit: index outside window");
  }
  BigInt d = (value_ / bi_pow(base_, i)) % base_;
  return static_cast<std::int64_t>(d);
}

std::vector<std::int64_t> AdicWindow::digits() const {
  std::vector<std::int64_t> out(static_cast<std::size_t>(precision_));
  BigInt rest = value_;
  for (int i = 0; i < precision_; ++i) {
    out[static_cast<std::size_t>(i)] = static_cast<std::int64_t>(rest % base_);
    rest /= base_;
  }
  return out;
}

AdicWindow odometer_add(const AdicWindow& w, const BigInt& k) {
  return AdicWindow(w.base(), w.precision(), w.value() + k);
}

std::int64_t eta(const AdicWindow& w, std::int64_t p) {
  if (w.precision() < 1) {
    throw PrecisionExhausted("eta: window has no digits");
  }
  return static_cast<std::int64_t>(mod_floor(w.value(), p));
}

std::int64_t zeta(const AdicWindow& w, std::int64_t q) {
  if (w.precision() < 1) {
    throw PrecisionExhausted("zeta: window has no digits");
  }
  return static_cast<std::int64_t>(mod_floor(w.value(), q));
}

AdicWindow div_p_mul_q(const AdicWindow& w, std::int64_t p, std::int64_t q) {
  if (w.precision() < 1) {
    throw PrecisionExhausted("div_p_mul_q: window has no digits");
  }
  if (w.value() % p != 0) {
    throw NotDivisible("div_p_mul_q: value not divisible by p");
  }
  return AdicWindow(w.base(), w.precision() - 1, (w.value() / p) * q);
}

std::int64_t MixedRadixExpansion::neg_digit_at(std::int64_t position) const {
  if (position < low_position || position > -1) {
    throw std::out_of_range("neg_digit_at: position outside band");
  }
  return neg_digits[static_cast<std::size_t>(position - low_position)];
}

bool MixedRadixExpansion::is_canonical() const {
  if (static_cast<std::int64_t>(neg_digits.size()) != -low_position) return false;
  for (std::int64_t d : neg_digits) {
    if (d < 0 || d >= q) return false;
  }
  for (std::int64_t d : pos_digits) {
    if (d < 0 || d >= p) return false;
  }
  return true;
}

Rational MixedRadixExpansion::band_value() const {
  Rational acc = 0;
  for (std::size_t i = 0; i < neg_digits.size(); ++i) {
    acc += Rational(neg_digits[i]) * qp_pow(p, q, low_position + static_cast<std::int64_t>(i));
  }
  for (std::size_t i = 0; i < pos_digits.size(); ++i) {
    acc += Rational(pos_digits[i]) * qp_pow(p, q, 1 + static_cast<std::int64_t>(i));
  }
  return acc;
}

MixedRadixExpansion carry_normalize(const MixedRadixExpansion& e) {
  MixedRadixExpansion out = e;
  BigInt into_window = 0;

  // Negative band: carries run upward (q units -> p units one position up).
  // BigInt working values: a long borrow cascade can exceed int64 range.
  BigInt carry = 0;
  for (std::size_t i = 0; i < out.neg_digits.size(); ++i) {
    BigInt s = out.neg_digits[i] + carry;
    BigInt d = mod_floor(s, out.q);
    carry = ((s - d) / out.q) * out.p;
    out.neg_digits[i] = static_cast<std::int64_t>(d);
  }
  into_window += carry;

  // Positive band: carries run downward (p units -> q units one position
  // down), so walk from the top digit toward position 1.
  carry = 0;
  for (std::size_t i = out.pos_digits.size(); i-- > 0;) {
    BigInt s = out.pos_digits[i] + carry;
    BigInt d = mod_floor(s, out.p);
    carry = ((s - d) / out.p) * out.q;
    out.pos_digits[i] = static_cast<std::int64_t>(d);
  }
  into_window += carry;

  if (into_window != 0) {
    out.integer_part = odometer_add(out.integer_part, into_window);
  }
  return out;
}

Requantized requantize(const Rational& x, std::int64_t p, std::int64_t q, int depth) {
  if (p < 1 || q <= p) throw std::invalid_argument("requantize: need 1 <= p < q");
  BigInt den = boost::multiprecision::denominator(x);

  int a = 0;
  BigInt rest = den;
  if (p > 1) a = valuation(den, p, &rest);
  BigInt q_part;
  int b = valuation(rest, q, &q_part);
  if (q_part != 1) {
    throw std::invalid_argument("requantize: x not in Z[1/p,1/q]");
  }
  if (a > depth || b > depth) {
    throw DepthInsufficient("requantize: band would exceed depth");
  }

  MixedRadixExpansion e;
  e.p = p;
  e.q = q;

  // Positive band, top down: the digit at position m is determined by
  // x * p^m * q^{-m} mod p; subtracting digit * (q/p)^m clears the p-power
  // in the denominator at that level.
  Rational r = x;
  e.pos_digits.assign(static_cast<std::size_t>(a), 0);
  for (int m = a; m >= 1; --m) {
    Rational scaled = r * bi_pow(p, m);  // p-integral by construction
    BigInt num = boost::multiprecision::numerator(scaled);
    BigInt dnm = boost::multiprecision::denominator(scaled);
    BigInt qinv = mod_inverse(mod_floor(bi_pow(q, m), p), p);
    BigInt residue =
        mod_floor(num * mod_inverse(mod_floor(dnm, p), p) * qinv, p);
    std::int64_t d = static_cast<std::int64_t>(residue);
    e.pos_digits[static_cast<std::size_t>(m - 1)] = d;
    r -= Rational(d) * qp_pow(p, q, m);
  }

  // Negative band, bottom up: the digit at position -n is determined by
  // x * q^n * p^{-n} mod q.
  e.low_position = -b;
  e.neg_digits.assign(static_cast<std::size_t>(b), 0);
  for (int n = b; n >= 1; --n) {
    Rational scaled = r * bi_pow(q, n);
    BigInt num = boost::multiprecision::numerator(scaled);
    BigInt dnm = boost::multiprecision::denominator(scaled);
    BigInt pinv = mod_inverse(mod_floor(bi_pow(p, n), q), q);
    BigInt residue =
        mod_floor(num * mod_inverse(mod_floor(dnm, q), q) * pinv, q);
    std::int64_t d = static_cast<std::int64_t>(residue);
    e.neg_digits[static_cast<std::size_t>(b - n)] = d;
    r -= Rational(d) * qp_pow(p, q, -n);
  }

  if (boost::multiprecision::denominator(r) != 1) {
    throw std::logic_error("requantize: nonintegral remainder");
  }
  BigInt remainder = boost::multiprecision::numerator(r);
  e.integer_part = AdicWindow(p * q, depth, remainder);
  return Requantized{std::move(e), remainder};
}

}  // namespace odolab::exactnum
