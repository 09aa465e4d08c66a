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

#ifndef ODOLAB_EXACTNUM_HPP
#define ODOLAB_EXACTNUM_HPP

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "odolab/numeric.hpp"

// Exact arithmetic on truncated digit expansions.
//
// Two digit systems are used throughout:
//  * base-l windows: the first D digits (LSB first) of an l-adic integer,
//    held as the canonical value mod l^D;
//  * mixed-radix expansions over weights (q/p)^n for coprime 1 <= p < q:
//    digits in [0,q) at negative positions, a base-(p*q) window at weight
//    (q/p)^0, digits in [0,p) at positive positions.
//
// The carry rule linking adjacent mixed-radix positions is
// q * (q/p)^n == p * (q/p)^{n+1}: q units at one position equal p units one
// position higher. Positive positions carry downward (p units at m equal
// q units at m-1); the base-(p*q) window absorbs both directions.

namespace odolab::exactnum {

struct NotDivisible : std::domain_error {
  using std::domain_error::domain_error;
};
struct PrecisionExhausted : std::domain_error {
  using std::domain_error::domain_error;
};
struct DepthInsufficient : std::domain_error {
  using std::domain_error::domain_error;
};

// First D digits of a base-l expansion, stored as the value mod l^D.
// Digit lists are a materialized view; the value is authoritative.
class AdicWindow {
 public:
  AdicWindow(std::int64_t base, int precision, const BigInt& value)
      : base_(base), precision_(precision),
        value_(mod_floor(value, bi_pow(base, precision))) {
    if (base < 2) throw std::invalid_argument("AdicWindow: base < 2");
    if (precision < 0) throw std::invalid_argument("AdicWindow: negative precision");
  }

  static AdicWindow from_digits(std::int64_t base,
                                const std::vector<std::int64_t>& digits);

  std::int64_t base() const { return base_; }
  int precision() const { return precision_; }
  const BigInt& value() const { return value_; }
  BigInt modulus() const { return bi_pow(base_, precision_); }

  std::int64_t digit(int i) const;            // i in [0, precision)
  std::vector<std::int64_t> digits() const;   // LSB first

  bool operator==(const AdicWindow& o) const {
    return base_ == o.base_ && precision_ == o.precision_ && value_ == o.value_;
  }

 private:
  std::int64_t base_;
  int precision_;
  BigInt value_;
};

// value + k mod l^D. Negative k borrows through the window (mod semantics).
AdicWindow odometer_add(const AdicWindow& w, const BigInt& k);

// Residue of a base-(p*q) window mod p resp. mod q. Needs precision >= 1.
std::int64_t eta(const AdicWindow& w, std::int64_t p);
std::int64_t zeta(const AdicWindow& w, std::int64_t q);

// (q/p) * value on a base-(p*q) window divisible by p. One digit of
// precision is consumed: the result is canonical mod (p*q)^{D-1}.
AdicWindow div_p_mul_q(const AdicWindow& w, std::int64_t p, std::int64_t q);

// Mixed-radix expansion over (q/p)-weights. neg_digits[i] sits at position
// low_position + i (positions low_position..-1); pos_digits[i] sits at
// position 1 + i. Digits are int64 so transiently out-of-range states are
// representable; carry_normalize restores canonical ranges.
struct MixedRadixExpansion {
  std::int64_t p = 1;
  std::int64_t q = 2;
  std::int64_t low_position = 0;  // <= 0; 0 means empty negative band
  std::vector<std::int64_t> neg_digits;
  AdicWindow integer_part{2, 0, 0};
  std::vector<std::int64_t> pos_digits;

  std::int64_t neg_digit_at(std::int64_t position) const;  // position in [low_position, -1]
  bool is_canonical() const;

  // Exact value of the two outer digit bands (the window is reported
  // separately since it only carries value-mod-(pq)^D information).
  Rational band_value() const;
};

// Propagates out-of-range digits: q units at a negative position become p
// units one position higher (into the window at position 0); p units at a
// positive position become q units one position lower. Value is preserved
// exactly, window overflow wraps mod (p*q)^D.
MixedRadixExpansion carry_normalize(const MixedRadixExpansion& e);

// Canonical expansion of x in Z[1/p,1/q]: band digits are exact, the
// integer remainder is reported as a base-(p*q) window of the given
// precision plus the exact remainder itself. Band lengths beyond `depth`
// raise DepthInsufficient.
struct Requantized {
  MixedRadixExpansion expansion;
  BigInt integer_remainder;  // exact; expansion.integer_part == remainder mod (pq)^depth
};
Requantized requantize(const Rational& x, std::int64_t p, std::int64_t q, int depth);

}  // namespace odolab::exactnum

#endif  // ODOLAB_EXACTNUM_HPP
