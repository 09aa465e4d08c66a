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

#ifndef ODOLAB_NUMERIC_HPP
#define ODOLAB_NUMERIC_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace odolab {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// base^exp for exp >= 0.
inline BigInt bi_pow(const BigInt& base, std::int64_t exp) {
  if (exp < 0) throw std::invalid_argument("bi_pow: negative exponent");
  BigInt r = 1, b = base;
  for (std::int64_t e = exp; e > 0; e >>= 1) {
    if (e & 1) r *= b;
    if (e > 1) b *= b;
  }
  return r;
}

// (q/p)^e as an exact rational, e of either sign.
inline Rational qp_pow(std::int64_t p, std::int64_t q, std::int64_t e) {
  if (e >= 0) return Rational(bi_pow(q, e), bi_pow(p, e));
  return Rational(bi_pow(p, -e), bi_pow(q, -e));
}

// Euclidean remainder in [0, m), m > 0.
inline BigInt mod_floor(const BigInt& a, const BigInt& m) {
  BigInt r = a % m;
  if (r < 0) r += m;
  return r;
}

inline std::int64_t mod_floor_i64(std::int64_t a, std::int64_t m) {
  std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

// Largest e with prime^e | n (n != 0); also returns the cofactor n / prime^e.
inline std::int64_t valuation(BigInt n, const BigInt& prime, BigInt* cofactor = nullptr) {
  if (n == 0) throw std::invalid_argument("valuation of zero");
  if (prime < 2) throw std::invalid_argument("valuation: base < 2");
  std::int64_t v = 0;
  while (n % prime == 0) {
    n /= prime;
    ++v;
  }
  if (cofactor) *cofactor = n;
  return v;
}

// Modular inverse, gcd(a, m) == 1 required.
inline BigInt mod_inverse(const BigInt& a, const BigInt& m) {
  BigInt r0 = m, r1 = mod_floor(a, m), s0 = 0, s1 = 1;
  while (r1 != 0) {
    BigInt k = r0 / r1;
    BigInt r2 = r0 - k * r1;
    BigInt s2 = s0 - k * s1;
    r0 = r1; r1 = r2;
    s0 = s1; s1 = s2;
  }
  if (r0 != 1) throw std::domain_error("mod_inverse: arguments not coprime");
  return mod_floor(s0, m);
}

inline std::string to_string(const BigInt& v) { return v.str(); }
inline std::string to_string(const Rational& v) {
  if (boost::multiprecision::denominator(v) == 1)
    return boost::multiprecision::numerator(v).str();
  return boost::multiprecision::numerator(v).str() + "/" +
         boost::multiprecision::denominator(v).str();
}

}  // namespace odolab

#endif  // ODOLAB_NUMERIC_HPP
