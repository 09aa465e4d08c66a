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

#ifndef ODOLAB_BSGROUP_HPP
#define ODOLAB_BSGROUP_HPP

#include <cstdint>
#include <vector>

#include "odolab/numeric.hpp"

// Exact word arithmetic in the two-generator one-relator groups
// BS(m, n) = < a, t | t a^m t^-1 = a^n >, m >= 1, n != 0.
//
// Normal form: a^{e_0} t^{s_1} a^{e_1} ... t^{s_k} a^{e_k} with no pinch
// t a^{m j} t^-1 or t^-1 a^{n j} t, and the exponent left of each t-letter
// reduced to the canonical range: e in [0, |n|) left of t^{+1} (since
// a^{n j} t = t a^{m j}), e in [0, m) left of t^{-1} (since
// a^{m j} t^-1 = t^-1 a^{n j}). The trailing exponent is unrestricted.
// Two words are equal in the group iff their normal forms coincide.

namespace odolab::bsgroup {

struct BsPresentation {
  BigInt m;  // t a^m t^-1 = a^n
  BigInt n;
};

inline BsPresentation bs(const BigInt& m, const BigInt& n) { return {m, n}; }

// Free word over {a, t}: letters with integer exponents, left to right.
struct Syllable {
  char gen;  // 'a' or 't'
  BigInt exp;
};
using Word = std::vector<Syllable>;

Word inverse_word(const Word& w);
Word concat(const Word& u, const Word& v);

// Sum of t-exponents. Constant on group elements (the defining relator is
// t-balanced), so this is the degree map onto the odometer factor.
BigInt t_exponent_sum(const Word& w);

class BrittonWord {
 public:
  // Reduces a free word to normal form. t-exponent magnitudes in the input
  // must fit the iteration cap (the reduction walks them letter by letter);
  // a-exponents are unbounded.
  static BrittonWord normalize(const BsPresentation& pres, const Word& w);

  static BrittonWord identity();

  // Signs s_1..s_k of the t-letters.
  const std::vector<int>& tsigns() const { return tsigns_; }
  // Exponents e_0..e_k; size is always tsigns().size() + 1.
  const std::vector<BigInt>& exponents() const { return exps_; }

  bool is_identity() const { return tsigns_.empty() && exps_[0] == 0; }
  // True when the word lies in <a>; then *exp_out is the exponent.
  bool is_a_power(BigInt* exp_out = nullptr) const;

  int t_length() const { return static_cast<int>(tsigns_.size()); }
  std::int64_t t_degree() const;  // sum of t-signs

  Word to_word() const;

  // Same word with the trailing a-exponent zeroed: the canonical
  // representative of the right <a>-coset.
  BrittonWord coset_rep() const;
  const BigInt& trailing_exponent() const { return exps_.back(); }

  bool operator==(const BrittonWord& o) const {
    return tsigns_ == o.tsigns_ && exps_ == o.exps_;
  }
  bool operator!=(const BrittonWord& o) const { return !(*this == o); }

 private:
  BrittonWord() : exps_{BigInt(0)} {}
  std::vector<int> tsigns_;
  std::vector<BigInt> exps_;
};

BrittonWord multiply(const BsPresentation& pres, const BrittonWord& u,
                     const BrittonWord& v);
BrittonWord inverse(const BsPresentation& pres, const BrittonWord& u);

// Affine quotient for parameters (p, q): a maps to translation by 1, t to
// multiplication by q/p. Elements (x, n) act on points by
// pt -> x + (q/p)^n pt and compose as (x, n)(y, m) = (x + (q/p)^n y, n + m).
struct AffineElement {
  std::int64_t p = 1;
  std::int64_t q = 2;
  Rational x = 0;
  std::int64_t n = 0;

  AffineElement compose(const AffineElement& o) const;
  AffineElement inverse() const;
  Rational act(const Rational& pt) const;

  bool operator==(const AffineElement& o) const {
    return p == o.p && q == o.q && x == o.x && n == o.n;
  }
};

// Image of a free word under a -> (1, 0), t -> (0, 1). This is a
// homomorphism on BS(r*p, r*q) for every r >= 1.
AffineElement epsilon(std::int64_t p, std::int64_t q, const Word& w);

// Right-coset transfer: for a coset representative alpha (trailing
// exponent zero), writes g^-1 * alpha = beta * a^b with beta again a
// representative. Composes as transfer(g g', alpha) =
// (transfer(g', beta).beta, b + b').
struct CosetTransfer {
  BrittonWord beta;
  BigInt b;
};
CosetTransfer transfer(const BsPresentation& pres, const Word& g,
                       const BrittonWord& alpha);

// Smallest K + L (ties broken by larger K; K fixed to 0 when p == 1) such
// that g a^{r p^K q^L} g^-1 is again a power of a; the conjugate is then
// a^{r p^Kp q^Lp} and the same holds for every multiple of the exponent.
struct ConjExponents {
  int K = 0;
  int L = 0;
  int Kp = 0;
  int Lp = 0;
};
ConjExponents conj_exponents(std::int64_t r, std::int64_t p, std::int64_t q,
                             const Word& g, int max_span = 64);

// Generators of the even subgroup (words of even t-degree) of BS(r*p, r*q):
// x1 = a, x2 = t a t^-1, x3 = t^2.
enum class EvenGen { X1, X2, X3 };
struct EvenSyllable {
  EvenGen gen;
  BigInt exp;
};
using EvenWord = std::vector<EvenSyllable>;

// Inclusion into BS(r*p, r*q).
Word even_to_gamma(const EvenWord& w);
// The comparison map into BS(r*p, -r*q): x1 -> a, x2 -> t a^-1 t^-1,
// x3 -> t^2. Defining relators of the even subgroup map to relations.
Word even_to_lambda(const EvenWord& w);

// Defining relators of the even subgroup: x2^{rp} x1^{-rq} and
// x3 x1^{rp} x3^-1 x2^{-rq}.
std::vector<EvenWord> even_defining_relators(std::int64_t rp, std::int64_t rq);

// w with `insertions` trivial pairs or conjugated defining-relator copies
// spliced in at random positions; equal to w in the group, so both must
// reduce to the same normal form.
Word pad_with_relators(const BsPresentation& pres, const Word& w, int insertions,
                       std::uint64_t seed);

// Well-definedness probe for the generator map x1 -> a, x2 -> t a^-1 t^-1,
// x3 -> t^2 into BS(rp, -rq): random consequences of the even-subgroup
// relators must reduce to the identity under the inclusion and under the
// comparison map.
struct IsoCheckReport {
  int relators_checked = 0;
  bool all_identity = false;
};
IsoCheckReport index2_iso_check(std::int64_t rp, std::int64_t rq, int count,
                                std::uint64_t seed);

}  // namespace odolab::bsgroup

#endif  // ODOLAB_BSGROUP_HPP
