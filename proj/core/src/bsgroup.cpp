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

#include "odolab/bsgroup.hpp"

#include <cstddef>
#include <random>
#include <stdexcept>

namespace odolab::bsgroup {

namespace {

// Britton reduction walks t-powers one letter at a time.
constexpr std::int64_t kMaxTLetters = 1 << 20;

void check_presentation(const BsPresentation& pres) {
  if (pres.m < 1 || pres.n == 0) {
    throw std::invalid_argument("BsPresentation: need m >= 1, n != 0");
  }
}

}  // namespace

Word inverse_word(const Word& w) {
  Word out;
  out.reserve(w.size());
  for (auto it = w.rbegin(); it != w.rend(); ++it) {
    out.push_back({it->gen, -it->exp});
  }
  return out;
}

Word concat(const Word& u, const Word& v) {
  Word out = u;
  out.insert(out.end(), v.begin(), v.end());
  return out;
}

BigInt t_exponent_sum(const Word& w) {
  BigInt sum = 0;
  for (const Syllable& s : w)
    if (s.gen == 't') sum += s.exp;
  return sum;
}

BrittonWord BrittonWord::identity() { return BrittonWord(); }

BrittonWord BrittonWord::normalize(const BsPresentation& pres, const Word& w) {
  check_presentation(pres);
  BrittonWord out;
  BigInt abs_n = pres.n < 0 ? BigInt(-pres.n) : pres.n;

  for (const Syllable& syl : w) {
    if (syl.gen == 'a') {
      out.exps_.back() += syl.exp;
      continue;
    }
    if (syl.gen != 't') {
      throw std::invalid_argument("BrittonWord::normalize: unknown generator");
    }
    if (syl.exp > kMaxTLetters || syl.exp < -kMaxTLetters) {
      throw std::invalid_argument("BrittonWord::normalize: t-power too large");
    }
    int s = syl.exp >= 0 ? 1 : -1;
    std::int64_t reps = static_cast<std::int64_t>(syl.exp >= 0 ? syl.exp : -syl.exp);
    for (std::int64_t i = 0; i < reps; ++i) {
      // Exponent left of t^{+1} splits against n (a^{n j} t = t a^{m j});
      // left of t^{-1} against m (a^{m j} t^-1 = t^-1 a^{n j}).
      const BigInt& divisor = (s == 1) ? pres.n : pres.m;
      const BigInt& divisor_abs = (s == 1) ? abs_n : pres.m;
      const BigInt& carry_unit = (s == 1) ? pres.m : pres.n;
      BigInt c = mod_floor(out.exps_.back(), divisor_abs);
      BigInt carried = carry_unit * ((out.exps_.back() - c) / divisor);
      if (c == 0 && !out.tsigns_.empty() && out.tsigns_.back() == -s) {
        out.exps_.pop_back();
        out.tsigns_.pop_back();
        out.exps_.back() += carried;
      } else {
        out.exps_.back() = c;
        out.tsigns_.push_back(s);
        out.exps_.push_back(carried);
      }
    }
  }
  return out;
}

bool BrittonWord::is_a_power(BigInt* exp_out) const {
  if (!tsigns_.empty()) return false;
  if (exp_out != nullptr) *exp_out = exps_[0];
  return true;
}

std::int64_t BrittonWord::t_degree() const {
  std::int64_t d = 0;
  for (int s : tsigns_) d += s;
  return d;
}

Word BrittonWord::to_word() const {
  Word out;
  if (exps_[0] != 0) out.push_back({'a', exps_[0]});
  for (std::size_t i = 0; i < tsigns_.size(); ++i) {
    out.push_back({'t', BigInt(tsigns_[i])});
    if (exps_[i + 1] != 0) out.push_back({'a', exps_[i + 1]});
  }
  return out;
}

BrittonWord BrittonWord::coset_rep() const {
  BrittonWord out = *this;
  out.exps_.back() = 0;
  return out;
}

BrittonWord multiply(const BsPresentation& pres, const BrittonWord& u,
                     const BrittonWord& v) {
  return BrittonWord::normalize(pres, concat(u.to_word(), v.to_word()));
}

BrittonWord inverse(const BsPresentation& pres, const BrittonWord& u) {
  return BrittonWord::normalize(pres, inverse_word(u.to_word()));
}

AffineElement AffineElement::compose(const AffineElement& o) const {
  if (p != o.p || q != o.q) {
    throw std::invalid_argument("AffineElement::compose: parameter mismatch");
  }
  return {p, q, x + qp_pow(p, q, n) * o.x, n + o.n};
}

AffineElement AffineElement::inverse() const {
  return {p, q, -qp_pow(p, q, -n) * x, -n};
}

Rational AffineElement::act(const Rational& pt) const {
  return x + qp_pow(p, q, n) * pt;
}

AffineElement epsilon(std::int64_t p, std::int64_t q, const Word& w) {
  AffineElement acc{p, q, 0, 0};
  for (const Syllable& syl : w) {
    if (syl.gen == 'a') {
      acc.x += qp_pow(p, q, acc.n) * Rational(syl.exp);
    } else if (syl.gen == 't') {
      acc.n += static_cast<std::int64_t>(syl.exp);
    } else {
      throw std::invalid_argument("epsilon: unknown generator");
    }
  }
  return acc;
}

CosetTransfer transfer(const BsPresentation& pres, const Word& g,
                       const BrittonWord& alpha) {
  if (alpha.trailing_exponent() != 0) {
    throw std::invalid_argument("transfer: alpha must be a coset representative");
  }
  BrittonWord w =
      BrittonWord::normalize(pres, concat(inverse_word(g), alpha.to_word()));
  BigInt b = w.trailing_exponent();
  return CosetTransfer{w.coset_rep(), b};
}

ConjExponents conj_exponents(std::int64_t r, std::int64_t p, std::int64_t q,
                             const Word& g, int max_span) {
  if (r < 1 || p < 1 || q <= p) {
    throw std::invalid_argument("conj_exponents: need r >= 1, 1 <= p < q");
  }
  BsPresentation pres = bs(BigInt(r) * p, BigInt(r) * q);
  Word ginv = inverse_word(g);

  for (int s = 0; s <= max_span; ++s) {
    // Larger K first: deeper p-powers absorb first at equal span.
    int k_hi = (p == 1) ? 0 : s;
    for (int K = k_hi; K >= 0; --K) {
      int L = (p == 1) ? s : s - K;
      if (L < 0) continue;
      BigInt x_exp = BigInt(r) * bi_pow(p, K) * bi_pow(q, L);
      Word conj = concat(concat(g, {{'a', x_exp}}), ginv);
      BigInt e;
      if (!BrittonWord::normalize(pres, conj).is_a_power(&e)) continue;
      if (e <= 0 || e % r != 0) continue;
      BigInt f = e / r;
      int Kp = 0;
      if (p > 1) Kp = valuation(f, p, &f);
      int Lp = valuation(f, q, &f);
      if (f != 1) continue;
      return ConjExponents{K, L, Kp, Lp};
    }
  }
  throw std::domain_error("conj_exponents: no span found within bound");
}

Word even_to_gamma(const EvenWord& w) {
  Word out;
  for (const EvenSyllable& syl : w) {
    switch (syl.gen) {
      case EvenGen::X1:
        out.push_back({'a', syl.exp});
        break;
      case EvenGen::X2:
        out.push_back({'t', 1});
        out.push_back({'a', syl.exp});
        out.push_back({'t', -1});
        break;
      case EvenGen::X3:
        out.push_back({'t', 2 * syl.exp});
        break;
    }
  }
  return out;
}

Word even_to_lambda(const EvenWord& w) {
  Word out;
  for (const EvenSyllable& syl : w) {
    switch (syl.gen) {
      case EvenGen::X1:
        out.push_back({'a', syl.exp});
        break;
      case EvenGen::X2:
        out.push_back({'t', 1});
        out.push_back({'a', -syl.exp});
        out.push_back({'t', -1});
        break;
      case EvenGen::X3:
        out.push_back({'t', 2 * syl.exp});
        break;
    }
  }
  return out;
}

std::vector<EvenWord> even_defining_relators(std::int64_t rp, std::int64_t rq) {
  EvenWord r1 = {{EvenGen::X2, rp}, {EvenGen::X1, -rq}};
  EvenWord r2 = {{EvenGen::X3, 1},
                 {EvenGen::X1, rp},
                 {EvenGen::X3, -1},
                 {EvenGen::X2, -rq}};
  return {r1, r2};
}

Word pad_with_relators(const BsPresentation& pres, const Word& w, int insertions,
                       std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Word out = w;
  for (int i = 0; i < insertions; ++i) {
    Word blob;
    switch (rng() % 3) {
      case 0: {  // x x^-1 for a random single letter
        const char gen = rng() % 2 == 0 ? 'a' : 't';
        const BigInt e(static_cast<std::int64_t>(rng() % 5) + 1);
        blob = {{gen, e}, {gen, -e}};
        break;
      }
      case 1: {  // defining relator or its inverse
        blob = {{'t', 1}, {'a', pres.m}, {'t', -1}, {'a', -pres.n}};
        if (rng() % 2 == 0) blob = inverse_word(blob);
        break;
      }
      default: {  // short conjugate of the relator
        Word conj;
        const int len = static_cast<int>(rng() % 3);
        for (int k = 0; k < len; ++k) {
          const char gen = rng() % 2 == 0 ? 'a' : 't';
          std::int64_t e = static_cast<std::int64_t>(rng() % 5) - 2;
          if (e == 0) e = 1;
          conj.push_back({gen, BigInt(e)});
        }
        Word rel = {{'t', 1}, {'a', pres.m}, {'t', -1}, {'a', -pres.n}};
        blob = concat(concat(conj, rel), inverse_word(conj));
        break;
      }
    }
    const std::size_t at = rng() % (out.size() + 1);
    out.insert(out.begin() + static_cast<std::ptrdiff_t>(at), blob.begin(), blob.end());
  }
  return out;
}

IsoCheckReport index2_iso_check(std::int64_t rp, std::int64_t rq, int count,
                                std::uint64_t seed) {
  const BsPresentation gamma = bs(rp, rq);
  const BsPresentation lambda = bs(rp, -rq);
  const std::vector<EvenWord> relators = even_defining_relators(rp, rq);
  std::mt19937_64 rng(seed);
  IsoCheckReport rep;
  rep.all_identity = true;
  for (int i = 0; i < count; ++i) {
    // Random consequence: a product of conjugated relator copies.
    EvenWord consequence;
    const int factors = 1 + static_cast<int>(rng() % 3);
    for (int k = 0; k < factors; ++k) {
      EvenWord conj;
      const int len = static_cast<int>(rng() % 4);
      for (int s = 0; s < len; ++s) {
        std::int64_t e = static_cast<std::int64_t>(rng() % 5) - 2;
        if (e == 0) e = 2;
        conj.push_back({static_cast<EvenGen>(rng() % 3), BigInt(e)});
      }
      EvenWord rel = relators[rng() % relators.size()];
      if (rng() % 2 == 0) {
        EvenWord inv;
        for (auto it = rel.rbegin(); it != rel.rend(); ++it) {
          inv.push_back({it->gen, -it->exp});
        }
        rel = inv;
      }
      EvenWord piece = conj;
      piece.insert(piece.end(), rel.begin(), rel.end());
      for (auto it = conj.rbegin(); it != conj.rend(); ++it) {
        piece.push_back({it->gen, -it->exp});
      }
      consequence.insert(consequence.end(), piece.begin(), piece.end());
    }
    ++rep.relators_checked;
    if (!BrittonWord::normalize(gamma, even_to_gamma(consequence)).is_identity() ||
        !BrittonWord::normalize(lambda, even_to_lambda(consequence)).is_identity()) {
      rep.all_identity = false;
    }
  }
  return rep;
}

}  // namespace odolab::bsgroup
