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

#ifndef ODOLAB_ACTIONS_HPP
#define ODOLAB_ACTIONS_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "odolab/bsgroup.hpp"
#include "odolab/exactnum.hpp"
#include "odolab/numeric.hpp"
#include "odolab/spaces.hpp"

// The group actions on the three lazily sampled factors:
//  * X: binary odometer, t adds one, a acts trivially;
//  * Y: the (q/p)-digit space, a_i adds (q/p)^i, t is the skew shift;
//  * Z: co-induced from the <a>-odometer over the coset space, via the
//    transfer equation s(beta) a^b = g^-1 s(alpha).
//
// Y points are lazy digit views. Two independent evaluation engines are
// provided on purpose: a step engine applying one generator at a time, and
// a normal-form engine that collapses a word to (shift, offset) and
// evaluates digits through memoized window chains. Every queried digit must
// agree between the two; the carry logic is the error-prone core and each
// engine is the other's oracle.

namespace odolab::actions {

// Tape digit families for the coordinate factors of one master seed.
inline constexpr std::uint64_t kFamilyYNeg = 1;
inline constexpr std::uint64_t kFamilyY0 = 2;
inline constexpr std::uint64_t kFamilyYPos = 3;
inline constexpr std::uint64_t kFamilyX = 4;
inline constexpr std::uint64_t kFamilyZ = 5;

class YView {
 public:
  YView(std::int64_t p, std::int64_t q);
  virtual ~YView() = default;

  std::int64_t p() const { return p_; }
  std::int64_t q() const { return q_; }

  virtual std::int64_t neg_digit(std::int64_t n) const = 0;  // n <= -1, in [0,q)
  virtual std::int64_t pos_digit(std::int64_t m) const = 0;  // m >= 1, in [0,p)
  virtual exactnum::AdicWindow y0_window(int precision) const = 0;

  // Single window digit. Semantically y0_window(position + 1).digit(position),
  // which is the default; views override it when a digit is reachable without
  // materializing the whole prefix (tape reads, pure shifts, sparse addends).
  virtual std::int64_t window_digit(std::int64_t position) const;

 private:
  std::int64_t p_;
  std::int64_t q_;
};

using YPtr = std::shared_ptr<const YView>;

// Point with digits drawn from a seeded tape (families kFamilyY*).
YPtr tape_y_point(std::int64_t p, std::int64_t q, const spaces::TapeSource& tape);

// Point with the given digits and exact window value, zero elsewhere.
// Finitely supported points admit an exact rational value, which makes them
// the reference model in tests.
YPtr fixed_y_point(std::int64_t p, std::int64_t q,
                   std::map<std::int64_t, std::int64_t> neg, BigInt y0,
                   std::map<std::int64_t, std::int64_t> pos);

// Step engine: one generator application per view layer.
YPtr step_t(const YPtr& y);
YPtr step_t_inv(const YPtr& y);
// Adds x in Z[1/p,1/q]: requantizes x once, then serves digits through
// carry walks over the finite bands (negative carries climb into the
// window, positive carries descend into it; the window absorbs both).
YPtr step_add(const Rational& x, const YPtr& y);

// Normal-form engine. shift_chain evaluates t^shift through the window
// chain: one window digit of starting precision is consumed per step and
// the consumed mod-p (forward) resp. mod-q (inverse) residues become the
// transported outer digits. act_affine applies the shift first, then the
// additive offset.
YPtr shift_chain(std::int64_t shift, const YPtr& y);
YPtr act_affine(const bsgroup::AffineElement& s, const YPtr& y);

// Word actions: letter-by-letter steps vs. collapse through the affine
// quotient. They agree on every digit; tests enforce this.
YPtr act_y_word(const bsgroup::Word& w, const YPtr& y);
YPtr act_y_normal(const bsgroup::Word& w, const YPtr& y);

// a_i^k = adding k (q/p)^i.
YPtr act_y_a(std::int64_t i, const BigInt& k, const YPtr& y);

// Digit at -1 of t^{-m-1} y: the m-th consumed mod-q residue of the
// inverse chain. The tail sets are A_k = {tau_m >= q - p for m = 0..k};
// their measure is at most (p/q)^{k+1}.
std::int64_t tau_digit(const YPtr& y, std::int64_t m);
bool in_tail_set(const YPtr& y, int k);

// Smallest K <= depth_cap such that the first `probe` window digits of
// t^{-k} s y and t^{-k} y coincide for every k in [K, depth_cap]; s must
// have shift component zero. found == false when even k = depth_cap
// disagrees (a tail event of measure at most (p/q)^{depth_cap+1}).
struct ThetaResult {
  bool found = false;
  int k = 0;
};
ThetaResult theta_stabilization(const bsgroup::AffineElement& s, const YPtr& y,
                                int depth_cap, int probe);

// Binary odometer point: bit i of (tape value + accumulated offset).
class XPoint {
 public:
  explicit XPoint(const spaces::TapeSource& tape) : tape_(tape) {}

  std::int64_t digit(std::int64_t i) const;  // bit i
  // Bits 0..level as an integer in [0, 2^{level+1}); level <= 62.
  std::int64_t cell(int level) const;
  XPoint shifted(const BigInt& k) const;
  const BigInt& offset() const { return offset_; }

 private:
  spaces::TapeSource tape_;
  BigInt offset_ = 0;
};

// Co-induced point over the right <a>-coset space. The base state on each
// coset is an independent base-(pq) odometer tape keyed by the canonical
// representative; group elements accumulate as an unreduced word and each
// digit query runs one transfer.
class ZPoint {
 public:
  ZPoint(const bsgroup::BsPresentation& pres, std::int64_t p, std::int64_t q,
         const spaces::TapeSource& tape);

  // Digit n >= 0 of the state at coset alpha (trailing exponent zero).
  std::int64_t digit(const bsgroup::BrittonWord& alpha, std::int64_t n) const;
  ZPoint acted(const bsgroup::Word& g) const;

  const bsgroup::Word& pending_word() const { return word_; }
  // Distinct coset tapes touched by digit queries so far.
  std::int64_t materialized_cosets() const;

 private:
  bsgroup::BsPresentation pres_;
  std::int64_t pq_;
  spaces::TapeSource tape_;
  bsgroup::Word word_;
  std::shared_ptr<std::map<std::string, char>> touched_;
};

// Diagonal points. Component tapes are substreams 0, 1, 2 of the master.
struct WPoint {
  XPoint x;
  YPtr y;
  ZPoint z;
};
WPoint sample_w(const bsgroup::BsPresentation& pres, std::int64_t p,
                std::int64_t q, const spaces::TapeSource& master);
WPoint act_w(const bsgroup::Word& g, const WPoint& w);

struct W1Point {
  YPtr y;
  ZPoint z;
};
W1Point sample_w1(const bsgroup::BsPresentation& pres, std::int64_t p,
                  std::int64_t q, const spaces::TapeSource& master);
W1Point act_w1(const bsgroup::Word& g, const W1Point& w);

}  // namespace odolab::actions

#endif  // ODOLAB_ACTIONS_HPP
