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

#include "odolab/actions.hpp"

#include <numeric>
#include <stdexcept>
#include <utility>

namespace odolab::actions {

namespace {

using exactnum::AdicWindow;
using exactnum::div_p_mul_q;
using exactnum::eta;
using exactnum::odometer_add;
using exactnum::zeta;

// The step engine walks t-powers letter by letter; this matches the
// reduction cap used for group words.
constexpr std::int64_t kMaxStepExponent = std::int64_t{1} << 20;

}  // namespace

YView::YView(std::int64_t p, std::int64_t q) : p_(p), q_(q) {
  if (p < 1 || q <= p) throw std::invalid_argument("YView: need 1 <= p < q");
  if (std::gcd(p, q) != 1) throw std::invalid_argument("YView: p, q must be coprime");
}

std::int64_t YView::window_digit(std::int64_t position) const {
  if (position < 0) throw std::invalid_argument("window_digit: negative position");
  return y0_window(static_cast<int>(position) + 1).digit(static_cast<int>(position));
}

namespace {

class TapeY final : public YView {
 public:
  TapeY(std::int64_t p, std::int64_t q, spaces::TapeSource tape)
      : YView(p, q), tape_(std::move(tape)) {}

  std::int64_t neg_digit(std::int64_t n) const override {
    if (n > -1) throw std::invalid_argument("neg_digit: position must be <= -1");
    return tape_.digit(kFamilyYNeg, -n, q());
  }
  std::int64_t pos_digit(std::int64_t m) const override {
    if (m < 1) throw std::invalid_argument("pos_digit: position must be >= 1");
    return p() == 1 ? 0 : tape_.digit(kFamilyYPos, m, p());
  }
  AdicWindow y0_window(int precision) const override {
    const std::int64_t base = p() * q();
    while (cached_precision_ < precision) {
      value_ += BigInt(tape_.digit(kFamilyY0, cached_precision_, base)) * power_;
      power_ *= base;
      ++cached_precision_;
    }
    return AdicWindow(base, precision, value_);
  }
  std::int64_t window_digit(std::int64_t position) const override {
    if (position < 0) throw std::invalid_argument("window_digit: negative position");
    return tape_.digit(kFamilyY0, position, p() * q());
  }

 private:
  spaces::TapeSource tape_;
  mutable int cached_precision_ = 0;
  mutable BigInt value_ = 0;
  mutable BigInt power_ = 1;
};

class FixedY final : public YView {
 public:
  FixedY(std::int64_t p, std::int64_t q, std::map<std::int64_t, std::int64_t> neg,
         BigInt y0, std::map<std::int64_t, std::int64_t> pos)
      : YView(p, q), neg_(std::move(neg)), y0_(std::move(y0)), pos_(std::move(pos)) {
    if (y0_ < 0) throw std::invalid_argument("FixedY: window value must be >= 0");
    for (const auto& [n, d] : neg_)
      if (n > -1 || d < 0 || d >= q)
        throw std::invalid_argument("FixedY: bad negative digit");
    for (const auto& [m, d] : pos_)
      if (m < 1 || d < 0 || d >= p)
        throw std::invalid_argument("FixedY: bad positive digit");
  }

  std::int64_t neg_digit(std::int64_t n) const override {
    auto it = neg_.find(n);
    return it == neg_.end() ? 0 : it->second;
  }
  std::int64_t pos_digit(std::int64_t m) const override {
    auto it = pos_.find(m);
    return it == pos_.end() ? 0 : it->second;
  }
  AdicWindow y0_window(int precision) const override {
    return AdicWindow(p() * q(), precision, y0_);
  }
  std::int64_t window_digit(std::int64_t position) const override {
    if (position < 0) throw std::invalid_argument("window_digit: negative position");
    return ((y0_ / bi_pow(p() * q(), position)) % (p() * q())).convert_to<std::int64_t>();
  }

 private:
  std::map<std::int64_t, std::int64_t> neg_;
  BigInt y0_;
  std::map<std::int64_t, std::int64_t> pos_;
};

class StepT final : public YView {
 public:
  explicit StepT(YPtr parent) : YView(parent->p(), parent->q()), parent_(std::move(parent)) {}

  std::int64_t neg_digit(std::int64_t n) const override {
    return parent_->neg_digit(n - 1);
  }
  std::int64_t pos_digit(std::int64_t m) const override {
    if (m == 1) return eta(parent_->y0_window(1), p());
    return parent_->pos_digit(m - 1);
  }
  AdicWindow y0_window(int precision) const override {
    AdicWindow w = parent_->y0_window(precision + 1);
    std::int64_t e = eta(w, p());
    AdicWindow scaled = div_p_mul_q(odometer_add(w, BigInt(-e)), p(), q());
    return odometer_add(scaled, BigInt(parent_->neg_digit(-1)));
  }
  std::int64_t window_digit(std::int64_t position) const override {
    // With p = 1 the map is the pure shift towards higher positions.
    if (p() != 1) return YView::window_digit(position);
    if (position < 0) throw std::invalid_argument("window_digit: negative position");
    return position == 0 ? parent_->neg_digit(-1) : parent_->window_digit(position - 1);
  }

 private:
  YPtr parent_;
};

class StepTInv final : public YView {
 public:
  explicit StepTInv(YPtr parent)
      : YView(parent->p(), parent->q()), parent_(std::move(parent)) {}

  std::int64_t neg_digit(std::int64_t n) const override {
    if (n == -1) return zeta(parent_->y0_window(1), q());
    return parent_->neg_digit(n + 1);
  }
  std::int64_t pos_digit(std::int64_t m) const override {
    return parent_->pos_digit(m + 1);
  }
  AdicWindow y0_window(int precision) const override {
    AdicWindow w = parent_->y0_window(precision + 1);
    std::int64_t z = zeta(w, q());
    AdicWindow scaled = div_p_mul_q(odometer_add(w, BigInt(-z)), q(), p());
    return odometer_add(scaled, BigInt(parent_->pos_digit(1)));
  }
  std::int64_t window_digit(std::int64_t position) const override {
    if (p() != 1) return YView::window_digit(position);
    if (position < 0) throw std::invalid_argument("window_digit: negative position");
    return parent_->window_digit(position + 1);
  }

 private:
  YPtr parent_;
};

class StepAdd final : public YView {
 public:
  StepAdd(const Rational& x, YPtr parent)
      : YView(parent->p(), parent->q()), parent_(std::move(parent)) {
    BigInt den = boost::multiprecision::denominator(x);
    int depth_p = p() == 1 ? 0 : static_cast<int>(valuation(den, p()));
    int depth_q = static_cast<int>(valuation(den, q()));
    auto rq = exactnum::requantize(x, p(), q(), std::max(depth_p, depth_q));
    const auto& e = rq.expansion;

    // Negative band: carries climb; q overflowing units at a position are
    // p units one higher, the last carry lands in the window with weight p.
    BigInt arriving = 0;
    for (std::int64_t pos = e.low_position; pos <= -1; ++pos) {
      BigInt s = BigInt(parent_->neg_digit(pos)) + e.neg_digit_at(pos) + arriving;
      BigInt d = mod_floor(s, q());
      neg_out_[pos] = d.convert_to<std::int64_t>();
      arriving = ((s - d) / q()) * p();
    }
    BigInt window_add = e.low_position == 0 ? BigInt(0) : arriving;

    // Positive band: carries descend; p overflowing units are q units one
    // lower, the last carry lands in the window with weight q.
    pos_top_ = static_cast<std::int64_t>(e.pos_digits.size());
    arriving = 0;
    for (std::int64_t pos = pos_top_; pos >= 1; --pos) {
      BigInt s = BigInt(parent_->pos_digit(pos)) + e.pos_digits[pos - 1] + arriving;
      BigInt d = mod_floor(s, p());
      pos_out_[pos] = d.convert_to<std::int64_t>();
      arriving = ((s - d) / p()) * q();
    }
    if (pos_top_ > 0) window_add += arriving;

    window_add_ = window_add + rq.integer_remainder;
  }

  std::int64_t neg_digit(std::int64_t n) const override {
    auto it = neg_out_.find(n);
    return it == neg_out_.end() ? parent_->neg_digit(n) : it->second;
  }
  std::int64_t pos_digit(std::int64_t m) const override {
    auto it = pos_out_.find(m);
    return it == pos_out_.end() ? parent_->pos_digit(m) : it->second;
  }
  AdicWindow y0_window(int precision) const override {
    return odometer_add(parent_->y0_window(precision), window_add_);
  }
  std::int64_t window_digit(std::int64_t k) const override {
    if (k < 0) throw std::invalid_argument("window_digit: negative position");
    const std::int64_t base = p() * q();
    if (window_add_ == 0) return parent_->window_digit(k);
    // Walk the addend's digits with the carry; once the addend is spent and
    // the carry dies, higher positions are the parent's.
    bool negative = window_add_ < 0;
    BigInt mag = negative ? BigInt(-window_add_) : window_add_;
    std::int64_t low = 0;
    while (mag % base == 0) {
      mag /= base;
      ++low;
    }
    if (k < low) return parent_->window_digit(k);
    std::int64_t carry = 0;
    for (std::int64_t j = low; j <= k; ++j) {
      std::int64_t aj = mag == 0 ? 0 : (mag % base).convert_to<std::int64_t>();
      if (mag != 0) mag /= base;
      if (aj == 0 && carry == 0 && mag == 0) return parent_->window_digit(k);
      std::int64_t pj = parent_->window_digit(j);
      std::int64_t s = negative ? pj - aj - carry : pj + aj + carry;
      carry = negative ? (s < 0 ? 1 : 0) : (s >= base ? 1 : 0);
      if (j == k) return odolab::mod_floor_i64(s, base);
    }
    return 0;  // not reached: the loop exits at j == k
  }

 private:
  YPtr parent_;
  std::map<std::int64_t, std::int64_t> neg_out_;
  std::map<std::int64_t, std::int64_t> pos_out_;
  std::int64_t pos_top_ = 0;
  BigInt window_add_;
};

// t^shift through the window chain. One digit of starting precision is
// consumed per step, so a window of precision T after |shift| steps needs
// the parent window at T + |shift|; recomputation on precision growth is
// geometric to amortize repeated queries.
class ChainShift final : public YView {
 public:
  ChainShift(std::int64_t shift, YPtr parent)
      : YView(parent->p(), parent->q()), parent_(std::move(parent)), shift_(shift),
        len_(shift > 0 ? shift : -shift) {
    if (shift == 0) throw std::invalid_argument("ChainShift: zero shift");
    if (len_ > kMaxStepExponent) throw std::invalid_argument("ChainShift: shift too large");
  }

  std::int64_t neg_digit(std::int64_t n) const override {
    if (shift_ > 0) return parent_->neg_digit(n - len_);
    if (n >= -len_) {
      ensure(static_cast<int>(len_) + 1);
      return consumed_[static_cast<std::size_t>(len_ + n)];
    }
    return parent_->neg_digit(n + len_);
  }
  std::int64_t pos_digit(std::int64_t m) const override {
    if (shift_ < 0) return parent_->pos_digit(m + len_);
    if (m <= len_) {
      ensure(static_cast<int>(len_) + 1);
      return consumed_[static_cast<std::size_t>(len_ - m)];
    }
    return parent_->pos_digit(m - len_);
  }
  AdicWindow y0_window(int precision) const override {
    ensure(precision + static_cast<int>(len_));
    return AdicWindow(p() * q(), precision, final_value_);
  }
  std::int64_t window_digit(std::int64_t position) const override {
    if (p() != 1) return YView::window_digit(position);
    if (position < 0) throw std::invalid_argument("window_digit: negative position");
    if (shift_ > 0) {
      return position < len_ ? parent_->neg_digit(position - len_)
                             : parent_->window_digit(position - len_);
    }
    return parent_->window_digit(position + len_);
  }

 private:
  void ensure(int start_precision) const {
    if (start_precision_ >= start_precision) return;
    int target = std::max(start_precision, start_precision_ * 2);
    AdicWindow w = parent_->y0_window(target);
    consumed_.assign(static_cast<std::size_t>(len_), 0);
    for (std::int64_t k = 0; k < len_; ++k) {
      if (shift_ > 0) {
        std::int64_t e = eta(w, p());
        consumed_[static_cast<std::size_t>(k)] = e;
        w = odometer_add(div_p_mul_q(odometer_add(w, BigInt(-e)), p(), q()),
                         BigInt(parent_->neg_digit(-(k + 1))));
      } else {
        std::int64_t z = zeta(w, q());
        consumed_[static_cast<std::size_t>(k)] = z;
        w = odometer_add(div_p_mul_q(odometer_add(w, BigInt(-z)), q(), p()),
                         BigInt(parent_->pos_digit(k + 1)));
      }
    }
    final_value_ = w.value();
    start_precision_ = target;
  }

  YPtr parent_;
  std::int64_t shift_;
  std::int64_t len_;
  mutable int start_precision_ = -1;
  mutable std::vector<std::int64_t> consumed_;
  mutable BigInt final_value_ = 0;
};

}  // namespace

YPtr tape_y_point(std::int64_t p, std::int64_t q, const spaces::TapeSource& tape) {
  return std::make_shared<TapeY>(p, q, tape);
}

YPtr fixed_y_point(std::int64_t p, std::int64_t q,
                   std::map<std::int64_t, std::int64_t> neg, BigInt y0,
                   std::map<std::int64_t, std::int64_t> pos) {
  return std::make_shared<FixedY>(p, q, std::move(neg), std::move(y0), std::move(pos));
}

YPtr step_t(const YPtr& y) { return std::make_shared<StepT>(y); }
YPtr step_t_inv(const YPtr& y) { return std::make_shared<StepTInv>(y); }

YPtr step_add(const Rational& x, const YPtr& y) {
  if (x == 0) return y;
  return std::make_shared<StepAdd>(x, y);
}

YPtr shift_chain(std::int64_t shift, const YPtr& y) {
  if (shift == 0) return y;
  return std::make_shared<ChainShift>(shift, y);
}

YPtr act_affine(const bsgroup::AffineElement& s, const YPtr& y) {
  if (s.p != y->p() || s.q != y->q())
    throw std::invalid_argument("act_affine: parameter mismatch");
  return step_add(s.x, shift_chain(s.n, y));
}

YPtr act_y_word(const bsgroup::Word& w, const YPtr& y) {
  YPtr cur = y;
  for (auto it = w.rbegin(); it != w.rend(); ++it) {
    if (it->gen == 'a') {
      cur = step_add(Rational(it->exp), cur);
    } else if (it->gen == 't') {
      BigInt e = it->exp;
      if (e > kMaxStepExponent || e < -kMaxStepExponent)
        throw std::invalid_argument("act_y_word: t-power too large for the step engine");
      for (BigInt k = e; k > 0; --k) cur = step_t(cur);
      for (BigInt k = e; k < 0; ++k) cur = step_t_inv(cur);
    } else {
      throw std::invalid_argument("act_y_word: unknown generator");
    }
  }
  return cur;
}

YPtr act_y_normal(const bsgroup::Word& w, const YPtr& y) {
  return act_affine(bsgroup::epsilon(y->p(), y->q(), w), y);
}

YPtr act_y_a(std::int64_t i, const BigInt& k, const YPtr& y) {
  return step_add(Rational(k) * qp_pow(y->p(), y->q(), i), y);
}

std::int64_t tau_digit(const YPtr& y, std::int64_t m) {
  if (m < 0) throw std::invalid_argument("tau_digit: negative index");
  return shift_chain(-(m + 1), y)->neg_digit(-1);
}

bool in_tail_set(const YPtr& y, int k) {
  if (k < 0) throw std::invalid_argument("in_tail_set: negative depth");
  YPtr chain = shift_chain(-(k + 1), y);
  for (int m = 0; m <= k; ++m) {
    if (chain->neg_digit(m - k - 1) < y->q() - y->p()) return false;
  }
  return true;
}

ThetaResult theta_stabilization(const bsgroup::AffineElement& s, const YPtr& y,
                                int depth_cap, int probe) {
  if (s.n != 0) throw std::invalid_argument("theta_stabilization: shift must be 0");
  if (depth_cap < 0 || probe < 1)
    throw std::invalid_argument("theta_stabilization: bad parameters");
  YPtr sy = step_add(s.x, y);
  int last_disagree = -1;
  for (int k = 0; k <= depth_cap; ++k) {
    AdicWindow a = shift_chain(-k, sy)->y0_window(probe);
    AdicWindow b = shift_chain(-k, y)->y0_window(probe);
    if (!(a == b)) last_disagree = k;
  }
  ThetaResult out;
  out.found = last_disagree < depth_cap;
  out.k = last_disagree + 1;
  return out;
}

namespace {

// Tape bits 0..bits-1 plus the accumulated offset, reduced mod 2^bits.
BigInt x_value_mod(const spaces::TapeSource& tape, const BigInt& offset, int bits) {
  BigInt v = 0;
  for (int j = bits - 1; j >= 0; --j) {
    v = v * 2 + tape.digit(kFamilyX, j, 2);
  }
  return mod_floor(v + offset, bi_pow(2, bits));
}

}  // namespace

std::int64_t XPoint::digit(std::int64_t i) const {
  if (i < 0) throw std::invalid_argument("XPoint::digit: negative index");
  BigInt v = x_value_mod(tape_, offset_, static_cast<int>(i) + 1);
  return ((v / bi_pow(2, i)) % 2).convert_to<std::int64_t>();
}

std::int64_t XPoint::cell(int level) const {
  if (level < 0 || level > 62) throw std::invalid_argument("XPoint::cell: bad level");
  return x_value_mod(tape_, offset_, level + 1).convert_to<std::int64_t>();
}

XPoint XPoint::shifted(const BigInt& k) const {
  XPoint out = *this;
  out.offset_ += k;
  return out;
}

namespace {

std::string serialize_coset(const bsgroup::BrittonWord& alpha) {
  std::string key = to_string(alpha.exponents()[0]);
  for (std::size_t i = 0; i < alpha.tsigns().size(); ++i) {
    key += alpha.tsigns()[i] > 0 ? "|t|" : "|T|";
    key += to_string(alpha.exponents()[i + 1]);
  }
  return key;
}

}  // namespace

ZPoint::ZPoint(const bsgroup::BsPresentation& pres, std::int64_t p, std::int64_t q,
               const spaces::TapeSource& tape)
    : pres_(pres), pq_(p * q), tape_(tape),
      touched_(std::make_shared<std::map<std::string, char>>()) {}

std::int64_t ZPoint::digit(const bsgroup::BrittonWord& alpha, std::int64_t n) const {
  if (n < 0) throw std::invalid_argument("ZPoint::digit: negative index");
  auto tr = bsgroup::transfer(pres_, word_, alpha);
  std::string key = serialize_coset(tr.beta);
  touched_->emplace(key, 1);
  BigInt v = 0;
  for (std::int64_t j = n; j >= 0; --j) {
    v = v * pq_ + tape_.digit_keyed(kFamilyZ, key, j, pq_);
  }
  v -= tr.b;
  return (mod_floor(v, bi_pow(pq_, n + 1)) / bi_pow(pq_, n)).convert_to<std::int64_t>();
}

ZPoint ZPoint::acted(const bsgroup::Word& g) const {
  ZPoint out = *this;
  out.word_ = bsgroup::concat(g, word_);
  return out;
}

std::int64_t ZPoint::materialized_cosets() const {
  return static_cast<std::int64_t>(touched_->size());
}

WPoint sample_w(const bsgroup::BsPresentation& pres, std::int64_t p, std::int64_t q,
                const spaces::TapeSource& master) {
  return WPoint{XPoint(master.substream(0)), tape_y_point(p, q, master.substream(1)),
                ZPoint(pres, p, q, master.substream(2))};
}

WPoint act_w(const bsgroup::Word& g, const WPoint& w) {
  return WPoint{w.x.shifted(bsgroup::t_exponent_sum(g)), act_y_normal(g, w.y),
                w.z.acted(g)};
}

W1Point sample_w1(const bsgroup::BsPresentation& pres, std::int64_t p, std::int64_t q,
                  const spaces::TapeSource& master) {
  return W1Point{tape_y_point(p, q, master.substream(1)),
                 ZPoint(pres, p, q, master.substream(2))};
}

W1Point act_w1(const bsgroup::Word& g, const W1Point& w) {
  return W1Point{act_y_normal(g, w.y), w.z.acted(g)};
}

}  // namespace odolab::actions
