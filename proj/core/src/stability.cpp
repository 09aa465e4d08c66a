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

#include "odolab/stability.hpp"

#include <numeric>
#include <stdexcept>
#include <string>

namespace odolab::stability {

namespace {

using actions::XPoint;
using actions::YPtr;
using spaces::ProductCylinder;

// Coordinate keys shared by every cylinder here: bit i of the odometer at
// 2i, window digit k at 2k+1.
std::int64_t x_coord(std::int64_t i) { return 2 * i; }
std::int64_t w_coord(std::int64_t k) { return 2 * k + 1; }

void check_level(int j) {
  if (j < 0 || j > 55) throw std::invalid_argument("block level out of range");
}

std::int64_t cell_count(int j) {
  check_level(j);
  return std::int64_t{1} << (j + 1);
}

}  // namespace

int BlockFamily::minimal_width(std::int64_t p, std::int64_t q, std::int64_t r) {
  const std::int64_t base = p == 1 ? q : p * q;
  int m = 1;
  BigInt pow(base);
  while (pow <= r) {
    pow *= base;
    ++m;
  }
  return m;
}

BlockFamily BlockFamily::make(std::int64_t p, std::int64_t q, std::int64_t r) {
  if (p < 1 || q <= p) throw std::invalid_argument("need 1 <= p < q");
  if (std::gcd(p, q) != 1) throw std::invalid_argument("p, q must be coprime");
  if (r < 1) throw std::invalid_argument("need r >= 1");
  if (r * p < 2) throw std::invalid_argument("need r * p >= 2");
  return BlockFamily{p, q, r, minimal_width(p, q, r)};
}

BigInt BlockFamily::block_modulus() const { return bi_pow(BigInt(block_base()), m); }

std::int64_t BlockFamily::anchor(int j) const {
  check_level(j);
  if (p == 1) return static_cast<std::int64_t>(j) * m;
  // Clears every level-j cell shift: anchor > l for l < 2^{j+1}.
  return j + (std::int64_t{1} << (j + 1));
}

BigInt BlockFamily::v_exponent(int j) const {
  check_level(j);
  return BigInt(r) * bi_pow(BigInt(block_base()), static_cast<std::int64_t>(j) * m);
}

BigInt BlockFamily::u_frame_addend(int j) const {
  return BigInt(r) * bi_pow(BigInt(block_base()), anchor(j));
}

BigInt BlockFamily::u_cell_exponent(int j, std::int64_t l) const {
  if (l < 0 || l >= cell_count(j)) throw std::invalid_argument("cell out of range");
  if (p == 1) return BigInt(r) * bi_pow(BigInt(q), anchor(j) + l);
  // l < anchor(j), so the frame addend times (q/p)^l stays integral.
  return BigInt(r) * bi_pow(BigInt(p), anchor(j) - l) * bi_pow(BigInt(q), anchor(j) + l);
}

bsgroup::Word BlockFamily::u_cell_word(int j, std::int64_t l) const {
  const BigInt c = u_frame_addend(j);
  if (l == 0) return {{'a', c}};
  return {{'t', BigInt(l)}, {'a', c}, {'t', BigInt(-l)}};
}

std::int64_t tau_block(const BlockFamily& f, const YPtr& y, int j) {
  check_level(j);
  std::int64_t v = 0;
  for (int k = f.m - 1; k >= 0; --k) {
    v = v * f.block_base() + y->window_digit(static_cast<std::int64_t>(j) * f.m + k);
  }
  return v;
}

std::vector<std::int64_t> pi_blocks(const BlockFamily& f, const XPoint& x,
                                    const YPtr& y, int j_max) {
  check_level(j_max);
  std::vector<std::int64_t> out(j_max + 1, 0);
  if (f.p == 1) {
    // t^{-l} only shifts positions, so the block reads straight off y.
    for (int j = 0; j <= j_max; ++j) {
      const std::int64_t a = f.anchor(j) + x.cell(j);
      std::int64_t v = 0;
      for (int k = f.m - 1; k >= 0; --k) v = v * f.q + y->window_digit(a + k);
      out[j] = v;
    }
    return out;
  }
  // One inverse chain serves every level: cells are nested, so all reads
  // happen at some step of the deepest walk.
  std::vector<std::int64_t> cells(j_max + 1);
  for (int j = 0; j <= j_max; ++j) cells[j] = x.cell(j);
  const std::int64_t steps = cells[j_max];
  const std::int64_t base = f.block_base();
  const BigInt mod_block = f.block_modulus();
  std::vector<BigInt> anchor_pow(j_max + 1);
  for (int j = 0; j <= j_max; ++j) anchor_pow[j] = bi_pow(BigInt(base), f.anchor(j));
  const int precision = static_cast<int>(steps) + f.anchor(j_max) + f.m + 1;
  BigInt v = y->y0_window(precision).value();
  for (std::int64_t k = 0;; ++k) {
    for (int j = 0; j <= j_max; ++j) {
      if (cells[j] == k) {
        out[j] = ((v / anchor_pow[j]) % mod_block).convert_to<std::int64_t>();
      }
    }
    if (k == steps) break;
    const BigInt z = v % f.q;
    v = (v - z) / f.q * f.p + y->pos_digit(k + 1);
  }
  return out;
}

YPtr apply_u(const BlockFamily& f, int j, const XPoint& x, const YPtr& y) {
  return actions::step_add(Rational(f.u_cell_exponent(j, x.cell(j))), y);
}

YPtr apply_v(const BlockFamily& f, int j, const YPtr& y) {
  return actions::step_add(Rational(f.v_exponent(j)), y);
}

Rational chained_pattern_fraction(std::int64_t p, std::int64_t q, std::int64_t l,
                                  int d, int m, std::int64_t v) {
  if (p < 1 || q <= p || l < 0 || d < 0 || m < 1) {
    throw std::invalid_argument("chained_pattern_fraction: bad parameters");
  }
  const std::int64_t base = p * q;
  const BigInt states = bi_pow(BigInt(base), l + d + m) * bi_pow(BigInt(p), l);
  if (states > (std::int64_t{1} << 24)) {
    throw std::invalid_argument("chained_pattern_fraction: grid too large");
  }
  const std::int64_t height = bi_pow(BigInt(base), l + d + m).convert_to<std::int64_t>();
  const std::int64_t pl = bi_pow(BigInt(p), l).convert_to<std::int64_t>();
  const std::int64_t div = bi_pow(BigInt(base), d).convert_to<std::int64_t>();
  const std::int64_t mod = bi_pow(BigInt(base), m).convert_to<std::int64_t>();
  std::int64_t count = 0;
  for (std::int64_t y0 = 0; y0 < height; ++y0) {
    for (std::int64_t uvec = 0; uvec < pl; ++uvec) {
      std::int64_t w = y0;
      std::int64_t uu = uvec;
      for (std::int64_t k = 0; k < l; ++k) {
        w = (w - w % q) / q * p + uu % p;
        uu /= p;
      }
      if ((w / div) % mod == v) ++count;
    }
  }
  return Rational(BigInt(count), states);
}

Rational chained_pattern_measure(std::int64_t p, std::int64_t q, std::int64_t l,
                                 int d, int m) {
  if (p < 1 || q <= p || l < 0 || m < 1) {
    throw std::invalid_argument("chained_pattern_measure: bad parameters");
  }
  if (d < (p == 1 ? 0 : l)) {
    throw std::invalid_argument("chained_pattern_measure: depth below chain length");
  }
  return Rational(BigInt(1), bi_pow(BigInt(p * q), m));
}

ProductCylinder p1_piece(const BlockFamily& f, int j, std::int64_t l, std::int64_t v) {
  if (f.p != 1) throw std::logic_error("p1_piece: family has p > 1");
  if (l < 0 || l >= cell_count(j)) throw std::invalid_argument("cell out of range");
  BigInt vv(v);
  if (v < 0 || vv >= f.block_modulus()) throw std::invalid_argument("block value out of range");
  ProductCylinder c;
  for (int i = 0; i <= j; ++i) c.require(x_coord(i), 2, (l >> i) & 1);
  const std::int64_t a = f.anchor(j) + l;
  std::int64_t rest = v;
  for (int k = 0; k < f.m; ++k) {
    c.require(w_coord(a + k), f.q, rest % f.q);
    rest /= f.q;
  }
  return c;
}

namespace {

// Shared pointwise leg of the gap certificates: draw members of the
// block-zero set, push them through the translating element, and confirm
// they land on block value r with the bands untouched.
void confirm_members(const BlockFamily& f, int j, int member_samples,
                     std::uint64_t seed, bool use_cells, GapCertificate* g) {
  spaces::TapeSource master(seed);
  const std::int64_t cap = static_cast<std::int64_t>(member_samples) * 400 + 1000;
  int found = 0;
  bool ok = true;
  for (std::int64_t i = 0; i < cap && found < member_samples; ++i) {
    auto sub = master.substream(static_cast<std::uint64_t>(i));
    XPoint x(sub.substream(0));
    YPtr y = actions::tape_y_point(f.p, f.q, sub.substream(1));
    if (use_cells) {
      if (pi_blocks(f, x, y, j)[j] != 0) continue;
      ++found;
      const YPtr moved = apply_u(f, j, x, y);
      if (pi_blocks(f, x, moved, j)[j] != f.r) ok = false;
      for (int n = 1; n <= 2; ++n) {
        if (moved->neg_digit(-n) != y->neg_digit(-n)) ok = false;
        if (f.p > 1 && moved->pos_digit(n) != y->pos_digit(n)) ok = false;
      }
    } else {
      if (tau_block(f, y, j) != 0) continue;
      ++found;
      const YPtr moved = apply_v(f, j, y);
      if (tau_block(f, moved, j) != f.r) ok = false;
      for (std::int64_t pos = 0; pos < static_cast<std::int64_t>(j) * f.m; ++pos) {
        if (moved->window_digit(pos) != y->window_digit(pos)) ok = false;
      }
      for (int k = 0; k < 3; ++k) {
        const std::int64_t pos = (static_cast<std::int64_t>(j) + 1) * f.m + k;
        if (moved->window_digit(pos) != y->window_digit(pos)) ok = false;
      }
      for (int n = 1; n <= 2; ++n) {
        if (moved->neg_digit(-n) != y->neg_digit(-n)) ok = false;
        if (f.p > 1 && moved->pos_digit(n) != y->pos_digit(n)) ok = false;
      }
    }
  }
  g->members_checked = found;
  g->members_ok = ok && found == member_samples;
}

}  // namespace

GapCertificate u_gap(const BlockFamily& f, int j, int member_samples,
                     std::uint64_t seed) {
  GapCertificate g;
  const std::int64_t cells = cell_count(j);
  if (f.p == 1) {
    bool disjoint = true;
    Rational sd(0);
    for (std::int64_t l = 0; l < cells; ++l) {
      const ProductCylinder c0 = p1_piece(f, j, l, 0);
      const ProductCylinder cr = p1_piece(f, j, l, f.r);
      if (spaces::intersect(c0, cr)) disjoint = false;
      sd += c0.measure() + cr.measure();
    }
    g.disjoint = disjoint;
    g.sym_diff = sd;
  } else {
    // Each cell contributes two pieces of the chained-pattern measure; the
    // pieces are the 0 and r level sets of one block function, disjoint
    // because r is a distinct block value.
    Rational sd(0);
    for (std::int64_t l = 0; l < cells; ++l) {
      const Rational piece = chained_pattern_measure(f.p, f.q, l, f.anchor(j), f.m);
      sd += Rational(BigInt(2), BigInt(cells)) * piece;
    }
    g.disjoint = f.r >= 1 && BigInt(f.r) < f.block_modulus();
    g.sym_diff = sd;
  }
  confirm_members(f, j, member_samples, seed, /*use_cells=*/true, &g);
  return g;
}

GapCertificate v_gap(const BlockFamily& f, int j, int member_samples,
                     std::uint64_t seed) {
  GapCertificate g;
  ProductCylinder c0, cr;
  std::int64_t rest = f.r;
  for (int k = 0; k < f.m; ++k) {
    const std::int64_t pos = static_cast<std::int64_t>(j) * f.m + k;
    c0.require(w_coord(pos), f.block_base(), 0);
    cr.require(w_coord(pos), f.block_base(), rest % f.block_base());
    rest /= f.block_base();
  }
  g.disjoint = !spaces::intersect(c0, cr).has_value();
  g.sym_diff = c0.measure() + cr.measure();
  confirm_members(f, j, member_samples, seed, /*use_cells=*/false, &g);
  return g;
}

DiffSeries diff_series(const BlockFamily& f, int j_max, std::int64_t samples,
                       std::uint64_t seed) {
  check_level(j_max);
  DiffSeries ds;
  ds.t_hits.assign(j_max + 1, 0);
  ds.a_hits.assign(j_max + 1, 0);
  ds.samples = samples;
  spaces::TapeSource master(seed);
  for (std::int64_t i = 0; i < samples; ++i) {
    auto sub = master.substream(static_cast<std::uint64_t>(i));
    XPoint x(sub.substream(0));
    YPtr y = actions::tape_y_point(f.p, f.q, sub.substream(1));
    const auto here = pi_blocks(f, x, y, j_max);
    // w is in the translate gB_j iff g^{-1} w is in B_j.
    const auto t_side = pi_blocks(f, x.shifted(BigInt(-1)), actions::step_t_inv(y), j_max);
    const auto a_side = pi_blocks(f, x, actions::step_add(Rational(-1), y), j_max);
    for (int j = 0; j <= j_max; ++j) {
      if ((here[j] == 0) != (t_side[j] == 0)) ++ds.t_hits[j];
      if ((here[j] == 0) != (a_side[j] == 0)) ++ds.a_hits[j];
    }
  }
  return ds;
}

PushforwardReport p1_pushforward(const BlockFamily& f,
                                 const std::vector<std::int64_t>& target,
                                 std::int64_t member_samples, std::uint64_t seed) {
  if (f.p != 1) throw std::logic_error("p1_pushforward: family has p > 1");
  if (target.empty() || target.size() > 12) {
    throw std::invalid_argument("p1_pushforward: bad target length");
  }
  const int d = static_cast<int>(target.size()) - 1;
  for (const std::int64_t v : target) {
    if (v < 0 || BigInt(v) >= f.block_modulus()) {
      throw std::invalid_argument("p1_pushforward: block value out of range");
    }
  }
  // One cylinder per level-d cell: the cell's bits plus every level's block
  // digits, which never collide because the anchors tile and the cell
  // shifts are monotone across levels.
  const std::int64_t cells = cell_count(d);
  std::vector<ProductCylinder> pieces;
  pieces.reserve(cells);
  PushforwardReport rep;
  rep.measure = Rational(0);
  rep.expected = Rational(BigInt(1), bi_pow(BigInt(f.q), static_cast<std::int64_t>(d + 1) * f.m));
  bool ok = true;
  for (std::int64_t l = 0; l < cells; ++l) {
    ProductCylinder c;
    for (int i = 0; i <= d; ++i) c.require(x_coord(i), 2, (l >> i) & 1);
    for (int j = 0; j <= d; ++j) {
      const std::int64_t lj = l & ((std::int64_t{1} << (j + 1)) - 1);
      const std::int64_t a = f.anchor(j) + lj;
      std::int64_t rest = target[j];
      for (int k = 0; k < f.m; ++k) {
        const std::int64_t coord = w_coord(a + k);
        const std::int64_t digit = rest % f.q;
        rest /= f.q;
        if (c.has(coord)) {
          ok = false;  // anchors would have to collide; they cannot
          continue;
        }
        c.require(coord, f.q, digit);
      }
    }
    rep.measure += c.measure();
    pieces.push_back(c);
  }
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    for (std::size_t k = i + 1; k < pieces.size(); ++k) {
      if (spaces::intersect(pieces[i], pieces[k])) ok = false;
    }
  }
  spaces::TapeSource master(seed);
  for (std::int64_t i = 0; i < member_samples; ++i) {
    auto sub = master.substream(static_cast<std::uint64_t>(i));
    XPoint x(sub.substream(0));
    YPtr y = actions::tape_y_point(f.p, f.q, sub.substream(1));
    const auto point = [&](std::int64_t coord) -> std::int64_t {
      if (coord % 2 == 0) return x.digit(coord / 2);
      return y->window_digit((coord - 1) / 2);
    };
    int matched = 0;
    for (const auto& piece : pieces) {
      if (piece.matches(point)) ++matched;
    }
    if (matched > 1) ok = false;
    const bool in_preimage = pi_blocks(f, x, y, d) == target;
    if (in_preimage != (matched == 1)) ok = false;
  }
  rep.decomposition_ok = ok;
  return rep;
}

CommutationReport u_commutation(const BlockFamily& f, int j, char gen,
                                std::int64_t samples, std::uint64_t seed) {
  if (gen != 'a' && gen != 't') throw std::invalid_argument("generator must be a or t");
  CommutationReport rep;
  const auto pres = bsgroup::bs(BigInt(f.r * f.p), BigInt(f.r * f.q));
  const std::int64_t cells = cell_count(j);

  // Word certificates. Each cell element normalizes to the plain a-power
  // carrying its cell exponent; with gen 'a' the two orders agree on every
  // cell, with gen 't' they agree exactly off the wrapping cell.
  bool words = true;
  std::vector<bsgroup::BrittonWord> nf;
  nf.reserve(cells);
  for (std::int64_t l = 0; l < cells; ++l) {
    nf.push_back(bsgroup::BrittonWord::normalize(pres, f.u_cell_word(j, l)));
    BigInt e;
    if (!nf.back().is_a_power(&e) || e != f.u_cell_exponent(j, l)) words = false;
  }
  const bsgroup::Word gen_word{{gen, BigInt(1)}};
  const auto nfg = bsgroup::BrittonWord::normalize(pres, gen_word);
  if (gen == 'a') {
    for (std::int64_t l = 0; l < cells; ++l) {
      if (bsgroup::multiply(pres, nf[l], nfg) != bsgroup::multiply(pres, nfg, nf[l])) {
        words = false;
      }
    }
  } else {
    for (std::int64_t l = 0; l + 1 < cells; ++l) {
      if (bsgroup::multiply(pres, nfg, nf[l]) != bsgroup::multiply(pres, nf[l + 1], nfg)) {
        words = false;
      }
    }
    // The wrap is the witness: the restored cell element differs.
    if (bsgroup::multiply(pres, nfg, nf[cells - 1]) == bsgroup::multiply(pres, nf[0], nfg)) {
      words = false;
    }
  }
  rep.words_ok = words;

  const int probe = f.anchor(j) + f.m + 2;
  spaces::TapeSource master(seed);
  for (std::int64_t i = 0; i < samples; ++i) {
    auto sub = master.substream(static_cast<std::uint64_t>(i));
    XPoint x(sub.substream(0));
    YPtr y = actions::tape_y_point(f.p, f.q, sub.substream(1));
    const std::int64_t l = x.cell(j);
    YPtr gy;
    std::int64_t lg = l;
    if (gen == 'a') {
      gy = actions::step_add(Rational(1), y);
    } else {
      gy = actions::step_t(y);
      lg = x.shifted(BigInt(1)).cell(j);
    }
    const YPtr lhs = actions::step_add(Rational(f.u_cell_exponent(j, lg)), gy);
    const YPtr mid = actions::step_add(Rational(f.u_cell_exponent(j, l)), y);
    const YPtr rhs = gen == 'a' ? actions::step_add(Rational(1), mid) : actions::step_t(mid);
    bool agree = lhs->y0_window(probe).value() == rhs->y0_window(probe).value();
    for (int n = 1; n <= 2 && agree; ++n) {
      agree = lhs->neg_digit(-n) == rhs->neg_digit(-n) &&
              lhs->pos_digit(n) == rhs->pos_digit(n);
    }
    if (!agree) {
      ++rep.disagreements;
      const bool wrap = gen == 't' && l == cells - 1;
      if (!wrap) ++rep.off_wrap_disagreements;
    }
  }
  rep.samples = samples;
  return rep;
}

CentralReport v_commutation(const BlockFamily& f, int j) {
  CentralReport rep;
  const auto pres = bsgroup::bs(BigInt(f.r * f.p), BigInt(f.r * f.q));
  const bsgroup::Word v_word{{'a', f.v_exponent(j)}};
  const bsgroup::Word a_word{{'a', BigInt(1)}};
  const bsgroup::Word conj_word{{'t', BigInt(1)}, {'a', BigInt(1)}, {'t', BigInt(-1)}};
  const auto commutes = [&](const bsgroup::Word& g) {
    return bsgroup::BrittonWord::normalize(pres, bsgroup::concat(g, v_word)) ==
           bsgroup::BrittonWord::normalize(pres, bsgroup::concat(v_word, g));
  };
  rep.commutes_with_a = commutes(a_word);
  rep.commutes_with_conj = commutes(conj_word);
  const auto ce = bsgroup::conj_exponents(f.r, f.p, f.q, conj_word);
  const std::int64_t jm = static_cast<std::int64_t>(j) * f.m;
  rep.threshold_met = jm >= ce.K && jm >= ce.L;
  return rep;
}

}  // namespace odolab::stability
