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

#include "odolab/vaes.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <stdexcept>

#include "odolab/spaces.hpp"

namespace odolab::vaes {

namespace {

// Tape digit families for the two coordinate factors.
constexpr std::uint64_t kFamilyVaesX = 16;
constexpr std::uint64_t kFamilyVaesY = 48;

std::int64_t mod_p(std::int64_t v, std::int64_t p) {
  const std::int64_t r = v % p;
  return r < 0 ? r + p : r;
}

std::int64_t inv_mod(std::int64_t a, std::int64_t p) {
  // p is prime and a nonzero mod p; Fermat via fast exponent.
  std::int64_t base = mod_p(a, p);
  std::int64_t e = p - 2;
  std::int64_t acc = 1;
  while (e > 0) {
    if (e & 1) acc = acc * base % p;
    base = base * base % p;
    e >>= 1;
  }
  return acc;
}

}  // namespace

Mat3 mat_identity() {
  Mat3 m{};
  for (int i = 0; i < 3; ++i) m[i][i] = 1;
  return m;
}

Mat3 mat_mul(const Mat3& a, const Mat3& b, std::int64_t p) {
  Mat3 out{};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      std::int64_t s = 0;
      for (int k = 0; k < 3; ++k) s += a[i][k] * b[k][j];
      out[i][j] = mod_p(s, p);
    }
  }
  return out;
}

std::int64_t mat_det(const Mat3& a, std::int64_t p) {
  const std::int64_t d = a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
                         a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
                         a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
  return mod_p(d, p);
}

Mat3 mat_inverse_sl(const Mat3& a, std::int64_t p) {
  if (mat_det(a, p) != 1) throw std::invalid_argument("mat_inverse_sl: det is not 1");
  Mat3 adj{};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const int r0 = (i + 1) % 3, r1 = (i + 2) % 3;
      const int c0 = (j + 1) % 3, c1 = (j + 2) % 3;
      // Cofactor transpose laid out directly: adj[j][i] from minor(i, j).
      adj[j][i] = mod_p(a[r0][c0] * a[r1][c1] - a[r0][c1] * a[r1][c0], p);
    }
  }
  return adj;
}

HElem mat_apply(const Mat3& a, const HElem& v, std::int64_t p) {
  HElem out{};
  for (int i = 0; i < 3; ++i) {
    out[i] = mod_p(a[i][0] * v[0] + a[i][1] * v[1] + a[i][2] * v[2], p);
  }
  return out;
}

HElem h_add(const HElem& a, const HElem& b, std::int64_t p) {
  return {mod_p(a[0] + b[0], p), mod_p(a[1] + b[1], p), mod_p(a[2] + b[2], p)};
}

HElem h_neg(const HElem& a, std::int64_t p) {
  return {mod_p(-a[0], p), mod_p(-a[1], p), mod_p(-a[2], p)};
}

std::int64_t h_encode(const HElem& v, std::int64_t p) {
  return (v[0] * p + v[1]) * p + v[2];
}

HElem h_decode(std::int64_t code, std::int64_t p) {
  HElem v{};
  v[2] = code % p;
  code /= p;
  v[1] = code % p;
  v[0] = code / p;
  return v;
}

VaesConfig VaesConfig::make(std::vector<std::int64_t> primes) {
  if (primes.empty()) throw std::invalid_argument("need at least one prime");
  std::set<std::int64_t> seen;
  for (const std::int64_t p : primes) {
    if (p < 2) throw std::invalid_argument("primes must be at least 2");
    if (!seen.insert(p).second) throw std::invalid_argument("primes must be distinct");
  }
  VaesConfig cfg;
  cfg.primes = std::move(primes);
  return cfg;
}

Mat3 elem_matrix(const ElemGen& g, std::int64_t p) {
  if (g.row == g.col || g.row < 0 || g.row > 2 || g.col < 0 || g.col > 2) {
    throw std::invalid_argument("elementary matrix needs distinct rows");
  }
  Mat3 m = mat_identity();
  m[g.row][g.col] = mod_p(g.sign, p);
  return m;
}

std::vector<Mat3> lambda_levels(const VaesConfig& cfg, const LambdaWord& w) {
  std::vector<Mat3> out;
  out.reserve(cfg.levels());
  for (const std::int64_t p : cfg.primes) {
    Mat3 m = mat_identity();
    for (const ElemGen& g : w) m = mat_mul(m, elem_matrix(g, p), p);
    out.push_back(m);
  }
  return out;
}

LambdaWord transvection_decompose(const Mat3& target, std::int64_t p) {
  if (mat_det(target, p) != 1) {
    throw std::invalid_argument("transvection_decompose: det is not 1");
  }
  Mat3 a = target;
  for (auto& row : a) {
    for (auto& e : row) e = mod_p(e, p);
  }
  // Row operation row_i += c row_j is left multiplication by E_{ij}(c);
  // record the inverses in application order, so the final list multiplies
  // back to the target.
  LambdaWord word;
  const auto apply = [&](int i, int j, std::int64_t c) {
    c = mod_p(c, p);
    if (c == 0) return;
    for (int k = 0; k < 3; ++k) a[i][k] = mod_p(a[i][k] + c * a[j][k], p);
    // Inverse op appended: E_{ij}(-c) as c sign flips.
    for (std::int64_t s = 0; s < c; ++s) word.push_back({i, j, -1});
  };
  for (int col = 0; col < 2; ++col) {
    if (a[col][col] != 1) {
      // Make a sub-diagonal entry of this column nonzero, then pivot to 1.
      // Some entry below the diagonal is reachable: an all-zero column
      // would force det = 0.
      int helper = col + 1;
      bool nonzero = false;
      for (int i = col + 1; i < 3; ++i) {
        if (a[i][col] != 0) {
          helper = i;
          nonzero = true;
          break;
        }
      }
      if (!nonzero) apply(helper, col, 1);
      const std::int64_t need = mod_p(1 - a[col][col], p);
      apply(col, helper, need * inv_mod(a[helper][col], p));
    }
    for (int i = 0; i < 3; ++i) {
      if (i != col && a[i][col] != 0) apply(i, col, p - a[i][col]);
    }
  }
  // Lower-right entry is now det = 1; clear the remaining upper column.
  for (int i = 0; i < 2; ++i) {
    if (a[i][2] != 0) apply(i, 2, p - a[i][2]);
  }
  // word currently holds inverse ops in application order; the product of
  // inverses in that order equals the target.
  return word;
}

XCosetPoint sample_x(const VaesConfig& cfg, const spaces::TapeSource& tape) {
  XCosetPoint x;
  x.coset.reserve(cfg.levels());
  for (int n = 0; n < cfg.levels(); ++n) {
    const std::int64_t p = cfg.primes[n];
    for (std::int64_t attempt = 0;; ++attempt) {
      if (attempt > 512) throw std::runtime_error("sample_x: rejection ran dry");
      Mat3 m{};
      for (int k = 0; k < 9; ++k) {
        m[k / 3][k % 3] =
            tape.digit(kFamilyVaesX + static_cast<std::uint64_t>(n), attempt * 9 + k, p);
      }
      const std::int64_t d = mat_det(m, p);
      if (d == 0) continue;
      const std::int64_t fix = inv_mod(d, p);
      for (int k = 0; k < 3; ++k) m[0][k] = m[0][k] * fix % p;
      x.coset.push_back(m);
      break;
    }
  }
  return x;
}

VaesYPoint sample_y(const VaesConfig& cfg, const spaces::TapeSource& tape) {
  VaesYPoint y;
  y.val.reserve(cfg.levels());
  for (int n = 0; n < cfg.levels(); ++n) {
    const std::int64_t p = cfg.primes[n];
    HElem v{};
    for (int k = 0; k < 3; ++k) {
      v[k] = tape.digit(kFamilyVaesY + static_cast<std::uint64_t>(n), k, p);
    }
    y.val.push_back(v);
  }
  return y;
}

XCosetPoint act_x(const VaesConfig& cfg, const std::vector<Mat3>& lam,
                  const XCosetPoint& x) {
  XCosetPoint out = x;
  for (int n = 0; n < cfg.levels(); ++n) {
    out.coset[n] = mat_mul(lam[n], x.coset[n], cfg.primes[n]);
  }
  return out;
}

VaesYPoint act_y_lambda(const VaesConfig& cfg, const std::vector<Mat3>& lam,
                        const VaesYPoint& y) {
  VaesYPoint out = y;
  for (int n = 0; n < cfg.levels(); ++n) {
    out.val[n] = mat_apply(lam[n], y.val[n], cfg.primes[n]);
  }
  return out;
}

VaesYPoint act_y_k(const VaesConfig& cfg, int m, const HElem& h, const VaesYPoint& y) {
  VaesYPoint out = y;
  out.val[m] = h_add(y.val[m], h, cfg.primes[m]);
  return out;
}

HElem pi_vaes(const VaesConfig& cfg, const XCosetPoint& x, const VaesYPoint& y, int n) {
  return mat_apply(mat_inverse_sl(x.coset[n], cfg.primes[n]), y.val[n], cfg.primes[n]);
}

HElem h_pick() { return {0, 0, 1}; }

VaesYPoint u_apply(const VaesConfig& cfg, int n, const XCosetPoint& x,
                   const VaesYPoint& y) {
  const HElem moved = mat_apply(x.coset[n], h_pick(), cfg.primes[n]);
  return act_y_k(cfg, n, moved, y);
}

std::vector<std::int64_t> greedy_disjoint_set(
    std::int64_t size, const std::function<std::int64_t(std::int64_t)>& step) {
  const std::int64_t want = (size + 2) / 3;
  std::vector<std::int64_t> back(size, -1);
  for (std::int64_t c = 0; c < size; ++c) {
    const std::int64_t f = step(c);
    if (f < 0 || f >= size || back[f] != -1) {
      throw std::invalid_argument("greedy_disjoint_set: step is not a bijection");
    }
    back[f] = c;
  }
  std::vector<char> in(size, 0);
  std::vector<std::int64_t> out;
  out.reserve(want);
  for (std::int64_t c = 0; c < size && static_cast<std::int64_t>(out.size()) < want;
       ++c) {
    // c is admissible when neither translate relation touches the set.
    if (in[step(c)] || in[back[c]]) continue;
    in[c] = 1;
    out.push_back(c);
  }
  if (static_cast<std::int64_t>(out.size()) != want) {
    throw std::runtime_error("greedy_disjoint_set: ran dry before the target size");
  }
  return out;
}

std::vector<std::int64_t> build_I_n(std::int64_t p, const HElem& h) {
  if (h == HElem{0, 0, 0}) throw std::invalid_argument("translating element is zero");
  const std::int64_t size = p * p * p;
  return greedy_disjoint_set(size, [&](std::int64_t c) {
    return h_encode(h_add(h_decode(c, p), h, p), p);
  });
}

VaesSuiteReport vaes_suite(const VaesConfig& cfg, int words, std::int64_t samples,
                           std::uint64_t seed) {
  VaesSuiteReport rep;
  rep.words = words;
  rep.samples = samples;
  const int levels = cfg.levels();
  const HElem h = h_pick();

  // Exact greedy certificates per level.
  std::vector<std::vector<char>> members(levels);
  for (int n = 0; n < levels; ++n) {
    const std::int64_t p = cfg.primes[n];
    const std::int64_t size = p * p * p;
    const auto set = build_I_n(p, h);
    VaesLevelReport lev;
    lev.prime = p;
    lev.set_size = static_cast<std::int64_t>(set.size());
    members[n].assign(size, 0);
    for (const std::int64_t c : set) members[n][c] = 1;
    bool disjoint = true;
    for (const std::int64_t c : set) {
      if (members[n][h_encode(h_add(h_decode(c, p), h, p), p)]) disjoint = false;
    }
    lev.disjoint = disjoint;
    // Disjointness makes the symmetric difference exactly twice the set.
    lev.gap = Rational(2 * lev.set_size, size);
    lev.gap_ok = lev.gap >= Rational(2, 3);
    rep.levels.push_back(lev);
  }

  std::mt19937_64 rng(seed);
  const auto random_word = [&]() {
    LambdaWord w;
    const int len = 1 + static_cast<int>(rng() % 6);
    for (int i = 0; i < len; ++i) {
      const int row = static_cast<int>(rng() % 3);
      int col = static_cast<int>(rng() % 3);
      if (col == row) col = (col + 1) % 3;
      w.push_back({row, col, rng() % 2 == 0 ? 1 : -1});
    }
    return w;
  };

  spaces::TapeSource master(seed);
  bool lambda_comm = true, pi_inv = true;
  for (int wi = 0; wi < words; ++wi) {
    const auto lam = lambda_levels(cfg, random_word());
    for (int s = 0; s < 16; ++s) {
      auto sub = master.substream(static_cast<std::uint64_t>(wi) * 1024 + s);
      const XCosetPoint x = sample_x(cfg, sub.substream(0));
      const VaesYPoint y = sample_y(cfg, sub.substream(1));
      const XCosetPoint lx = act_x(cfg, lam, x);
      const VaesYPoint ly = act_y_lambda(cfg, lam, y);
      for (int n = 0; n < levels; ++n) {
        // U_n after lambda vs lambda after U_n, on the Y coordinate.
        const VaesYPoint lhs = u_apply(cfg, n, lx, ly);
        const VaesYPoint rhs = act_y_lambda(cfg, lam, u_apply(cfg, n, x, y));
        if (lhs.val != rhs.val) lambda_comm = false;
        if (pi_vaes(cfg, lx, ly, n) != pi_vaes(cfg, x, y, n)) pi_inv = false;
      }
    }
  }
  rep.lambda_commutation_ok = lambda_comm;
  rep.pi_invariance_ok = pi_inv;

  // K commutation: H_m generators act by coordinate addition, so both
  // orders land on the same point; checked across all level pairs.
  bool k_comm = true;
  for (int s = 0; s < 64; ++s) {
    auto sub = master.substream(0x4b000000ull + s);
    const XCosetPoint x = sample_x(cfg, sub.substream(0));
    const VaesYPoint y = sample_y(cfg, sub.substream(1));
    for (int m = 0; m < levels; ++m) {
      HElem g{};
      for (int k = 0; k < 3; ++k) {
        g[k] = static_cast<std::int64_t>(rng() % cfg.primes[m]);
      }
      const VaesYPoint gy = act_y_k(cfg, m, g, y);
      for (int n = 0; n < levels; ++n) {
        const VaesYPoint lhs = u_apply(cfg, n, x, gy);
        const VaesYPoint rhs = act_y_k(cfg, m, g, u_apply(cfg, n, x, y));
        if (lhs.val != rhs.val) k_comm = false;
      }
    }
  }
  rep.k_commutation_ok = k_comm;

  // Group-level semidirect identity: conjugating a summand element by
  // (k, lambda) lands on the lambda image, independent of k.
  bool semi = true;
  for (int trial = 0; trial < 64; ++trial) {
    const auto lam = lambda_levels(cfg, random_word());
    for (int n = 0; n < levels; ++n) {
      const std::int64_t p = cfg.primes[n];
      HElem hh{};
      for (int k = 0; k < 3; ++k) hh[k] = static_cast<std::int64_t>(rng() % p);
      // (k, l)(h, e)(k, l)^{-1}: the K part cancels, leaving l applied to h.
      const HElem direct = mat_apply(lam[n], hh, p);
      HElem kpart{};
      for (int k = 0; k < 3; ++k) kpart[k] = static_cast<std::int64_t>(rng() % p);
      const HElem lhs = h_add(h_add(kpart, direct, p), h_neg(kpart, p), p);
      if (lhs != direct) semi = false;
      // And the action form: l (h + l^{-1} y) = l h + y on samples.
      const Mat3 inv = mat_inverse_sl(lam[n], p);
      HElem probe{};
      for (int k = 0; k < 3; ++k) probe[k] = static_cast<std::int64_t>(rng() % p);
      const HElem via = mat_apply(lam[n], h_add(hh, mat_apply(inv, probe, p), p), p);
      if (via != h_add(direct, probe, p)) semi = false;
    }
  }
  rep.semidirect_ok = semi;

  // U_n fixes cylinders pinned below its level, and flips membership in
  // B_n = {pi(w)_n in I_n}.
  bool cyl = true, flip = true;
  for (int s = 0; s < 128; ++s) {
    auto sub = master.substream(0xc1000000ull + s);
    const XCosetPoint x = sample_x(cfg, sub.substream(0));
    const VaesYPoint y = sample_y(cfg, sub.substream(1));
    for (int n = 0; n < levels; ++n) {
      const VaesYPoint moved = u_apply(cfg, n, x, y);
      for (int m = 0; m < n; ++m) {
        if (moved.val[m] != y.val[m]) cyl = false;
      }
      const std::int64_t p = cfg.primes[n];
      const bool in_b =
          members[n][h_encode(pi_vaes(cfg, x, y, n), p)] != 0;
      const bool in_b_after =
          members[n][h_encode(pi_vaes(cfg, x, moved, n), p)] != 0;
      if (in_b && in_b_after) flip = false;
    }
  }
  rep.cylinder_fix_ok = cyl;
  rep.flip_ok = flip;

  // Translate-difference series: one K generator of H_0 and one Lambda
  // generator. pi never sees the Lambda translate, so that series is zero;
  // the K series is positive at level 0 and zero beyond it.
  const HElem k_gen = h_pick();
  const auto lam_inv = lambda_levels(cfg, {{0, 1, -1}});
  rep.k_decay.assign(levels, 0.0);
  rep.lambda_decay.assign(levels, 0.0);
  for (std::int64_t s = 0; s < samples; ++s) {
    auto sub = master.substream(0xdec0000000ull + static_cast<std::uint64_t>(s));
    const XCosetPoint x = sample_x(cfg, sub.substream(0));
    const VaesYPoint y = sample_y(cfg, sub.substream(1));
    const VaesYPoint yk = act_y_k(cfg, 0, h_neg(k_gen, cfg.primes[0]), y);
    const XCosetPoint xl = act_x(cfg, lam_inv, x);
    const VaesYPoint yl = act_y_lambda(cfg, lam_inv, y);
    for (int n = 0; n < levels; ++n) {
      const std::int64_t p = cfg.primes[n];
      const bool base = members[n][h_encode(pi_vaes(cfg, x, y, n), p)] != 0;
      const bool kside = members[n][h_encode(pi_vaes(cfg, x, yk, n), p)] != 0;
      const bool lside = members[n][h_encode(pi_vaes(cfg, xl, yl, n), p)] != 0;
      if (base != kside) rep.k_decay[n] += 1.0;
      if (base != lside) rep.lambda_decay[n] += 1.0;
    }
  }
  for (int n = 0; n < levels; ++n) {
    rep.k_decay[n] /= static_cast<double>(samples);
    rep.lambda_decay[n] /= static_cast<double>(samples);
  }
  return rep;
}

}  // namespace odolab::vaes
