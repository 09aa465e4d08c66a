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

#include <doctest.h>

#include <cstdint>
#include <random>
#include <vector>

#include "odolab/numeric.hpp"
#include "odolab/spaces.hpp"
#include "odolab/stats.hpp"

namespace {

using namespace odolab::vaes;
using odolab::Rational;
using odolab::spaces::TapeSource;

TEST_SUITE("vaes") {

// Frozen greedy outputs, worked by hand: translation by (0,0,1) flips or
// cycles the last digit, so the greedy picks every element whose last
// digit is zero until it hits the target size.
TEST_CASE("greedy sets match hand-computed small cases") {
  CHECK(build_I_n(2, {0, 0, 1}) == std::vector<std::int64_t>{0, 2, 4});
  CHECK(build_I_n(3, {0, 0, 1}) ==
        std::vector<std::int64_t>{0, 3, 6, 9, 12, 15, 18, 21, 24});

  // Two-element group: the greedy stops at a single member.
  const auto tiny = greedy_disjoint_set(2, [](std::int64_t c) { return 1 - c; });
  CHECK(tiny == std::vector<std::int64_t>{0});

  CHECK_THROWS(build_I_n(3, {0, 0, 0}));
  CHECK_THROWS(greedy_disjoint_set(4, [](std::int64_t) { return std::int64_t{0}; }));
}

TEST_CASE("greedy postconditions hold exhaustively for every configured prime") {
  struct Expect {
    std::int64_t p;
    std::int64_t size;
    Rational gap;
  };
  const std::vector<Expect> cases = {
      {2, 3, Rational(6, 8)},
      {3, 9, Rational(18, 27)},
      {5, 42, Rational(84, 125)},
      {7, 115, Rational(230, 343)},
      {11, 444, Rational(888, 1331)},
  };
  for (const auto& c : cases) {
    CAPTURE(c.p);
    const auto set = build_I_n(c.p, h_pick());
    CHECK(static_cast<std::int64_t>(set.size()) == c.size);
    CHECK(static_cast<std::int64_t>(set.size()) == (c.p * c.p * c.p + 2) / 3);
    std::vector<char> in(c.p * c.p * c.p, 0);
    for (const auto e : set) in[e] = 1;
    for (const auto e : set) {
      const auto moved = h_encode(h_add(h_decode(e, c.p), h_pick(), c.p), c.p);
      CHECK(in[moved] == 0);
    }
    CHECK(Rational(2 * static_cast<std::int64_t>(set.size()), c.p * c.p * c.p) == c.gap);
    CHECK(c.gap >= Rational(2, 3));
  }
}

TEST_CASE("matrix arithmetic mod p") {
  const std::int64_t p = 7;
  const Mat3 a = {{{1, 2, 3}, {0, 1, 4}, {5, 6, 1}}};
  CHECK(mat_mul(a, mat_identity(), p) == a);
  CHECK(mat_mul(mat_identity(), a, p) == a);
  // det(a) = 1*(1-24) - 2*(0-20) + 3*(0-5) = -23 + 40 - 15 = 2.
  CHECK(mat_det(a, p) == 2);
  CHECK_THROWS(mat_inverse_sl(a, p));

  const HElem v = {1, 0, 6};
  const HElem av = mat_apply(a, v, p);
  CHECK(av == HElem{(1 + 18) % 7, 24 % 7, (5 + 6) % 7});
}

TEST_CASE("encode and decode are inverse") {
  for (const std::int64_t p : {2, 3, 5}) {
    for (std::int64_t c = 0; c < p * p * p; ++c) {
      CHECK(h_encode(h_decode(c, p), p) == c);
    }
  }
}

TEST_CASE("sampled coset matrices have determinant one and invert exactly") {
  const auto cfg = VaesConfig::make({2, 3, 5, 7, 11});
  TapeSource master(90125);
  for (std::uint64_t s = 0; s < 50; ++s) {
    const XCosetPoint x = sample_x(cfg, master.substream(s));
    for (int n = 0; n < cfg.levels(); ++n) {
      const std::int64_t p = cfg.primes[n];
      CHECK(mat_det(x.coset[n], p) == 1);
      const Mat3 inv = mat_inverse_sl(x.coset[n], p);
      CHECK(mat_mul(inv, x.coset[n], p) == mat_identity());
      CHECK(mat_mul(x.coset[n], inv, p) == mat_identity());
    }
  }
}

TEST_CASE("lambda level map is a homomorphism") {
  const auto cfg = VaesConfig::make({2, 3, 5});
  const LambdaWord w1 = {{0, 1, 1}, {2, 0, -1}, {1, 2, 1}};
  const LambdaWord w2 = {{1, 0, -1}, {0, 2, 1}};
  LambdaWord w12 = w1;
  w12.insert(w12.end(), w2.begin(), w2.end());
  const auto l1 = lambda_levels(cfg, w1);
  const auto l2 = lambda_levels(cfg, w2);
  const auto l12 = lambda_levels(cfg, w12);
  for (int n = 0; n < cfg.levels(); ++n) {
    CHECK(l12[n] == mat_mul(l1[n], l2[n], cfg.primes[n]));
    CHECK(mat_det(l1[n], cfg.primes[n]) == 1);
  }
}

TEST_CASE("transvection words reach every sampled target") {
  for (const std::int64_t p : {2, 3}) {
    CAPTURE(p);
    const auto cfg = VaesConfig::make({p});
    TapeSource master(1999 + static_cast<std::uint64_t>(p));
    for (std::uint64_t s = 0; s < 40; ++s) {
      const Mat3 target = sample_x(cfg, master.substream(s)).coset[0];
      const LambdaWord w = transvection_decompose(target, p);
      CHECK(lambda_levels(cfg, w)[0] == target);
    }
    CHECK(transvection_decompose(mat_identity(), p).empty());
  }
}

TEST_CASE("pi reads the raw coordinate at the identity coset") {
  const auto cfg = VaesConfig::make({2, 3, 5});
  TapeSource master(52);
  const VaesYPoint y = sample_y(cfg, master.substream(1));
  XCosetPoint e;
  for (int n = 0; n < cfg.levels(); ++n) e.coset.push_back(mat_identity());
  for (int n = 0; n < cfg.levels(); ++n) {
    CHECK(pi_vaes(cfg, e, y, n) == y.val[n]);
  }
  // Identity coset: U_n adds the picked element itself.
  const VaesYPoint moved = u_apply(cfg, 1, e, y);
  CHECK(moved.val[1] == h_add(y.val[1], h_pick(), 3));
  CHECK(moved.val[0] == y.val[0]);
  CHECK(moved.val[2] == y.val[2]);
}

TEST_CASE("pi is invariant under the lambda action, exactly") {
  const auto cfg = VaesConfig::make({2, 3, 5, 7, 11});
  TapeSource master(6021023);
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 60; ++trial) {
    LambdaWord w;
    const int len = 1 + static_cast<int>(rng() % 5);
    for (int i = 0; i < len; ++i) {
      const int row = static_cast<int>(rng() % 3);
      int col = static_cast<int>(rng() % 3);
      if (col == row) col = (col + 1) % 3;
      w.push_back({row, col, rng() % 2 == 0 ? 1 : -1});
    }
    const auto lam = lambda_levels(cfg, w);
    auto sub = master.substream(static_cast<std::uint64_t>(trial));
    const XCosetPoint x = sample_x(cfg, sub.substream(0));
    const VaesYPoint y = sample_y(cfg, sub.substream(1));
    const XCosetPoint lx = act_x(cfg, lam, x);
    const VaesYPoint ly = act_y_lambda(cfg, lam, y);
    for (int n = 0; n < cfg.levels(); ++n) {
      CHECK(pi_vaes(cfg, lx, ly, n) == pi_vaes(cfg, x, y, n));
    }
  }
}

TEST_CASE("suite report checks out on a three-level run") {
  const auto cfg = VaesConfig::make({2, 3, 5});
  const auto rep = vaes_suite(cfg, 20, 3000, 314);
  REQUIRE(rep.levels.size() == 3);
  CHECK(rep.levels[0].gap == Rational(6, 8));
  CHECK(rep.levels[1].gap == Rational(18, 27));
  CHECK(rep.levels[2].gap == Rational(84, 125));
  for (const auto& lev : rep.levels) {
    CHECK(lev.disjoint);
    CHECK(lev.gap_ok);
  }
  CHECK(rep.lambda_commutation_ok);
  CHECK(rep.k_commutation_ok);
  CHECK(rep.pi_invariance_ok);
  CHECK(rep.semidirect_ok);
  CHECK(rep.cylinder_fix_ok);
  CHECK(rep.flip_ok);
  // K-generator translates bite only at level zero; lambda translates never.
  CHECK(rep.k_decay[0] > 0.5);  // exact value 6/8 in expectation
  CHECK(rep.k_decay[1] == 0.0);
  CHECK(rep.k_decay[2] == 0.0);
  for (const double v : rep.lambda_decay) CHECK(v == 0.0);
}

TEST_CASE("entry marginal of sampled matrices matches the closed form") {
  for (const std::int64_t p : {2, 3, 5}) {
    CAPTURE(p);
    const auto cfg = VaesConfig::make({p});
    TapeSource master(404 + static_cast<std::uint64_t>(p));
    const std::int64_t n = 20000;
    std::vector<std::int64_t> counts(p, 0);
    for (std::int64_t s = 0; s < n; ++s) {
      const Mat3 m = sample_x(cfg, master.substream(static_cast<std::uint64_t>(s))).coset[0];
      ++counts[m[1][1]];
    }
    // Rows of a uniform determinant-one matrix are uniform nonzero vectors.
    const double total = static_cast<double>(p * p * p - 1);
    std::vector<double> probs(p, static_cast<double>(p * p) / total);
    probs[0] = static_cast<double>(p * p - 1) / total;
    const auto gof = odolab::stats::chi_square_gof(counts, probs);
    CHECK(gof.p_value > 0.001);
  }
}

TEST_CASE("pi pushforward is uniform per level") {
  const auto cfg = VaesConfig::make({2, 3});
  TapeSource master(113355);
  const std::int64_t n = 24000;
  std::vector<std::vector<std::int64_t>> counts;
  for (int lev = 0; lev < cfg.levels(); ++lev) {
    counts.emplace_back(cfg.primes[lev] * cfg.primes[lev] * cfg.primes[lev], 0);
  }
  for (std::int64_t s = 0; s < n; ++s) {
    auto sub = master.substream(static_cast<std::uint64_t>(s));
    const XCosetPoint x = sample_x(cfg, sub.substream(0));
    const VaesYPoint y = sample_y(cfg, sub.substream(1));
    for (int lev = 0; lev < cfg.levels(); ++lev) {
      ++counts[lev][h_encode(pi_vaes(cfg, x, y, lev), cfg.primes[lev])];
    }
  }
  for (int lev = 0; lev < cfg.levels(); ++lev) {
    const auto cells = static_cast<double>(counts[lev].size());
    const std::vector<double> probs(counts[lev].size(), 1.0 / cells);
    CHECK(odolab::stats::chi_square_gof(counts[lev], probs).p_value > 0.001);
  }
}

TEST_CASE("config validation names its constraints") {
  CHECK_THROWS(VaesConfig::make({}));
  CHECK_THROWS(VaesConfig::make({2, 2}));
  CHECK_THROWS(VaesConfig::make({2, 1}));
  CHECK(VaesConfig::make({2, 3, 5, 7, 11}).levels() == 5);
}

}  // TEST_SUITE

}  // namespace
