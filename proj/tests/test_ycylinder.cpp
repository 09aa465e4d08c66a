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

#include "odolab/ycylinder.hpp"

#include <cstdint>
#include <random>
#include <vector>

#include <doctest.h>

#include "odolab/numeric.hpp"

namespace {

using odolab::BigInt;
using odolab::Rational;
using odolab::bi_pow;
using odolab::mod_floor;
using odolab::ycylinder::YCylinder;
using odolab::ycylinder::total_measure;
using odolab::ycylinder::transport_t;
using odolab::ycylinder::transport_t_inv;

// Reference model: a point whose digits vanish outside a finite range, with
// the window coordinate held as an exact non-negative integer. The two maps
// below are verbatim digit-level evaluations of the generator formulas, so
// they are an independent oracle for the symbolic transport.
struct TruncatedY {
  std::int64_t p;
  std::int64_t q;
  std::vector<std::int64_t> nd;  // nd[i] at position -(i+1)
  BigInt y0;
  std::vector<std::int64_t> pd;  // pd[i] at position i+1

  std::int64_t neg_at(std::int64_t position) const {
    std::size_t i = static_cast<std::size_t>(-position - 1);
    return i < nd.size() ? nd[i] : 0;
  }
  std::int64_t pos_at(std::int64_t position) const {
    std::size_t i = static_cast<std::size_t>(position - 1);
    return i < pd.size() ? pd[i] : 0;
  }
};

TruncatedY ref_t(const TruncatedY& y) {
  BigInt eta = mod_floor(y.y0, y.p);
  TruncatedY out = y;
  out.nd = std::vector<std::int64_t>(y.nd.begin() + (y.nd.empty() ? 0 : 1), y.nd.end());
  out.y0 = y.neg_at(-1) + y.q * ((y.y0 - eta) / y.p);
  out.pd.assign(1, static_cast<std::int64_t>(eta));
  out.pd.insert(out.pd.end(), y.pd.begin(), y.pd.end());
  return out;
}

TruncatedY ref_t_inv(const TruncatedY& y) {
  BigInt zeta = mod_floor(y.y0, y.q);
  TruncatedY out = y;
  out.nd.assign(1, static_cast<std::int64_t>(zeta));
  out.nd.insert(out.nd.end(), y.nd.begin(), y.nd.end());
  out.y0 = y.p * ((y.y0 - zeta) / y.q) + y.pos_at(1);
  out.pd = std::vector<std::int64_t>(y.pd.begin() + (y.pd.empty() ? 0 : 1), y.pd.end());
  return out;
}

bool member(const YCylinder& c, const TruncatedY& y) {
  return c.matches([&](std::int64_t n) { return y.neg_at(n); },
                   [&](const BigInt& m) { return mod_floor(y.y0, m); },
                   [&](std::int64_t m) { return y.pos_at(m); });
}

int pieces_containing(const std::vector<YCylinder>& pieces, const TruncatedY& y) {
  int hits = 0;
  for (const YCylinder& c : pieces) hits += member(c, y) ? 1 : 0;
  return hits;
}

// Enumerates all truncated points with the given band depths and window
// width and checks that the transported decomposition contains a point's
// image exactly when the point lies in the source cylinder, and then in
// exactly one piece.
void check_transport_pointwise(const YCylinder& c, int neg_depth, int window_width,
                               int pos_depth, bool forward) {
  const std::int64_t p = c.p(), q = c.q();
  auto pieces = forward ? transport_t(c) : transport_t_inv(c);
  CHECK(total_measure(pieces) == c.measure());

  std::int64_t neg_count = 1, pos_count = 1;
  for (int i = 0; i < neg_depth; ++i) neg_count *= q;
  for (int i = 0; i < pos_depth; ++i) pos_count *= p;
  BigInt window_count = bi_pow(p * q, window_width);

  for (std::int64_t ncode = 0; ncode < neg_count; ++ncode) {
    for (std::int64_t pcode = 0; pcode < pos_count; ++pcode) {
      for (BigInt w = 0; w < window_count; ++w) {
        TruncatedY y{p, q, {}, w, {}};
        std::int64_t nc = ncode;
        for (int i = 0; i < neg_depth; ++i) {
          y.nd.push_back(nc % q);
          nc /= q;
        }
        std::int64_t pc = pcode;
        for (int i = 0; i < pos_depth; ++i) {
          y.pd.push_back(pc % p);
          pc /= p;
        }
        TruncatedY image = forward ? ref_t(y) : ref_t_inv(y);
        CHECK(pieces_containing(pieces, image) == (member(c, y) ? 1 : 0));
      }
    }
  }
}

TEST_SUITE("ycylinder") {

TEST_CASE("measure combines bands and window residues") {
  YCylinder c(2, 3);
  CHECK(c.measure() == Rational(1));
  c.require_neg(-1, 2);
  c.require_neg(-3, 0);
  c.require_pos(2, 1);
  CHECK(c.measure() == Rational(1, 18));
  c.restrict_window(1, 1, {BigInt(4), BigInt(5)});
  CHECK(c.measure() == Rational(2, 108));
  CHECK(c.window_modulus() == 6);
}

TEST_CASE("constraint validation") {
  YCylinder c(2, 3);
  c.require_neg(-1, 1);
  CHECK_THROWS_AS(c.require_neg(-1, 2), std::invalid_argument);
  CHECK_THROWS_AS(c.require_neg(-1, 3), std::invalid_argument);
  CHECK_THROWS_AS(c.require_pos(1, 2), std::invalid_argument);
  CHECK_THROWS_AS(c.restrict_window(1, 0, {BigInt(2)}), std::invalid_argument);
  c.restrict_window(1, 0, {BigInt(1)});
  CHECK_THROWS_AS(c.restrict_window(0, 1, {BigInt(0)}), std::invalid_argument);
}

TEST_CASE("forward transport of a one-digit window class") {
  // p=2, q=3: digit at -1 fixed to 2, window in class 4 mod 6, digit at +1
  // fixed to 1. The image is a single cylinder whose window class is
  // 2 + 3*(4 - 0)/2 = 8 mod 9, with the consumed mod-2 residue reappearing
  // as the new digit at +1.
  YCylinder c(2, 3);
  c.require_neg(-1, 2);
  c.require_pos(1, 1);
  c.restrict_window(1, 1, {BigInt(4)});
  auto pieces = transport_t(c);
  REQUIRE(pieces.size() == 1);
  const YCylinder& im = pieces[0];
  CHECK(im.neg().empty());
  CHECK(im.alpha() == 0);
  CHECK(im.beta() == 2);
  CHECK(im.window_residues() == std::vector<BigInt>{BigInt(8)});
  CHECK(im.pos().at(1) == 0);
  CHECK(im.pos().at(2) == 1);
  CHECK(im.measure() == c.measure());
  CHECK(c.measure() == Rational(1, 36));
}

TEST_CASE("inverse transport of a one-digit window class") {
  YCylinder c(2, 3);
  c.require_neg(-1, 2);
  c.require_pos(1, 1);
  c.restrict_window(1, 1, {BigInt(4)});
  auto pieces = transport_t_inv(c);
  REQUIRE(pieces.size() == 1);
  const YCylinder& im = pieces[0];
  CHECK(im.neg().at(-1) == 1);  // 4 mod 3
  CHECK(im.neg().at(-2) == 2);
  CHECK(im.pos().empty());
  CHECK(im.alpha() == 2);
  CHECK(im.beta() == 0);
  CHECK(im.window_residues() == std::vector<BigInt>{BigInt(3)});  // 1 + 2*(4-1)/3
  CHECK(im.measure() == c.measure());
}

TEST_CASE("unconstrained consumed digit splits the image") {
  YCylinder c(2, 3);
  c.restrict_window(1, 0, {BigInt(0), BigInt(1)});
  auto pieces = transport_t(c);
  // 3 choices of the consumed digit at -1 times 2 residue groups mod 2.
  CHECK(pieces.size() == 6);
  CHECK(total_measure(pieces) == c.measure());
}

TEST_CASE("window level is lifted before an unreadable residue is consumed") {
  YCylinder c(2, 3);
  c.require_neg(-1, 0);
  c.restrict_window(0, 1, {BigInt(2)});
  auto pieces = transport_t(c);
  // Lift 2 mod 3 to {2, 5} mod 6, then two mod-2 groups.
  CHECK(pieces.size() == 2);
  CHECK(total_measure(pieces) == c.measure());
  for (const auto& piece : pieces) CHECK(piece.alpha() == 0);
}

TEST_CASE("p=1 forward transport is the right shift") {
  YCylinder c(1, 2);
  c.restrict_window(0, 1, {BigInt(1)});
  auto pieces = transport_t(c);
  REQUIRE(pieces.size() == 2);
  for (const auto& piece : pieces) {
    CHECK(piece.beta() == 2);
    CHECK(piece.pos().empty());
    REQUIRE(piece.window_residues().size() == 1);
    // Old digit 0 becomes digit 1 of the image window.
    CHECK(mod_floor(piece.window_residues()[0], 4) / 2 == 1);
  }
  CHECK(total_measure(pieces) == c.measure());
}

TEST_CASE("block cylinders transport to a single piece of equal measure") {
  // Full digit blocks at -N..-1 and 1..M with a one-digit window class:
  // the forward image never splits.
  const std::int64_t p = 2, q = 3;
  for (int N = 1; N <= 2; ++N) {
    for (int M = 1; M <= 2; ++M) {
      std::int64_t negs = 1, poss = 1;
      for (int i = 0; i < N; ++i) negs *= q;
      for (int i = 0; i < M; ++i) poss *= p;
      for (std::int64_t ncode = 0; ncode < negs; ++ncode) {
        for (std::int64_t pcode = 0; pcode < poss; ++pcode) {
          for (std::int64_t s = 0; s < p * q; ++s) {
            YCylinder c(p, q);
            std::int64_t nc = ncode;
            for (int i = 1; i <= N; ++i) {
              c.require_neg(-i, nc % q);
              nc /= q;
            }
            std::int64_t pc = pcode;
            for (int i = 1; i <= M; ++i) {
              c.require_pos(i, pc % p);
              pc /= p;
            }
            c.restrict_window(1, 1, {BigInt(s)});
            auto pieces = transport_t(c);
            REQUIRE(pieces.size() == 1);
            CHECK(pieces[0].measure() == c.measure());
            auto back = transport_t_inv(c);
            REQUIRE(back.size() == 1);
            CHECK(back[0].measure() == c.measure());
          }
        }
      }
    }
  }
}

TEST_CASE("pointwise consistency against the digit-level oracle") {
  SUBCASE("p=2 q=3 block cylinder") {
    YCylinder c(2, 3);
    c.require_neg(-1, 2);
    c.require_pos(1, 1);
    c.restrict_window(1, 1, {BigInt(4)});
    check_transport_pointwise(c, 2, 2, 2, true);
    check_transport_pointwise(c, 2, 2, 2, false);
  }
  SUBCASE("p=2 q=3 splitting cylinder") {
    YCylinder c(2, 3);
    c.restrict_window(0, 1, {BigInt(2), BigInt(0)});
    check_transport_pointwise(c, 2, 2, 2, true);
    check_transport_pointwise(c, 2, 2, 2, false);
  }
  SUBCASE("p=1 q=2 window only") {
    YCylinder c(1, 2);
    c.restrict_window(0, 2, {BigInt(3)});
    check_transport_pointwise(c, 3, 3, 0, true);
    check_transport_pointwise(c, 3, 3, 0, false);
  }
  SUBCASE("p=3 q=5 random cylinders") {
    std::mt19937_64 rng(20260814);
    for (int trial = 0; trial < 8; ++trial) {
      YCylinder c(3, 5);
      if (rng() % 2) c.require_neg(-1, static_cast<std::int64_t>(rng() % 5));
      if (rng() % 2) c.require_pos(1, static_cast<std::int64_t>(rng() % 3));
      int alpha = static_cast<int>(rng() % 2);
      int beta = static_cast<int>(rng() % 2);
      BigInt mod = bi_pow(3, alpha) * bi_pow(5, beta);
      std::vector<BigInt> residues{BigInt(static_cast<std::int64_t>(
          rng() % static_cast<std::uint64_t>(mod.convert_to<std::int64_t>())))};
      c.restrict_window(alpha, beta, residues);
      check_transport_pointwise(c, 1, 2, 1, true);
      check_transport_pointwise(c, 1, 2, 1, false);
    }
  }
}

TEST_CASE("round trip through both transports preserves total measure") {
  YCylinder c(2, 3);
  c.require_neg(-1, 1);
  c.restrict_window(1, 1, {BigInt(3), BigInt(5)});
  Rational m = c.measure();
  Rational total = 0;
  for (const YCylinder& fwd : transport_t(c))
    total += total_measure(transport_t_inv(fwd));
  CHECK(total == m);
}

}  // TEST_SUITE

}  // namespace
