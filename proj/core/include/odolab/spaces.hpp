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

#ifndef ODOLAB_SPACES_HPP
#define ODOLAB_SPACES_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>

#include "odolab/numeric.hpp"

// Lazily sampled product spaces. A point of an infinite digit product is a
// keyed PRF tape: digit (family, index) is recomputed on demand, so a point
// occupies O(1) memory and any two evaluations of the same coordinate agree.

namespace odolab::spaces {

// Deterministic digit tape keyed by a 64-bit seed (SipHash-2-4 under a
// seed-derived key). Distinct (family, index) pairs give independent
// uniform digits up to PRF quality; alphabet bias is < 2^-32 for the
// alphabet sizes used here.
class TapeSource {
 public:
  explicit TapeSource(std::uint64_t seed);

  std::uint64_t seed() const { return seed_; }

  // Raw 64-bit PRF word at (family, index).
  std::uint64_t raw(std::uint64_t family, std::int64_t index) const;

  // raw reduced into [0, alphabet).
  std::int64_t digit(std::uint64_t family, std::int64_t index,
                     std::int64_t alphabet) const;

  // Tape addressed by an arbitrary byte key within a family namespace, for
  // products indexed by structured coordinates (e.g. serialized cosets).
  std::uint64_t raw_keyed(std::uint64_t family, const std::string& key,
                          std::int64_t index) const;
  std::int64_t digit_keyed(std::uint64_t family, const std::string& key,
                           std::int64_t index, std::int64_t alphabet) const;

  // Independent source derived from this one. Family ~0 is reserved for
  // the derivation and must not be used as a digit family.
  TapeSource substream(std::uint64_t tag) const;

 private:
  std::uint64_t seed_;
  std::array<unsigned char, 16> key_;
};

// Finitely many single-digit constraints on a product of finite alphabets.
// Coordinate indices may be any int64 (negative positions are meaningful
// for two-sided products).
class ProductCylinder {
 public:
  struct Constraint {
    std::int64_t alphabet;
    std::int64_t digit;
  };

  void require(std::int64_t coordinate, std::int64_t alphabet, std::int64_t digit);
  bool has(std::int64_t coordinate) const;
  const std::map<std::int64_t, Constraint>& constraints() const { return constraints_; }

  // Product of alphabet^-1 over constrained coordinates.
  Rational measure() const;

  // Evaluates the point accessor on each constrained coordinate.
  bool matches(const std::function<std::int64_t(std::int64_t)>& point) const;

  bool operator==(const ProductCylinder& o) const;

 private:
  std::map<std::int64_t, Constraint> constraints_;
};

// Conjunction of two cylinders; nullopt when some coordinate is pinned to
// two different digits (the intersection is then empty).
std::optional<ProductCylinder> intersect(const ProductCylinder& c1,
                                         const ProductCylinder& c2);

}  // namespace odolab::spaces

#endif  // ODOLAB_SPACES_HPP
