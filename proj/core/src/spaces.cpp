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

#include "odolab/spaces.hpp"

#include <cstring>
#include <mutex>
#include <stdexcept>
#include <vector>

#include <sodium.h>

namespace odolab::spaces {

namespace {

constexpr std::uint64_t kSubstreamFamily = ~std::uint64_t{0};

void ensure_sodium() {
  static std::once_flag flag;
  std::call_once(flag, [] {
    if (sodium_init() < 0) {
      throw std::runtime_error("libsodium initialization failed");
    }
  });
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

void store_le64(unsigned char* out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out[i] = static_cast<unsigned char>(v >> (8 * i));
}

}  // namespace

TapeSource::TapeSource(std::uint64_t seed) : seed_(seed) {
  ensure_sodium();
  store_le64(key_.data(), splitmix64(seed));
  store_le64(key_.data() + 8, splitmix64(seed ^ 0xa5a5a5a5a5a5a5a5ULL));
}

std::uint64_t TapeSource::raw(std::uint64_t family, std::int64_t index) const {
  unsigned char msg[16];
  store_le64(msg, family);
  store_le64(msg + 8, static_cast<std::uint64_t>(index));
  unsigned char out[crypto_shorthash_BYTES];
  crypto_shorthash(out, msg, sizeof msg, key_.data());
  std::uint64_t word = 0;
  for (int i = 0; i < 8; ++i) word |= std::uint64_t{out[i]} << (8 * i);
  return word;
}

std::int64_t TapeSource::digit(std::uint64_t family, std::int64_t index,
                               std::int64_t alphabet) const {
  if (family == kSubstreamFamily) {
    throw std::invalid_argument("TapeSource::digit: reserved family");
  }
  if (alphabet < 1) throw std::invalid_argument("TapeSource::digit: alphabet < 1");
  return static_cast<std::int64_t>(raw(family, index) %
                                   static_cast<std::uint64_t>(alphabet));
}

TapeSource TapeSource::substream(std::uint64_t tag) const {
  return TapeSource(raw(kSubstreamFamily, static_cast<std::int64_t>(tag)));
}

std::uint64_t TapeSource::raw_keyed(std::uint64_t family, const std::string& key,
                                    std::int64_t index) const {
  std::vector<unsigned char> msg(16 + key.size());
  store_le64(msg.data(), family);
  std::memcpy(msg.data() + 8, key.data(), key.size());
  store_le64(msg.data() + 8 + key.size(), static_cast<std::uint64_t>(index));
  unsigned char out[crypto_shorthash_BYTES];
  crypto_shorthash(out, msg.data(), msg.size(), key_.data());
  std::uint64_t word = 0;
  for (int i = 0; i < 8; ++i) word |= std::uint64_t{out[i]} << (8 * i);
  return word;
}

std::int64_t TapeSource::digit_keyed(std::uint64_t family, const std::string& key,
                                     std::int64_t index, std::int64_t alphabet) const {
  if (family == kSubstreamFamily) {
    throw std::invalid_argument("TapeSource::digit_keyed: reserved family");
  }
  if (alphabet < 1) throw std::invalid_argument("TapeSource::digit_keyed: alphabet < 1");
  return static_cast<std::int64_t>(raw_keyed(family, key, index) %
                                   static_cast<std::uint64_t>(alphabet));
}

void ProductCylinder::require(std::int64_t coordinate, std::int64_t alphabet,
                              std::int64_t digit) {
  if (alphabet < 1 || digit < 0 || digit >= alphabet) {
    throw std::invalid_argument("ProductCylinder::require: digit outside alphabet");
  }
  auto [it, inserted] = constraints_.insert({coordinate, {alphabet, digit}});
  if (!inserted) {
    if (it->second.alphabet != alphabet || it->second.digit != digit) {
      throw std::invalid_argument("ProductCylinder::require: conflicting constraint");
    }
  }
}

bool ProductCylinder::has(std::int64_t coordinate) const {
  return constraints_.count(coordinate) != 0;
}

Rational ProductCylinder::measure() const {
  Rational m = 1;
  for (const auto& [coord, c] : constraints_) {
    (void)coord;
    m /= c.alphabet;
  }
  return m;
}

bool ProductCylinder::matches(
    const std::function<std::int64_t(std::int64_t)>& point) const {
  for (const auto& [coord, c] : constraints_) {
    if (point(coord) != c.digit) return false;
  }
  return true;
}

std::optional<ProductCylinder> intersect(const ProductCylinder& c1,
                                         const ProductCylinder& c2) {
  ProductCylinder out = c1;
  for (const auto& [coord, c] : c2.constraints()) {
    try {
      out.require(coord, c.alphabet, c.digit);
    } catch (const std::invalid_argument&) {
      return std::nullopt;
    }
  }
  return out;
}

bool ProductCylinder::operator==(const ProductCylinder& o) const {
  if (constraints_.size() != o.constraints_.size()) return false;
  for (const auto& [coord, c] : constraints_) {
    auto it = o.constraints_.find(coord);
    if (it == o.constraints_.end()) return false;
    if (it->second.alphabet != c.alphabet || it->second.digit != c.digit) return false;
  }
  return true;
}

}  // namespace odolab::spaces
