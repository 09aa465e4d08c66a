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

#ifndef ODOLAB_TESTS_TEST_UTIL_HPP
#define ODOLAB_TESTS_TEST_UTIL_HPP

#include <cstdint>
#include <random>

#include "odolab/bsgroup.hpp"

namespace odolab::testutil {

// Random free word over {a, t}. a-exponents in [-max_a, max_a], t-exponents
// in [-max_t, max_t], both nonzero.
inline bsgroup::Word random_word(std::mt19937_64& rng, int syllables,
                                 std::int64_t max_a = 20, std::int64_t max_t = 3) {
  std::uniform_int_distribution<int> coin(0, 1);
  std::uniform_int_distribution<std::int64_t> adist(1, max_a);
  std::uniform_int_distribution<std::int64_t> tdist(1, max_t);
  bsgroup::Word w;
  for (int i = 0; i < syllables; ++i) {
    std::int64_t sign = coin(rng) ? 1 : -1;
    if (coin(rng)) {
      w.push_back({'a', BigInt(sign * adist(rng))});
    } else {
      w.push_back({'t', BigInt(sign * tdist(rng))});
    }
  }
  return w;
}

}  // namespace odolab::testutil

#endif  // ODOLAB_TESTS_TEST_UTIL_HPP
