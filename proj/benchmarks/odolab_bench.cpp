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

#include <benchmark/benchmark.h>

#include <random>

#include "odolab/actions.hpp"
#include "odolab/bsgroup.hpp"
#include "odolab/exactnum.hpp"
#include "odolab/spaces.hpp"
#include "odolab/stability.hpp"
#include "odolab/vaes.hpp"
#include "odolab/ycylinder.hpp"

namespace {

using namespace odolab;

void BM_TapeDigit(benchmark::State& state) {
  spaces::TapeSource tape(42);
  std::int64_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(tape.digit(1, i++, 6));
  }
}
BENCHMARK(BM_TapeDigit);

void BM_BrittonNormalize(benchmark::State& state) {
  bsgroup::BsPresentation pres = bsgroup::bs(4, 6);
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<std::int64_t> adist(-20, 20);
  std::uniform_int_distribution<std::int64_t> tdist(-3, 3);
  bsgroup::Word w;
  for (std::int64_t i = 0; i < state.range(0); ++i) {
    w.push_back({'a', BigInt(adist(rng))});
    w.push_back({'t', BigInt(tdist(rng))});
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(bsgroup::BrittonWord::normalize(pres, w));
  }
}
BENCHMARK(BM_BrittonNormalize)->Arg(8)->Arg(32)->Arg(128);

void BM_OdometerAdd(benchmark::State& state) {
  exactnum::AdicWindow w(6, 64, 0);
  BigInt k = 1;
  for (auto _ : state) {
    w = exactnum::odometer_add(w, k);
    benchmark::DoNotOptimize(w);
  }
}
BENCHMARK(BM_OdometerAdd);

void BM_Requantize(benchmark::State& state) {
  Rational x(12345, 7776);  // 6^5 denominator
  for (auto _ : state) {
    benchmark::DoNotOptimize(exactnum::requantize(x, 2, 3, 8));
  }
}
BENCHMARK(BM_Requantize);

// Dominant cost of the deep-level suites: one block read per level j.
void BM_BlockRead(benchmark::State& state) {
  const auto f = stability::BlockFamily::make(2, 3, 1);
  const int j = static_cast<int>(state.range(0));
  spaces::TapeSource master(7);
  std::uint64_t i = 0;
  for (auto _ : state) {
    auto sub = master.substream(i++);
    const actions::XPoint x(sub.substream(0));
    const auto y = actions::tape_y_point(2, 3, sub.substream(1));
    benchmark::DoNotOptimize(stability::pi_blocks(f, x, y, j));
  }
}
BENCHMARK(BM_BlockRead)->Arg(2)->Arg(5)->Arg(8);

void BM_CylinderTransport(benchmark::State& state) {
  ycylinder::YCylinder c(2, 3);
  c.require_neg(-1, 2);
  c.require_neg(-2, 1);
  c.require_pos(1, 1);
  c.restrict_window(1, 1, {BigInt(4)});
  for (auto _ : state) {
    benchmark::DoNotOptimize(ycylinder::transport_t(c));
  }
}
BENCHMARK(BM_CylinderTransport);

void BM_Sl3SampleDecompose(benchmark::State& state) {
  const std::int64_t p = state.range(0);
  const auto cfg = vaes::VaesConfig::make({p});
  spaces::TapeSource master(11);
  std::uint64_t i = 0;
  for (auto _ : state) {
    const auto m = vaes::sample_x(cfg, master.substream(i++)).coset[0];
    benchmark::DoNotOptimize(vaes::transvection_decompose(m, p));
  }
}
BENCHMARK(BM_Sl3SampleDecompose)->Arg(2)->Arg(5);

}  // namespace

BENCHMARK_MAIN();
