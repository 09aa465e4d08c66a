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

#include "odolab/runner.hpp"

#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "odolab/report.hpp"
#include "odolab/stability.hpp"

namespace runner = odolab::runner;
namespace report = odolab::report;
namespace stability = odolab::stability;
using odolab::Rational;

TEST_SUITE("runner") {

TEST_CASE("config validation names its constraints") {
  runner::RunConfig cfg;
  CHECK_NOTHROW(cfg.validate());

  runner::RunConfig bad = cfg;
  bad.mode = "bogus";
  CHECK_THROWS_WITH_AS(bad.validate(),
                       "config: mode must be one of bs, vaes, all",
                       std::invalid_argument);

  bad = cfg;
  bad.p = 2;
  bad.q = 4;
  CHECK_THROWS_WITH_AS(bad.validate(), "config: p and q must be coprime",
                       std::invalid_argument);

  bad = cfg;
  bad.p = 3;
  bad.q = 2;
  CHECK_THROWS_WITH_AS(bad.validate(), "config: requires 1 <= p < q",
                       std::invalid_argument);

  bad = cfg;
  bad.r = 0;
  CHECK_THROWS_WITH_AS(bad.validate(), "config: requires r >= 1",
                       std::invalid_argument);

  bad = cfg;
  bad.p = 1;
  bad.q = 2;
  bad.r = 1;
  CHECK_THROWS_WITH_AS(bad.validate(), "config: requires r*p >= 2",
                       std::invalid_argument);

  bad = cfg;
  bad.j_max = 17;
  CHECK_THROWS_WITH_AS(bad.validate(), "config: jmax must be in [0, 16]",
                       std::invalid_argument);

  bad = cfg;
  bad.samples = 0;
  CHECK_THROWS_WITH_AS(bad.validate(), "config: samples must be positive",
                       std::invalid_argument);

  bad = cfg;
  bad.mode = "vaes";
  bad.primes = {2, 2, 3};
  bad.n_max = 1;
  CHECK_THROWS_WITH_AS(bad.validate(),
                       "config: primes must be distinct and at least 2",
                       std::invalid_argument);
  bad.primes = {};
  CHECK_THROWS_WITH_AS(bad.validate(), "config: primes must be non-empty",
                       std::invalid_argument);
  bad.primes = {2, 3};
  bad.n_max = 2;
  CHECK_THROWS_WITH_AS(bad.validate(),
                       "config: nmax must index into the prime list",
                       std::invalid_argument);

  bad = cfg;
  bad.suites = {"nonesuch"};
  CHECK_THROWS_WITH_AS(bad.validate(), "config: unknown suite 'nonesuch'",
                       std::invalid_argument);
}

TEST_CASE("block width follows the translate length") {
  runner::RunConfig cfg;
  cfg.p = 2;
  cfg.q = 3;
  cfg.r = 1;
  CHECK(cfg.block_width() == 1);
  cfg.p = 1;
  cfg.q = 2;
  cfg.r = 2;
  CHECK(cfg.block_width() == 2);
  cfg.p = 3;
  cfg.q = 5;
  cfg.r = 2;
  CHECK(cfg.block_width() == 1);
}

TEST_CASE("config files round trip through overrides") {
  const char* path = "runner_cfg_test.cfg";
  {
    std::ofstream out(path);
    out << "# sample configuration\n"
        << "mode = all\n"
        << "p = 2\n"
        << "q = 3   # trailing comment\n"
        << "r = 1\n"
        << "jmax = 4\n"
        << "samples = 1234\n"
        << "seed = 99\n"
        << "primes = 2, 3, 5\n"
        << "nmax = 2\n"
        << "suite = carry, gap\n"
        << "out = results/run\n"
        << "\n";
  }
  const auto cfg = runner::config_from_file(path);
  CHECK(cfg.mode == "all");
  CHECK(cfg.p == 2);
  CHECK(cfg.q == 3);
  CHECK(cfg.r == 1);
  CHECK(cfg.j_max == 4);
  CHECK(cfg.samples == 1234);
  CHECK(cfg.seed_base == 99);
  CHECK(cfg.primes == std::vector<std::int64_t>{2, 3, 5});
  CHECK(cfg.n_max == 2);
  CHECK(cfg.suites == std::vector<std::string>{"carry", "gap"});
  CHECK(cfg.out == "results/run");
  std::remove(path);

  {
    std::ofstream out(path);
    out << "volume = 11\n";
  }
  CHECK_THROWS_WITH_AS(runner::config_from_file(path),
                       "config: unknown key 'volume'", std::invalid_argument);
  {
    std::ofstream out(path);
    out << "just a line\n";
  }
  CHECK_THROWS_WITH_AS(runner::config_from_file(path),
                       "config: line 1 is not `key = value`",
                       std::invalid_argument);
  std::remove(path);

  runner::RunConfig cfg2;
  CHECK_THROWS_WITH_AS(runner::apply_override(cfg2, "samples", "many"),
                       "config: invalid number 'many' for key 'samples'",
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(runner::apply_override(cfg2, "banana", "1"),
                       "config: unknown key 'banana'", std::invalid_argument);
}

TEST_CASE("suite rosters cover the claim manifests exactly") {
  runner::RunConfig cfg;
  cfg.mode = "bs";
  cfg.p = 1;
  cfg.q = 2;
  cfg.r = 2;
  CHECK(runner::manifest_for(cfg) == report::bs_manifest(1));
  cfg.p = 2;
  cfg.q = 3;
  cfg.r = 1;
  CHECK(runner::manifest_for(cfg) == report::bs_manifest(2));
  cfg.mode = "vaes";
  CHECK(runner::manifest_for(cfg) == report::vaes_manifest());
  cfg.mode = "all";
  auto joint = report::bs_manifest(2);
  for (const auto& c : report::vaes_manifest()) joint.push_back(c);
  std::sort(joint.begin(), joint.end());
  CHECK(runner::manifest_for(cfg) == joint);

  cfg.mode = "bs";
  cfg.suites = {"carry"};
  CHECK(runner::manifest_for(cfg) == std::vector<std::string>{"claim-eq"});
  cfg.suites = {"gap"};
  CHECK(runner::manifest_for(cfg) ==
        std::vector<std::string>{"lem-2-ac.ii", "thm-p-2"});
  cfg.p = 1;
  cfg.q = 2;
  cfg.r = 2;
  CHECK(runner::manifest_for(cfg) ==
        std::vector<std::string>{"lem-1-ac.ii", "thm-p-1"});

  // The theta suite only appears in the two-alphabet roster.
  const auto names1 = runner::suite_names(cfg);
  CHECK(std::find(names1.begin(), names1.end(), "theta") == names1.end());
  cfg.p = 2;
  cfg.q = 3;
  cfg.r = 1;
  const auto names2 = runner::suite_names(cfg);
  CHECK(std::find(names2.begin(), names2.end(), "theta") != names2.end());
}

TEST_CASE("relation identities hold digit-exactly on sampled points") {
  const auto rc1 = runner::relations_check(1, 2, 1, 5, 12, 41);
  CHECK(rc1.comparisons == 5 * (3 + 3 + 9));
  CHECK(rc1.power_mismatches == 0);
  CHECK(rc1.conj_mismatches == 0);
  CHECK(rc1.comm_mismatches == 0);
  const auto rc2 = runner::relations_check(2, 3, 1, 3, 12, 42);
  CHECK(rc2.power_mismatches == 0);
  CHECK(rc2.conj_mismatches == 0);
  CHECK(rc2.comm_mismatches == 0);
}

TEST_CASE("t transport preserves cylinder measure") {
  const auto ex = runner::t_transport_check(2, 3, 1, 10000, 0, 43);
  CHECK(ex.exhaustive);
  CHECK(ex.cylinders == 4 * 3 * 6);
  CHECK(ex.mismatches == 0);
  const auto rnd = runner::t_transport_check(3, 5, 3, 10, 25, 44);
  CHECK(!rnd.exhaustive);
  CHECK(rnd.cylinders == 25);
  CHECK(rnd.mismatches == 0);
}

TEST_CASE("random carry instances evaluate exactly") {
  const auto cc = runner::carry_check(2, 3, 50, 45);
  CHECK(cc.instances == 50);
  CHECK(cc.failures == 0);
  const auto cc2 = runner::carry_check(3, 5, 50, 46);
  CHECK(cc2.failures == 0);
}

TEST_CASE("relator padding never changes the normal form") {
  const auto bc = runner::britton_padding_check(2, 3, 50, 47);
  CHECK(bc.trials == 50);
  CHECK(bc.failures == 0);
  const auto bc2 = runner::britton_padding_check(2, 4, 50, 48);
  CHECK(bc2.failures == 0);
}

TEST_CASE("conjugation exponent thresholds verify in the group") {
  const auto cj = runner::conj_exponent_check(1, 2, 3, 2, 49);
  CHECK(cj.identities == 15 * 4);
  CHECK(cj.failures == 0);
  const auto cj2 = runner::conj_exponent_check(2, 1, 2, 2, 50);
  CHECK(cj2.failures == 0);
}

TEST_CASE("coset cylinder differences decay along deep translates") {
  const auto zd = runner::coinduced_decay_check(1, 2, 3, 6, 3, 200, 51);
  REQUIRE(zd.series.size() == 7);
  CHECK(zd.series[0] > 0.0);
  CHECK(zd.series[6] < zd.series[0]);
}

TEST_CASE("stabilization search succeeds on sampled points") {
  const auto th = runner::theta_check(2, 3, Rational(1), 10, 64, 8, 52);
  CHECK(th.seeds == 10);
  CHECK(th.found >= 9);
  const auto th2 = runner::theta_check(2, 3, Rational(2, 3), 10, 64, 8, 53);
  CHECK(th2.found >= 9);
}

TEST_CASE("tail set frequencies decay geometrically") {
  const auto tf = runner::tail_frequency_check(2, 3, 3, 2000, 54);
  REQUIRE(tf.freq.size() == 4);
  for (int k = 0; k <= 3; ++k) {
    const double p0 = std::pow(2.0 / 3.0, k + 1);
    CHECK(tf.freq[k] <= p0 + 0.1);
    CHECK(tf.freq[k] >= p0 - 0.1);
  }
  CHECK(tf.freq[3] < tf.freq[0]);
}

TEST_CASE("block reads are uniform and measures match the closed form") {
  const auto f12 = stability::BlockFamily::make(1, 2, 2);
  const auto un = runner::block_uniformity_check(f12, 1, 3000, 55);
  CHECK(un.pi_p_value > 0.01);
  CHECK(un.tau_p_value > 0.01);
  const auto pf = runner::p1_pushforward_check(f12, 1, 2, 30, 56);
  CHECK(pf.targets == 4);
  CHECK(pf.failures == 0);
  const auto f23 = stability::BlockFamily::make(2, 3, 1);
  const auto bm = runner::block_measure_check(f23, 2);
  CHECK(bm.levels == 3);
  CHECK(bm.failures == 0);
}

TEST_CASE("block reads commute with the shift away from the wrap") {
  const auto f12 = stability::BlockFamily::make(1, 2, 2);
  const auto ow = runner::pi_t_offwrap_check(f12, 3, 2000, 57);
  CHECK(ow.samples == 2000);
  CHECK(ow.off_wrap_samples > 1000);
  CHECK(ow.disagreements == 0);
}

TEST_CASE("transvection words hit sampled reduction targets") {
  const auto sl = runner::sl3_reduction_check(10, 58);
  CHECK(sl.targets == 20);
  CHECK(sl.failures == 0);
}

TEST_CASE("partitioned sampling merges deterministically") {
  const auto f23 = stability::BlockFamily::make(2, 3, 1);
  const auto ua = runner::u_commutation_partitioned(f23, 2, 'a', 500, 59);
  CHECK(ua.samples == 500);
  CHECK(ua.words_ok);
  CHECK(ua.disagreements == 0);
  const auto ub = runner::u_commutation_partitioned(f23, 2, 'a', 500, 59);
  CHECK(ub.samples == ua.samples);
  CHECK(ub.disagreements == ua.disagreements);

  const auto f12 = stability::BlockFamily::make(1, 2, 2);
  const auto d1 = runner::diff_series_partitioned(f12, 4, 1000, 60);
  const auto d2 = runner::diff_series_partitioned(f12, 4, 1000, 60);
  CHECK(d1.samples == 1000);
  CHECK(d1.t_hits == d2.t_hits);
  CHECK(d1.a_hits == d2.a_hits);
  CHECK(d1.t_hits[4] < d1.t_hits[0]);
}

namespace {

void check_full_run(runner::RunConfig cfg) {
  cfg.validate();
  report::Report rep;
  if (cfg.mode == "bs" || cfg.mode == "all") rep.merge(runner::run_bs(cfg));
  if (cfg.mode == "vaes" || cfg.mode == "all") rep.merge(runner::run_vaes(cfg));
  rep.finalize();
  CHECK(!rep.empty());
  for (const auto& r : rep.records()) {
    INFO(r.claim, " [", r.params, "] value=", r.value, " bound=", r.bound);
    CHECK(r.pass);
  }
  CHECK(report::missing_claims(rep, runner::manifest_for(cfg)).empty());
}

}  // namespace

TEST_CASE("a small two-alphabet run passes and covers its manifest") {
  runner::RunConfig cfg;
  cfg.mode = "bs";
  cfg.p = 1;
  cfg.q = 2;
  cfg.r = 2;
  cfg.j_max = 2;
  cfg.samples = 600;
  cfg.seed_base = 11;
  check_full_run(cfg);
}

TEST_CASE("a small three-alphabet run passes and covers its manifest") {
  runner::RunConfig cfg;
  cfg.mode = "bs";
  cfg.p = 2;
  cfg.q = 3;
  cfg.r = 1;
  cfg.j_max = 2;
  cfg.samples = 600;
  cfg.seed_base = 12;
  check_full_run(cfg);
}

TEST_CASE("a small product-group run passes and covers its manifest") {
  runner::RunConfig cfg;
  cfg.mode = "vaes";
  cfg.primes = {2, 3};
  cfg.n_max = 1;
  cfg.samples = 500;
  cfg.seed_base = 13;
  check_full_run(cfg);
}

TEST_CASE("identical configs produce byte-identical artifacts") {
  runner::RunConfig cfg;
  cfg.mode = "bs";
  cfg.p = 2;
  cfg.q = 3;
  cfg.r = 1;
  cfg.j_max = 2;
  cfg.samples = 400;
  cfg.seed_base = 21;
  cfg.suites = {"carry", "gap"};
  cfg.out = "runner_smoke_out";

  std::ostringstream log1, log2;
  CHECK(runner::run(cfg, log1) == 0);
  std::ifstream j1("runner_smoke_out.jsonl"), c1("runner_smoke_out.csv");
  std::stringstream jb1, cb1;
  jb1 << j1.rdbuf();
  cb1 << c1.rdbuf();
  REQUIRE(!jb1.str().empty());
  REQUIRE(!cb1.str().empty());
  CHECK(jb1.str().front() == '{');
  CHECK(cb1.str().rfind("claim,mode,params,", 0) == 0);

  CHECK(runner::run(cfg, log2) == 0);
  std::ifstream j2("runner_smoke_out.jsonl"), c2("runner_smoke_out.csv");
  std::stringstream jb2, cb2;
  jb2 << j2.rdbuf();
  cb2 << c2.rdbuf();
  CHECK(jb1.str() == jb2.str());
  CHECK(cb1.str() == cb2.str());
  CHECK(log1.str() == log2.str());
  std::remove("runner_smoke_out.jsonl");
  std::remove("runner_smoke_out.csv");
}

TEST_CASE("the runner reports missing claims when a suite is filtered out") {
  runner::RunConfig cfg;
  cfg.mode = "bs";
  cfg.p = 2;
  cfg.q = 3;
  cfg.r = 1;
  cfg.j_max = 1;
  cfg.samples = 200;
  cfg.seed_base = 22;
  cfg.suites = {"carry"};
  report::Report rep = runner::run_bs(cfg);
  rep.finalize();
  // Against the filtered manifest the run is complete; against the full
  // roster the uncovered claims surface.
  CHECK(report::missing_claims(rep, runner::manifest_for(cfg)).empty());
  runner::RunConfig full = cfg;
  full.suites.clear();
  CHECK(!report::missing_claims(rep, runner::manifest_for(full)).empty());
}

}  // TEST_SUITE
