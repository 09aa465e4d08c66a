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

#ifndef ODOLAB_RUNNER_HPP
#define ODOLAB_RUNNER_HPP

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "odolab/numeric.hpp"
#include "odolab/report.hpp"
#include "odolab/stability.hpp"

// Batch runner: validates a configuration, executes the selected suites
// deterministically, and emits machine-readable reports. Heavy sampled
// checks run over partitioned seed ranges; the merge order is the partition
// order, so scheduling never leaks into the output.

namespace odolab::runner {

struct RunConfig {
  std::string mode = "bs";  // bs | vaes | all
  std::int64_t p = 1;
  std::int64_t q = 2;
  std::int64_t r = 2;
  std::vector<std::int64_t> primes = {2, 3, 5, 7, 11};
  int n_max = 4;
  int j_max = 8;
  std::int64_t samples = 20000;
  std::uint64_t seed_base = 1;
  std::vector<std::string> suites;  // empty: every suite in scope
  std::string out;                  // path prefix for <out>.jsonl / <out>.csv

  // Least M with (p == 1 ? q : p*q)^M > r.
  int block_width() const;
  // Throws std::invalid_argument naming the violated constraint.
  void validate() const;
};

// Plain `key = value` lines, '#' comments. Unknown keys throw.
RunConfig config_from_file(const std::string& path);
void apply_override(RunConfig& cfg, const std::string& key,
                    const std::string& value);

// Suite roster for a config and the claims each suite owns. A suite filter
// narrows the coverage manifest to the selected suites.
std::vector<std::string> suite_names(const RunConfig& cfg);
std::vector<std::string> claims_for_suite(const RunConfig& cfg,
                                          const std::string& suite);
std::vector<std::string> manifest_for(const RunConfig& cfg);

// ---- Suite primitives ----
// Shared by the batch runner and the acceptance gate; each returns raw
// counts so callers choose their own pass thresholds.

// Defining relations on sampled Y points, digit for digit:
// a_{i+1}^p y = a_i^q y, t a_i t^{-1} y = a_{i+1} y, [a_i, a_j] y = y
// for i, j in [-span, span].
struct RelationCheck {
  std::int64_t comparisons = 0;
  std::int64_t power_mismatches = 0;
  std::int64_t conj_mismatches = 0;
  std::int64_t comm_mismatches = 0;
};
RelationCheck relations_check(std::int64_t p, std::int64_t q, int span,
                              int points, int digit_probes,
                              std::uint64_t seed);

// measure(tB) = measure(B) over cylinders fixing digits at -N..-1 and
// 1..M (N, M <= span) plus one window digit. Exhaustive when the family
// has at most exhaustive_cap members, else random_count sampled ones.
struct TransportCheck {
  std::int64_t cylinders = 0;
  bool exhaustive = false;
  std::int64_t mismatches = 0;
};
TransportCheck t_transport_check(std::int64_t p, std::int64_t q, int span,
                                 std::int64_t exhaustive_cap, int random_count,
                                 std::uint64_t seed);

// Random digit strings fed through requantize: the canonical expansion of
// q (q/p)^{-n-m} + sum z_l (q/p)^l must evaluate back to it exactly.
struct CarryCheck {
  std::int64_t instances = 0;
  std::int64_t failures = 0;
};
CarryCheck carry_check(std::int64_t p, std::int64_t q, int count,
                       std::uint64_t seed);

// Random relator insertions never change the normal form.
struct BrittonCheck {
  std::int64_t trials = 0;
  std::int64_t failures = 0;
};
BrittonCheck britton_padding_check(std::int64_t rp, std::int64_t rq,
                                   int trials, std::uint64_t seed);

// g a^{r p^{K+k} q^{L+l}} g^{-1} = a^{r p^{K'+k} q^{L'+l}} by normal forms,
// k, l in [0, span), over sampled conjugators g.
struct ConjCheck {
  std::int64_t identities = 0;
  std::int64_t failures = 0;
};
ConjCheck conj_exponent_check(std::int64_t r, std::int64_t p, std::int64_t q,
                              int span, std::uint64_t seed);

// Frequency of a^{r n_k (pq)^k} B != B membership on the co-induced factor,
// per k, with n_k chosen adversarially from a small candidate set and the
// result averaged over random cylinders on at most four cosets.
struct ZDecayCheck {
  std::vector<double> series;  // index k
  std::int64_t samples_per_k = 0;
};
ZDecayCheck coinduced_decay_check(std::int64_t r, std::int64_t p,
                                  std::int64_t q, int k_max, int cylinders,
                                  int samples, std::uint64_t seed);

// Fraction of seeds whose stabilization depth is certified within the cap.
struct ThetaCheck {
  int seeds = 0;
  int found = 0;
};
ThetaCheck theta_check(std::int64_t p, std::int64_t q, const Rational& s,
                       int seeds, int depth_cap, int probe,
                       std::uint64_t seed);

// Empirical tail-set frequencies, index k.
struct TailCheck {
  std::vector<double> freq;
  std::int64_t samples = 0;
};
TailCheck tail_frequency_check(std::int64_t p, std::int64_t q, int k_max,
                               std::int64_t samples, std::uint64_t seed);

// Chi-square p-values for the block value and window block at one level.
struct UniformityCheck {
  double pi_p_value = 0.0;
  double tau_p_value = 0.0;
  std::int64_t samples = 0;
};
UniformityCheck block_uniformity_check(const stability::BlockFamily& f, int j,
                                       std::int64_t samples,
                                       std::uint64_t seed);

// Exact push-forward of block vectors (single-alphabet case): every target
// of depth <= d_max must hit measure q^{-(d+1)M} with a clean decomposition.
struct PushforwardCheck {
  int targets = 0;
  int failures = 0;
};
PushforwardCheck p1_pushforward_check(const stability::BlockFamily& f,
                                      int d_max, int targets_per_depth,
                                      int member_samples, std::uint64_t seed);

// Exact block-vector measure (two-alphabet case): each level's cell pieces
// sum to base^{-m}.
struct BlockMeasureCheck {
  int levels = 0;
  int failures = 0;
};
BlockMeasureCheck block_measure_check(const stability::BlockFamily& f,
                                      int j_max);

// Block reads commute with the shift away from the odometer wrap.
struct OffWrapCheck {
  std::int64_t samples = 0;
  std::int64_t off_wrap_samples = 0;
  std::int64_t disagreements = 0;
};
OffWrapCheck pi_t_offwrap_check(const stability::BlockFamily& f, int j,
                                std::int64_t samples, std::uint64_t seed);

// Elementary-matrix words reach random determinant-one targets.
struct Sl3ReductionCheck {
  int targets = 0;
  int failures = 0;
};
Sl3ReductionCheck sl3_reduction_check(int targets_per_prime,
                                      std::uint64_t seed);

// Seed-partitioned parallel versions of the heavy sampled checks. Results
// equal the sequential sum of the per-partition calls.
stability::DiffSeries diff_series_partitioned(const stability::BlockFamily& f,
                                              int j_max, std::int64_t samples,
                                              std::uint64_t seed_base);
stability::CommutationReport u_commutation_partitioned(
    const stability::BlockFamily& f, int j, char gen, std::int64_t samples,
    std::uint64_t seed_base);

// ---- Orchestration ----

report::Report run_bs(const RunConfig& cfg);
report::Report run_vaes(const RunConfig& cfg);

// Executes the configured suites, enforces claim coverage, writes
// <out>.jsonl and <out>.csv when `out` is set, and logs one line per
// record. Returns the process exit status: zero only when every record
// passes and every in-scope claim is covered.
int run(const RunConfig& cfg, std::ostream& log);

}  // namespace odolab::runner

#endif  // ODOLAB_RUNNER_HPP
