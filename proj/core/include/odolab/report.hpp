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

#ifndef ODOLAB_REPORT_HPP
#define ODOLAB_REPORT_HPP

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "odolab/numeric.hpp"

// Verification records. Every suite emits one record per checked statement;
// the writers are deterministic so that identical runs produce byte-identical
// report files.

namespace odolab::report {

// One check result. `claim` is the stable identifier of the statement,
// `mode` is "exact" or "mc". Exact records leave the interval fields unset.
// `params` is a canonical key=value list; sampled records carry their seed
// range there and order themselves by `seed_lo` within a claim.
struct Record {
  std::string claim;
  std::string mode;
  std::string params;
  std::string value;
  std::string bound;
  std::optional<double> ci_low;
  std::optional<double> ci_high;
  bool pass = false;
  std::uint64_t seed_lo = 0;
};

// Locale-independent shortest round-trip float formatting.
std::string format_double(double v);
// Lowest terms, "n/d"; plain "n" when the denominator is one.
std::string format_rational(const Rational& v);

class Report {
 public:
  void add(Record r);
  void merge(Report other);
  // Canonical order: claim id, then seed range, then params.
  void finalize();

  bool all_pass() const;
  bool empty() const { return records_.empty(); }
  const std::vector<Record>& records() const { return records_; }

  void write_json_lines(std::ostream& out) const;
  void write_csv(std::ostream& out) const;

 private:
  std::vector<Record> records_;
};

// Claim coverage. A run is complete only when every in-scope claim produced
// at least one record; missing_claims returns the gap, sorted.
std::vector<std::string> bs_manifest(std::int64_t p);
std::vector<std::string> vaes_manifest();
std::vector<std::string> missing_claims(const Report& rep,
                                        const std::vector<std::string>& manifest);

}  // namespace odolab::report

#endif  // ODOLAB_REPORT_HPP
