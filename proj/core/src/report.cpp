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

#include "odolab/report.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <set>
#include <tuple>
#include <utility>

#include <json.hpp>

namespace odolab::report {

std::string format_double(double v) {
  std::array<char, 64> buf;
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

std::string format_rational(const Rational& v) {
  return v.str();
}

void Report::add(Record r) { records_.push_back(std::move(r)); }

void Report::merge(Report other) {
  for (auto& r : other.records_) records_.push_back(std::move(r));
}

void Report::finalize() {
  std::stable_sort(records_.begin(), records_.end(),
                   [](const Record& a, const Record& b) {
                     return std::tie(a.claim, a.seed_lo, a.params) <
                            std::tie(b.claim, b.seed_lo, b.params);
                   });
}

bool Report::all_pass() const {
  return std::all_of(records_.begin(), records_.end(),
                     [](const Record& r) { return r.pass; });
}

void Report::write_json_lines(std::ostream& out) const {
  for (const auto& r : records_) {
    nlohmann::ordered_json j;
    j["claim"] = r.claim;
    j["mode"] = r.mode;
    j["params"] = r.params;
    j["value"] = r.value;
    j["bound"] = r.bound;
    if (r.ci_low) {
      j["ci_low"] = *r.ci_low;
    } else {
      j["ci_low"] = nullptr;
    }
    if (r.ci_high) {
      j["ci_high"] = *r.ci_high;
    } else {
      j["ci_high"] = nullptr;
    }
    j["pass"] = r.pass;
    out << j.dump() << '\n';
  }
}

namespace {

// RFC 4180: quote fields containing separators or quotes, double the quotes.
std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (const char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

}  // namespace

void Report::write_csv(std::ostream& out) const {
  out << "claim,mode,params,value,bound,ci_low,ci_high,pass\n";
  for (const auto& r : records_) {
    out << csv_field(r.claim) << ',' << csv_field(r.mode) << ','
        << csv_field(r.params) << ',' << csv_field(r.value) << ','
        << csv_field(r.bound) << ','
        << (r.ci_low ? format_double(*r.ci_low) : std::string()) << ','
        << (r.ci_high ? format_double(*r.ci_high) : std::string()) << ','
        << (r.pass ? "true" : "false") << '\n';
  }
}

std::vector<std::string> bs_manifest(std::int64_t p) {
  std::vector<std::string> m = {
      "rel-power",    "rel-conj",     "rel-comm", "t-preserves",
      "claim-eq",     "britton-nf",   "thm-stable.phi",
      "lem-co-ind.i", "lem-co-ind.ii", "lem-ai",
  };
  if (p == 1) {
    m.insert(m.end(), {"lem-1-pi.i", "lem-1-pi.ii", "lem-1-ac.i",
                       "lem-1-ac.ii", "thm-p-1", "thm-h-stable.p1"});
  } else {
    m.insert(m.end(), {"lem-theta", "claim-a-zero", "lem-2-ai.i",
                       "lem-2-ai.ii", "lem-2-ac.i", "lem-2-ac.ii", "thm-p-2",
                       "thm-h-stable.p2"});
  }
  std::sort(m.begin(), m.end());
  return m;
}

std::vector<std::string> vaes_manifest() {
  return {"sl3-reduction", "thm-s-v.1", "thm-s-v.2", "thm-s-v.3"};
}

std::vector<std::string> missing_claims(
    const Report& rep, const std::vector<std::string>& manifest) {
  std::set<std::string> present;
  for (const auto& r : rep.records()) present.insert(r.claim);
  std::vector<std::string> missing;
  for (const auto& c : manifest) {
    if (present.count(c) == 0) missing.push_back(c);
  }
  std::sort(missing.begin(), missing.end());
  return missing;
}

}  // namespace odolab::report
