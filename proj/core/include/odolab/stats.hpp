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

#ifndef ODOLAB_STATS_HPP
#define ODOLAB_STATS_HPP

#include <cstdint>
#include <vector>

namespace odolab::stats {

struct ChiSquare {
  double statistic = 0.0;
  double p_value = 1.0;
  int dof = 0;
};

// Pearson goodness-of-fit of observed counts against cell probabilities.
// probs must sum to 1 and have the same length as counts.
ChiSquare chi_square_gof(const std::vector<std::int64_t>& counts,
                         const std::vector<double>& probs);

// Upper tail probability of the chi-squared distribution.
double chi_square_sf(double statistic, int dof);

struct Interval {
  double low = 0.0;
  double high = 1.0;
};

// Exact (Clopper-Pearson) two-sided confidence interval for a binomial
// proportion at the given confidence level.
Interval clopper_pearson(std::int64_t successes, std::int64_t trials,
                         double confidence);

// Half-width of the k-sigma normal band around probability p at n trials.
double sigma_band(double p, std::int64_t trials, double k_sigma);

}  // namespace odolab::stats

#endif  // ODOLAB_STATS_HPP
