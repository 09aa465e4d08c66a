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

#include "odolab/stats.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include <boost/math/distributions/beta.hpp>
#include <boost/math/distributions/chi_squared.hpp>

namespace odolab::stats {

double chi_square_sf(double statistic, int dof) {
  if (dof <= 0) throw std::invalid_argument("chi_square_sf: dof <= 0");
  boost::math::chi_squared dist(dof);
  return boost::math::cdf(boost::math::complement(dist, statistic));
}

ChiSquare chi_square_gof(const std::vector<std::int64_t>& counts,
                         const std::vector<double>& probs) {
  if (counts.size() != probs.size() || counts.size() < 2) {
    throw std::invalid_argument("chi_square_gof: bad cell layout");
  }
  std::int64_t n = std::accumulate(counts.begin(), counts.end(), std::int64_t{0});
  if (n <= 0) throw std::invalid_argument("chi_square_gof: empty sample");

  double stat = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    double expected = static_cast<double>(n) * probs[i];
    if (expected <= 0.0) {
      throw std::invalid_argument("chi_square_gof: zero expected count");
    }
    double diff = static_cast<double>(counts[i]) - expected;
    stat += diff * diff / expected;
  }
  int dof = static_cast<int>(counts.size()) - 1;
  return ChiSquare{stat, chi_square_sf(stat, dof), dof};
}

Interval clopper_pearson(std::int64_t successes, std::int64_t trials,
                         double confidence) {
  if (trials <= 0 || successes < 0 || successes > trials) {
    throw std::invalid_argument("clopper_pearson: bad counts");
  }
  double alpha = 1.0 - confidence;
  double k = static_cast<double>(successes);
  double n = static_cast<double>(trials);
  Interval out;
  if (successes == 0) {
    out.low = 0.0;
  } else {
    boost::math::beta_distribution<double> lo(k, n - k + 1.0);
    out.low = boost::math::quantile(lo, alpha / 2.0);
  }
  if (successes == trials) {
    out.high = 1.0;
  } else {
    boost::math::beta_distribution<double> hi(k + 1.0, n - k);
    out.high = boost::math::quantile(hi, 1.0 - alpha / 2.0);
  }
  return out;
}

double sigma_band(double p, std::int64_t trials, double k_sigma) {
  if (trials <= 0) throw std::invalid_argument("sigma_band: trials <= 0");
  return k_sigma * std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
}

}  // namespace odolab::stats
