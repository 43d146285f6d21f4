/*
   Copyright 2026 The tcsim Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include "tcsim/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/distributions/normal.hpp>

namespace tcsim {

double normal_two_sided_quantile(double gamma) {
    if (!(gamma > 0.0 && gamma < 1.0))
        throw std::invalid_argument("gamma must lie in (0, 1)");
    const boost::math::normal_distribution<double> standard;
    return boost::math::quantile(standard, 1.0 - gamma / 2.0);
}

Interval wilson_interval(std::size_t successes, std::size_t n, double gamma) {
    if (n == 0)
        throw std::invalid_argument("Wilson interval needs n >= 1");
    if (successes > n)
        throw std::invalid_argument("more successes than trials");
    const double z = normal_two_sided_quantile(gamma);
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(successes) / nn;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nn;
    const double centre = (p + z2 / (2.0 * nn)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
    return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

void MeanAccumulator::add(double x) {
    ++n_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(n_);
    m2_ += delta * (x - mean_);
}

double MeanAccumulator::variance() const {
    return n_ < 2 ? 0.0 : m2_ / static_cast<double>(n_ - 1);
}

double MeanAccumulator::stderr_of_mean() const {
    return n_ == 0 ? 0.0 : std::sqrt(variance() / static_cast<double>(n_));
}

double binomial_stderr(double p_hat, std::size_t n) {
    return n == 0 ? 0.0 : std::sqrt(p_hat * (1.0 - p_hat) / static_cast<double>(n));
}

} // namespace tcsim
