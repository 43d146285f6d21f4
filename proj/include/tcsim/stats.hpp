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

#pragma once

#include <cstddef>
#include <span>

namespace tcsim {

struct Interval {
    double lo;
    double hi;
    bool contains(double v) const { return lo <= v && v <= hi; }
};

/// Two-sided standard normal quantile z with P(|Z| <= z) = 1 - gamma.
double normal_two_sided_quantile(double gamma);

/// Wilson score interval for `successes` out of `n` at confidence 1 - gamma.
Interval wilson_interval(std::size_t successes, std::size_t n, double gamma);

/// Running mean and variance (Welford).
class MeanAccumulator {
public:
    void add(double x);
    std::size_t count() const { return n_; }
    double mean() const { return mean_; }
    /// Unbiased sample variance; 0 for fewer than two samples.
    double variance() const;
    double stderr_of_mean() const;

private:
    std::size_t n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

/// Standard error of a proportion estimate p_hat from n samples.
double binomial_stderr(double p_hat, std::size_t n);

} // namespace tcsim
