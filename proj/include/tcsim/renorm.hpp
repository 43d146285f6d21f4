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

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tcsim/dynamics.hpp"
#include "tcsim/lattice.hpp"
#include "tcsim/stats.hpp"
#include "tcsim/toom.hpp"

namespace tcsim {

/// Sites that, at some t in [0, horizon] of the independent flip process
/// pi, have fewer than K occupied neighbors in R. Exact: neighbor counts
/// are tracked through the flip log.
SiteSet dangerous_sites(const Trajectory& pi, const Region& region, int k, double horizon);

struct ContainmentCheck {
    bool precondition_held;  ///< D_K is L-thin in R
    bool containment_held;   ///< cumulative Delta ⊆ D_K
    bool defect() const { return precondition_held && !containment_held; }
};

/// "Only dangerous sites cause trouble": with K >= L + theta, if D_K is
/// L-thin then every discrepancy site is dangerous. Throws if K < L + theta.
ContainmentCheck check_danger_containment(const CoupledRun& run, const Region& region, int l, int k, int theta);

/// Runs the coupled construction from zeta' <= zeta'' on the same plan and
/// returns whether Delta(zeta'') ⊆ Delta(zeta'). Throws unless zeta' <= zeta''.
bool check_discrepancy_monotone(const Configuration& lower, const Configuration& upper,
                   const std::shared_ptr<const Region>& region, int theta, const MarkPlan& plan,
                   double horizon);

enum class Verdict { good, not_good, inconclusive };
std::string_view to_string(Verdict v);

struct GoodnessVerdict {
    double p_hat;
    Interval ci;
    Verdict verdict;
    std::size_t n_replicas;
    std::size_t thin_count;
};

struct GoodnessParams {
    int theta = 2;
    double lambda = 1.0;
    int l = 1;
    double delta = 0.1;
    /// Observation horizon; 0 means d^2.
    double horizon = 0.0;
    std::size_t n_replicas = 100;
    double gamma = 0.05;
};

/// Monte Carlo estimate of P(cumulative Delta is L-thin on R) from zeta.
/// Replica r uses mark seed derive_seed(seed, r). The verdict is `good`
/// when the Wilson lower bound reaches 1 - delta, `not_good` when the upper
/// bound is below it, `inconclusive` otherwise.
GoodnessVerdict estimate_goodness(const Configuration& zeta,
                                  const std::shared_ptr<const Region>& region,
                                  const GoodnessParams& params, Seed seed);

enum class ThinSetStrategy { empty, sparse_pruned, structured_faces };
std::string_view to_string(ThinSetStrategy s);
ThinSetStrategy parse_thin_set_strategy(std::string_view name);

struct AlmostProductSample {
    Configuration xi;
    SiteSet corrupted;
    Configuration config;
};

/// xi is an exact alpha-product draw; `corrupted` (S) is M-thin in R; config
/// equals xi off S and 0 on S.
///   empty             S = ∅.
///   sparse_pruned     each site joins S independently with probability
///                     `inclusion`, then members are removed greedily
///                     (highest index in the worst neighborhood first)
///                     until S is M-thin.
///   structured_faces  S starts as the occupied sites of xi on the face
///                     x_0 = 0 (so S depends on xi), pruned the same way.
AlmostProductSample sample_almost_product(const std::shared_ptr<const Region>& region, double alpha,
                                          int m, ThinSetStrategy strategy, Seed seed,
                                          double inclusion = 0.25);

/// Greedy pruning used by the samplers; exposed for tests.
void prune_to_thin(SiteSet& s, const Region& region, int m);

struct CoarseGrainResult {
    PCAField field;
    std::vector<std::vector<int>> block_index;
    std::vector<GoodnessVerdict> verdicts;
    std::size_t inconclusive;
};

/// Rescaling operator: block i of the slab maps to 1 iff the restriction of
/// config to H_i (free boundary) is judged good. Inconclusive blocks map
/// to 0. Block b uses seed derive_seed(seed, b).
CoarseGrainResult coarse_grain(const Configuration& config, const GoodnessParams& params, Seed seed);

/// CSV: block_i,p_hat,ci_lo,ci_hi,verdict,n
void write_goodness_csv(std::ostream& out, std::span<const GoodnessVerdict> verdicts);

struct OrderEventEstimate {
    double lambda;
    std::size_t order_length;
    std::size_t n_mc;
    /// Estimated P(the streams carry marks in the prescribed order).
    double factor;
    double stderr;
    /// (1 - e^{-lambda/k})^k: one mark per stream in its own 1/k-interval.
    double quarter_bound;
    /// beta^8 e^{-12} * factor (requires order_length = 4).
    double full_probability(double beta) const;
};

/// Rate-lambda U marks at the sites of a 2-cube on [0, 1], visited in the
/// order (1,1), (1,0), (0,1), (0,0) (truncated to `order_length` sites);
/// estimates P(t_1 < ... < t_k with a mark at site j at time t_j).
OrderEventEstimate order_event_prob(double lambda, std::size_t n_mc, Seed seed,
                                    std::size_t order_length = 4);

struct RescalingParams {
    int dim = 8;
    int theta = 2;
    int side = 8;
    double lambda = 2.0;
    int l = 2;
    double delta = 0.1;
    double eps = 0.1;
    int n_steps = 5;
    std::size_t goodness_replicas = 50;
    double gamma = 0.05;
    std::size_t realizations = 1;
    std::size_t pca_replicas = 50;
};

struct RescalingStep {
    int n;
    double coarse_density;
    double pca_density;
    std::size_t inconclusive_blocks;
    bool coarse_at_least_pca;
};

struct RescalingReport {
    RescalingParams params;
    std::vector<RescalingStep> steps;
};

/// Evolves the threshold contact process on the slab from all-ones, coarse
/// grains it at t = n d^2 and compares the good-block density with the
/// density of the PCA started from all-ones at noise eps. Diagnostic only.
RescalingReport compare_rescaling_with_pca(const RescalingParams& params, Seed seed);

} // namespace tcsim
