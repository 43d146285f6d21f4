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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tcsim/dynamics.hpp"
#include "tcsim/lattice.hpp"
#include "tcsim/rng.hpp"

namespace tcsim {

enum class InitialKind { all_ones, all_zeros, product, stripes, diagonal, explicit_config };

std::string_view to_string(InitialKind kind);
InitialKind parse_initial_kind(std::string_view name);

/// Initial law for experiments. `product` draws site x occupied iff its
/// replica uniform is below p, so runs at different p share uniforms.
/// `stripes` occupies sites whose axis-0 coordinate c has (c / 2) odd.
/// `diagonal` occupies sites whose coordinates are all equal.
struct InitialCondition {
    InitialKind kind = InitialKind::all_ones;
    double p = 1.0;
    std::optional<Configuration> config;

    static InitialCondition all_ones() { return {InitialKind::all_ones, 1.0, std::nullopt}; }
    static InitialCondition all_zeros() { return {InitialKind::all_zeros, 0.0, std::nullopt}; }
    static InitialCondition product(double p) { return {InitialKind::product, p, std::nullopt}; }
    static InitialCondition stripes() { return {InitialKind::stripes, 0.5, std::nullopt}; }
    static InitialCondition diagonal() { return {InitialKind::diagonal, 0.0, std::nullopt}; }
    static InitialCondition explicit_config(Configuration c) {
        return {InitialKind::explicit_config, 0.0, std::move(c)};
    }

    Configuration realize(const std::shared_ptr<const Region>& region, Seed replica_seed) const;
};

/// Per-replica seeds: replica r uses derive_seed(master, r) for its marks
/// and derive_seed(that, 1) for its initial configuration.
std::vector<Seed> replica_seeds(Seed master, std::size_t n);
Seed initial_seed(Seed replica_seed);

struct SeriesPoint {
    double t;
    double value;
    double stderr;
};

/// Estimated curve plus everything needed to regenerate it.
struct EstimateReport {
    std::string experiment;
    std::string geometry;
    Seed master_seed = 0;
    std::vector<Seed> replica_seeds;
    std::vector<SeriesPoint> series;
    /// Value at the last grid time, one per replica.
    std::vector<double> replica_final;
    double wall_clock_seconds = 0.0;
};

/// Evenly spaced grid 0, T/(points-1), ..., T.
std::vector<double> time_grid(double horizon, int points);

/// rho_hat(t): mean occupation over the region and replicas at each grid
/// time, with the standard error across replicas. If `flip_logs` is given
/// it receives each replica's flip log.
EstimateReport density_curve(const Geometry& geometry, const Rule& rule, double lambda,
                             const InitialCondition& initial, std::span<const double> grid,
                             std::size_t n_replicas, Seed seed,
                             std::vector<std::vector<Flip>>* flip_logs = nullptr);

/// Survival proxy for critical-point estimates: mean density at
/// T = t_factor * d^2 is at least tau.
struct SurvivalProtocol {
    double t_factor = 1.0;
    double tau = 0.1;
    std::size_t n_replicas = 4;
    double tolerance = 0.05;
    double lo = 0.0;
    double hi = 4.0;
    int max_steps = 64;
};

struct BisectionStep {
    double value;
    double density;
    double stderr;
    bool survives;
};

struct Bracket {
    double lo;
    double hi;
    double horizon;
    std::vector<BisectionStep> trace;
};

/// Bisection on lambda from all-ones. All points share replica seeds, and
/// U-mark sets are nested in lambda, so the proxy is monotone along the
/// trace. Throws if lo survives or hi dies.
Bracket estimate_lambda_c(const Geometry& geometry, const Rule& rule,
                          const SurvivalProtocol& protocol, Seed seed);

/// Bisection on the initial product density p at fixed lambda.
Bracket estimate_p_c(const Geometry& geometry, const Rule& rule, double lambda,
                     const SurvivalProtocol& protocol, Seed seed);

/// Mean density at the protocol horizon for one (lambda, initial) point.
BisectionStep survival_point(const Geometry& geometry, const Rule& rule, double lambda,
                             const InitialCondition& initial, const SurvivalProtocol& protocol,
                             Seed seed);

struct VoterReport {
    EstimateReport curve;
    /// Mean interface density over the last quarter of the grid.
    double plateau;
};

/// Interface density (fraction of disagreeing neighbor pairs) of the
/// threshold voter model over the grid.
VoterReport voter_coexistence(const Geometry& geometry, int theta, double lambda,
                              const InitialCondition& initial, std::span<const double> grid,
                              std::size_t n_replicas, Seed seed);

struct Defect {
    Seed seed;
    std::string details;
};

struct SuiteReport {
    std::string suite;
    std::size_t n_runs = 0;
    /// Runs where the hypothesis held (for containment: D_K is L-thin).
    std::size_t precondition_held = 0;
    /// Of those, runs where D_K was a proper subset of R.
    std::size_t nontrivial = 0;
    std::vector<Defect> defects;
};

/// Randomized dangerous-site containment checks: hypercubes d in [2, 10],
/// lambda in [0.5, 4], K = L + theta, horizon d^2.
SuiteReport containment_suite(std::size_t runs, Seed seed);

/// Randomized discrepancy-monotonicity checks on ordered pairs zeta' <= zeta''.
SuiteReport monotonicity_suite(std::size_t runs, Seed seed);

/// CSV: t,<value_name>,stderr
void write_series_csv(std::ostream& out, const EstimateReport& report, std::string_view value_name);

/// CSV: step,value,density,stderr,survives
void write_trace_csv(std::ostream& out, const Bracket& bracket);

/// CSV: replica,time,site,new_value
void write_flips_csv(std::ostream& out, std::span<const std::vector<Flip>> logs);

} // namespace tcsim
