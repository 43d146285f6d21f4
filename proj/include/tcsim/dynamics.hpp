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
#include <limits>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "tcsim/lattice.hpp"
#include "tcsim/marks.hpp"

namespace tcsim {

using State = std::vector<std::uint8_t>;

enum class RuleKind { threshold_contact, independent, modified_contact, voter, oriented };

std::string_view to_string(RuleKind kind);
RuleKind parse_rule_kind(std::string_view name);

/// Flip rule evaluated at each mark against the pre-mark state.
///
///   threshold_contact  U: >= theta occupied in N_{R,x}.       D: always.
///   independent        U: always.                             D: always.
///   modified_contact   U: occupied neighbors on >= theta distinct axes
///                         (no two colinear with x).           D: always.
///   voter              U: >= theta neighbors in state 1.
///                      D: >= theta neighbors in state 0.
///   oriented           U: x + e_j occupied for every axis j.  D: always.
struct Rule {
    RuleKind kind = RuleKind::threshold_contact;
    int theta = 1;

    static Rule threshold_contact(int theta);
    static Rule independent() { return {RuleKind::independent, 0}; }
    static Rule modified_contact(int theta);
    static Rule voter(int theta);
    static Rule oriented() { return {RuleKind::oriented, 0}; }

    /// True for the rules whose dynamics are monotone in the initial state.
    bool attractive() const { return kind != RuleKind::voter; }
};

/// Occupancy on a region. Stored densely over the geometry's index space;
/// entries outside the region are always 0.
class Configuration {
public:
    Configuration(std::shared_ptr<const Region> region, State occupied);

    static Configuration constant(std::shared_ptr<const Region> region, bool occupied);
    /// Product measure with density p: x is occupied iff
    /// uniform_at(seed, x, 0, 0) < p. Monotone in p for a fixed seed.
    static Configuration product(std::shared_ptr<const Region> region, double p, Seed seed);

    const Region& region() const { return *region_; }
    const std::shared_ptr<const Region>& region_ptr() const { return region_; }
    const State& bits() const { return occupied_; }
    bool at(SiteIndex x) const { return occupied_.at(x) != 0; }
    std::size_t occupied_count() const;
    double density() const;

    /// Restriction to a sub-region of the same geometry.
    Configuration restricted_to(std::shared_ptr<const Region> sub) const;

    /// Pointwise order on a common region.
    bool leq(const Configuration& other) const;

private:
    std::shared_ptr<const Region> region_;
    State occupied_;
};

struct Flip {
    double time;
    SiteIndex site;
    std::uint8_t value;

    friend bool operator==(const Flip&, const Flip&) = default;
};

struct EvolveOptions {
    /// Keep the flip log (needed for state(t) at arbitrary t).
    bool record_flips = true;
    /// Times (ascending, <= horizon) at which full snapshots are kept.
    std::vector<double> checkpoints;
    /// If set, every consumed mark is appended here.
    std::vector<Event>* consumed = nullptr;
};

/// Initial state plus flip log; state(t) is right-continuous.
class Trajectory {
public:
    std::shared_ptr<const Region> region;
    State initial;
    std::vector<Flip> flips;
    bool flips_recorded = true;
    State final_state;
    double horizon = 0.0;
    std::vector<double> checkpoint_times;
    std::vector<State> checkpoints;

    /// Replays the flip log up to and including time t. Without a flip log
    /// only t = 0, t = horizon and checkpoint times are available.
    State state(double t) const;
    Configuration configuration(double t) const;
};

/// Event-driven evolution of `rule` on R from zeta restricted to R, using
/// the marks of `plan` on (0, horizon]. zeta must be defined on a superset
/// of R in the same geometry.
Trajectory evolve(const std::shared_ptr<const Region>& region, const Rule& rule,
                  const Configuration& zeta, const MarkPlan& plan, double horizon,
                  const EvolveOptions& options = {});

/// One change of the discrepancy set Delta_t = {eta = 0, pi = 1}.
struct DeltaChange {
    double time;
    SiteIndex site;
    bool entered;
};

/// Threshold contact process eta and independent flip process pi driven
/// by the same marks.
struct CoupledRun {
    Trajectory eta;
    Trajectory pi;
    std::vector<DeltaChange> delta_changes;
    /// Union of Delta_t over [0, horizon].
    SiteSet delta_cumulative;
    /// First time each site entered Delta; +inf if it never did.
    std::vector<double> first_entry;
    /// Events after which eta(x) > pi(x) at the flipped site. Always 0 for a
    /// correct construction; kept as a self-check.
    std::size_t domination_violations = 0;

    SiteSet delta_at(double t) const;
};

CoupledRun evolve_coupled(const std::shared_ptr<const Region>& region, int theta,
                          const Configuration& zeta, const MarkPlan& plan, double horizon,
                          const EvolveOptions& options = {});

/// Least fixpoint above `config` of "occupy x when >= theta neighbors are
/// occupied" (the lambda = infinity, no-death limit). `config` must live
/// on the full geometry.
Configuration bootstrap_closure(const Configuration& config, int theta);

/// Fraction of nearest-neighbor pairs inside the region whose states differ.
double interface_density(const Region& region, const State& state);

inline constexpr double kNever = std::numeric_limits<double>::infinity();

} // namespace tcsim
