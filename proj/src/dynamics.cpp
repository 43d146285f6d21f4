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

#include "tcsim/dynamics.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <stdexcept>

namespace tcsim {

std::string_view to_string(RuleKind kind) {
    switch (kind) {
    case RuleKind::threshold_contact: return "threshold_contact";
    case RuleKind::independent: return "independent";
    case RuleKind::modified_contact: return "modified_contact";
    case RuleKind::voter: return "voter";
    case RuleKind::oriented: return "oriented";
    }
    return "?";
}

RuleKind parse_rule_kind(std::string_view name) {
    for (RuleKind k : {RuleKind::threshold_contact, RuleKind::independent,
                       RuleKind::modified_contact, RuleKind::voter, RuleKind::oriented})
        if (to_string(k) == name)
            return k;
    throw std::invalid_argument("unknown rule '" + std::string(name) + "'");
}

namespace {

int checked_theta(int theta) {
    if (theta < 1)
        throw std::invalid_argument("theta must be >= 1");
    return theta;
}

} // namespace

Rule Rule::threshold_contact(int theta) {
    return {RuleKind::threshold_contact, checked_theta(theta)};
}
Rule Rule::modified_contact(int theta) {
    return {RuleKind::modified_contact, checked_theta(theta)};
}
Rule Rule::voter(int theta) { return {RuleKind::voter, checked_theta(theta)}; }

Configuration::Configuration(std::shared_ptr<const Region> region, State occupied)
    : region_(std::move(region)), occupied_(std::move(occupied)) {
    if (!region_)
        throw std::invalid_argument("configuration needs a region");
    if (occupied_.size() != region_->geometry().site_count())
        throw std::invalid_argument("configuration size does not match geometry");
    for (std::size_t x = 0; x < occupied_.size(); ++x) {
        if (occupied_[x] > 1)
            throw std::invalid_argument("configuration values must be 0 or 1");
        if (occupied_[x] && !region_->contains(static_cast<SiteIndex>(x)))
            throw std::invalid_argument("configuration occupies a site outside its region");
    }
}

Configuration Configuration::constant(std::shared_ptr<const Region> region, bool occupied) {
    State bits(region->geometry().site_count(), 0);
    if (occupied)
        for (SiteIndex x : region->sites())
            bits[x] = 1;
    return Configuration(std::move(region), std::move(bits));
}

Configuration Configuration::product(std::shared_ptr<const Region> region, double p, Seed seed) {
    if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument("density must lie in [0, 1]");
    State bits(region->geometry().site_count(), 0);
    for (SiteIndex x : region->sites())
        bits[x] = uniform_at(seed, x, 0, 0) < p ? 1 : 0;
    return Configuration(std::move(region), std::move(bits));
}

std::size_t Configuration::occupied_count() const {
    return static_cast<std::size_t>(std::count(occupied_.begin(), occupied_.end(), std::uint8_t{1}));
}

double Configuration::density() const {
    return region_->size() == 0 ? 0.0
                                : static_cast<double>(occupied_count()) /
                                      static_cast<double>(region_->size());
}

Configuration Configuration::restricted_to(std::shared_ptr<const Region> sub) const {
    if (!(sub->geometry() == region_->geometry()) || !sub->members().subset_of(region_->members()))
        throw std::invalid_argument("restriction target is not a sub-region");
    State bits(occupied_.size(), 0);
    for (SiteIndex x : sub->sites())
        bits[x] = occupied_[x];
    return Configuration(std::move(sub), std::move(bits));
}

bool Configuration::leq(const Configuration& other) const {
    if (!(*region_ == other.region()))
        throw std::invalid_argument("comparing configurations on different regions");
    for (std::size_t x = 0; x < occupied_.size(); ++x)
        if (occupied_[x] > other.occupied_[x])
            return false;
    return true;
}

State Trajectory::state(double t) const {
    if (t < 0.0 || t > horizon)
        throw std::out_of_range("time outside [0, horizon]");
    if (!flips_recorded) {
        if (t == 0.0)
            return initial;
        if (t == horizon)
            return final_state;
        for (std::size_t k = 0; k < checkpoint_times.size(); ++k)
            if (checkpoint_times[k] == t)
                return checkpoints[k];
        throw std::logic_error("flip log not recorded; state(t) unavailable");
    }
    State s = initial;
    for (const Flip& f : flips) {
        if (f.time > t)
            break;
        s[f.site] = f.value;
    }
    return s;
}

Configuration Trajectory::configuration(double t) const { return Configuration(region, state(t)); }

namespace {

void check_inputs(const std::shared_ptr<const Region>& region, const Configuration& zeta,
                  const MarkPlan& plan, double horizon) {
    if (!region)
        throw std::invalid_argument("missing region");
    if (!(zeta.region().geometry() == region->geometry()) ||
        !region->members().subset_of(zeta.region().members()))
        throw std::invalid_argument("initial configuration is not defined on the region");
    if (!(plan.geometry == region->geometry()))
        throw std::invalid_argument("mark plan geometry differs from the region geometry");
    if (!(horizon >= 0.0) || horizon > plan.horizon)
        throw std::invalid_argument("horizon must lie in [0, plan horizon]");
}

/// Decides the flip at one mark against the current state.
class Stepper {
public:
    Stepper(const Region& region, const Rule& rule) : region_(region), rule_(rule) {
        if (rule.kind == RuleKind::oriented) {
            const Geometry& g = region.geometry();
            if (g.periodic_axes() != g.dim())
                throw std::invalid_argument("oriented rule needs every axis periodic");
            forward_.resize(g.site_count() * static_cast<std::size_t>(g.dim()));
            for (std::size_t x = 0; x < g.site_count(); ++x)
                for (int j = 0; j < g.dim(); ++j)
                    g.shift(static_cast<SiteIndex>(x), j, +1,
                            forward_[x * static_cast<std::size_t>(g.dim()) + j]);
        }
    }

    /// New value of x at this mark, given state s before the mark.
    std::uint8_t apply(const State& s, const Event& e) const {
        const SiteIndex x = e.site;
        const std::uint8_t cur = s[x];
        if (e.kind == MarkKind::down) {
            if (!cur)
                return 0;
            if (rule_.kind == RuleKind::voter)
                return count_in_state(s, x, 0) >= rule_.theta ? 0 : 1;
            return 0;
        }
        if (cur)
            return 1;
        switch (rule_.kind) {
        case RuleKind::independent: return 1;
        case RuleKind::threshold_contact:
        case RuleKind::voter: return count_in_state(s, x, 1) >= rule_.theta ? 1 : 0;
        case RuleKind::modified_contact: {
            std::uint32_t axes = 0;
            for (const Neighbor& n : region_.neighbors(x))
                if (s[n.site])
                    axes |= std::uint32_t{1} << n.axis;
            return std::popcount(axes) >= rule_.theta ? 1 : 0;
        }
        case RuleKind::oriented: {
            const auto dim = static_cast<std::size_t>(region_.geometry().dim());
            for (std::size_t j = 0; j < dim; ++j) {
                const SiteIndex y = forward_[x * dim + j];
                if (!region_.contains(y) || !s[y])
                    return 0;
            }
            return 1;
        }
        }
        return 0;
    }

private:
    int count_in_state(const State& s, SiteIndex x, std::uint8_t value) const {
        int k = 0;
        for (const Neighbor& n : region_.neighbors(x))
            k += s[n.site] == value ? 1 : 0;
        return k;
    }

    const Region& region_;
    Rule rule_;
    std::vector<SiteIndex> forward_;
};

class CheckpointRecorder {
public:
    CheckpointRecorder(const std::vector<double>& times, double horizon) : times_(times) {
        for (std::size_t k = 0; k < times.size(); ++k) {
            if (times[k] < 0.0 || times[k] > horizon)
                throw std::invalid_argument("checkpoint outside [0, horizon]");
            if (k > 0 && times[k] < times[k - 1])
                throw std::invalid_argument("checkpoints must be ascending");
        }
    }
    /// Snapshots every checkpoint strictly before `t`.
    void before(double t, const State& s, std::vector<State>& out) {
        while (next_ < times_.size() && times_[next_] < t) {
            out.push_back(s);
            ++next_;
        }
    }
    void finish(const State& s, std::vector<State>& out) {
        while (next_ < times_.size()) {
            out.push_back(s);
            ++next_;
        }
    }

private:
    const std::vector<double>& times_;
    std::size_t next_ = 0;
};

Trajectory start_trajectory(const std::shared_ptr<const Region>& region, const Configuration& zeta,
                            double horizon, const EvolveOptions& options) {
    Trajectory traj;
    traj.region = region;
    traj.initial = zeta.restricted_to(region).bits();
    traj.flips_recorded = options.record_flips;
    traj.horizon = horizon;
    traj.checkpoint_times = options.checkpoints;
    return traj;
}

} // namespace

Trajectory evolve(const std::shared_ptr<const Region>& region, const Rule& rule,
                  const Configuration& zeta, const MarkPlan& plan, double horizon,
                  const EvolveOptions& options) {
    check_inputs(region, zeta, plan, horizon);
    const Stepper stepper(*region, rule);
    Trajectory traj = start_trajectory(region, zeta, horizon, options);
    CheckpointRecorder recorder(options.checkpoints, horizon);
    State s = traj.initial;

    for_each_event(plan, region->sites(), horizon, [&](const Event& e) {
        recorder.before(e.time, s, traj.checkpoints);
        if (options.consumed)
            options.consumed->push_back(e);
        const std::uint8_t next = stepper.apply(s, e);
        if (next != s[e.site]) {
            s[e.site] = next;
            if (options.record_flips)
                traj.flips.push_back({e.time, e.site, next});
        }
    });
    recorder.finish(s, traj.checkpoints);
    traj.final_state = std::move(s);
    return traj;
}

SiteSet CoupledRun::delta_at(double t) const {
    SiteSet out(first_entry.size());
    for (const DeltaChange& c : delta_changes) {
        if (c.time > t)
            break;
        if (c.entered)
            out.insert(c.site);
        else
            out.erase(c.site);
    }
    return out;
}

CoupledRun evolve_coupled(const std::shared_ptr<const Region>& region, int theta,
                          const Configuration& zeta, const MarkPlan& plan, double horizon,
                          const EvolveOptions& options) {
    check_inputs(region, zeta, plan, horizon);
    const Stepper eta_step(*region, Rule::threshold_contact(theta));
    const Stepper pi_step(*region, Rule::independent());

    CoupledRun run;
    run.eta = start_trajectory(region, zeta, horizon, options);
    run.pi = start_trajectory(region, zeta, horizon, options);
    const std::size_t n = region->geometry().site_count();
    run.delta_cumulative = SiteSet(n);
    run.first_entry.assign(n, kNever);

    CheckpointRecorder eta_rec(options.checkpoints, horizon);
    CheckpointRecorder pi_rec(options.checkpoints, horizon);
    State eta = run.eta.initial;
    State pi = run.pi.initial;
    std::vector<std::uint8_t> in_delta(n, 0);

    for_each_event(plan, region->sites(), horizon, [&](const Event& e) {
        eta_rec.before(e.time, eta, run.eta.checkpoints);
        pi_rec.before(e.time, pi, run.pi.checkpoints);
        if (options.consumed)
            options.consumed->push_back(e);
        const SiteIndex x = e.site;
        const std::uint8_t eta_next = eta_step.apply(eta, e);
        const std::uint8_t pi_next = pi_step.apply(pi, e);
        if (eta_next != eta[x]) {
            eta[x] = eta_next;
            if (options.record_flips)
                run.eta.flips.push_back({e.time, x, eta_next});
        }
        if (pi_next != pi[x]) {
            pi[x] = pi_next;
            if (options.record_flips)
                run.pi.flips.push_back({e.time, x, pi_next});
        }
        if (eta[x] > pi[x])
            ++run.domination_violations;
        const std::uint8_t d = (eta[x] == 0 && pi[x] == 1) ? 1 : 0;
        if (d != in_delta[x]) {
            in_delta[x] = d;
            run.delta_changes.push_back({e.time, x, d == 1});
            if (d) {
                run.delta_cumulative.insert(x);
                if (run.first_entry[x] == kNever)
                    run.first_entry[x] = e.time;
            }
        }
    });
    eta_rec.finish(eta, run.eta.checkpoints);
    pi_rec.finish(pi, run.pi.checkpoints);
    run.eta.final_state = std::move(eta);
    run.pi.final_state = std::move(pi);
    return run;
}

Configuration bootstrap_closure(const Configuration& config, int theta) {
    const Region& region = config.region();
    const Geometry& g = region.geometry();
    if (region.size() != g.site_count())
        throw std::invalid_argument("bootstrap closure needs a configuration on the full geometry");
    if (theta < 0)
        throw std::invalid_argument("theta must be >= 0");

    State s = config.bits();
    std::vector<int> occupied_neighbors(g.site_count(), 0);
    for (SiteIndex x : region.sites())
        if (s[x])
            for (const Neighbor& n : region.neighbors(x))
                ++occupied_neighbors[n.site];

    std::deque<SiteIndex> frontier;
    for (SiteIndex x : region.sites())
        if (!s[x] && occupied_neighbors[x] >= theta)
            frontier.push_back(x);
    while (!frontier.empty()) {
        const SiteIndex x = frontier.front();
        frontier.pop_front();
        if (s[x])
            continue;
        s[x] = 1;
        for (const Neighbor& n : region.neighbors(x)) {
            if (++occupied_neighbors[n.site] >= theta && !s[n.site])
                frontier.push_back(n.site);
        }
    }
    return Configuration(config.region_ptr(), std::move(s));
}

double interface_density(const Region& region, const State& state) {
    std::size_t edges = 0;
    std::size_t disagree = 0;
    for (SiteIndex x : region.sites()) {
        for (const Neighbor& n : region.neighbors(x)) {
            if (n.site <= x)
                continue;
            ++edges;
            disagree += state[x] != state[n.site] ? 1 : 0;
        }
    }
    return edges == 0 ? 0.0 : static_cast<double>(disagree) / static_cast<double>(edges);
}

} // namespace tcsim
