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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "tcsim/dynamics.hpp"
#include "tcsim/stats.hpp"

using namespace tcsim;

namespace {

using RegionPtr = std::shared_ptr<const Region>;

// Reference simulator: sorts all marks, recomputes every predicate from
// coordinates with no shared code beyond the mark generator.
struct Reference {
    const Geometry& g;
    const SiteSet& members;

    std::vector<SiteIndex> nbrs(SiteIndex x) const {
        std::vector<SiteIndex> out;
        for (SiteIndex y = 0; y < g.site_count(); ++y) {
            if (!members.contains(y) || y == x)
                continue;
            const Coords a = g.coords(x), b = g.coords(y);
            int diff_axes = 0;
            bool unit = true;
            for (int j = 0; j < g.dim(); ++j) {
                if (a[j] == b[j])
                    continue;
                ++diff_axes;
                const int delta = (b[j] - a[j] + g.extent(j)) % g.extent(j);
                unit = unit && (g.is_periodic(j) ? (delta == 1 || delta == g.extent(j) - 1) : true);
            }
            if (diff_axes == 1 && unit)
                out.push_back(y);
        }
        return out;
    }

    int axis_of(SiteIndex x, SiteIndex y) const {
        const Coords a = g.coords(x), b = g.coords(y);
        for (int j = 0; j < g.dim(); ++j)
            if (a[j] != b[j])
                return j;
        return -1;
    }

    bool non_colinear_set_exists(SiteIndex x, const State& s, int theta) const {
        std::vector<SiteIndex> occ;
        for (SiteIndex y : nbrs(x))
            if (s[y])
                occ.push_back(y);
        const std::size_t k = occ.size();
        for (std::uint32_t mask = 0; mask < (1u << k); ++mask) {
            if (std::popcount(mask) != theta)
                continue;
            bool ok = true;
            for (std::size_t i = 0; i < k && ok; ++i)
                for (std::size_t j = i + 1; j < k && ok; ++j)
                    if ((mask >> i & 1) && (mask >> j & 1) && axis_of(x, occ[i]) == axis_of(x, occ[j]))
                        ok = false;
            if (ok)
                return true;
        }
        return false;
    }

    std::uint8_t apply(const Rule& rule, const State& s, const Event& e) const {
        const SiteIndex x = e.site;
        int ones = 0, zeros = 0;
        for (SiteIndex y : nbrs(x))
            (s[y] ? ones : zeros) += 1;
        if (e.kind == MarkKind::down) {
            if (rule.kind == RuleKind::voter)
                return s[x] && zeros < rule.theta ? 1 : 0;
            return 0;
        }
        if (s[x])
            return 1;
        switch (rule.kind) {
        case RuleKind::independent: return 1;
        case RuleKind::threshold_contact:
        case RuleKind::voter: return ones >= rule.theta;
        case RuleKind::modified_contact: return non_colinear_set_exists(x, s, rule.theta);
        case RuleKind::oriented: {
            Coords c = g.coords(x);
            for (int j = 0; j < g.dim(); ++j) {
                Coords f = c;
                f[j] = (c[j] + 1) % g.extent(j);
                const SiteIndex y = g.index(f);
                if (!members.contains(y) || !s[y])
                    return 0;
            }
            return 1;
        }
        }
        return 0;
    }

    std::vector<Flip> run(const Rule& rule, State s, const MarkPlan& plan, double horizon) const {
        std::vector<Event> events;
        for (SiteIndex x = 0; x < g.site_count(); ++x)
            if (members.contains(x))
                for (const Event& e : mark_stream(plan, x).events)
                    if (e.time <= horizon)
                        events.push_back(e);
        std::sort(events.begin(), events.end(), event_before);
        std::vector<Flip> flips;
        for (const Event& e : events) {
            const std::uint8_t v = apply(rule, s, e);
            if (v != s[e.site]) {
                s[e.site] = v;
                flips.push_back({e.time, e.site, v});
            }
        }
        return flips;
    }
};

Configuration random_config(const RegionPtr& region, double p, Seed seed) {
    return Configuration::product(region, p, seed);
}

// All distinct flip times of the trajectories, plus 0 and the horizon.
std::vector<double> probe_times(std::initializer_list<const Trajectory*> trajs) {
    std::set<double> t{0.0};
    for (const Trajectory* tr : trajs) {
        t.insert(tr->horizon);
        for (const Flip& f : tr->flips)
            t.insert(f.time);
    }
    return {t.begin(), t.end()};
}

bool pointwise_leq(const State& a, const State& b, const SiteSet* on = nullptr) {
    for (std::size_t x = 0; x < a.size(); ++x)
        if ((!on || on->contains(static_cast<SiteIndex>(x))) && a[x] > b[x])
            return false;
    return true;
}

} // namespace

TEST_SUITE("dynamics") {

TEST_CASE("rule construction and names") {
    CHECK_THROWS_AS(Rule::threshold_contact(0), std::invalid_argument);
    CHECK_THROWS_AS(Rule::voter(0), std::invalid_argument);
    CHECK_THROWS_AS(parse_rule_kind("majority"), std::invalid_argument);
    for (RuleKind k : {RuleKind::threshold_contact, RuleKind::independent, RuleKind::modified_contact,
                       RuleKind::voter, RuleKind::oriented})
        CHECK(parse_rule_kind(to_string(k)) == k);
    CHECK_FALSE(Rule::voter(2).attractive());
    CHECK(Rule::oriented().attractive());
}

TEST_CASE("configuration validation and helpers") {
    const Geometry g = Geometry::torus(2, 4);
    const auto full = Region::full(g);
    CHECK_THROWS_AS(Configuration(full, State(15, 0)), std::invalid_argument);
    CHECK_THROWS_AS(Configuration(full, State(16, 2)), std::invalid_argument);
    const std::vector<SiteIndex> few{0, 1, 2};
    const auto sub = Region::make(g, SiteSet::of(16, few));
    State off(16, 0);
    off[5] = 1;
    CHECK_THROWS_AS(Configuration(sub, off), std::invalid_argument);
    CHECK_THROWS_AS(Configuration::product(full, 1.5, 0), std::invalid_argument);

    const Configuration ones = Configuration::constant(full, true);
    CHECK(ones.occupied_count() == 16);
    CHECK(ones.density() == 1.0);
    const Configuration r = ones.restricted_to(sub);
    CHECK(r.occupied_count() == 3);
    CHECK(Configuration::constant(full, false).leq(ones));
    CHECK_FALSE(ones.leq(Configuration::constant(full, false)));
    CHECK_THROWS_AS(r.leq(ones), std::invalid_argument);
    CHECK_THROWS_AS(r.restricted_to(full), std::invalid_argument);
}

TEST_CASE("product configurations share uniforms across densities") {
    const auto region = Region::full(Geometry::torus(2, 32));
    const Configuration a = Configuration::product(region, 0.3, 17);
    const Configuration b = Configuration::product(region, 0.6, 17);
    CHECK(a.leq(b));
    CHECK(std::abs(b.density() - 0.6) < 4.0 * std::sqrt(0.24 / 1024));
}

TEST_CASE("every rule matches the reference simulator") {
    struct Case {
        Geometry g;
        Rule rule;
        double lambda;
    };
    const std::vector<Case> cases{
        {Geometry::torus(2, 6), Rule::threshold_contact(2), 2.0},
        {Geometry::hypercube(5), Rule::threshold_contact(1), 0.8},
        {Geometry::slab(2, 3, 4), Rule::threshold_contact(3), 3.5},
        {Geometry::torus(2, 6), Rule::independent(), 1.0},
        {Geometry::torus(3, 4), Rule::modified_contact(2), 2.5},
        {Geometry::slab(1, 4, 4), Rule::modified_contact(3), 4.0},
        {Geometry::torus(2, 6), Rule::voter(2), 1.0},
        {Geometry::hypercube(4), Rule::voter(3), 1.5},
        {Geometry::torus(1, 8), Rule::oriented(), 3.0},
        {Geometry::torus(2, 4), Rule::oriented(), 6.0},
    };
    for (std::size_t c = 0; c < cases.size(); ++c) {
        const Case& k = cases[c];
        const auto full = Region::full(k.g);
        SiteSet partial = SiteSet::full(k.g.site_count());
        for (SiteIndex x = 0; x < k.g.site_count(); x += 5)
            partial.erase(x);
        for (const auto& members : {SiteSet::full(k.g.site_count()), partial}) {
            const auto region = Region::make(k.g, members);
            for (Seed seed = 0; seed < 4; ++seed) {
                const MarkPlan plan(k.lambda, 6.0, derive_seed(c, seed), k.g);
                const Configuration zeta = random_config(full, 0.6, derive_seed(seed, 99));
                const Trajectory traj = evolve(region, k.rule, zeta, plan, 6.0);
                const Reference ref{k.g, members};
                CHECK(traj.flips == ref.run(k.rule, zeta.restricted_to(region).bits(), plan, 6.0));
            }
        }
    }
}

TEST_CASE("a lone particle under threshold two just dies") {
    const Geometry g = Geometry::torus(2, 8);
    const auto region = Region::full(g);
    State s(g.site_count(), 0);
    s[27] = 1;
    const MarkPlan plan(5.0, 40.0, 3, g);
    const Trajectory traj = evolve(region, Rule::threshold_contact(2), Configuration(region, s), plan, 40.0);
    CHECK(std::count(traj.final_state.begin(), traj.final_state.end(), 1) == 0);
    REQUIRE(traj.flips.size() == 1);
    CHECK(traj.flips[0].site == 27);
    CHECK(traj.flips[0].value == 0);
}

TEST_CASE("independent flips follow the two-state chain marginal") {
    const Geometry g = Geometry::hypercube(8);
    const auto region = Region::full(g);
    struct Case {
        double lambda, alpha;
    };
    for (const Case& c : {Case{1.0, 1.0}, Case{2.0, 0.3}}) {
        const std::vector<double> times{0.5, 1.0, 2.0};
        std::vector<std::size_t> hits(times.size(), 0);
        const std::size_t replicas = 40;
        for (std::size_t r = 0; r < replicas; ++r) {
            const MarkPlan plan(c.lambda, 2.0, derive_seed(8, r), g);
            EvolveOptions opt;
            opt.checkpoints = times;
            const Trajectory traj = evolve(region, Rule::independent(),
                                           Configuration::product(region, c.alpha, derive_seed(9, r)),
                                           plan, 2.0, opt);
            for (std::size_t k = 0; k < times.size(); ++k)
                hits[k] += static_cast<std::size_t>(
                    std::count(traj.checkpoints[k].begin(), traj.checkpoints[k].end(), 1));
        }
        const double n = static_cast<double>(replicas * g.site_count());
        const double eq = c.lambda / (1.0 + c.lambda);
        for (std::size_t k = 0; k < times.size(); ++k) {
            const double expect = eq + (c.alpha - eq) * std::exp(-(1.0 + c.lambda) * times[k]);
            const double se = std::sqrt(expect * (1.0 - expect) / n);
            CHECK(std::abs(hits[k] / n - expect) < 3.0 * se);
        }
    }
}

TEST_CASE("voter stripes wider than one are traps") {
    const Geometry g = Geometry::torus(2, 12);
    const auto region = Region::full(g);
    for (int width : {2, 3, 5}) {
        State s(g.site_count(), 0);
        for (SiteIndex x = 0; x < g.site_count(); ++x)
            s[x] = g.coord(x, 0) < width ? 1 : 0;
        const MarkPlan plan(1.0, 30.0, static_cast<Seed>(width), g);
        const Trajectory traj = evolve(region, Rule::voter(2), Configuration(region, s), plan, 30.0);
        CHECK(traj.flips.empty());
        CHECK(traj.final_state == s);
    }
    // Width one is not a trap: each stripe site has two disagreeing neighbors.
    State thin(g.site_count(), 0);
    for (SiteIndex x = 0; x < g.site_count(); ++x)
        thin[x] = g.coord(x, 0) == 0 ? 1 : 0;
    const Trajectory t = evolve(region, Rule::voter(2), Configuration(region, thin), MarkPlan(1.0, 30.0, 1, g), 30.0);
    CHECK_FALSE(t.flips.empty());
}

TEST_CASE("oriented rule in one dimension looks only forward") {
    const Geometry g = Geometry::torus(1, 16);
    const auto region = Region::full(g);
    const MarkPlan plan(4.0, 10.0, 12, g);
    std::vector<Event> consumed;
    EvolveOptions opt;
    opt.consumed = &consumed;
    const Configuration zeta = Configuration::product(region, 0.5, 4);
    const Trajectory traj = evolve(region, Rule::oriented(), zeta, plan, 10.0, opt);
    State s = zeta.bits();
    std::size_t checked = 0;
    std::size_t f = 0;
    for (const Event& e : consumed) {
        const SiteIndex fwd = (e.site + 1) % 16;
        const bool flips_up = f < traj.flips.size() && traj.flips[f].time == e.time &&
                              traj.flips[f].site == e.site && traj.flips[f].value == 1;
        if (e.kind == MarkKind::up && !s[e.site]) {
            CHECK(flips_up == (s[fwd] == 1));
            ++checked;
        }
        if (f < traj.flips.size() && traj.flips[f].time == e.time && traj.flips[f].site == e.site)
            s[e.site] = traj.flips[f++].value;
    }
    CHECK(checked > 10);
    CHECK_THROWS_AS(evolve(Region::full(Geometry::hypercube(2)), Rule::oriented(),
                           Configuration::constant(Region::full(Geometry::hypercube(2)), true),
                           MarkPlan(1.0, 1.0, 0, Geometry::hypercube(2)), 1.0),
                    std::invalid_argument);
}

TEST_CASE("trajectory queries") {
    const Geometry g = Geometry::torus(2, 8);
    const auto region = Region::full(g);
    const MarkPlan plan(2.0, 5.0, 31, g);
    EvolveOptions opt;
    opt.checkpoints = {0.0, 1.0, 2.5, 5.0};
    const Configuration zeta = Configuration::product(region, 0.5, 7);
    const Trajectory traj = evolve(region, Rule::threshold_contact(1), zeta, plan, 5.0, opt);
    CHECK(traj.state(0.0) == zeta.bits());
    CHECK(traj.state(5.0) == traj.final_state);
    for (std::size_t k = 0; k < opt.checkpoints.size(); ++k)
        CHECK(traj.checkpoints[k] == traj.state(opt.checkpoints[k]));
    State s = zeta.bits();
    for (const Flip& f : traj.flips) {
        CHECK(s[f.site] != f.value);
        s[f.site] = f.value;
        CHECK(traj.state(f.time)[f.site] == f.value);
    }
    CHECK_THROWS_AS(traj.state(5.5), std::out_of_range);

    EvolveOptions lean;
    lean.record_flips = false;
    lean.checkpoints = {2.5};
    const Trajectory quiet = evolve(region, Rule::threshold_contact(1), zeta, plan, 5.0, lean);
    CHECK(quiet.flips.empty());
    CHECK(quiet.final_state == traj.final_state);
    CHECK(quiet.state(2.5) == traj.state(2.5));
    CHECK_THROWS_AS(quiet.state(1.0), std::logic_error);

    EvolveOptions bad;
    bad.checkpoints = {2.0, 1.0};
    CHECK_THROWS_AS(evolve(region, Rule::independent(), zeta, plan, 5.0, bad), std::invalid_argument);
    CHECK_THROWS_AS(evolve(region, Rule::independent(), zeta, plan, 6.0), std::invalid_argument);
    CHECK_THROWS_AS(evolve(region, Rule::independent(), zeta, MarkPlan(1.0, 5.0, 0, Geometry::torus(2, 6)), 5.0),
                    std::invalid_argument);
    const auto other = Region::full(Geometry::torus(2, 6));
    CHECK_THROWS_AS(evolve(other, Rule::independent(), zeta, MarkPlan(1.0, 5.0, 0, other->geometry()), 5.0),
                    std::invalid_argument);
}

TEST_CASE("processes on one plan consume identical marks") {
    const Geometry g = Geometry::hypercube(6);
    const auto region = Region::full(g);
    const MarkPlan plan(1.5, 9.0, 5, g);
    std::vector<Event> a, b;
    EvolveOptions oa, ob;
    oa.consumed = &a;
    ob.consumed = &b;
    evolve(region, Rule::threshold_contact(2), Configuration::constant(region, true), plan, 9.0, oa);
    evolve(region, Rule::independent(), Configuration::constant(region, false), plan, 9.0, ob);
    CHECK(a == b);
    CHECK(a == merged_events(plan, *region));
}

TEST_CASE("coupled run: domination and the discrepancy characterization") {
    for (int d = 2; d <= 7; ++d) {
        const Geometry g = Geometry::hypercube(d);
        const auto region = Region::full(g);
        for (Seed seed = 0; seed < 5; ++seed) {
            const double lambda = 0.5 + 0.7 * static_cast<double>(seed);
            const double horizon = d * d;
            const MarkPlan plan(lambda, horizon, derive_seed(d, seed), g);
            const CoupledRun run = evolve_coupled(region, 2, Configuration::product(region, 0.7, seed), plan, horizon);
            CHECK(run.domination_violations == 0);
            SiteSet cumulative(g.site_count());
            for (double t : probe_times({&run.eta, &run.pi})) {
                const State eta = run.eta.state(t), pi = run.pi.state(t);
                CHECK(pointwise_leq(eta, pi));
                SiteSet delta(g.site_count());
                for (SiteIndex x = 0; x < g.site_count(); ++x)
                    if (!eta[x] && pi[x])
                        delta.insert(x);
                CHECK(run.delta_at(t) == delta);
                cumulative |= delta;
            }
            CHECK(run.delta_cumulative == cumulative);
            for (SiteIndex x = 0; x < g.site_count(); ++x)
                CHECK(cumulative.contains(x) == (run.first_entry[x] != kNever));
            // Each half of the coupling agrees with a standalone run.
            CHECK(run.eta.flips == evolve(region, Rule::threshold_contact(2), Configuration::product(region, 0.7, seed), plan, horizon).flips);
            CHECK(run.pi.flips == evolve(region, Rule::independent(), Configuration::product(region, 0.7, seed), plan, horizon).flips);
        }
    }
}

TEST_CASE("coupled run edge cases") {
    const Geometry g = Geometry::torus(2, 6);
    const auto region = Region::full(g);
    SUBCASE("no up marks, no discrepancy") {
        const CoupledRun run = evolve_coupled(region, 1, Configuration::product(region, 0.5, 1),
                                              MarkPlan(0.0, 10.0, 1, g), 10.0);
        CHECK(run.delta_cumulative.empty());
        CHECK(run.eta.flips == run.pi.flips);
    }
    SUBCASE("empty start: the first up mark opens a discrepancy") {
        const MarkPlan plan(1.0, 5.0, 2, g);
        const CoupledRun run = evolve_coupled(region, 2, Configuration::constant(region, false), plan, 5.0);
        const auto events = merged_events(plan, *region);
        const auto first_up = std::find_if(events.begin(), events.end(),
                                           [](const Event& e) { return e.kind == MarkKind::up; });
        REQUIRE(first_up != events.end());
        CHECK(run.first_entry[first_up->site] == first_up->time);
        CHECK(run.eta.flips.empty());
    }
    SUBCASE("all ones: an up mark at a vacant site with theta occupied neighbors hits both") {
        const MarkPlan plan(3.0, 5.0, 3, g);
        const CoupledRun run = evolve_coupled(region, 1, Configuration::constant(region, true), plan, 5.0);
        std::size_t joint = 0;
        for (const Flip& f : run.eta.flips)
            if (f.value == 1) {
                ++joint;
                CHECK(std::find(run.pi.flips.begin(), run.pi.flips.end(), f) != run.pi.flips.end());
            }
        CHECK(joint > 0);
    }
}

TEST_CASE("attractivity on shared marks") {
    struct Case {
        Geometry g;
        Rule rule;
        double lambda;
    };
    const std::vector<Case> cases{{Geometry::hypercube(6), Rule::threshold_contact(2), 2.0},
                                  {Geometry::torus(3, 4), Rule::modified_contact(2), 2.0},
                                  {Geometry::torus(2, 8), Rule::independent(), 1.0},
                                  {Geometry::torus(2, 8), Rule::oriented(), 5.0}};
    for (std::size_t c = 0; c < cases.size(); ++c) {
        const auto region = Region::full(cases[c].g);
        for (Seed seed = 0; seed < 10; ++seed) {
            const MarkPlan plan(cases[c].lambda, 8.0, derive_seed(c, seed), cases[c].g);
            const Configuration upper = Configuration::product(region, 0.7, seed);
            State lo = upper.bits();
            for (SiteIndex x = 0; x < lo.size(); ++x)
                if (uniform_at(seed, x, 5, 5) < 0.4)
                    lo[x] = 0;
            const Configuration lower(region, lo);
            const Trajectory a = evolve(region, cases[c].rule, lower, plan, 8.0);
            const Trajectory b = evolve(region, cases[c].rule, upper, plan, 8.0);
            for (double t : probe_times({&a, &b}))
                CHECK(pointwise_leq(a.state(t), b.state(t)));
        }
    }
}

TEST_CASE("smaller regions give smaller processes") {
    const Geometry g = Geometry::slab(2, 4, 6);
    const auto big = Region::full(g);
    for (Seed seed = 0; seed < 10; ++seed) {
        SiteSet members = SiteSet::full(g.site_count());
        for (SiteIndex x = 0; x < g.site_count(); ++x)
            if (uniform_at(seed, x, 1, 2) < 0.3)
                members.erase(x);
        const auto small = Region::make(g, members);
        const Configuration zeta = Configuration::product(big, 0.8, seed);
        const MarkPlan plan(2.5, 10.0, derive_seed(44, seed), g);
        for (const Rule& rule : {Rule::threshold_contact(2), Rule::modified_contact(2)}) {
            const Trajectory a = evolve(small, rule, zeta, plan, 10.0);
            const Trajectory b = evolve(big, rule, zeta, plan, 10.0);
            for (double t : probe_times({&a, &b}))
                CHECK(pointwise_leq(a.state(t), b.state(t), &members));
        }
    }
}

TEST_CASE("modified threshold theta dominates threshold 2 theta - 1") {
    for (int theta : {1, 2, 3}) {
        const Geometry g = Geometry::torus(3, 6);
        const auto region = Region::full(g);
        for (Seed seed = 0; seed < 5; ++seed) {
            const MarkPlan plan(3.0, 10.0, derive_seed(theta, seed), g);
            const Configuration zeta = Configuration::product(region, 0.6, seed);
            const Trajectory mod = evolve(region, Rule::modified_contact(theta), zeta, plan, 10.0);
            const Trajectory thr = evolve(region, Rule::threshold_contact(2 * theta - 1), zeta, plan, 10.0);
            for (double t : probe_times({&mod, &thr}))
                CHECK(pointwise_leq(thr.state(t), mod.state(t)));
        }
    }
}

TEST_CASE("bootstrap closure against a brute-force fixpoint on every 4x4 configuration") {
    const Geometry g = Geometry::torus(2, 4);
    const auto region = Region::full(g);
    std::vector<std::vector<SiteIndex>> nb(16);
    for (SiteIndex x = 0; x < 16; ++x)
        nb[x] = g.neighbors(x);
    auto brute = [&](std::uint32_t bits) {
        bool changed = true;
        while (changed) {
            changed = false;
            std::uint32_t next = bits;
            for (SiteIndex x = 0; x < 16; ++x) {
                int k = 0;
                for (SiteIndex y : nb[x])
                    k += bits >> y & 1;
                if (k >= 2)
                    next |= 1u << x;
            }
            changed = next != bits;
            bits = next;
        }
        return bits;
    };
    auto to_state = [](std::uint32_t bits) {
        State s(16);
        for (int x = 0; x < 16; ++x)
            s[x] = bits >> x & 1;
        return s;
    };
    std::size_t mismatches = 0;
    for (std::uint32_t bits = 0; bits < (1u << 16); ++bits) {
        const Configuration c(region, to_state(bits));
        const Configuration closed = bootstrap_closure(c, 2);
        mismatches += closed.bits() == to_state(brute(bits)) ? 0 : 1;
    }
    CHECK(mismatches == 0);
}

TEST_CASE("bootstrap closure properties") {
    const Geometry g = Geometry::torus(2, 10);
    const auto region = Region::full(g);
    CHECK(bootstrap_closure(Configuration::constant(region, false), 2).occupied_count() == 0);
    const Configuration c = Configuration::product(region, 0.2, 3);
    CHECK(bootstrap_closure(c, 5).bits() == c.bits());
    for (Seed seed = 0; seed < 20; ++seed) {
        const Configuration a = Configuration::product(region, 0.1, seed);
        const Configuration b = Configuration::product(region, 0.2, seed);
        const Configuration ca = bootstrap_closure(a, 2), cb = bootstrap_closure(b, 2);
        CHECK(a.leq(ca));
        CHECK(ca.leq(cb));
        CHECK(bootstrap_closure(ca, 2).bits() == ca.bits());
    }
    State diag(g.site_count(), 0);
    for (int i = 0; i < 10; ++i)
        diag[g.index(std::vector<int>{i, i})] = 1;
    CHECK(bootstrap_closure(Configuration(region, diag), 2).occupied_count() == 100);
    const std::vector<SiteIndex> few{0, 1};
    CHECK_THROWS_AS(bootstrap_closure(Configuration::constant(Region::make(g, SiteSet::of(100, few)), true), 2),
                    std::invalid_argument);
}

TEST_CASE("interface density") {
    const Geometry g = Geometry::torus(2, 8);
    const auto region = Region::full(g);
    CHECK(interface_density(*region, State(64, 1)) == 0.0);
    State checker(64);
    for (SiteIndex x = 0; x < 64; ++x)
        checker[x] = (g.coord(x, 0) + g.coord(x, 1)) % 2;
    CHECK(interface_density(*region, checker) == 1.0);
    State stripes(64);
    for (SiteIndex x = 0; x < 64; ++x)
        stripes[x] = g.coord(x, 0) < 4 ? 1 : 0;
    // 2 vertical interfaces of 8 edges each, out of 128 edges.
    CHECK(interface_density(*region, stripes) == doctest::Approx(16.0 / 128.0));
}

}
