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

#include "tcsim/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "tcsim/io.hpp"
#include "tcsim/parallel.hpp"
#include "tcsim/renorm.hpp"
#include "tcsim/stats.hpp"

namespace tcsim {

std::string_view to_string(InitialKind kind) {
    switch (kind) {
    case InitialKind::all_ones: return "all_ones";
    case InitialKind::all_zeros: return "all_zeros";
    case InitialKind::product: return "product";
    case InitialKind::stripes: return "stripes";
    case InitialKind::diagonal: return "diagonal";
    case InitialKind::explicit_config: return "explicit";
    }
    return "?";
}

InitialKind parse_initial_kind(std::string_view name) {
    for (InitialKind k : {InitialKind::all_ones, InitialKind::all_zeros, InitialKind::product,
                          InitialKind::stripes, InitialKind::diagonal, InitialKind::explicit_config})
        if (to_string(k) == name)
            return k;
    throw std::invalid_argument("unknown initial condition '" + std::string(name) + "'");
}

Configuration InitialCondition::realize(const std::shared_ptr<const Region>& region,
                                        Seed replica_seed) const {
    switch (kind) {
    case InitialKind::all_ones: return Configuration::constant(region, true);
    case InitialKind::all_zeros: return Configuration::constant(region, false);
    case InitialKind::product: return Configuration::product(region, p, initial_seed(replica_seed));
    case InitialKind::stripes: {
        State bits(region->geometry().site_count(), 0);
        for (SiteIndex x : region->sites())
            bits[x] = (region->geometry().coord(x, 0) / 2) % 2 == 1 ? 1 : 0;
        return Configuration(region, std::move(bits));
    }
    case InitialKind::diagonal: {
        const Geometry& g = region->geometry();
        State bits(g.site_count(), 0);
        for (SiteIndex x : region->sites()) {
            bool on = true;
            for (int j = 1; j < g.dim() && on; ++j)
                on = g.coord(x, j) == g.coord(x, 0);
            bits[x] = on ? 1 : 0;
        }
        return Configuration(region, std::move(bits));
    }
    case InitialKind::explicit_config:
        if (!config)
            throw std::invalid_argument("explicit initial condition without a configuration");
        if (!(config->region().geometry() == region->geometry()) ||
            !region->members().subset_of(config->region().members()))
            throw std::invalid_argument("explicit initial configuration has the wrong domain");
        return config->restricted_to(region);
    }
    throw std::logic_error("unreachable");
}

std::vector<Seed> replica_seeds(Seed master, std::size_t n) {
    std::vector<Seed> out(n);
    for (std::size_t r = 0; r < n; ++r)
        out[r] = derive_seed(master, r);
    return out;
}

Seed initial_seed(Seed replica_seed) { return derive_seed(replica_seed, 1); }

std::vector<double> time_grid(double horizon, int points) {
    if (points < 2 || !(horizon > 0.0))
        throw std::invalid_argument("time grid needs >= 2 points and a positive horizon");
    std::vector<double> grid(static_cast<std::size_t>(points));
    for (int k = 0; k < points; ++k)
        grid[k] = horizon * k / (points - 1);
    grid.back() = horizon;
    return grid;
}

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void check_grid(std::span<const double> grid) {
    if (grid.empty())
        throw std::invalid_argument("time grid is empty");
    if (!std::is_sorted(grid.begin(), grid.end()) || grid.front() < 0.0)
        throw std::invalid_argument("time grid must be ascending and non-negative");
}

} // namespace

EstimateReport density_curve(const Geometry& geometry, const Rule& rule, double lambda,
                             const InitialCondition& initial, std::span<const double> grid,
                             std::size_t n_replicas, Seed seed,
                             std::vector<std::vector<Flip>>* flip_logs) {
    const auto start = std::chrono::steady_clock::now();
    check_grid(grid);
    if (n_replicas == 0)
        throw std::invalid_argument("need at least one replica");
    const auto region = Region::full(geometry);
    const double horizon = std::max(grid.back(), std::nextafter(0.0, 1.0));

    EstimateReport report;
    report.experiment = "density_curve";
    report.geometry = geometry.to_spec();
    report.master_seed = seed;
    report.replica_seeds = replica_seeds(seed, n_replicas);
    const double sites = static_cast<double>(region->size());

    std::vector<std::vector<double>> densities(n_replicas);
    if (flip_logs)
        flip_logs->assign(n_replicas, {});
    parallel_for(n_replicas, [&](std::size_t r) {
        const Seed rs = report.replica_seeds[r];
        const MarkPlan plan(lambda, horizon, rs, geometry);
        EvolveOptions options;
        options.record_flips = flip_logs != nullptr;
        options.checkpoints.assign(grid.begin(), grid.end());
        Trajectory traj = evolve(region, rule, initial.realize(region, rs), plan, horizon, options);
        for (const State& s : traj.checkpoints)
            densities[r].push_back(
                static_cast<double>(std::count(s.begin(), s.end(), std::uint8_t{1})) / sites);
        if (flip_logs)
            (*flip_logs)[r] = std::move(traj.flips);
    });

    for (std::size_t k = 0; k < grid.size(); ++k) {
        MeanAccumulator acc;
        for (const auto& d : densities)
            acc.add(d[k]);
        report.series.push_back({grid[k], acc.mean(), acc.stderr_of_mean()});
    }
    for (const auto& d : densities)
        report.replica_final.push_back(d.back());
    report.wall_clock_seconds = seconds_since(start);
    return report;
}

BisectionStep survival_point(const Geometry& geometry, const Rule& rule, double lambda,
                             const InitialCondition& initial, const SurvivalProtocol& protocol,
                             Seed seed) {
    if (!(protocol.tau > 0.0 && protocol.tau < 1.0))
        throw std::invalid_argument("tau must lie in (0, 1)");
    if (protocol.n_replicas == 0 || !(protocol.t_factor > 0.0))
        throw std::invalid_argument("protocol needs replicas and a positive time factor");
    const auto region = Region::full(geometry);
    const double horizon = protocol.t_factor * geometry.dim() * geometry.dim();
    const std::vector<Seed> seeds = replica_seeds(seed, protocol.n_replicas);
    std::vector<double> density(protocol.n_replicas);
    parallel_for(protocol.n_replicas, [&](std::size_t r) {
        const MarkPlan plan(lambda, horizon, seeds[r], geometry);
        EvolveOptions options;
        options.record_flips = false;
        const Trajectory traj = evolve(region, rule, initial.realize(region, seeds[r]), plan, horizon,
                                       options);
        density[r] = Configuration(region, traj.final_state).density();
    });
    MeanAccumulator acc;
    for (double d : density)
        acc.add(d);
    return {0.0, acc.mean(), acc.stderr_of_mean(), acc.mean() >= protocol.tau};
}

namespace {

template <class Probe>
Bracket bisect(const SurvivalProtocol& protocol, double horizon, Probe&& probe) {
    if (!(protocol.tolerance > 0.0))
        throw std::invalid_argument("bisection tolerance must be > 0");
    if (!(protocol.lo < protocol.hi))
        throw std::invalid_argument("bisection needs lo < hi");
    Bracket bracket{protocol.lo, protocol.hi, horizon, {}};
    BisectionStep lo = probe(protocol.lo);
    BisectionStep hi = probe(protocol.hi);
    bracket.trace.push_back(lo);
    bracket.trace.push_back(hi);
    if (lo.survives || !hi.survives)
        throw std::invalid_argument("bisection endpoints do not straddle the survival proxy");
    for (int step = 0; step < protocol.max_steps && bracket.hi - bracket.lo > protocol.tolerance;
         ++step) {
        const double mid = 0.5 * (bracket.lo + bracket.hi);
        const BisectionStep s = probe(mid);
        bracket.trace.push_back(s);
        (s.survives ? bracket.hi : bracket.lo) = mid;
    }
    return bracket;
}

} // namespace

Bracket estimate_lambda_c(const Geometry& geometry, const Rule& rule,
                          const SurvivalProtocol& protocol, Seed seed) {
    const double horizon = protocol.t_factor * geometry.dim() * geometry.dim();
    return bisect(protocol, horizon, [&](double lambda) {
        BisectionStep s =
            survival_point(geometry, rule, lambda, InitialCondition::all_ones(), protocol, seed);
        s.value = lambda;
        return s;
    });
}

Bracket estimate_p_c(const Geometry& geometry, const Rule& rule, double lambda,
                     const SurvivalProtocol& protocol, Seed seed) {
    if (protocol.lo < 0.0 || protocol.hi > 1.0)
        throw std::invalid_argument("density bracket must lie in [0, 1]");
    const double horizon = protocol.t_factor * geometry.dim() * geometry.dim();
    return bisect(protocol, horizon, [&](double p) {
        BisectionStep s =
            survival_point(geometry, rule, lambda, InitialCondition::product(p), protocol, seed);
        s.value = p;
        return s;
    });
}

VoterReport voter_coexistence(const Geometry& geometry, int theta, double lambda,
                              const InitialCondition& initial, std::span<const double> grid,
                              std::size_t n_replicas, Seed seed) {
    const auto start = std::chrono::steady_clock::now();
    check_grid(grid);
    if (n_replicas == 0)
        throw std::invalid_argument("need at least one replica");
    const auto region = Region::full(geometry);
    const double horizon = std::max(grid.back(), std::nextafter(0.0, 1.0));
    const Rule rule = Rule::voter(theta);

    VoterReport out;
    EstimateReport& report = out.curve;
    report.experiment = "voter_coexistence";
    report.geometry = geometry.to_spec();
    report.master_seed = seed;
    report.replica_seeds = replica_seeds(seed, n_replicas);

    std::vector<std::vector<double>> interface(n_replicas);
    parallel_for(n_replicas, [&](std::size_t r) {
        const Seed rs = report.replica_seeds[r];
        const MarkPlan plan(lambda, horizon, rs, geometry);
        EvolveOptions options;
        options.record_flips = false;
        options.checkpoints.assign(grid.begin(), grid.end());
        const Trajectory traj = evolve(region, rule, initial.realize(region, rs), plan, horizon, options);
        for (const State& s : traj.checkpoints)
            interface[r].push_back(interface_density(*region, s));
    });

    for (std::size_t k = 0; k < grid.size(); ++k) {
        MeanAccumulator acc;
        for (const auto& v : interface)
            acc.add(v[k]);
        report.series.push_back({grid[k], acc.mean(), acc.stderr_of_mean()});
    }
    for (const auto& v : interface)
        report.replica_final.push_back(v.back());

    const std::size_t tail_start = grid.size() - std::max<std::size_t>(1, grid.size() / 4);
    MeanAccumulator tail;
    for (std::size_t k = tail_start; k < grid.size(); ++k)
        tail.add(report.series[k].value);
    out.plateau = tail.mean();
    report.wall_clock_seconds = seconds_since(start);
    return out;
}

namespace {

int uniform_int(CounterStream& rng, int lo, int hi) {
    return lo + static_cast<int>(rng.uniform() * (hi - lo + 1));
}

double uniform_real(CounterStream& rng, double lo, double hi) {
    return lo + rng.uniform() * (hi - lo);
}

} // namespace

SuiteReport containment_suite(std::size_t runs, Seed seed) {
    SuiteReport report;
    report.suite = "danger_containment";
    report.n_runs = runs;
    struct Outcome {
        ContainmentCheck check{};
        bool nontrivial = false;
        std::string details;
    };
    std::vector<Outcome> outcomes(runs);
    parallel_for(runs, [&](std::size_t r) {
        const Seed run_seed = derive_seed(seed, r);
        CounterStream rng(run_seed, 0, 0, 0x31);
        const int d = uniform_int(rng, 2, 10);
        const int theta = uniform_int(rng, 1, std::min(3, d));
        const int l = uniform_int(rng, 1, d);
        const int k = l + theta;
        const double lambda = uniform_real(rng, 0.5, 4.0);
        const double alpha = uniform_real(rng, 0.5, 1.0);
        const Geometry cube = Geometry::hypercube(d);
        const auto region = Region::full(cube);
        const double horizon = static_cast<double>(d * d);
        const Configuration zeta = Configuration::product(region, alpha, derive_seed(run_seed, 1));
        const MarkPlan plan(lambda, horizon, derive_seed(run_seed, 2), cube);
        const CoupledRun run = evolve_coupled(region, theta, zeta, plan, horizon);
        Outcome& o = outcomes[r];
        o.check = check_danger_containment(run, *region, l, k, theta);
        if (o.check.precondition_held)
            o.nontrivial = dangerous_sites(run.pi, *region, k, horizon).count() < region->size();
        std::ostringstream msg;
        msg << "d=" << d << " theta=" << theta << " L=" << l << " K=" << k
            << " lambda=" << format_double(lambda) << " alpha=" << format_double(alpha)
            << " |Delta|=" << run.delta_cumulative.count();
        o.details = msg.str();
    });
    for (std::size_t r = 0; r < runs; ++r) {
        const Outcome& o = outcomes[r];
        report.precondition_held += o.check.precondition_held ? 1 : 0;
        report.nontrivial += o.nontrivial ? 1 : 0;
        if (o.check.defect())
            report.defects.push_back({derive_seed(seed, r), o.details});
    }
    return report;
}

SuiteReport monotonicity_suite(std::size_t runs, Seed seed) {
    SuiteReport report;
    report.suite = "discrepancy_monotonicity";
    report.n_runs = runs;
    std::vector<std::uint8_t> ok(runs, 1);
    std::vector<std::string> details(runs);
    parallel_for(runs, [&](std::size_t r) {
        const Seed run_seed = derive_seed(seed, r);
        CounterStream rng(run_seed, 0, 0, 0x42);
        const int d = uniform_int(rng, 2, 10);
        const int theta = uniform_int(rng, 1, std::min(3, d));
        const double lambda = uniform_real(rng, 0.5, 4.0);
        const double upper_density = r % 4 == 0 ? 1.0 : rng.uniform();
        const double keep = rng.uniform();
        const Geometry cube = Geometry::hypercube(d);
        const auto region = Region::full(cube);
        const double horizon = static_cast<double>(d * d);
        const Configuration upper =
            Configuration::product(region, upper_density, derive_seed(run_seed, 1));
        State lower_bits = upper.bits();
        const Seed thin_seed = derive_seed(run_seed, 3);
        for (SiteIndex x : region->sites())
            if (uniform_at(thin_seed, x, 0, 0) >= keep)
                lower_bits[x] = 0;
        const Configuration lower(region, std::move(lower_bits));
        const MarkPlan plan(lambda, horizon, derive_seed(run_seed, 2), cube);
        ok[r] = check_discrepancy_monotone(lower, upper, region, theta, plan, horizon) ? 1 : 0;
        if (!ok[r]) {
            std::ostringstream msg;
            msg << "d=" << d << " theta=" << theta << " lambda=" << format_double(lambda)
                << " upper_density=" << format_double(upper_density)
                << " keep=" << format_double(keep);
            details[r] = msg.str();
        }
    });
    report.precondition_held = runs;
    report.nontrivial = runs;
    for (std::size_t r = 0; r < runs; ++r)
        if (!ok[r])
            report.defects.push_back({derive_seed(seed, r), details[r]});
    return report;
}

void write_series_csv(std::ostream& out, const EstimateReport& report, std::string_view value_name) {
    out << "t," << value_name << ",stderr\n";
    for (const SeriesPoint& p : report.series)
        out << format_double(p.t) << ',' << format_double(p.value) << ',' << format_double(p.stderr)
            << '\n';
}

void write_trace_csv(std::ostream& out, const Bracket& bracket) {
    out << "step,value,density,stderr,survives\n";
    for (std::size_t k = 0; k < bracket.trace.size(); ++k) {
        const BisectionStep& s = bracket.trace[k];
        out << k << ',' << format_double(s.value) << ',' << format_double(s.density) << ','
            << format_double(s.stderr) << ',' << (s.survives ? 1 : 0) << '\n';
    }
}

void write_flips_csv(std::ostream& out, std::span<const std::vector<Flip>> logs) {
    out << "replica,time,site,new_value\n";
    for (std::size_t r = 0; r < logs.size(); ++r)
        for (const Flip& f : logs[r])
            out << r << ',' << format_double(f.time) << ',' << f.site << ',' << int(f.value) << '\n';
}

} // namespace tcsim
