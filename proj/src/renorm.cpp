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

#include "tcsim/renorm.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "tcsim/io.hpp"
#include "tcsim/parallel.hpp"

namespace tcsim {

SiteSet dangerous_sites(const Trajectory& pi, const Region& region, int k, double horizon) {
    if (k < 0)
        throw std::invalid_argument("K must be >= 0");
    if (!pi.flips_recorded)
        throw std::invalid_argument("dangerous_sites needs the flip log of pi");
    if (horizon > pi.horizon)
        throw std::invalid_argument("horizon beyond the trajectory");
    const std::size_t n = region.geometry().site_count();
    SiteSet dangerous(n);
    std::vector<int> occupied(n, 0);
    for (SiteIndex x : region.sites())
        for (const Neighbor& nb : region.neighbors(x))
            occupied[x] += pi.initial[nb.site];
    for (SiteIndex x : region.sites())
        if (occupied[x] < k)
            dangerous.insert(x);
    for (const Flip& f : pi.flips) {
        if (f.time > horizon)
            break;
        if (!region.contains(f.site))
            continue;
        const int delta = f.value ? +1 : -1;
        for (const Neighbor& nb : region.neighbors(f.site)) {
            occupied[nb.site] += delta;
            if (occupied[nb.site] < k)
                dangerous.insert(nb.site);
        }
    }
    return dangerous;
}

ContainmentCheck check_danger_containment(const CoupledRun& run, const Region& region, int l, int k, int theta) {
    if (k < l + theta)
        throw std::invalid_argument("precondition violated: need K >= L + theta");
    const SiteSet dangerous = dangerous_sites(run.pi, region, k, run.pi.horizon);
    return {is_thin(dangerous, region, l), run.delta_cumulative.subset_of(dangerous)};
}

bool check_discrepancy_monotone(const Configuration& lower, const Configuration& upper,
                   const std::shared_ptr<const Region>& region, int theta, const MarkPlan& plan,
                   double horizon) {
    const Configuration lo = lower.restricted_to(region);
    const Configuration hi = upper.restricted_to(region);
    if (!lo.leq(hi))
        throw std::invalid_argument("precondition violated: need zeta' <= zeta''");
    EvolveOptions options;
    options.record_flips = false;
    const CoupledRun run_lo = evolve_coupled(region, theta, lo, plan, horizon, options);
    const CoupledRun run_hi = evolve_coupled(region, theta, hi, plan, horizon, options);
    return run_hi.delta_cumulative.subset_of(run_lo.delta_cumulative);
}

std::string_view to_string(Verdict v) {
    switch (v) {
    case Verdict::good: return "good";
    case Verdict::not_good: return "not_good";
    case Verdict::inconclusive: return "inconclusive";
    }
    return "?";
}

GoodnessVerdict estimate_goodness(const Configuration& zeta,
                                  const std::shared_ptr<const Region>& region,
                                  const GoodnessParams& params, Seed seed) {
    if (params.n_replicas == 0)
        throw std::invalid_argument("need at least one replica");
    if (!(params.gamma > 0.0 && params.gamma < 1.0))
        throw std::invalid_argument("gamma must lie in (0, 1)");
    const Geometry& geometry = region->geometry();
    const double horizon =
        params.horizon > 0.0 ? params.horizon : static_cast<double>(geometry.dim() * geometry.dim());
    const Configuration start = zeta.restricted_to(region);

    std::vector<std::uint8_t> thin(params.n_replicas, 0);
    parallel_for(params.n_replicas, [&](std::size_t r) {
        const MarkPlan plan(params.lambda, horizon, derive_seed(seed, r), geometry);
        EvolveOptions options;
        options.record_flips = false;
        const CoupledRun run = evolve_coupled(region, params.theta, start, plan, horizon, options);
        thin[r] = is_thin(run.delta_cumulative, *region, params.l) ? 1 : 0;
    });

    const auto successes = static_cast<std::size_t>(std::count(thin.begin(), thin.end(), 1));
    GoodnessVerdict v;
    v.n_replicas = params.n_replicas;
    v.thin_count = successes;
    v.p_hat = static_cast<double>(successes) / static_cast<double>(params.n_replicas);
    v.ci = wilson_interval(successes, params.n_replicas, params.gamma);
    const double target = 1.0 - params.delta;
    if (v.ci.lo >= target)
        v.verdict = Verdict::good;
    else if (v.ci.hi < target)
        v.verdict = Verdict::not_good;
    else
        v.verdict = Verdict::inconclusive;
    return v;
}

std::string_view to_string(ThinSetStrategy s) {
    switch (s) {
    case ThinSetStrategy::empty: return "empty";
    case ThinSetStrategy::sparse_pruned: return "sparse_pruned";
    case ThinSetStrategy::structured_faces: return "structured_faces";
    }
    return "?";
}

ThinSetStrategy parse_thin_set_strategy(std::string_view name) {
    for (ThinSetStrategy s : {ThinSetStrategy::empty, ThinSetStrategy::sparse_pruned,
                              ThinSetStrategy::structured_faces})
        if (to_string(s) == name)
            return s;
    throw std::invalid_argument("unknown thin-set strategy '" + std::string(name) + "'");
}

void prune_to_thin(SiteSet& s, const Region& region, int m) {
    if (m < 0)
        throw std::invalid_argument("M must be >= 0");
    for (;;) {
        SiteIndex worst = 0;
        int worst_hits = -1;
        for (SiteIndex x : region.sites()) {
            int hits = 0;
            for (const Neighbor& nb : region.neighbors(x))
                hits += s.contains(nb.site) ? 1 : 0;
            if (hits > worst_hits) {
                worst_hits = hits;
                worst = x;
            }
        }
        if (worst_hits <= m)
            return;
        SiteIndex victim = 0;
        bool found = false;
        for (const Neighbor& nb : region.neighbors(worst)) {
            if (s.contains(nb.site) && (!found || nb.site > victim)) {
                victim = nb.site;
                found = true;
            }
        }
        s.erase(victim);
    }
}

AlmostProductSample sample_almost_product(const std::shared_ptr<const Region>& region, double alpha,
                                          int m, ThinSetStrategy strategy, Seed seed,
                                          double inclusion) {
    if (m < 0)
        throw std::invalid_argument("M must be >= 0");
    if (!(inclusion >= 0.0 && inclusion <= 1.0))
        throw std::invalid_argument("inclusion probability must lie in [0, 1]");
    Configuration xi = Configuration::product(region, alpha, derive_seed(seed, 0));
    const std::size_t n = region->geometry().site_count();
    SiteSet s(n);
    switch (strategy) {
    case ThinSetStrategy::empty: break;
    case ThinSetStrategy::sparse_pruned: {
        const Seed pick = derive_seed(seed, 1);
        for (SiteIndex x : region->sites())
            if (uniform_at(pick, x, 0, 0) < inclusion)
                s.insert(x);
        prune_to_thin(s, *region, m);
        break;
    }
    case ThinSetStrategy::structured_faces: {
        for (SiteIndex x : region->sites())
            if (region->geometry().coord(x, 0) == 0 && xi.at(x))
                s.insert(x);
        prune_to_thin(s, *region, m);
        break;
    }
    }
    State bits = xi.bits();
    for (SiteIndex x : region->sites())
        if (s.contains(x))
            bits[x] = 0;
    Configuration config(region, std::move(bits));
    return {std::move(xi), std::move(s), std::move(config)};
}

CoarseGrainResult coarse_grain(const Configuration& config, const GoodnessParams& params, Seed seed) {
    const Geometry& geometry = config.region().geometry();
    if (geometry.kind() != GeometryKind::slab)
        throw std::invalid_argument("coarse graining needs a slab geometry");
    if (config.region().size() != geometry.site_count())
        throw std::invalid_argument("coarse graining needs a configuration on the whole slab");
    const std::vector<Block> blocks = block_partition(geometry);

    CoarseGrainResult out;
    out.field = PCAField::constant(geometry.periodic_axes(), geometry.side() / 2, false);
    out.inconclusive = 0;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        const auto region = Region::make(geometry, blocks[b].members);
        const GoodnessVerdict v = estimate_goodness(config, region, params, derive_seed(seed, b));
        out.field.cells[b] = v.verdict == Verdict::good ? 1 : 0;
        out.inconclusive += v.verdict == Verdict::inconclusive ? 1 : 0;
        out.block_index.push_back(blocks[b].index);
        out.verdicts.push_back(v);
    }
    return out;
}

void write_goodness_csv(std::ostream& out, std::span<const GoodnessVerdict> verdicts) {
    out << "block_i,p_hat,ci_lo,ci_hi,verdict,n\n";
    for (std::size_t b = 0; b < verdicts.size(); ++b) {
        const GoodnessVerdict& v = verdicts[b];
        out << b << ',' << format_double(v.p_hat) << ',' << format_double(v.ci.lo) << ','
            << format_double(v.ci.hi) << ',' << to_string(v.verdict) << ',' << v.n_replicas << '\n';
    }
}

double OrderEventEstimate::full_probability(double beta) const {
    if (order_length != 4)
        throw std::logic_error("the full event uses an order of length 4");
    return std::pow(beta, 8) * std::exp(-12.0) * factor;
}

OrderEventEstimate order_event_prob(double lambda, std::size_t n_mc, Seed seed,
                                    std::size_t order_length) {
    if (n_mc == 0)
        throw std::invalid_argument("n_mc must be >= 1");
    if (order_length < 1 || order_length > 4)
        throw std::invalid_argument("order length must be 1..4");
    const Geometry square = Geometry::hypercube(2);
    // (1,1), (1,0), (0,1), (0,0) with axis 0 fastest.
    const SiteIndex order[4] = {3, 1, 2, 0};

    std::size_t hits = 0;
    for (std::size_t r = 0; r < n_mc; ++r) {
        const MarkPlan plan(lambda, 1.0, derive_seed(seed, r), square);
        double t = 0.0;
        bool ok = true;
        for (std::size_t j = 0; j < order_length && ok; ++j) {
            ok = false;
            for (const Event& e : mark_stream(plan, order[j]).events) {
                if (e.kind == MarkKind::up && e.time > t) {
                    t = e.time;
                    ok = true;
                    break;
                }
            }
        }
        hits += ok ? 1 : 0;
    }
    OrderEventEstimate out;
    out.lambda = lambda;
    out.order_length = order_length;
    out.n_mc = n_mc;
    out.factor = static_cast<double>(hits) / static_cast<double>(n_mc);
    out.stderr = binomial_stderr(out.factor, n_mc);
    const double k = static_cast<double>(order_length);
    out.quarter_bound = std::pow(1.0 - std::exp(-lambda / k), k);
    return out;
}

RescalingReport compare_rescaling_with_pca(const RescalingParams& p, Seed seed) {
    if (p.n_steps < 0 || p.realizations == 0)
        throw std::invalid_argument("need n_steps >= 0 and at least one realization");
    const Geometry slab = Geometry::slab(p.theta, p.dim, p.side);
    const auto region = Region::full(slab);
    const double block_time = static_cast<double>(p.dim * p.dim);

    GoodnessParams gp;
    gp.theta = p.theta;
    gp.lambda = p.lambda;
    gp.l = p.l;
    gp.delta = p.delta;
    gp.horizon = block_time;
    gp.n_replicas = p.goodness_replicas;
    gp.gamma = p.gamma;

    std::vector<MeanAccumulator> coarse(static_cast<std::size_t>(p.n_steps) + 1);
    std::vector<std::size_t> inconclusive(static_cast<std::size_t>(p.n_steps) + 1, 0);
    for (std::size_t real = 0; real < p.realizations; ++real) {
        const Seed real_seed = derive_seed(seed, real);
        EvolveOptions options;
        options.record_flips = false;
        for (int n = 0; n <= p.n_steps; ++n)
            options.checkpoints.push_back(n * block_time);
        const double horizon = std::max(block_time * p.n_steps, block_time);
        const MarkPlan plan(p.lambda, horizon, derive_seed(real_seed, 0), slab);
        const Trajectory traj = evolve(region, Rule::threshold_contact(p.theta),
                                       Configuration::constant(region, true), plan, horizon, options);
        for (int n = 0; n <= p.n_steps; ++n) {
            const Configuration snap(region, traj.checkpoints[static_cast<std::size_t>(n)]);
            const CoarseGrainResult cg =
                coarse_grain(snap, gp, derive_seed(real_seed, 1 + static_cast<std::uint64_t>(n)));
            coarse[n].add(cg.field.density());
            inconclusive[n] += cg.inconclusive;
        }
    }
    const PcaCurve pca =
        pca_run(p.theta, p.side / 2, p.eps, p.n_steps, p.pca_replicas, derive_seed(seed, 0xC0FFEE));

    RescalingReport report{p, {}};
    for (int n = 0; n <= p.n_steps; ++n) {
        const double cd = coarse[n].mean();
        const double pd = pca.points[static_cast<std::size_t>(n)].density;
        report.steps.push_back({n, cd, pd, inconclusive[n], cd >= pd});
    }
    return report;
}

} // namespace tcsim
