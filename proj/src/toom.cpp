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

#include "tcsim/toom.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "tcsim/dynamics.hpp"
#include "tcsim/io.hpp"
#include "tcsim/marks.hpp"
#include "tcsim/parallel.hpp"

namespace tcsim {

namespace {

constexpr std::uint32_t kToomTag = 0x544F4F4Du;

void check_eps(double eps) {
    if (!(eps >= 0.0 && eps <= 1.0))
        throw std::invalid_argument("eps must lie in [0, 1]");
}

} // namespace

PCAField PCAField::constant(int kappa, int side, bool value) {
    if (kappa < 1 || side < 2)
        throw std::invalid_argument("PCA needs kappa >= 1 and side >= 2");
    std::size_t n = 1;
    for (int j = 0; j < kappa; ++j)
        n *= static_cast<std::size_t>(side);
    return PCAField{kappa, side, std::vector<std::uint8_t>(n, value ? 1 : 0), 0};
}

std::size_t PCAField::forward(std::size_t i, int axis) const {
    std::size_t stride = 1;
    for (int j = 0; j < axis; ++j)
        stride *= static_cast<std::size_t>(side);
    const std::size_t c = (i / stride) % static_cast<std::size_t>(side);
    return c + 1 == static_cast<std::size_t>(side) ? i - c * stride : i + stride;
}

double PCAField::density() const {
    if (cells.empty())
        return 0.0;
    return static_cast<double>(std::count(cells.begin(), cells.end(), std::uint8_t{1})) /
           static_cast<double>(cells.size());
}

bool PCAField::leq(const PCAField& other) const {
    if (other.cells.size() != cells.size())
        throw std::invalid_argument("fields of different shape");
    for (std::size_t i = 0; i < cells.size(); ++i)
        if (cells[i] > other.cells[i])
            return false;
    return true;
}

std::uint8_t toom_noise(Seed noise_seed, std::size_t cell, int n, double eps) {
    return uniform_at(noise_seed, static_cast<std::uint32_t>(cell), static_cast<std::uint32_t>(n),
                      kToomTag) < eps
               ? 0
               : 1;
}

PCAField pca_step_with_noise(const PCAField& field, std::span<const std::uint8_t> noise) {
    if (noise.size() != field.size())
        throw std::invalid_argument("noise field has the wrong size");
    PCAField next = field;
    ++next.step;
    for (std::size_t i = 0; i < field.size(); ++i) {
        bool alive = field.cells[i] != 0;
        if (!alive) {
            alive = true;
            for (int j = 0; j < field.kappa && alive; ++j)
                alive = field.cells[field.forward(i, j)] != 0;
        }
        next.cells[i] = alive ? noise[i] : 0;
    }
    return next;
}

PCAField pca_step(const PCAField& field, double eps, Seed noise_seed, int n) {
    check_eps(eps);
    std::vector<std::uint8_t> noise(field.size());
    for (std::size_t i = 0; i < noise.size(); ++i)
        noise[i] = toom_noise(noise_seed, i, n, eps);
    PCAField next = pca_step_with_noise(field, noise);
    next.step = n;
    return next;
}

namespace {

struct ReplicaTrace {
    std::vector<std::uint8_t> origin;
    std::vector<double> density;
};

std::vector<CurvePoint> reduce_traces(std::span<const ReplicaTrace> traces, int n_steps) {
    std::vector<CurvePoint> points;
    for (int n = 0; n <= n_steps; ++n) {
        MeanAccumulator origin, density;
        for (const ReplicaTrace& t : traces) {
            origin.add(t.origin[n]);
            density.add(t.density[n]);
        }
        points.push_back({n, origin.mean(), density.mean(),
                          binomial_stderr(origin.mean(), origin.count()),
                          density.stderr_of_mean()});
    }
    return points;
}

} // namespace

PcaCurve pca_run(int kappa, int side, double eps, int n_steps, std::size_t n_replicas, Seed seed) {
    check_eps(eps);
    if (n_steps < 0 || n_replicas == 0)
        throw std::invalid_argument("pca_run needs n_steps >= 0 and n_replicas >= 1");
    std::vector<ReplicaTrace> traces(n_replicas);
    parallel_for(n_replicas, [&](std::size_t r) {
        const Seed noise_seed = derive_seed(seed, r);
        PCAField field = PCAField::constant(kappa, side, true);
        ReplicaTrace& t = traces[r];
        t.origin.push_back(field.cells[0]);
        t.density.push_back(field.density());
        for (int n = 1; n <= n_steps; ++n) {
            field = pca_step(field, eps, noise_seed, n);
            t.origin.push_back(field.cells[0]);
            t.density.push_back(field.density());
        }
    });
    return {eps, reduce_traces(traces, n_steps)};
}

EpsSweep eps_sweep(int kappa, int side, int n_steps, std::span<const double> grid,
                   std::size_t n_replicas, Seed seed, double survival_proxy) {
    if (grid.empty())
        throw std::invalid_argument("eps grid is empty");
    if (!std::is_sorted(grid.begin(), grid.end()))
        throw std::invalid_argument("eps grid must be sorted ascending");
    for (double e : grid)
        check_eps(e);
    if (n_steps < 0 || n_replicas == 0)
        throw std::invalid_argument("eps_sweep needs n_steps >= 0 and n_replicas >= 1");

    const std::size_t k = grid.size();
    std::vector<std::vector<ReplicaTrace>> traces(k, std::vector<ReplicaTrace>(n_replicas));
    std::vector<std::size_t> violations(n_replicas, 0);

    parallel_for(n_replicas, [&](std::size_t r) {
        const Seed noise_seed = derive_seed(seed, r);
        std::vector<PCAField> fields(k, PCAField::constant(kappa, side, true));
        for (std::size_t g = 0; g < k; ++g) {
            traces[g][r].origin.push_back(1);
            traces[g][r].density.push_back(1.0);
        }
        for (int n = 1; n <= n_steps; ++n) {
            for (std::size_t g = 0; g < k; ++g) {
                fields[g] = pca_step(fields[g], grid[g], noise_seed, n);
                traces[g][r].origin.push_back(fields[g].cells[0]);
                traces[g][r].density.push_back(fields[g].density());
            }
            for (std::size_t g = 1; g < k; ++g)
                for (std::size_t i = 0; i < fields[g].size(); ++i)
                    violations[r] += fields[g].cells[i] > fields[g - 1].cells[i] ? 1 : 0;
        }
    });

    EpsSweep out;
    out.survival_proxy = survival_proxy;
    out.order_violations = 0;
    for (std::size_t v : violations)
        out.order_violations += v;
    for (std::size_t g = 0; g < k; ++g) {
        out.curves.push_back({grid[g], reduce_traces(traces[g], n_steps)});
        out.final_density.push_back(out.curves.back().points.back().density);
    }
    std::size_t first_fail = k;
    for (std::size_t g = 0; g < k; ++g) {
        if (out.final_density[g] < survival_proxy) {
            first_fail = g;
            break;
        }
    }
    out.crossed = first_fail > 0 && first_fail < k;
    if (first_fail == 0)
        out.bracket = {grid.front(), grid.front()};
    else if (first_fail == k)
        out.bracket = {grid.back(), grid.back()};
    else
        out.bracket = {grid[first_fail - 1], grid[first_fail]};
    return out;
}

double oriented_eps(double lambda) {
    if (!(lambda > 0.0))
        throw std::invalid_argument("lambda must be > 0");
    const double r = std::sqrt(lambda);
    return 1.0 - std::exp(-1.0 / r) * (1.0 - std::exp(-r));
}

DominationReport oriented_domination_check(int dim, int side, double lambda, int n_steps,
                                           std::size_t n_replicas, Seed seed) {
    if (!(lambda > 0.0))
        throw std::invalid_argument("lambda must be > 0");
    if (n_steps < 1 || n_replicas == 0)
        throw std::invalid_argument("need n_steps >= 1 and n_replicas >= 1");
    const Geometry geometry = Geometry::torus(dim, side);
    const auto region = Region::full(geometry);
    const std::size_t cells = geometry.site_count();
    const double root = std::sqrt(lambda);
    std::vector<double> boundaries(static_cast<std::size_t>(n_steps) + 1);
    for (int n = 0; n <= n_steps; ++n)
        boundaries[n] = static_cast<double>(n) / root;
    const double horizon = boundaries.back();

    DominationReport report{dim, side, lambda, n_steps, oriented_eps(lambda), 0.0, {}, {}, 0};
    report.violations_per_replica.assign(n_replicas, 0);
    std::vector<std::size_t> zeros(n_replicas, 0);
    for (std::size_t r = 0; r < n_replicas; ++r)
        report.replica_seeds.push_back(derive_seed(seed, r));

    parallel_for(n_replicas, [&](std::size_t r) {
        const MarkPlan plan(lambda, horizon, report.replica_seeds[r], geometry);
        EvolveOptions options;
        options.record_flips = false;
        options.checkpoints.assign(boundaries.begin() + 1, boundaries.end());
        const Trajectory traj = evolve(region, Rule::oriented(), Configuration::constant(region, true),
                                       plan, horizon, options);

        // noise[n-1][i] = X_{i,n}
        std::vector<std::vector<std::uint8_t>> noise(static_cast<std::size_t>(n_steps),
                                                     std::vector<std::uint8_t>(cells, 0));
        std::vector<std::uint8_t> saw_down(static_cast<std::size_t>(n_steps));
        std::vector<std::uint8_t> saw_up(static_cast<std::size_t>(n_steps));
        for (SiteIndex i = 0; i < cells; ++i) {
            std::fill(saw_down.begin(), saw_down.end(), 0);
            std::fill(saw_up.begin(), saw_up.end(), 0);
            for (const Event& e : mark_stream(plan, i).events) {
                // Interval n holds (b_{n-1}, b_n].
                const auto it = std::lower_bound(boundaries.begin() + 1, boundaries.end(), e.time);
                const auto n = static_cast<std::size_t>(it - boundaries.begin() - 1);
                (e.kind == MarkKind::down ? saw_down : saw_up)[n] = 1;
            }
            for (int n = 0; n < n_steps; ++n)
                noise[n][i] = (!saw_down[n] && saw_up[n]) ? 1 : 0;
        }

        PCAField field = PCAField::constant(dim, side, true);
        for (int n = 1; n <= n_steps; ++n) {
            const auto& x = noise[static_cast<std::size_t>(n - 1)];
            zeros[r] += static_cast<std::size_t>(std::count(x.begin(), x.end(), std::uint8_t{0}));
            field = pca_step_with_noise(field, x);
            const State& eta = traj.checkpoints[static_cast<std::size_t>(n - 1)];
            for (std::size_t i = 0; i < cells; ++i)
                report.violations_per_replica[r] += field.cells[i] > eta[i] ? 1 : 0;
        }
    });

    std::size_t total_zeros = 0;
    for (std::size_t r = 0; r < n_replicas; ++r) {
        report.violations += report.violations_per_replica[r];
        total_zeros += zeros[r];
    }
    report.eps_empirical = static_cast<double>(total_zeros) /
                           (static_cast<double>(cells) * n_steps * static_cast<double>(n_replicas));
    return report;
}

void write_curves_csv(std::ostream& out, std::span<const PcaCurve> curves) {
    out << "eps,n,origin_freq,density,stderr\n";
    for (const PcaCurve& c : curves)
        for (const CurvePoint& p : c.points)
            out << format_double(c.eps) << ',' << p.n << ',' << format_double(p.origin_freq) << ','
                << format_double(p.density) << ',' << format_double(p.stderr_origin) << '\n';
}

} // namespace tcsim
