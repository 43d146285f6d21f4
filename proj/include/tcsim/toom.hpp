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
#include <span>
#include <vector>

#include "tcsim/rng.hpp"
#include "tcsim/stats.hpp"

namespace tcsim {

/// A {0,1} field on the periodic torus (Z_side)^kappa at step n. Cells are
/// linearized with axis 0 fastest.
struct PCAField {
    int kappa = 2;
    int side = 2;
    std::vector<std::uint8_t> cells;
    int step = 0;

    static PCAField constant(int kappa, int side, bool value);
    std::size_t size() const { return cells.size(); }
    /// Index of i + e_axis with periodic wrap.
    std::size_t forward(std::size_t i, int axis) const;
    double density() const;
    bool leq(const PCAField& other) const;
};

/// X_{i,n} = 0 with probability eps: X is 0 iff the uniform addressed by
/// (noise_seed, i, n) is below eps, so fields at different eps share
/// their uniforms and are ordered pointwise.
std::uint8_t toom_noise(Seed noise_seed, std::size_t cell, int n, double eps);

/// One step of the NEC rule with center:
///   new_i = X_{i,n} if old_i = 1 or old_{i+e_j} = 1 for every j, else 0.
/// The result has step index n.
PCAField pca_step(const PCAField& field, double eps, Seed noise_seed, int n);

/// Same rule with an explicit noise field X_{., n}.
PCAField pca_step_with_noise(const PCAField& field, std::span<const std::uint8_t> noise);

struct CurvePoint {
    int n;
    double origin_freq;
    double density;
    /// Standard error of origin_freq across replicas.
    double stderr_origin;
    double stderr_density;
};

struct PcaCurve {
    double eps;
    std::vector<CurvePoint> points;
};

/// Runs the PCA from the all-ones field; replica r uses noise seed
/// derive_seed(seed, r). Points for n = 0..n_steps.
PcaCurve pca_run(int kappa, int side, double eps, int n_steps, std::size_t n_replicas, Seed seed);

struct EpsSweep {
    std::vector<PcaCurve> curves;
    std::vector<double> final_density;
    double survival_proxy;
    /// [eps_lo, eps_hi]: last grid value whose final density meets the
    /// proxy and the first one that does not. Degenerates to a grid
    /// endpoint when no crossing happens inside the grid.
    Interval bracket;
    bool crossed;
    /// Cells where a field at larger eps exceeded the field at the next
    /// smaller eps on the same replica and step.
    std::size_t order_violations;
};

EpsSweep eps_sweep(int kappa, int side, int n_steps, std::span<const double> grid,
                   std::size_t n_replicas, Seed seed, double survival_proxy = 0.5);

/// ε for the oriented-process comparison: one minus the probability that a
/// site sees no D mark and at least one U mark in an interval of length
/// 1/sqrt(lambda).
double oriented_eps(double lambda);

struct DominationReport {
    int dim;
    int side;
    double lambda;
    int n_steps;
    double eps_derived;
    /// Fraction of X_{i,n} equal to 0 across all replicas.
    double eps_empirical;
    std::vector<Seed> replica_seeds;
    std::vector<std::size_t> violations_per_replica;
    std::size_t violations;
};

/// Evolves the oriented process from all-ones on the d-torus, builds
/// X_{i,n} from the same marks (no D and some U in [(n-1)/sqrt(l), n/sqrt(l)]),
/// steps the PCA with that noise and counts (i, n) with PCA = 1 > process.
DominationReport oriented_domination_check(int dim, int side, double lambda, int n_steps,
                                           std::size_t n_replicas, Seed seed);

/// CSV: eps,n,origin_freq,density,stderr
void write_curves_csv(std::ostream& out, std::span<const PcaCurve> curves);

} // namespace tcsim
