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
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tcsim {

using SiteIndex = std::uint32_t;
using Coords = std::vector<int>;

enum class GeometryKind { torus, hypercube, slab };

std::string_view to_string(GeometryKind kind);

/// Finite lattice: `theta` periodic axes of extent `side` followed by
/// `d - theta` free axes of extent 2. Torus and hypercube are the two
/// extreme cases (theta = d and theta = 0).
///
/// Sites are linearized mixed-radix with axis 0 varying fastest; that
/// order is the canonical site order used everywhere else.
class Geometry {
public:
    static Geometry torus(int d, int side);
    static Geometry hypercube(int d);
    static Geometry slab(int theta, int d, int side);

    /// Checked factory covering all three kinds. `theta` is ignored for
    /// torus and hypercube.
    static Geometry build(GeometryKind kind, int theta, int d, int side);

    /// Parses "kind:d=<d>,theta=<theta>,side=<side>". Keys may appear in any
    /// order; hypercube needs only d, torus needs d and side.
    static Geometry parse(std::string_view spec);
    std::string to_spec() const;

    GeometryKind kind() const { return kind_; }
    int dim() const { return dim_; }
    /// Number of periodic axes.
    int periodic_axes() const { return periodic_; }
    int side() const { return side_; }
    int extent(int axis) const { return axis < periodic_ ? side_ : 2; }
    bool is_periodic(int axis) const { return axis < periodic_; }
    std::size_t site_count() const { return site_count_; }
    /// Neighbor count of every site (2 per periodic axis, 1 per free axis).
    int degree() const { return 2 * periodic_ + (dim_ - periodic_); }

    bool valid(SiteIndex x) const { return x < site_count_; }
    SiteIndex index(std::span<const int> coords) const;
    Coords coords(SiteIndex x) const;
    int coord(SiteIndex x, int axis) const {
        return static_cast<int>((x / strides_[axis]) % static_cast<std::size_t>(extent(axis)));
    }

    /// x + step * e_axis with periodic wrap; for a free axis, returns
    /// false when the step leaves {0, 1}.
    bool shift(SiteIndex x, int axis, int step, SiteIndex& out) const;

    /// All nearest neighbors, axis by axis (minus before plus). Throws
    /// std::out_of_range for an invalid site.
    std::vector<SiteIndex> neighbors(SiteIndex x) const;

    friend bool operator==(const Geometry& a, const Geometry& b) {
        return a.kind_ == b.kind_ && a.dim_ == b.dim_ && a.periodic_ == b.periodic_ &&
               a.side_ == b.side_;
    }

private:
    Geometry(GeometryKind kind, int dim, int periodic, int side);

    GeometryKind kind_;
    int dim_;
    int periodic_;
    int side_;
    std::size_t site_count_;
    std::vector<std::size_t> strides_;
};

/// Dense membership mask over a geometry's index space.
class SiteSet {
public:
    SiteSet() = default;
    explicit SiteSet(std::size_t universe) : bits_(universe, 0) {}
    static SiteSet full(std::size_t universe);
    static SiteSet of(std::size_t universe, std::span<const SiteIndex> members);

    std::size_t universe() const { return bits_.size(); }
    bool contains(SiteIndex x) const { return x < bits_.size() && bits_[x] != 0; }
    void insert(SiteIndex x) { bits_.at(x) = 1; }
    void erase(SiteIndex x) { bits_.at(x) = 0; }
    std::size_t count() const;
    bool empty() const { return count() == 0; }
    std::vector<SiteIndex> members() const;

    bool subset_of(const SiteSet& other) const;
    SiteSet& operator|=(const SiteSet& other);

    friend bool operator==(const SiteSet&, const SiteSet&) = default;

private:
    std::vector<std::uint8_t> bits_;
};

struct Neighbor {
    SiteIndex site;
    std::uint8_t axis;
};

/// A site subset R of a geometry together with the restricted
/// neighborhoods N_{R,x} = N_x ∩ R (free boundary at the edge of R).
class Region {
public:
    Region(Geometry geometry, SiteSet members);
    static std::shared_ptr<const Region> full(const Geometry& geometry);
    static std::shared_ptr<const Region> make(const Geometry& geometry, SiteSet members);

    const Geometry& geometry() const { return geometry_; }
    const SiteSet& members() const { return members_; }
    std::span<const SiteIndex> sites() const { return sites_; }
    std::size_t size() const { return sites_.size(); }
    bool contains(SiteIndex x) const { return members_.contains(x); }
    /// Largest |N_{R,x}| over the region.
    int max_degree() const { return max_degree_; }

    /// N_{R,x}. Throws std::invalid_argument if x is not in R.
    std::span<const Neighbor> neighbors(SiteIndex x) const;

    friend bool operator==(const Region& a, const Region& b) {
        return a.geometry_ == b.geometry_ && a.members_ == b.members_;
    }

private:
    Geometry geometry_;
    SiteSet members_;
    std::vector<SiteIndex> sites_;
    std::vector<std::uint32_t> offsets_;
    std::vector<Neighbor> adjacency_;
    int max_degree_ = 0;
};

/// Site list of N_{R,x}; the span-returning Region::neighbors is the hot-path form.
std::vector<SiteIndex> region_neighbors(const Region& region, SiteIndex x);

/// True iff |S ∩ N_{R,x}| <= L for every x in R. Throws if S ⊄ R.
bool is_thin(const SiteSet& s, const Region& region, int max_per_neighborhood);

/// Largest |S ∩ N_{R,x}| over x in R (the least L for which S is L-thin).
int thinness(const SiteSet& s, const Region& region);

/// The block H_i of a slab: {2 i_1, 2 i_1 + 1} x ... x {0,1}^{d-theta}.
struct Block {
    std::vector<int> index;
    SiteSet members;
};

/// Blocks of a slab indexed by i in (Z_{side/2})^theta, in mixed-radix
/// order of i (first component fastest).
std::vector<Block> block_partition(const Geometry& slab);

/// Linear index of block multi-index i (first component fastest).
std::size_t block_linear_index(const Geometry& slab, std::span<const int> index);

/// Hypercube coordinates of a block site: (x_j - 2 i_j) on the periodic
/// axes, x_j on the free axes. Bijection H_i -> {0,1}^d.
Coords block_local_coords(const Geometry& slab, SiteIndex x);

/// Flips hypercube coordinate j (j < flips.size()) wherever flips[j] = 1.
SiteIndex sigma_k(const Geometry& hypercube, SiteIndex x, std::span<const int> flips);

/// True iff {y, z} = {x - e_j, x + e_j} for some axis j. Throws if y or z
/// is not a neighbor of x.
bool colinear(const Geometry& geometry, SiteIndex x, SiteIndex y, SiteIndex z);

} // namespace tcsim
