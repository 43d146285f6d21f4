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

#include "tcsim/lattice.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <stdexcept>

namespace tcsim {

std::string_view to_string(GeometryKind kind) {
    switch (kind) {
    case GeometryKind::torus: return "torus";
    case GeometryKind::hypercube: return "hypercube";
    case GeometryKind::slab: return "slab";
    }
    return "?";
}

Geometry::Geometry(GeometryKind kind, int dim, int periodic, int side)
    : kind_(kind), dim_(dim), periodic_(periodic), side_(side) {
    strides_.resize(static_cast<std::size_t>(dim_));
    std::size_t stride = 1;
    for (int axis = 0; axis < dim_; ++axis) {
        strides_[axis] = stride;
        stride *= static_cast<std::size_t>(extent(axis));
        if (stride > std::size_t{1} << 31)
            throw std::invalid_argument("geometry too large");
    }
    site_count_ = stride;
}

Geometry Geometry::build(GeometryKind kind, int theta, int d, int side) {
    if (d < 1)
        throw std::invalid_argument("dimension must be >= 1");
    if (kind == GeometryKind::hypercube)
        return Geometry(kind, d, 0, 2);
    if (kind == GeometryKind::torus)
        theta = d;
    if (theta < 1 || theta > d)
        throw std::invalid_argument("slab needs 1 <= theta <= d");
    if (side % 2 != 0)
        throw std::invalid_argument("side must be even");
    // side 2 would make x - e_j and x + e_j the same site.
    if (side < 4)
        throw std::invalid_argument("side must be >= 4");
    return Geometry(kind, d, theta, side);
}

Geometry Geometry::torus(int d, int side) { return build(GeometryKind::torus, d, d, side); }
Geometry Geometry::hypercube(int d) { return build(GeometryKind::hypercube, 0, d, 2); }
Geometry Geometry::slab(int theta, int d, int side) {
    return build(GeometryKind::slab, theta, d, side);
}

Geometry Geometry::parse(std::string_view spec) {
    const auto colon = spec.find(':');
    const auto kind_name = spec.substr(0, colon);
    GeometryKind kind;
    if (kind_name == "torus")
        kind = GeometryKind::torus;
    else if (kind_name == "hypercube")
        kind = GeometryKind::hypercube;
    else if (kind_name == "slab")
        kind = GeometryKind::slab;
    else
        throw std::invalid_argument("unknown geometry kind '" + std::string(kind_name) + "'");

    std::map<std::string, int, std::less<>> values;
    std::string_view rest = colon == std::string_view::npos ? std::string_view{} : spec.substr(colon + 1);
    while (!rest.empty()) {
        const auto comma = rest.find(',');
        const auto item = rest.substr(0, comma);
        rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
        const auto eq = item.find('=');
        if (eq == std::string_view::npos)
            throw std::invalid_argument("malformed geometry item '" + std::string(item) + "'");
        const auto key = item.substr(0, eq);
        const auto text = item.substr(eq + 1);
        int value = 0;
        auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
        if (ec != std::errc{} || ptr != text.data() + text.size())
            throw std::invalid_argument("bad integer in geometry item '" + std::string(item) + "'");
        if (key != "d" && key != "theta" && key != "side")
            throw std::invalid_argument("unknown geometry key '" + std::string(key) + "'");
        values[std::string(key)] = value;
    }
    auto get = [&](const char* key, bool required, int fallback) {
        auto it = values.find(key);
        if (it != values.end())
            return it->second;
        if (required)
            throw std::invalid_argument(std::string("geometry spec is missing '") + key + "'");
        return fallback;
    };
    const int d = get("d", true, 0);
    switch (kind) {
    case GeometryKind::hypercube: return hypercube(d);
    case GeometryKind::torus: return torus(d, get("side", true, 0));
    case GeometryKind::slab: return slab(get("theta", true, 0), d, get("side", true, 0));
    }
    throw std::logic_error("unreachable");
}

std::string Geometry::to_spec() const {
    std::string out(to_string(kind_));
    out += ":d=" + std::to_string(dim_);
    if (kind_ == GeometryKind::slab)
        out += ",theta=" + std::to_string(periodic_);
    if (kind_ != GeometryKind::hypercube)
        out += ",side=" + std::to_string(side_);
    return out;
}

SiteIndex Geometry::index(std::span<const int> coords) const {
    if (static_cast<int>(coords.size()) != dim_)
        throw std::out_of_range("coordinate vector has wrong length");
    std::size_t x = 0;
    for (int axis = 0; axis < dim_; ++axis) {
        if (coords[axis] < 0 || coords[axis] >= extent(axis))
            throw std::out_of_range("coordinate outside axis extent");
        x += static_cast<std::size_t>(coords[axis]) * strides_[axis];
    }
    return static_cast<SiteIndex>(x);
}

Coords Geometry::coords(SiteIndex x) const {
    if (!valid(x))
        throw std::out_of_range("invalid site index");
    Coords out(static_cast<std::size_t>(dim_));
    for (int axis = 0; axis < dim_; ++axis)
        out[axis] = coord(x, axis);
    return out;
}

bool Geometry::shift(SiteIndex x, int axis, int step, SiteIndex& out) const {
    const int c = coord(x, axis);
    const int ext = extent(axis);
    int next = c + step;
    if (is_periodic(axis)) {
        next = ((next % ext) + ext) % ext;
    } else if (next < 0 || next >= ext) {
        return false;
    }
    const auto stride = static_cast<std::int64_t>(strides_[axis]);
    out = static_cast<SiteIndex>(static_cast<std::int64_t>(x) + (next - c) * stride);
    return true;
}

std::vector<SiteIndex> Geometry::neighbors(SiteIndex x) const {
    if (!valid(x))
        throw std::out_of_range("invalid site index");
    std::vector<SiteIndex> out;
    out.reserve(static_cast<std::size_t>(degree()));
    for (int axis = 0; axis < dim_; ++axis) {
        for (int step : {-1, +1}) {
            SiteIndex y;
            if (shift(x, axis, step, y))
                out.push_back(y);
        }
    }
    return out;
}

SiteSet SiteSet::full(std::size_t universe) {
    SiteSet s(universe);
    std::fill(s.bits_.begin(), s.bits_.end(), std::uint8_t{1});
    return s;
}

SiteSet SiteSet::of(std::size_t universe, std::span<const SiteIndex> members) {
    SiteSet s(universe);
    for (SiteIndex x : members)
        s.insert(x);
    return s;
}

std::size_t SiteSet::count() const {
    return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

std::vector<SiteIndex> SiteSet::members() const {
    std::vector<SiteIndex> out;
    for (std::size_t i = 0; i < bits_.size(); ++i)
        if (bits_[i])
            out.push_back(static_cast<SiteIndex>(i));
    return out;
}

bool SiteSet::subset_of(const SiteSet& other) const {
    for (std::size_t i = 0; i < bits_.size(); ++i)
        if (bits_[i] && !other.contains(static_cast<SiteIndex>(i)))
            return false;
    return true;
}

SiteSet& SiteSet::operator|=(const SiteSet& other) {
    if (other.universe() != universe())
        throw std::invalid_argument("site sets over different universes");
    for (std::size_t i = 0; i < bits_.size(); ++i)
        bits_[i] |= other.bits_[i];
    return *this;
}

Region::Region(Geometry geometry, SiteSet members)
    : geometry_(std::move(geometry)), members_(std::move(members)) {
    if (members_.universe() != geometry_.site_count())
        throw std::invalid_argument("region mask does not match geometry size");
    sites_ = members_.members();
    offsets_.assign(geometry_.site_count() + 1, 0);
    // CSR over the full index space so lookups need no member-rank map.
    std::uint32_t cursor = 0;
    for (std::size_t x = 0; x < geometry_.site_count(); ++x) {
        offsets_[x] = cursor;
        if (!members_.contains(static_cast<SiteIndex>(x)))
            continue;
        int degree = 0;
        for (int axis = 0; axis < geometry_.dim(); ++axis) {
            for (int step : {-1, +1}) {
                SiteIndex y;
                if (geometry_.shift(static_cast<SiteIndex>(x), axis, step, y) && members_.contains(y)) {
                    adjacency_.push_back({y, static_cast<std::uint8_t>(axis)});
                    ++cursor;
                    ++degree;
                }
            }
        }
        max_degree_ = std::max(max_degree_, degree);
    }
    offsets_[geometry_.site_count()] = cursor;
}

std::shared_ptr<const Region> Region::full(const Geometry& geometry) {
    return std::make_shared<const Region>(geometry, SiteSet::full(geometry.site_count()));
}

std::shared_ptr<const Region> Region::make(const Geometry& geometry, SiteSet members) {
    return std::make_shared<const Region>(geometry, std::move(members));
}

std::span<const Neighbor> Region::neighbors(SiteIndex x) const {
    if (!contains(x))
        throw std::invalid_argument("site is not a member of the region");
    return {adjacency_.data() + offsets_[x], adjacency_.data() + offsets_[x + 1]};
}

std::vector<SiteIndex> region_neighbors(const Region& region, SiteIndex x) {
    std::vector<SiteIndex> out;
    for (const Neighbor& n : region.neighbors(x))
        out.push_back(n.site);
    return out;
}

int thinness(const SiteSet& s, const Region& region) {
    if (s.universe() != region.geometry().site_count() || !s.subset_of(region.members()))
        throw std::invalid_argument("set is not contained in the region");
    int worst = 0;
    for (SiteIndex x : region.sites()) {
        int hits = 0;
        for (const Neighbor& n : region.neighbors(x))
            hits += s.contains(n.site) ? 1 : 0;
        worst = std::max(worst, hits);
    }
    return worst;
}

bool is_thin(const SiteSet& s, const Region& region, int max_per_neighborhood) {
    return thinness(s, region) <= max_per_neighborhood;
}

std::size_t block_linear_index(const Geometry& slab, std::span<const int> index) {
    const auto blocks_per_axis = static_cast<std::size_t>(slab.side() / 2);
    std::size_t linear = 0;
    std::size_t stride = 1;
    for (int v : index) {
        linear += static_cast<std::size_t>(v) * stride;
        stride *= blocks_per_axis;
    }
    return linear;
}

std::vector<Block> block_partition(const Geometry& slab) {
    if (slab.kind() != GeometryKind::slab)
        throw std::invalid_argument("block partition needs a slab geometry");
    const int theta = slab.periodic_axes();
    const int per_axis = slab.side() / 2;
    std::size_t block_count = 1;
    for (int j = 0; j < theta; ++j)
        block_count *= static_cast<std::size_t>(per_axis);

    std::vector<Block> blocks(block_count);
    for (std::size_t b = 0; b < block_count; ++b) {
        blocks[b].index.resize(static_cast<std::size_t>(theta));
        std::size_t rest = b;
        for (int j = 0; j < theta; ++j) {
            blocks[b].index[j] = static_cast<int>(rest % static_cast<std::size_t>(per_axis));
            rest /= static_cast<std::size_t>(per_axis);
        }
        blocks[b].members = SiteSet(slab.site_count());
    }
    std::vector<int> block_index(static_cast<std::size_t>(theta));
    for (std::size_t x = 0; x < slab.site_count(); ++x) {
        for (int j = 0; j < theta; ++j)
            block_index[j] = slab.coord(static_cast<SiteIndex>(x), j) / 2;
        blocks[block_linear_index(slab, block_index)].members.insert(static_cast<SiteIndex>(x));
    }
    return blocks;
}

Coords block_local_coords(const Geometry& slab, SiteIndex x) {
    Coords c = slab.coords(x);
    for (int j = 0; j < slab.periodic_axes(); ++j)
        c[j] %= 2;
    return c;
}

SiteIndex sigma_k(const Geometry& hypercube, SiteIndex x, std::span<const int> flips) {
    if (hypercube.kind() != GeometryKind::hypercube)
        throw std::invalid_argument("sigma_k acts on a hypercube");
    if (static_cast<int>(flips.size()) > hypercube.dim())
        throw std::invalid_argument("flip vector longer than the dimension");
    Coords c = hypercube.coords(x);
    for (std::size_t j = 0; j < flips.size(); ++j)
        if (flips[j] != 0)
            c[j] = 1 - c[j];
    return hypercube.index(c);
}

bool colinear(const Geometry& geometry, SiteIndex x, SiteIndex y, SiteIndex z) {
    auto locate = [&](SiteIndex target, int& axis_out, int& step_out) {
        for (int axis = 0; axis < geometry.dim(); ++axis) {
            for (int step : {-1, +1}) {
                SiteIndex n;
                if (geometry.shift(x, axis, step, n) && n == target) {
                    axis_out = axis;
                    step_out = step;
                    return;
                }
            }
        }
        throw std::invalid_argument("site is not a nearest neighbor of x");
    };
    if (!geometry.valid(x))
        throw std::out_of_range("invalid site index");
    int ay, sy, az, sz;
    locate(y, ay, sy);
    locate(z, az, sz);
    return ay == az && sy == -sz;
}

} // namespace tcsim
