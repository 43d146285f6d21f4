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

#include <algorithm>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "tcsim/lattice.hpp"
#include "tcsim/rng.hpp"

namespace tcsim {

enum class MarkKind : std::uint8_t { down = 0, up = 1 };

/// One Poisson mark. Ordering is (time, site, kind) with D before U.
struct Event {
    double time;
    SiteIndex site;
    MarkKind kind;

    friend bool operator==(const Event&, const Event&) = default;
};

inline bool event_before(const Event& a, const Event& b) {
    if (a.time != b.time)
        return a.time < b.time;
    if (a.site != b.site)
        return a.site < b.site;
    return a.kind < b.kind;
}

/// The graphical-construction randomness: per site, a rate-1 stream of D
/// marks and a rate-`lambda` stream of U marks on (0, horizon].
///
/// Every mark is a pure function of (master_seed, site, time window), so
/// any subset of sites can be materialized in any order. U marks at rate
/// lambda are the points of a unit-intensity Poisson process on
/// time x level with level < lambda; plans that differ only in lambda
/// therefore have nested U-mark sets.
struct MarkPlan {
    double lambda = 1.0;
    double horizon = 1.0;
    Seed master_seed = 0;
    Geometry geometry = Geometry::hypercube(1);

    MarkPlan(double lambda_, double horizon_, Seed seed, Geometry geometry_);
    MarkPlan with_seed(Seed seed) const { return MarkPlan(lambda, horizon, seed, geometry); }
};

struct MarkStream {
    SiteIndex site;
    std::vector<Event> events;
};

/// Width of the time windows marks are generated in.
inline constexpr double kMarkWindow = 1.0;

/// Marks of one site within window [w, w + 1) and below the horizon,
/// appended to `out` unsorted.
void append_window_marks(const MarkPlan& plan, SiteIndex site, std::int64_t window,
                         double horizon, std::vector<Event>& out);

MarkStream mark_stream(const MarkPlan& plan, SiteIndex site);

/// All marks of the region's sites, sorted by (time, site, kind).
std::vector<Event> merged_events(const MarkPlan& plan, std::span<const SiteIndex> sites);
std::vector<Event> merged_events(const MarkPlan& plan, const Region& region);

/// Streams the merged sequence window by window without materializing
/// it. Stops after marks with time <= horizon (horizon <= plan.horizon).
template <class Visitor>
void for_each_event(const MarkPlan& plan, std::span<const SiteIndex> sites, double horizon,
                    Visitor&& visit) {
    std::vector<Event> buffer;
    for (std::int64_t w = 0; static_cast<double>(w) * kMarkWindow < horizon; ++w) {
        buffer.clear();
        for (SiteIndex x : sites)
            append_window_marks(plan, x, w, horizon, buffer);
        std::sort(buffer.begin(), buffer.end(), event_before);
        for (const Event& e : buffer)
            visit(e);
    }
}

/// CSV debug dump: site,time,kind.
void write_stream_csv(std::ostream& out, std::span<const MarkStream> streams);

} // namespace tcsim
