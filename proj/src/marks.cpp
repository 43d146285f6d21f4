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

#include "tcsim/marks.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "tcsim/io.hpp"

namespace tcsim {

namespace {

// Third counter word: kind tag in the top byte, U level strip below.
constexpr std::uint32_t kDownTag = 0x01000000u;
constexpr std::uint32_t kUpTag = 0x02000000u;

void append_poisson(CounterStream stream, double start, double end, SiteIndex site, MarkKind kind,
                    double keep_level, std::vector<Event>& out) {
    double t = start;
    for (;;) {
        t += stream.exponential(1.0);
        if (t >= end)
            return;
        // The level is drawn for every point, so the gap sequence of a strip
        // does not depend on how much of it lies below lambda.
        const double level = stream.uniform();
        if (level < keep_level)
            out.push_back({t, site, kind});
    }
}

} // namespace

MarkPlan::MarkPlan(double lambda_, double horizon_, Seed seed, Geometry geometry_)
    : lambda(lambda_), horizon(horizon_), master_seed(seed), geometry(std::move(geometry_)) {
    if (!(lambda >= 0.0) || !std::isfinite(lambda))
        throw std::invalid_argument("lambda must be finite and >= 0");
    if (!(horizon > 0.0) || !std::isfinite(horizon))
        throw std::invalid_argument("horizon must be finite and > 0");
}

void append_window_marks(const MarkPlan& plan, SiteIndex site, std::int64_t window,
                         double horizon, std::vector<Event>& out) {
    const double start = static_cast<double>(window) * kMarkWindow;
    const double end = std::min(start + kMarkWindow, std::nextafter(std::min(horizon, plan.horizon),
                                                                    INFINITY));
    if (start >= end)
        return;
    const auto w = static_cast<std::uint32_t>(window);
    append_poisson(CounterStream(plan.master_seed, site, w, kDownTag), start, end, site,
                   MarkKind::down, 1.0, out);
    const auto strips = static_cast<std::uint32_t>(std::ceil(plan.lambda));
    for (std::uint32_t j = 0; j < strips; ++j) {
        const double keep = std::min(1.0, plan.lambda - static_cast<double>(j));
        append_poisson(CounterStream(plan.master_seed, site, w, kUpTag | j), start, end, site,
                       MarkKind::up, keep, out);
    }
}

MarkStream mark_stream(const MarkPlan& plan, SiteIndex site) {
    if (!plan.geometry.valid(site))
        throw std::out_of_range("invalid site index");
    MarkStream stream{site, {}};
    for (std::int64_t w = 0; static_cast<double>(w) * kMarkWindow < plan.horizon; ++w)
        append_window_marks(plan, site, w, plan.horizon, stream.events);
    std::sort(stream.events.begin(), stream.events.end(), event_before);
    return stream;
}

std::vector<Event> merged_events(const MarkPlan& plan, std::span<const SiteIndex> sites) {
    std::vector<Event> all;
    for_each_event(plan, sites, plan.horizon, [&](const Event& e) { all.push_back(e); });
    return all;
}

std::vector<Event> merged_events(const MarkPlan& plan, const Region& region) {
    if (region.size() == 0)
        throw std::invalid_argument("region is empty");
    return merged_events(plan, region.sites());
}

void write_stream_csv(std::ostream& out, std::span<const MarkStream> streams) {
    out << "site,time,kind\n";
    for (const MarkStream& s : streams)
        for (const Event& e : s.events)
            out << s.site << ',' << format_double(e.time) << ','
                << (e.kind == MarkKind::down ? 'D' : 'U') << '\n';
}

} // namespace tcsim
