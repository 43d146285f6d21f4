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

#include <array>
#include <cstdint>

namespace tcsim {

using Seed = std::uint64_t;

/// Philox4x32-10 block function (Salmon et al., SC'11). Pure: the same
/// (counter, key) pair always yields the same four words.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key);

/// SplitMix64 finalizer; used to derive child seeds.
std::uint64_t mix64(std::uint64_t x);

/// Child seed for stream `index` of `master`. Distinct indices give
/// decorrelated seeds; the map is deterministic.
Seed derive_seed(Seed master, std::uint64_t index);

/// Uniform in [0, 1) with 53 bits of resolution.
inline double unit_closed_open(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// Uniform in (0, 1]; safe to take the logarithm of.
inline double unit_open_closed(std::uint64_t bits) {
    return static_cast<double>((bits >> 11) + 1) * 0x1.0p-53;
}

/// A reproducible sequence of 64-bit draws addressed by (seed, a, b, c).
///
/// Draw k of the sequence comes from Philox block (a, b, c, k / 2), so any
/// two streams with different addresses are independent and a stream can
/// be regenerated from its address alone.
class CounterStream {
public:
    CounterStream(Seed seed, std::uint32_t a, std::uint32_t b, std::uint32_t c)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          a_(a), b_(b), c_(c) {}

    std::uint64_t next_u64();

    /// Uniform in [0, 1).
    double uniform() { return unit_closed_open(next_u64()); }

    /// Uniform in (0, 1].
    double uniform_pos() { return unit_open_closed(next_u64()); }

    /// Exponential with the given rate, by inversion of one uniform.
    double exponential(double rate);

private:
    std::array<std::uint32_t, 2> key_;
    std::uint32_t a_, b_, c_;
    std::uint32_t block_ = 0;
    std::array<std::uint32_t, 4> buffer_{};
    int used_ = 2;
};

/// Single uniform in [0, 1) addressed by (seed, a, b, c). Equivalent to the
/// first draw of CounterStream(seed, a, b, c).
double uniform_at(Seed seed, std::uint32_t a, std::uint32_t b, std::uint32_t c);

} // namespace tcsim
