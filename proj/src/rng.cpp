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

#include "tcsim/rng.hpp"

#include <cmath>

namespace tcsim {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    std::uint64_t product = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(product >> 32);
    lo = static_cast<std::uint32_t>(product);
}

} // namespace

std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                           std::array<std::uint32_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kMul0, ctr[0], hi0, lo0);
        mulhilo(kMul1, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += kWeyl0;
        key[1] += kWeyl1;
    }
    return ctr;
}

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

Seed derive_seed(Seed master, std::uint64_t index) {
    return mix64(mix64(master) ^ mix64(index + 0x632BE59BD9B4E019ull));
}

std::uint64_t CounterStream::next_u64() {
    if (used_ == 2) {
        buffer_ = philox4x32_10({a_, b_, c_, block_++}, key_);
        used_ = 0;
    }
    const auto hi = static_cast<std::uint64_t>(buffer_[2 * used_]);
    const auto lo = static_cast<std::uint64_t>(buffer_[2 * used_ + 1]);
    ++used_;
    return (hi << 32) | lo;
}

double CounterStream::exponential(double rate) {
    return -std::log(uniform_pos()) / rate;
}

double uniform_at(Seed seed, std::uint32_t a, std::uint32_t b, std::uint32_t c) {
    CounterStream stream(seed, a, b, c);
    return stream.uniform();
}

} // namespace tcsim
