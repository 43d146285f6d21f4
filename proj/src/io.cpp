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

#include "tcsim/io.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace tcsim {

std::string format_double(double value) {
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    if (ec != std::errc{})
        throw std::runtime_error("cannot format double");
    return std::string(buf.data(), ptr);
}

std::string encode_rle(std::span<const std::uint8_t> bits) {
    std::string out;
    std::size_t i = 0;
    while (i < bits.size()) {
        const bool one = bits[i] != 0;
        std::size_t j = i;
        while (j < bits.size() && (bits[j] != 0) == one)
            ++j;
        if (j - i > 1)
            out += std::to_string(j - i);
        out += one ? 'o' : 'b';
        i = j;
    }
    return out;
}

std::vector<std::uint8_t> decode_rle(std::string_view text) {
    std::vector<std::uint8_t> out;
    std::size_t run = 0;
    bool have_count = false;
    for (char c : text) {
        if (c >= '0' && c <= '9') {
            run = run * 10 + static_cast<std::size_t>(c - '0');
            have_count = true;
        } else if (c == 'o' || c == 'b') {
            out.insert(out.end(), have_count ? run : 1, c == 'o' ? 1 : 0);
            run = 0;
            have_count = false;
        } else {
            throw std::invalid_argument(std::string("bad RLE character '") + c + "'");
        }
    }
    if (have_count)
        throw std::invalid_argument("RLE ends with a dangling count");
    return out;
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace tcsim
