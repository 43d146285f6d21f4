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
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tcsim {

/// Shortest decimal that round-trips to the same double ('.' decimal).
std::string format_double(double value);

/// Run-length encoding of a bit string in canonical site order: runs of
/// 1 are 'o', runs of 0 are 'b', each prefixed by its length when > 1.
/// Example: {1,1,1,0,1} -> "3obo".
std::string encode_rle(std::span<const std::uint8_t> bits);
std::vector<std::uint8_t> decode_rle(std::string_view text);

/// Writes `content` to `path`, creating parent directories.
void write_text_file(const std::filesystem::path& path, std::string_view content);
std::string read_text_file(const std::filesystem::path& path);

} // namespace tcsim
