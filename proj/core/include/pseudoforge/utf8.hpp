// Copyright 2026 The pseudoforge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PSEUDOFORGE_UTF8_HPP_
#define PSEUDOFORGE_UTF8_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace pseudoforge::utf8 {

// Strict UTF-8 validation: rejects overlong encodings, surrogates and
// code points above U+10FFFF. On failure returns false and, if bad_pos is
// non-null, the byte offset of the offending sequence.
bool validate(std::string_view bytes, std::size_t* bad_pos = nullptr);

// Splits a valid UTF-8 string into one std::string per code point.
// Invalid input raises ParseError.
std::vector<std::string> split_code_points(std::string_view bytes);

// Decodes to code points / re-encodes. Invalid input raises ParseError.
std::u32string decode(std::string_view bytes);
std::string encode(std::u32string_view code_points);
std::string encode_one(char32_t code_point);

// Number of code points in a valid UTF-8 string.
std::size_t count_code_points(std::string_view bytes);

}  // namespace pseudoforge::utf8

#endif  // PSEUDOFORGE_UTF8_HPP_
