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

#include "pseudoforge/utf8.hpp"

#include "pseudoforge/error.hpp"

namespace pseudoforge::utf8 {

namespace {

// Decodes one code point starting at bytes[pos]. Returns the code point and
// advances pos, or returns -1 on malformed input leaving pos at the error.
std::int64_t decode_one(std::string_view bytes, std::size_t& pos) {
  const auto b0 = static_cast<unsigned char>(bytes[pos]);
  if (b0 < 0x80) {
    ++pos;
    return b0;
  }
  int len;
  std::uint32_t cp;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    cp = b0 & 0x07;
  } else {
    return -1;
  }
  if (pos + len > bytes.size()) return -1;
  for (int i = 1; i < len; ++i) {
    const auto bi = static_cast<unsigned char>(bytes[pos + i]);
    if ((bi & 0xC0) != 0x80) return -1;
    cp = (cp << 6) | (bi & 0x3F);
  }
  static constexpr std::uint32_t kMinByLen[5] = {0, 0, 0x80, 0x800, 0x10000};
  if (cp < kMinByLen[len]) return -1;               // overlong
  if (cp >= 0xD800 && cp <= 0xDFFF) return -1;      // surrogate
  if (cp > 0x10FFFF) return -1;
  pos += static_cast<std::size_t>(len);
  return cp;
}

}  // namespace

bool validate(std::string_view bytes, std::size_t* bad_pos) {
  std::size_t pos = 0;
  while (pos < bytes.size()) {
    const std::size_t start = pos;
    if (decode_one(bytes, pos) < 0) {
      if (bad_pos != nullptr) *bad_pos = start;
      return false;
    }
  }
  return true;
}

std::vector<std::string> split_code_points(std::string_view bytes) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos < bytes.size()) {
    const std::size_t start = pos;
    if (decode_one(bytes, pos) < 0) {
      throw ParseError("invalid UTF-8 at byte offset " + std::to_string(pos));
    }
    out.emplace_back(bytes.substr(start, pos - start));
  }
  return out;
}

std::u32string decode(std::string_view bytes) {
  std::u32string out;
  std::size_t pos = 0;
  while (pos < bytes.size()) {
    const std::int64_t cp = decode_one(bytes, pos);
    if (cp < 0) {
      throw ParseError("invalid UTF-8 at byte offset " + std::to_string(pos));
    }
    out.push_back(static_cast<char32_t>(cp));
  }
  return out;
}

std::string encode_one(char32_t cp) {
  std::string out;
  const auto value = static_cast<std::uint32_t>(cp);
  if (value >= 0xD800 && value <= 0xDFFF) {
    throw ParseError("cannot encode surrogate code point");
  }
  if (value < 0x80) {
    out.push_back(static_cast<char>(value));
  } else if (value < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (value >> 6)));
    out.push_back(static_cast<char>(0x80 | (value & 0x3F)));
  } else if (value < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (value >> 12)));
    out.push_back(static_cast<char>(0x80 | ((value >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (value & 0x3F)));
  } else if (value <= 0x10FFFF) {
    out.push_back(static_cast<char>(0xF0 | (value >> 18)));
    out.push_back(static_cast<char>(0x80 | ((value >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((value >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (value & 0x3F)));
  } else {
    throw ParseError("code point out of range");
  }
  return out;
}

std::string encode(std::u32string_view code_points) {
  std::string out;
  for (const char32_t cp : code_points) out += encode_one(cp);
  return out;
}

std::size_t count_code_points(std::string_view bytes) {
  std::size_t count = 0;
  std::size_t pos = 0;
  while (pos < bytes.size()) {
    if (decode_one(bytes, pos) < 0) {
      throw ParseError("invalid UTF-8 at byte offset " + std::to_string(pos));
    }
    ++count;
  }
  return count;
}

}  // namespace pseudoforge::utf8
