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

#include "pseudoforge/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "pseudoforge/error.hpp"
#include "pseudoforge/noise.hpp"

namespace pseudoforge {

namespace {

std::string_view trim(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) {
    text.remove_prefix(1);
  }
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t')) {
    text.remove_suffix(1);
  }
  return text;
}

template <typename T>
T parse_number(std::string_view value, std::size_t line_no) {
  T out{};
  const auto [ptr, ec] =
      std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw ParseError("bad numeric value '" + std::string(value) + "'",
                     line_no);
  }
  return out;
}

bool parse_bool(std::string_view value, std::size_t line_no) {
  if (value == "true" || value == "on" || value == "1") return true;
  if (value == "false" || value == "off" || value == "0") return false;
  throw ParseError("bad boolean value '" + std::string(value) + "'", line_no);
}

std::string format_double(double value) {
  char buffer[32];
  const auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value,
                                       std::chars_format::general);
  return std::string(buffer, end);
}

}  // namespace

void PipelineConfig::validate() const {
  derive_spec(mu_mask);  // checks the [0, 0.8] domain
  if (!(beta_random >= 0.0)) {
    throw ValidationError("config: beta-random must be non-negative");
  }
  if (beam_width < 1) throw ValidationError("config: beam-width must be >= 1");
  if (max_len < 1) throw ValidationError("config: max-len must be >= 1");
  if (!(sse_rate >= 0.0 && sse_rate <= 1.0)) {
    throw ValidationError("config: sse-rate must lie in [0, 1]");
  }
  if (workers < 0) throw ValidationError("config: workers must be >= 0");
}

PipelineConfig parse_config(std::string_view text) {
  PipelineConfig config;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    const std::string_view raw = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError("config line is not 'key = value'", line_no);
    }
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    if (key == "mu-mask") {
      config.mu_mask = parse_number<double>(value, line_no);
    } else if (key == "beta-random") {
      config.beta_random = parse_number<double>(value, line_no);
    } else if (key == "beam-width") {
      config.beam_width = parse_number<int>(value, line_no);
    } else if (key == "max-len") {
      config.max_len = parse_number<int>(value, line_no);
    } else if (key == "length-normalize") {
      config.length_normalize = parse_bool(value, line_no);
    } else if (key == "sse-rate") {
      config.sse_rate = parse_number<double>(value, line_no);
    } else if (key == "bpe-merges") {
      config.bpe_merges = parse_number<std::uint64_t>(value, line_no);
    } else if (key == "seed") {
      config.seed = parse_number<std::uint64_t>(value, line_no);
    } else if (key == "workers") {
      config.workers = parse_number<int>(value, line_no);
    } else {
      throw ParseError("unknown config key '" + std::string(key) + "'",
                       line_no);
    }
  }
  config.validate();
  return config;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    throw IoError("no such file: " + path.string());
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string format_config(const PipelineConfig& config) {
  std::string out;
  out += "mu-mask = " + format_double(config.mu_mask) + "\n";
  out += "beta-random = " + format_double(config.beta_random) + "\n";
  out += "beam-width = " + std::to_string(config.beam_width) + "\n";
  out += "max-len = " + std::to_string(config.max_len) + "\n";
  out += std::string("length-normalize = ") +
         (config.length_normalize ? "true" : "false") + "\n";
  out += "sse-rate = " + format_double(config.sse_rate) + "\n";
  out += "bpe-merges = " + std::to_string(config.bpe_merges) + "\n";
  out += "seed = " + std::to_string(config.seed) + "\n";
  out += "workers = " + std::to_string(config.workers) + "\n";
  return out;
}

}  // namespace pseudoforge
