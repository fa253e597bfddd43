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

#ifndef PSEUDOFORGE_CONFIG_HPP_
#define PSEUDOFORGE_CONFIG_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace pseudoforge {

// Shared defaults for every pipeline stage. The values are the paper-tuned
// operating point: mu vector (0.5, 0.15, 0.15, 0.2), beta_random 6, beam 5
// with length normalization, SSE rate 0.003, 8000 BPE merges.
struct PipelineConfig {
  double mu_mask = 0.5;
  double beta_random = 6.0;
  int beam_width = 5;
  int max_len = 200;
  bool length_normalize = true;
  double sse_rate = 0.003;
  std::uint64_t bpe_merges = 8000;
  std::uint64_t seed = 1;
  int workers = 0;  // 0 = logical core count

  void validate() const;
};

// Flat, line-oriented "key = value" file, kebab-case keys matching the CLI
// flags (mu-mask, beta-random, beam-width, max-len, length-normalize,
// sse-rate, bpe-merges, seed, workers). Unknown keys are errors. '#' lines
// are comments.
PipelineConfig parse_config(std::string_view text);
PipelineConfig load_config(const std::filesystem::path& path);
std::string format_config(const PipelineConfig& config);

}  // namespace pseudoforge

#endif  // PSEUDOFORGE_CONFIG_HPP_
