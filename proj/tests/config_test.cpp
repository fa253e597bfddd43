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

#include "doctest.h"
#include "helpers.hpp"
#include "pseudoforge/error.hpp"
#include "pseudoforge/noise.hpp"

using namespace pseudoforge;
namespace pt = pseudoforge::testing;

TEST_CASE("defaults are the tuned operating point and self-consistent") {
  const PipelineConfig config;
  config.validate();
  CHECK(config.mu_mask == 0.5);
  CHECK(config.beta_random == 6.0);
  CHECK(config.beam_width == 5);
  CHECK(config.length_normalize);
  CHECK(config.sse_rate == 0.003);
  CHECK(config.bpe_merges == 8000);
  const NoiseSpec spec = derive_spec(config.mu_mask);
  CHECK(spec.mu_keep == doctest::Approx(0.2));
}

TEST_CASE("config files parse, with comments and spacing") {
  const PipelineConfig config = parse_config(
      "# experiment A\n"
      "mu-mask = 0.3\n"
      "beta-random=8\n"
      "  beam-width =  12\n"
      "length-normalize = off\n"
      "seed = 77\n");
  CHECK(config.mu_mask == 0.3);
  CHECK(config.beta_random == 8.0);
  CHECK(config.beam_width == 12);
  CHECK_FALSE(config.length_normalize);
  CHECK(config.seed == 77);
  CHECK(config.sse_rate == 0.003);  // untouched default
}

TEST_CASE("unknown keys and bad values are parse errors") {
  CHECK_THROWS_AS(parse_config("mystery = 1\n"), ParseError);
  CHECK_THROWS_AS(parse_config("mu-mask = lots\n"), ParseError);
  CHECK_THROWS_AS(parse_config("just a line\n"), ParseError);
}

TEST_CASE("out-of-domain values fail validation") {
  CHECK_THROWS_AS(parse_config("mu-mask = 0.9\n"), DomainError);
  CHECK_THROWS_AS(parse_config("beam-width = 0\n"), ValidationError);
  CHECK_THROWS_AS(parse_config("sse-rate = 1.5\n"), ValidationError);
}

TEST_CASE("format and reparse is stable") {
  PipelineConfig config;
  config.mu_mask = 0.7;
  config.workers = 4;
  config.seed = 99;
  const std::string text = format_config(config);
  const PipelineConfig back = parse_config(text);
  CHECK(format_config(back) == text);
  CHECK(back.mu_mask == 0.7);
  CHECK(back.workers == 4);
}

TEST_CASE("config files load from disk") {
  pt::TempDir dir("config");
  std::ofstream(dir.file("pf.conf")) << "seed = 5\nmax-len = 32\n";
  const PipelineConfig config = load_config(dir.file("pf.conf"));
  CHECK(config.seed == 5);
  CHECK(config.max_len == 32);
  CHECK_THROWS_AS(load_config(dir.file("missing.conf")), IoError);
}
