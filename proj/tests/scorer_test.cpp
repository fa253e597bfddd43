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

#include "pseudoforge/scorer.hpp"

#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "pseudoforge/error.hpp"

using namespace pseudoforge;
namespace pt = pseudoforge::testing;

namespace {

const char* kScorerText =
    "#version: pseudo-forge-toyscorer-1\n"
    "vocab: a b\n"
    "s ||| ||| a 0.7\n"
    "s ||| ||| eos 0.3\n"
    "s ||| a ||| b 0.9\n"
    "s ||| a ||| eos 0.1\n";

}  // namespace

TEST_CASE("stored distributions are returned exactly") {
  const ToyScorer scorer = parse_toy_scorer(kScorerText);
  const Sentence source{{"s"}};
  const auto dist = scorer.next_token_logprobs(source, {});
  REQUIRE(dist.size() == 2);
  CHECK(dist[0].token == "a");
  CHECK(dist[0].logprob == std::log(0.7));
  CHECK(dist[1].token == "eos");
  CHECK(dist[1].logprob == std::log(0.3));
}

TEST_CASE("unseen contexts fall back to uniform over vocab plus eos") {
  const ToyScorer scorer = parse_toy_scorer(kScorerText);
  const Sentence other{{"unseen"}};
  const auto dist = scorer.next_token_logprobs(other, {});
  REQUIRE(dist.size() == 3);  // a, b, eos
  for (const TokenLogProb& entry : dist) {
    CHECK(entry.logprob == doctest::Approx(std::log(1.0 / 3.0)));
  }
}

TEST_CASE("wildcard source matches every context") {
  const ToyScorer scorer = parse_toy_scorer(
      "#version: pseudo-forge-toyscorer-1\n"
      "vocab: a\n"
      "* ||| * ||| eos 1\n");
  for (const char* source_word : {"x", "y", "whatever"}) {
    const Sentence source{{source_word}};
    const auto dist = scorer.next_token_logprobs(source, {});
    REQUIRE(dist.size() == 1);
    CHECK(dist[0].token == "eos");
    CHECK(dist[0].logprob == 0.0);
  }
}

TEST_CASE("non-normalizing distribution is a validation error naming the key") {
  const char* text =
      "#version: pseudo-forge-toyscorer-1\n"
      "vocab: a\n"
      "s ||| ||| a 0.6\n"
      "s ||| ||| eos 0.3\n";
  CHECK_THROWS_WITH_AS(parse_toy_scorer(text), doctest::Contains("source 's'"),
                       ValidationError);
}

TEST_CASE("distributions must include eos") {
  const char* text =
      "#version: pseudo-forge-toyscorer-1\n"
      "vocab: a\n"
      "s ||| ||| a 1.0\n";
  CHECK_THROWS_AS(parse_toy_scorer(text), ValidationError);
}

TEST_CASE("scorer files round-trip") {
  pt::TempDir dir("toyscorer");
  const ToyScorer scorer = parse_toy_scorer(kScorerText);
  const std::string text = format_toy_scorer(scorer);
  std::ofstream(dir.file("model.scorer")) << text;
  const ToyScorer back = load_toy_scorer(dir.file("model.scorer"));
  CHECK(format_toy_scorer(back) == text);
  CHECK(back.vocabulary() == scorer.vocabulary());
}

TEST_CASE("sequence_logprob accumulates step scores plus eos") {
  const ToyScorer scorer = parse_toy_scorer(kScorerText);
  const Sentence source{{"s"}};
  const std::vector<Token> tokens{"a"};
  const double expected = std::log(0.7) + std::log(0.1);
  CHECK(sequence_logprob(scorer, source, tokens) ==
        doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("sequence_logprob gives -inf to tokens outside the candidates") {
  const ToyScorer scorer = parse_toy_scorer(kScorerText);
  const Sentence source{{"unseen"}};
  const std::vector<Token> tokens{"not-in-vocab"};
  CHECK(std::isinf(sequence_logprob(scorer, source, tokens)));
}

TEST_CASE("contract checker accepts hash scorers") {
  const pt::HashScorer scorer({"a", "b", "c"}, 5);
  const Sentence source{{"s"}};
  const auto dist = scorer.next_token_logprobs(source, {});
  CHECK(check_distribution(dist, "test") == doctest::Approx(1.0));
}

TEST_CASE("vocabulary must not contain eos") {
  CHECK_THROWS_AS(parse_toy_scorer("#version: pseudo-forge-toyscorer-1\n"
                                   "vocab: a eos\n"
                                   "* ||| * ||| eos 1\n"),
                  ValidationError);
}
