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

#include <benchmark/benchmark.h>

#include <cmath>

#include "pseudoforge/decode.hpp"
#include "pseudoforge/random.hpp"

namespace {

using namespace pseudoforge;

// Cheap deterministic scorer with a 16-token vocabulary.
class BenchScorer : public SequenceScorer {
 public:
  BenchScorer() {
    for (int i = 0; i < 16; ++i) vocab_.push_back("t" + std::to_string(i));
  }

  std::vector<TokenLogProb> next_token_logprobs(
      const Sentence& source, std::span<const Token> prefix) const override {
    std::uint64_t h = 1469598103934665603ull ^ source.size();
    for (const Token& token : prefix) {
      for (const char ch : token) {
        h = (h ^ static_cast<unsigned char>(ch)) * 1099511628211ull;
      }
    }
    RandomSource rng(h, prefix.size());
    std::vector<double> weights(vocab_.size() + 1);
    double total = 0.0;
    for (double& w : weights) {
      w = 0.1 + rng.next_double();
      total += w;
    }
    std::vector<TokenLogProb> out;
    out.reserve(weights.size());
    for (std::size_t i = 0; i < vocab_.size(); ++i) {
      out.push_back({vocab_[i], std::log(weights[i] / total)});
    }
    out.push_back({"eos", std::log(weights.back() / total)});
    return out;
  }

 private:
  std::vector<Token> vocab_;
};

void BM_NoisyBeam(benchmark::State& state) {
  const BenchScorer scorer;
  const Sentence source{{"s0", "s1", "s2"}};
  DecodeParams params;
  params.beam_width = static_cast<int>(state.range(0));
  params.max_len = 24;
  params.beta_random = 6.0;
  std::uint64_t stream = 0;
  for (auto _ : state) {
    RandomSource rng(3, stream++);
    benchmark::DoNotOptimize(
        beam_search_noisy(scorer, source, params, rng));
  }
}

void BM_SampleDecode(benchmark::State& state) {
  const BenchScorer scorer;
  const Sentence source{{"s0", "s1", "s2"}};
  std::uint64_t stream = 0;
  for (auto _ : state) {
    RandomSource rng(4, stream++);
    benchmark::DoNotOptimize(sample_decode(scorer, source, 24, rng));
  }
}

}  // namespace

BENCHMARK(BM_NoisyBeam)->Arg(1)->Arg(5)->Arg(20)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_SampleDecode)->Unit(benchmark::kMicrosecond);
