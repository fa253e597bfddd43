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

#include "pseudoforge/bpe.hpp"
#include "pseudoforge/random.hpp"

namespace {

using namespace pseudoforge;

Corpus synthetic_corpus(std::size_t sentences) {
  static const char* kSyllables[] = {"an", "ber", "co", "dun", "el",
                                     "fo", "gra", "hi", "jo",  "ku"};
  RandomSource rng(7, 0);
  Corpus corpus;
  corpus.kind = CorpusKind::kSeedMonolingual;
  for (std::size_t n = 0; n < sentences; ++n) {
    ParallelPair pair;
    const std::size_t words = 4 + rng.next_below(12);
    for (std::size_t w = 0; w < words; ++w) {
      Token token;
      const std::size_t syllables = 1 + rng.next_below(4);
      for (std::size_t s = 0; s < syllables; ++s) {
        token += kSyllables[rng.next_below(10)];
      }
      pair.target.tokens.push_back(std::move(token));
    }
    pair.source = pair.target;
    corpus.pairs.push_back(std::move(pair));
  }
  return corpus;
}

void BM_LearnBpe(benchmark::State& state) {
  const Corpus corpus = synthetic_corpus(2000);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        learn_bpe(corpus, static_cast<std::size_t>(state.range(0))));
  }
}

void BM_ApplyBpe(benchmark::State& state) {
  const Corpus corpus = synthetic_corpus(2000);
  const BpeApplier applier(
      learn_bpe(corpus, static_cast<std::size_t>(state.range(0))));
  RandomSource rng(9, 1);
  const Corpus fresh = synthetic_corpus(64);
  std::size_t tokens = 0;
  for (auto _ : state) {
    for (const ParallelPair& pair : fresh.pairs) {
      benchmark::DoNotOptimize(applier.segment(pair.target));
      tokens += pair.target.size();
    }
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(tokens));
}

}  // namespace

BENCHMARK(BM_LearnBpe)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ApplyBpe)->Arg(500)->Arg(2000);
