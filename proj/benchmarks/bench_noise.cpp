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

#include "pseudoforge/noise.hpp"
#include "pseudoforge/random.hpp"
#include "pseudoforge/spell.hpp"

namespace {

using namespace pseudoforge;

Corpus make_unigram_corpus() {
  Corpus corpus;
  corpus.kind = CorpusKind::kSeedMonolingual;
  ParallelPair pair;
  for (int i = 0; i < 64; ++i) {
    pair.target.tokens.push_back("w" + std::to_string(i));
  }
  pair.source = pair.target;
  corpus.pairs.push_back(std::move(pair));
  return corpus;
}

void BM_DirectNoiseSentence(benchmark::State& state) {
  const UnigramTable unigram = build_unigram_table(make_unigram_corpus());
  const NoiseSpec spec = derive_spec(0.5);
  Sentence sentence;
  sentence.tokens.assign(static_cast<std::size_t>(state.range(0)), "token");
  std::uint64_t stream = 0;
  for (auto _ : state) {
    RandomSource rng(1, stream++);
    benchmark::DoNotOptimize(
        direct_noise_sentence(sentence, spec, unigram, rng));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_SpellNoiseSentence(benchmark::State& state) {
  SpellNoiseConfig config;
  config.rate = 0.003;
  config.alphabet = U"abcdefghijklmnopqrstuvwxyz";
  Sentence sentence;
  Token word;
  for (int i = 0; i < 8; ++i) word += 'a' + static_cast<char>(i);
  sentence.tokens.assign(static_cast<std::size_t>(state.range(0)), word);
  std::uint64_t stream = 0;
  std::size_t chars = 0;
  for (auto _ : state) {
    RandomSource rng(2, stream++);
    benchmark::DoNotOptimize(inject_spelling_noise(sentence, config, rng));
    chars += sentence.size() * 8;
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(chars));
}

}  // namespace

BENCHMARK(BM_DirectNoiseSentence)->Arg(16)->Arg(64)->Arg(256);
BENCHMARK(BM_SpellNoiseSentence)->Arg(16)->Arg(64)->Arg(256);
