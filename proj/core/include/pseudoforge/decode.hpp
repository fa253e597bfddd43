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

#ifndef PSEUDOFORGE_DECODE_HPP_
#define PSEUDOFORGE_DECODE_HPP_

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "pseudoforge/corpus.hpp"
#include "pseudoforge/random.hpp"
#include "pseudoforge/scorer.hpp"

namespace pseudoforge {

struct DecodeParams {
  int beam_width = 5;
  int max_len = 200;
  double beta_random = 6.0;
  bool length_normalize = true;

  void validate() const;
};

// One beam entry. noisy_score() is the pruning key: the raw cumulative
// log-probability plus every per-step perturbation this hypothesis has
// inherited. With beta_random = 0 the two scores coincide.
struct Hypothesis {
  std::vector<Token> tokens;
  double raw_score = 0.0;
  double noise_acc = 0.0;
  bool finished = false;

  double noisy_score() const { return raw_score + noise_acc; }
};

struct ScoredSentence {
  Sentence sentence;
  double score = 0.0;  // raw, length-normalized when enabled
};

// Called once per step with the surviving (pruned) live beam; hypotheses at
// step t carry exactly t accumulated perturbations. Used by tests to check
// the 0 <= noisy - raw <= t * beta bound.
using BeamStepObserver =
    std::function<void(int step, std::span<const Hypothesis> live)>;

// Noisy beam search: per step, every live hypothesis receives a fresh
// perturbation r * beta_random (r uniform in [0, 1)) on its cumulative
// noisy score; expansion, pruning and the finished-pool cut use the noisy
// score, while the returned ranking and reported scores use the raw score
// (length-normalized when enabled). Hypotheses finish on eos or at max_len.
// Returns up to beam_width results, best first; ties order lexicographically
// by tokens. Scorer contract violations raise ValidationError.
std::vector<ScoredSentence> beam_search_noisy(
    const SequenceScorer& scorer, const Sentence& source,
    const DecodeParams& params, RandomSource& rng,
    const BeamStepObserver& observer = nullptr);

// Ancestral sampling from the scorer's distributions until eos or max_len.
Sentence sample_decode(const SequenceScorer& scorer, const Sentence& source,
                       int max_len, RandomSource& rng);

enum class BacktransMethod { kNoisy, kSample };

// Pairs each seed sentence Y_n with a decoded source: top-1 noisy-beam
// output (kNoisy) or one ancestral sample (kSample). Sentence n draws from
// stream (base_seed, n); the target side stays untouched. Output kind is
// pseudo.
Corpus backtranslate_corpus(const Corpus& seed_corpus,
                            const SequenceScorer& scorer,
                            BacktransMethod method, const DecodeParams& params,
                            std::uint64_t base_seed, int workers = 0);

}  // namespace pseudoforge

#endif  // PSEUDOFORGE_DECODE_HPP_
