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

#include "pseudoforge/decode.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pseudoforge/error.hpp"
#include "pseudoforge/noise.hpp"
#include "pseudoforge/parallel.hpp"

namespace pseudoforge {

namespace {

double normalized_raw(const Hypothesis& h, bool length_normalize) {
  if (!length_normalize) return h.raw_score;
  const auto denom = static_cast<double>(std::max<std::size_t>(1, h.tokens.size()));
  return h.raw_score / denom;
}

// Final ordering: normalized raw score descending, then tokens ascending so
// exact ties are platform-independent.
bool better_final(const Hypothesis& a, const Hypothesis& b,
                  bool length_normalize) {
  const double sa = normalized_raw(a, length_normalize);
  const double sb = normalized_raw(b, length_normalize);
  if (sa != sb) return sa > sb;
  return a.tokens < b.tokens;
}

// Pruning order for live expansions: noisy score descending, ties by raw
// then tokens.
bool better_live(const Hypothesis& a, const Hypothesis& b) {
  if (a.noisy_score() != b.noisy_score()) {
    return a.noisy_score() > b.noisy_score();
  }
  if (a.raw_score != b.raw_score) return a.raw_score > b.raw_score;
  return a.tokens < b.tokens;
}

void keep_best(std::vector<Hypothesis>& pool, std::size_t limit,
               bool length_normalize) {
  std::sort(pool.begin(), pool.end(),
            [length_normalize](const Hypothesis& a, const Hypothesis& b) {
              return better_final(a, b, length_normalize);
            });
  if (pool.size() > limit) pool.resize(limit);
}

}  // namespace

void DecodeParams::validate() const {
  if (beam_width < 1) throw ValidationError("beam width must be >= 1");
  if (max_len < 1) throw ValidationError("max length must be >= 1");
  if (!(beta_random >= 0.0)) {
    throw ValidationError("beta_random must be non-negative");
  }
}

std::vector<ScoredSentence> beam_search_noisy(const SequenceScorer& scorer,
                                              const Sentence& source,
                                              const DecodeParams& params,
                                              RandomSource& rng,
                                              const BeamStepObserver& observer) {
  params.validate();
  const auto beam = static_cast<std::size_t>(params.beam_width);

  std::vector<Hypothesis> live(1);
  std::vector<Hypothesis> finished;

  for (int step = 1; step <= params.max_len && !live.empty(); ++step) {
    // Every hypothesis in the beam takes a fresh perturbation this step;
    // children inherit it, so earlier noise persists in the noisy score.
    for (Hypothesis& h : live) {
      h.noise_acc += rng.next_double() * params.beta_random;
    }

    std::vector<Hypothesis> expansions;
    for (const Hypothesis& h : live) {
      const auto candidates =
          scorer.next_token_logprobs(source, std::span<const Token>(h.tokens));
      check_distribution(candidates, "beam step " + std::to_string(step));
      for (const TokenLogProb& cand : candidates) {
        if (cand.token == kEosToken) {
          Hypothesis done = h;
          done.raw_score += cand.logprob;
          done.finished = true;
          finished.push_back(std::move(done));
        } else {
          Hypothesis child = h;
          child.tokens.push_back(cand.token);
          child.raw_score += cand.logprob;
          expansions.push_back(std::move(child));
        }
      }
    }

    std::sort(expansions.begin(), expansions.end(), better_live);
    if (expansions.size() > beam) expansions.resize(beam);
    live = std::move(expansions);

    keep_best(finished, beam, params.length_normalize);
    if (observer) observer(step, std::span<const Hypothesis>(live));
  }

  // Anything still alive at max_len finalizes without an eos bonus.
  for (Hypothesis& h : live) {
    h.finished = true;
    finished.push_back(std::move(h));
  }
  keep_best(finished, beam, params.length_normalize);

  std::vector<ScoredSentence> out;
  out.reserve(finished.size());
  for (Hypothesis& h : finished) {
    const double score = normalized_raw(h, params.length_normalize);
    out.push_back({Sentence{std::move(h.tokens)}, score});
  }
  return out;
}

Sentence sample_decode(const SequenceScorer& scorer, const Sentence& source,
                       int max_len, RandomSource& rng) {
  if (max_len < 1) throw ValidationError("max length must be >= 1");
  Sentence out;
  for (int step = 1; step <= max_len; ++step) {
    auto candidates =
        scorer.next_token_logprobs(source, std::span<const Token>(out.tokens));
    const double total = check_distribution(
        candidates, "sample step " + std::to_string(step));
    // Candidates are sorted so the cumulative walk is platform-independent.
    std::sort(candidates.begin(), candidates.end(),
              [](const TokenLogProb& a, const TokenLogProb& b) {
                return a.token < b.token;
              });
    const double u = rng.next_double() * total;
    double running = 0.0;
    const TokenLogProb* chosen = &candidates.back();
    for (const TokenLogProb& cand : candidates) {
      running += std::exp(cand.logprob);
      if (u < running) {
        chosen = &cand;
        break;
      }
    }
    if (chosen->token == kEosToken) break;
    out.tokens.push_back(chosen->token);
  }
  return out;
}

Corpus backtranslate_corpus(const Corpus& seed_corpus,
                            const SequenceScorer& scorer,
                            BacktransMethod method, const DecodeParams& params,
                            std::uint64_t base_seed, int workers) {
  if (seed_corpus.kind != CorpusKind::kSeedMonolingual) {
    throw ValidationError("backtranslation expects a seed-monolingual corpus");
  }
  ensure_mask_free(seed_corpus, "seed corpus");
  params.validate();

  Corpus out;
  out.kind = CorpusKind::kPseudo;
  out.pairs.resize(seed_corpus.size());
  parallel_for(seed_corpus.size(), workers, [&](std::size_t n) {
    RandomSource rng(base_seed, n);
    const Sentence& target = seed_corpus.pairs[n].target;
    ParallelPair pair;
    if (method == BacktransMethod::kNoisy) {
      auto nbest = beam_search_noisy(scorer, target, params, rng);
      if (nbest.empty()) {
        throw ValidationError("beam search returned no hypotheses");
      }
      pair.source = std::move(nbest.front().sentence);
    } else {
      pair.source = sample_decode(scorer, target, params.max_len, rng);
    }
    pair.target = target;
    out.pairs[n] = std::move(pair);
  });
  return out;
}

}  // namespace pseudoforge
