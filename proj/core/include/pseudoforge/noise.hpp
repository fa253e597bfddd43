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

#ifndef PSEUDOFORGE_NOISE_HPP_
#define PSEUDOFORGE_NOISE_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "pseudoforge/corpus.hpp"
#include "pseudoforge/random.hpp"

namespace pseudoforge {

// The mask placeholder. Mathematical angle brackets (U+27E8/U+27E9) keep it
// from colliding with plain-text "<mask>" in web corpora; ingestion of seed
// and genuine corpora rejects it.
inline constexpr std::string_view kMaskToken = "⟨mask⟩";

// Per-token corruption distribution (mask, deletion, insertion, keep).
// Components must each lie in [0, 1] and sum to 1 within 1e-9.
struct NoiseSpec {
  double mu_mask = 0.0;
  double mu_deletion = 0.0;
  double mu_insertion = 0.0;
  double mu_keep = 1.0;

  // Raises ValidationError when a component is out of range or the sum is
  // off by more than 1e-9.
  void validate() const;
};

// The mask-probability family used throughout the experiments: mu_keep is
// pinned at 0.2 and the remainder splits evenly between insertion and
// deletion. mu_mask outside [0, 0.8] raises DomainError.
NoiseSpec derive_spec(double mu_mask);

// "mask,del,ins,keep" with shortest round-trip decimal fields.
std::string format_noise_spec(const NoiseSpec& spec);
NoiseSpec parse_noise_spec(std::string_view text);

// Unigram distribution over tokens with cumulative O(log n) sampling.
// Probabilities are count/total over the target side of the source corpus,
// every entry strictly positive.
class UnigramTable {
 public:
  double probability(const Token& token) const;  // 0 when absent
  const Token& sample(RandomSource& rng) const;
  std::size_t size() const { return tokens_.size(); }

  friend UnigramTable build_unigram_table(const Corpus& genuine);

 private:
  std::vector<Token> tokens_;       // sorted
  std::vector<double> probability_;
  std::vector<double> cumulative_;
};

// Counts the target side of the genuine corpus. Empty corpus raises
// ValidationError; a corpus containing the mask token is rejected.
UnigramTable build_unigram_table(const Corpus& genuine);

enum class NoiseAction : std::uint8_t { kMask, kDeletion, kInsertion, kKeep };

// Per-position corruption: independently draw an action per input token.
// keep appends the token; mask appends the placeholder; deletion appends
// nothing; insertion appends the token and then one unigram sample. Output
// length is in [0, 2J]. `actions`, when given, records the drawn action per
// input position.
Sentence direct_noise_sentence(const Sentence& grammatical,
                               const NoiseSpec& spec,
                               const UnigramTable& unigram, RandomSource& rng,
                               std::vector<NoiseAction>* actions = nullptr);

// Applies direct_noise_sentence to every sentence of a seed-monolingual
// corpus: pair n = (noised Y_n, Y_n), drawn from stream (base_seed, n), so
// results are worker-count- and order-independent. Output kind is pseudo.
Corpus generate_direct_noise_corpus(const Corpus& seed_corpus,
                                    const NoiseSpec& spec,
                                    const UnigramTable& unigram,
                                    std::uint64_t base_seed, int workers = 0);

// Raises ValidationError if any token of any side equals the mask token.
void ensure_mask_free(const Corpus& corpus, std::string_view what);

}  // namespace pseudoforge

#endif  // PSEUDOFORGE_NOISE_HPP_
