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

#ifndef PSEUDOFORGE_SPELL_HPP_
#define PSEUDOFORGE_SPELL_HPP_

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "pseudoforge/corpus.hpp"
#include "pseudoforge/random.hpp"

namespace pseudoforge {

// Synthetic spelling errors: per-character noise on the source side of
// pseudo pairs at a fixed rate (default 0.003).
struct SpellNoiseConfig {
  double rate = 0.003;
  // Candidate code points for insertion and replacement draws. Must be
  // non-empty and whitespace-free (a whitespace draw would split tokens).
  std::u32string alphabet;

  void validate() const;
};

enum class SpellOp : std::uint8_t {
  kDelete = 0,
  kInsert = 1,
  kReplace = 2,
  kTranspose = 3,
};

// One planned edit at an original-string position. `ch` is the materialized
// alphabet draw for insert/replace.
struct CharEdit {
  std::size_t pos = 0;
  SpellOp op = SpellOp::kDelete;
  char32_t ch = 0;
};

struct SpellNoiseStats {
  std::uint64_t characters = 0;
  std::array<std::uint64_t, 4> applied{};  // indexed by SpellOp

  std::uint64_t total_applied() const {
    return applied[0] + applied[1] + applied[2] + applied[3];
  }
  void merge(const SpellNoiseStats& other);
};

// Applies edits (sorted by position, at most one per position) to the
// original characters, left to right. Transposition at the final character
// is skipped; a transposition consumes the following character, suppressing
// that character's own pending edit. Only edits that take effect are counted
// into stats.
std::u32string apply_char_edits(const std::u32string& chars,
                                const std::vector<CharEdit>& edits,
                                SpellNoiseStats* stats = nullptr);

// Per-character noising of one sentence. Each original character is an
// operation site with probability rate; the operation is uniform over the
// four kinds. Tokens that become empty are dropped; whitespace is never a
// site (token separators are not characters here).
Sentence inject_spelling_noise(const Sentence& sentence,
                               const SpellNoiseConfig& config,
                               RandomSource& rng,
                               SpellNoiseStats* stats = nullptr);

// Noises the source side of every pair with stream (base_seed, pair index).
// Output kind is pseudo.
Corpus inject_spelling_noise_corpus(const Corpus& corpus,
                                    const SpellNoiseConfig& config,
                                    std::uint64_t base_seed, int workers = 0,
                                    SpellNoiseStats* stats = nullptr);

// Sorted unique non-whitespace code points observed in the corpus tokens
// (both sides). The default alphabet when none is supplied.
std::u32string alphabet_from_corpus(const Corpus& corpus);

}  // namespace pseudoforge

#endif  // PSEUDOFORGE_SPELL_HPP_
