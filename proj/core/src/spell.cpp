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

#include "pseudoforge/spell.hpp"

#include <algorithm>
#include <set>

#include "pseudoforge/error.hpp"
#include "pseudoforge/parallel.hpp"
#include "pseudoforge/utf8.hpp"

namespace pseudoforge {

namespace {

bool is_whitespace(char32_t cp) {
  return cp == U' ' || cp == U'\t' || cp == U'\n' || cp == U'\r';
}

}  // namespace

void SpellNoiseConfig::validate() const {
  if (!(rate >= 0.0 && rate <= 1.0)) {
    throw ValidationError("sse rate must lie in [0, 1]");
  }
  if (alphabet.empty()) {
    throw ValidationError("sse alphabet is empty");
  }
  for (const char32_t cp : alphabet) {
    if (is_whitespace(cp)) {
      throw ValidationError("sse alphabet must not contain whitespace");
    }
  }
}

void SpellNoiseStats::merge(const SpellNoiseStats& other) {
  characters += other.characters;
  for (std::size_t i = 0; i < applied.size(); ++i) {
    applied[i] += other.applied[i];
  }
}

std::u32string apply_char_edits(const std::u32string& chars,
                                const std::vector<CharEdit>& edits,
                                SpellNoiseStats* stats) {
  std::u32string out;
  out.reserve(chars.size() + edits.size());
  std::size_t e = 0;
  bool consumed_by_transpose = false;
  for (std::size_t i = 0; i < chars.size(); ++i) {
    const CharEdit* edit = nullptr;
    if (e < edits.size() && edits[e].pos == i) {
      edit = &edits[e];
      ++e;
    }
    if (consumed_by_transpose) {
      consumed_by_transpose = false;
      continue;  // character already emitted; its own edit is suppressed
    }
    if (edit == nullptr) {
      out.push_back(chars[i]);
      continue;
    }
    switch (edit->op) {
      case SpellOp::kDelete:
        if (stats != nullptr) ++stats->applied[0];
        break;
      case SpellOp::kInsert:
        out.push_back(edit->ch);
        out.push_back(chars[i]);
        if (stats != nullptr) ++stats->applied[1];
        break;
      case SpellOp::kReplace:
        out.push_back(edit->ch);
        if (stats != nullptr) ++stats->applied[2];
        break;
      case SpellOp::kTranspose:
        if (i + 1 < chars.size()) {
          out.push_back(chars[i + 1]);
          out.push_back(chars[i]);
          consumed_by_transpose = true;
          if (stats != nullptr) ++stats->applied[3];
        } else {
          out.push_back(chars[i]);  // no following character: skipped
        }
        break;
    }
  }
  return out;
}

Sentence inject_spelling_noise(const Sentence& sentence,
                               const SpellNoiseConfig& config,
                               RandomSource& rng, SpellNoiseStats* stats) {
  config.validate();
  Sentence out;
  out.tokens.reserve(sentence.size());
  for (const Token& token : sentence.tokens) {
    const std::u32string chars = utf8::decode(token);
    if (stats != nullptr) stats->characters += chars.size();

    // Sites and operations are decided on the original string, one draw
    // sequence per position, before any edit is applied.
    std::vector<CharEdit> edits;
    for (std::size_t i = 0; i < chars.size(); ++i) {
      if (rng.next_double() >= config.rate) continue;
      CharEdit edit;
      edit.pos = i;
      edit.op = static_cast<SpellOp>(rng.next_below(4));
      if (edit.op == SpellOp::kInsert || edit.op == SpellOp::kReplace) {
        edit.ch = config.alphabet[rng.next_below(config.alphabet.size())];
      }
      edits.push_back(edit);
    }

    std::u32string noised =
        edits.empty() ? chars : apply_char_edits(chars, edits, stats);
    if (noised.empty()) continue;  // token fully deleted
    out.tokens.push_back(utf8::encode(noised));
  }
  return out;
}

Corpus inject_spelling_noise_corpus(const Corpus& corpus,
                                    const SpellNoiseConfig& config,
                                    std::uint64_t base_seed, int workers,
                                    SpellNoiseStats* stats) {
  config.validate();
  Corpus out;
  out.kind = CorpusKind::kPseudo;
  out.pairs.resize(corpus.size());
  std::vector<SpellNoiseStats> per_pair(stats != nullptr ? corpus.size() : 0);
  parallel_for(corpus.size(), workers, [&](std::size_t n) {
    RandomSource rng(base_seed, n);
    ParallelPair pair = corpus.pairs[n];
    pair.source = inject_spelling_noise(
        pair.source, config, rng, stats != nullptr ? &per_pair[n] : nullptr);
    out.pairs[n] = std::move(pair);
  });
  if (stats != nullptr) {
    for (const SpellNoiseStats& s : per_pair) stats->merge(s);
  }
  return out;
}

std::u32string alphabet_from_corpus(const Corpus& corpus) {
  std::set<char32_t> seen;
  for (const ParallelPair& pair : corpus.pairs) {
    for (const Sentence* side : {&pair.source, &pair.target}) {
      for (const Token& token : side->tokens) {
        for (const char32_t cp : utf8::decode(token)) {
          if (!is_whitespace(cp)) seen.insert(cp);
        }
      }
    }
  }
  return std::u32string(seen.begin(), seen.end());
}

}  // namespace pseudoforge
