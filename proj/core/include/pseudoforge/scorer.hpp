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

#ifndef PSEUDOFORGE_SCORER_HPP_
#define PSEUDOFORGE_SCORER_HPP_

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "pseudoforge/corpus.hpp"

namespace pseudoforge {

// Reserved end-of-sequence name in scorer candidate sets and toy-scorer
// files. Decoders never emit it as a sentence token.
inline constexpr std::string_view kEosToken = "eos";

struct TokenLogProb {
  Token token;
  double logprob = 0.0;
};

// Contract for a conditional next-token model p(token | source, prefix).
// The returned candidates must be non-empty, include kEosToken, and their
// probabilities must sum to 1 within 1e-6. Implementations must be safe for
// concurrent read-only use. The trained neural reverse model of a real
// deployment plugs in here; this artifact ships the table-driven toy scorer.
class SequenceScorer {
 public:
  virtual ~SequenceScorer() = default;

  virtual std::vector<TokenLogProb> next_token_logprobs(
      const Sentence& source, std::span<const Token> prefix) const = 0;
};

// Validates the scorer contract on one distribution; raises ValidationError
// naming `context` when violated. Returns exp-sum for reuse.
double check_distribution(const std::vector<TokenLogProb>& candidates,
                          const std::string& context);

// Log-probability of a full token sequence (including the final eos step)
// under the scorer. Tokens absent from a step's candidate set score -inf.
double sequence_logprob(const SequenceScorer& scorer, const Sentence& source,
                        std::span<const Token> tokens);

struct TokenProb {
  Token token;
  double prob = 0.0;
};

// Table-driven scorer: explicit distributions keyed by (source, prefix),
// with "*" wildcards, falling back to uniform over vocabulary + eos. Lookup
// precedence: (source, prefix), (source, *), (*, prefix), (*, *), uniform.
class ToyScorer : public SequenceScorer {
 public:
  struct Key {
    std::string source;  // space-joined or "*"
    std::string prefix;  // space-joined or "*"
    auto operator<=>(const Key&) const = default;
  };

  // vocabulary must be non-empty and must not contain kEosToken. Every
  // distribution must sum to 1 within 1e-9 (ValidationError names the key).
  ToyScorer(std::vector<Token> vocabulary,
            std::map<Key, std::vector<TokenProb>> table);

  std::vector<TokenLogProb> next_token_logprobs(
      const Sentence& source, std::span<const Token> prefix) const override;

  const std::vector<Token>& vocabulary() const { return vocabulary_; }
  const std::map<Key, std::vector<TokenProb>>& table() const { return table_; }

 private:
  std::vector<Token> vocabulary_;
  std::map<Key, std::vector<TokenProb>> table_;
  std::vector<TokenProb> uniform_;
};

// Toy-scorer file format (header + one record per line):
//   #version: pseudo-forge-toyscorer-1
//   vocab: a b c
//   a b ||| a ||| b 0.5
//   a b ||| a ||| eos 0.5
// Fields are source ||| prefix ||| token probability; source and prefix may
// be "*" (any) or empty (empty sentence / empty prefix).
ToyScorer load_toy_scorer(const std::filesystem::path& path);
ToyScorer parse_toy_scorer(std::string_view text);
std::string format_toy_scorer(const ToyScorer& scorer);

}  // namespace pseudoforge

#endif  // PSEUDOFORGE_SCORER_HPP_
