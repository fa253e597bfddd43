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

#ifndef PSEUDOFORGE_BPE_HPP_
#define PSEUDOFORGE_BPE_HPP_

#include <cstddef>
#include <filesystem>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "pseudoforge/corpus.hpp"

namespace pseudoforge {

// Ordered byte-pair-encoding merge rules. Entry order is learning order;
// non-word-final subwords carry the trailing continuation marker ("sand@@").
// The marker is reserved: raw corpus text must not contain it as part of a
// word, or decoding becomes ambiguous (the usual convention of "@@"-marked
// subword tooling).
struct MergeTable {
  std::vector<std::pair<std::string, std::string>> merges;
  std::string marker = "@@";
};

// A sentence of subword tokens produced by apply_bpe.
struct SubwordSentence {
  std::vector<Token> tokens;

  friend bool operator==(const SubwordSentence&,
                         const SubwordSentence&) = default;
};

// Learns up to num_merges merge rules from the target side of the corpus.
// Each selected pair is maximally frequent (weighted by word frequency) at
// its step; ties break lexicographically on (left, right); learning stops
// early when no pair occurs at least twice. Empty corpus raises
// ValidationError.
MergeTable learn_bpe(const Corpus& corpus, std::size_t num_merges);

// Segments one sentence: per word, merges replay greedily in table order
// (each rule rewrites all adjacent occurrences left to right before the next
// rule applies); words never merge across whitespace. Unknown words degrade
// to marked code-point sequences.
SubwordSentence apply_bpe(const Sentence& sentence, const MergeTable& table);

// Inverse of apply_bpe: concatenates marker chains. A dangling marker on the
// sentence-final token raises ValidationError.
Sentence decode_bpe(const SubwordSentence& subwords,
                    const std::string& marker = "@@");

// Precomputed form of a merge table for repeated application. Stateless
// after construction; safe for concurrent use.
class BpeApplier {
 public:
  explicit BpeApplier(MergeTable table);

  const MergeTable& table() const { return table_; }

  std::vector<Token> segment_word(const std::string& word) const;
  SubwordSentence segment(const Sentence& sentence) const;

 private:
  MergeTable table_;
  std::unordered_map<std::string, int> ranks_;  // "left\tright" -> merge index
};

// Segments both sides of every pair. Words are segmented once per distinct
// surface form (two-pass over the vocabulary), which is substantially faster
// than per-sentence application on natural text; results are identical.
Corpus segment_corpus(const Corpus& corpus, const BpeApplier& applier,
                      int workers = 0);

// Merge-table file: header line "#version: pseudo-forge-bpe-1", then one
// "left right" rule per line in learning order.
void write_merge_table(const MergeTable& table,
                       const std::filesystem::path& path);
MergeTable read_merge_table(const std::filesystem::path& path);

std::string format_merge_table(const MergeTable& table);
MergeTable parse_merge_table(std::string_view text);

}  // namespace pseudoforge

#endif  // PSEUDOFORGE_BPE_HPP_
