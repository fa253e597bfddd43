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

#ifndef PSEUDOFORGE_RERANK_HPP_
#define PSEUDOFORGE_RERANK_HPP_

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "pseudoforge/corpus.hpp"
#include "pseudoforge/scorer.hpp"

namespace pseudoforge {

struct NBestCandidate {
  Sentence sentence;
  double l2r_score = 0.0;
};

// An n-best list for one source sentence. Construct via make_nbest_list,
// which sorts candidates by l2r_score descending (stable) and requires at
// least one candidate; rerank_r2l returns lists in combined-score order.
struct NBestList {
  Sentence source;
  std::vector<NBestCandidate> candidates;
};

NBestList make_nbest_list(Sentence source,
                          std::vector<NBestCandidate> candidates);

// Arithmetic mean of per-model log-probabilities (geometric mean of
// probabilities). Empty input raises ValidationError.
double ensemble_combine(std::span<const double> scores);

// Right-to-left scores for one candidate, as computed by rerank_r2l.
struct RerankDetail {
  double l2r = 0.0;
  double r2l = 0.0;
  double combined = 0.0;
};

// Scores each candidate's reversed token sequence under the given scorer
// ensemble (mean of per-model sequence log-probabilities), normalizes by
// token count when length_normalize is set (the l2r side is assumed to
// arrive with matching normalization), and re-sorts by l2r + r2l descending
// with ties kept in original rank order. Output candidates are a permutation
// of the input; `detail`, when given, is filled in output order.
NBestList rerank_r2l(const NBestList& nbest,
                     std::span<const SequenceScorer* const> r2l_scorers,
                     bool length_normalize = true,
                     std::vector<RerankDetail>* detail = nullptr);

// Binary sentence-level error detector: true = the sentence contains a
// grammatical error. Must be pure.
class ErrorDetector {
 public:
  virtual ~ErrorDetector() = default;
  virtual bool detects_error(const Sentence& sentence) const = 0;
};

// Default stand-in: flags every sentence, making the gate pass corrections
// through unchanged. A real (e.g. BERT-based) detector plugs in via the
// ErrorDetector interface or the verdict-file exchange.
class AlwaysErrorDetector : public ErrorDetector {
 public:
  bool detects_error(const Sentence&) const override { return true; }
};

// Applies the correction only when the detector flags the source; otherwise
// the source passes through verbatim.
Sentence sed_gate(const ErrorDetector& detector, const Sentence& source,
                  const Sentence& correction);

// File-exchange form: verdicts[n] (0/1) gates pair n. Length mismatches
// raise ValidationError.
std::vector<Sentence> sed_gate_stream(const std::vector<Sentence>& sources,
                                      const std::vector<Sentence>& corrections,
                                      const std::vector<bool>& verdicts);

// N-best file: one "sentence-id ||| candidate tokens ||| score" line per
// candidate; lines with the same id are consecutive and form one list, in
// order of first appearance. Sources live in a separate aligned plain file.
struct NBestGroup {
  std::string id;
  std::vector<NBestCandidate> candidates;
};

std::vector<NBestGroup> parse_nbest_file(std::string_view text);
std::vector<NBestGroup> read_nbest_file(const std::filesystem::path& path);
std::string format_nbest_file(const std::vector<NBestGroup>& groups);
void write_nbest_file(const std::vector<NBestGroup>& groups,
                      const std::filesystem::path& path);

}  // namespace pseudoforge

#endif  // PSEUDOFORGE_RERANK_HPP_
