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

#ifndef PSEUDOFORGE_EVAL_HPP_
#define PSEUDOFORGE_EVAL_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "pseudoforge/corpus.hpp"

namespace pseudoforge {

// A token-span rewrite: source tokens [start, end) become `replacement`.
// Never a no-op (the replacement differs from the spanned tokens).
struct Edit {
  std::size_t start = 0;
  std::size_t end = 0;
  std::vector<Token> replacement;

  friend bool operator==(const Edit&, const Edit&) = default;
  auto operator<=>(const Edit&) const = default;
};

// Minimal-cost token alignment (Levenshtein, substitution 1, indel 1) with
// adjacent non-match operations merged into span edits. Deterministic:
// among minimal alignments, substitutions are preferred over insert+delete
// pairs and edits land leftmost. Returned edits are sorted by span.
std::vector<Edit> extract_edits(const Sentence& source,
                                const Sentence& corrected);

// Applies edits (sorted, non-overlapping) to the source; inverse check for
// extract_edits.
Sentence apply_edits(const Sentence& source, const std::vector<Edit>& edits);

// (1 + beta^2) P R / (beta^2 P + R), 0 when both are 0. Accepts P and R on
// the 0-1 or 0-100 scale (the formula is scale-invariant). Negative inputs
// raise DomainError.
double f_beta(double precision, double recall, double beta);

struct ScoreReport {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;
  double precision = 1.0;  // in [0, 1]; 1 when tp + fp == 0
  double recall = 1.0;     // in [0, 1]; 1 when tp + fn == 0
  double f_half = 1.0;
};

// Edit-overlap scoring against one or more reference corpora. Per sentence,
// hypothesis edits are compared with the gold edits of the reference that
// maximizes (tp, -fp, -fn) lexicographically (earliest reference wins ties);
// counts accumulate over the corpus. This is a desk-scale simplification:
// no error types, no edit-lattice maximization, and scores are NOT
// comparable to published ERRANT / M2 numbers. Length mismatches raise
// ValidationError naming the offending input.
ScoreReport score_corpus(const std::vector<Sentence>& sources,
                         const std::vector<Sentence>& hypotheses,
                         const std::vector<std::vector<Sentence>>& references);

// "TP FP FN P R F0.5" with percentages to one decimal.
std::string format_score_line(const ScoreReport& report);

// Machine-readable JSON record of the same report.
std::string format_score_json(const ScoreReport& report);

}  // namespace pseudoforge

#endif  // PSEUDOFORGE_EVAL_HPP_
