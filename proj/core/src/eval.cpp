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

#include "pseudoforge/eval.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

#include "pseudoforge/error.hpp"

namespace pseudoforge {

namespace {

enum class AlignOp : std::uint8_t { kMatch, kSubstitute, kDelete, kInsert };

// Backtrace preferring match, then substitution, then deletion, then
// insertion. Tracing from the end with match preferred first pushes the
// remaining edit operations leftmost.
std::vector<AlignOp> align(const std::vector<Token>& src,
                           const std::vector<Token>& dst) {
  const std::size_t rows = src.size() + 1;
  const std::size_t cols = dst.size() + 1;
  std::vector<std::uint32_t> d(rows * cols);
  const auto at = [&](std::size_t i, std::size_t j) -> std::uint32_t& {
    return d[i * cols + j];
  };
  for (std::size_t i = 0; i < rows; ++i) at(i, 0) = static_cast<std::uint32_t>(i);
  for (std::size_t j = 0; j < cols; ++j) at(0, j) = static_cast<std::uint32_t>(j);
  for (std::size_t i = 1; i < rows; ++i) {
    for (std::size_t j = 1; j < cols; ++j) {
      const std::uint32_t diag =
          at(i - 1, j - 1) + (src[i - 1] == dst[j - 1] ? 0u : 1u);
      at(i, j) = std::min({diag, at(i - 1, j) + 1, at(i, j - 1) + 1});
    }
  }

  std::vector<AlignOp> ops;
  std::size_t i = src.size();
  std::size_t j = dst.size();
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0 && src[i - 1] == dst[j - 1] &&
        at(i, j) == at(i - 1, j - 1)) {
      ops.push_back(AlignOp::kMatch);
      --i;
      --j;
    } else if (i > 0 && j > 0 && at(i, j) == at(i - 1, j - 1) + 1) {
      ops.push_back(AlignOp::kSubstitute);
      --i;
      --j;
    } else if (i > 0 && at(i, j) == at(i - 1, j) + 1) {
      ops.push_back(AlignOp::kDelete);
      --i;
    } else {
      ops.push_back(AlignOp::kInsert);
      --j;
    }
  }
  std::reverse(ops.begin(), ops.end());
  return ops;
}

}  // namespace

std::vector<Edit> extract_edits(const Sentence& source,
                                const Sentence& corrected) {
  const std::vector<AlignOp> ops = align(source.tokens, corrected.tokens);

  std::vector<Edit> edits;
  std::size_t i = 0;  // source cursor
  std::size_t j = 0;  // corrected cursor
  std::size_t op_index = 0;
  while (op_index < ops.size()) {
    if (ops[op_index] == AlignOp::kMatch) {
      ++i;
      ++j;
      ++op_index;
      continue;
    }
    Edit edit;
    edit.start = i;
    while (op_index < ops.size() && ops[op_index] != AlignOp::kMatch) {
      switch (ops[op_index]) {
        case AlignOp::kSubstitute:
          edit.replacement.push_back(corrected.tokens[j]);
          ++i;
          ++j;
          break;
        case AlignOp::kDelete:
          ++i;
          break;
        case AlignOp::kInsert:
          edit.replacement.push_back(corrected.tokens[j]);
          ++j;
          break;
        case AlignOp::kMatch:
          break;
      }
      ++op_index;
    }
    edit.end = i;
    edits.push_back(std::move(edit));
  }
  return edits;
}

Sentence apply_edits(const Sentence& source, const std::vector<Edit>& edits) {
  Sentence out;
  std::size_t cursor = 0;
  for (const Edit& edit : edits) {
    if (edit.start < cursor || edit.end > source.size() ||
        edit.start > edit.end) {
      throw ValidationError("apply_edits: edits overlap or exceed source");
    }
    for (; cursor < edit.start; ++cursor) {
      out.tokens.push_back(source.tokens[cursor]);
    }
    out.tokens.insert(out.tokens.end(), edit.replacement.begin(),
                      edit.replacement.end());
    cursor = edit.end;
  }
  for (; cursor < source.size(); ++cursor) {
    out.tokens.push_back(source.tokens[cursor]);
  }
  return out;
}

double f_beta(double precision, double recall, double beta) {
  if (precision < 0.0 || recall < 0.0) {
    throw DomainError("f_beta: precision and recall must be non-negative");
  }
  if (!(beta > 0.0)) {
    throw DomainError("f_beta: beta must be positive");
  }
  if (precision == 0.0 && recall == 0.0) return 0.0;
  const double b2 = beta * beta;
  return (1.0 + b2) * precision * recall / (b2 * precision + recall);
}

ScoreReport score_corpus(
    const std::vector<Sentence>& sources,
    const std::vector<Sentence>& hypotheses,
    const std::vector<std::vector<Sentence>>& references) {
  if (hypotheses.size() != sources.size()) {
    throw ValidationError("score: hypotheses hold " +
                          std::to_string(hypotheses.size()) +
                          " sentences, sources hold " +
                          std::to_string(sources.size()));
  }
  if (references.empty()) {
    throw ValidationError("score: at least one reference set is required");
  }
  for (std::size_t r = 0; r < references.size(); ++r) {
    if (references[r].size() != sources.size()) {
      throw ValidationError("score: reference " + std::to_string(r + 1) +
                            " holds " + std::to_string(references[r].size()) +
                            " sentences, sources hold " +
                            std::to_string(sources.size()));
    }
  }

  ScoreReport report;
  report.tp = report.fp = report.fn = 0;
  for (std::size_t n = 0; n < sources.size(); ++n) {
    const std::vector<Edit> hyp_edits = extract_edits(sources[n], hypotheses[n]);
    const std::set<Edit> hyp_set(hyp_edits.begin(), hyp_edits.end());

    // Pick the reference whose gold edits maximize (tp, -fp, -fn).
    std::uint64_t best_tp = 0, best_fp = 0, best_fn = 0;
    bool have_best = false;
    for (const std::vector<Sentence>& reference : references) {
      const std::vector<Edit> gold_edits = extract_edits(sources[n], reference[n]);
      const std::set<Edit> gold_set(gold_edits.begin(), gold_edits.end());
      std::uint64_t tp = 0;
      for (const Edit& edit : hyp_set) {
        if (gold_set.count(edit) != 0) ++tp;
      }
      const std::uint64_t fp = hyp_set.size() - tp;
      const std::uint64_t fn = gold_set.size() - tp;
      const bool better =
          !have_best || tp > best_tp ||
          (tp == best_tp && (fp < best_fp || (fp == best_fp && fn < best_fn)));
      if (better) {
        best_tp = tp;
        best_fp = fp;
        best_fn = fn;
        have_best = true;
      }
    }
    report.tp += best_tp;
    report.fp += best_fp;
    report.fn += best_fn;
  }

  report.precision =
      report.tp + report.fp == 0
          ? 1.0
          : static_cast<double>(report.tp) /
                static_cast<double>(report.tp + report.fp);
  report.recall = report.tp + report.fn == 0
                      ? 1.0
                      : static_cast<double>(report.tp) /
                            static_cast<double>(report.tp + report.fn);
  report.f_half = report.precision == 0.0 && report.recall == 0.0
                      ? 0.0
                      : f_beta(report.precision, report.recall, 0.5);
  return report;
}

std::string format_score_line(const ScoreReport& report) {
  char buffer[160];
  std::snprintf(buffer, sizeof(buffer), "%llu %llu %llu %.1f %.1f %.1f",
                static_cast<unsigned long long>(report.tp),
                static_cast<unsigned long long>(report.fp),
                static_cast<unsigned long long>(report.fn),
                report.precision * 100.0, report.recall * 100.0,
                report.f_half * 100.0);
  return buffer;
}

std::string format_score_json(const ScoreReport& report) {
  char buffer[256];
  std::snprintf(buffer, sizeof(buffer),
                "{\"tp\":%llu,\"fp\":%llu,\"fn\":%llu,"
                "\"precision\":%.4f,\"recall\":%.4f,\"f0.5\":%.4f}",
                static_cast<unsigned long long>(report.tp),
                static_cast<unsigned long long>(report.fp),
                static_cast<unsigned long long>(report.fn),
                report.precision * 100.0, report.recall * 100.0,
                report.f_half * 100.0);
  return buffer;
}

}  // namespace pseudoforge
