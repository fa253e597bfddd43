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

#ifndef PSEUDOFORGE_SWEEP_HPP_
#define PSEUDOFORGE_SWEEP_HPP_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "pseudoforge/config.hpp"
#include "pseudoforge/corpus.hpp"
#include "pseudoforge/eval.hpp"
#include "pseudoforge/scorer.hpp"

namespace pseudoforge {

enum class SweepParam { kMuMask, kBetaRandom, kDpSize };

std::string sweep_param_name(SweepParam param);

// Default grids: mu-mask {0.1, 0.3, 0.5, 0.7}; beta {0, 2, 4, 6, 8}.
// dp-size has no sensible default and must be given explicitly.
std::vector<double> default_sweep_values(SweepParam param);

struct SweepPlan {
  SweepParam parameter = SweepParam::kMuMask;
  std::vector<double> values;  // strictly increasing, non-empty
  int trials = 5;              // seeds per grid value
  PipelineConfig config;       // fixed settings (base seed, beam, ...)

  void validate() const;
};

// One result-table row: a single trial or a per-value aggregate. Metric
// fields hold percentages.
struct SweepRow {
  std::string param;
  double value = 0.0;
  int trial = 0;  // 1-based; 0 on aggregate rows
  bool aggregate = false;
  std::uint64_t seed = 0;
  bool failed = false;
  double precision = 0.0;
  double recall = 0.0;
  double f_half = 0.0;
  double seconds = 0.0;
};

// Scoring slot for a generated pseudo corpus. Must be safe for concurrent
// calls on distinct corpora.
using SweepEvalFn = std::function<ScoreReport(const Corpus& pseudo)>;

struct SweepOptions {
  // Wall-clock seconds are inherently nondeterministic; switching timing off
  // zeroes the column so result tables become byte-reproducible.
  bool record_timing = true;
  int workers = 0;  // concurrent grid points; 0 = logical core count
};

// Runs the grid: one row per (value, trial) followed by one aggregate row
// per value, rows in plan order regardless of completion order. Trial k of
// value v draws seed seed_mix(config.seed, bits(v), k), so extending the
// grid never perturbs existing rows. A failing evaluator or generator marks
// the row failed and the sweep continues; if every trial fails, Error is
// raised. The reverse scorer is required for beta sweeps and may be null
// otherwise.
std::vector<SweepRow> run_sweep(const SweepPlan& plan,
                                const Corpus& seed_corpus,
                                const SequenceScorer* reverse_scorer,
                                const SweepEvalFn& evaluator,
                                const SweepOptions& options = {});

// Mean of P, R, F0.5 and seconds across the given trial rows of one value.
// F is averaged directly, not recomputed from averaged P and R. Failed rows
// are excluded; if none remain the aggregate is marked failed. Empty input
// raises ValidationError.
SweepRow aggregate_trials(std::span<const SweepRow> trial_rows);

// Built-in desk-scale evaluator: decodes a correction for every pseudo
// source with a plain (beta = 0) beam over `model`, then scores hypotheses
// against the clean targets with score_corpus. `limit` caps the scored pairs
// (0 = all).
SweepEvalFn make_builtin_evaluator(const SequenceScorer& model,
                                   const PipelineConfig& config,
                                   std::size_t limit = 0);

// External-command evaluator: writes the corpus to a temp TSV, runs
// `command <path>`, and parses the last stdout line as "P R F0.5"
// percentages. Non-zero exit or unparseable output raises Error.
SweepEvalFn make_command_evaluator(std::string command);

// TSV with header "param\tvalue\ttrial\tseed\tP\tR\tF0.5\tseconds";
// aggregate rows print "mean" in the trial column and "-" for the seed;
// failed rows print "nan" metrics.
std::string format_sweep_table(std::span<const SweepRow> rows);

}  // namespace pseudoforge

#endif  // PSEUDOFORGE_SWEEP_HPP_
