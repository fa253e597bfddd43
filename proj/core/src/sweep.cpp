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

#include "pseudoforge/sweep.hpp"

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <bit>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <filesystem>

#include "pseudoforge/decode.hpp"
#include "pseudoforge/error.hpp"
#include "pseudoforge/noise.hpp"
#include "pseudoforge/parallel.hpp"
#include "pseudoforge/pipeline.hpp"
#include "pseudoforge/random.hpp"

namespace pseudoforge {

namespace {

std::string format_value(double value) {
  char buffer[32];
  const auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value,
                                       std::chars_format::general);
  return std::string(buffer, end);
}

Corpus generate_point(const SweepPlan& plan, const Corpus& seed_corpus,
                      const UnigramTable& unigram,
                      const SequenceScorer* reverse_scorer, double value,
                      std::uint64_t point_seed) {
  switch (plan.parameter) {
    case SweepParam::kMuMask:
      return generate_direct_noise_corpus(seed_corpus, derive_spec(value),
                                          unigram, point_seed, 1);
    case SweepParam::kBetaRandom: {
      if (reverse_scorer == nullptr) {
        throw ValidationError("beta sweep needs a reverse scorer");
      }
      DecodeParams params;
      params.beam_width = plan.config.beam_width;
      params.max_len = plan.config.max_len;
      params.beta_random = value;
      params.length_normalize = plan.config.length_normalize;
      return backtranslate_corpus(seed_corpus, *reverse_scorer,
                                  BacktransMethod::kNoisy, params, point_seed,
                                  1);
    }
    case SweepParam::kDpSize: {
      Corpus pseudo = generate_direct_noise_corpus(
          seed_corpus, derive_spec(plan.config.mu_mask), unigram, point_seed,
          1);
      return subsample(pseudo, static_cast<std::size_t>(value), point_seed);
    }
  }
  throw ValidationError("unknown sweep parameter");
}

}  // namespace

std::string sweep_param_name(SweepParam param) {
  switch (param) {
    case SweepParam::kMuMask:
      return "mu-mask";
    case SweepParam::kBetaRandom:
      return "beta";
    case SweepParam::kDpSize:
      return "dp-size";
  }
  return "?";
}

std::vector<double> default_sweep_values(SweepParam param) {
  switch (param) {
    case SweepParam::kMuMask:
      return {0.1, 0.3, 0.5, 0.7};
    case SweepParam::kBetaRandom:
      return {0.0, 2.0, 4.0, 6.0, 8.0};
    case SweepParam::kDpSize:
      return {};
  }
  return {};
}

void SweepPlan::validate() const {
  if (values.empty()) throw ValidationError("sweep: no grid values");
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (!(values[i] > values[i - 1])) {
      throw ValidationError("sweep: values must be strictly increasing");
    }
  }
  if (trials < 1) throw ValidationError("sweep: trials must be >= 1");
  config.validate();
  if (parameter == SweepParam::kMuMask) {
    for (const double v : values) derive_spec(v);
  }
  if (parameter == SweepParam::kBetaRandom) {
    for (const double v : values) {
      if (!(v >= 0.0)) {
        throw ValidationError("sweep: beta values must be non-negative");
      }
    }
  }
  if (parameter == SweepParam::kDpSize) {
    for (const double v : values) {
      if (!(v >= 0.0) || v != static_cast<double>(static_cast<std::uint64_t>(v))) {
        throw ValidationError("sweep: dp-size values must be whole counts");
      }
    }
  }
}

std::vector<SweepRow> run_sweep(const SweepPlan& plan,
                                const Corpus& seed_corpus,
                                const SequenceScorer* reverse_scorer,
                                const SweepEvalFn& evaluator,
                                const SweepOptions& options) {
  plan.validate();
  if (seed_corpus.empty()) throw ValidationError("sweep: empty seed corpus");
  if (!evaluator) throw ValidationError("sweep: no evaluator");

  const UnigramTable unigram = build_unigram_table(seed_corpus);
  const std::string param = sweep_param_name(plan.parameter);
  const std::size_t trials = static_cast<std::size_t>(plan.trials);
  const std::size_t points = plan.values.size() * trials;

  std::vector<SweepRow> trial_rows(points);
  parallel_for(points, options.workers, [&](std::size_t index) {
    const std::size_t vi = index / trials;
    const std::size_t k = index % trials;
    const double value = plan.values[vi];
    SweepRow& row = trial_rows[index];
    row.param = param;
    row.value = value;
    row.trial = static_cast<int>(k + 1);
    row.seed = seed_mix(plan.config.seed, std::bit_cast<std::uint64_t>(value),
                        static_cast<std::uint64_t>(k + 1));
    const auto started = std::chrono::steady_clock::now();
    try {
      const Corpus pseudo = generate_point(plan, seed_corpus, unigram,
                                           reverse_scorer, value, row.seed);
      const ScoreReport report = evaluator(pseudo);
      row.precision = report.precision * 100.0;
      row.recall = report.recall * 100.0;
      row.f_half = report.f_half * 100.0;
    } catch (const std::exception&) {
      row.failed = true;
    }
    if (options.record_timing) {
      row.seconds = std::chrono::duration<double>(
                        std::chrono::steady_clock::now() - started)
                        .count();
    }
  });

  std::vector<SweepRow> rows;
  rows.reserve(points + plan.values.size());
  bool any_success = false;
  for (std::size_t vi = 0; vi < plan.values.size(); ++vi) {
    const std::span<const SweepRow> value_rows(trial_rows.data() + vi * trials,
                                               trials);
    for (const SweepRow& row : value_rows) {
      rows.push_back(row);
      any_success = any_success || !row.failed;
    }
    rows.push_back(aggregate_trials(value_rows));
  }
  if (!any_success) {
    throw Error("sweep: every grid point failed");
  }
  return rows;
}

SweepRow aggregate_trials(std::span<const SweepRow> trial_rows) {
  if (trial_rows.empty()) {
    throw ValidationError("aggregate_trials: no rows");
  }
  SweepRow aggregate;
  aggregate.param = trial_rows.front().param;
  aggregate.value = trial_rows.front().value;
  aggregate.trial = 0;
  aggregate.aggregate = true;
  std::size_t successes = 0;
  for (const SweepRow& row : trial_rows) {
    if (row.failed) continue;
    ++successes;
    aggregate.precision += row.precision;
    aggregate.recall += row.recall;
    aggregate.f_half += row.f_half;
    aggregate.seconds += row.seconds;
  }
  if (successes == 0) {
    aggregate.failed = true;
    return aggregate;
  }
  const double n = static_cast<double>(successes);
  aggregate.precision /= n;
  aggregate.recall /= n;
  aggregate.f_half /= n;
  aggregate.seconds /= n;
  return aggregate;
}

SweepEvalFn make_builtin_evaluator(const SequenceScorer& model,
                                   const PipelineConfig& config,
                                   std::size_t limit) {
  DecodeParams params;
  params.beam_width = config.beam_width;
  params.max_len = config.max_len;
  params.beta_random = 0.0;  // plain beam when decoding corrections
  params.length_normalize = config.length_normalize;
  const std::uint64_t decode_seed = seed_mix(config.seed, "sweep-eval");
  return [&model, params, decode_seed, limit](const Corpus& pseudo) {
    const std::size_t count =
        limit == 0 ? pseudo.size() : std::min(limit, pseudo.size());
    std::vector<Sentence> sources, hypotheses, targets;
    sources.reserve(count);
    hypotheses.reserve(count);
    targets.reserve(count);
    for (std::size_t n = 0; n < count; ++n) {
      const ParallelPair& pair = pseudo.pairs[n];
      RandomSource rng(decode_seed, n);
      auto nbest = beam_search_noisy(model, pair.source, params, rng);
      sources.push_back(pair.source);
      hypotheses.push_back(nbest.empty() ? pair.source
                                         : std::move(nbest.front().sentence));
      targets.push_back(pair.target);
    }
    return score_corpus(sources, hypotheses, {targets});
  };
}

SweepEvalFn make_command_evaluator(std::string command) {
  return [command = std::move(command)](const Corpus& pseudo) {
    // Unique temp file per call; concurrent grid points must not collide.
    static std::atomic<std::uint64_t> counter{0};
    const std::filesystem::path path =
        std::filesystem::temp_directory_path() /
        ("pseudoforge-sweep-" + std::to_string(::getpid()) + "-" +
         std::to_string(counter.fetch_add(1)) + ".tsv");
    write_corpus(pseudo, path, CorpusFormat::kTsv);
    const std::string full = command + " " + path.string();
    FILE* pipe = ::popen(full.c_str(), "r");
    if (pipe == nullptr) {
      std::filesystem::remove(path);
      throw Error("cannot run evaluator command: " + full);
    }
    std::string output;
    char buffer[4096];
    std::size_t got;
    while ((got = std::fread(buffer, 1, sizeof(buffer), pipe)) > 0) {
      output.append(buffer, got);
    }
    const int status = ::pclose(pipe);
    std::filesystem::remove(path);
    if (status != 0) {
      throw Error("evaluator command failed with status " +
                  std::to_string(status));
    }
    // Last non-empty line is "P R F0.5" in percentages.
    while (!output.empty() &&
           (output.back() == '\n' || output.back() == '\r')) {
      output.pop_back();
    }
    const std::size_t nl = output.rfind('\n');
    const std::string line =
        nl == std::string::npos ? output : output.substr(nl + 1);
    double p = 0, r = 0, f = 0;
    if (std::sscanf(line.c_str(), "%lf %lf %lf", &p, &r, &f) != 3) {
      throw Error("cannot parse evaluator output line: '" + line + "'");
    }
    ScoreReport report;
    report.precision = p / 100.0;
    report.recall = r / 100.0;
    report.f_half = f / 100.0;
    return report;
  };
}

std::string format_sweep_table(std::span<const SweepRow> rows) {
  std::string out = "param\tvalue\ttrial\tseed\tP\tR\tF0.5\tseconds\n";
  char buffer[64];
  for (const SweepRow& row : rows) {
    out += row.param;
    out += '\t';
    out += format_value(row.value);
    out += '\t';
    out += row.aggregate ? "mean" : std::to_string(row.trial);
    out += '\t';
    out += row.aggregate ? "-" : std::to_string(row.seed);
    out += '\t';
    if (row.failed) {
      out += "nan\tnan\tnan";
    } else {
      std::snprintf(buffer, sizeof(buffer), "%.4f\t%.4f\t%.4f", row.precision,
                    row.recall, row.f_half);
      out += buffer;
    }
    std::snprintf(buffer, sizeof(buffer), "\t%.3f\n", row.seconds);
    out += buffer;
  }
  return out;
}

}  // namespace pseudoforge
