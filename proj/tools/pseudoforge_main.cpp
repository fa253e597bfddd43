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
//
// pseudoforge: corpus-noising toolkit for grammatical error correction.
// One binary, one subcommand per pipeline stage; stages exchange data only
// through the documented file formats, so pipelines are shell-composable.

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pseudoforge/bpe.hpp"
#include "pseudoforge/config.hpp"
#include "pseudoforge/corpus.hpp"
#include "pseudoforge/decode.hpp"
#include "pseudoforge/error.hpp"
#include "pseudoforge/eval.hpp"
#include "pseudoforge/noise.hpp"
#include "pseudoforge/parallel.hpp"
#include "pseudoforge/pipeline.hpp"
#include "pseudoforge/random.hpp"
#include "pseudoforge/rerank.hpp"
#include "pseudoforge/scorer.hpp"
#include "pseudoforge/spell.hpp"
#include "pseudoforge/sweep.hpp"
#include "pseudoforge/utf8.hpp"
#include "pseudoforge/version.hpp"

namespace {

using namespace pseudoforge;

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ =
      std::chrono::steady_clock::now();
};

// Flags shared by every subcommand. Flag > config file > built-in default.
struct CommonFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;

  PipelineConfig resolve() const {
    PipelineConfig config;
    if (!config_path.empty()) config = load_config(config_path);
    if (seed) config.seed = *seed;
    if (workers) config.workers = *workers;
    config.validate();
    return config;
  }
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config_path,
                  "Pipeline config file (key = value lines)");
  cmd->add_option("--seed", flags.seed, "Base random seed");
  cmd->add_option("--workers", flags.workers,
                  "Worker threads (0 = logical cores)");
}

void echo_config(const std::string& stage, const PipelineConfig& config) {
  std::string body = format_config(config);
  for (char& ch : body) {
    if (ch == '\n') ch = ' ';
  }
  while (!body.empty() && body.back() == ' ') body.pop_back();
  std::cerr << "[config] stage=" << stage << " " << body << "\n";
}

void progress(const std::string& stage, const std::string& message) {
  std::cerr << "[" << stage << "] " << message << "\n";
}

CorpusFormat sniff_format(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file: " + path.string());
  std::string first_line;
  std::getline(in, first_line);
  return first_line.find('\t') != std::string::npos ? CorpusFormat::kTsv
                                                    : CorpusFormat::kPlain;
}

CorpusFormat resolve_format(const std::string& flag,
                            const std::filesystem::path& path) {
  if (flag == "plain") return CorpusFormat::kPlain;
  if (flag == "tsv") return CorpusFormat::kTsv;
  return sniff_format(path);
}

// Writes corpus data to the output path, or to stdout when none is given.
void emit_corpus(const Corpus& corpus, const std::string& out_path,
                 CorpusFormat format,
                 CorpusSide side = CorpusSide::kTarget) {
  if (out_path.empty()) {
    std::cout << format_corpus(corpus, format, side);
  } else {
    write_corpus(corpus, out_path, format, side);
  }
}

void emit_text(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + out_path);
  out << text;
  if (!out) throw IoError("write failure: " + out_path);
}

std::vector<Sentence> plain_sentences(const std::filesystem::path& path) {
  const Corpus corpus = read_corpus(path, CorpusFormat::kPlain);
  std::vector<Sentence> out;
  out.reserve(corpus.size());
  for (const ParallelPair& pair : corpus.pairs) out.push_back(pair.target);
  return out;
}

// "1.4M", "250K", "7000" -> pair counts.
std::size_t parse_count(const std::string& text) {
  if (text.empty()) throw ParseError("empty count");
  double multiplier = 1.0;
  std::string digits = text;
  switch (digits.back()) {
    case 'k':
    case 'K':
      multiplier = 1e3;
      digits.pop_back();
      break;
    case 'm':
    case 'M':
      multiplier = 1e6;
      digits.pop_back();
      break;
    case 'g':
    case 'G':
      multiplier = 1e9;
      digits.pop_back();
      break;
    default:
      break;
  }
  std::size_t consumed = 0;
  double value = 0.0;
  try {
    value = std::stod(digits, &consumed);
  } catch (const std::exception&) {
    throw ParseError("bad count '" + text + "'");
  }
  if (consumed != digits.size() || value < 0) {
    throw ParseError("bad count '" + text + "'");
  }
  return static_cast<std::size_t>(value * multiplier + 0.5);
}

std::u32string load_alphabet(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open alphabet file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  std::u32string alphabet;
  for (const char32_t cp : utf8::decode(buffer.str())) {
    if (cp != U' ' && cp != U'\t' && cp != U'\n' && cp != U'\r') {
      alphabet.push_back(cp);
    }
  }
  std::sort(alphabet.begin(), alphabet.end());
  alphabet.erase(std::unique(alphabet.begin(), alphabet.end()),
                 alphabet.end());
  return alphabet;
}

// ---------------------------------------------------------------------------
// Subcommand argument blocks

struct NoiseDirectArgs {
  CommonFlags common;
  std::string in_path, out_path, unigram_path, mu_csv;
  std::optional<double> mu_mask;
};

struct BacktranslateArgs {
  CommonFlags common;
  std::string in_path, out_path, scorer_path, method = "noisy";
  std::optional<int> beam;
  std::optional<double> beta;
  std::optional<int> max_len;
  bool no_length_normalize = false;
};

struct SseArgs {
  CommonFlags common;
  std::string in_path, out_path, alphabet_path, format = "auto";
  std::optional<double> rate;
};

struct BpeLearnArgs {
  CommonFlags common;
  std::string in_path, out_path, format = "auto";
  std::optional<std::uint64_t> merges;
};

struct BpeApplyArgs {
  CommonFlags common;
  std::string in_path, out_path, table_path, format = "auto";
};

struct BpeDecodeArgs {
  CommonFlags common;
  std::string in_path, out_path, format = "auto";
};

struct DedupArgs {
  CommonFlags common;
  std::string in_path, out_path;
};

struct SubsampleArgs {
  CommonFlags common;
  std::string in_path, out_path, count;
};

struct ComposeArgs {
  CommonFlags common;
  std::string regime;
  std::vector<std::string> genuine, pseudo;
  std::string out_path, manifest_path;
};

struct RerankArgs {
  CommonFlags common;
  std::string nbest_path, src_path, out_path;
  std::vector<std::string> scorer_paths;
  bool no_length_normalize = false;
};

struct GateArgs {
  CommonFlags common;
  std::string src_path, hyp_path, verdicts_path, out_path;
};

struct ScoreArgs {
  CommonFlags common;
  std::string src_path, hyp_path;
  std::vector<std::string> ref_paths;
  bool json_only = false;
};

struct SweepArgs {
  CommonFlags common;
  std::string param, values_csv, seed_corpus_path, scorer_path, eval_cmd,
      out_path;
  std::optional<int> trials;
  std::size_t eval_limit = 200;
  bool no_timing = false;
};

// ---------------------------------------------------------------------------
// Stage implementations

int run_noise_direct(const NoiseDirectArgs& args) {
  const Timer timer;
  const PipelineConfig config = args.common.resolve();
  echo_config("noise-direct", config);
  if (args.mu_mask && !args.mu_csv.empty()) {
    std::cerr << "error: --mu-mask conflicts with --mu\n";
    return 1;
  }
  const NoiseSpec spec =
      args.mu_csv.empty() ? derive_spec(args.mu_mask.value_or(config.mu_mask))
                          : parse_noise_spec(args.mu_csv);

  const Corpus seed = read_corpus(args.in_path, CorpusFormat::kPlain);
  const Corpus unigram_source =
      args.unigram_path.empty()
          ? seed
          : read_corpus(args.unigram_path, sniff_format(args.unigram_path));
  const UnigramTable unigram = build_unigram_table(unigram_source);

  const Corpus pseudo = generate_direct_noise_corpus(
      seed, spec, unigram, seed_mix(config.seed, "noise-direct"),
      config.workers);
  emit_corpus(pseudo, args.out_path, CorpusFormat::kTsv);
  progress("noise-direct", "mu=" + format_noise_spec(spec) +
                               " pairs=" + std::to_string(pseudo.size()) +
                               " seconds=" + std::to_string(timer.seconds()));
  return 0;
}

int run_backtranslate(const BacktranslateArgs& args) {
  const Timer timer;
  const PipelineConfig config = args.common.resolve();
  echo_config("backtranslate", config);
  DecodeParams params;
  params.beam_width = args.beam.value_or(config.beam_width);
  params.max_len = args.max_len.value_or(config.max_len);
  params.beta_random = args.beta.value_or(config.beta_random);
  params.length_normalize =
      args.no_length_normalize ? false : config.length_normalize;

  const Corpus seed = read_corpus(args.in_path, CorpusFormat::kPlain);
  const ToyScorer scorer = load_toy_scorer(args.scorer_path);
  const BacktransMethod method = args.method == "sample"
                                     ? BacktransMethod::kSample
                                     : BacktransMethod::kNoisy;
  const Corpus pseudo = backtranslate_corpus(
      seed, scorer, method, params, seed_mix(config.seed, "backtranslate"),
      config.workers);
  emit_corpus(pseudo, args.out_path, CorpusFormat::kTsv);
  progress("backtranslate",
           "method=" + args.method +
               " beam=" + std::to_string(params.beam_width) +
               " beta=" + std::to_string(params.beta_random) +
               " pairs=" + std::to_string(pseudo.size()) +
               " seconds=" + std::to_string(timer.seconds()));
  return 0;
}

int run_sse(const SseArgs& args) {
  const Timer timer;
  const PipelineConfig config = args.common.resolve();
  echo_config("sse", config);
  const CorpusFormat format = resolve_format(args.format, args.in_path);
  const Corpus corpus = read_corpus(args.in_path, format);

  SpellNoiseConfig noise;
  noise.rate = args.rate.value_or(config.sse_rate);
  noise.alphabet = args.alphabet_path.empty()
                       ? alphabet_from_corpus(corpus)
                       : load_alphabet(args.alphabet_path);

  SpellNoiseStats stats;
  const Corpus noised = inject_spelling_noise_corpus(
      corpus, noise, seed_mix(config.seed, "sse"), config.workers, &stats);
  if (format == CorpusFormat::kPlain) {
    // Plain text in, plain text out: the noised side is the payload.
    emit_corpus(noised, args.out_path, CorpusFormat::kPlain,
                CorpusSide::kSource);
  } else {
    emit_corpus(noised, args.out_path, CorpusFormat::kTsv);
  }
  progress("sse", "rate=" + std::to_string(noise.rate) +
                      " chars=" + std::to_string(stats.characters) +
                      " edits=" + std::to_string(stats.total_applied()) +
                      " seconds=" + std::to_string(timer.seconds()));
  return 0;
}

int run_bpe_learn(const BpeLearnArgs& args) {
  const Timer timer;
  const PipelineConfig config = args.common.resolve();
  echo_config("bpe-learn", config);
  const Corpus corpus =
      read_corpus(args.in_path, resolve_format(args.format, args.in_path));
  ensure_mask_free(corpus, "bpe-learn corpus");
  const MergeTable table =
      learn_bpe(corpus, args.merges.value_or(config.bpe_merges));
  emit_text(format_merge_table(table), args.out_path);
  progress("bpe-learn", "merges=" + std::to_string(table.merges.size()) +
                            " seconds=" + std::to_string(timer.seconds()));
  return 0;
}

int run_bpe_apply(const BpeApplyArgs& args) {
  const Timer timer;
  const PipelineConfig config = args.common.resolve();
  echo_config("bpe-apply", config);
  const CorpusFormat format = resolve_format(args.format, args.in_path);
  Corpus corpus = read_corpus(args.in_path, format);
  const BpeApplier applier(read_merge_table(args.table_path));

  // Both sides are segmented; seed corpora keep source == target.
  std::vector<ParallelPair> out(corpus.size());
  parallel_for(corpus.size(), config.workers, [&](std::size_t n) {
    const ParallelPair& pair = corpus.pairs[n];
    ParallelPair segmented;
    segmented.provenance = pair.provenance;
    segmented.target = Sentence{applier.segment(pair.target).tokens};
    segmented.source = pair.source == pair.target
                           ? segmented.target
                           : Sentence{applier.segment(pair.source).tokens};
    out[n] = std::move(segmented);
  });
  corpus.pairs = std::move(out);
  emit_corpus(corpus, args.out_path, format);
  progress("bpe-apply", "pairs=" + std::to_string(corpus.size()) +
                            " seconds=" + std::to_string(timer.seconds()));
  return 0;
}

int run_bpe_decode(const BpeDecodeArgs& args) {
  const Timer timer;
  const PipelineConfig config = args.common.resolve();
  echo_config("bpe-decode", config);
  const CorpusFormat format = resolve_format(args.format, args.in_path);
  Corpus corpus = read_corpus(args.in_path, format);
  for (ParallelPair& pair : corpus.pairs) {
    pair.source = decode_bpe(SubwordSentence{pair.source.tokens});
    pair.target = decode_bpe(SubwordSentence{pair.target.tokens});
  }
  emit_corpus(corpus, args.out_path, format);
  progress("bpe-decode", "pairs=" + std::to_string(corpus.size()) +
                             " seconds=" + std::to_string(timer.seconds()));
  return 0;
}

int run_dedup(const DedupArgs& args) {
  const Timer timer;
  const PipelineConfig config = args.common.resolve();
  echo_config("dedup", config);
  const Corpus corpus = read_corpus(args.in_path, CorpusFormat::kTsv);
  const Corpus out = dedup(corpus);
  emit_corpus(out, args.out_path, CorpusFormat::kTsv);
  progress("dedup", "kept=" + std::to_string(out.size()) + "/" +
                        std::to_string(corpus.size()) +
                        " seconds=" + std::to_string(timer.seconds()));
  return 0;
}

int run_subsample(const SubsampleArgs& args) {
  const Timer timer;
  const PipelineConfig config = args.common.resolve();
  echo_config("subsample", config);
  const Corpus corpus = read_corpus(args.in_path, CorpusFormat::kTsv);
  const std::size_t n = parse_count(args.count);
  const Corpus out = subsample(corpus, n, seed_mix(config.seed, "subsample"));
  emit_corpus(out, args.out_path, CorpusFormat::kTsv);
  progress("subsample", "kept=" + std::to_string(out.size()) + "/" +
                            std::to_string(corpus.size()) +
                            " seconds=" + std::to_string(timer.seconds()));
  return 0;
}

int run_compose(const ComposeArgs& args) {
  const Timer timer;
  const PipelineConfig config = args.common.resolve();
  echo_config("compose", config);
  if (args.regime == "joint") {
    if (args.out_path.empty() && args.manifest_path.empty()) {
      std::cerr << "error: joint compose needs --out and/or --manifest\n";
      return 1;
    }
    if (!args.out_path.empty()) {
      Corpus genuine, pseudo;
      genuine.kind = CorpusKind::kGenuine;
      pseudo.kind = CorpusKind::kPseudo;
      for (const std::string& path : args.genuine) {
        Corpus part = read_corpus(path, CorpusFormat::kTsv);
        genuine.pairs.insert(genuine.pairs.end(), part.pairs.begin(),
                             part.pairs.end());
      }
      for (const std::string& path : args.pseudo) {
        Corpus part = read_corpus(path, CorpusFormat::kTsv);
        pseudo.pairs.insert(pseudo.pairs.end(), part.pairs.begin(),
                            part.pairs.end());
      }
      const Corpus joint =
          compose_joint(genuine, pseudo, seed_mix(config.seed, "compose"));
      emit_corpus(joint, args.out_path, CorpusFormat::kTsv);
      progress("compose", "joint pairs=" + std::to_string(joint.size()) +
                              " seconds=" + std::to_string(timer.seconds()));
    }
    if (!args.manifest_path.empty()) {
      write_manifest(
          make_joint_manifest(args.genuine, args.pseudo, config.seed),
          args.manifest_path);
      progress("compose", "manifest=" + args.manifest_path);
    }
    return 0;
  }
  // pretrain
  if (args.manifest_path.empty()) {
    std::cerr << "error: pretrain compose needs --manifest\n";
    return 1;
  }
  write_manifest(
      make_pretrain_manifest(args.pseudo, args.genuine, config.seed),
      args.manifest_path);
  progress("compose", "manifest=" + args.manifest_path +
                          " seconds=" + std::to_string(timer.seconds()));
  return 0;
}

int run_rerank(const RerankArgs& args) {
  const Timer timer;
  const PipelineConfig config = args.common.resolve();
  echo_config("rerank", config);
  const bool normalize =
      args.no_length_normalize ? false : config.length_normalize;

  const std::vector<Sentence> sources = plain_sentences(args.src_path);
  const std::vector<NBestGroup> groups = read_nbest_file(args.nbest_path);
  if (groups.size() != sources.size()) {
    throw ValidationError(
        "rerank: n-best file holds " + std::to_string(groups.size()) +
        " lists, sources hold " + std::to_string(sources.size()) +
        " sentences");
  }
  std::vector<ToyScorer> scorers;
  scorers.reserve(args.scorer_paths.size());
  for (const std::string& path : args.scorer_paths) {
    scorers.push_back(load_toy_scorer(path));
  }
  std::vector<const SequenceScorer*> scorer_ptrs;
  scorer_ptrs.reserve(scorers.size());
  for (const ToyScorer& scorer : scorers) scorer_ptrs.push_back(&scorer);

  std::vector<NBestGroup> out(groups.size());
  parallel_for(groups.size(), config.workers, [&](std::size_t n) {
    const NBestList list = make_nbest_list(sources[n], groups[n].candidates);
    std::vector<RerankDetail> detail;
    const NBestList reranked =
        rerank_r2l(list, std::span<const SequenceScorer* const>(scorer_ptrs),
                   normalize, &detail);
    NBestGroup group;
    group.id = groups[n].id;
    for (std::size_t c = 0; c < reranked.candidates.size(); ++c) {
      // The emitted score is the combined l2r + r2l ranking score.
      group.candidates.push_back(
          {reranked.candidates[c].sentence, detail[c].combined});
    }
    out[n] = std::move(group);
  });
  emit_text(format_nbest_file(out), args.out_path);
  progress("rerank", "lists=" + std::to_string(out.size()) +
                         " models=" + std::to_string(scorers.size()) +
                         " seconds=" + std::to_string(timer.seconds()));
  return 0;
}

int run_gate(const GateArgs& args) {
  const Timer timer;
  const PipelineConfig config = args.common.resolve();
  echo_config("gate", config);
  const std::vector<Sentence> sources = plain_sentences(args.src_path);
  const std::vector<Sentence> corrections = plain_sentences(args.hyp_path);

  std::ifstream in(args.verdicts_path, std::ios::binary);
  if (!in) throw IoError("cannot open verdict file: " + args.verdicts_path);
  std::vector<bool> verdicts;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line == "0") {
      verdicts.push_back(false);
    } else if (line == "1") {
      verdicts.push_back(true);
    } else {
      throw ParseError("verdict line must be 0 or 1", line_no);
    }
  }

  const std::vector<Sentence> gated =
      sed_gate_stream(sources, corrections, verdicts);
  std::string text;
  for (const Sentence& sentence : gated) {
    text += sentence.join();
    text += '\n';
  }
  emit_text(text, args.out_path);
  std::size_t applied = 0;
  for (const bool verdict : verdicts) applied += verdict ? 1 : 0;
  progress("gate", "applied=" + std::to_string(applied) + "/" +
                       std::to_string(verdicts.size()) +
                       " seconds=" + std::to_string(timer.seconds()));
  return 0;
}

int run_score(const ScoreArgs& args) {
  const Timer timer;
  const PipelineConfig config = args.common.resolve();
  echo_config("score", config);
  const std::vector<Sentence> sources = plain_sentences(args.src_path);
  const std::vector<Sentence> hypotheses = plain_sentences(args.hyp_path);
  std::vector<std::vector<Sentence>> references;
  references.reserve(args.ref_paths.size());
  for (const std::string& path : args.ref_paths) {
    references.push_back(plain_sentences(path));
  }
  const ScoreReport report = score_corpus(sources, hypotheses, references);
  if (!args.json_only) {
    std::cout << format_score_line(report) << "\n";
  }
  std::cout << format_score_json(report) << "\n";
  progress("score", "sentences=" + std::to_string(sources.size()) +
                        " seconds=" + std::to_string(timer.seconds()));
  return 0;
}

int run_sweep(const SweepArgs& args) {
  const Timer timer;
  SweepPlan plan;
  plan.config = args.common.resolve();
  echo_config("sweep", plan.config);
  if (args.param == "mu-mask") {
    plan.parameter = SweepParam::kMuMask;
  } else if (args.param == "beta") {
    plan.parameter = SweepParam::kBetaRandom;
  } else if (args.param == "dp-size") {
    plan.parameter = SweepParam::kDpSize;
  } else {
    std::cerr << "error: --param must be mu-mask, beta or dp-size\n";
    return 1;
  }
  if (args.values_csv.empty()) {
    plan.values = default_sweep_values(plan.parameter);
    if (plan.values.empty()) {
      std::cerr << "error: --values is required for dp-size sweeps\n";
      return 1;
    }
  } else {
    std::string csv = args.values_csv;
    for (char& ch : csv) {
      if (ch == ',') ch = ' ';
    }
    std::istringstream stream(csv);
    std::string field;
    while (stream >> field) {
      plan.values.push_back(plan.parameter == SweepParam::kDpSize
                                ? static_cast<double>(parse_count(field))
                                : std::stod(field));
    }
  }
  plan.trials = args.trials.value_or(5);

  const Corpus seed_corpus =
      read_corpus(args.seed_corpus_path, CorpusFormat::kPlain);
  std::optional<ToyScorer> scorer;
  if (!args.scorer_path.empty()) {
    scorer.emplace(load_toy_scorer(args.scorer_path));
  }

  SweepEvalFn evaluator;
  if (!args.eval_cmd.empty()) {
    evaluator = make_command_evaluator(args.eval_cmd);
  } else if (scorer) {
    evaluator = make_builtin_evaluator(*scorer, plan.config, args.eval_limit);
  } else {
    std::cerr << "error: sweeps need --scorer (built-in evaluator) or "
                 "--eval-cmd\n";
    return 1;
  }
  if (plan.parameter == SweepParam::kBetaRandom && !scorer) {
    std::cerr << "error: beta sweeps need --scorer for backtranslation\n";
    return 1;
  }

  SweepOptions options;
  options.record_timing = !args.no_timing;
  options.workers = plan.config.workers;
  const auto rows = run_sweep(plan, seed_corpus,
                              scorer ? &*scorer : nullptr, evaluator, options);
  emit_text(format_sweep_table(rows), args.out_path);
  progress("sweep", "rows=" + std::to_string(rows.size()) +
                        " seconds=" + std::to_string(timer.seconds()));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pseudoforge: pseudo-data generation toolkit for GEC"};
  app.require_subcommand(1);

  NoiseDirectArgs noise_args;
  auto* noise_cmd = app.add_subcommand(
      "noise-direct", "Corrupt a seed corpus with per-token noise");
  add_common(noise_cmd, noise_args.common);
  noise_cmd->add_option("--in", noise_args.in_path, "Seed corpus (plain)")
      ->required();
  noise_cmd->add_option("--out", noise_args.out_path, "Output TSV");
  noise_cmd->add_option("--unigram", noise_args.unigram_path,
                        "Corpus for the insertion unigram (default: --in)");
  noise_cmd->add_option("--mu-mask", noise_args.mu_mask,
                        "Mask probability (mu_keep fixed at 0.2)");
  noise_cmd->add_option("--mu", noise_args.mu_csv,
                        "Full spec 'mask,del,ins,keep'");

  BacktranslateArgs bt_args;
  auto* bt_cmd = app.add_subcommand(
      "backtranslate", "Decode pseudo sources with a reverse scorer");
  add_common(bt_cmd, bt_args.common);
  bt_cmd->add_option("--in", bt_args.in_path, "Seed corpus (plain)")
      ->required();
  bt_cmd->add_option("--out", bt_args.out_path, "Output TSV");
  bt_cmd->add_option("--scorer", bt_args.scorer_path, "Toy scorer file")
      ->required();
  bt_cmd->add_option("--method", bt_args.method, "noisy | sample")
      ->check(CLI::IsMember({"noisy", "sample"}));
  bt_cmd->add_option("--beam", bt_args.beam, "Beam width");
  bt_cmd->add_option("--beta", bt_args.beta, "Noise scale beta_random");
  bt_cmd->add_option("--max-len", bt_args.max_len, "Decode length bound");
  bt_cmd->add_flag("--no-length-normalize", bt_args.no_length_normalize,
                   "Rank by unnormalized scores");

  SseArgs sse_args;
  auto* sse_cmd = app.add_subcommand(
      "sse", "Inject character-level spelling errors into sources");
  add_common(sse_cmd, sse_args.common);
  sse_cmd->add_option("--in", sse_args.in_path, "Input corpus")->required();
  sse_cmd->add_option("--out", sse_args.out_path, "Output path");
  sse_cmd->add_option("--sse-rate", sse_args.rate, "Per-character rate");
  sse_cmd->add_option("--sse-alphabet", sse_args.alphabet_path,
                      "File of candidate characters");
  sse_cmd->add_option("--format", sse_args.format, "plain | tsv | auto")
      ->check(CLI::IsMember({"plain", "tsv", "auto"}));

  BpeLearnArgs learn_args;
  auto* learn_cmd =
      app.add_subcommand("bpe-learn", "Learn merge rules from target text");
  add_common(learn_cmd, learn_args.common);
  learn_cmd->add_option("--in", learn_args.in_path, "Training corpus")
      ->required();
  learn_cmd->add_option("--out", learn_args.out_path, "Merge table path");
  learn_cmd->add_option("--merges", learn_args.merges, "Merge count");
  learn_cmd->add_option("--format", learn_args.format, "plain | tsv | auto")
      ->check(CLI::IsMember({"plain", "tsv", "auto"}));

  BpeApplyArgs apply_args;
  auto* apply_cmd =
      app.add_subcommand("bpe-apply", "Segment corpus with a merge table");
  add_common(apply_cmd, apply_args.common);
  apply_cmd->add_option("--in", apply_args.in_path, "Input corpus")
      ->required();
  apply_cmd->add_option("--out", apply_args.out_path, "Output path");
  apply_cmd->add_option("--table", apply_args.table_path, "Merge table")
      ->required();
  apply_cmd->add_option("--format", apply_args.format, "plain | tsv | auto")
      ->check(CLI::IsMember({"plain", "tsv", "auto"}));

  BpeDecodeArgs decode_args;
  auto* decode_cmd =
      app.add_subcommand("bpe-decode", "Undo subword segmentation");
  add_common(decode_cmd, decode_args.common);
  decode_cmd->add_option("--in", decode_args.in_path, "Input corpus")
      ->required();
  decode_cmd->add_option("--out", decode_args.out_path, "Output path");
  decode_cmd->add_option("--format", decode_args.format, "plain | tsv | auto")
      ->check(CLI::IsMember({"plain", "tsv", "auto"}));

  DedupArgs dedup_args;
  auto* dedup_cmd = app.add_subcommand(
      "dedup", "Drop pairs whose source equals their target");
  add_common(dedup_cmd, dedup_args.common);
  dedup_cmd->add_option("--in", dedup_args.in_path, "Input TSV")->required();
  dedup_cmd->add_option("--out", dedup_args.out_path, "Output TSV");

  SubsampleArgs subsample_args;
  auto* subsample_cmd =
      app.add_subcommand("subsample", "Uniform random subset of n pairs");
  add_common(subsample_cmd, subsample_args.common);
  subsample_cmd->add_option("--in", subsample_args.in_path, "Input TSV")
      ->required();
  subsample_cmd->add_option("--out", subsample_args.out_path, "Output TSV");
  subsample_cmd
      ->add_option("--n", subsample_args.count,
                   "Pair count (suffixes K/M/G, e.g. 1.4M)")
      ->required();

  ComposeArgs compose_args;
  auto* compose_cmd = app.add_subcommand(
      "compose", "Combine genuine and pseudo data (joint or pretrain)");
  add_common(compose_cmd, compose_args.common);
  compose_cmd->add_option("--regime", compose_args.regime, "joint | pretrain")
      ->required()
      ->check(CLI::IsMember({"joint", "pretrain"}));
  compose_cmd
      ->add_option("--genuine", compose_args.genuine, "Genuine TSV paths")
      ->required();
  compose_cmd->add_option("--pseudo", compose_args.pseudo, "Pseudo TSV paths")
      ->required();
  compose_cmd->add_option("--out", compose_args.out_path,
                          "Joint corpus output (joint regime)");
  compose_cmd->add_option("--manifest", compose_args.manifest_path,
                          "Manifest output path");

  RerankArgs rerank_args;
  auto* rerank_cmd = app.add_subcommand(
      "rerank", "Re-rank n-best lists with right-to-left scorers");
  add_common(rerank_cmd, rerank_args.common);
  rerank_cmd->add_option("--nbest", rerank_args.nbest_path, "N-best file")
      ->required();
  rerank_cmd->add_option("--src", rerank_args.src_path, "Source sentences")
      ->required();
  rerank_cmd
      ->add_option("--scorer", rerank_args.scorer_paths,
                   "R2L scorer files (repeat for an ensemble)")
      ->required();
  rerank_cmd->add_option("--out", rerank_args.out_path, "Output n-best file");
  rerank_cmd->add_flag("--no-length-normalize",
                       rerank_args.no_length_normalize,
                       "Skip per-token normalization of r2l scores");

  GateArgs gate_args;
  auto* gate_cmd = app.add_subcommand(
      "gate", "Apply corrections only where a detector flags the source");
  add_common(gate_cmd, gate_args.common);
  gate_cmd->add_option("--src", gate_args.src_path, "Source sentences")
      ->required();
  gate_cmd->add_option("--hyp", gate_args.hyp_path, "Corrections")
      ->required();
  gate_cmd
      ->add_option("--verdicts", gate_args.verdicts_path,
                   "Detector verdicts, one 0/1 per line")
      ->required();
  gate_cmd->add_option("--out", gate_args.out_path, "Gated output");

  ScoreArgs score_args;
  auto* score_cmd =
      app.add_subcommand("score", "Edit-based P/R/F0.5 against references");
  add_common(score_cmd, score_args.common);
  score_cmd->add_option("--src", score_args.src_path, "Source sentences")
      ->required();
  score_cmd->add_option("--hyp", score_args.hyp_path, "Hypotheses")
      ->required();
  score_cmd
      ->add_option("--ref", score_args.ref_paths,
                   "Reference sentences (repeatable)")
      ->required();
  score_cmd->add_flag("--json", score_args.json_only,
                      "Print only the JSON record");

  SweepArgs sweep_args;
  auto* sweep_cmd = app.add_subcommand(
      "sweep", "Grid experiments over mu-mask, beta or dp-size");
  add_common(sweep_cmd, sweep_args.common);
  sweep_cmd
      ->add_option("--param", sweep_args.param, "mu-mask | beta | dp-size")
      ->required();
  sweep_cmd->add_option("--values", sweep_args.values_csv,
                        "Comma-separated grid values");
  sweep_cmd->add_option("--trials", sweep_args.trials, "Seeds per value");
  sweep_cmd
      ->add_option("--seed-corpus", sweep_args.seed_corpus_path,
                   "Seed corpus (plain)")
      ->required();
  sweep_cmd->add_option("--scorer", sweep_args.scorer_path,
                        "Toy scorer (reverse model / built-in evaluator)");
  sweep_cmd->add_option("--eval-cmd", sweep_args.eval_cmd,
                        "External evaluator command");
  sweep_cmd->add_option("--eval-limit", sweep_args.eval_limit,
                        "Pairs scored per point by the built-in evaluator");
  sweep_cmd->add_option("--out", sweep_args.out_path, "Result table path");
  sweep_cmd->add_flag("--no-timing", sweep_args.no_timing,
                      "Zero the seconds column for reproducible tables");

  auto* version_cmd =
      app.add_subcommand("version", "Print tool and format versions");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (version_cmd->parsed()) {
      std::cout << "pseudoforge " << kToolVersion << "\n"
                << "formats: " << kBpeFormatVersion << ", "
                << kManifestFormatVersion << ", " << kToyScorerFormatVersion
                << "\n";
      return 0;
    }
    if (noise_cmd->parsed()) return run_noise_direct(noise_args);
    if (bt_cmd->parsed()) return run_backtranslate(bt_args);
    if (sse_cmd->parsed()) return run_sse(sse_args);
    if (learn_cmd->parsed()) return run_bpe_learn(learn_args);
    if (apply_cmd->parsed()) return run_bpe_apply(apply_args);
    if (decode_cmd->parsed()) return run_bpe_decode(decode_args);
    if (dedup_cmd->parsed()) return run_dedup(dedup_args);
    if (subsample_cmd->parsed()) return run_subsample(subsample_args);
    if (compose_cmd->parsed()) return run_compose(compose_args);
    if (rerank_cmd->parsed()) return run_rerank(rerank_args);
    if (gate_cmd->parsed()) return run_gate(gate_args);
    if (score_cmd->parsed()) return run_score(score_args);
    if (sweep_cmd->parsed()) return run_sweep(sweep_args);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
