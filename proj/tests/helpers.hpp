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

#ifndef PSEUDOFORGE_TESTS_HELPERS_HPP_
#define PSEUDOFORGE_TESTS_HELPERS_HPP_

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "pseudoforge/bpe.hpp"
#include "pseudoforge/corpus.hpp"
#include "pseudoforge/decode.hpp"
#include "pseudoforge/random.hpp"
#include "pseudoforge/scorer.hpp"
#include "pseudoforge/utf8.hpp"

namespace pseudoforge::testing {

// chi-square critical value at significance 0.001 for 3 degrees of freedom.
inline constexpr double kChi2Crit3Df = 16.2662;

inline double chi2_statistic(const std::vector<std::uint64_t>& observed,
                             const std::vector<double>& expected) {
  double stat = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    if (expected[i] <= 0.0) continue;
    const double diff = static_cast<double>(observed[i]) - expected[i];
    stat += diff * diff / expected[i];
  }
  return stat;
}

// ---------------------------------------------------------------------------
// Random fixtures

inline const std::vector<std::string>& token_alphabet() {
  static const std::vector<std::string> alphabet = {
      "a", "b", "c", "d", "e", "f", "g", "h", "k", "m",
      "n", "o", "r", "s", "t", "u", "w", "z", "é", "日"};
  return alphabet;
}

inline Token random_token(RandomSource& rng, std::size_t max_chars = 6) {
  const auto& alphabet = token_alphabet();
  const std::size_t len = 1 + rng.next_below(max_chars);
  Token token;
  for (std::size_t i = 0; i < len; ++i) {
    token += alphabet[rng.next_below(alphabet.size())];
  }
  return token;
}

inline Sentence random_sentence(RandomSource& rng, std::size_t min_len = 1,
                                std::size_t max_len = 12) {
  Sentence sentence;
  const std::size_t len = min_len + rng.next_below(max_len - min_len + 1);
  for (std::size_t i = 0; i < len; ++i) {
    sentence.tokens.push_back(random_token(rng));
  }
  return sentence;
}

inline Corpus random_seed_corpus(RandomSource& rng, std::size_t pairs) {
  Corpus corpus;
  corpus.kind = CorpusKind::kSeedMonolingual;
  for (std::size_t n = 0; n < pairs; ++n) {
    ParallelPair pair;
    pair.target = random_sentence(rng);
    pair.source = pair.target;
    corpus.pairs.push_back(std::move(pair));
  }
  return corpus;
}

inline Corpus random_parallel_corpus(RandomSource& rng, std::size_t pairs,
                                     bool with_provenance = false) {
  Corpus corpus;
  corpus.kind = CorpusKind::kGenuine;
  for (std::size_t n = 0; n < pairs; ++n) {
    ParallelPair pair;
    pair.target = random_sentence(rng);
    pair.source = rng.next_below(4) == 0 ? pair.target : random_sentence(rng);
    if (with_provenance && rng.next_below(2) == 0) {
      pair.provenance = rng.next_below(2) == 0 ? Provenance::kGenuine
                                               : Provenance::kPseudo;
    }
    corpus.pairs.push_back(std::move(pair));
  }
  return corpus;
}

// ---------------------------------------------------------------------------
// Deterministic random scorer: a total function of (source, prefix) with
// strictly positive, almost-surely distinct probabilities.

class HashScorer : public SequenceScorer {
 public:
  HashScorer(std::vector<Token> vocabulary, std::uint64_t seed)
      : vocabulary_(std::move(vocabulary)), seed_(seed) {}

  std::vector<TokenLogProb> next_token_logprobs(
      const Sentence& source, std::span<const Token> prefix) const override {
    std::string context = source.join();
    context += '\x01';
    for (const Token& token : prefix) {
      context += token;
      context += '\x02';
    }
    RandomSource rng(seed_, seed_mix(seed_, context));
    std::vector<double> weights(vocabulary_.size() + 1);
    double total = 0.0;
    for (double& w : weights) {
      w = 0.05 + rng.next_double();
      total += w;
    }
    std::vector<TokenLogProb> out;
    out.reserve(weights.size());
    for (std::size_t i = 0; i < vocabulary_.size(); ++i) {
      out.push_back({vocabulary_[i], std::log(weights[i] / total)});
    }
    out.push_back({std::string(kEosToken), std::log(weights.back() / total)});
    return out;
  }

  const std::vector<Token>& vocabulary() const { return vocabulary_; }

 private:
  std::vector<Token> vocabulary_;
  std::uint64_t seed_;
};

// ---------------------------------------------------------------------------
// Reference noise-free beam search, written independently of the production
// decoder: plain raw-score beam with the same tie-breaking.

inline std::vector<ScoredSentence> reference_beam(const SequenceScorer& scorer,
                                                  const Sentence& source,
                                                  int beam_width, int max_len,
                                                  bool length_normalize) {
  struct Hyp {
    std::vector<Token> tokens;
    double raw = 0.0;
  };
  const auto final_score = [length_normalize](const Hyp& h) {
    if (!length_normalize) return h.raw;
    return h.raw / static_cast<double>(std::max<std::size_t>(1, h.tokens.size()));
  };
  const auto final_less = [&](const Hyp& a, const Hyp& b) {
    const double sa = final_score(a);
    const double sb = final_score(b);
    if (sa != sb) return sa > sb;
    return a.tokens < b.tokens;
  };

  std::vector<Hyp> live(1);
  std::vector<Hyp> done;
  for (int step = 1; step <= max_len && !live.empty(); ++step) {
    std::vector<Hyp> next;
    for (const Hyp& h : live) {
      for (const TokenLogProb& cand : scorer.next_token_logprobs(
               source, std::span<const Token>(h.tokens))) {
        Hyp child = h;
        child.raw += cand.logprob;
        if (cand.token == kEosToken) {
          done.push_back(std::move(child));
        } else {
          child.tokens.push_back(cand.token);
          next.push_back(std::move(child));
        }
      }
    }
    std::sort(next.begin(), next.end(), [](const Hyp& a, const Hyp& b) {
      if (a.raw != b.raw) return a.raw > b.raw;
      return a.tokens < b.tokens;
    });
    if (next.size() > static_cast<std::size_t>(beam_width)) {
      next.resize(static_cast<std::size_t>(beam_width));
    }
    live = std::move(next);
    std::sort(done.begin(), done.end(), final_less);
    if (done.size() > static_cast<std::size_t>(beam_width)) {
      done.resize(static_cast<std::size_t>(beam_width));
    }
  }
  for (Hyp& h : live) done.push_back(std::move(h));
  std::sort(done.begin(), done.end(), final_less);
  if (done.size() > static_cast<std::size_t>(beam_width)) {
    done.resize(static_cast<std::size_t>(beam_width));
  }

  std::vector<ScoredSentence> out;
  for (Hyp& h : done) {
    out.push_back({Sentence{std::move(h.tokens)}, 0.0});
    out.back().score = length_normalize
                           ? h.raw / static_cast<double>(std::max<std::size_t>(
                                         1, out.back().sentence.size()))
                           : h.raw;
  }
  return out;
}

// Exhaustive argmax over all sequences of length <= max_len: sequences
// shorter than max_len pay the eos step, length-max_len sequences do not
// (they finalize by the length bound, matching the decoder).
inline ScoredSentence brute_force_best(const SequenceScorer& scorer,
                                       const Sentence& source, int max_len,
                                       bool length_normalize) {
  ScoredSentence best;
  bool have_best = false;

  std::vector<Token> tokens;
  const auto consider = [&](double raw, bool needs_eos) {
    double total = raw;
    if (needs_eos) {
      double eos_logprob = -std::numeric_limits<double>::infinity();
      for (const TokenLogProb& cand : scorer.next_token_logprobs(
               source, std::span<const Token>(tokens))) {
        if (cand.token == kEosToken) eos_logprob = cand.logprob;
      }
      total += eos_logprob;
    }
    const double score =
        length_normalize
            ? total / static_cast<double>(std::max<std::size_t>(1, tokens.size()))
            : total;
    if (!have_best || score > best.score ||
        (score == best.score && tokens < best.sentence.tokens)) {
      best = {Sentence{tokens}, score};
      have_best = true;
    }
  };

  const std::function<void(double)> recurse = [&](double raw) {
    consider(raw, tokens.size() < static_cast<std::size_t>(max_len));
    if (tokens.size() == static_cast<std::size_t>(max_len)) return;
    const auto candidates =
        scorer.next_token_logprobs(source, std::span<const Token>(tokens));
    for (const TokenLogProb& cand : candidates) {
      if (cand.token == kEosToken) continue;
      tokens.push_back(cand.token);
      recurse(raw + cand.logprob);
      tokens.pop_back();
    }
  };
  recurse(0.0);
  return best;
}

// ---------------------------------------------------------------------------
// Naive BPE learner: recounts the full pair table from scratch each step.

inline MergeTable naive_learn_bpe(const Corpus& corpus,
                                  std::size_t num_merges) {
  std::map<std::string, std::uint64_t> word_freq;
  for (const ParallelPair& pair : corpus.pairs) {
    for (const Token& token : pair.target.tokens) ++word_freq[token];
  }
  std::vector<std::pair<std::vector<std::string>, std::uint64_t>> words;
  for (const auto& [word, freq] : word_freq) {
    words.emplace_back(utf8::split_code_points(word), freq);
  }

  MergeTable table;
  for (std::size_t step = 0; step < num_merges; ++step) {
    std::map<std::pair<std::string, std::string>, std::uint64_t> counts;
    for (const auto& [symbols, freq] : words) {
      for (std::size_t i = 0; i + 1 < symbols.size(); ++i) {
        counts[{symbols[i], symbols[i + 1]}] += freq;
      }
    }
    std::pair<std::string, std::string> best;
    std::uint64_t best_count = 0;
    for (const auto& [pair, count] : counts) {
      if (count > best_count) {
        best = pair;
        best_count = count;
      }
    }
    if (best_count < 2) break;
    table.merges.push_back(best);
    for (auto& [symbols, freq] : words) {
      std::vector<std::string> next;
      std::size_t i = 0;
      while (i < symbols.size()) {
        if (i + 1 < symbols.size() && symbols[i] == best.first &&
            symbols[i + 1] == best.second) {
          next.push_back(best.first + best.second);
          i += 2;
        } else {
          next.push_back(symbols[i]);
          ++i;
        }
      }
      symbols = std::move(next);
    }
  }
  return table;
}

// ---------------------------------------------------------------------------
// Brute-force minimal token alignment cost by plain recursion.

inline std::size_t brute_force_edit_cost(const std::vector<Token>& a,
                                         const std::vector<Token>& b,
                                         std::size_t i = 0,
                                         std::size_t j = 0) {
  if (i == a.size()) return b.size() - j;
  if (j == b.size()) return a.size() - i;
  std::size_t best =
      brute_force_edit_cost(a, b, i + 1, j + 1) + (a[i] == b[j] ? 0 : 1);
  best = std::min(best, brute_force_edit_cost(a, b, i + 1, j) + 1);
  best = std::min(best, brute_force_edit_cost(a, b, i, j + 1) + 1);
  return best;
}

// ---------------------------------------------------------------------------
// Scratch directory, removed on destruction.

class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::atomic<std::uint64_t> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("pseudoforge-test-" + tag + "-" +
             std::to_string(counter.fetch_add(1)) + "-" +
             std::to_string(::getpid()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path file(const std::string& name) const {
    return path_ / name;
  }

 private:
  std::filesystem::path path_;
};

inline std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace pseudoforge::testing

#endif  // PSEUDOFORGE_TESTS_HELPERS_HPP_
