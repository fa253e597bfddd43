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

#include "pseudoforge/noise.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>

#include "pseudoforge/error.hpp"
#include "pseudoforge/parallel.hpp"

namespace pseudoforge {

namespace {

constexpr double kSumTolerance = 1e-9;

std::string format_probability(double value) {
  char buffer[32];
  const auto [end, ec] =
      std::to_chars(buffer, buffer + sizeof(buffer), value,
                    std::chars_format::general);
  return std::string(buffer, end);
}

double parse_probability(std::string_view field) {
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw ParseError("bad probability field '" + std::string(field) + "'");
  }
  return value;
}

}  // namespace

void NoiseSpec::validate() const {
  const double components[4] = {mu_mask, mu_deletion, mu_insertion, mu_keep};
  for (const double mu : components) {
    if (!(mu >= 0.0 && mu <= 1.0)) {
      throw ValidationError("noise spec component outside [0, 1]");
    }
  }
  const double sum = mu_mask + mu_deletion + mu_insertion + mu_keep;
  if (std::abs(sum - 1.0) > kSumTolerance) {
    throw ValidationError("noise spec components must sum to 1, got " +
                          format_probability(sum));
  }
}

NoiseSpec derive_spec(double mu_mask) {
  if (!(mu_mask >= 0.0 && mu_mask <= 0.8)) {
    throw DomainError("mu_mask must lie in [0, 0.8] with mu_keep fixed at 0.2");
  }
  NoiseSpec spec;
  spec.mu_mask = mu_mask;
  spec.mu_deletion = (0.8 - mu_mask) / 2.0;
  spec.mu_insertion = spec.mu_deletion;
  spec.mu_keep = 0.2;
  return spec;
}

std::string format_noise_spec(const NoiseSpec& spec) {
  return format_probability(spec.mu_mask) + "," +
         format_probability(spec.mu_deletion) + "," +
         format_probability(spec.mu_insertion) + "," +
         format_probability(spec.mu_keep);
}

NoiseSpec parse_noise_spec(std::string_view text) {
  double fields[4];
  std::size_t start = 0;
  for (int i = 0; i < 4; ++i) {
    const bool last = i == 3;
    const std::size_t comma = last ? text.size() : text.find(',', start);
    if (comma == std::string_view::npos) {
      throw ParseError("noise spec needs 4 comma-separated fields");
    }
    fields[i] = parse_probability(text.substr(start, comma - start));
    start = comma + 1;
  }
  NoiseSpec spec{fields[0], fields[1], fields[2], fields[3]};
  spec.validate();
  return spec;
}

UnigramTable build_unigram_table(const Corpus& genuine) {
  if (genuine.empty()) {
    throw ValidationError("build_unigram_table: corpus is empty");
  }
  ensure_mask_free(genuine, "unigram corpus");

  std::map<Token, std::uint64_t> counts;
  std::uint64_t total = 0;
  for (const ParallelPair& pair : genuine.pairs) {
    for (const Token& token : pair.target.tokens) {
      ++counts[token];
      ++total;
    }
  }
  if (total == 0) {
    throw ValidationError("build_unigram_table: corpus has no target tokens");
  }

  UnigramTable table;
  table.tokens_.reserve(counts.size());
  table.probability_.reserve(counts.size());
  table.cumulative_.reserve(counts.size());
  double running = 0.0;
  for (const auto& [token, count] : counts) {
    const double p = static_cast<double>(count) / static_cast<double>(total);
    running += p;
    table.tokens_.push_back(token);
    table.probability_.push_back(p);
    table.cumulative_.push_back(running);
  }
  table.cumulative_.back() = 1.0;
  return table;
}

double UnigramTable::probability(const Token& token) const {
  const auto it = std::lower_bound(tokens_.begin(), tokens_.end(), token);
  if (it == tokens_.end() || *it != token) return 0.0;
  return probability_[static_cast<std::size_t>(it - tokens_.begin())];
}

const Token& UnigramTable::sample(RandomSource& rng) const {
  const double u = rng.next_double();
  const auto it =
      std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  const std::size_t index = std::min<std::size_t>(
      static_cast<std::size_t>(it - cumulative_.begin()), tokens_.size() - 1);
  return tokens_[index];
}

Sentence direct_noise_sentence(const Sentence& grammatical,
                               const NoiseSpec& spec,
                               const UnigramTable& unigram, RandomSource& rng,
                               std::vector<NoiseAction>* actions) {
  spec.validate();
  Sentence out;
  out.tokens.reserve(grammatical.size());
  // Action thresholds in the spec's component order.
  const double t_mask = spec.mu_mask;
  const double t_del = t_mask + spec.mu_deletion;
  const double t_ins = t_del + spec.mu_insertion;
  for (const Token& token : grammatical.tokens) {
    const double u = rng.next_double();
    NoiseAction action;
    if (u < t_mask) {
      action = NoiseAction::kMask;
      out.tokens.emplace_back(kMaskToken);
    } else if (u < t_del) {
      action = NoiseAction::kDeletion;
    } else if (u < t_ins) {
      action = NoiseAction::kInsertion;
      out.tokens.push_back(token);
      out.tokens.push_back(unigram.sample(rng));
    } else {
      action = NoiseAction::kKeep;
      out.tokens.push_back(token);
    }
    if (actions != nullptr) actions->push_back(action);
  }
  return out;
}

Corpus generate_direct_noise_corpus(const Corpus& seed_corpus,
                                    const NoiseSpec& spec,
                                    const UnigramTable& unigram,
                                    std::uint64_t base_seed, int workers) {
  if (seed_corpus.kind != CorpusKind::kSeedMonolingual) {
    throw ValidationError("direct noise expects a seed-monolingual corpus");
  }
  ensure_mask_free(seed_corpus, "seed corpus");
  spec.validate();

  Corpus out;
  out.kind = CorpusKind::kPseudo;
  out.pairs.resize(seed_corpus.size());
  parallel_for(seed_corpus.size(), workers, [&](std::size_t n) {
    RandomSource rng(base_seed, n);
    const Sentence& target = seed_corpus.pairs[n].target;
    ParallelPair pair;
    pair.source = direct_noise_sentence(target, spec, unigram, rng);
    pair.target = target;
    out.pairs[n] = std::move(pair);
  });
  return out;
}

void ensure_mask_free(const Corpus& corpus, std::string_view what) {
  for (std::size_t n = 0; n < corpus.pairs.size(); ++n) {
    const ParallelPair& pair = corpus.pairs[n];
    for (const Sentence* side : {&pair.source, &pair.target}) {
      for (const Token& token : side->tokens) {
        if (token == kMaskToken) {
          throw ValidationError(std::string(what) +
                                " contains the reserved mask token (pair " +
                                std::to_string(n + 1) + ")");
        }
      }
    }
  }
}

}  // namespace pseudoforge
