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

#include "pseudoforge/scorer.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "pseudoforge/error.hpp"
#include "pseudoforge/version.hpp"

namespace pseudoforge {

namespace {

constexpr double kStoredSumTolerance = 1e-9;
constexpr double kContractSumTolerance = 1e-6;

std::string format_double(double value) {
  char buffer[32];
  const auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value,
                                       std::chars_format::general);
  return std::string(buffer, end);
}

std::string key_context(const ToyScorer::Key& key) {
  return "(source '" + key.source + "', prefix '" + key.prefix + "')";
}

void validate_stored(const ToyScorer::Key& key,
                     const std::vector<TokenProb>& dist) {
  if (dist.empty()) {
    throw ValidationError("toy scorer: empty distribution at " +
                          key_context(key));
  }
  double sum = 0.0;
  bool has_eos = false;
  std::set<std::string_view> seen;
  for (const TokenProb& entry : dist) {
    if (!(entry.prob > 0.0 && entry.prob <= 1.0)) {
      throw ValidationError("toy scorer: probability out of (0, 1] for '" +
                            entry.token + "' at " + key_context(key));
    }
    if (!seen.insert(entry.token).second) {
      throw ValidationError("toy scorer: duplicate token '" + entry.token +
                            "' at " + key_context(key));
    }
    if (entry.token == kEosToken) has_eos = true;
    sum += entry.prob;
  }
  if (std::abs(sum - 1.0) > kStoredSumTolerance) {
    throw ValidationError("toy scorer: distribution at " + key_context(key) +
                          " sums to " + format_double(sum) + ", expected 1");
  }
  if (!has_eos) {
    throw ValidationError("toy scorer: distribution at " + key_context(key) +
                          " lacks the eos entry");
  }
}

std::vector<TokenLogProb> to_logprobs(const std::vector<TokenProb>& dist) {
  std::vector<TokenLogProb> out;
  out.reserve(dist.size());
  for (const TokenProb& entry : dist) {
    out.push_back({entry.token, std::log(entry.prob)});
  }
  return out;
}

// Splits on "|||" separators, trimming blanks around each field so empty
// fields ("a ||| ||| b") parse cleanly.
std::vector<std::string_view> split_fields(std::string_view line) {
  const auto trim = [](std::string_view field) {
    while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) {
      field.remove_prefix(1);
    }
    while (!field.empty() && (field.back() == ' ' || field.back() == '\t')) {
      field.remove_suffix(1);
    }
    return field;
  };
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  for (;;) {
    const std::size_t sep = line.find("|||", pos);
    if (sep == std::string_view::npos) {
      fields.push_back(trim(line.substr(pos)));
      return fields;
    }
    fields.push_back(trim(line.substr(pos, sep - pos)));
    pos = sep + 3;
  }
}

}  // namespace

double check_distribution(const std::vector<TokenLogProb>& candidates,
                          const std::string& context) {
  if (candidates.empty()) {
    throw ValidationError("scorer contract: empty candidate set (" + context +
                          ")");
  }
  double sum = 0.0;
  bool has_eos = false;
  for (const TokenLogProb& entry : candidates) {
    if (entry.token == kEosToken) has_eos = true;
    sum += std::exp(entry.logprob);
  }
  if (!has_eos) {
    throw ValidationError("scorer contract: candidates lack eos (" + context +
                          ")");
  }
  if (std::abs(sum - 1.0) > kContractSumTolerance) {
    throw ValidationError("scorer contract: probabilities sum to " +
                          format_double(sum) + " (" + context + ")");
  }
  return sum;
}

double sequence_logprob(const SequenceScorer& scorer, const Sentence& source,
                        std::span<const Token> tokens) {
  double total = 0.0;
  for (std::size_t step = 0; step <= tokens.size(); ++step) {
    const std::span<const Token> prefix = tokens.subspan(0, step);
    const auto candidates = scorer.next_token_logprobs(source, prefix);
    check_distribution(candidates, "sequence_logprob step " +
                                       std::to_string(step + 1));
    const std::string_view wanted =
        step == tokens.size() ? kEosToken : std::string_view(tokens[step]);
    double logprob = -std::numeric_limits<double>::infinity();
    for (const TokenLogProb& entry : candidates) {
      if (entry.token == wanted) {
        logprob = entry.logprob;
        break;
      }
    }
    total += logprob;
  }
  return total;
}

ToyScorer::ToyScorer(std::vector<Token> vocabulary,
                     std::map<Key, std::vector<TokenProb>> table)
    : vocabulary_(std::move(vocabulary)), table_(std::move(table)) {
  if (vocabulary_.empty()) {
    throw ValidationError("toy scorer: vocabulary is empty");
  }
  for (const Token& token : vocabulary_) {
    if (token == kEosToken) {
      throw ValidationError("toy scorer: vocabulary must not list eos");
    }
    if (!valid_token(token)) {
      throw ValidationError("toy scorer: invalid vocabulary token '" + token +
                            "'");
    }
  }
  for (const auto& [key, dist] : table_) {
    validate_stored(key, dist);
  }
  const double uniform = 1.0 / static_cast<double>(vocabulary_.size() + 1);
  for (const Token& token : vocabulary_) {
    uniform_.push_back({token, uniform});
  }
  uniform_.push_back({std::string(kEosToken), uniform});
}

std::vector<TokenLogProb> ToyScorer::next_token_logprobs(
    const Sentence& source, std::span<const Token> prefix) const {
  const std::string source_key = source.join();
  std::string prefix_key;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    if (i > 0) prefix_key += ' ';
    prefix_key += prefix[i];
  }
  for (const Key& key :
       {Key{source_key, prefix_key}, Key{source_key, "*"},
        Key{"*", prefix_key}, Key{"*", "*"}}) {
    const auto it = table_.find(key);
    if (it != table_.end()) return to_logprobs(it->second);
  }
  return to_logprobs(uniform_);
}

ToyScorer parse_toy_scorer(std::string_view text) {
  std::vector<Token> vocabulary;
  bool saw_header = false;
  bool saw_vocab = false;
  std::map<ToyScorer::Key, std::vector<TokenProb>> table;

  const std::string expected_header =
      std::string("#version: ") + kToyScorerFormatVersion;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    const std::string_view line = text.substr(pos, eol - pos);
    const bool at_end = eol == text.size();
    pos = eol + 1;
    ++line_no;
    if (line.empty()) {
      if (at_end) break;
      continue;
    }
    if (!saw_header) {
      if (line != expected_header) {
        throw ParseError(
            "bad toy-scorer header, expected '" + expected_header + "'", 1);
      }
      saw_header = true;
      continue;
    }
    if (!saw_vocab) {
      if (!line.starts_with("vocab:")) {
        throw ParseError("expected 'vocab:' line", line_no);
      }
      vocabulary = Sentence::split(line.substr(6)).tokens;
      saw_vocab = true;
      continue;
    }
    const auto fields = split_fields(line);
    if (fields.size() != 3) {
      throw ParseError("record needs 'source ||| prefix ||| token prob'",
                       line_no);
    }
    const std::string_view entry = fields[2];
    const std::size_t space = entry.rfind(' ');
    if (space == std::string_view::npos || space == 0) {
      throw ParseError("record tail must be 'token probability'", line_no);
    }
    const std::string_view token = entry.substr(0, space);
    const std::string_view prob_text = entry.substr(space + 1);
    double prob = 0.0;
    const auto [ptr, ec] = std::from_chars(
        prob_text.data(), prob_text.data() + prob_text.size(), prob);
    if (ec != std::errc() || ptr != prob_text.data() + prob_text.size()) {
      throw ParseError("bad probability '" + std::string(prob_text) + "'",
                       line_no);
    }
    // Keys are normalized to single-space joins so lookups match join().
    const auto normalize = [](std::string_view field) -> std::string {
      if (field == "*") return "*";
      return Sentence::split(field).join();
    };
    ToyScorer::Key key{normalize(fields[0]), normalize(fields[1])};
    table[key].push_back({std::string(token), prob});
    if (at_end) break;
  }
  if (!saw_header) throw ParseError("empty toy-scorer file (missing header)");
  if (!saw_vocab) throw ParseError("toy-scorer file lacks a vocab line");
  return ToyScorer(std::move(vocabulary), std::move(table));
}

std::string format_toy_scorer(const ToyScorer& scorer) {
  std::string out = "#version: ";
  out += kToyScorerFormatVersion;
  out += "\nvocab:";
  for (const Token& token : scorer.vocabulary()) {
    out += ' ';
    out += token;
  }
  out += '\n';
  for (const auto& [key, dist] : scorer.table()) {
    for (const TokenProb& entry : dist) {
      out += key.source;
      out += " ||| ";
      out += key.prefix;
      out += " ||| ";
      out += entry.token;
      out += ' ';
      out += format_double(entry.prob);
      out += '\n';
    }
  }
  return out;
}

ToyScorer load_toy_scorer(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    throw IoError("no such file: " + path.string());
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_toy_scorer(buffer.str());
}

}  // namespace pseudoforge
