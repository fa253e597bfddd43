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

#include "pseudoforge/rerank.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <numeric>
#include <sstream>

#include "pseudoforge/error.hpp"

namespace pseudoforge {

namespace {

std::string format_score(double value) {
  char buffer[40];
  const auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value,
                                       std::chars_format::general, 17);
  return std::string(buffer, end);
}

}  // namespace

NBestList make_nbest_list(Sentence source,
                          std::vector<NBestCandidate> candidates) {
  if (candidates.empty()) {
    throw ValidationError("n-best list needs at least one candidate");
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const NBestCandidate& a, const NBestCandidate& b) {
                     return a.l2r_score > b.l2r_score;
                   });
  return NBestList{std::move(source), std::move(candidates)};
}

double ensemble_combine(std::span<const double> scores) {
  if (scores.empty()) {
    throw ValidationError("ensemble_combine: no model scores");
  }
  const double sum = std::accumulate(scores.begin(), scores.end(), 0.0);
  return sum / static_cast<double>(scores.size());
}

NBestList rerank_r2l(const NBestList& nbest,
                     std::span<const SequenceScorer* const> r2l_scorers,
                     bool length_normalize,
                     std::vector<RerankDetail>* detail) {
  if (nbest.candidates.empty()) {
    throw ValidationError("rerank_r2l: empty n-best list");
  }
  if (r2l_scorers.empty()) {
    throw ValidationError("rerank_r2l: no right-to-left scorers");
  }

  struct Entry {
    std::size_t original_rank;
    RerankDetail scores;
  };
  std::vector<Entry> entries;
  entries.reserve(nbest.candidates.size());
  for (std::size_t rank = 0; rank < nbest.candidates.size(); ++rank) {
    const NBestCandidate& candidate = nbest.candidates[rank];
    std::vector<Token> reversed(candidate.sentence.tokens.rbegin(),
                                candidate.sentence.tokens.rend());
    std::vector<double> model_scores;
    model_scores.reserve(r2l_scorers.size());
    for (const SequenceScorer* scorer : r2l_scorers) {
      model_scores.push_back(
          sequence_logprob(*scorer, nbest.source,
                           std::span<const Token>(reversed)));
    }
    double r2l = ensemble_combine(model_scores);
    if (length_normalize) {
      r2l /= static_cast<double>(
          std::max<std::size_t>(1, candidate.sentence.size()));
    }
    Entry entry;
    entry.original_rank = rank;
    entry.scores = {candidate.l2r_score, r2l, candidate.l2r_score + r2l};
    entries.push_back(entry);
  }

  std::stable_sort(entries.begin(), entries.end(),
                   [](const Entry& a, const Entry& b) {
                     return a.scores.combined > b.scores.combined;
                   });

  NBestList out;
  out.source = nbest.source;
  out.candidates.reserve(entries.size());
  if (detail != nullptr) detail->clear();
  for (const Entry& entry : entries) {
    out.candidates.push_back(nbest.candidates[entry.original_rank]);
    if (detail != nullptr) detail->push_back(entry.scores);
  }
  return out;
}

Sentence sed_gate(const ErrorDetector& detector, const Sentence& source,
                  const Sentence& correction) {
  return detector.detects_error(source) ? correction : source;
}

std::vector<Sentence> sed_gate_stream(const std::vector<Sentence>& sources,
                                      const std::vector<Sentence>& corrections,
                                      const std::vector<bool>& verdicts) {
  if (corrections.size() != sources.size()) {
    throw ValidationError("sed gate: corrections count " +
                          std::to_string(corrections.size()) +
                          " != sources count " +
                          std::to_string(sources.size()));
  }
  if (verdicts.size() != sources.size()) {
    throw ValidationError("sed gate: verdicts count " +
                          std::to_string(verdicts.size()) +
                          " != sources count " + std::to_string(sources.size()));
  }
  std::vector<Sentence> out;
  out.reserve(sources.size());
  for (std::size_t n = 0; n < sources.size(); ++n) {
    out.push_back(verdicts[n] ? corrections[n] : sources[n]);
  }
  return out;
}

std::vector<NBestGroup> parse_nbest_file(std::string_view text) {
  std::vector<NBestGroup> groups;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    const std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (line.empty()) continue;

    const auto trim = [](std::string_view field) {
      while (!field.empty() &&
             (field.front() == ' ' || field.front() == '\t')) {
        field.remove_prefix(1);
      }
      while (!field.empty() && (field.back() == ' ' || field.back() == '\t')) {
        field.remove_suffix(1);
      }
      return field;
    };
    const std::size_t sep1 = line.find("|||");
    if (sep1 == std::string_view::npos) {
      throw ParseError("n-best line needs 'id ||| tokens ||| score'", line_no);
    }
    const std::size_t sep2 = line.find("|||", sep1 + 3);
    if (sep2 == std::string_view::npos) {
      throw ParseError("n-best line needs 'id ||| tokens ||| score'", line_no);
    }
    const std::string id(trim(line.substr(0, sep1)));
    const std::string_view tokens_field =
        trim(line.substr(sep1 + 3, sep2 - sep1 - 3));
    const std::string_view score_field = trim(line.substr(sep2 + 3));

    NBestCandidate candidate;
    candidate.sentence = Sentence::split(tokens_field);
    const auto [ptr, ec] =
        std::from_chars(score_field.data(),
                        score_field.data() + score_field.size(),
                        candidate.l2r_score);
    if (ec != std::errc() || ptr != score_field.data() + score_field.size()) {
      throw ParseError("bad n-best score '" + std::string(score_field) + "'",
                       line_no);
    }

    if (groups.empty() || groups.back().id != id) {
      for (const NBestGroup& group : groups) {
        if (group.id == id) {
          throw ParseError("n-best lines for id '" + id +
                               "' are not consecutive",
                           line_no);
        }
      }
      groups.push_back({id, {}});
    }
    groups.back().candidates.push_back(std::move(candidate));
  }
  return groups;
}

std::string format_nbest_file(const std::vector<NBestGroup>& groups) {
  std::string out;
  for (const NBestGroup& group : groups) {
    for (const NBestCandidate& candidate : group.candidates) {
      out += group.id;
      out += " ||| ";
      out += candidate.sentence.join();
      out += " ||| ";
      out += format_score(candidate.l2r_score);
      out += '\n';
    }
  }
  return out;
}

std::vector<NBestGroup> read_nbest_file(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    throw IoError("no such file: " + path.string());
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_nbest_file(buffer.str());
}

void write_nbest_file(const std::vector<NBestGroup>& groups,
                      const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  const std::string text = format_nbest_file(groups);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.flush();
  if (!out) throw IoError("write failure: " + path.string());
}

}  // namespace pseudoforge
