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

#include "pseudoforge/bpe.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <queue>
#include <set>
#include <sstream>

#include "pseudoforge/error.hpp"
#include "pseudoforge/utf8.hpp"
#include "pseudoforge/version.hpp"

namespace pseudoforge {

namespace {

using SymbolPair = std::pair<std::string, std::string>;

std::string pair_key(const std::string& left, const std::string& right) {
  std::string key;
  key.reserve(left.size() + right.size() + 1);
  key += left;
  key += '\t';
  key += right;
  return key;
}

struct WordEntry {
  std::vector<std::string> symbols;
  std::uint64_t freq = 0;
};

// Heap entry for the learner. Ordered so the top is the highest count, ties
// broken by lexicographically smallest (left, right).
struct HeapEntry {
  std::uint64_t count;
  SymbolPair pair;

  bool operator<(const HeapEntry& other) const {
    if (count != other.count) return count < other.count;
    return pair > other.pair;
  }
};

// Counts every adjacent symbol position; "a a a" holds two (a,a) positions.
void count_word_pairs(const WordEntry& word,
                      std::map<SymbolPair, std::int64_t>& delta,
                      std::int64_t sign) {
  for (std::size_t i = 0; i + 1 < word.symbols.size(); ++i) {
    delta[{word.symbols[i], word.symbols[i + 1]}] +=
        sign * static_cast<std::int64_t>(word.freq);
  }
}

// Replaces all adjacent (left,right) occurrences left to right. Returns true
// if anything merged.
bool merge_in_word(std::vector<std::string>& symbols, const std::string& left,
                   const std::string& right) {
  bool merged = false;
  std::vector<std::string> out;
  out.reserve(symbols.size());
  std::size_t i = 0;
  while (i < symbols.size()) {
    if (i + 1 < symbols.size() && symbols[i] == left &&
        symbols[i + 1] == right) {
      out.push_back(left + right);
      i += 2;
      merged = true;
    } else {
      out.push_back(std::move(symbols[i]));
      ++i;
    }
  }
  symbols = std::move(out);
  return merged;
}

}  // namespace

MergeTable learn_bpe(const Corpus& corpus, std::size_t num_merges) {
  if (corpus.empty()) {
    throw ValidationError("learn_bpe: corpus is empty");
  }

  // Word-frequency table over the target side, in sorted word order so the
  // result is a pure function of the frequency table.
  std::map<std::string, std::uint64_t> word_freq;
  for (const ParallelPair& pair : corpus.pairs) {
    for (const Token& token : pair.target.tokens) {
      ++word_freq[token];
    }
  }

  std::vector<WordEntry> words;
  words.reserve(word_freq.size());
  for (const auto& [word, freq] : word_freq) {
    WordEntry entry;
    entry.symbols = utf8::split_code_points(word);
    entry.freq = freq;
    words.push_back(std::move(entry));
  }

  std::map<SymbolPair, std::int64_t> pair_counts;
  std::map<SymbolPair, std::vector<std::uint32_t>> pair_words;
  for (std::uint32_t w = 0; w < words.size(); ++w) {
    const WordEntry& word = words[w];
    for (std::size_t i = 0; i + 1 < word.symbols.size(); ++i) {
      SymbolPair p{word.symbols[i], word.symbols[i + 1]};
      pair_counts[p] += static_cast<std::int64_t>(word.freq);
      pair_words[p].push_back(w);
    }
  }

  std::priority_queue<HeapEntry> heap;
  for (const auto& [p, count] : pair_counts) {
    if (count > 0) heap.push({static_cast<std::uint64_t>(count), p});
  }

  MergeTable table;
  std::set<SymbolPair> merged;
  while (table.merges.size() < num_merges && !heap.empty()) {
    const HeapEntry top = heap.top();
    heap.pop();
    if (merged.count(top.pair) != 0) continue;
    const auto it = pair_counts.find(top.pair);
    const std::int64_t current = it == pair_counts.end() ? 0 : it->second;
    if (current <= 0 || static_cast<std::uint64_t>(current) != top.count) {
      continue;  // stale heap entry
    }
    if (current < 2) break;  // no pair occurs at least twice

    merged.insert(top.pair);
    const auto& [left, right] = top.pair;
    table.merges.emplace_back(left, right);

    // Rewrite affected words and track count deltas.
    std::vector<std::uint32_t> affected;
    if (auto pw = pair_words.find(top.pair); pw != pair_words.end()) {
      affected = pw->second;
      std::sort(affected.begin(), affected.end());
      affected.erase(std::unique(affected.begin(), affected.end()),
                     affected.end());
      pair_words.erase(pw);
    }
    std::map<SymbolPair, std::int64_t> delta;
    for (const std::uint32_t w : affected) {
      WordEntry& word = words[w];
      std::vector<std::string> old_symbols = word.symbols;
      if (!merge_in_word(word.symbols, left, right)) continue;
      WordEntry old_word{std::move(old_symbols), word.freq};
      count_word_pairs(old_word, delta, -1);
      count_word_pairs(word, delta, +1);
      for (std::size_t i = 0; i + 1 < word.symbols.size(); ++i) {
        pair_words[{word.symbols[i], word.symbols[i + 1]}].push_back(w);
      }
    }
    for (const auto& [p, d] : delta) {
      if (d == 0) continue;
      const std::int64_t updated = (pair_counts[p] += d);
      if (updated > 0) {
        heap.push({static_cast<std::uint64_t>(updated), p});
      } else {
        pair_counts.erase(p);
      }
    }
  }
  return table;
}

BpeApplier::BpeApplier(MergeTable table) : table_(std::move(table)) {
  ranks_.reserve(table_.merges.size());
  for (std::size_t i = 0; i < table_.merges.size(); ++i) {
    const auto& [left, right] = table_.merges[i];
    const auto [it, inserted] =
        ranks_.emplace(pair_key(left, right), static_cast<int>(i));
    if (!inserted) {
      throw ValidationError("duplicate merge entry: " + left + " " + right);
    }
  }
}

std::vector<Token> BpeApplier::segment_word(const std::string& word) const {
  std::vector<std::string> symbols = utf8::split_code_points(word);
  if (symbols.size() > 1 && !ranks_.empty()) {
    // Sequential replay: repeatedly apply the lowest-ranked rule at or after
    // the last applied one. Rules whose turn has passed never re-fire, which
    // is exactly "replay merges in table order".
    int cursor = 0;
    for (;;) {
      int best = -1;
      for (std::size_t i = 0; i + 1 < symbols.size(); ++i) {
        const auto it = ranks_.find(pair_key(symbols[i], symbols[i + 1]));
        if (it == ranks_.end() || it->second < cursor) continue;
        if (best < 0 || it->second < best) best = it->second;
      }
      if (best < 0) break;
      const auto& [left, right] = table_.merges[static_cast<std::size_t>(best)];
      merge_in_word(symbols, left, right);
      cursor = best + 1;
      if (symbols.size() <= 1) break;
    }
  }
  for (std::size_t i = 0; i + 1 < symbols.size(); ++i) {
    symbols[i] += table_.marker;
  }
  return symbols;
}

SubwordSentence BpeApplier::segment(const Sentence& sentence) const {
  SubwordSentence out;
  for (const Token& word : sentence.tokens) {
    std::vector<Token> pieces = segment_word(word);
    out.tokens.insert(out.tokens.end(),
                      std::make_move_iterator(pieces.begin()),
                      std::make_move_iterator(pieces.end()));
  }
  return out;
}

SubwordSentence apply_bpe(const Sentence& sentence, const MergeTable& table) {
  return BpeApplier(table).segment(sentence);
}

Corpus segment_corpus(const Corpus& corpus, const BpeApplier& applier,
                      int workers) {
  // Pass 1: the distinct-word vocabulary, in first-seen order.
  std::unordered_map<std::string, std::uint32_t> vocab_index;
  std::vector<const std::string*> vocab;
  for (const ParallelPair& pair : corpus.pairs) {
    for (const Sentence* side : {&pair.source, &pair.target}) {
      for (const Token& token : side->tokens) {
        const auto [it, inserted] =
            vocab_index.emplace(token, static_cast<std::uint32_t>(vocab.size()));
        if (inserted) vocab.push_back(&it->first);
      }
    }
  }

  std::vector<std::vector<Token>> segmented(vocab.size());
  parallel_for(vocab.size(), workers, [&](std::size_t v) {
    segmented[v] = applier.segment_word(*vocab[v]);
  });

  const auto segment_sentence = [&](const Sentence& sentence) {
    Sentence out;
    for (const Token& token : sentence.tokens) {
      const std::vector<Token>& pieces = segmented[vocab_index.at(token)];
      out.tokens.insert(out.tokens.end(), pieces.begin(), pieces.end());
    }
    return out;
  };

  Corpus out;
  out.kind = corpus.kind;
  out.pairs.resize(corpus.size());
  parallel_for(corpus.size(), workers, [&](std::size_t n) {
    const ParallelPair& pair = corpus.pairs[n];
    ParallelPair result;
    result.provenance = pair.provenance;
    result.target = segment_sentence(pair.target);
    result.source = pair.source == pair.target ? result.target
                                               : segment_sentence(pair.source);
    out.pairs[n] = std::move(result);
  });
  return out;
}

Sentence decode_bpe(const SubwordSentence& subwords, const std::string& marker) {
  Sentence out;
  std::string pending;
  bool open_chain = false;
  for (const Token& token : subwords.tokens) {
    const bool continues = token.size() > marker.size() &&
                           token.ends_with(marker);
    if (continues) {
      pending += token.substr(0, token.size() - marker.size());
      open_chain = true;
    } else {
      pending += token;
      out.tokens.push_back(std::move(pending));
      pending.clear();
      open_chain = false;
    }
  }
  if (open_chain) {
    throw ValidationError("dangling continuation marker at sentence end");
  }
  return out;
}

std::string format_merge_table(const MergeTable& table) {
  std::string out = "#version: ";
  out += kBpeFormatVersion;
  out += '\n';
  for (const auto& [left, right] : table.merges) {
    out += left;
    out += ' ';
    out += right;
    out += '\n';
  }
  return out;
}

MergeTable parse_merge_table(std::string_view text) {
  MergeTable table;
  std::set<SymbolPair> seen;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  const std::string expected_header =
      std::string("#version: ") + kBpeFormatVersion;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    const std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (line_no == 1) {
      if (line != expected_header) {
        throw ParseError("bad merge-table header, expected '" +
                             expected_header + "'",
                         1);
      }
      continue;
    }
    if (line.empty()) continue;
    const std::size_t space = line.find(' ');
    if (space == std::string_view::npos || space == 0 ||
        space + 1 >= line.size() ||
        line.find(' ', space + 1) != std::string_view::npos) {
      throw ParseError("merge line must be 'left right'", line_no);
    }
    SymbolPair p{std::string(line.substr(0, space)),
                 std::string(line.substr(space + 1))};
    if (!seen.insert(p).second) {
      throw ParseError("duplicate merge entry", line_no);
    }
    table.merges.push_back(std::move(p));
  }
  if (line_no == 0) {
    throw ParseError("empty merge-table file (missing header)");
  }
  return table;
}

void write_merge_table(const MergeTable& table,
                       const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  const std::string text = format_merge_table(table);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.flush();
  if (!out) throw IoError("write failure: " + path.string());
}

MergeTable read_merge_table(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    throw IoError("no such file: " + path.string());
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_merge_table(buffer.str());
}

}  // namespace pseudoforge
