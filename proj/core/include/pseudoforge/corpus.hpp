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

#ifndef PSEUDOFORGE_CORPUS_HPP_
#define PSEUDOFORGE_CORPUS_HPP_

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace pseudoforge {

// A token is a non-empty UTF-8 string containing no space, tab, CR or LF.
// Splitting a line on whitespace yields valid tokens by construction; use
// valid_token() when building tokens programmatically.
using Token = std::string;

bool valid_token(std::string_view token);

// An ordered token sequence. Empty sentences only ever arise as noising
// output; corpus files must not contain them.
struct Sentence {
  std::vector<Token> tokens;

  bool empty() const { return tokens.empty(); }
  std::size_t size() const { return tokens.size(); }

  // Space-joined surface form.
  std::string join() const;

  // Splits on runs of blanks. Tokens are validated; throws ParseError on a
  // tab or other forbidden character inside a token.
  static Sentence split(std::string_view line);

  friend bool operator==(const Sentence&, const Sentence&) = default;
  auto operator<=>(const Sentence&) const = default;
};

enum class Provenance { kNone, kGenuine, kPseudo };

// One training example: (possibly ungrammatical) source, grammatical target.
struct ParallelPair {
  Sentence source;
  Sentence target;
  // Optional origin annotation, carried as a third TSV column by writers and
  // tolerated (or ignored) by readers.
  Provenance provenance = Provenance::kNone;

  friend bool operator==(const ParallelPair&, const ParallelPair&) = default;
};

enum class CorpusKind { kGenuine, kPseudo, kSeedMonolingual };

// An ordered pair collection. Seed-monolingual corpora (the grammatical
// seed text T) hold source == target for every pair.
struct Corpus {
  std::vector<ParallelPair> pairs;
  CorpusKind kind = CorpusKind::kGenuine;

  std::size_t size() const { return pairs.size(); }
  bool empty() const { return pairs.empty(); }
};

enum class CorpusFormat { kPlain, kTsv };

// Which side a plain-format writer emits.
enum class CorpusSide { kSource, kTarget };

// Reads a corpus file. Plain format: one sentence per line, yielding
// seed-monolingual pairs. TSV: "source<TAB>target" with an optional third
// provenance column ("genuine"/"pseudo"), yielding a genuine-kind corpus.
// Input must be valid UTF-8 with LF line endings. Raises IoError for a
// missing file and ParseError (with 1-based line) for malformed content:
// empty plain lines, missing/extra tabs, empty targets, stray CR.
Corpus read_corpus(const std::filesystem::path& path, CorpusFormat format);

// Writes UTF-8, LF-terminated lines; read_corpus(write_corpus(c)) == c for
// the same format. Plain format writes one side (default target).
void write_corpus(const Corpus& corpus, const std::filesystem::path& path,
                  CorpusFormat format, CorpusSide side = CorpusSide::kTarget);

// In-memory equivalents of the file formats (used by the writers/readers and
// handy in tests).
std::string format_corpus(const Corpus& corpus, CorpusFormat format,
                          CorpusSide side = CorpusSide::kTarget);
Corpus parse_corpus(std::string_view text, CorpusFormat format);

}  // namespace pseudoforge

#endif  // PSEUDOFORGE_CORPUS_HPP_
