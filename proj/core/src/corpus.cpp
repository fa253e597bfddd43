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

#include "pseudoforge/corpus.hpp"

#include <fstream>
#include <sstream>

#include "pseudoforge/error.hpp"
#include "pseudoforge/utf8.hpp"

namespace pseudoforge {

namespace {

bool forbidden_in_token(char ch) {
  return ch == ' ' || ch == '\t' || ch == '\n' || ch == '\r';
}

Sentence parse_sentence(std::string_view text, std::size_t line_no) {
  Sentence sentence;
  std::size_t pos = 0;
  while (pos < text.size()) {
    while (pos < text.size() && text[pos] == ' ') ++pos;
    std::size_t start = pos;
    while (pos < text.size() && text[pos] != ' ') {
      if (forbidden_in_token(text[pos])) {
        throw ParseError("forbidden control character inside token", line_no);
      }
      ++pos;
    }
    if (pos > start) {
      sentence.tokens.emplace_back(text.substr(start, pos - start));
    }
  }
  return sentence;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IoError("read failure: " + path.string());
  return std::move(buffer).str();
}

const char* provenance_label(Provenance p) {
  switch (p) {
    case Provenance::kGenuine:
      return "genuine";
    case Provenance::kPseudo:
      return "pseudo";
    default:
      return "";
  }
}

}  // namespace

bool valid_token(std::string_view token) {
  if (token.empty()) return false;
  for (const char ch : token) {
    if (forbidden_in_token(ch)) return false;
  }
  return utf8::validate(token);
}

std::string Sentence::join() const {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i > 0) out += ' ';
    out += tokens[i];
  }
  return out;
}

Sentence Sentence::split(std::string_view line) {
  return parse_sentence(line, 0);
}

Corpus parse_corpus(std::string_view text, CorpusFormat format) {
  std::size_t bad_pos = 0;
  if (!utf8::validate(text, &bad_pos)) {
    throw ParseError("invalid UTF-8 at byte offset " + std::to_string(bad_pos));
  }

  Corpus corpus;
  corpus.kind = format == CorpusFormat::kPlain ? CorpusKind::kSeedMonolingual
                                               : CorpusKind::kGenuine;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    const std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') {
      throw ParseError("carriage return found; corpora are LF-only", line_no);
    }

    if (format == CorpusFormat::kPlain) {
      Sentence sentence = parse_sentence(line, line_no);
      if (sentence.empty()) {
        throw ParseError("empty sentence in plain corpus", line_no);
      }
      ParallelPair pair;
      pair.source = sentence;
      pair.target = std::move(sentence);
      corpus.pairs.push_back(std::move(pair));
    } else {
      const std::size_t tab = line.find('\t');
      if (tab == std::string_view::npos) {
        throw ParseError("tsv line has no tab separator", line_no);
      }
      std::string_view source_field = line.substr(0, tab);
      std::string_view rest = line.substr(tab + 1);
      std::string_view target_field = rest;
      Provenance provenance = Provenance::kNone;
      const std::size_t tab2 = rest.find('\t');
      if (tab2 != std::string_view::npos) {
        target_field = rest.substr(0, tab2);
        const std::string_view annot = rest.substr(tab2 + 1);
        if (annot == "genuine") {
          provenance = Provenance::kGenuine;
        } else if (annot == "pseudo") {
          provenance = Provenance::kPseudo;
        } else {
          throw ParseError("unknown provenance column '" + std::string(annot) +
                               "'",
                           line_no);
        }
      }
      ParallelPair pair;
      pair.source = parse_sentence(source_field, line_no);
      pair.target = parse_sentence(target_field, line_no);
      pair.provenance = provenance;
      if (pair.target.empty()) {
        throw ParseError("empty target sentence", line_no);
      }
      corpus.pairs.push_back(std::move(pair));
    }
  }
  return corpus;
}

Corpus read_corpus(const std::filesystem::path& path, CorpusFormat format) {
  if (!std::filesystem::exists(path)) {
    throw IoError("no such file: " + path.string());
  }
  try {
    return parse_corpus(read_file(path), format);
  } catch (ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), 0);
  }
}

std::string format_corpus(const Corpus& corpus, CorpusFormat format,
                          CorpusSide side) {
  std::string out;
  for (const ParallelPair& pair : corpus.pairs) {
    if (format == CorpusFormat::kPlain) {
      const Sentence& s =
          side == CorpusSide::kSource ? pair.source : pair.target;
      out += s.join();
    } else {
      out += pair.source.join();
      out += '\t';
      out += pair.target.join();
      if (pair.provenance != Provenance::kNone) {
        out += '\t';
        out += provenance_label(pair.provenance);
      }
    }
    out += '\n';
  }
  return out;
}

void write_corpus(const Corpus& corpus, const std::filesystem::path& path,
                  CorpusFormat format, CorpusSide side) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  const std::string text = format_corpus(corpus, format, side);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.flush();
  if (!out) throw IoError("write failure: " + path.string());
}

}  // namespace pseudoforge
