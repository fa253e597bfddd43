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

#include "pseudoforge/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "pseudoforge/error.hpp"
#include "pseudoforge/random.hpp"
#include "pseudoforge/version.hpp"

namespace pseudoforge {

Corpus dedup(const Corpus& corpus) {
  Corpus out;
  out.kind = corpus.kind;
  out.pairs.reserve(corpus.size());
  for (const ParallelPair& pair : corpus.pairs) {
    if (pair.source == pair.target) continue;
    out.pairs.push_back(pair);
  }
  return out;
}

Corpus compose_joint(const Corpus& genuine, const Corpus& pseudo,
                     std::uint64_t seed) {
  Corpus out;
  out.kind = CorpusKind::kGenuine;
  out.pairs.reserve(genuine.size() + pseudo.size());
  for (const ParallelPair& pair : genuine.pairs) {
    out.pairs.push_back(pair);
    out.pairs.back().provenance = Provenance::kGenuine;
  }
  for (const ParallelPair& pair : pseudo.pairs) {
    out.pairs.push_back(pair);
    out.pairs.back().provenance = Provenance::kPseudo;
  }
  // Fisher-Yates with a dedicated stream; downstream trainers expect mixed
  // batches rather than a genuine block followed by a pseudo block.
  RandomSource rng(seed, 0);
  for (std::size_t i = out.pairs.size(); i > 1; --i) {
    const std::uint64_t j = rng.next_below(i);
    std::swap(out.pairs[i - 1], out.pairs[j]);
  }
  return out;
}

Corpus subsample(const Corpus& corpus, std::size_t n, std::uint64_t seed) {
  if (n >= corpus.size()) return corpus;
  Corpus out;
  out.kind = corpus.kind;
  if (n == 0) return out;

  // Reservoir of selected indices (algorithm R), then sorted to restore the
  // original relative order.
  std::vector<std::size_t> selected(n);
  RandomSource rng(seed, 0);
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (i < n) {
      selected[i] = i;
    } else {
      const std::uint64_t j = rng.next_below(i + 1);
      if (j < n) selected[j] = i;
    }
  }
  std::sort(selected.begin(), selected.end());
  out.pairs.reserve(n);
  for (const std::size_t index : selected) {
    out.pairs.push_back(corpus.pairs[index]);
  }
  return out;
}

void DatasetManifest::validate() const {
  for (const Stage& stage : stages) {
    if (stage.name.empty()) throw ValidationError("manifest: unnamed stage");
    if (stage.paths.empty()) {
      throw ValidationError("manifest: stage '" + stage.name +
                            "' lists no paths");
    }
  }
  if (regime == Regime::kJoint) {
    if (stages.size() != 1 || stages[0].name != "train") {
      throw ValidationError(
          "manifest: joint regime needs exactly one 'train' stage");
    }
  } else {
    if (stages.size() != 2 || stages[0].name != "pretrain" ||
        stages[1].name != "finetune") {
      throw ValidationError(
          "manifest: pretrain regime needs 'pretrain' then 'finetune'");
    }
  }
}

DatasetManifest make_pretrain_manifest(
    const std::vector<std::string>& pseudo_paths,
    const std::vector<std::string>& genuine_paths, std::uint64_t seed) {
  if (pseudo_paths.empty()) {
    throw ValidationError("pretrain manifest: no pseudo paths");
  }
  if (genuine_paths.empty()) {
    throw ValidationError("pretrain manifest: no genuine paths");
  }
  DatasetManifest manifest;
  manifest.regime = Regime::kPretrain;
  manifest.seed = seed;
  manifest.stages.push_back({"pretrain", pseudo_paths});
  manifest.stages.push_back({"finetune", genuine_paths});
  manifest.validate();
  return manifest;
}

DatasetManifest make_joint_manifest(
    const std::vector<std::string>& genuine_paths,
    const std::vector<std::string>& pseudo_paths, std::uint64_t seed) {
  if (genuine_paths.empty() || pseudo_paths.empty()) {
    throw ValidationError("joint manifest: both path lists must be non-empty");
  }
  DatasetManifest manifest;
  manifest.regime = Regime::kJoint;
  manifest.seed = seed;
  DatasetManifest::Stage stage;
  stage.name = "train";
  stage.paths = genuine_paths;
  stage.paths.insert(stage.paths.end(), pseudo_paths.begin(),
                     pseudo_paths.end());
  manifest.stages.push_back(std::move(stage));
  manifest.validate();
  return manifest;
}

std::string format_manifest(const DatasetManifest& manifest) {
  manifest.validate();
  std::string out = "#version: ";
  out += kManifestFormatVersion;
  out += "\nregime = ";
  out += manifest.regime == Regime::kJoint ? "joint" : "pretrain";
  out += "\nseed = ";
  out += std::to_string(manifest.seed);
  out += '\n';
  for (const DatasetManifest::Stage& stage : manifest.stages) {
    out += "[stage ";
    out += stage.name;
    out += "]\n";
    for (const std::string& path : stage.paths) {
      out += "path = ";
      out += path;
      out += '\n';
    }
  }
  return out;
}

DatasetManifest parse_manifest(std::string_view text) {
  DatasetManifest manifest;
  bool saw_header = false;
  bool saw_regime = false;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  const std::string expected_header =
      std::string("#version: ") + kManifestFormatVersion;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    const std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (line.empty()) continue;
    if (!saw_header) {
      if (line != expected_header) {
        throw ParseError("bad manifest header, expected '" + expected_header +
                             "'",
                         1);
      }
      saw_header = true;
      continue;
    }
    if (line.starts_with("[stage ") && line.ends_with("]")) {
      DatasetManifest::Stage stage;
      stage.name = std::string(line.substr(7, line.size() - 8));
      manifest.stages.push_back(std::move(stage));
      continue;
    }
    const std::size_t eq = line.find(" = ");
    if (eq == std::string_view::npos) {
      throw ParseError("manifest line is neither 'key = value' nor a stage",
                       line_no);
    }
    const std::string_view key = line.substr(0, eq);
    const std::string_view value = line.substr(eq + 3);
    if (key == "regime") {
      if (value == "joint") {
        manifest.regime = Regime::kJoint;
      } else if (value == "pretrain") {
        manifest.regime = Regime::kPretrain;
      } else {
        throw ParseError("unknown regime '" + std::string(value) + "'",
                         line_no);
      }
      saw_regime = true;
    } else if (key == "seed") {
      std::uint64_t seed = 0;
      const auto [ptr, ec] =
          std::from_chars(value.data(), value.data() + value.size(), seed);
      if (ec != std::errc() || ptr != value.data() + value.size()) {
        throw ParseError("bad seed value", line_no);
      }
      manifest.seed = seed;
    } else if (key == "path") {
      if (manifest.stages.empty()) {
        throw ParseError("path line outside any stage", line_no);
      }
      manifest.stages.back().paths.emplace_back(value);
    } else {
      throw ParseError("unknown manifest key '" + std::string(key) + "'",
                       line_no);
    }
  }
  if (!saw_header) throw ParseError("empty manifest (missing header)");
  if (!saw_regime) throw ParseError("manifest lacks a regime line");
  manifest.validate();
  return manifest;
}

void write_manifest(const DatasetManifest& manifest,
                    const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  const std::string text = format_manifest(manifest);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.flush();
  if (!out) throw IoError("write failure: " + path.string());
}

DatasetManifest read_manifest(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    throw IoError("no such file: " + path.string());
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_manifest(buffer.str());
}

}  // namespace pseudoforge
