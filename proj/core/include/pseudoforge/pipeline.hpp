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

#ifndef PSEUDOFORGE_PIPELINE_HPP_
#define PSEUDOFORGE_PIPELINE_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "pseudoforge/corpus.hpp"

namespace pseudoforge {

// Removes every pair whose source equals its target, keeping order. The
// standard cleanup before learning subwords from genuine data.
Corpus dedup(const Corpus& corpus);

// Multiset union of Dg and Dp, deterministically shuffled by seed. Pairs
// keep (or receive) genuine/pseudo provenance annotations.
Corpus compose_joint(const Corpus& genuine, const Corpus& pseudo,
                     std::uint64_t seed);

// Uniform random subset of exactly n pairs (the whole corpus when
// n >= size), deterministic in seed, original relative order preserved.
// Single-pass reservoir selection.
Corpus subsample(const Corpus& corpus, std::size_t n, std::uint64_t seed);

enum class Regime { kJoint, kPretrain };

// Declarative training-regime description. Joint: one "train" stage listing
// genuine and pseudo paths together. Pretrain: a "pretrain" stage of pseudo
// paths followed by a "finetune" stage of genuine paths.
struct DatasetManifest {
  struct Stage {
    std::string name;
    std::vector<std::string> paths;
  };

  Regime regime = Regime::kJoint;
  std::vector<Stage> stages;
  std::uint64_t seed = 0;

  // Structural invariants (stage count/names per regime, non-empty paths).
  void validate() const;
};

// Stage "pretrain" lists the pseudo paths, stage "finetune" the genuine
// paths, in that order regardless of argument order at the call site.
// Empty path lists raise ValidationError.
DatasetManifest make_pretrain_manifest(
    const std::vector<std::string>& pseudo_paths,
    const std::vector<std::string>& genuine_paths, std::uint64_t seed);

DatasetManifest make_joint_manifest(
    const std::vector<std::string>& genuine_paths,
    const std::vector<std::string>& pseudo_paths, std::uint64_t seed);

// Manifest file: "#version: pseudo-forge-manifest-1" header, flat key-value
// lines and "[stage NAME]" blocks. Writing is canonical, so
// format(parse(format(m))) == format(m) byte-exactly.
std::string format_manifest(const DatasetManifest& manifest);
DatasetManifest parse_manifest(std::string_view text);
void write_manifest(const DatasetManifest& manifest,
                    const std::filesystem::path& path);
DatasetManifest read_manifest(const std::filesystem::path& path);

}  // namespace pseudoforge

#endif  // PSEUDOFORGE_PIPELINE_HPP_
