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

#include <map>
#include <set>

#include "doctest.h"
#include "helpers.hpp"
#include "pseudoforge/error.hpp"

using namespace pseudoforge;
namespace pt = pseudoforge::testing;

namespace {

std::multiset<std::string> pair_multiset(const Corpus& corpus) {
  std::multiset<std::string> out;
  for (const ParallelPair& pair : corpus.pairs) {
    out.insert(pair.source.join() + "\t" + pair.target.join());
  }
  return out;
}

}  // namespace

TEST_CASE("dedup drops identical pairs and keeps corrections") {
  Corpus corpus;
  corpus.pairs.push_back({Sentence{{"a", "b"}}, Sentence{{"a", "b"}}});
  corpus.pairs.push_back({Sentence{{"a"}}, Sentence{{"a", "b"}}});
  const Corpus out = dedup(corpus);
  REQUIRE(out.size() == 1);
  CHECK(out.pairs[0].source.tokens == std::vector<Token>{"a"});
}

TEST_CASE("dedup leaves clean corpora unchanged and is idempotent") {
  RandomSource rng(5, 0);
  for (int iteration = 0; iteration < 50; ++iteration) {
    const Corpus corpus = pt::random_parallel_corpus(rng, 60);
    const Corpus once = dedup(corpus);
    for (const ParallelPair& pair : once.pairs) {
      CHECK(!(pair.source == pair.target));
    }
    // Exactly the unequal pairs survive, in order.
    std::size_t expected = 0;
    for (const ParallelPair& pair : corpus.pairs) {
      if (!(pair.source == pair.target)) ++expected;
    }
    CHECK(once.size() == expected);
    const Corpus twice = dedup(once);
    REQUIRE(twice.size() == once.size());
    for (std::size_t n = 0; n < once.size(); ++n) {
      CHECK(twice.pairs[n] == once.pairs[n]);
    }
  }
}

TEST_CASE("compose_joint is a seeded permutation of the disjoint union") {
  RandomSource rng(6, 0);
  const Corpus genuine = pt::random_parallel_corpus(rng, 120);
  Corpus pseudo = pt::random_parallel_corpus(rng, 80);
  pseudo.kind = CorpusKind::kPseudo;

  const Corpus joint = compose_joint(genuine, pseudo, 42);
  CHECK(joint.size() == genuine.size() + pseudo.size());

  Corpus tagged_genuine = genuine;
  for (auto& pair : tagged_genuine.pairs) pair.provenance = Provenance::kGenuine;
  Corpus tagged_pseudo = pseudo;
  for (auto& pair : tagged_pseudo.pairs) pair.provenance = Provenance::kPseudo;
  std::multiset<std::string> expected = pair_multiset(tagged_genuine);
  for (const std::string& key : pair_multiset(tagged_pseudo)) {
    expected.insert(key);
  }
  CHECK(pair_multiset(joint) == expected);

  std::size_t genuine_count = 0;
  for (const ParallelPair& pair : joint.pairs) {
    REQUIRE(pair.provenance != Provenance::kNone);
    if (pair.provenance == Provenance::kGenuine) ++genuine_count;
  }
  CHECK(genuine_count == genuine.size());
}

TEST_CASE("compose_joint with the same seed is reproducible") {
  RandomSource rng(7, 0);
  const Corpus genuine = pt::random_parallel_corpus(rng, 50);
  const Corpus pseudo = pt::random_parallel_corpus(rng, 50);
  const Corpus a = compose_joint(genuine, pseudo, 9);
  const Corpus b = compose_joint(genuine, pseudo, 9);
  const Corpus c = compose_joint(genuine, pseudo, 10);
  REQUIRE(a.size() == b.size());
  bool all_equal_c = true;
  for (std::size_t n = 0; n < a.size(); ++n) {
    CHECK(a.pairs[n] == b.pairs[n]);
    all_equal_c = all_equal_c && a.pairs[n] == c.pairs[n];
  }
  CHECK_FALSE(all_equal_c);
}

TEST_CASE("compose_joint with empty pseudo permutes the genuine corpus") {
  RandomSource rng(8, 0);
  const Corpus genuine = pt::random_parallel_corpus(rng, 30);
  const Corpus joint = compose_joint(genuine, Corpus{}, 3);
  Corpus tagged = genuine;
  for (auto& pair : tagged.pairs) pair.provenance = Provenance::kGenuine;
  CHECK(pair_multiset(joint) == pair_multiset(tagged));
}

// The paper-scale bookkeeping: |Dg| = 561,410 with a 1.4M-pair pseudo set
// gives a 1,961,410-pair joint corpus.
static_assert(561410 + 1400000 == 1961410);

TEST_CASE("subsample boundaries") {
  RandomSource rng(9, 0);
  const Corpus corpus = pt::random_parallel_corpus(rng, 40);
  CHECK(subsample(corpus, 0, 5).empty());
  const Corpus all = subsample(corpus, corpus.size(), 5);
  REQUIRE(all.size() == corpus.size());
  for (std::size_t n = 0; n < corpus.size(); ++n) {
    CHECK(all.pairs[n] == corpus.pairs[n]);
  }
  const Corpus more = subsample(corpus, corpus.size() + 10, 5);
  CHECK(more.size() == corpus.size());
}

TEST_CASE("subsample draws exactly n, in original order, seed-deterministic") {
  RandomSource rng(10, 0);
  Corpus corpus;
  corpus.kind = CorpusKind::kGenuine;
  for (int n = 0; n < 200; ++n) {
    ParallelPair pair;
    pair.source = Sentence{{"s" + std::to_string(n)}};
    pair.target = Sentence{{"t" + std::to_string(n)}};
    corpus.pairs.push_back(std::move(pair));
  }
  const Corpus a = subsample(corpus, 50, 77);
  const Corpus b = subsample(corpus, 50, 77);
  REQUIRE(a.size() == 50);
  std::size_t last_index = 0;
  for (std::size_t n = 0; n < a.size(); ++n) {
    CHECK(a.pairs[n] == b.pairs[n]);
    // Targets encode the original index; order must be increasing.
    const std::size_t index =
        std::stoul(a.pairs[n].target.tokens[0].substr(1));
    if (n > 0) CHECK(index > last_index);
    last_index = index;
  }
}

TEST_CASE("distinct subsample seeds draw distinct subsets") {
  RandomSource rng(11, 0);
  Corpus corpus;
  corpus.kind = CorpusKind::kGenuine;
  for (int n = 0; n < 20; ++n) {
    ParallelPair pair;
    pair.source = Sentence{{"s" + std::to_string(n)}};
    pair.target = Sentence{{"t" + std::to_string(n)}};
    corpus.pairs.push_back(std::move(pair));
  }
  std::set<std::string> fingerprints;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Corpus sample = subsample(corpus, 10, seed);
    std::string fingerprint;
    for (const ParallelPair& pair : sample.pairs) {
      fingerprint += pair.source.join() + "|";
    }
    fingerprints.insert(fingerprint);
  }
  CHECK(fingerprints.size() >= 95);
}

TEST_CASE("pretrain manifests put pseudo first, genuine second") {
  const DatasetManifest manifest =
      make_pretrain_manifest({"dp.tsv"}, {"dg.tsv"}, 4);
  REQUIRE(manifest.stages.size() == 2);
  CHECK(manifest.stages[0].name == "pretrain");
  CHECK(manifest.stages[0].paths == std::vector<std::string>{"dp.tsv"});
  CHECK(manifest.stages[1].name == "finetune");
  CHECK(manifest.stages[1].paths == std::vector<std::string>{"dg.tsv"});
  CHECK_THROWS_AS(make_pretrain_manifest({}, {"dg.tsv"}, 4), ValidationError);
  CHECK_THROWS_AS(make_pretrain_manifest({"dp.tsv"}, {}, 4), ValidationError);
}

TEST_CASE("manifest files round-trip byte-exactly") {
  pt::TempDir dir("manifest");
  const DatasetManifest manifest =
      make_pretrain_manifest({"a.tsv", "b.tsv"}, {"dg.tsv"}, 123);
  const std::string text = format_manifest(manifest);
  write_manifest(manifest, dir.file("plan.manifest"));
  CHECK(pt::slurp(dir.file("plan.manifest")) == text);
  const DatasetManifest back = read_manifest(dir.file("plan.manifest"));
  CHECK(format_manifest(back) == text);
  CHECK(back.seed == 123);
  CHECK(back.regime == Regime::kPretrain);
}

TEST_CASE("joint manifests hold one train stage with both path groups") {
  const DatasetManifest manifest =
      make_joint_manifest({"dg.tsv"}, {"dp1.tsv", "dp2.tsv"}, 8);
  REQUIRE(manifest.stages.size() == 1);
  CHECK(manifest.stages[0].name == "train");
  CHECK(manifest.stages[0].paths ==
        std::vector<std::string>{"dg.tsv", "dp1.tsv", "dp2.tsv"});
  const DatasetManifest back = parse_manifest(format_manifest(manifest));
  CHECK(format_manifest(back) == format_manifest(manifest));
}

TEST_CASE("manifest invariants are enforced on load") {
  CHECK_THROWS_AS(
      parse_manifest("#version: pseudo-forge-manifest-1\n"
                     "regime = pretrain\nseed = 1\n"
                     "[stage pretrain]\npath = dp.tsv\n"),
      ValidationError);
  CHECK_THROWS_AS(
      parse_manifest("#version: pseudo-forge-manifest-1\n"
                     "regime = joint\nseed = 1\n"
                     "[stage train]\n"),
      ValidationError);
  CHECK_THROWS_AS(parse_manifest("#version: wrong\n"), ParseError);
}
