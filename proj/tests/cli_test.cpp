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
//
// Black-box checks of the pseudoforge binary: exit codes, stdout payloads
// and the effective-config echo. The binary path arrives as argv[1].

#define DOCTEST_CONFIG_IMPLEMENT
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include "doctest.h"
#include "helpers.hpp"

namespace {

std::string g_cli;

struct CliResult {
  int exit_code = -1;
  std::string out;
};

// Runs the binary with stderr captured to a side file; returns stdout.
CliResult run_cli(const std::string& args, const std::string& stderr_path) {
  const std::string command = g_cli + " " + args + " 2>" + stderr_path;
  CliResult result;
  FILE* pipe = ::popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buffer[4096];
  std::size_t got;
  while ((got = std::fread(buffer, 1, sizeof(buffer), pipe)) > 0) {
    result.out.append(buffer, got);
  }
  const int status = ::pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

}  // namespace

namespace pt = pseudoforge::testing;

TEST_CASE("version prints tool and format versions and exits 0") {
  pt::TempDir dir("cli-version");
  const CliResult result = run_cli("version", dir.file("err").string());
  CHECK(result.exit_code == 0);
  CHECK(result.out.find("pseudoforge 1.0.0") != std::string::npos);
  CHECK(result.out.find("pseudo-forge-bpe-1") != std::string::npos);
  CHECK(result.out.find("pseudo-forge-manifest-1") != std::string::npos);
}

TEST_CASE("unknown subcommands are usage errors") {
  pt::TempDir dir("cli-unknown");
  CHECK(run_cli("frobnicate", dir.file("err").string()).exit_code == 1);
  CHECK(run_cli("", dir.file("err").string()).exit_code == 1);
}

TEST_CASE("conflicting noise flags are usage errors") {
  pt::TempDir dir("cli-conflict");
  std::ofstream(dir.file("seed.txt")) << "a b c\n";
  const CliResult result = run_cli(
      "noise-direct --in " + dir.file("seed.txt").string() +
          " --mu-mask 0.5 --mu 0.5,0.15,0.15,0.2",
      dir.file("err").string());
  CHECK(result.exit_code == 1);
}

TEST_CASE("data errors exit with status 2") {
  pt::TempDir dir("cli-data-error");
  CHECK(run_cli("noise-direct --in " + dir.file("missing.txt").string(),
                dir.file("err").string())
            .exit_code == 2);
  // Malformed tsv:
  std::ofstream(dir.file("bad.tsv")) << "no tab on this line\n";
  CHECK(run_cli("dedup --in " + dir.file("bad.tsv").string(),
                dir.file("err").string())
            .exit_code == 2);
}

TEST_CASE("score on the perfect-correction fixture prints 100.0") {
  pt::TempDir dir("cli-score");
  std::ofstream(dir.file("src.txt")) << "He go home\nthis is fine\n";
  std::ofstream(dir.file("hyp.txt")) << "He goes home\nthis is fine\n";
  std::ofstream(dir.file("ref.txt")) << "He goes home\nthis is fine\n";
  const CliResult result = run_cli(
      "score --src " + dir.file("src.txt").string() + " --hyp " +
          dir.file("hyp.txt").string() + " --ref " +
          dir.file("ref.txt").string(),
      dir.file("err").string());
  CHECK(result.exit_code == 0);
  CHECK(result.out.find("1 0 0 100.0 100.0 100.0\n") != std::string::npos);
  CHECK(result.out.find("\"f0.5\":100.0000") != std::string::npos);
}

TEST_CASE("noise-direct is byte-deterministic and honors config overrides") {
  pt::TempDir dir("cli-determinism");
  {
    std::ofstream seed(dir.file("seed.txt"));
    for (int n = 0; n < 50; ++n) {
      seed << "line " << n << " with some tokens here\n";
    }
    std::ofstream(dir.file("pf.conf")) << "seed = 7\nmu-mask = 0.3\n";
  }
  const std::string base =
      "noise-direct --in " + dir.file("seed.txt").string() + " --config " +
      dir.file("pf.conf").string();
  const CliResult a = run_cli(base, dir.file("err-a").string());
  const CliResult b = run_cli(base, dir.file("err-b").string());
  CHECK(a.exit_code == 0);
  CHECK(!a.out.empty());
  CHECK(a.out == b.out);

  // A flag overrides the config file, and the effective value is echoed.
  const CliResult c = run_cli(base + " --seed 8", dir.file("err-c").string());
  CHECK(c.exit_code == 0);
  CHECK(c.out != a.out);
  const std::string echo = pt::slurp(dir.file("err-c"));
  CHECK(echo.find("[config] stage=noise-direct") != std::string::npos);
  CHECK(echo.find("seed = 8") != std::string::npos);
  CHECK(echo.find("mu-mask = 0.3") != std::string::npos);
}

TEST_CASE("rerank accepts a scorer ensemble and writes combined scores") {
  pt::TempDir dir("cli-rerank");
  std::ofstream(dir.file("src.txt")) << "s\n";
  std::ofstream(dir.file("cands.nbest"))
      << "0 ||| a ||| -1.0\n0 ||| b b ||| -0.5\n";
  // Two r2l models with different eos preferences.
  std::ofstream(dir.file("m1.scorer"))
      << "#version: pseudo-forge-toyscorer-1\nvocab: a b\n"
      << "* ||| * ||| a 0.5\n* ||| * ||| b 0.3\n* ||| * ||| eos 0.2\n";
  std::ofstream(dir.file("m2.scorer"))
      << "#version: pseudo-forge-toyscorer-1\nvocab: a b\n"
      << "* ||| * ||| a 0.2\n* ||| * ||| b 0.2\n* ||| * ||| eos 0.6\n";
  const CliResult result = run_cli(
      "rerank --nbest " + dir.file("cands.nbest").string() + " --src " +
          dir.file("src.txt").string() + " --scorer " +
          dir.file("m1.scorer").string() + " --scorer " +
          dir.file("m2.scorer").string(),
      dir.file("err").string());
  CHECK(result.exit_code == 0);
  // Two candidates, re-emitted with finite combined scores.
  CHECK(std::count(result.out.begin(), result.out.end(), '\n') == 2);
  CHECK(result.out.find("inf") == std::string::npos);
  CHECK(result.out.find("0 ||| ") == 0);
}

TEST_CASE("stdout carries data only when no output path is given") {
  pt::TempDir dir("cli-stdout");
  std::ofstream(dir.file("in.tsv")) << "a\tb\na\ta\n";
  const CliResult piped =
      run_cli("dedup --in " + dir.file("in.tsv").string(),
              dir.file("err").string());
  CHECK(piped.exit_code == 0);
  CHECK(piped.out == "a\tb\n");
  const CliResult to_file = run_cli(
      "dedup --in " + dir.file("in.tsv").string() + " --out " +
          dir.file("out.tsv").string(),
      dir.file("err").string());
  CHECK(to_file.exit_code == 0);
  CHECK(to_file.out.empty());
  CHECK(pt::slurp(dir.file("out.tsv")) == "a\tb\n");
}

int run_doctest(int argc, char** argv) {
  doctest::Context context;
  context.applyCommandLine(argc > 1 ? 1 : argc, argv);
  return context.run();
}

int main(int argc, char** argv) {
  if (argc > 1) {
    g_cli = argv[1];
  } else {
    const auto guess = std::filesystem::path(argv[0]).parent_path()
                           .parent_path() /
                       "tools" / "pseudoforge";
    if (std::filesystem::exists(guess)) g_cli = guess.string();
  }
  if (g_cli.empty()) {
    std::fprintf(stderr, "usage: cli_tests <path-to-pseudoforge>\n");
    return 2;
  }
  return run_doctest(argc, argv);
}
