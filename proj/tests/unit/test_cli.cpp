/*
 * Copyright 2026 The Autoreview Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <gtest/gtest.h>

#include <map>
#include <random>
#include <sstream>

#include "autoreview/cli.hpp"
#include "autoreview/gateway.hpp"
#include "autoreview/harness.hpp"
#include "json.hpp"
#include "test_support.hpp"
#include "text_util.hpp"

namespace autoreview {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct CliResult {
  int code = -1;
  std::string out;
  std::string err;
};

CliResult cli(std::vector<std::string> args) {
  args.insert(args.begin(), "autoreview");
  std::ostringstream out;
  std::ostringstream err;
  CliResult r;
  r.code = run_command(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string fixture(const std::string& name) { return (fs::path(AUTOREVIEW_FIXTURE_DIR) / name).string(); }

std::map<std::string, std::string> snapshot_tree(const fs::path& root) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) files[fs::relative(e.path(), root).generic_string()] = detail::read_file(e.path());
  }
  return files;
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(cli({}).code, kExitConfig);
  EXPECT_EQ(cli({"frobnicate"}).code, kExitConfig);
  EXPECT_EQ(cli({"validate"}).code, kExitConfig);
  EXPECT_EQ(cli({"validate", "--review", "/no/such/file"}).code, kExitConfig);
  EXPECT_EQ(cli({"attack", "--kind", "meteor", "--corpus", fixture("paper_sample.txt")}).code, kExitConfig);
  EXPECT_EQ(cli({"--help"}).code, kExitOk);
}

TEST(Cli, ValidateSamples) {
  const CliResult ok = cli({"validate", "--review", fixture("review_example_2.txt")});
  EXPECT_EQ(ok.code, kExitOk);
  EXPECT_EQ(json::parse(ok.out)["valid"], true);

  const CliResult bad = cli({"validate", "--review", fixture("review_example_3.txt")});
  EXPECT_EQ(bad.code, kExitInvalid);
  const json report = json::parse(bad.out);
  const auto& missing = report["missing_items"];
  EXPECT_NE(std::find(missing.begin(), missing.end(), "overall"), missing.end());
  EXPECT_NE(std::find(missing.begin(), missing.end(), "confidence"), missing.end());

  EXPECT_EQ(cli({"validate", "--review", fixture("review_example_3.txt"), "--required", "summary"}).code, kExitOk);
}

TEST(Cli, GenerateValidFirst) {
  testing::TempDir dir;
  const CliResult r = cli({"generate", "--paper", fixture("paper_sample.txt"), "--mock", fixture("mock_valid_first.json"),
                     "--output-dir", dir.path().string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const json log = json::parse(detail::read_file(dir / "logs/paper_sample.attempts.json"));
  EXPECT_EQ(log["attempts"], 1);
  EXPECT_EQ(log["succeeded"], true);
  EXPECT_TRUE(fs::exists(dir / "reviews/paper_sample.txt"));
  EXPECT_TRUE(fs::exists(dir / "config-snapshot.toml"));
  const json review = json::parse(detail::read_file(dir / "reviews/paper_sample.json"));
  EXPECT_EQ(review["review"]["overall_score"], 6);
  EXPECT_EQ(detail::read_file(dir / "worksheet.csv"),
            "paper_id,reviewer_kind,rating,review_path,attempts\npaper_sample,gpt,,reviews/paper_sample.txt,1\n");

  // Validating the generated review through the CLI succeeds.
  EXPECT_EQ(cli({"validate", "--review", (dir / "reviews/paper_sample.json").string()}).code, kExitOk);
}

TEST(Cli, GenerateIsByteIdenticalOnRerun) {
  testing::TempDir dir;
  const std::vector<std::string> args{"generate", "--paper", fixture("paper_sample.txt"), "--mock",
                                      fixture("mock_two_malformed.json"), "--output-dir",
                                      (dir / "out").string()};
  ASSERT_EQ(cli(args).code, kExitOk);
  const auto first = snapshot_tree(dir / "out");
  fs::remove_all(dir / "out");
  ASSERT_EQ(cli(args).code, kExitOk);
  EXPECT_EQ(snapshot_tree(dir / "out"), first);
  EXPECT_EQ(json::parse(first.at("logs/paper_sample.attempts.json"))["attempts"], 3);
}

TEST(Cli, GenerateExhaustedAttemptsExitsOne) {
  testing::TempDir dir;
  const CliResult r = cli({"generate", "--paper", fixture("paper_sample.txt"), "--mock",
                     fixture("mock_always_malformed.json"), "--max-attempts", "3", "--output-dir",
                     dir.path().string()});
  EXPECT_EQ(r.code, kExitInvalid);
  EXPECT_EQ(json::parse(detail::read_file(dir / "logs/paper_sample.attempts.json"))["attempts"], 3);
  EXPECT_NE(detail::read_file(dir / "worksheet.csv").find("paper_sample,gpt,MISSING,,3"), std::string::npos);
}

TEST(Cli, GenerateConfigErrors) {
  testing::TempDir dir;
  detail::write_file(dir / "bad.toml", "[pipeline]\nmax_attempts = 0\n");
  EXPECT_EQ(cli({"generate", "--paper", fixture("paper_sample.txt"), "--config", (dir / "bad.toml").string(),
                 "--mock", fixture("mock_valid_first.json")})
                .code,
            kExitConfig);
  // Mock backend without a script.
  EXPECT_EQ(cli({"generate", "--paper", fixture("paper_sample.txt"), "--output-dir", dir.path().string()}).code,
            kExitConfig);
  detail::write_file(dir / "broken.json", "[{\"match\": \"ordinal\"}]");
  EXPECT_EQ(cli({"generate", "--paper", fixture("paper_sample.txt"), "--mock", (dir / "broken.json").string(),
                 "--output-dir", dir.path().string()})
                .code,
            kExitConfig);
}

TEST(Cli, ConfigFileAndFlagsOverride) {
  testing::TempDir dir;
  detail::write_file(dir / "run.toml",
                     "[pipeline]\nmax_attempts = 1\n\n[io]\noutput_dir = \"from-config\"\n");
  const CliResult r = cli({"generate", "--paper", fixture("paper_sample.txt"), "--config", (dir / "run.toml").string(),
                     "--mock", fixture("mock_two_malformed.json"), "--max-attempts", "5"});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  const std::string snap = detail::read_file(dir / "from-config/config-snapshot.toml");
  EXPECT_NE(snap.find("max_attempts = 5"), std::string::npos);
}

// Writes a 20-paper corpus with one mock script per paper; the first
// `detections` reviews raise a concern the rubric recognizes.
fs::path write_corpus(const fs::path& root, std::size_t detections) {
  std::mt19937_64 rng(77);
  std::string manifest = "source_id,path,decision_label\n";
  fs::create_directories(root / "mocks");
  for (std::size_t i = 1; i <= 20; ++i) {
    char id[16];
    std::snprintf(id, sizeof id, "paper-%02zu", i);
    detail::write_file(root / "papers" / (std::string(id) + ".txt"), testing::random_paper(rng, 3));
    manifest += std::string(id) + ",papers/" + id + ".txt," + (i % 2 ? "accepted" : "rejected") + "\n";
    const std::string weakness =
        i <= detections ? "The abstract contradicts the reported experiments." : "The evaluation is small.";
    const MockScript script = testing::pipeline_script(
        {testing::malformed_review(), testing::valid_review(weakness)},
        "We find that the method fails on every benchmark we tried.",
        "tbh this sentence is super sloppy lol but whatever.");
    detail::write_file(root / "mocks" / (std::string(id) + ".json"), mock_script_to_json(script));
  }
  detail::write_file(root / "corpus.csv", manifest);
  return root / "corpus.csv";
}

TEST(Cli, AttackEvalAndStats) {
  testing::TempDir dir;
  const fs::path manifest = write_corpus(dir.path(), 14);
  const std::vector<std::string> args{"attack", "--kind", "abstract-swap", "--corpus", manifest.string(), "--seed",
                                      "5", "--mock", (dir / "mocks").string(), "--model-label", "GPT4-4k",
                                      "--output-dir", (dir / "run").string(), "--jobs", "4"};
  const CliResult r = cli(args);
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("0.70 \xC2\xB1 0.21"), std::string::npos) << r.out;
  const json result = json::parse(detail::read_file(dir / "run/results/GPT4-4k__abstract-swap.json"));
  EXPECT_DOUBLE_EQ(result["recall"].get<double>(), 0.7);
  EXPECT_EQ(result["per_paper"].size(), 20u);
  EXPECT_TRUE(fs::exists(dir / "run/logs/abstract-swap/paper-01.transformation.json"));
  EXPECT_EQ(json::parse(detail::read_file(dir / "run/logs/abstract-swap/paper-01.attempts.json"))["attempts"], 2);

  // Re-running gives byte-identical artifacts.
  const auto first = snapshot_tree(dir / "run");
  fs::remove_all(dir / "run");
  ASSERT_EQ(cli(args).code, kExitOk);
  EXPECT_EQ(snapshot_tree(dir / "run"), first);

  // Re-scoring with an adjudication that flips one miss.
  detail::write_file(dir / "adj.json", R"({"paper-20": true})");
  const CliResult ev = cli({"eval", "robustness", "--runs", (dir / "run").string(), "--adjudications",
                      (dir / "adj.json").string(), "--output-dir", (dir / "eval").string()});
  ASSERT_EQ(ev.code, kExitOk) << ev.err;
  EXPECT_NE(ev.out.find("0.75"), std::string::npos) << ev.out;
  EXPECT_TRUE(fs::exists(dir / "eval/results/eval_robustness.json"));

  // A stricter rubric without the matching phrase lowers recall to zero.
  detail::write_file(dir / "rubric.json", R"({"concern_lexicon": ["unprofessional"]})");
  const CliResult strict = cli({"eval", "robustness", "--runs", (dir / "run").string(), "--rubric",
                          (dir / "rubric.json").string(), "--output-dir", (dir / "eval2").string()});
  ASSERT_EQ(strict.code, kExitOk) << strict.err;
  EXPECT_NE(strict.out.find("0.00 \xC2\xB1 0.00"), std::string::npos) << strict.out;

  const CliResult stats = cli({"stats", "summarize", "--worksheet", (dir / "run/worksheet.csv").string()});
  ASSERT_EQ(stats.code, kExitOk) << stats.err;
  EXPECT_NE(stats.out.find("GPT4-4k"), std::string::npos);
  EXPECT_NE(stats.out.find("0.70 \xC2\xB1 0.21"), std::string::npos);
}

TEST(Cli, InformalAttackRecordsSentence) {
  testing::TempDir dir;
  const fs::path manifest = write_corpus(dir.path(), 12);
  const CliResult r = cli({"attack", "--kind", "informal", "--corpus", manifest.string(), "--seed", "11", "--mock",
                     (dir / "mocks").string(), "--model-label", "GPT4-4k", "--output-dir", (dir / "run").string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("0.60 \xC2\xB1 0.22"), std::string::npos) << r.out;
  const json rec = json::parse(detail::read_file(dir / "run/logs/informal/paper-03.transformation.json"));
  EXPECT_EQ(rec["kind"], "informal");
  EXPECT_EQ(rec["rng_seed"].get<std::uint64_t>(), paper_seed(11, "paper-03"));
}

TEST(Cli, StatsSummarizeReproducesRobustnessTable) {
  const CliResult r = cli({"stats", "summarize", "--worksheet", fixture("robustness_worksheet.csv")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("GPT4-4k  | 0.70 \xC2\xB1 0.21   | 0.60 \xC2\xB1 0.22"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("GPT4-32k | 0.35 \xC2\xB1 0.21   | 0.05 \xC2\xB1 0.10"), std::string::npos) << r.out;
}

TEST(Cli, StatsSummarizeReportsBothMissingVariants) {
  const CliResult r = cli({"stats", "summarize", "--worksheet", fixture("helpfulness_worksheet.csv")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const json j = json::parse(r.out.substr(0, r.out.find("\n}\n") + 3));
  bool saw_gpt = false;
  for (const auto& rev : j["reviewers"]) {
    if (rev["reviewer_kind"] != "gpt") continue;
    saw_gpt = true;
    EXPECT_EQ(rev["summary"]["n"], 10);
    EXPECT_EQ(rev["missing"], 1);
    EXPECT_EQ(rev["missing_excluded"]["n"], 9);
  }
  EXPECT_TRUE(saw_gpt);
}

}  // namespace
}  // namespace autoreview
