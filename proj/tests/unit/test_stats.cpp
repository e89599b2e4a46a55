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

#include <cmath>
#include <random>

#include "autoreview/error.hpp"
#include "autoreview/json_io.hpp"
#include "autoreview/stats.hpp"
#include "test_support.hpp"
#include "text_util.hpp"

namespace autoreview {
namespace {

std::vector<bool> successes(std::size_t k, std::size_t n) {
  std::vector<bool> v(n, false);
  for (std::size_t i = 0; i < k; ++i) v[i] = true;
  return v;
}

TEST(RecallCi, RobustnessTableCells) {
  struct Cell {
    std::size_t k;
    const char* display;
  };
  for (const Cell& c : {Cell{14, "0.70 \xC2\xB1 0.21"}, Cell{12, "0.60 \xC2\xB1 0.22"},
                        Cell{7, "0.35 \xC2\xB1 0.21"}, Cell{1, "0.05 \xC2\xB1 0.10"}}) {
    const SummaryStat s = recall_ci(successes(c.k, 20));
    EXPECT_EQ(format_mean_ci(s), c.display);
    EXPECT_EQ(s.n, 20u);
  }
}

TEST(RecallCi, FrozenHalfWidths) {
  EXPECT_NEAR(recall_ci(successes(14, 20)).ci_half_width, 0.20605773335083594, 1e-12);
  EXPECT_NEAR(recall_ci(successes(12, 20)).ci_half_width, 0.2202849828840144, 1e-12);
  EXPECT_NEAR(recall_ci(successes(7, 20)).ci_half_width, 0.21447168872174688, 1e-12);
  EXPECT_NEAR(recall_ci(successes(1, 20)).ci_half_width, 0.09799999999999999, 1e-12);
}

TEST(MeanCi, SmallSampleAndDegenerateCases) {
  const std::vector<double> v{1, 2, 3, 4, 5};
  const SummaryStat s = mean_ci(v);
  EXPECT_DOUBLE_EQ(s.mean, 3.0);
  EXPECT_NEAR(s.ci_half_width, 1.3859292911256331, 1e-12);
  const std::vector<double> one{4};
  const SummaryStat d = mean_ci(one);
  EXPECT_TRUE(d.degenerate);
  EXPECT_EQ(d.ci_half_width, 0.0);
  const std::vector<double> same{2, 2, 2};
  EXPECT_EQ(mean_ci(same).ci_half_width, 0.0);
  EXPECT_THROW(mean_ci(std::vector<double>{}), Error);
}

TEST(RoundHalfAway, Ties) {
  EXPECT_EQ(format_fixed(0.125), "0.13");
  EXPECT_EQ(format_fixed(0.098), "0.10");
  EXPECT_EQ(format_fixed(-0.125), "-0.13");
  EXPECT_EQ(format_fixed(0.7), "0.70");
  EXPECT_DOUBLE_EQ(round_half_away(2.675, 2), 2.68);
}

TEST(MissingRule, AbsentReviewScoredOne) {
  std::vector<RatingRecord> ratings;
  std::vector<ExpectedReview> expected;
  for (int i = 0; i < 10; ++i) {
    const std::string id = "p" + std::to_string(i);
    expected.emplace_back(id, ReviewerKind::kGpt);
    if (i != 4) ratings.push_back({id, ReviewerKind::kGpt, 3});
  }
  const auto scored = apply_missing_rule(ratings, expected);
  ASSERT_EQ(scored.size(), 10u);
  EXPECT_EQ(scored.back().paper_id, "p4");
  EXPECT_EQ(scored.back().rating, 1);
  for (std::size_t i = 0; i < 9; ++i) EXPECT_EQ(scored[i], ratings[i]);
}

TEST(MissingRule, NulloptScoredOneAndDuplicates) {
  const std::vector<ExpectedReview> expected{{"a", ReviewerKind::kHuman}, {"b", ReviewerKind::kHuman}};
  const std::vector<RatingRecord> ratings{{"a", ReviewerKind::kHuman, std::nullopt},
                                          {"b", ReviewerKind::kHuman, 4},
                                          {"b", ReviewerKind::kHuman, 4}};
  const auto scored = apply_missing_rule(ratings, expected);
  ASSERT_EQ(scored.size(), 2u);
  EXPECT_EQ(scored[0].rating, 1);
  const std::vector<RatingRecord> conflict{{"b", ReviewerKind::kHuman, 4}, {"b", ReviewerKind::kHuman, 5}};
  try {
    apply_missing_rule(conflict, expected);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDuplicateRating);
  }
  EXPECT_THROW(apply_missing_rule({{"a", ReviewerKind::kHuman, 6}}, expected), Error);
}

TEST(MissingRule, IdempotentProperty) {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 100; ++t) {
    std::vector<ExpectedReview> expected;
    std::vector<RatingRecord> ratings;
    for (int i = 0; i < 12; ++i) {
      const std::string id = "p" + std::to_string(i);
      for (ReviewerKind k : {ReviewerKind::kHuman, ReviewerKind::kGpt}) {
        expected.emplace_back(id, k);
        const auto r = rng() % 4;
        if (r == 0) continue;
        ratings.push_back({id, k, r == 1 ? std::nullopt : std::optional<int>(1 + rng() % 5)});
      }
    }
    std::shuffle(ratings.begin(), ratings.end(), rng);
    const auto once = apply_missing_rule(ratings, expected);
    EXPECT_EQ(apply_missing_rule(once, expected), once);
    EXPECT_EQ(once.size(), expected.size());
  }
}

TEST(Csv, QuotingRoundTrip) {
  const std::vector<std::string> fields{"plain", "with,comma", "with \"quote\"", "multi\nline", ""};
  const std::string line = encode_csv_row(fields);
  const auto parsed = parse_csv(line);
  ASSERT_EQ(parsed.size(), 1u);
  EXPECT_EQ(parsed[0], fields);
  EXPECT_EQ(parse_csv("a,b\r\nc,d\r\n").size(), 2u);
}

TEST(Worksheet, AppendLoadRoundTripIsBitExact) {
  testing::TempDir dir;
  const auto path = dir / "ws.csv";
  std::mt19937_64 rng(5);
  std::vector<WorksheetRow> all;
  for (int batch = 0; batch < 5; ++batch) {
    std::vector<WorksheetRow> rows;
    for (int i = 0; i < 7; ++i) {
      rows.push_back({"paper \"" + std::to_string(rng() % 100) + "\", v2", rng() % 2 ? "gpt" : "human",
                      std::to_string(1 + rng() % 5), "reviews/x,\ny.txt", std::to_string(rng() % 10)});
    }
    worksheet_append(path, rows);
    all.insert(all.end(), rows.begin(), rows.end());
  }
  const std::string before = detail::read_file(path);
  const auto loaded = worksheet_load(path);
  EXPECT_EQ(loaded, all);

  testing::TempDir other;
  worksheet_append(other / "ws.csv", loaded);
  EXPECT_EQ(detail::read_file(other / "ws.csv"), before);
}

TEST(Worksheet, HeaderMismatchIsRejected) {
  testing::TempDir dir;
  detail::write_file(dir / "ws.csv", "id,who,score\n");
  try {
    worksheet_append(dir / "ws.csv", {{"a", "gpt", "1", "", ""}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSchemaMismatch);
  }
  EXPECT_THROW(worksheet_load(dir / "ws.csv"), Error);
}

TEST(SummarizeWorksheet, OneAbsentGptReviewOverTen) {
  std::vector<WorksheetRow> rows;
  for (int i = 0; i < 10; ++i) {
    const std::string id = "paper-" + std::to_string(i);
    rows.push_back({id, "human", std::to_string(1 + i % 5), "", ""});
    if (i != 7) rows.push_back({id, "gpt", "4", "", ""});
  }
  const WorksheetSummary s = summarize_worksheet(rows);
  ASSERT_EQ(s.reviewers.size(), 2u);
  const ReviewerSummary& gpt =
      s.reviewers[0].kind == ReviewerKind::kGpt ? s.reviewers[0] : s.reviewers[1];
  EXPECT_EQ(gpt.scored.n, 10u);
  EXPECT_EQ(gpt.missing, 1u);
  EXPECT_DOUBLE_EQ(gpt.scored.mean, (9 * 4 + 1) / 10.0);
  ASSERT_TRUE(gpt.excluding_missing.has_value());
  EXPECT_EQ(gpt.excluding_missing->n, 9u);
  EXPECT_DOUBLE_EQ(gpt.excluding_missing->mean, 4.0);
}

TEST(SummarizeWorksheet, DetectionRowsFormRecallCells) {
  std::vector<WorksheetRow> rows;
  for (int i = 0; i < 20; ++i) {
    rows.push_back({"p" + std::to_string(i), "GPT4-4k/abstract-swap", i < 14 ? "1" : "0", "", ""});
    rows.push_back({"p" + std::to_string(i), "GPT4-32k/informal", i < 1 ? "1" : "0", "", ""});
  }
  const WorksheetSummary s = summarize_worksheet(rows);
  EXPECT_TRUE(s.reviewers.empty());
  ASSERT_EQ(s.detection.size(), 2u);
  const std::string table = format_recall_table(s.detection);
  EXPECT_NE(table.find("0.70 \xC2\xB1 0.21"), std::string::npos);
  EXPECT_NE(table.find("0.05 \xC2\xB1 0.10"), std::string::npos);
  const nlohmann::json j = s;
  EXPECT_EQ(j["detection"].size(), 2u);
}

TEST(SummarizeWorksheet, UnratedRowsAreNotMissing) {
  const std::vector<WorksheetRow> rows{{"a", "gpt", "", "reviews/a.txt", "1"}, {"b", "gpt", "5", "", "1"}};
  const WorksheetSummary s = summarize_worksheet(rows);
  ASSERT_EQ(s.reviewers.size(), 1u);
  EXPECT_EQ(s.reviewers[0].scored.n, 1u);
  EXPECT_EQ(s.reviewers[0].unrated, 1u);
  EXPECT_EQ(s.reviewers[0].missing, 0u);
}

}  // namespace
}  // namespace autoreview
