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

#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace autoreview {

inline constexpr double kZ95 = 1.96;

enum class ReviewerKind { kHuman, kGpt };
std::string_view to_string(ReviewerKind kind);
std::optional<ReviewerKind> parse_reviewer_kind(std::string_view text);

/// Helpfulness rating on the 1 ("Not at all helpful") to 5 ("Extremely
/// helpful") scale; nullopt stands for a missing review.
struct RatingRecord {
  std::string paper_id;
  ReviewerKind reviewer_kind = ReviewerKind::kGpt;
  std::optional<int> rating;

  friend bool operator==(const RatingRecord&, const RatingRecord&) = default;
};

using ExpectedReview = std::pair<std::string, ReviewerKind>;

/// Every expected (paper, reviewer) pair ends up present; missing and absent
/// reviews are scored 1. Present records keep their order, absent ones follow
/// in expected order, exact duplicates collapse. Conflicting duplicates throw
/// Error{kDuplicateRating}.
std::vector<RatingRecord> apply_missing_rule(const std::vector<RatingRecord>& ratings,
                                             const std::vector<ExpectedReview>& expected);

struct SummaryStat {
  double mean = 0.0;
  double ci_half_width = 0.0;
  std::size_t n = 0;
  std::string label;
  /// n == 1: no spread estimate, half-width reported as 0.
  bool degenerate = false;
};

/// Mean and normal-approximation half-width z * s / sqrt(n), with s the
/// Bessel-corrected (n - 1) sample standard deviation.
SummaryStat mean_ci(std::span<const double> values, double z = kZ95, std::string label = {});

/// mean_ci over the 0/1 encoding of the outcomes, z = 1.96.
SummaryStat recall_ci(const std::vector<bool>& outcomes, std::string label = {});

/// Half-away-from-zero rounding; a relative nudge of 1e-9 absorbs binary
/// representation error (0.125 stored as 0.12499999... still rounds up).
double round_half_away(double value, int decimals = 2);
std::string format_fixed(double value, int decimals = 2);
/// "0.70 ± 0.21"
std::string format_mean_ci(const SummaryStat& stat);

// ---------------------------------------------------------------------------
// Worksheet

inline constexpr std::string_view kWorksheetHeader = "paper_id,reviewer_kind,rating,review_path,attempts";
inline constexpr std::string_view kMissingRating = "MISSING";

/// One CSV row with every field kept as text.
/// reviewer_kind is "human" or "gpt" for helpfulness rows and
/// "<model label>/<attack kind>" for detection rows (rating 1 = detected,
/// 0 = missed). An empty rating means "not rated yet".
struct WorksheetRow {
  std::string paper_id;
  std::string reviewer_kind;
  std::string rating;
  std::string review_path;
  std::string attempts;

  friend bool operator==(const WorksheetRow&, const WorksheetRow&) = default;
};

/// Creates the file with its header when absent; otherwise checks the header
/// (Error{kSchemaMismatch}) and appends.
void worksheet_append(const std::filesystem::path& path, const std::vector<WorksheetRow>& rows);
std::vector<WorksheetRow> worksheet_load(const std::filesystem::path& path);

std::string encode_csv_row(const std::vector<std::string>& fields);
/// Parses a whole CSV document (RFC 4180 quoting, embedded newlines allowed).
std::vector<std::vector<std::string>> parse_csv(std::string_view text);

struct RecallCell {
  std::string model_label;
  std::string attack_kind;  // "abstract-swap" or "informal"
  SummaryStat stat;
};

struct ReviewerSummary {
  ReviewerKind kind = ReviewerKind::kGpt;
  SummaryStat scored;  // missing reviews scored 1
  /// Present only when some review was missing: the same mean with those
  /// entries left out.
  std::optional<SummaryStat> excluding_missing;
  std::size_t missing = 0;
  std::size_t unrated = 0;
};

struct WorksheetSummary {
  std::vector<ReviewerSummary> reviewers;
  std::vector<RecallCell> detection;
};

/// Helpfulness rows are expected for every (paper, reviewer kind) combination
/// seen in the worksheet; detection rows are grouped by reviewer_kind.
WorksheetSummary summarize_worksheet(const std::vector<WorksheetRow>& rows);

/// Plain-text table, one row per model and one column per attack kind.
std::string format_recall_table(const std::vector<RecallCell>& cells);
std::string format_reviewer_table(const std::vector<ReviewerSummary>& reviewers);

}  // namespace autoreview
