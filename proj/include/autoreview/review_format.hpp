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

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace autoreview {

/// The eleven items of the review form, in form order.
enum class ItemKind {
  kSummary,
  kStrengths,
  kWeaknesses,
  kCorrectness,
  kClarity,
  kPriorWork,
  kReproducibility,
  kAdditionalFeedback,
  kOverall,
  kConfidence,
  kBroaderImpact,
};

inline constexpr std::array<ItemKind, 11> kAllItems = {
    ItemKind::kSummary,     ItemKind::kStrengths,       ItemKind::kWeaknesses,
    ItemKind::kCorrectness, ItemKind::kClarity,         ItemKind::kPriorWork,
    ItemKind::kReproducibility, ItemKind::kAdditionalFeedback, ItemKind::kOverall,
    ItemKind::kConfidence,  ItemKind::kBroaderImpact,
};

/// Stable snake_case name used in JSON ("prior_work", "broader_impact", ...).
std::string_view to_string(ItemKind kind);
std::optional<ItemKind> parse_item_kind(std::string_view name);
/// Heading written by render_review.
std::string_view canonical_heading(ItemKind kind);

std::vector<ItemKind> all_items();
/// Comma-separated item names; throws Error{kConfigError} on an unknown name.
std::vector<ItemKind> parse_item_list(std::string_view csv);

enum class BroaderImpact { kYes, kNo, kPartial };
std::string_view to_string(BroaderImpact verdict);

struct StructuredReview {
  std::map<ItemKind, std::string> items;
  std::optional<int> overall_score;     // 1..10
  std::optional<int> confidence_score;  // 1..5
  std::optional<BroaderImpact> broader_impact;

  friend bool operator==(const StructuredReview&, const StructuredReview&) = default;
};

struct MalformedScore {
  ItemKind item = ItemKind::kOverall;
  std::string reason;

  friend bool operator==(const MalformedScore&, const MalformedScore&) = default;
};

struct ValidationReport {
  bool valid = false;
  std::vector<ItemKind> missing_items;
  std::vector<MalformedScore> malformed_scores;
  std::vector<std::string> notes;
};

/// Total parse: never throws. Headings are matched case-insensitively against
/// per-item keyword sets, tolerating numeric prefixes and markdown emphasis;
/// an item's text runs until the next matched heading. Scores are the first
/// integer in range inside the overall/confidence items.
std::pair<StructuredReview, ValidationReport> parse_review(
    std::string_view raw, const std::vector<ItemKind>& required = all_items());

/// Canonical numbered-heading text. Throws Error{kInvalidReview} unless every
/// item in `required` is present and non-empty and the stored scores and
/// broader-impact verdict agree with what parsing the item texts yields.
std::string render_review(const StructuredReview& review,
                          const std::vector<ItemKind>& required = all_items());

/// All item texts in form order, separated by blank lines.
std::string review_full_text(const StructuredReview& review);

}  // namespace autoreview
