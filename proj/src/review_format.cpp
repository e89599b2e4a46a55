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

#include "autoreview/review_format.hpp"

#include <algorithm>
#include <cctype>

#include "autoreview/document.hpp"
#include "autoreview/error.hpp"
#include "text_util.hpp"

namespace autoreview {

namespace {

struct ItemInfo {
  ItemKind kind;
  std::string_view name;
  std::string_view heading;
  // A trailing '$' marks a phrase that must match the whole label.
  std::vector<std::string_view> phrases;
};

const std::vector<ItemInfo>& item_table() {
  static const std::vector<ItemInfo> table = {
      {ItemKind::kSummary, "summary", "Summary and contributions",
       {"summary and contributions", "summary", "paper summary", "motivations", "key contributions"}},
      {ItemKind::kStrengths, "strengths", "Strengths", {"strengths"}},
      {ItemKind::kWeaknesses, "weaknesses", "Weaknesses", {"weaknesses", "limitations"}},
      {ItemKind::kCorrectness, "correctness", "Correctness", {"correctness"}},
      {ItemKind::kClarity, "clarity", "Clarity", {"clarity"}},
      {ItemKind::kPriorWork, "prior_work", "Relation to prior work",
       {"relation to prior work", "relation to the prior work", "relation to previous work",
        "relationship to prior work", "prior work"}},
      {ItemKind::kReproducibility, "reproducibility", "Reproducibility", {"reproducibility"}},
      {ItemKind::kAdditionalFeedback, "additional_feedback",
       "Additional feedback, comments, suggestions for improvement and questions for the authors",
       {"additional feedback", "additional comments", "additional thoughts",
        "questions for the authors"}},
      {ItemKind::kOverall, "overall", "Overall score", {"overall score", "overall rating", "overall$"}},
      {ItemKind::kConfidence, "confidence", "Confidence score", {"confidence score", "confidence$"}},
      {ItemKind::kBroaderImpact, "broader_impact", "Broader impact",
       {"broader impact", "have the authors adequately addressed the broader impact",
        "societal impact"}},
  };
  return table;
}

const ItemInfo& info(ItemKind kind) {
  return item_table()[static_cast<std::size_t>(kind)];
}

bool is_alnum(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }

std::optional<ItemKind> match_label(std::string_view label) {
  for (const ItemInfo& item : item_table()) {
    for (std::string_view phrase : item.phrases) {
      const bool exact = phrase.back() == '$';
      if (exact) phrase.remove_suffix(1);
      if (label == phrase) return item.kind;
      if (!exact && label.size() > phrase.size() && label.starts_with(phrase) &&
          !is_alnum(label[phrase.size()])) {
        return item.kind;
      }
    }
  }
  return std::nullopt;
}

struct HeadingLine {
  std::optional<ItemKind> kind;  // nullopt: a numbered heading we do not know
  std::string label;
  std::string rest;  // text after the colon on the heading line
};

std::string_view strip_decoration(std::string_view s) {
  s = detail::trim(s);
  while (!s.empty() && (s.front() == '#' || s.front() == '*' || s.front() == '_')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == '*' || s.back() == '_')) s.remove_suffix(1);
  return detail::trim(s);
}

std::optional<HeadingLine> classify_line(std::string_view line) {
  std::string_view s = detail::trim(line);
  if (s.empty()) return std::nullopt;
  bool decorated = false;
  while (!s.empty() && (s.front() == '#' || s.front() == '*' || s.front() == '_')) {
    s.remove_prefix(1);
    decorated = true;
  }
  s = detail::trim(s);
  bool numbered = false;
  std::size_t i = 0;
  while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
  if (i > 0 && i <= 2 && i < s.size() && (s[i] == '.' || s[i] == ')')) {
    numbered = true;
    s = detail::trim(s.substr(i + 1));
  }
  while (!s.empty() && (s.front() == '*' || s.front() == '_')) {
    s.remove_prefix(1);
    decorated = true;
  }

  HeadingLine heading;
  const std::size_t colon = s.find(':');
  std::string_view label_part;
  if (colon != std::string_view::npos) {
    label_part = strip_decoration(s.substr(0, colon));
    std::string_view rest = s.substr(colon + 1);
    while (!rest.empty() && (rest.front() == '*' || rest.front() == '_')) rest.remove_prefix(1);
    heading.rest = std::string(detail::trim(rest));
  } else {
    label_part = strip_decoration(s);
  }
  if (label_part.empty() || count_words(label_part) > 20) return std::nullopt;
  heading.label = normalize_whitespace(detail::to_lower(label_part));
  heading.kind = match_label(heading.label);

  if (colon == std::string_view::npos) {
    // A bare line only counts when it is clearly a heading.
    if (!heading.kind) return std::nullopt;
    const bool exact = std::any_of(info(*heading.kind).phrases.begin(), info(*heading.kind).phrases.end(),
                                   [&](std::string_view p) {
                                     if (p.back() == '$') p.remove_suffix(1);
                                     return p == heading.label;
                                   });
    if (!(numbered || decorated || exact)) return std::nullopt;
    if (!numbered && count_words(label_part) > 12) return std::nullopt;
    return heading;
  }
  if (count_words(label_part) > 12 && !numbered) return std::nullopt;
  if (!heading.kind) {
    if (numbered && count_words(label_part) <= 8) return heading;
    return std::nullopt;
  }
  return heading;
}

std::optional<int> first_integer_in_range(std::string_view text, int lo, int hi, bool& saw_integer) {
  saw_integer = false;
  std::size_t i = 0;
  while (i < text.size()) {
    if (!std::isdigit(static_cast<unsigned char>(text[i]))) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
    const bool glued = (i > 0 && std::isalpha(static_cast<unsigned char>(text[i - 1]))) ||
                       (j < text.size() && std::isalpha(static_cast<unsigned char>(text[j])));
    if (!glued && j - i <= 3) {
      saw_integer = true;
      const int value = std::stoi(std::string(text.substr(i, j - i)));
      if (value >= lo && value <= hi) return value;
    }
    i = j;
  }
  return std::nullopt;
}

std::optional<BroaderImpact> leading_verdict(std::string_view text) {
  std::vector<std::string> words;
  std::string current;
  for (char c : text) {
    if (std::isalpha(static_cast<unsigned char>(c))) {
      current.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    } else if (!current.empty()) {
      words.push_back(std::move(current));
      current.clear();
      if (words.size() == 2) break;
    } else if (!detail::is_space(c) && c != '*' && c != '_' && c != '"') {
      break;
    }
  }
  if (!current.empty() && words.size() < 2) words.push_back(std::move(current));
  if (words.empty()) return std::nullopt;
  if (words[0] == "yes") return BroaderImpact::kYes;
  if (words[0] == "no") return BroaderImpact::kNo;
  if (words[0] == "partially" || words[0] == "partial") return BroaderImpact::kPartial;
  if (words[0] == "only" && words.size() > 1 && (words[1] == "partially" || words[1] == "partial")) {
    return BroaderImpact::kPartial;
  }
  return std::nullopt;
}

}  // namespace

std::string_view to_string(ItemKind kind) { return info(kind).name; }

std::string_view canonical_heading(ItemKind kind) { return info(kind).heading; }

std::optional<ItemKind> parse_item_kind(std::string_view name) {
  const std::string lower = detail::to_lower(detail::trim(name));
  for (const ItemInfo& item : item_table()) {
    if (item.name == lower) return item.kind;
  }
  return std::nullopt;
}

std::vector<ItemKind> all_items() { return {kAllItems.begin(), kAllItems.end()}; }

std::vector<ItemKind> parse_item_list(std::string_view csv) {
  std::vector<ItemKind> out;
  for (const std::string& part : detail::split(csv, ',')) {
    if (detail::trim(part).empty()) continue;
    auto kind = parse_item_kind(part);
    if (!kind) throw Error(ErrorCode::kConfigError, "unknown review item '" + part + "'");
    if (std::find(out.begin(), out.end(), *kind) == out.end()) out.push_back(*kind);
  }
  return out;
}

std::string_view to_string(BroaderImpact verdict) {
  switch (verdict) {
    case BroaderImpact::kYes: return "yes";
    case BroaderImpact::kNo: return "no";
    case BroaderImpact::kPartial: return "partial";
  }
  return "partial";
}

std::pair<StructuredReview, ValidationReport> parse_review(std::string_view raw,
                                                           const std::vector<ItemKind>& required) {
  StructuredReview review;
  ValidationReport report;

  std::optional<ItemKind> current;
  std::vector<std::string> current_lines;
  bool skipping_unknown = false;
  bool preamble_text = false;

  const auto close = [&]() {
    if (!current) return;
    std::string text;
    for (std::size_t i = 0; i < current_lines.size(); ++i) {
      if (i > 0) text.push_back('\n');
      text += current_lines[i];
    }
    text = std::string(detail::trim(text));
    auto [it, inserted] = review.items.emplace(*current, text);
    if (!inserted) {
      report.notes.push_back("duplicate heading for " + std::string(to_string(*current)) +
                             "; texts merged");
      if (!text.empty()) it->second += (it->second.empty() ? "" : "\n\n") + text;
    }
    current.reset();
    current_lines.clear();
  };

  for (std::string line : detail::split(raw, '\n')) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (auto heading = classify_line(line)) {
      close();
      if (!heading->kind) {
        report.notes.push_back("unrecognized heading '" + heading->label + "'");
        skipping_unknown = true;
        continue;
      }
      skipping_unknown = false;
      current = heading->kind;
      if (!heading->rest.empty()) current_lines.push_back(heading->rest);
      continue;
    }
    if (current) {
      current_lines.push_back(line);
    } else if (!skipping_unknown && !detail::trim(line).empty()) {
      preamble_text = true;
    }
  }
  close();
  if (preamble_text) report.notes.push_back("text before the first recognized heading was ignored");

  for (ItemKind kind : required) {
    auto it = review.items.find(kind);
    if (it == review.items.end()) {
      report.missing_items.push_back(kind);
    } else if (it->second.empty()) {
      report.missing_items.push_back(kind);
      report.notes.push_back("item " + std::string(to_string(kind)) + " is empty");
    }
  }

  const auto extract = [&](ItemKind kind, int lo, int hi) -> std::optional<int> {
    auto it = review.items.find(kind);
    if (it == review.items.end() || it->second.empty()) return std::nullopt;
    bool saw_integer = false;
    auto score = first_integer_in_range(it->second, lo, hi, saw_integer);
    if (!score) {
      report.malformed_scores.push_back(
          {kind, saw_integer ? "no integer in " + std::to_string(lo) + ".." + std::to_string(hi)
                             : "no score found"});
    }
    return score;
  };
  review.overall_score = extract(ItemKind::kOverall, 1, 10);
  review.confidence_score = extract(ItemKind::kConfidence, 1, 5);
  if (auto it = review.items.find(ItemKind::kBroaderImpact); it != review.items.end()) {
    review.broader_impact = leading_verdict(it->second);
    if (!review.broader_impact && !it->second.empty()) {
      report.notes.push_back("broader impact item has no yes/no/partial verdict");
    }
  }

  report.valid = report.missing_items.empty() && report.malformed_scores.empty();
  return {std::move(review), std::move(report)};
}

std::string review_full_text(const StructuredReview& review) {
  std::string out;
  for (const auto& [kind, text] : review.items) {
    if (!out.empty()) out += "\n\n";
    out += text;
  }
  return out;
}

std::string render_review(const StructuredReview& review, const std::vector<ItemKind>& required) {
  for (ItemKind kind : required) {
    auto it = review.items.find(kind);
    if (it == review.items.end() || detail::trim(it->second).empty()) {
      throw Error(ErrorCode::kInvalidReview, "missing item " + std::string(to_string(kind)));
    }
  }
  const auto check_range = [](const std::optional<int>& v, int lo, int hi, std::string_view what) {
    if (v && (*v < lo || *v > hi)) {
      throw Error(ErrorCode::kInvalidReview, std::string(what) + " out of range");
    }
  };
  check_range(review.overall_score, 1, 10, "overall score");
  check_range(review.confidence_score, 1, 5, "confidence score");

  std::string out;
  std::size_t number = 0;
  for (ItemKind kind : kAllItems) {
    ++number;
    auto it = review.items.find(kind);
    if (it == review.items.end()) continue;
    if (!out.empty()) out += "\n\n";
    out += std::to_string(number) + ". " + std::string(canonical_heading(kind)) + ": " + it->second;
  }

  auto [reparsed, report] = parse_review(out, required);
  if (!report.valid) {
    throw Error(ErrorCode::kInvalidReview, "rendered review does not validate");
  }
  if (!(reparsed == review)) {
    throw Error(ErrorCode::kInvalidReview,
                "review does not round-trip (untrimmed text, heading-like lines, or scores "
                "disagreeing with the item text)");
  }
  return out;
}

}  // namespace autoreview
