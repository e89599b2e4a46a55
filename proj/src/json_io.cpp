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

#include "autoreview/json_io.hpp"

#include "autoreview/error.hpp"

namespace autoreview {

using nlohmann::json;

void to_json(json& j, const StructuredReview& review) {
  json items = json::object();
  for (const auto& [kind, text] : review.items) items[std::string(to_string(kind))] = text;
  j = json{{"items", std::move(items)}};
  j["overall_score"] = review.overall_score ? json(*review.overall_score) : json(nullptr);
  j["confidence_score"] = review.confidence_score ? json(*review.confidence_score) : json(nullptr);
  j["broader_impact"] =
      review.broader_impact ? json(std::string(to_string(*review.broader_impact))) : json(nullptr);
}

void from_json(const json& j, StructuredReview& review) {
  review = {};
  for (const auto& [name, text] : j.at("items").items()) {
    auto kind = parse_item_kind(name);
    if (!kind) throw Error(ErrorCode::kInvalidArgument, "unknown review item '" + name + "'");
    review.items[*kind] = text.get<std::string>();
  }
  if (j.contains("overall_score") && !j["overall_score"].is_null()) {
    review.overall_score = j["overall_score"].get<int>();
  }
  if (j.contains("confidence_score") && !j["confidence_score"].is_null()) {
    review.confidence_score = j["confidence_score"].get<int>();
  }
  if (j.contains("broader_impact") && !j["broader_impact"].is_null()) {
    const std::string v = j["broader_impact"].get<std::string>();
    if (v == "yes") {
      review.broader_impact = BroaderImpact::kYes;
    } else if (v == "no") {
      review.broader_impact = BroaderImpact::kNo;
    } else if (v == "partial") {
      review.broader_impact = BroaderImpact::kPartial;
    } else {
      throw Error(ErrorCode::kInvalidArgument, "unknown broader_impact '" + v + "'");
    }
  }
}

void to_json(json& j, const ValidationReport& report) {
  json missing = json::array();
  for (ItemKind k : report.missing_items) missing.push_back(std::string(to_string(k)));
  json malformed = json::array();
  for (const auto& m : report.malformed_scores) {
    malformed.push_back({{"item", std::string(to_string(m.item))}, {"reason", m.reason}});
  }
  j = json{{"valid", report.valid},
           {"missing_items", std::move(missing)},
           {"malformed_scores", std::move(malformed)},
           {"notes", report.notes}};
}

void to_json(json& j, const AttemptLog& log) {
  json attempts = json::array();
  for (std::size_t i = 0; i < log.per_attempt.size(); ++i) {
    attempts.push_back({{"attempt", i + 1},
                        {"raw_review", log.per_attempt[i].raw_review},
                        {"verdict", log.per_attempt[i].verdict}});
  }
  j = json{{"source_id", log.source_id},
           {"attempts", log.attempts()},
           {"succeeded", log.succeeded},
           {"per_attempt", std::move(attempts)}};
}

void to_json(json& j, const TransformationRecord& record) {
  j = json{{"source_id", record.source_id},
           {"kind", std::string(to_string(record.kind))},
           {"span", {{"begin", record.span.begin}, {"end", record.span.end}}},
           {"original_text", record.original_text},
           {"replacement_text", record.replacement_text},
           {"rng_seed", record.rng_seed}};
}

void from_json(const json& j, TransformationRecord& record) {
  record.source_id = j.at("source_id").get<std::string>();
  record.kind = parse_attack_kind(j.at("kind").get<std::string>());
  record.span.begin = j.at("span").at("begin").get<std::size_t>();
  record.span.end = j.at("span").at("end").get<std::size_t>();
  record.original_text = j.at("original_text").get<std::string>();
  record.replacement_text = j.at("replacement_text").get<std::string>();
  record.rng_seed = j.value("rng_seed", std::uint64_t{0});
}

void to_json(json& j, const SummaryStat& stat) {
  j = json{{"label", stat.label},
           {"mean", stat.mean},
           {"ci_half_width", stat.ci_half_width},
           {"n", stat.n},
           {"display", format_mean_ci(stat)}};
  if (stat.degenerate) j["warning"] = "single observation; interval not estimable";
}

void to_json(json& j, const PaperOutcome& outcome) {
  j = json{{"source_id", outcome.source_id},
           {"kind", std::string(to_string(outcome.kind))},
           {"decision_label", std::string(to_string(outcome.decision_label))},
           {"detected", outcome.detected},
           {"evidence", outcome.evidence},
           {"error", outcome.error ? json(*outcome.error) : json(nullptr)},
           {"attempts", outcome.log ? json(outcome.log->attempts()) : json(nullptr)}};
}

void to_json(json& j, const RobustnessResult& result) {
  j = json{{"model_label", result.model_label},
           {"kind", std::string(to_string(result.kind))},
           {"n", result.per_paper.size()},
           {"recall", result.recall},
           {"ci_half_width", result.ci_half_width},
           {"display", format_fixed(result.recall) + " \xC2\xB1 " + format_fixed(result.ci_half_width)},
           {"per_split", result.per_split},
           {"per_paper", result.per_paper}};
}

void to_json(json& j, const WorksheetSummary& summary) {
  json reviewers = json::array();
  for (const auto& r : summary.reviewers) {
    json item{{"reviewer_kind", std::string(to_string(r.kind))},
              {"summary", r.scored},
              {"missing", r.missing},
              {"unrated", r.unrated}};
    item["missing_excluded"] = r.excluding_missing ? json(*r.excluding_missing) : json(nullptr);
    reviewers.push_back(std::move(item));
  }
  json detection = json::array();
  for (const auto& c : summary.detection) {
    detection.push_back({{"model_label", c.model_label}, {"attack_kind", c.attack_kind}, {"recall", c.stat}});
  }
  j = json{{"reviewers", std::move(reviewers)}, {"detection", std::move(detection)}};
}

}  // namespace autoreview
