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

// JSON forms of the result types. Field names are stable; item keys use the
// snake_case ItemKind names.

#pragma once

#include "autoreview/harness.hpp"
#include "autoreview/pipeline.hpp"
#include "autoreview/review_format.hpp"
#include "autoreview/stats.hpp"
#include "json.hpp"

namespace autoreview {

void to_json(nlohmann::json& j, const StructuredReview& review);
void from_json(const nlohmann::json& j, StructuredReview& review);
void to_json(nlohmann::json& j, const ValidationReport& report);
void to_json(nlohmann::json& j, const AttemptLog& log);
void to_json(nlohmann::json& j, const TransformationRecord& record);
void from_json(const nlohmann::json& j, TransformationRecord& record);
void to_json(nlohmann::json& j, const SummaryStat& stat);
void to_json(nlohmann::json& j, const PaperOutcome& outcome);
void to_json(nlohmann::json& j, const RobustnessResult& result);
void to_json(nlohmann::json& j, const WorksheetSummary& summary);

}  // namespace autoreview
