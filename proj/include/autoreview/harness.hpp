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

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "autoreview/document.hpp"
#include "autoreview/gateway.hpp"
#include "autoreview/pipeline.hpp"
#include "autoreview/review_format.hpp"
#include "autoreview/stats.hpp"
#include "autoreview/templates.hpp"

namespace autoreview {

enum class AttackKind { kAbstractSwap, kInformalInsertion };

/// "abstract-swap" / "informal"
std::string_view to_string(AttackKind kind);
AttackKind parse_attack_kind(std::string_view text);

inline constexpr std::size_t kMinInsertableWords = 8;

struct TransformationRecord {
  std::string source_id;
  AttackKind kind = AttackKind::kAbstractSwap;
  Span span;  // replaced region in the original document
  std::string original_text;
  std::string replacement_text;
  std::uint64_t rng_seed = 0;
};

struct TransformedDocument {
  PaperDocument document;
  TransformationRecord record;
};

struct DetectionRubric {
  std::size_t min_quote_overlap_words = 4;
  std::vector<std::string> concern_lexicon = {
      "informal",   "unprofessional", "colloquial", "inconsistent with the abstract",
      "contradicts", "negates",       "does not match the abstract", "tone"};
  std::map<std::string, bool> adjudication_overrides;

  /// Throws Error{kConfigError}: overlap below 2 or an empty lexicon.
  void validate() const;
};

/// JSON object with optional "min_quote_overlap_words" and "concern_lexicon".
DetectionRubric load_rubric(const std::filesystem::path& path);
/// JSON object mapping source_id to true/false.
std::map<std::string, bool> load_adjudications(const std::filesystem::path& path);

/// Replaces the abstract with the backend's rewrite (surrounding whitespace
/// trimmed). Every byte outside the abstract span is preserved.
/// Errors: kMissingAbstract, kInvalidTransformation (empty or unchanged
/// rewrite), and whatever the gateway raises.
TransformedDocument negate_abstract(const PaperDocument& doc, Gateway& gateway,
                                    const PromptTemplate& tmpl, const GenerationParams& params);

/// Body sentences of at least kMinInsertableWords words, outside the
/// preamble, the abstract and the references.
std::vector<const Sentence*> eligible_sentences(const PaperDocument& doc);

/// Unbiased draw from [0, n) using mt19937_64 and rejection sampling, so the
/// choice is identical across standard libraries.
std::size_t uniform_index(std::uint64_t seed, std::size_t n);

/// Rewrites one uniformly chosen eligible sentence.
/// Errors: kNoEligibleSentence, kInvalidTransformation, gateway errors.
TransformedDocument insert_informal_sentence(const PaperDocument& doc, Gateway& gateway,
                                             const PromptTemplate& tmpl, const GenerationParams& params,
                                             std::uint64_t seed);

struct Detection {
  bool detected = false;
  std::string evidence;
};

/// An adjudication override wins. Otherwise the review is flagged when it
/// quotes at least min_quote_overlap_words consecutive words that the
/// transformation introduced (word runs of the replacement that do not occur
/// in the original), or when it contains a lexicon phrase as whole words,
/// case-insensitively.
Detection detect_flag(const StructuredReview& review, const TransformationRecord& record,
                      const DetectionRubric& rubric);

struct PaperOutcome {
  std::string source_id;
  AttackKind kind = AttackKind::kAbstractSwap;
  DecisionLabel decision_label = DecisionLabel::kUnknown;
  bool detected = false;
  std::string evidence;
  std::optional<std::string> error;
  std::optional<TransformationRecord> record;
  std::optional<StructuredReview> review;
  std::string raw_review;
  std::optional<AttemptLog> log;
};

struct RobustnessResult {
  std::string model_label;
  AttackKind kind = AttackKind::kAbstractSwap;
  std::vector<PaperOutcome> per_paper;  // ordered by source_id
  double recall = 0.0;
  double ci_half_width = 0.0;
  std::vector<SummaryStat> per_split;  // "accepted" / "rejected" when labelled
};

/// Orders outcomes by source_id and computes recall with its interval, overall
/// and per decision label.
RobustnessResult aggregate_outcomes(std::vector<PaperOutcome> outcomes, AttackKind kind,
                                    std::string model_label);

struct ExperimentConfig {
  PipelineConfig pipeline;
  DetectionRubric rubric;
  std::uint64_t seed = 0;
  std::string model_label = "GPT4-8k";
  std::size_t jobs = 1;
};

/// Per-paper backend. Called once per paper on the calling thread, before any
/// work starts; may hand out one shared live gateway or a fresh mock.
using GatewayFactory = std::function<std::shared_ptr<Gateway>(const PaperDocument&)>;

/// Seed used for one paper's sentence choice; independent of corpus order.
std::uint64_t paper_seed(std::uint64_t base_seed, std::string_view source_id);

/// Transform, review and score every paper; per-paper failures count as not
/// detected with the error recorded and never abort the run.
RobustnessResult run_robustness_experiment(const std::vector<PaperDocument>& corpus, AttackKind kind,
                                           const ExperimentConfig& config,
                                           const GatewayFactory& gateways);

}  // namespace autoreview
