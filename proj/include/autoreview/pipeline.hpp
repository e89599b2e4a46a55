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
#include <string>
#include <string_view>
#include <vector>

#include "autoreview/document.hpp"
#include "autoreview/error.hpp"
#include "autoreview/gateway.hpp"
#include "autoreview/review_format.hpp"
#include "autoreview/templates.hpp"

namespace autoreview {

struct NoteSet {
  std::size_t chunk_index = 0;
  std::string text;
};

struct SynthesizedNotes {
  std::string text;
  /// Backend calls spent, including intermediate pairwise reductions.
  std::size_t calls = 0;
};

struct AttemptRecord {
  std::string raw_review;
  ValidationReport verdict;
};

/// One entry per review-construction call; attempts == per_attempt.size().
struct AttemptLog {
  std::string source_id;
  std::vector<AttemptRecord> per_attempt;
  bool succeeded = false;

  std::size_t attempts() const noexcept { return per_attempt.size(); }
};

class MaxAttemptsExceeded : public Error {
 public:
  explicit MaxAttemptsExceeded(AttemptLog log)
      : Error(ErrorCode::kMaxAttemptsExceeded,
              "no correctly formatted review after " + std::to_string(log.attempts()) + " attempts"),
        log_(std::move(log)) {}

  const AttemptLog& log() const noexcept { return log_; }

 private:
  AttemptLog log_;
};

struct PipelineConfig {
  GenerationParams params;
  int max_attempts = 10;
  TemplateSet templates;
  std::vector<ItemKind> required = all_items();
};

struct ReviewRun {
  StructuredReview review;
  ValidationReport report;
  std::string raw_review;
  AttemptLog log;
  std::vector<NoteSet> notes;
  SynthesizedNotes synthesis;
};

/// Renders the notes prompt for one chunk (text first, then abstract) and
/// returns the backend's text verbatim.
NoteSet generate_notes(const Chunk& chunk, std::size_t chunk_index, std::string_view abstract,
                       const PromptTemplate& tmpl, Gateway& gateway, const GenerationParams& params);

/// One call when all notes fit; otherwise adjacent notes are merged pairwise
/// with the same prompt, level by level, until the remainder fits, followed by
/// the final call. Throws Error{kBudgetTooSmall} if a single note set cannot
/// be synthesized within the budget.
SynthesizedNotes synthesize_notes(const std::vector<NoteSet>& notes, std::string_view abstract,
                                  const PromptTemplate& tmpl, Gateway& gateway,
                                  const GenerationParams& params);

/// Returns the raw review text, untouched; empty output is not an error here.
std::string construct_review(const SynthesizedNotes& synthesis, const PromptTemplate& tmpl,
                             Gateway& gateway, const GenerationParams& params);

/// Tokens to hold back from each notes chunk: the notes prompt without the
/// chunk text, plus the output allowance.
std::size_t notes_reserve_tokens(const PaperDocument& doc, const PromptTemplate& notes_template,
                                 const GenerationParams& params, std::size_t token_divisor);

/// Notes and synthesis run once; review construction is retried until the
/// output validates or max_attempts is reached (MaxAttemptsExceeded carries
/// the full log).
ReviewRun generate_review_with_retries(const PaperDocument& doc, const PipelineConfig& config,
                                       Gateway& gateway);

}  // namespace autoreview
