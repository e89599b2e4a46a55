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

#include "autoreview/pipeline.hpp"

#include "text_util.hpp"

namespace autoreview {

namespace {

void expect_stage(const PromptTemplate& tmpl, Stage stage) {
  if (tmpl.stage != stage) {
    throw Error(ErrorCode::kTemplateError, "expected a " + std::string(to_string(stage)) +
                                               " template, got " + std::string(to_string(tmpl.stage)));
  }
}

std::string join_notes(const std::vector<std::string>& texts, std::size_t begin, std::size_t end) {
  std::string out;
  for (std::size_t i = begin; i < end; ++i) {
    if (i > begin) out += "\n\n";
    out += texts[i];
  }
  return out;
}

}  // namespace

NoteSet generate_notes(const Chunk& chunk, std::size_t chunk_index, std::string_view abstract,
                       const PromptTemplate& tmpl, Gateway& gateway, const GenerationParams& params) {
  expect_stage(tmpl, Stage::kNotes);
  const std::string prompt = tmpl.render({{kChunkText, chunk.text}, {kAbstract, abstract}});
  CompletionResult result = gateway.complete(prompt, params);
  if (detail::trim(result.text).empty()) {
    throw Error(ErrorCode::kBackendRefusal, "empty notes for chunk " + std::to_string(chunk_index));
  }
  return {chunk_index, std::move(result.text)};
}

SynthesizedNotes synthesize_notes(const std::vector<NoteSet>& notes, std::string_view abstract,
                                  const PromptTemplate& tmpl, Gateway& gateway,
                                  const GenerationParams& params) {
  expect_stage(tmpl, Stage::kSynthesis);
  if (notes.empty()) throw Error(ErrorCode::kInvalidArgument, "no notes to synthesize");

  const auto render = [&](const std::vector<std::string>& texts, std::size_t begin, std::size_t end) {
    return tmpl.render({{kNotes, join_notes(texts, begin, end)}, {kAbstract, abstract}});
  };
  SynthesizedNotes out;
  const auto call = [&](const std::string& prompt) {
    CompletionResult result = gateway.complete(prompt, params);
    ++out.calls;
    if (detail::trim(result.text).empty()) {
      throw Error(ErrorCode::kBackendRefusal, "empty synthesis output");
    }
    return std::move(result.text);
  };

  std::vector<std::string> level;
  level.reserve(notes.size());
  for (const NoteSet& n : notes) level.push_back(n.text);
  for (std::size_t i = 0; i < level.size(); ++i) {
    if (!gateway.fits(render(level, i, i + 1), params)) {
      throw Error(ErrorCode::kBudgetTooSmall,
                  "notes for chunk " + std::to_string(notes[i].chunk_index) +
                      " do not fit a synthesis prompt");
    }
  }

  while (!gateway.fits(render(level, 0, level.size()), params)) {
    std::vector<std::string> next;
    std::size_t i = 0;
    while (i < level.size()) {
      if (i + 1 == level.size()) {
        next.push_back(level[i]);
        ++i;
      } else if (const std::string pair = render(level, i, i + 2); gateway.fits(pair, params)) {
        next.push_back(call(pair));
        i += 2;
      } else {
        next.push_back(call(render(level, i, i + 1)));
        ++i;
      }
    }
    std::size_t before = 0;
    std::size_t after = 0;
    for (const auto& t : level) before += t.size();
    for (const auto& t : next) after += t.size();
    if (next.size() == level.size() && after >= before) {
      throw Error(ErrorCode::kBudgetTooSmall, "note synthesis is not converging within the budget");
    }
    level = std::move(next);
  }
  out.text = call(render(level, 0, level.size()));
  return out;
}

std::string construct_review(const SynthesizedNotes& synthesis, const PromptTemplate& tmpl,
                             Gateway& gateway, const GenerationParams& params) {
  expect_stage(tmpl, Stage::kReview);
  const std::string prompt = tmpl.render({{kNotes, synthesis.text}});
  return gateway.complete(prompt, params).text;
}

std::size_t notes_reserve_tokens(const PaperDocument& doc, const PromptTemplate& notes_template,
                                 const GenerationParams& params, std::size_t token_divisor) {
  const std::string frame = notes_template.render({{kChunkText, ""}, {kAbstract, doc.abstract}});
  return estimate_tokens(frame, token_divisor) + params.max_output_tokens;
}

ReviewRun generate_review_with_retries(const PaperDocument& doc, const PipelineConfig& config,
                                       Gateway& gateway) {
  if (config.max_attempts < 1) throw Error(ErrorCode::kConfigError, "max_attempts must be >= 1");
  config.templates.validate();
  const GenerationParams& params = config.params;
  const std::size_t divisor = gateway.token_divisor();

  std::vector<Chunk> chunks = chunk_for_budget(
      doc, params.context_budget_tokens,
      notes_reserve_tokens(doc, config.templates.notes, params, divisor), divisor);
  if (chunks.empty()) {
    // Nothing outside the abstract: take notes on the abstract itself.
    if (doc.abstract.empty()) throw Error(ErrorCode::kUnrecognizedStructure, "document has no text");
    chunks.push_back({doc.abstract, estimate_tokens(doc.abstract, divisor), {"Abstract"}});
  }

  ReviewRun run;
  run.log.source_id = doc.source_id;
  for (std::size_t i = 0; i < chunks.size(); ++i) {
    run.notes.push_back(generate_notes(chunks[i], i, doc.abstract, config.templates.notes, gateway, params));
  }
  run.synthesis = synthesize_notes(run.notes, doc.abstract, config.templates.synthesis, gateway, params);

  for (int attempt = 0; attempt < config.max_attempts; ++attempt) {
    std::string raw = construct_review(run.synthesis, config.templates.review, gateway, params);
    auto [review, report] = parse_review(raw, config.required);
    run.log.per_attempt.push_back({raw, report});
    if (report.valid) {
      run.log.succeeded = true;
      run.review = std::move(review);
      run.report = std::move(report);
      run.raw_review = std::move(raw);
      return run;
    }
  }
  throw MaxAttemptsExceeded(std::move(run.log));
}

}  // namespace autoreview
