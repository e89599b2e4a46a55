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

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace autoreview {

enum class Stage { kNotes, kSynthesis, kReview, kAbstractSwap, kInformal };

std::string_view to_string(Stage stage);

inline constexpr std::string_view kChunkText = "{CHUNK_TEXT}";
inline constexpr std::string_view kAbstract = "{ABSTRACT}";
inline constexpr std::string_view kNotes = "{NOTES}";
inline constexpr std::string_view kSentence = "{SENTENCE}";

/// Placeholders a stage's template must contain (and the only ones allowed).
std::vector<std::string_view> required_placeholders(Stage stage);

/// File name of the stage's template inside a templates directory.
std::string_view template_file_name(Stage stage);

struct PromptTemplate {
  Stage stage = Stage::kNotes;
  std::string body;

  /// Throws Error{kTemplateError} when a required placeholder is missing or an
  /// unknown {UPPER_CASE} placeholder is present.
  void validate() const;

  /// Single-pass literal substitution: text substituted in is never expanded
  /// again. Throws Error{kTemplateError} if a placeholder has no value.
  std::string render(const std::map<std::string_view, std::string_view>& values) const;
};

/// Shipped defaults: the three review-generation prompts and the two
/// transformation instructions, each followed by its placeholders.
PromptTemplate default_template(Stage stage);

struct TemplateSet {
  PromptTemplate notes = default_template(Stage::kNotes);
  PromptTemplate synthesis = default_template(Stage::kSynthesis);
  PromptTemplate review = default_template(Stage::kReview);
  PromptTemplate abstract_swap = default_template(Stage::kAbstractSwap);
  PromptTemplate informal = default_template(Stage::kInformal);

  const PromptTemplate& get(Stage stage) const;
  void validate() const;
};

/// Loads whichever template files exist in `dir`; missing files keep defaults.
TemplateSet load_templates(const std::filesystem::path& dir);

}  // namespace autoreview
