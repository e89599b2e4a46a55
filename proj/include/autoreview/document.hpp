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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace autoreview {

/// Half-open byte range [begin, end) into a document's raw text.
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const noexcept { return end - begin; }
  bool empty() const noexcept { return end <= begin; }
  bool overlaps(const Span& other) const noexcept {
    return begin < other.end && other.begin < end;
  }
  bool contains(const Span& other) const noexcept {
    return begin <= other.begin && other.end <= end;
  }
  friend bool operator==(const Span&, const Span&) = default;
};

enum class InputFormat { kPlain, kLatex, kMarkdown };
enum class DecisionLabel { kUnknown, kAccepted, kRejected };

std::string_view to_string(InputFormat format);
std::string_view to_string(DecisionLabel label);
InputFormat parse_input_format(std::string_view text);
DecisionLabel parse_decision_label(std::string_view text);

struct Sentence {
  std::string text;
  Span span;  // absolute offsets into the owning document (or the split input)
  std::size_t word_count = 0;
};

enum class SectionKind { kPreamble, kAbstract, kBody, kReferences };

struct Section {
  std::string heading;
  SectionKind kind = SectionKind::kBody;
  Span span;       // heading line through the start of the next section
  Span body_span;  // trimmed body, inside span
  std::string body;
  std::vector<Sentence> sentences;
};

struct PaperDocument {
  std::string source_id;
  std::string raw_text;
  InputFormat format = InputFormat::kPlain;
  std::vector<Section> sections;
  std::string abstract;
  Span abstract_span;
  /// Set when no abstract heading exists and the first paragraph stood in.
  bool abstract_inferred = false;
  DecisionLabel decision_label = DecisionLabel::kUnknown;
  std::vector<std::string> warnings;

  /// Sections of kind kBody or kReferences, in document order.
  std::vector<const Section*> body_sections() const;
};

struct Chunk {
  std::string text;
  std::size_t token_estimate = 0;
  std::vector<std::string> section_headings_covered;
};

struct LoadOptions {
  InputFormat format = InputFormat::kPlain;
  std::string source_id;
  DecisionLabel decision_label = DecisionLabel::kUnknown;
};

/// Throws Error{kEmptyDocument} for whitespace-only input and
/// Error{kUnrecognizedStructure} when there is no heading and fewer than three
/// sentences.
PaperDocument load_document(std::string raw, const LoadOptions& options = {});

/// Sentence spans are relative to `body`. Splits on [.!?] (plus closing
/// quotes/brackets) followed by whitespace and an uppercase letter, and on
/// blank lines; a fixed abbreviation list suppresses splits.
std::vector<Sentence> split_sentences(std::string_view body);

/// ceil(code points / divisor). Divisor must be positive.
std::size_t estimate_tokens(std::string_view text, std::size_t divisor = 4);

/// Packs every non-abstract section body into chunks whose estimate is at most
/// budget_tokens - reserve_tokens. Whole sections are preferred; an oversized
/// section is cut at sentence boundaries. Throws Error{kBudgetTooSmall} when a
/// single sentence does not fit.
std::vector<Chunk> chunk_for_budget(const PaperDocument& doc, std::size_t budget_tokens,
                                    std::size_t reserve_tokens, std::size_t token_divisor = 4);

/// Collapses whitespace runs to a single space and trims both ends.
std::string normalize_whitespace(std::string_view text);

/// Number of whitespace-separated tokens.
std::size_t count_words(std::string_view text);

}  // namespace autoreview
