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

#include "autoreview/templates.hpp"

#include <algorithm>

#include "autoreview/error.hpp"
#include "default_templates.inc"
#include "text_util.hpp"

namespace autoreview {

std::string_view to_string(Stage stage) {
  switch (stage) {
    case Stage::kNotes: return "notes";
    case Stage::kSynthesis: return "synthesis";
    case Stage::kReview: return "review";
    case Stage::kAbstractSwap: return "abstract_swap";
    case Stage::kInformal: return "informal";
  }
  return "notes";
}

std::vector<std::string_view> required_placeholders(Stage stage) {
  switch (stage) {
    case Stage::kNotes: return {kChunkText, kAbstract};
    case Stage::kSynthesis: return {kNotes, kAbstract};
    case Stage::kReview: return {kNotes};
    case Stage::kAbstractSwap: return {kAbstract};
    case Stage::kInformal: return {kSentence};
  }
  return {};
}

std::string_view template_file_name(Stage stage) {
  switch (stage) {
    case Stage::kNotes: return "notes.txt";
    case Stage::kSynthesis: return "synthesis.txt";
    case Stage::kReview: return "review.txt";
    case Stage::kAbstractSwap: return "abstract_swap.txt";
    case Stage::kInformal: return "informal.txt";
  }
  return "";
}

namespace {

// Finds "{NAME}" with NAME in [A-Z_]+ starting at or after pos.
std::pair<std::size_t, std::size_t> next_placeholder(std::string_view body, std::size_t pos) {
  while (true) {
    const std::size_t open = body.find('{', pos);
    if (open == std::string_view::npos) return {std::string_view::npos, 0};
    std::size_t i = open + 1;
    while (i < body.size() && ((body[i] >= 'A' && body[i] <= 'Z') || body[i] == '_')) ++i;
    if (i > open + 1 && i < body.size() && body[i] == '}') return {open, i + 1 - open};
    pos = open + 1;
  }
}

}  // namespace

void PromptTemplate::validate() const {
  const auto required = required_placeholders(stage);
  for (std::string_view p : required) {
    if (body.find(p) == std::string::npos) {
      throw Error(ErrorCode::kTemplateError, std::string(to_string(stage)) +
                                                 " template lacks placeholder " + std::string(p));
    }
  }
  std::size_t pos = 0;
  while (true) {
    auto [at, len] = next_placeholder(body, pos);
    if (at == std::string_view::npos) break;
    const std::string_view name = std::string_view(body).substr(at, len);
    if (std::find(required.begin(), required.end(), name) == required.end()) {
      throw Error(ErrorCode::kTemplateError, std::string(to_string(stage)) +
                                                 " template has unresolved placeholder " +
                                                 std::string(name));
    }
    pos = at + len;
  }
}

std::string PromptTemplate::render(const std::map<std::string_view, std::string_view>& values) const {
  std::string out;
  out.reserve(body.size());
  std::size_t pos = 0;
  while (true) {
    auto [at, len] = next_placeholder(body, pos);
    if (at == std::string_view::npos) break;
    const std::string_view name = std::string_view(body).substr(at, len);
    auto it = values.find(name);
    if (it == values.end()) {
      throw Error(ErrorCode::kTemplateError, "no value for placeholder " + std::string(name));
    }
    out.append(body, pos, at - pos);
    out.append(it->second);
    pos = at + len;
  }
  out.append(body, pos, std::string::npos);
  return out;
}

PromptTemplate default_template(Stage stage) {
  switch (stage) {
    case Stage::kNotes: return {stage, std::string(embedded::kNotes)};
    case Stage::kSynthesis: return {stage, std::string(embedded::kSynthesis)};
    case Stage::kReview: return {stage, std::string(embedded::kReview)};
    case Stage::kAbstractSwap: return {stage, std::string(embedded::kAbstractSwap)};
    case Stage::kInformal: return {stage, std::string(embedded::kInformal)};
  }
  return {};
}

const PromptTemplate& TemplateSet::get(Stage stage) const {
  switch (stage) {
    case Stage::kNotes: return notes;
    case Stage::kSynthesis: return synthesis;
    case Stage::kReview: return review;
    case Stage::kAbstractSwap: return abstract_swap;
    case Stage::kInformal: return informal;
  }
  return notes;
}

void TemplateSet::validate() const {
  for (const PromptTemplate* t : {&notes, &synthesis, &review, &abstract_swap, &informal}) t->validate();
}

TemplateSet load_templates(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw Error(ErrorCode::kConfigError, "templates directory not found: " + dir.string());
  }
  TemplateSet set;
  for (PromptTemplate* t : {&set.notes, &set.synthesis, &set.review, &set.abstract_swap, &set.informal}) {
    const auto path = dir / template_file_name(t->stage);
    if (std::filesystem::exists(path)) t->body = detail::read_file(path);
  }
  set.validate();
  return set;
}

}  // namespace autoreview
