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

#include "autoreview/gateway.hpp"

#include <algorithm>
#include <thread>

#include "autoreview/document.hpp"
#include "autoreview/error.hpp"
#include "json.hpp"
#include "text_util.hpp"

namespace autoreview {

using nlohmann::json;

GenerationParams regime_params(std::string_view label) {
  const std::string lower = detail::to_lower(detail::trim(label));
  GenerationParams params;
  if (lower == "gpt4-4k") {
    params.context_budget_tokens = kContext4k;
    params.max_output_tokens = 1024;
  } else if (lower == "gpt4-8k") {
    params.context_budget_tokens = kContext8k;
    params.max_output_tokens = 1536;
  } else if (lower == "gpt4-32k") {
    params.model_name = "gpt-4-32k";
    params.context_budget_tokens = kContext32k;
    params.max_output_tokens = 2048;
  } else {
    throw Error(ErrorCode::kInvalidArgument, "unknown regime '" + std::string(label) + "'");
  }
  return params;
}

bool Gateway::fits(std::string_view prompt, const GenerationParams& params) const {
  return estimate_tokens(prompt, token_divisor_) + params.max_output_tokens <=
         params.context_budget_tokens;
}

CompletionResult Gateway::complete(std::string_view prompt, const GenerationParams& params) {
  if (!fits(prompt, params)) {
    throw Error(ErrorCode::kContextOverflow,
                "prompt of " + std::to_string(estimate_tokens(prompt, token_divisor_)) +
                    " tokens plus " + std::to_string(params.max_output_tokens) +
                    " output tokens exceeds the " + std::to_string(params.context_budget_tokens) +
                    "-token context");
  }
  ++calls_;
  return do_complete(prompt, params);
}

// ---------------------------------------------------------------------------

void MockScript::validate() const {
  if (entries.empty()) throw ScriptParseError(0, "script has no entries");
  std::size_t previous = 0;
  for (const auto& e : entries) {
    if (e.match != MatchKind::kOrdinal) continue;
    if (e.ordinal == 0) throw ScriptParseError(e.line, "ordinals are 1-based");
    if (e.ordinal <= previous) {
      throw ScriptParseError(e.line, e.ordinal == previous
                                         ? "duplicate ordinal " + std::to_string(e.ordinal)
                                         : "ordinals must be strictly increasing");
    }
    previous = e.ordinal;
  }
}

namespace {

std::size_t line_of(std::string_view text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

// Line numbers of every '{' opening at the given nesting depth (1 = top level).
std::vector<std::size_t> object_lines_at_depth(std::string_view text, int wanted) {
  std::vector<std::size_t> lines;
  int depth = 0;
  std::size_t line = 1;
  bool in_string = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '\n') ++line;
    if (in_string) {
      if (c == '\\') {
        ++i;
      } else if (c == '"') {
        in_string = false;
      }
      continue;
    }
    if (c == '"') {
      in_string = true;
    } else if (c == '{' || c == '[') {
      ++depth;
      if (c == '{' && depth == wanted) lines.push_back(line);
    } else if (c == '}' || c == ']') {
      --depth;
    }
  }
  return lines;
}

}  // namespace

MockScript parse_mock_script(std::string_view json_text) {
  if (detail::trim(json_text).empty()) throw ScriptParseError(0, "empty script");
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ScriptParseError(line_of(json_text, e.byte == 0 ? 0 : e.byte - 1), e.what());
  }

  MockScript script;
  const json* list = &doc;
  int entry_depth = 2;
  if (doc.is_object()) {
    if (auto it = doc.find("exhaustion"); it != doc.end()) {
      const std::string policy = it->is_string() ? it->get<std::string>() : "";
      if (policy == "repeat_last") {
        script.exhaustion = ExhaustionPolicy::kRepeatLast;
      } else if (policy == "error") {
        script.exhaustion = ExhaustionPolicy::kError;
      } else {
        throw ScriptParseError(0, "exhaustion must be \"repeat_last\" or \"error\"");
      }
    }
    auto it = doc.find("entries");
    if (it == doc.end()) throw ScriptParseError(1, "object form requires an \"entries\" list");
    list = &*it;
    entry_depth = 3;
  }
  if (!list->is_array()) throw ScriptParseError(1, "script must be a JSON list of entries");

  const auto lines = object_lines_at_depth(json_text, entry_depth);
  for (std::size_t i = 0; i < list->size(); ++i) {
    const json& item = (*list)[i];
    const std::size_t line = i < lines.size() ? lines[i] : 0;
    if (!item.is_object()) throw ScriptParseError(line, "entry is not an object");
    MockEntry entry;
    entry.line = line;
    const std::string match = item.value("match", std::string());
    const auto key = item.find("key");
    if (match == "ordinal") {
      entry.match = MatchKind::kOrdinal;
      if (key == item.end()) throw ScriptParseError(line, "ordinal entry needs a key");
      if (key->is_number_unsigned()) {
        entry.ordinal = key->get<std::size_t>();
      } else if (key->is_string() && !key->get<std::string>().empty() &&
                 std::all_of(key->get_ref<const std::string&>().begin(),
                             key->get_ref<const std::string&>().end(),
                             [](char c) { return c >= '0' && c <= '9'; })) {
        entry.ordinal = std::stoul(key->get<std::string>());
      } else {
        throw ScriptParseError(line, "ordinal key must be a positive integer");
      }
    } else if (match == "contains") {
      entry.match = MatchKind::kContains;
      if (key == item.end() || !key->is_string()) {
        throw ScriptParseError(line, "contains entry needs a string key");
      }
      entry.key = key->get<std::string>();
    } else {
      throw ScriptParseError(line, "match must be \"ordinal\" or \"contains\"");
    }
    entry.echo = item.value("echo", false);
    const auto response = item.find("response");
    if (response != item.end()) {
      if (!response->is_string()) throw ScriptParseError(line, "response must be a string");
      entry.response = response->get<std::string>();
    } else if (!entry.echo) {
      throw ScriptParseError(line, "entry needs a response");
    }
    script.entries.push_back(std::move(entry));
  }
  script.validate();
  return script;
}

MockScript load_mock_script(const std::filesystem::path& path) {
  return parse_mock_script(detail::read_file(path));
}

std::string mock_script_to_json(const MockScript& script) {
  json entries = json::array();
  for (const auto& e : script.entries) {
    json item;
    if (e.match == MatchKind::kOrdinal) {
      item["match"] = "ordinal";
      item["key"] = e.ordinal;
    } else {
      item["match"] = "contains";
      item["key"] = e.key;
    }
    item["response"] = e.response;
    if (e.echo) item["echo"] = true;
    entries.push_back(std::move(item));
  }
  json doc;
  doc["exhaustion"] = script.exhaustion == ExhaustionPolicy::kRepeatLast ? "repeat_last" : "error";
  doc["entries"] = std::move(entries);
  return doc.dump(2);
}

MockGateway::MockGateway(MockScript script, std::size_t token_divisor)
    : Gateway(token_divisor), script_(std::move(script)) {
  script_.validate();
  for (std::size_t i = 0; i < script_.entries.size(); ++i) {
    const MockEntry& e = script_.entries[i];
    if (e.match == MatchKind::kOrdinal) {
      by_ordinal_[e.ordinal] = i;
      continue;
    }
    auto it = std::find_if(queues_.begin(), queues_.end(),
                           [&](const KeyQueue& q) { return q.key == e.key; });
    if (it == queues_.end()) {
      queues_.push_back({e.key, {}, 0});
      it = std::prev(queues_.end());
    }
    it->entries.push_back(i);
  }
}

std::vector<std::string> MockGateway::prompts() const {
  std::lock_guard lock(mutex_);
  return prompts_;
}

CompletionResult MockGateway::do_complete(std::string_view prompt, const GenerationParams&) {
  std::lock_guard lock(mutex_);
  const std::size_t call = ++served_;
  prompts_.emplace_back(prompt);

  const MockEntry* chosen = nullptr;
  if (auto it = by_ordinal_.find(call); it != by_ordinal_.end()) {
    chosen = &script_.entries[it->second];
  }
  if (chosen == nullptr) {
    for (auto& q : queues_) {
      if (q.next < q.entries.size() && prompt.find(q.key) != std::string_view::npos) {
        chosen = &script_.entries[q.entries[q.next++]];
        break;
      }
    }
  }
  if (chosen == nullptr && script_.exhaustion == ExhaustionPolicy::kRepeatLast) {
    for (const auto& q : queues_) {
      if (prompt.find(q.key) != std::string_view::npos) {
        chosen = &script_.entries[q.entries.back()];
        break;
      }
    }
  }

  CompletionResult result;
  result.backend_id = "mock";
  if (chosen != nullptr) {
    result.text = chosen->echo ? std::string(prompt) : chosen->response;
  } else if (script_.exhaustion == ExhaustionPolicy::kRepeatLast && has_last_) {
    result.text = last_response_;
  } else {
    throw Error(ErrorCode::kScriptExhausted,
                "no script entry for call " + std::to_string(call));
  }
  has_last_ = true;
  last_response_ = result.text;
  return result;
}

}  // namespace autoreview
