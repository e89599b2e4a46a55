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

#include <atomic>
#include <chrono>
#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <semaphore>
#include <string>
#include <string_view>
#include <vector>

namespace autoreview {

inline constexpr std::size_t kContext4k = 4096;
inline constexpr std::size_t kContext8k = 8192;
inline constexpr std::size_t kContext32k = 32768;

struct GenerationParams {
  std::string model_name = "gpt-4";
  std::size_t max_output_tokens = 1024;
  double temperature = 1.0;
  std::size_t context_budget_tokens = kContext8k;
};

/// Named presets for the three context regimes: "gpt4-4k", "gpt4-8k" and
/// "gpt4-32k" (case-insensitive). Throws Error{kInvalidArgument} otherwise.
GenerationParams regime_params(std::string_view label);

struct CompletionResult {
  std::string text;
  std::string backend_id;
  double latency_ms = 0.0;
  int transport_retries = 0;
};

/// Completion interface shared by the live and scripted backends.
///
/// complete() checks the context budget before dispatching, so an oversized
/// prompt never reaches a backend. Prompts are passed through byte for byte and
/// the returned text is never trimmed. Implementations must be safe to call
/// from several threads.
class Gateway {
 public:
  explicit Gateway(std::size_t token_divisor = 4) : token_divisor_(token_divisor) {}
  virtual ~Gateway() = default;

  Gateway(const Gateway&) = delete;
  Gateway& operator=(const Gateway&) = delete;

  CompletionResult complete(std::string_view prompt, const GenerationParams& params);

  /// True when the prompt plus the requested output fits the budget.
  bool fits(std::string_view prompt, const GenerationParams& params) const;

  std::size_t call_count() const noexcept { return calls_.load(); }
  std::size_t token_divisor() const noexcept { return token_divisor_; }
  virtual std::string backend_id() const = 0;

 protected:
  virtual CompletionResult do_complete(std::string_view prompt, const GenerationParams& params) = 0;

 private:
  std::size_t token_divisor_;
  std::atomic<std::size_t> calls_{0};
};

// ---------------------------------------------------------------------------
// Scripted mock

enum class MatchKind { kOrdinal, kContains };
enum class ExhaustionPolicy { kRepeatLast, kError };

struct MockEntry {
  MatchKind match = MatchKind::kOrdinal;
  std::size_t ordinal = 0;  // 1-based call number, for kOrdinal
  std::string key;          // substring, for kContains
  std::string response;
  bool echo = false;        // respond with the prompt itself
  std::size_t line = 0;     // source line, 0 when built in code
};

struct MockScript {
  std::vector<MockEntry> entries;
  ExhaustionPolicy exhaustion = ExhaustionPolicy::kRepeatLast;

  /// Throws ScriptParseError when empty, when an ordinal is zero, or when
  /// ordinals are not strictly increasing in file order.
  void validate() const;
};

/// Accepts either a JSON list of {"match", "key", "response"} objects or an
/// object {"exhaustion": "repeat_last"|"error", "entries": [...]}.
MockScript parse_mock_script(std::string_view json_text);
MockScript load_mock_script(const std::filesystem::path& path);
std::string mock_script_to_json(const MockScript& script);

/// Deterministic scripted backend.
///
/// For call number c (1-based): an ordinal entry equal to c wins; otherwise the
/// first contains-key found in the prompt serves its next unconsumed entry
/// (entries sharing a key form a queue). A key whose queue is used up repeats
/// its last response under kRepeatLast. With nothing matching, kRepeatLast
/// returns the previous response and kError throws Error{kScriptExhausted}.
/// Calls are serialized.
class MockGateway : public Gateway {
 public:
  explicit MockGateway(MockScript script, std::size_t token_divisor = 4);

  std::string backend_id() const override { return "mock"; }

  /// Every prompt received, in call order.
  std::vector<std::string> prompts() const;

 protected:
  CompletionResult do_complete(std::string_view prompt, const GenerationParams& params) override;

 private:
  struct KeyQueue {
    std::string key;
    std::vector<std::size_t> entries;
    std::size_t next = 0;
  };

  MockScript script_;
  std::vector<KeyQueue> queues_;
  std::map<std::size_t, std::size_t> by_ordinal_;
  mutable std::mutex mutex_;
  std::size_t served_ = 0;
  bool has_last_ = false;
  std::string last_response_;
  std::vector<std::string> prompts_;
};

// ---------------------------------------------------------------------------
// Live chat-completion backend

struct HttpGatewayConfig {
  /// e.g. "https://api.openai.com/v1"; requests go to {base_url}/chat/completions.
  std::string base_url;
  std::string api_key;
  std::size_t max_in_flight = 4;
  int max_attempts = 3;
  std::chrono::milliseconds initial_backoff{1000};
  std::chrono::seconds timeout{300};
};

/// Single-turn chat-completion client. Connection failures, HTTP 429 and 5xx
/// are retried with exponential backoff; any other failure is reported at once
/// as Error{kBackendRefusal}.
class HttpGateway : public Gateway {
 public:
  explicit HttpGateway(HttpGatewayConfig config, std::size_t token_divisor = 4);

  std::string backend_id() const override { return "http:" + host_; }

 protected:
  CompletionResult do_complete(std::string_view prompt, const GenerationParams& params) override;

 private:
  HttpGatewayConfig config_;
  std::string host_;  // scheme://host[:port]
  std::string path_;  // request path
  std::counting_semaphore<> in_flight_;
};

}  // namespace autoreview
