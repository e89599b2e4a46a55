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

#include <chrono>
#include <thread>

#include "autoreview/error.hpp"
#include "autoreview/gateway.hpp"
#include "httplib.h"
#include "json.hpp"

namespace autoreview {

using nlohmann::json;

namespace {

struct SemaphoreGuard {
  explicit SemaphoreGuard(std::counting_semaphore<>& s) : sem(s) { sem.acquire(); }
  ~SemaphoreGuard() { sem.release(); }
  SemaphoreGuard(const SemaphoreGuard&) = delete;
  SemaphoreGuard& operator=(const SemaphoreGuard&) = delete;
  std::counting_semaphore<>& sem;
};

std::ptrdiff_t checked_in_flight(std::size_t n) {
  if (n == 0) throw Error(ErrorCode::kConfigError, "max_in_flight must be at least 1");
  return static_cast<std::ptrdiff_t>(n);
}

}  // namespace

HttpGateway::HttpGateway(HttpGatewayConfig config, std::size_t token_divisor)
    : Gateway(token_divisor),
      config_(std::move(config)),
      in_flight_(checked_in_flight(config_.max_in_flight)) {
  const auto scheme_end = config_.base_url.find("://");
  if (scheme_end == std::string::npos) {
    throw Error(ErrorCode::kConfigError, "base_url must include a scheme: " + config_.base_url);
  }
  const auto path_start = config_.base_url.find('/', scheme_end + 3);
  host_ = config_.base_url.substr(0, path_start);
  path_ = path_start == std::string::npos ? "" : config_.base_url.substr(path_start);
  while (!path_.empty() && path_.back() == '/') path_.pop_back();
  path_ += "/chat/completions";
  if (config_.max_attempts < 1) throw Error(ErrorCode::kConfigError, "max_attempts must be >= 1");
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
  if (host_.rfind("https://", 0) == 0) {
    throw Error(ErrorCode::kConfigError, "this build has no TLS support for " + host_);
  }
#endif
}

CompletionResult HttpGateway::do_complete(std::string_view prompt, const GenerationParams& params) {
  SemaphoreGuard guard(in_flight_);

  json body;
  body["model"] = params.model_name;
  body["messages"] = json::array({json{{"role", "user"}, {"content", std::string(prompt)}}});
  body["temperature"] = params.temperature;
  body["max_tokens"] = params.max_output_tokens;
  const std::string payload = body.dump();

  httplib::Headers headers;
  if (!config_.api_key.empty()) {
    headers.emplace("Authorization", "Bearer " + config_.api_key);
  }

  const auto started = std::chrono::steady_clock::now();
  auto backoff = config_.initial_backoff;
  std::string last_failure;
  for (int attempt = 0; attempt < config_.max_attempts; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(backoff);
      backoff *= 2;
    }
    httplib::Client client(host_);
    client.set_connection_timeout(std::chrono::seconds(30));
    client.set_read_timeout(config_.timeout);
    auto res = client.Post(path_, headers, payload, "application/json");
    if (!res) {
      last_failure = "connection error: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status == 429 || res->status >= 500) {
      last_failure = "HTTP " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200) {
      throw Error(ErrorCode::kBackendRefusal,
                  "HTTP " + std::to_string(res->status) + ": " + res->body.substr(0, 512));
    }
    json reply = json::parse(res->body, nullptr, /*allow_exceptions=*/false);
    if (reply.is_discarded()) throw Error(ErrorCode::kBackendRefusal, "reply is not JSON");
    if (reply.contains("error")) {
      throw Error(ErrorCode::kBackendRefusal, reply["error"].dump().substr(0, 512));
    }
    const json* content = nullptr;
    if (reply.contains("choices") && reply["choices"].is_array() && !reply["choices"].empty()) {
      const json& choice = reply["choices"][0];
      if (choice.contains("message") && choice["message"].contains("content") &&
          choice["message"]["content"].is_string()) {
        content = &choice["message"]["content"];
      }
    }
    if (content == nullptr) throw Error(ErrorCode::kBackendRefusal, "reply has no message content");

    CompletionResult result;
    result.text = content->get<std::string>();
    result.backend_id = backend_id();
    result.transport_retries = attempt;
    result.latency_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
    return result;
  }
  throw Error(ErrorCode::kTransportFailure,
              "gave up after " + std::to_string(config_.max_attempts) + " attempts (" + last_failure + ")");
}

}  // namespace autoreview
