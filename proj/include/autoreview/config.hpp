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
#include <string>
#include <string_view>
#include <vector>

#include "autoreview/document.hpp"
#include "autoreview/gateway.hpp"
#include "autoreview/review_format.hpp"

namespace autoreview {

/// Run configuration read from a small TOML subset:
///
///   [gateway]   backend = "mock" | "http", base_url, regime, model_name,
///               context_budget_tokens, max_output_tokens, temperature,
///               max_in_flight, token_divisor
///   [pipeline]  max_attempts, templates_dir, required_items
///   [harness]   rubric, adjudications, seed, model_label
///   [io]        output_dir, worksheet, format
///
/// Values are quoted strings, integers, floats, booleans or arrays of strings.
/// Relative paths are resolved against the directory holding the file.
struct RunConfig {
  std::string backend = "mock";
  std::string base_url;
  GenerationParams params;
  std::size_t max_in_flight = 4;
  std::size_t token_divisor = 4;

  int max_attempts = 10;
  std::filesystem::path templates_dir;  // empty: built-in templates
  std::vector<ItemKind> required_items = all_items();

  std::filesystem::path rubric;         // empty: default rubric
  std::filesystem::path adjudications;  // empty: none
  std::uint64_t seed = 0;
  std::string model_label = "GPT4-8k";

  std::filesystem::path output_dir = "autoreview-out";
  std::filesystem::path worksheet;  // empty: <output_dir>/worksheet.csv
  InputFormat format = InputFormat::kPlain;

  /// Throws Error{kConfigError}: max_attempts < 1, zero budget or divisor,
  /// an unknown backend, or a referenced file or directory that does not exist.
  void validate() const;

  std::filesystem::path worksheet_path() const;
};

/// Throws Error{kConfigError} naming the offending line.
RunConfig parse_run_config(std::string_view text, const std::filesystem::path& base_dir = {});
RunConfig load_run_config(const std::filesystem::path& path);

/// Canonical text form of every setting, written as the run's config snapshot.
/// parse_run_config(to_toml(c)) reproduces c.
std::string to_toml(const RunConfig& config);

}  // namespace autoreview
