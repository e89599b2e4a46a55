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

#include "autoreview/config.hpp"

#include <charconv>
#include <cstdint>
#include <map>
#include <variant>

#include "autoreview/error.hpp"
#include "text_util.hpp"

namespace autoreview {
namespace {

namespace fs = std::filesystem;
using detail::trim;

using Value = std::variant<std::string, std::int64_t, double, bool, std::vector<std::string>>;

struct Entry {
  Value value;
  std::size_t line = 0;
};

[[noreturn]] void fail(std::size_t line, const std::string& message) {
  throw Error(ErrorCode::kConfigError, "line " + std::to_string(line) + ": " + message);
}

class LineParser {
 public:
  LineParser(std::string_view text, std::size_t line) : text_(text), line_(line) {}

  Value value() {
    skip_space();
    if (at_end()) fail(line_, "missing value");
    Value v;
    const char c = text_[pos_];
    if (c == '"') {
      v = quoted();
    } else if (c == '[') {
      v = array();
    } else {
      v = scalar();
    }
    skip_space();
    if (!at_end() && text_[pos_] != '#') fail(line_, "unexpected text after value");
    return v;
  }

 private:
  bool at_end() const { return pos_ >= text_.size(); }

  void skip_space() {
    while (!at_end() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
  }

  std::string quoted() {
    ++pos_;
    std::string out;
    while (!at_end()) {
      char c = text_[pos_++];
      if (c == '"') return out;
      if (c == '\\') {
        if (at_end()) break;
        char e = text_[pos_++];
        switch (e) {
          case 'n': out += '\n'; break;
          case 't': out += '\t'; break;
          case '"': out += '"'; break;
          case '\\': out += '\\'; break;
          default: fail(line_, std::string("unsupported escape \\") + e);
        }
      } else {
        out += c;
      }
    }
    fail(line_, "unterminated string");
  }

  std::vector<std::string> array() {
    ++pos_;
    std::vector<std::string> out;
    skip_space();
    if (!at_end() && text_[pos_] == ']') {
      ++pos_;
      return out;
    }
    while (true) {
      skip_space();
      if (at_end() || text_[pos_] != '"') fail(line_, "arrays hold quoted strings only");
      out.push_back(quoted());
      skip_space();
      if (at_end()) fail(line_, "unterminated array");
      if (text_[pos_] == ']') {
        ++pos_;
        return out;
      }
      if (text_[pos_] != ',') fail(line_, "expected ',' in array");
      ++pos_;
    }
  }

  Value scalar() {
    std::size_t end = pos_;
    while (end < text_.size() && text_[end] != ' ' && text_[end] != '\t' && text_[end] != '#') ++end;
    std::string_view tok = text_.substr(pos_, end - pos_);
    pos_ = end;
    if (tok == "true") return true;
    if (tok == "false") return false;
    std::int64_t i = 0;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), i);
    if (ec == std::errc() && p == tok.data() + tok.size()) return i;
    double d = 0.0;
    auto [q, ec2] = std::from_chars(tok.data(), tok.data() + tok.size(), d);
    if (ec2 == std::errc() && q == tok.data() + tok.size()) return d;
    fail(line_, "cannot read value '" + std::string(tok) + "'");
  }

  std::string_view text_;
  std::size_t line_;
  std::size_t pos_ = 0;
};

std::map<std::string, Entry> parse_entries(std::string_view text) {
  std::map<std::string, Entry> entries;
  std::string section;
  std::size_t line_no = 0;
  for (const std::string& raw : detail::split(text, '\n')) {
    ++line_no;
    std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    if (line.front() == '[') {
      auto close = line.find(']');
      if (close == std::string_view::npos) fail(line_no, "unterminated section header");
      section = std::string(trim(line.substr(1, close - 1)));
      if (section != "gateway" && section != "pipeline" && section != "harness" && section != "io") {
        fail(line_no, "unknown section [" + section + "]");
      }
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string_view::npos) fail(line_no, "expected key = value");
    std::string key(trim(line.substr(0, eq)));
    if (key.empty()) fail(line_no, "empty key");
    if (section.empty()) fail(line_no, "key '" + key + "' outside a section");
    std::string full = section + "." + key;
    if (entries.count(full)) fail(line_no, "duplicate key " + full);
    entries[full] = Entry{LineParser(line.substr(eq + 1), line_no).value(), line_no};
  }
  return entries;
}

const std::string& as_string(const Entry& e, const std::string& key) {
  if (const auto* s = std::get_if<std::string>(&e.value)) return *s;
  fail(e.line, key + " must be a string");
}

std::int64_t as_int(const Entry& e, const std::string& key) {
  if (const auto* i = std::get_if<std::int64_t>(&e.value)) return *i;
  fail(e.line, key + " must be an integer");
}

std::size_t as_positive(const Entry& e, const std::string& key) {
  std::int64_t v = as_int(e, key);
  if (v < 1) fail(e.line, key + " must be at least 1");
  return static_cast<std::size_t>(v);
}

double as_double(const Entry& e, const std::string& key) {
  if (const auto* d = std::get_if<double>(&e.value)) return *d;
  if (const auto* i = std::get_if<std::int64_t>(&e.value)) return static_cast<double>(*i);
  fail(e.line, key + " must be a number");
}

fs::path as_path(const Entry& e, const std::string& key, const fs::path& base) {
  fs::path p(as_string(e, key));
  if (p.empty() || p.is_absolute() || base.empty()) return p;
  return (base / p).lexically_normal();
}

std::string quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out + "\"";
}

std::string format_double(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, p);
  if (s.find_first_of(".eE") == std::string::npos) s += ".0";
  return s;
}

}  // namespace

void RunConfig::validate() const {
  auto bad = [](const std::string& m) { throw Error(ErrorCode::kConfigError, m); };
  if (backend != "mock" && backend != "http") bad("backend must be \"mock\" or \"http\", got \"" + backend + "\"");
  if (max_attempts < 1) bad("max_attempts must be at least 1");
  if (params.context_budget_tokens == 0) bad("context_budget_tokens must be positive");
  if (params.max_output_tokens == 0) bad("max_output_tokens must be positive");
  if (token_divisor == 0) bad("token_divisor must be positive");
  if (max_in_flight == 0) bad("max_in_flight must be positive");
  if (params.temperature < 0.0) bad("temperature must not be negative");
  if (required_items.empty()) bad("required_items must not be empty");
  if (!templates_dir.empty() && !fs::is_directory(templates_dir)) {
    bad("templates_dir does not exist: " + templates_dir.string());
  }
  if (!rubric.empty() && !fs::is_regular_file(rubric)) bad("rubric file does not exist: " + rubric.string());
  if (!adjudications.empty() && !fs::is_regular_file(adjudications)) {
    bad("adjudications file does not exist: " + adjudications.string());
  }
  if (seed > static_cast<std::uint64_t>(INT64_MAX)) bad("seed must be below 2^63");
  if (output_dir.empty()) bad("output_dir must not be empty");
}

fs::path RunConfig::worksheet_path() const {
  return worksheet.empty() ? output_dir / "worksheet.csv" : worksheet;
}

RunConfig parse_run_config(std::string_view text, const fs::path& base_dir) {
  auto entries = parse_entries(text);
  RunConfig c;

  // A regime preset fills model and budget first so explicit keys can refine it.
  if (auto it = entries.find("gateway.regime"); it != entries.end()) {
    try {
      c.params = regime_params(as_string(it->second, "regime"));
    } catch (const Error& e) {
      fail(it->second.line, e.what());
    }
    entries.erase(it);
  }

  for (const auto& [key, e] : entries) {
    if (key == "gateway.backend") {
      c.backend = as_string(e, key);
    } else if (key == "gateway.base_url") {
      c.base_url = as_string(e, key);
    } else if (key == "gateway.model_name") {
      c.params.model_name = as_string(e, key);
    } else if (key == "gateway.context_budget_tokens") {
      c.params.context_budget_tokens = as_positive(e, key);
    } else if (key == "gateway.max_output_tokens") {
      c.params.max_output_tokens = as_positive(e, key);
    } else if (key == "gateway.temperature") {
      c.params.temperature = as_double(e, key);
    } else if (key == "gateway.max_in_flight") {
      c.max_in_flight = as_positive(e, key);
    } else if (key == "gateway.token_divisor") {
      c.token_divisor = as_positive(e, key);
    } else if (key == "pipeline.max_attempts") {
      std::int64_t v = as_int(e, key);
      if (v < 1 || v > 1000) fail(e.line, "max_attempts must be in 1..1000");
      c.max_attempts = static_cast<int>(v);
    } else if (key == "pipeline.templates_dir") {
      c.templates_dir = as_path(e, key, base_dir);
    } else if (key == "pipeline.required_items") {
      std::vector<ItemKind> items;
      if (const auto* list = std::get_if<std::vector<std::string>>(&e.value)) {
        for (const auto& name : *list) {
          auto kind = parse_item_kind(name);
          if (!kind) fail(e.line, "unknown review item '" + name + "'");
          items.push_back(*kind);
        }
      } else {
        try {
          items = parse_item_list(as_string(e, key));
        } catch (const Error& err) {
          fail(e.line, err.what());
        }
      }
      c.required_items = std::move(items);
    } else if (key == "harness.rubric") {
      c.rubric = as_path(e, key, base_dir);
    } else if (key == "harness.adjudications") {
      c.adjudications = as_path(e, key, base_dir);
    } else if (key == "harness.seed") {
      std::int64_t v = as_int(e, key);
      if (v < 0) fail(e.line, "seed must not be negative");
      c.seed = static_cast<std::uint64_t>(v);
    } else if (key == "harness.model_label") {
      c.model_label = as_string(e, key);
    } else if (key == "io.output_dir") {
      c.output_dir = as_path(e, key, base_dir);
    } else if (key == "io.worksheet") {
      c.worksheet = as_path(e, key, base_dir);
    } else if (key == "io.format") {
      try {
        c.format = parse_input_format(as_string(e, key));
      } catch (const Error& err) {
        fail(e.line, err.what());
      }
    } else {
      fail(e.line, "unknown key " + key);
    }
  }
  return c;
}

RunConfig load_run_config(const fs::path& path) {
  std::string text;
  try {
    text = detail::read_file(path);
  } catch (const Error& e) {
    throw Error(ErrorCode::kConfigError, e.what());
  }
  fs::path base = path.parent_path();
  if (base.empty()) base = ".";
  try {
    return parse_run_config(text, base);
  } catch (const Error& e) {
    throw Error(ErrorCode::kConfigError, path.string() + ": " + e.what());
  }
}

std::string to_toml(const RunConfig& c) {
  std::string out;
  auto line = [&out](std::string_view key, const std::string& value) {
    out.append(key).append(" = ").append(value).push_back('\n');
  };
  out += "[gateway]\n";
  line("backend", quote(c.backend));
  line("base_url", quote(c.base_url));
  line("model_name", quote(c.params.model_name));
  line("context_budget_tokens", std::to_string(c.params.context_budget_tokens));
  line("max_output_tokens", std::to_string(c.params.max_output_tokens));
  line("temperature", format_double(c.params.temperature));
  line("max_in_flight", std::to_string(c.max_in_flight));
  line("token_divisor", std::to_string(c.token_divisor));
  out += "\n[pipeline]\n";
  line("max_attempts", std::to_string(c.max_attempts));
  line("templates_dir", quote(c.templates_dir.string()));
  std::string items = "[";
  for (std::size_t i = 0; i < c.required_items.size(); ++i) {
    if (i) items += ", ";
    items += quote(to_string(c.required_items[i]));
  }
  line("required_items", items + "]");
  out += "\n[harness]\n";
  line("rubric", quote(c.rubric.string()));
  line("adjudications", quote(c.adjudications.string()));
  line("seed", std::to_string(c.seed));
  line("model_label", quote(c.model_label));
  out += "\n[io]\n";
  line("output_dir", quote(c.output_dir.string()));
  line("worksheet", quote(c.worksheet.string()));
  line("format", quote(to_string(c.format)));
  return out;
}

}  // namespace autoreview
