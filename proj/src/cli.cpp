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

#include "autoreview/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <iostream>
#include <map>
#include <optional>
#include <set>

#include "CLI11.hpp"
#include "autoreview/config.hpp"
#include "autoreview/harness.hpp"
#include "autoreview/json_io.hpp"
#include "autoreview/pipeline.hpp"
#include "autoreview/stats.hpp"
#include "text_util.hpp"

namespace autoreview {

int exit_code_for(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kMaxAttemptsExceeded:
    case ErrorCode::kInvalidReview:
      return kExitInvalid;
    case ErrorCode::kConfigError:
    case ErrorCode::kTemplateError:
    case ErrorCode::kScriptParseError:
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kSchemaMismatch:
      return kExitConfig;
    default:
      return kExitRuntime;
  }
}

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr const char* kApiKeyEnv = "AUTOREVIEW_API_KEY";

[[noreturn]] void config_error(const std::string& message) { throw Error(ErrorCode::kConfigError, message); }

std::string dump(const json& j) { return j.dump(2) + "\n"; }

/// Source ids become file names; anything outside [A-Za-z0-9._-] is replaced.
std::string file_stem_for(std::string_view id) {
  std::string out;
  for (char c : id) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '.' ||
                    c == '_' || c == '-';
    out += ok ? c : '_';
  }
  if (out.empty() || out == "." || out == "..") out = "_" + out;
  return out;
}

// Settings every subcommand may override on the command line.
struct Overrides {
  std::string config;
  std::string output_dir;
  std::string worksheet;
  std::string templates_dir;
  std::string rubric;
  std::string adjudications;
  std::string model_label;
  std::string format;
  std::string regime;
  std::optional<std::size_t> context_budget;
  std::optional<int> max_attempts;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> jobs;
  std::string mock;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "Run configuration file")->check(CLI::ExistingFile);
  cmd->add_option("--output-dir", o.output_dir, "Directory for reviews/, logs/ and results/");
  cmd->add_option("--worksheet", o.worksheet, "Worksheet CSV to append to");
  cmd->add_option("--jobs", o.jobs, "Concurrent papers and backend requests")->check(CLI::PositiveNumber);
}

void add_pipeline(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--mock", o.mock, "Mock script file, or a directory of <source_id>.json scripts")
      ->check(CLI::ExistingPath);
  cmd->add_option("--templates", o.templates_dir, "Directory of prompt templates")->check(CLI::ExistingDirectory);
  cmd->add_option("--format", o.format, "Input format hint")
      ->check(CLI::IsMember({"plain", "latex", "markdown"}));
  cmd->add_option("--regime", o.regime, "Context regime preset")
      ->check(CLI::IsMember({"gpt4-4k", "gpt4-8k", "gpt4-32k"}, CLI::ignore_case));
  cmd->add_option("--context-budget", o.context_budget, "Context budget in tokens")->check(CLI::PositiveNumber);
  cmd->add_option("--max-attempts", o.max_attempts, "Review-construction attempts")->check(CLI::Range(1, 1000));
}

RunConfig effective_config(const Overrides& o) {
  RunConfig c = o.config.empty() ? RunConfig{} : load_run_config(o.config);
  if (!o.regime.empty()) {
    const GenerationParams preset = regime_params(o.regime);
    c.params.model_name = preset.model_name;
    c.params.context_budget_tokens = preset.context_budget_tokens;
  }
  if (o.context_budget) c.params.context_budget_tokens = *o.context_budget;
  if (o.max_attempts) c.max_attempts = *o.max_attempts;
  if (o.seed) c.seed = *o.seed;
  if (o.jobs) c.max_in_flight = *o.jobs;
  if (!o.output_dir.empty()) c.output_dir = o.output_dir;
  if (!o.worksheet.empty()) c.worksheet = o.worksheet;
  if (!o.templates_dir.empty()) c.templates_dir = o.templates_dir;
  if (!o.rubric.empty()) c.rubric = o.rubric;
  if (!o.adjudications.empty()) c.adjudications = o.adjudications;
  if (!o.model_label.empty()) c.model_label = o.model_label;
  if (!o.format.empty()) c.format = parse_input_format(o.format);
  if (!o.mock.empty()) c.backend = "mock";
  c.validate();
  return c;
}

PipelineConfig pipeline_config(const RunConfig& c) {
  PipelineConfig p;
  p.params = c.params;
  p.max_attempts = c.max_attempts;
  p.required = c.required_items;
  if (!c.templates_dir.empty()) p.templates = load_templates(c.templates_dir);
  p.templates.validate();
  return p;
}

void write_snapshot(const RunConfig& c) { detail::write_file(c.output_dir / "config-snapshot.toml", to_toml(c)); }

fs::path mock_script_for(const fs::path& mock, std::string_view source_id) {
  if (!fs::is_directory(mock)) return mock;
  fs::path own = mock / (file_stem_for(source_id) + ".json");
  if (fs::is_regular_file(own)) return own;
  fs::path fallback = mock / "default.json";
  if (fs::is_regular_file(fallback)) return fallback;
  config_error("no mock script for '" + std::string(source_id) + "' in " + mock.string());
}

/// Hands out a fresh scripted backend per paper, or one shared live backend.
class BackendProvider {
 public:
  BackendProvider(const RunConfig& config, std::string mock) : config_(config), mock_(std::move(mock)) {
    if (config_.backend == "mock") {
      if (mock_.empty()) config_error("the mock backend needs --mock SCRIPT");
      return;
    }
    const char* key = std::getenv(kApiKeyEnv);
    if (key == nullptr || *key == '\0') config_error(std::string(kApiKeyEnv) + " is not set");
    if (config_.base_url.empty()) config_error("gateway.base_url is required for the http backend");
    HttpGatewayConfig http;
    http.base_url = config_.base_url;
    http.api_key = key;
    http.max_in_flight = config_.max_in_flight;
    live_ = std::make_shared<HttpGateway>(std::move(http), config_.token_divisor);
  }

  std::shared_ptr<Gateway> get(std::string_view source_id) {
    if (live_) return live_;
    const fs::path path = mock_script_for(mock_, source_id);
    auto it = scripts_.find(path.string());
    if (it == scripts_.end()) it = scripts_.emplace(path.string(), load_mock_script(path)).first;
    return std::make_shared<MockGateway>(it->second, config_.token_divisor);
  }

 private:
  const RunConfig& config_;
  fs::path mock_;
  std::shared_ptr<Gateway> live_;
  std::map<std::string, MockScript> scripts_;
};

// ---------------------------------------------------------------------------
// generate

struct GenerateArgs {
  Overrides o;
  std::string paper;
  std::string source_id;
};

int cmd_generate(const GenerateArgs& a, std::ostream& out, std::ostream& err) {
  const RunConfig config = effective_config(a.o);
  const PipelineConfig pipeline = pipeline_config(config);
  const std::string source_id = a.source_id.empty() ? fs::path(a.paper).stem().string() : a.source_id;

  LoadOptions load;
  load.format = config.format;
  load.source_id = source_id;
  const PaperDocument doc = load_document(detail::read_file(a.paper), load);
  for (const auto& w : doc.warnings) err << "warning: " << w << "\n";

  BackendProvider backends(config, a.o.mock);
  std::shared_ptr<Gateway> gateway = backends.get(source_id);

  write_snapshot(config);
  const std::string stem = file_stem_for(source_id);
  const fs::path review_rel = fs::path("reviews") / (stem + ".txt");
  const fs::path log_path = config.output_dir / "logs" / (stem + ".attempts.json");

  try {
    ReviewRun run = generate_review_with_retries(doc, pipeline, *gateway);
    detail::write_file(config.output_dir / review_rel, run.raw_review);
    detail::write_file(config.output_dir / "reviews" / (stem + ".json"),
                       dump({{"source_id", source_id}, {"review", run.review}, {"report", run.report}}));
    detail::write_file(log_path, dump(run.log));
    json notes = json::array();
    for (const auto& n : run.notes) notes.push_back({{"chunk", n.chunk_index}, {"text", n.text}});
    detail::write_file(config.output_dir / "logs" / (stem + ".notes.json"),
                       dump({{"notes", notes},
                             {"synthesis", run.synthesis.text},
                             {"synthesis_calls", run.synthesis.calls},
                             {"backend_calls", gateway->call_count()}}));
    worksheet_append(config.worksheet_path(),
                     {{source_id, "gpt", "", review_rel.generic_string(), std::to_string(run.log.attempts())}});
    out << "review: " << (config.output_dir / review_rel).string() << "\n"
        << "attempts: " << run.log.attempts() << "\n";
    return kExitOk;
  } catch (const MaxAttemptsExceeded& e) {
    detail::write_file(log_path, dump(e.log()));
    worksheet_append(config.worksheet_path(),
                     {{source_id, "gpt", std::string(kMissingRating), "", std::to_string(e.log().attempts())}});
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
}

// ---------------------------------------------------------------------------
// validate

std::string review_text_from_json(const json& j) {
  const StructuredReview review = j.contains("review") ? j.at("review").get<StructuredReview>()
                                                       : j.get<StructuredReview>();
  std::string text;
  int n = 0;
  for (ItemKind kind : kAllItems) {
    auto it = review.items.find(kind);
    if (it == review.items.end()) continue;
    if (!text.empty()) text += "\n\n";
    text += std::to_string(++n) + ". " + std::string(canonical_heading(kind)) + ": " + it->second;
  }
  return text;
}

int cmd_validate(const std::string& path, const std::string& required, std::ostream& out) {
  const std::vector<ItemKind> items = required.empty() ? all_items() : parse_item_list(required);
  std::string text = detail::read_file(path);
  if (fs::path(path).extension() == ".json") {
    json j;
    try {
      j = json::parse(text);
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kInvalidArgument, path + ": " + e.what());
    }
    text = review_text_from_json(j);
  }
  const auto [review, report] = parse_review(text, items);
  json j = report;
  j["review"] = review;
  out << dump(j);
  return report.valid ? kExitOk : kExitInvalid;
}

// ---------------------------------------------------------------------------
// attack

struct ManifestEntry {
  std::string source_id;
  fs::path path;
  DecisionLabel label = DecisionLabel::kUnknown;
};

std::vector<ManifestEntry> load_manifest(const fs::path& path) {
  const auto rows = parse_csv(detail::read_file(path));
  if (rows.empty() || rows.front() != std::vector<std::string>{"source_id", "path", "decision_label"}) {
    config_error(path.string() + ": header must be source_id,path,decision_label");
  }
  std::vector<ManifestEntry> out;
  std::set<std::string> seen;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& row = rows[i];
    if (row.size() == 1 && detail::trim(row[0]).empty()) continue;
    if (row.size() != 3) config_error(path.string() + ": row " + std::to_string(i + 1) + " needs 3 fields");
    if (!seen.insert(row[0]).second) config_error(path.string() + ": duplicate source_id " + row[0]);
    fs::path p(row[1]);
    if (p.is_relative()) p = path.parent_path() / p;
    if (!fs::is_regular_file(p)) config_error(path.string() + ": no such paper " + p.string());
    DecisionLabel label;
    try {
      label = parse_decision_label(row[2]);
    } catch (const Error& e) {
      config_error(path.string() + ": " + e.what());
    }
    out.push_back({row[0], p.lexically_normal(), label});
  }
  if (out.empty()) config_error(path.string() + ": manifest lists no papers");
  return out;
}

DetectionRubric rubric_for(const RunConfig& c) {
  DetectionRubric rubric = c.rubric.empty() ? DetectionRubric{} : load_rubric(c.rubric);
  if (!c.adjudications.empty()) rubric.adjudication_overrides = load_adjudications(c.adjudications);
  rubric.validate();
  return rubric;
}

std::string result_name(const std::string& label, AttackKind kind) {
  return file_stem_for(label) + "__" + std::string(to_string(kind));
}

struct AttackArgs {
  Overrides o;
  std::string kind;
  std::string corpus;
};

int cmd_attack(const AttackArgs& a, std::ostream& out, std::ostream& err) {
  const RunConfig config = effective_config(a.o);
  const AttackKind kind = parse_attack_kind(a.kind);

  ExperimentConfig experiment;
  experiment.pipeline = pipeline_config(config);
  experiment.rubric = rubric_for(config);
  experiment.seed = config.seed;
  experiment.model_label = config.model_label;
  experiment.jobs = config.max_in_flight;

  std::vector<PaperDocument> corpus;
  for (const ManifestEntry& m : load_manifest(a.corpus)) {
    LoadOptions load;
    load.format = config.format;
    load.source_id = m.source_id;
    load.decision_label = m.label;
    corpus.push_back(load_document(detail::read_file(m.path), load));
  }

  BackendProvider backends(config, a.o.mock);
  const GatewayFactory factory = [&](const PaperDocument& doc) { return backends.get(doc.source_id); };

  write_snapshot(config);
  const RobustnessResult result = run_robustness_experiment(corpus, kind, experiment, factory);

  const fs::path kind_dir(std::string(to_string(kind)));
  std::vector<WorksheetRow> rows;
  const std::string reviewer = config.model_label + "/" + std::string(to_string(kind));
  for (const PaperOutcome& p : result.per_paper) {
    const std::string stem = file_stem_for(p.source_id);
    std::string review_rel;
    if (p.review) {
      review_rel = (fs::path("reviews") / kind_dir / (stem + ".txt")).generic_string();
      detail::write_file(config.output_dir / review_rel, p.raw_review);
      detail::write_file(config.output_dir / "reviews" / kind_dir / (stem + ".json"),
                         dump({{"source_id", p.source_id}, {"review", *p.review}}));
    }
    if (p.record) {
      detail::write_file(config.output_dir / "logs" / kind_dir / (stem + ".transformation.json"),
                         dump(*p.record));
    }
    if (p.log) detail::write_file(config.output_dir / "logs" / kind_dir / (stem + ".attempts.json"), dump(*p.log));
    if (p.error) err << "warning: " << p.source_id << ": " << *p.error << "\n";
    rows.push_back({p.source_id, reviewer, p.detected ? "1" : "0", review_rel,
                    p.log ? std::to_string(p.log->attempts()) : ""});
  }
  const std::string name = result_name(config.model_label, kind);
  const std::string table =
      format_recall_table({{config.model_label, std::string(to_string(kind)),
                            SummaryStat{result.recall, result.ci_half_width, result.per_paper.size(), {}, false}}});
  detail::write_file(config.output_dir / "results" / (name + ".json"), dump(result));
  detail::write_file(config.output_dir / "results" / (name + ".txt"), table);
  worksheet_append(config.worksheet_path(), rows);
  out << table;
  return kExitOk;
}

// ---------------------------------------------------------------------------
// eval robustness

struct EvalArgs {
  Overrides o;
  std::vector<std::string> runs;
};

std::optional<json> read_json_if_exists(const fs::path& path) {
  if (!fs::is_regular_file(path)) return std::nullopt;
  try {
    return json::parse(detail::read_file(path));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kIoFailure, path.string() + ": " + e.what());
  }
}

int cmd_eval(const EvalArgs& a, std::ostream& out) {
  const RunConfig config = effective_config(a.o);
  const DetectionRubric rubric = rubric_for(config);

  std::map<std::pair<std::string, AttackKind>, std::vector<PaperOutcome>> groups;
  for (const std::string& run_dir : a.runs) {
    const fs::path results = fs::path(run_dir) / "results";
    if (!fs::is_directory(results)) config_error(run_dir + " has no results/ directory");
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(results)) {
      if (entry.path().extension() == ".json") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const fs::path& file : files) {
      const json saved = *read_json_if_exists(file);
      if (!saved.contains("per_paper") || !saved.contains("model_label")) continue;
      const AttackKind kind = parse_attack_kind(saved.at("kind").get<std::string>());
      const fs::path kind_dir(std::string(to_string(kind)));
      auto& bucket = groups[{saved.at("model_label").get<std::string>(), kind}];
      for (const json& p : saved.at("per_paper")) {
        PaperOutcome o;
        o.source_id = p.at("source_id").get<std::string>();
        o.kind = kind;
        o.decision_label = parse_decision_label(p.value("decision_label", "unknown"));
        if (p.contains("error") && !p["error"].is_null()) o.error = p["error"].get<std::string>();
        const std::string stem = file_stem_for(o.source_id);
        if (auto r = read_json_if_exists(fs::path(run_dir) / "reviews" / kind_dir / (stem + ".json"))) {
          o.review = r->at("review").get<StructuredReview>();
        }
        if (auto t = read_json_if_exists(fs::path(run_dir) / "logs" / kind_dir / (stem + ".transformation.json"))) {
          o.record = t->get<TransformationRecord>();
        }
        if (o.review && o.record) {
          const Detection d = detect_flag(*o.review, *o.record, rubric);
          o.detected = d.detected;
          o.evidence = d.evidence;
        } else if (auto it = rubric.adjudication_overrides.find(o.source_id);
                   it != rubric.adjudication_overrides.end()) {
          o.detected = it->second;
          o.evidence = "manual adjudication";
        }
        bucket.push_back(std::move(o));
      }
    }
  }
  if (groups.empty()) config_error("no saved robustness results under the given --runs directories");

  json results = json::array();
  std::vector<RecallCell> cells;
  for (auto& [key, outcomes] : groups) {
    RobustnessResult r = aggregate_outcomes(std::move(outcomes), key.second, key.first);
    cells.push_back({r.model_label, std::string(to_string(r.kind)),
                     SummaryStat{r.recall, r.ci_half_width, r.per_paper.size(), {}, false}});
    results.push_back(r);
  }
  const std::string table = format_recall_table(cells);
  detail::write_file(config.output_dir / "results" / "eval_robustness.json", dump(results));
  detail::write_file(config.output_dir / "results" / "eval_robustness.txt", table);
  out << dump(results) << "\n" << table;
  return kExitOk;
}

// ---------------------------------------------------------------------------
// stats summarize

int cmd_stats(const std::string& worksheet, std::ostream& out) {
  const WorksheetSummary summary = summarize_worksheet(worksheet_load(worksheet));
  out << dump(summary);
  if (!summary.reviewers.empty()) out << "\n" << format_reviewer_table(summary.reviewers);
  if (!summary.detection.empty()) out << "\n" << format_recall_table(summary.detection);
  return kExitOk;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Automated paper review generation and robustness evaluation", "autoreview"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "autoreview 0.1.0");

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Generate a structured review for one paper");
  generate->add_option("--paper", gen.paper, "Paper text file")->required()->check(CLI::ExistingFile);
  generate->add_option("--source-id", gen.source_id, "Identifier (default: file stem)");
  add_common(generate, gen.o);
  add_pipeline(generate, gen.o);

  std::string review_path;
  std::string required;
  auto* validate = app.add_subcommand("validate", "Check a review against the review form");
  validate->add_option("--review", review_path, "Review text, or review JSON")->required()->check(CLI::ExistingFile);
  validate->add_option("--required", required, "Comma-separated required items (default: all)");

  AttackArgs atk;
  auto* attack = app.add_subcommand("attack", "Run an adversarial transformation over a corpus");
  attack->add_option("--kind", atk.kind, "Attack kind")->required()->check(CLI::IsMember({"abstract-swap", "informal"}));
  attack->add_option("--corpus", atk.corpus, "Manifest CSV: source_id,path,decision_label")
      ->required()
      ->check(CLI::ExistingFile);
  attack->add_option("--seed", atk.o.seed, "Seed for sentence selection");
  attack->add_option("--model-label", atk.o.model_label, "Row label in the results table");
  attack->add_option("--rubric", atk.o.rubric, "Detection rubric JSON")->check(CLI::ExistingFile);
  attack->add_option("--adjudications", atk.o.adjudications, "Manual verdicts JSON")->check(CLI::ExistingFile);
  add_common(attack, atk.o);
  add_pipeline(attack, atk.o);

  EvalArgs ev;
  auto* eval = app.add_subcommand("eval", "Evaluate saved runs");
  eval->require_subcommand(1);
  auto* robustness = eval->add_subcommand("robustness", "Re-score saved attack runs");
  robustness->add_option("--runs", ev.runs, "Output directory of an attack run (repeatable)")
      ->required()
      ->check(CLI::ExistingDirectory);
  robustness->add_option("--rubric", ev.o.rubric, "Detection rubric JSON")->check(CLI::ExistingFile);
  robustness->add_option("--adjudications", ev.o.adjudications, "Manual verdicts JSON")->check(CLI::ExistingFile);
  add_common(robustness, ev.o);

  std::string worksheet;
  auto* stats = app.add_subcommand("stats", "Summarize ratings and detections");
  stats->require_subcommand(1);
  auto* summarize = stats->add_subcommand("summarize", "Summarize a worksheet");
  summarize->add_option("--worksheet", worksheet, "Worksheet CSV")->required()->check(CLI::ExistingFile);

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*generate) return cmd_generate(gen, out, err);
    if (*validate) return cmd_validate(review_path, required, out);
    if (*attack) return cmd_attack(atk, out, err);
    if (*robustness) return cmd_eval(ev, out);
    if (*summarize) return cmd_stats(worksheet, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const json::exception& e) {
    err << "error: malformed JSON: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  err << app.help();
  return kExitConfig;
}

int run_command(int argc, const char* const* argv) {
  std::vector<std::string> args(argv, argv + argc);
  return run_command(args, std::cout, std::cerr);
}

}  // namespace autoreview
