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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <sstream>

#include "autoreview/cli.hpp"
#include "autoreview/document.hpp"
#include "autoreview/gateway.hpp"
#include "autoreview/harness.hpp"
#include "autoreview/json_io.hpp"
#include "autoreview/pipeline.hpp"
#include "autoreview/review_format.hpp"
#include "autoreview/stats.hpp"
#include "autoreview/templates.hpp"

namespace py = pybind11;
using nlohmann::json;

namespace autoreview {
namespace {

std::vector<ItemKind> required_items(const std::optional<std::vector<std::string>>& names) {
  if (!names) return all_items();
  std::vector<ItemKind> out;
  for (const auto& name : *names) {
    auto kind = parse_item_kind(name);
    if (!kind) throw Error(ErrorCode::kInvalidArgument, "unknown review item '" + name + "'");
    out.push_back(*kind);
  }
  return out;
}

std::string parse_review_json(const std::string& text, const std::optional<std::vector<std::string>>& required) {
  const auto [review, report] = parse_review(text, required_items(required));
  return json{{"review", review}, {"report", report}}.dump();
}

std::string render_review_json(const std::string& review_json,
                               const std::optional<std::vector<std::string>>& required) {
  return render_review(json::parse(review_json).get<StructuredReview>(), required_items(required));
}

PipelineConfig pipeline_config(const std::string& regime, int max_attempts) {
  PipelineConfig config;
  config.params = regime_params(regime);
  config.max_attempts = max_attempts;
  return config;
}

std::string generate_review_json(const PaperDocument& doc, const std::string& mock_script, const std::string& regime,
                                 int max_attempts) {
  MockGateway gateway(parse_mock_script(mock_script));
  try {
    const ReviewRun run = generate_review_with_retries(doc, pipeline_config(regime, max_attempts), gateway);
    return json{{"review", run.review},
                {"report", run.report},
                {"raw_review", run.raw_review},
                {"log", run.log},
                {"backend_calls", gateway.call_count()}}
        .dump();
  } catch (const MaxAttemptsExceeded& e) {
    return json{{"error", e.what()}, {"log", e.log()}, {"backend_calls", gateway.call_count()}}.dump();
  }
}

std::string transform_json(const PaperDocument& doc, const std::string& kind, const std::string& mock_script,
                           std::uint64_t seed) {
  MockGateway gateway(parse_mock_script(mock_script));
  const GenerationParams params;
  const TransformedDocument out =
      parse_attack_kind(kind) == AttackKind::kAbstractSwap
          ? negate_abstract(doc, gateway, default_template(Stage::kAbstractSwap), params)
          : insert_informal_sentence(doc, gateway, default_template(Stage::kInformal), params, seed);
  return json{{"raw_text", out.document.raw_text}, {"record", out.record}}.dump();
}

py::tuple run_cli(const std::vector<std::string>& args) {
  std::vector<std::string> argv{"autoreview"};
  argv.insert(argv.end(), args.begin(), args.end());
  std::ostringstream out;
  std::ostringstream err;
  int code = 0;
  {
    py::gil_scoped_release release;
    code = run_command(argv, out, err);
  }
  return py::make_tuple(code, out.str(), err.str());
}

using PyRating = std::tuple<std::string, std::string, std::optional<int>>;

ReviewerKind reviewer_kind(const std::string& name) {
  auto kind = parse_reviewer_kind(name);
  if (!kind) throw Error(ErrorCode::kInvalidArgument, "unknown reviewer kind '" + name + "'");
  return *kind;
}

std::vector<PyRating> apply_missing_rule_py(const std::vector<PyRating>& ratings,
                                            const std::vector<std::pair<std::string, std::string>>& expected) {
  std::vector<RatingRecord> in;
  for (const auto& [paper, kind, rating] : ratings) in.push_back({paper, reviewer_kind(kind), rating});
  std::vector<ExpectedReview> exp;
  for (const auto& [paper, kind] : expected) exp.emplace_back(paper, reviewer_kind(kind));
  std::vector<PyRating> out;
  for (const auto& r : apply_missing_rule(in, exp)) {
    out.emplace_back(r.paper_id, std::string(to_string(r.reviewer_kind)), r.rating);
  }
  return out;
}

}  // namespace
}  // namespace autoreview

PYBIND11_MODULE(_core, m) {
  using namespace autoreview;
  m.doc() = "Native core of the autoreview toolkit.";

  static PyObject* error_type = py::exception<Error>(m, "AutoreviewError", PyExc_RuntimeError).ptr();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = py::reinterpret_borrow<py::object>(error_type)(e.what());
      exc.attr("code") = std::string(to_string(e.code()));
      PyErr_SetObject(error_type, exc.ptr());
    } catch (const json::exception& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    }
  });

  py::class_<Span>(m, "Span")
      .def_readonly("begin", &Span::begin)
      .def_readonly("end", &Span::end)
      .def("__repr__", [](const Span& s) {
        return "Span(" + std::to_string(s.begin) + ", " + std::to_string(s.end) + ")";
      });

  py::class_<Sentence>(m, "Sentence")
      .def_readonly("text", &Sentence::text)
      .def_readonly("span", &Sentence::span)
      .def_readonly("word_count", &Sentence::word_count);

  py::class_<Section>(m, "Section")
      .def_readonly("heading", &Section::heading)
      .def_property_readonly("kind",
                             [](const Section& s) {
                               switch (s.kind) {
                                 case SectionKind::kPreamble: return "preamble";
                                 case SectionKind::kAbstract: return "abstract";
                                 case SectionKind::kReferences: return "references";
                                 default: return "body";
                               }
                             })
      .def_readonly("span", &Section::span)
      .def_readonly("body", &Section::body)
      .def_readonly("sentences", &Section::sentences);

  py::class_<PaperDocument>(m, "PaperDocument")
      .def_readonly("source_id", &PaperDocument::source_id)
      .def_readonly("raw_text", &PaperDocument::raw_text)
      .def_readonly("sections", &PaperDocument::sections)
      .def_readonly("abstract", &PaperDocument::abstract)
      .def_readonly("abstract_inferred", &PaperDocument::abstract_inferred)
      .def_readonly("warnings", &PaperDocument::warnings)
      .def_property_readonly("decision_label",
                             [](const PaperDocument& d) { return std::string(to_string(d.decision_label)); });

  py::class_<Chunk>(m, "Chunk")
      .def_readonly("text", &Chunk::text)
      .def_readonly("token_estimate", &Chunk::token_estimate)
      .def_readonly("section_headings_covered", &Chunk::section_headings_covered);

  py::class_<SummaryStat>(m, "SummaryStat")
      .def_readonly("mean", &SummaryStat::mean)
      .def_readonly("ci_half_width", &SummaryStat::ci_half_width)
      .def_readonly("n", &SummaryStat::n)
      .def_readonly("degenerate", &SummaryStat::degenerate)
      .def_property_readonly("display", [](const SummaryStat& s) { return format_mean_ci(s); })
      .def("__repr__", [](const SummaryStat& s) { return "SummaryStat(" + format_mean_ci(s) + ", n=" +
                                                         std::to_string(s.n) + ")"; });

  m.def(
      "load_document",
      [](std::string text, const std::string& format, const std::string& source_id,
         const std::string& decision_label) {
        LoadOptions o;
        o.format = parse_input_format(format);
        o.source_id = source_id;
        o.decision_label = parse_decision_label(decision_label);
        return load_document(std::move(text), o);
      },
      py::arg("text"), py::arg("format") = "plain", py::arg("source_id") = "", py::arg("decision_label") = "unknown");
  m.def("estimate_tokens", &estimate_tokens, py::arg("text"), py::arg("divisor") = 4);
  m.def("chunk_for_budget", &chunk_for_budget, py::arg("document"), py::arg("budget_tokens"),
        py::arg("reserve_tokens") = 0, py::arg("token_divisor") = 4);

  m.def("parse_review_json", &parse_review_json, py::arg("text"), py::arg("required") = py::none());
  m.def("render_review_json", &render_review_json, py::arg("review_json"), py::arg("required") = py::none());

  m.def("recall_ci", [](const std::vector<bool>& outcomes) { return recall_ci(outcomes); }, py::arg("outcomes"));
  m.def("mean_ci", [](const std::vector<double>& values, double z) { return mean_ci(values, z); },
        py::arg("values"), py::arg("z") = kZ95);
  m.def("apply_missing_rule", &apply_missing_rule_py, py::arg("ratings"), py::arg("expected"));

  m.def("generate_review_json", &generate_review_json, py::arg("document"), py::arg("mock_script"),
        py::arg("regime") = "gpt4-8k", py::arg("max_attempts") = 10);
  m.def("transform_json", &transform_json, py::arg("document"), py::arg("kind"), py::arg("mock_script"),
        py::arg("seed") = 0);
  m.def("paper_seed", &paper_seed, py::arg("base_seed"), py::arg("source_id"));
  m.def("run_cli", &run_cli, py::arg("args"));
}
