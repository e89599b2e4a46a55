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

#include "autoreview/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <random>
#include <set>
#include <thread>

#include "autoreview/error.hpp"
#include "json.hpp"
#include "text_util.hpp"

namespace autoreview {

using nlohmann::json;

std::string_view to_string(AttackKind kind) {
  return kind == AttackKind::kAbstractSwap ? "abstract-swap" : "informal";
}

AttackKind parse_attack_kind(std::string_view text) {
  const std::string lower = detail::to_lower(detail::trim(text));
  if (lower == "abstract-swap" || lower == "abstract_swap") return AttackKind::kAbstractSwap;
  if (lower == "informal" || lower == "informal_insertion") return AttackKind::kInformalInsertion;
  throw Error(ErrorCode::kInvalidArgument, "unknown attack kind '" + std::string(text) + "'");
}

void DetectionRubric::validate() const {
  if (min_quote_overlap_words < 2) {
    throw Error(ErrorCode::kConfigError, "min_quote_overlap_words must be at least 2");
  }
  if (concern_lexicon.empty()) throw Error(ErrorCode::kConfigError, "concern lexicon is empty");
}

DetectionRubric load_rubric(const std::filesystem::path& path) {
  const json doc = json::parse(detail::read_file(path), nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw Error(ErrorCode::kConfigError, path.string() + " is not a JSON object");
  }
  DetectionRubric rubric;
  try {
    if (doc.contains("min_quote_overlap_words")) {
      rubric.min_quote_overlap_words = doc.at("min_quote_overlap_words").get<std::size_t>();
    }
    if (doc.contains("concern_lexicon")) {
      rubric.concern_lexicon = doc.at("concern_lexicon").get<std::vector<std::string>>();
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kConfigError, path.string() + ": " + e.what());
  }
  rubric.validate();
  return rubric;
}

std::map<std::string, bool> load_adjudications(const std::filesystem::path& path) {
  const json doc = json::parse(detail::read_file(path), nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw Error(ErrorCode::kConfigError, path.string() + " is not a JSON object");
  }
  std::map<std::string, bool> out;
  for (const auto& [id, verdict] : doc.items()) {
    if (!verdict.is_boolean()) {
      throw Error(ErrorCode::kConfigError, path.string() + ": verdict for " + id + " is not a boolean");
    }
    out[id] = verdict.get<bool>();
  }
  return out;
}

namespace {

TransformedDocument splice(const PaperDocument& doc, AttackKind kind, Span span, std::string replacement,
                           std::uint64_t seed) {
  TransformationRecord record;
  record.source_id = doc.source_id;
  record.kind = kind;
  record.span = span;
  record.original_text = doc.raw_text.substr(span.begin, span.size());
  record.replacement_text = std::move(replacement);
  record.rng_seed = seed;
  if (record.replacement_text.empty()) {
    throw Error(ErrorCode::kInvalidTransformation, "backend returned an empty rewrite");
  }
  if (record.replacement_text == record.original_text) {
    throw Error(ErrorCode::kInvalidTransformation, "rewrite is identical to the original");
  }
  std::string raw = doc.raw_text.substr(0, span.begin);
  raw += record.replacement_text;
  raw.append(doc.raw_text, span.end, std::string::npos);

  LoadOptions options;
  options.format = doc.format;
  options.source_id = doc.source_id;
  options.decision_label = doc.decision_label;
  return {load_document(std::move(raw), options), std::move(record)};
}

std::vector<std::string> words_of(std::string_view text) {
  std::vector<std::string> words;
  std::string current;
  const auto push = [&]() {
    std::size_t b = 0;
    std::size_t e = current.size();
    while (b < e && !std::isalnum(static_cast<unsigned char>(current[b])) &&
           static_cast<unsigned char>(current[b]) < 0x80) {
      ++b;
    }
    while (e > b && !std::isalnum(static_cast<unsigned char>(current[e - 1])) &&
           static_cast<unsigned char>(current[e - 1]) < 0x80) {
      --e;
    }
    if (e > b) words.push_back(detail::to_lower(std::string_view(current).substr(b, e - b)));
    current.clear();
  };
  for (char c : text) {
    if (detail::is_space(c)) {
      push();
    } else {
      current.push_back(c);
    }
  }
  push();
  return words;
}

std::string join_words(const std::vector<std::string>& words, std::size_t begin, std::size_t count) {
  std::string out;
  for (std::size_t i = begin; i < begin + count; ++i) {
    if (i > begin) out.push_back(' ');
    out += words[i];
  }
  return out;
}

std::set<std::string> grams(const std::vector<std::string>& words, std::size_t k) {
  std::set<std::string> out;
  for (std::size_t i = 0; i + k <= words.size(); ++i) out.insert(join_words(words, i, k));
  return out;
}

bool contains_phrase(std::string_view haystack_lower, std::string_view phrase_lower) {
  if (phrase_lower.empty()) return false;
  std::size_t pos = 0;
  while ((pos = haystack_lower.find(phrase_lower, pos)) != std::string_view::npos) {
    const std::size_t end = pos + phrase_lower.size();
    const bool left = pos == 0 || !std::isalnum(static_cast<unsigned char>(haystack_lower[pos - 1]));
    const bool right = end >= haystack_lower.size() ||
                       !std::isalnum(static_cast<unsigned char>(haystack_lower[end]));
    if (left && right) return true;
    ++pos;
  }
  return false;
}

}  // namespace

TransformedDocument negate_abstract(const PaperDocument& doc, Gateway& gateway,
                                    const PromptTemplate& tmpl, const GenerationParams& params) {
  if (tmpl.stage != Stage::kAbstractSwap) {
    throw Error(ErrorCode::kTemplateError, "expected an abstract_swap template");
  }
  if (doc.abstract.empty()) throw Error(ErrorCode::kMissingAbstract, doc.source_id + " has no abstract");
  const std::string prompt = tmpl.render({{kAbstract, doc.abstract}});
  const CompletionResult result = gateway.complete(prompt, params);
  return splice(doc, AttackKind::kAbstractSwap, doc.abstract_span,
                std::string(detail::trim(result.text)), 0);
}

std::vector<const Sentence*> eligible_sentences(const PaperDocument& doc) {
  std::vector<const Sentence*> out;
  for (const Section& section : doc.sections) {
    if (section.kind != SectionKind::kBody) continue;
    for (const Sentence& s : section.sentences) {
      if (s.word_count < kMinInsertableWords) continue;
      if (!doc.abstract_span.empty() && s.span.overlaps(doc.abstract_span)) continue;
      out.push_back(&s);
    }
  }
  return out;
}

std::size_t uniform_index(std::uint64_t seed, std::size_t n) {
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "cannot draw from an empty range");
  std::mt19937_64 rng(seed);
  const std::uint64_t bound = static_cast<std::uint64_t>(n);
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t draw = rng();
  while (draw >= limit) draw = rng();
  return static_cast<std::size_t>(draw % bound);
}

TransformedDocument insert_informal_sentence(const PaperDocument& doc, Gateway& gateway,
                                             const PromptTemplate& tmpl, const GenerationParams& params,
                                             std::uint64_t seed) {
  if (tmpl.stage != Stage::kInformal) throw Error(ErrorCode::kTemplateError, "expected an informal template");
  const auto candidates = eligible_sentences(doc);
  if (candidates.empty()) {
    throw Error(ErrorCode::kNoEligibleSentence,
                doc.source_id + " has no body sentence of " + std::to_string(kMinInsertableWords) +
                    " or more words");
  }
  const Sentence& chosen = *candidates[uniform_index(seed, candidates.size())];
  const std::string prompt = tmpl.render({{kSentence, chosen.text}});
  const CompletionResult result = gateway.complete(prompt, params);
  return splice(doc, AttackKind::kInformalInsertion, chosen.span, std::string(detail::trim(result.text)),
                seed);
}

Detection detect_flag(const StructuredReview& review, const TransformationRecord& record,
                      const DetectionRubric& rubric) {
  if (auto it = rubric.adjudication_overrides.find(record.source_id);
      it != rubric.adjudication_overrides.end()) {
    return {it->second, "manual adjudication"};
  }
  const std::string text = review_full_text(review);

  const std::size_t k = std::max<std::size_t>(rubric.min_quote_overlap_words, 1);
  const auto replacement_words = words_of(record.replacement_text);
  if (replacement_words.size() >= k) {
    const auto original = grams(words_of(record.original_text), k);
    std::set<std::string> introduced;
    for (const std::string& g : grams(replacement_words, k)) {
      if (!original.count(g)) introduced.insert(g);
    }
    const auto review_words = words_of(text);
    for (std::size_t i = 0; i + k <= review_words.size(); ++i) {
      std::string g = join_words(review_words, i, k);
      if (introduced.count(g)) return {true, "quote: \"" + g + "\""};
    }
  }

  const std::string lower = detail::to_lower(text);
  for (const std::string& phrase : rubric.concern_lexicon) {
    if (contains_phrase(lower, detail::to_lower(detail::trim(phrase)))) {
      return {true, "lexicon: \"" + phrase + "\""};
    }
  }
  return {false, ""};
}

RobustnessResult aggregate_outcomes(std::vector<PaperOutcome> outcomes, AttackKind kind,
                                    std::string model_label) {
  if (outcomes.empty()) throw Error(ErrorCode::kInvalidArgument, "no outcomes to aggregate");
  std::stable_sort(outcomes.begin(), outcomes.end(),
                   [](const PaperOutcome& a, const PaperOutcome& b) { return a.source_id < b.source_id; });
  RobustnessResult result;
  result.model_label = std::move(model_label);
  result.kind = kind;
  std::vector<bool> all;
  for (const auto& o : outcomes) all.push_back(o.detected);
  const SummaryStat overall = recall_ci(all, "overall");
  result.recall = overall.mean;
  result.ci_half_width = overall.ci_half_width;
  for (DecisionLabel label : {DecisionLabel::kAccepted, DecisionLabel::kRejected}) {
    std::vector<bool> split;
    for (const auto& o : outcomes) {
      if (o.decision_label == label) split.push_back(o.detected);
    }
    if (!split.empty()) result.per_split.push_back(recall_ci(split, std::string(to_string(label))));
  }
  result.per_paper = std::move(outcomes);
  return result;
}

std::uint64_t paper_seed(std::uint64_t base_seed, std::string_view source_id) {
  return detail::mix64(base_seed ^ detail::fnv1a(source_id));
}

RobustnessResult run_robustness_experiment(const std::vector<PaperDocument>& corpus, AttackKind kind,
                                           const ExperimentConfig& config,
                                           const GatewayFactory& gateways) {
  if (corpus.empty()) throw Error(ErrorCode::kInvalidArgument, "corpus is empty");
  config.rubric.validate();
  config.pipeline.templates.validate();

  std::vector<std::shared_ptr<Gateway>> backends;
  backends.reserve(corpus.size());
  for (const PaperDocument& doc : corpus) backends.push_back(gateways(doc));

  std::vector<PaperOutcome> outcomes(corpus.size());
  const auto process = [&](std::size_t i) {
    const PaperDocument& doc = corpus[i];
    PaperOutcome& out = outcomes[i];
    out.source_id = doc.source_id;
    out.kind = kind;
    out.decision_label = doc.decision_label;
    try {
      Gateway& gateway = *backends[i];
      const GenerationParams& params = config.pipeline.params;
      TransformedDocument transformed =
          kind == AttackKind::kAbstractSwap
              ? negate_abstract(doc, gateway, config.pipeline.templates.abstract_swap, params)
              : insert_informal_sentence(doc, gateway, config.pipeline.templates.informal, params,
                                         paper_seed(config.seed, doc.source_id));
      out.record = transformed.record;
      ReviewRun run = generate_review_with_retries(transformed.document, config.pipeline, gateway);
      const Detection detection = detect_flag(run.review, transformed.record, config.rubric);
      out.detected = detection.detected;
      out.evidence = detection.evidence;
      out.review = std::move(run.review);
      out.raw_review = std::move(run.raw_review);
      out.log = std::move(run.log);
    } catch (const MaxAttemptsExceeded& e) {
      out.detected = false;
      out.error = e.what();
      out.log = e.log();
    } catch (const std::exception& e) {
      out.detected = false;
      out.error = e.what();
    }
    if (out.error) {
      if (auto it = config.rubric.adjudication_overrides.find(out.source_id);
          it != config.rubric.adjudication_overrides.end()) {
        out.detected = it->second;
        out.evidence = "manual adjudication";
      }
    }
  };

  const std::size_t workers = std::clamp<std::size_t>(config.jobs, 1, corpus.size());
  if (workers == 1) {
    for (std::size_t i = 0; i < corpus.size(); ++i) process(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&]() {
        for (std::size_t i = next++; i < corpus.size(); i = next++) process(i);
      });
    }
  }
  return aggregate_outcomes(std::move(outcomes), kind, config.model_label);
}

}  // namespace autoreview
