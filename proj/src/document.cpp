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

#include "autoreview/document.hpp"

#include <algorithm>
#include <array>
#include <cctype>

#include "autoreview/error.hpp"
#include "text_util.hpp"

namespace autoreview {

std::string_view to_string(InputFormat format) {
  switch (format) {
    case InputFormat::kPlain: return "plain";
    case InputFormat::kLatex: return "latex";
    case InputFormat::kMarkdown: return "markdown";
  }
  return "plain";
}

std::string_view to_string(DecisionLabel label) {
  switch (label) {
    case DecisionLabel::kUnknown: return "unknown";
    case DecisionLabel::kAccepted: return "accepted";
    case DecisionLabel::kRejected: return "rejected";
  }
  return "unknown";
}

InputFormat parse_input_format(std::string_view text) {
  const std::string lower = detail::to_lower(detail::trim(text));
  if (lower == "plain") return InputFormat::kPlain;
  if (lower == "latex") return InputFormat::kLatex;
  if (lower == "markdown") return InputFormat::kMarkdown;
  throw Error(ErrorCode::kInvalidArgument, "unknown format '" + std::string(text) + "'");
}

DecisionLabel parse_decision_label(std::string_view text) {
  const std::string lower = detail::to_lower(detail::trim(text));
  if (lower.empty() || lower == "unknown") return DecisionLabel::kUnknown;
  if (lower == "accepted" || lower == "accept") return DecisionLabel::kAccepted;
  if (lower == "rejected" || lower == "reject") return DecisionLabel::kRejected;
  throw Error(ErrorCode::kInvalidArgument, "unknown decision label '" + std::string(text) + "'");
}

std::vector<const Section*> PaperDocument::body_sections() const {
  std::vector<const Section*> out;
  for (const auto& s : sections) {
    if (s.kind == SectionKind::kBody || s.kind == SectionKind::kReferences) out.push_back(&s);
  }
  return out;
}

std::string normalize_whitespace(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (char c : text) {
    if (detail::is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(c);
  }
  return out;
}

std::size_t count_words(std::string_view text) {
  std::size_t count = 0;
  bool in_word = false;
  for (char c : text) {
    if (detail::is_space(c)) {
      in_word = false;
    } else if (!in_word) {
      in_word = true;
      ++count;
    }
  }
  return count;
}

std::size_t estimate_tokens(std::string_view text, std::size_t divisor) {
  if (divisor == 0) throw Error(ErrorCode::kInvalidArgument, "token divisor must be positive");
  const std::size_t cps = detail::code_points(text);
  return (cps + divisor - 1) / divisor;
}

namespace {

// Tokens (lowercased, leading brackets stripped) that end in a period without
// ending a sentence.
constexpr std::array<std::string_view, 16> kAbbreviations = {
    "e.g.", "i.e.", "al.",   "fig.",  "figs.", "eq.",  "eqs.", "vs.",
    "cf.",  "sec.", "secs.", "tab.",  "no.",   "ref.", "resp.", "approx.",
};

bool is_abbreviation(std::string_view body, std::size_t sentence_start, std::size_t period) {
  std::size_t begin = period;
  while (begin > sentence_start && !detail::is_space(body[begin - 1])) --begin;
  std::string token = detail::to_lower(body.substr(begin, period - begin + 1));
  while (!token.empty() && (token.front() == '(' || token.front() == '[' || token.front() == '"')) {
    token.erase(token.begin());
  }
  return std::find(kAbbreviations.begin(), kAbbreviations.end(), token) != kAbbreviations.end();
}

// Closing punctuation allowed between a terminator and the following space.
std::size_t skip_closers(std::string_view s, std::size_t i) {
  while (i < s.size()) {
    const char c = s[i];
    if (c == '"' || c == '\'' || c == ')' || c == ']') {
      ++i;
    } else if (s.substr(i, 3) == "\xE2\x80\x9D" || s.substr(i, 3) == "\xE2\x80\x99") {
      i += 3;
    } else {
      break;
    }
  }
  return i;
}

bool starts_sentence(std::string_view s, std::size_t i) {
  while (i < s.size() && (s[i] == '"' || s[i] == '(' || s[i] == '[' || s[i] == '\'')) ++i;
  if (i < s.size() && s.substr(i, 3) == "\xE2\x80\x9C") i += 3;
  return i < s.size() && std::isupper(static_cast<unsigned char>(s[i]));
}

void push_sentence(std::string_view body, std::size_t begin, std::size_t end,
                   std::vector<Sentence>& out) {
  while (begin < end && detail::is_space(body[begin])) ++begin;
  while (end > begin && detail::is_space(body[end - 1])) --end;
  if (begin >= end) return;
  Sentence s;
  s.text = std::string(body.substr(begin, end - begin));
  s.span = {begin, end};
  s.word_count = count_words(s.text);
  out.push_back(std::move(s));
}

}  // namespace

std::vector<Sentence> split_sentences(std::string_view body) {
  std::vector<Sentence> out;
  std::size_t start = 0;
  std::size_t i = 0;
  while (i < body.size()) {
    const char c = body[i];
    if (c == '.' || c == '!' || c == '?') {
      std::size_t j = i + 1;
      while (j < body.size() && (body[j] == '.' || body[j] == '!' || body[j] == '?')) ++j;
      j = skip_closers(body, j);
      if (j < body.size() && detail::is_space(body[j])) {
        std::size_t k = j;
        while (k < body.size() && detail::is_space(body[k])) ++k;
        if (starts_sentence(body, k) && !(c == '.' && j == i + 1 && is_abbreviation(body, start, i))) {
          push_sentence(body, start, j, out);
          start = j;
          i = k;
          continue;
        }
      }
      i = j;
      continue;
    }
    if (c == '\n') {
      std::size_t k = i + 1;
      while (k < body.size() && (body[k] == ' ' || body[k] == '\t' || body[k] == '\r')) ++k;
      if (k < body.size() && body[k] == '\n') {
        push_sentence(body, start, i, out);
        start = k;
        i = k;
        continue;
      }
    }
    ++i;
  }
  push_sentence(body, start, body.size(), out);
  return out;
}

namespace {

struct Line {
  std::size_t begin = 0;
  std::size_t end = 0;   // excludes the newline (and a trailing '\r')
  std::size_t next = 0;  // start of the following line
};

std::vector<Line> split_lines(std::string_view text) {
  std::vector<Line> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    const std::size_t next = nl == std::string_view::npos ? text.size() : nl + 1;
    std::size_t end = nl == std::string_view::npos ? text.size() : nl;
    if (end > pos && text[end - 1] == '\r') --end;
    lines.push_back({pos, end, next});
    pos = next;
  }
  return lines;
}

enum class Rule { kMarkdown, kLatex, kNumbered, kKeyword };

std::optional<std::string> match_markdown(std::string_view line) {
  const std::string_view t = detail::trim(line);
  std::size_t hashes = 0;
  while (hashes < t.size() && t[hashes] == '#') ++hashes;
  if (hashes == 0 || hashes > 6 || hashes >= t.size() || t[hashes] != ' ') return std::nullopt;
  std::string_view title = detail::trim(t.substr(hashes));
  while (!title.empty() && title.back() == '#') title.remove_suffix(1);
  title = detail::trim(title);
  if (title.empty()) return std::nullopt;
  return std::string(title);
}

std::optional<std::string> match_latex(std::string_view line) {
  const std::string_view t = detail::trim(line);
  if (t.starts_with("\\begin{abstract}")) return std::string("Abstract");
  static constexpr std::array<std::string_view, 4> kCommands = {
      "\\section", "\\subsection", "\\subsubsection", "\\chapter"};
  for (auto cmd : kCommands) {
    if (!t.starts_with(cmd)) continue;
    std::size_t i = cmd.size();
    if (i < t.size() && t[i] == '*') ++i;
    if (i >= t.size() || t[i] != '{') continue;
    int depth = 0;
    for (std::size_t j = i; j < t.size(); ++j) {
      if (t[j] == '{') ++depth;
      if (t[j] == '}' && --depth == 0) {
        std::string_view title = detail::trim(t.substr(i + 1, j - i - 1));
        if (title.empty()) return std::nullopt;
        return std::string(title);
      }
    }
  }
  return std::nullopt;
}

std::optional<std::string> match_numbered(std::string_view line) {
  const std::string_view t = detail::trim(line);
  std::size_t i = 0;
  std::size_t digits = 0;
  while (i < t.size() && (std::isdigit(static_cast<unsigned char>(t[i])) || t[i] == '.')) {
    if (t[i] != '.') ++digits;
    ++i;
  }
  if (digits == 0 || digits > 4 || i >= t.size() || !detail::is_space(t[i])) return std::nullopt;
  const std::string_view title = detail::trim(t.substr(i));
  if (title.empty() || title.size() > 80) return std::nullopt;
  if (!std::isupper(static_cast<unsigned char>(title.front()))) return std::nullopt;
  if (title.find_first_of(":;,") != std::string_view::npos) return std::nullopt;
  const char last = title.back();
  if (last == '.' || last == '?' || last == '!') return std::nullopt;
  if (count_words(title) > 10) return std::nullopt;
  return std::string(t);
}

std::optional<std::string> match_keyword(std::string_view line) {
  std::string_view t = detail::trim(line);
  if (!t.empty() && t.back() == ':') t.remove_suffix(1);
  const std::string lower = detail::to_lower(detail::trim(t));
  static constexpr std::array<std::string_view, 11> kHeadings = {
      "abstract",      "introduction", "conclusion",       "conclusions",
      "references",    "bibliography", "acknowledgments",  "acknowledgements",
      "appendix",      "related work", "discussion"};
  if (std::find(kHeadings.begin(), kHeadings.end(), lower) == kHeadings.end()) return std::nullopt;
  return std::string(detail::trim(t));
}

std::array<Rule, 4> rule_order(InputFormat format) {
  switch (format) {
    case InputFormat::kMarkdown:
      return {Rule::kMarkdown, Rule::kNumbered, Rule::kKeyword, Rule::kLatex};
    case InputFormat::kLatex:
      return {Rule::kLatex, Rule::kMarkdown, Rule::kNumbered, Rule::kKeyword};
    case InputFormat::kPlain:
      break;
  }
  return {Rule::kNumbered, Rule::kKeyword, Rule::kMarkdown, Rule::kLatex};
}

std::optional<std::string> match_heading(std::string_view line, bool after_blank,
                                         InputFormat format) {
  for (Rule rule : rule_order(format)) {
    std::optional<std::string> title;
    switch (rule) {
      case Rule::kMarkdown: title = match_markdown(line); break;
      case Rule::kLatex: title = match_latex(line); break;
      case Rule::kNumbered:
        if (after_blank) title = match_numbered(line);
        break;
      case Rule::kKeyword: title = match_keyword(line); break;
    }
    if (title) return title;
  }
  return std::nullopt;
}

// Lowercased heading with any leading section number and trailing ':' removed.
std::string heading_key(std::string_view heading) {
  std::string_view t = detail::trim(heading);
  std::size_t i = 0;
  while (i < t.size() && (std::isdigit(static_cast<unsigned char>(t[i])) || t[i] == '.')) ++i;
  t = detail::trim(t.substr(i));
  while (!t.empty() && (t.back() == ':' || t.back() == '.')) t.remove_suffix(1);
  return detail::to_lower(detail::trim(t));
}

SectionKind classify(std::string_view heading) {
  const std::string key = heading_key(heading);
  if (key == "abstract") return SectionKind::kAbstract;
  if (key.find("references") != std::string::npos || key.find("bibliography") != std::string::npos) {
    return SectionKind::kReferences;
  }
  return SectionKind::kBody;
}

Span trimmed(std::string_view text, Span span) {
  while (span.begin < span.end && detail::is_space(text[span.begin])) ++span.begin;
  while (span.end > span.begin && detail::is_space(text[span.end - 1])) --span.end;
  return span;
}

Span first_paragraph(std::string_view text, Span body) {
  std::size_t pos = body.begin;
  while (pos < body.end) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos || nl >= body.end) break;
    std::size_t k = nl + 1;
    while (k < body.end && (text[k] == ' ' || text[k] == '\t' || text[k] == '\r')) ++k;
    if (k < body.end && text[k] == '\n') {
      Span para = trimmed(text, {body.begin, nl});
      if (!para.empty()) return para;
      body.begin = k;
    }
    pos = k;
  }
  return trimmed(text, body);
}

void fill_section(std::string_view raw, InputFormat format, Section& section) {
  if (format == InputFormat::kLatex && section.kind == SectionKind::kAbstract) {
    const auto end_env = raw.substr(0, section.body_span.end).find("\\end{abstract}", section.body_span.begin);
    if (end_env != std::string_view::npos) section.body_span.end = end_env;
  }
  section.body_span = trimmed(raw, section.body_span);
  section.body = std::string(raw.substr(section.body_span.begin, section.body_span.size()));
  section.sentences = split_sentences(section.body);
  for (auto& s : section.sentences) {
    s.span.begin += section.body_span.begin;
    s.span.end += section.body_span.begin;
  }
}

}  // namespace

PaperDocument load_document(std::string raw, const LoadOptions& options) {
  if (!detail::is_valid_utf8(raw)) {
    throw Error(ErrorCode::kInvalidArgument, "document is not valid UTF-8");
  }
  if (detail::trim(raw).empty()) {
    throw Error(ErrorCode::kEmptyDocument, "document contains only whitespace");
  }

  PaperDocument doc;
  doc.source_id = options.source_id;
  doc.format = options.format;
  doc.decision_label = options.decision_label;
  doc.raw_text = std::move(raw);
  const std::string_view text = doc.raw_text;

  struct Heading {
    Line line;
    std::string title;
  };
  std::vector<Heading> headings;
  bool after_blank = true;
  for (const Line& line : split_lines(text)) {
    const std::string_view content = text.substr(line.begin, line.end - line.begin);
    if (auto title = match_heading(content, after_blank, options.format)) {
      headings.push_back({line, std::move(*title)});
    }
    after_blank = detail::trim(content).empty();
  }

  if (headings.empty()) {
    if (split_sentences(text).size() < 3) {
      throw Error(ErrorCode::kUnrecognizedStructure,
                  "no heading found and fewer than three sentences");
    }
    Section only;
    only.span = {0, text.size()};
    only.body_span = only.span;
    fill_section(text, options.format, only);
    doc.sections.push_back(std::move(only));
  } else {
    const std::size_t first = headings.front().line.begin;
    if (!detail::trim(text.substr(0, first)).empty()) {
      Section preamble;
      preamble.kind = SectionKind::kPreamble;
      preamble.span = {0, first};
      preamble.body_span = preamble.span;
      fill_section(text, options.format, preamble);
      doc.sections.push_back(std::move(preamble));
    }
    bool seen_abstract = false;
    for (std::size_t h = 0; h < headings.size(); ++h) {
      const std::size_t end = h + 1 < headings.size() ? headings[h + 1].line.begin : text.size();
      Section section;
      section.heading = headings[h].title;
      section.kind = classify(section.heading);
      if (section.kind == SectionKind::kAbstract) {
        if (seen_abstract) section.kind = SectionKind::kBody;
        seen_abstract = true;
      }
      section.span = {headings[h].line.begin, end};
      section.body_span = {std::min(headings[h].line.next, end), end};
      fill_section(text, options.format, section);
      doc.sections.push_back(std::move(section));
    }
  }

  const auto abstract_it = std::find_if(doc.sections.begin(), doc.sections.end(), [](const Section& s) {
    return s.kind == SectionKind::kAbstract;
  });
  if (abstract_it != doc.sections.end() && !abstract_it->body.empty()) {
    doc.abstract_span = abstract_it->body_span;
  } else {
    if (abstract_it != doc.sections.end()) {
      doc.warnings.push_back("abstract heading has an empty body");
    }
    const Section* source = nullptr;
    for (const auto& s : doc.sections) {
      if (s.kind == SectionKind::kBody && !s.body.empty()) {
        source = &s;
        break;
      }
    }
    if (source == nullptr) {
      for (const auto& s : doc.sections) {
        if (!s.body.empty()) {
          source = &s;
          break;
        }
      }
    }
    if (source != nullptr) {
      doc.abstract_span = first_paragraph(text, source->body_span);
      doc.abstract_inferred = true;
      doc.warnings.push_back("no abstract heading; using the first paragraph as the abstract");
    }
  }
  doc.abstract = std::string(text.substr(doc.abstract_span.begin, doc.abstract_span.size()));
  return doc;
}

std::vector<Chunk> chunk_for_budget(const PaperDocument& doc, std::size_t budget_tokens,
                                    std::size_t reserve_tokens, std::size_t token_divisor) {
  if (token_divisor == 0) throw Error(ErrorCode::kInvalidArgument, "token divisor must be positive");
  if (budget_tokens <= reserve_tokens) {
    throw Error(ErrorCode::kBudgetTooSmall, "budget " + std::to_string(budget_tokens) +
                                                " does not exceed reserve " +
                                                std::to_string(reserve_tokens));
  }
  const std::size_t usable = budget_tokens - reserve_tokens;
  const std::string_view raw = doc.raw_text;
  const auto tokens_for = [token_divisor](std::size_t cps) {
    return (cps + token_divisor - 1) / token_divisor;
  };

  struct Piece {
    std::size_t section = 0;
    Span span;
  };
  std::vector<Chunk> chunks;
  std::vector<Piece> pieces;
  std::size_t cps = 0;

  const auto cost_of_adding = [&](const Piece& p) {
    if (pieces.empty()) return detail::code_points(raw.substr(p.span.begin, p.span.size()));
    const Piece& last = pieces.back();
    if (last.section == p.section) {
      return detail::code_points(raw.substr(last.span.end, p.span.end - last.span.end));
    }
    return 2 + detail::code_points(raw.substr(p.span.begin, p.span.size()));
  };

  const auto flush = [&]() {
    if (pieces.empty()) return;
    Chunk chunk;
    std::size_t i = 0;
    while (i < pieces.size()) {
      std::size_t j = i;
      while (j + 1 < pieces.size() && pieces[j + 1].section == pieces[i].section) ++j;
      if (!chunk.text.empty()) chunk.text += "\n\n";
      chunk.text += raw.substr(pieces[i].span.begin, pieces[j].span.end - pieces[i].span.begin);
      const std::string& heading = doc.sections[pieces[i].section].heading;
      if (!heading.empty()) chunk.section_headings_covered.push_back(heading);
      i = j + 1;
    }
    chunk.token_estimate = estimate_tokens(chunk.text, token_divisor);
    chunks.push_back(std::move(chunk));
    pieces.clear();
    cps = 0;
  };

  const auto add = [&](const Piece& p) {
    const std::size_t extra = cost_of_adding(p);
    if (!pieces.empty() && tokens_for(cps + extra) > usable) {
      flush();
      cps = cost_of_adding(p);
    } else {
      cps += extra;
    }
    pieces.push_back(p);
  };

  for (std::size_t idx = 0; idx < doc.sections.size(); ++idx) {
    const Section& section = doc.sections[idx];
    if (section.kind == SectionKind::kAbstract || section.body.empty()) continue;
    const std::size_t whole = detail::code_points(section.body);
    if (tokens_for(whole) <= usable) {
      add({idx, section.body_span});
      continue;
    }
    for (const Sentence& sentence : section.sentences) {
      if (estimate_tokens(sentence.text, token_divisor) > usable) {
        throw Error(ErrorCode::kBudgetTooSmall,
                    "a sentence of " + std::to_string(estimate_tokens(sentence.text, token_divisor)) +
                        " tokens exceeds the usable budget of " + std::to_string(usable));
      }
      add({idx, sentence.span});
    }
  }
  flush();
  return chunks;
}

}  // namespace autoreview
