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

#include <gtest/gtest.h>

#include <random>

#include "autoreview/document.hpp"
#include "autoreview/error.hpp"
#include "test_support.hpp"

namespace autoreview {
namespace {

using testing::random_paper;

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorCode::kInvalidArgument;
}

TEST(LoadDocument, MarkdownHeadingsAndAbstract) {
  const std::string raw =
      "# Title of the Work\n\n## Abstract\n\nWe do a thing. It works well.\n\n## Introduction\n\n"
      "Intro text goes here. More intro.\n\n## References\n\n[1] Someone. 2020.\n";
  const PaperDocument doc = load_document(raw, {InputFormat::kMarkdown, "md", DecisionLabel::kAccepted});
  ASSERT_EQ(doc.sections.size(), 4u);
  EXPECT_EQ(doc.sections[0].kind, SectionKind::kBody);
  EXPECT_EQ(doc.sections[1].kind, SectionKind::kAbstract);
  EXPECT_EQ(doc.sections[2].heading, "Introduction");
  EXPECT_EQ(doc.sections[3].kind, SectionKind::kReferences);
  EXPECT_EQ(doc.abstract, "We do a thing. It works well.");
  EXPECT_FALSE(doc.abstract_inferred);
  EXPECT_EQ(doc.raw_text.substr(doc.abstract_span.begin, doc.abstract_span.size()), doc.abstract);
  EXPECT_EQ(doc.decision_label, DecisionLabel::kAccepted);
  EXPECT_EQ(doc.source_id, "md");
}

TEST(LoadDocument, LatexSectionsAndAbstractEnvironment) {
  const std::string raw =
      "\\documentclass{article}\n\\begin{document}\n\\begin{abstract}\nShort abstract here. It has two "
      "sentences.\n\\end{abstract}\n\\section{Introduction}\nBody of the introduction. Another sentence.\n"
      "\\subsection*{Details}\nMore details are given here.\n";
  const PaperDocument doc = load_document(raw, {InputFormat::kLatex, "tex", {}});
  EXPECT_EQ(doc.abstract, "Short abstract here. It has two sentences.");
  std::vector<std::string> headings;
  for (const auto& s : doc.sections) headings.push_back(s.heading);
  EXPECT_NE(std::find(headings.begin(), headings.end(), "Introduction"), headings.end());
  EXPECT_NE(std::find(headings.begin(), headings.end(), "Details"), headings.end());
  EXPECT_EQ(doc.sections.front().kind, SectionKind::kPreamble);
}

TEST(LoadDocument, PlainNumberedHeadings) {
  const PaperDocument doc = load_document(
      "Abstract\n\nThis is the abstract. It is short.\n\n1. Introduction\n\nHere is text. And more text.\n\n"
      "2. Method\n\nWe use a method. It is described here.\n");
  ASSERT_EQ(doc.sections.size(), 3u);
  EXPECT_EQ(doc.sections[1].heading, "1. Introduction");
  EXPECT_EQ(doc.sections[2].heading, "2. Method");
  EXPECT_EQ(doc.sections[2].body, "We use a method. It is described here.");
}

TEST(LoadDocument, NumberedListItemIsNotAHeading) {
  const PaperDocument doc = load_document(
      "Abstract\n\nAn abstract sentence. Another one.\n\nIntroduction\n\nWe list steps:\n"
      "1. First we gather data, then we train.\n2. Second we evaluate on held-out data.\n");
  ASSERT_EQ(doc.sections.size(), 2u);
  EXPECT_NE(doc.sections[1].body.find("1. First we gather"), std::string::npos);
}

TEST(LoadDocument, AbstractInferredFromFirstParagraph) {
  const PaperDocument doc = load_document(
      "Introduction\n\nFirst paragraph sentence one. Sentence two.\n\nSecond paragraph here. Done.\n");
  EXPECT_TRUE(doc.abstract_inferred);
  EXPECT_EQ(doc.abstract, "First paragraph sentence one. Sentence two.");
  EXPECT_FALSE(doc.warnings.empty());
}

TEST(LoadDocument, HeadinglessTextWithEnoughSentencesIsOneSection) {
  const PaperDocument doc = load_document("One sentence here. Two sentences here. Three sentences here.");
  ASSERT_EQ(doc.sections.size(), 1u);
  EXPECT_TRUE(doc.abstract_inferred);
}

TEST(LoadDocument, Errors) {
  EXPECT_EQ(code_of([] { load_document("  \n\t \n"); }), ErrorCode::kEmptyDocument);
  EXPECT_EQ(code_of([] { load_document("Just two sentences. Nothing else."); }),
            ErrorCode::kUnrecognizedStructure);
}

TEST(LoadDocument, SpansPointIntoRawText) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 50; ++i) {
    const PaperDocument doc = load_document(random_paper(rng, 1 + i % 5));
    for (const Section& s : doc.sections) {
      EXPECT_TRUE(s.span.contains(s.body_span));
      EXPECT_EQ(doc.raw_text.substr(s.body_span.begin, s.body_span.size()), s.body);
      for (const Sentence& sentence : s.sentences) {
        EXPECT_TRUE(s.body_span.contains(sentence.span));
        EXPECT_EQ(doc.raw_text.substr(sentence.span.begin, sentence.span.size()), sentence.text);
      }
    }
    for (std::size_t k = 1; k < doc.sections.size(); ++k) {
      EXPECT_LE(doc.sections[k - 1].span.end, doc.sections[k].span.begin);
    }
  }
}

TEST(LoadDocument, Deterministic) {
  std::mt19937_64 rng(3);
  const std::string raw = random_paper(rng, 4);
  const PaperDocument a = load_document(raw);
  const PaperDocument b = load_document(raw);
  ASSERT_EQ(a.sections.size(), b.sections.size());
  for (std::size_t i = 0; i < a.sections.size(); ++i) {
    EXPECT_EQ(a.sections[i].span, b.sections[i].span);
    EXPECT_EQ(a.sections[i].body, b.sections[i].body);
  }
}

TEST(SplitSentences, AbbreviationsAndPunctuation) {
  const auto s = split_sentences("We follow Smith et al. in this work. See Fig. 2 for details! Is it good? Yes.");
  ASSERT_EQ(s.size(), 4u);
  EXPECT_EQ(s[0].text, "We follow Smith et al. in this work.");
  EXPECT_EQ(s[1].text, "See Fig. 2 for details!");
  EXPECT_EQ(s[2].text, "Is it good?");
  EXPECT_EQ(s[3].text, "Yes.");
}

TEST(SplitSentences, NoSplitBeforeLowercaseOrDecimal) {
  EXPECT_EQ(split_sentences("The value is 3.5 in total. it continues here.").size(), 1u);
  EXPECT_EQ(split_sentences("He said \"stop.\" Then he left.").size(), 2u);
}

TEST(SplitSentences, BlankLinesSeparate) {
  const auto s = split_sentences("A heading without a period\n\nThe next paragraph starts here.");
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0].text, "A heading without a period");
}

TEST(SplitSentences, RoundTripProperty) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    const std::string body = testing::random_paragraph(rng, 1 + i % 6);
    const auto sentences = split_sentences(body);
    std::string joined;
    for (const auto& s : sentences) {
      EXPECT_EQ(body.substr(s.span.begin, s.span.size()), s.text);
      if (!joined.empty()) joined += ' ';
      joined += s.text;
    }
    EXPECT_EQ(normalize_whitespace(joined), normalize_whitespace(body));
  }
}

TEST(EstimateTokens, CeilOfCodePoints) {
  EXPECT_EQ(estimate_tokens(""), 0u);
  EXPECT_EQ(estimate_tokens("abcd"), 1u);
  EXPECT_EQ(estimate_tokens("abcde"), 2u);
  EXPECT_EQ(estimate_tokens("\xC3\xA9\xC3\xA9\xC3\xA9\xC3\xA9"), 1u);  // four code points
  EXPECT_EQ(estimate_tokens("abcdef", 3), 2u);
}

std::string chunk_source(const PaperDocument& doc) {
  std::string all;
  for (const auto& s : doc.sections) {
    if (s.kind == SectionKind::kAbstract || s.body.empty()) continue;
    all += s.body + " ";
  }
  return normalize_whitespace(all);
}

TEST(ChunkForBudget, WholeDocumentFitsInOneChunk) {
  std::mt19937_64 rng(5);
  const PaperDocument doc = load_document(random_paper(rng, 3));
  const auto chunks = chunk_for_budget(doc, 100000, 0);
  ASSERT_EQ(chunks.size(), 1u);
  EXPECT_EQ(normalize_whitespace(chunks[0].text), chunk_source(doc));
  EXPECT_EQ(chunks[0].text.find(doc.abstract), std::string::npos);
}

TEST(ChunkForBudget, CoverageAndBudgetProperty) {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 200; ++i) {
    const PaperDocument doc = load_document(random_paper(rng, 1 + i % 6));
    const std::size_t budget = 40 + (rng() % 400);
    const std::size_t reserve = rng() % 10;
    const auto chunks = chunk_for_budget(doc, budget, reserve);
    std::string joined;
    for (const auto& c : chunks) {
      EXPECT_LE(c.token_estimate, budget - reserve);
      EXPECT_EQ(c.token_estimate, estimate_tokens(c.text));
      joined += c.text + " ";
    }
    EXPECT_EQ(normalize_whitespace(joined), chunk_source(doc)) << "document " << i;
  }
}

TEST(ChunkForBudget, OversizedSentenceAndTinyBudget) {
  const PaperDocument doc = load_document(
      "Abstract\n\nShort abstract. Really short.\n\nIntroduction\n\n"
      "This single sentence is considerably longer than the tiny budget we are going to allow here.\n");
  EXPECT_EQ(code_of([&] { chunk_for_budget(doc, 5, 0); }), ErrorCode::kBudgetTooSmall);
  EXPECT_EQ(code_of([&] { chunk_for_budget(doc, 100, 100); }), ErrorCode::kBudgetTooSmall);
}

TEST(ChunkForBudget, Deterministic) {
  std::mt19937_64 rng(23);
  const PaperDocument doc = load_document(random_paper(rng, 5));
  const auto a = chunk_for_budget(doc, 60, 0);
  const auto b = chunk_for_budget(doc, 60, 0);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].text, b[i].text);
}

TEST(Enums, RoundTrip) {
  for (auto f : {InputFormat::kPlain, InputFormat::kLatex, InputFormat::kMarkdown}) {
    EXPECT_EQ(parse_input_format(to_string(f)), f);
  }
  for (auto l : {DecisionLabel::kUnknown, DecisionLabel::kAccepted, DecisionLabel::kRejected}) {
    EXPECT_EQ(parse_decision_label(to_string(l)), l);
  }
  EXPECT_THROW(parse_input_format("pdf"), Error);
}

}  // namespace
}  // namespace autoreview
