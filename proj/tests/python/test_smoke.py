# Copyright 2026 The Autoreview Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import json
import pathlib

import pytest

import autoreview

FIXTURES = pathlib.Path(__file__).resolve().parent.parent / "fixtures"

VALID_REVIEW = "\n\n".join([
    "1. Summary and contributions: A new method.",
    "2. Strengths: Simple.",
    "3. Weaknesses: The results contradict the abstract.",
    "4. Correctness: Fine.",
    "5. Clarity: Clear.",
    "6. Relation to prior work: Adequate.",
    "7. Reproducibility: Yes.",
    "8. Additional feedback: None.",
    "9. Overall score: 6",
    "10. Confidence score: 3",
    "11. Broader impact: Yes, discussed.",
])


def script(*reviews, swap="We show the method never works.", informal="lol this part is kinda wild tbh ok."):
    entries = [
        {"match": "contains", "key": "bullet notes to assist", "response": "- notes"},
        {"match": "contains", "key": "summarize the following notes", "response": "- synthesis"},
        {"match": "contains", "key": "negate a key claim", "response": swap},
        {"match": "contains", "key": "unprofessional for a conference paper", "response": informal},
    ]
    entries += [{"match": "contains", "key": "Please make your review", "response": r} for r in reviews]
    return entries


@pytest.fixture
def paper():
    return autoreview.load_document((FIXTURES / "paper_sample.txt").read_text(), source_id="sample")


def test_load_document(paper):
    assert paper.source_id == "sample"
    assert paper.abstract
    assert any(s.kind == "body" for s in paper.sections)
    assert paper.decision_label == "unknown"
    for section in paper.sections:
        for sentence in section.sentences:
            assert paper.raw_text[sentence.span.begin:sentence.span.end] == sentence.text


def test_empty_document_raises_with_code():
    with pytest.raises(autoreview.AutoreviewError) as info:
        autoreview.load_document("   \n ")
    assert info.value.code == "EmptyDocument"


def test_chunks_respect_budget(paper):
    chunks = autoreview.chunk_for_budget(paper, 200, 50)
    assert chunks
    assert all(c.token_estimate <= 150 for c in chunks)


def test_parse_samples():
    review, report = autoreview.parse_review((FIXTURES / "review_example_1.txt").read_text())
    assert report["valid"]
    assert (review["overall_score"], review["confidence_score"]) == (5, 3)
    _, report = autoreview.parse_review((FIXTURES / "review_example_3.txt").read_text())
    assert not report["valid"]
    assert {"overall", "confidence"} <= set(report["missing_items"])


def test_render_round_trip():
    review, report = autoreview.parse_review(VALID_REVIEW)
    assert report["valid"]
    again, _ = autoreview.parse_review(autoreview.render_review(review))
    assert again == review


def test_recall_table_cells():
    expected = {14: "0.70 ± 0.21", 12: "0.60 ± 0.22", 7: "0.35 ± 0.21", 1: "0.05 ± 0.10"}
    for k, display in expected.items():
        stat = autoreview.recall_ci([True] * k + [False] * (20 - k))
        assert stat.display == display
        assert stat.n == 20
    assert autoreview.mean_ci([1, 2, 3, 4, 5]).ci_half_width == pytest.approx(1.3859292911256331, abs=1e-12)


def test_missing_rule():
    ratings = [(f"p{i}", "gpt", 4) for i in range(10) if i != 3]
    expected = [(f"p{i}", "gpt") for i in range(10)]
    filled = autoreview.apply_missing_rule(ratings, expected)
    assert len(filled) == 10
    assert ("p3", "gpt", 1) in filled


def test_generate_review_retries(paper):
    out = autoreview.generate_review(paper, script("not a review", "still not", VALID_REVIEW))
    assert out["log"]["attempts"] == 3
    assert out["report"]["valid"]
    failed = autoreview.generate_review(paper, script("nope"), max_attempts=2)
    assert failed["log"]["attempts"] == 2
    assert "error" in failed


def test_transform_is_local(paper):
    out = autoreview.transform(paper, "informal", script(), seed=autoreview.paper_seed(3, "sample"))
    record = out["record"]
    begin, end = record["span"]["begin"], record["span"]["end"]
    tail = len(paper.raw_text) - end
    assert out["raw_text"][:begin] == paper.raw_text[:begin]
    assert out["raw_text"][len(out["raw_text"]) - tail:] == paper.raw_text[end:]
    assert record["kind"] == "informal"


def test_bad_script_is_value_or_autoreview_error(paper):
    with pytest.raises(autoreview.AutoreviewError):
        autoreview.generate_review(paper, [])


def test_run_cli(tmp_path):
    code, out, _ = autoreview.run_cli(["validate", "--review", str(FIXTURES / "review_example_2.txt")])
    assert code == 0
    assert json.loads(out)["valid"]
    code, _, _ = autoreview.run_cli(["validate", "--review", str(FIXTURES / "review_example_3.txt")])
    assert code == 1
    code, out, _ = autoreview.run_cli(["stats", "summarize", "--worksheet", str(FIXTURES / "robustness_worksheet.csv")])
    assert code == 0
    assert "0.35 ± 0.21" in out
