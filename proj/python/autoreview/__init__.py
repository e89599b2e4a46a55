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
"""Python bindings for the autoreview toolkit.

Structured results (reviews, validation reports, attempt logs and
transformation records) come back as plain dictionaries using the same field
names as the JSON files the command line tool writes.
"""

import json

from ._core import (
    AutoreviewError,
    Chunk,
    PaperDocument,
    Section,
    Sentence,
    Span,
    SummaryStat,
    apply_missing_rule,
    chunk_for_budget,
    estimate_tokens,
    load_document,
    mean_ci,
    paper_seed,
    recall_ci,
    run_cli,
)
from . import _core

__all__ = [
    "AutoreviewError",
    "Chunk",
    "PaperDocument",
    "Section",
    "Sentence",
    "Span",
    "SummaryStat",
    "apply_missing_rule",
    "chunk_for_budget",
    "estimate_tokens",
    "generate_review",
    "load_document",
    "mean_ci",
    "paper_seed",
    "parse_review",
    "recall_ci",
    "render_review",
    "run_cli",
    "transform",
]


def _script_text(script):
    return script if isinstance(script, str) else json.dumps(script)


def parse_review(text, required=None):
    """Return ``(review, report)`` dictionaries for a review text."""
    out = json.loads(_core.parse_review_json(text, required))
    return out["review"], out["report"]


def render_review(review, required=None):
    """Canonical text of a review dictionary as returned by parse_review."""
    return _core.render_review_json(json.dumps(review), required)


def generate_review(document, mock_script, regime="gpt4-8k", max_attempts=10):
    """Run the three-stage pipeline against a scripted mock backend.

    ``mock_script`` is the script as JSON text or as the equivalent list/dict.
    When every attempt fails the result carries ``error`` and the attempt log
    instead of a review.
    """
    return json.loads(_core.generate_review_json(document, _script_text(mock_script), regime, max_attempts))


def transform(document, kind, mock_script, seed=0):
    """Apply an ``abstract-swap`` or ``informal`` attack using a mock rewrite."""
    return json.loads(_core.transform_json(document, kind, _script_text(mock_script), seed))
