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
"""Independent check of the recall interval formula.

The half-width z * s / sqrt(n) is computed here with exact rational
arithmetic for the variance, then compared against the detection table
printed by ``autoreview stats summarize``.

usage: ci_formula_oracle.py AUTOREVIEW_BINARY WORKSHEET_CSV
"""

import csv
import json
import math
import subprocess
import sys
from decimal import ROUND_HALF_UP, Decimal
from fractions import Fraction

Z = 1.96
TABLE = {
    ("GPT4-4k", "abstract-swap"): (14, "0.70", "0.21"),
    ("GPT4-4k", "informal"): (12, "0.60", "0.22"),
    ("GPT4-32k", "abstract-swap"): (7, "0.35", "0.21"),
    ("GPT4-32k", "informal"): (1, "0.05", "0.10"),
}


def half_width(values):
    n = len(values)
    mean = Fraction(sum(values), n)
    variance = sum((Fraction(v) - mean) ** 2 for v in values) / (n - 1)
    return Z * math.sqrt(variance) / math.sqrt(n)


def two_places(x):
    return str(Decimal(repr(x)).quantize(Decimal("0.01"), rounding=ROUND_HALF_UP))


def main(binary, worksheet):
    failures = []
    cells = {}
    with open(worksheet, newline="") as fh:
        for row in csv.DictReader(fh):
            model, _, kind = row["reviewer_kind"].partition("/")
            cells.setdefault((model, kind), []).append(int(row["rating"]))

    for key, (successes, mean_txt, hw_txt) in TABLE.items():
        values = cells.get(key, [])
        if sum(values) != successes or len(values) != 20:
            failures.append(f"{key}: worksheet holds {sum(values)}/{len(values)}")
            continue
        hw = half_width(values)
        if two_places(successes / 20) != mean_txt or two_places(hw) != hw_txt:
            failures.append(f"{key}: oracle gives {two_places(successes / 20)} +- {two_places(hw)}")

    out = subprocess.run([binary, "stats", "summarize", "--worksheet", worksheet],
                         check=True, capture_output=True, text=True).stdout
    summary = json.loads(out[: out.index("\n}\n") + 3])
    for cell in summary["detection"]:
        key = (cell["model_label"], cell["attack_kind"])
        if key not in cells:
            continue
        expected = half_width(cells[key])
        got = cell["recall"]["ci_half_width"]
        if abs(got - expected) > 1e-12:
            failures.append(f"{key}: binary half-width {got!r}, oracle {expected!r}")
        print(f"{key[0]:9} {key[1]:14} oracle {expected:.17f} binary {got:.17f}")

    for msg in failures:
        print("FAIL", msg)
    return 1 if failures or len(summary["detection"]) != len(TABLE) else 0


if __name__ == "__main__":
    sys.exit(main(sys.argv[1], sys.argv[2]))
