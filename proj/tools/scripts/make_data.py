#!/usr/bin/env python3
# Copyright 2026 The ISEC Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Regenerates the bundled data files under data/.

  qwerty.json          QWERTY neighbor substitutions (cost-config shape)
  case3_config.json    cost config for the ISO-1832 catalog run
  iso1832_catalog.csv  1,000 synthetic indexable-insert codes
"""
import csv
import json
import random
from pathlib import Path

DATA = Path(__file__).resolve().parents[2] / "data"
ADJACENT_COST = 0.5

ROWS = ["1234567890", "qwertyuiop", "asdfghjkl", "zxcvbnm"]


def qwerty_pairs():
    pos = {c: (r, i) for r, row in enumerate(ROWS) for i, c in enumerate(row)}
    pairs = set()
    for c, (r, i) in pos.items():
        for d, (r2, i2) in pos.items():
            if c >= d:
                continue
            if r == r2 and abs(i - i2) == 1:
                pairs.add((c, d))
            # Each row sits half a key to the right of the row above it.
            elif abs(r - r2) == 1:
                upper, lower = ((r, i), (r2, i2)) if r < r2 else ((r2, i2), (r, i))
                if lower[1] in (upper[1] - 1, upper[1]):
                    pairs.add((c, d))
    out = set()
    for a, b in pairs:
        out.add((a, b))
        if a.isalpha() or b.isalpha():
            out.add((a.upper(), b.upper()))
    return sorted(out)


def substitutions(cost):
    return [{"from": a, "to": b, "cost": cost} for a, b in qwerty_pairs()]


SHAPE = "ABCDEHKLMOPRSTVW"
CLEARANCE = "ABCDEFGNP"
TOLERANCE = "ACEFGHJKLMNU"
TYPE = "ABCFGHJMNQRTUWX"
SIZE = ["06", "08", "09", "11", "12", "15", "16", "19", "22", "25", "27", "32"]
THICKNESS = ["01", "02", "03", "04", "05", "06", "07", "09"]
RADIUS = ["00", "01", "02", "04", "08", "12", "16", "24"]
INJECTED = ["AAGX110216", "AGAX110216"]


def iso_codes(n, seed):
    rng = random.Random(seed)
    codes = set(INJECTED)
    while len(codes) < n:
        codes.add(rng.choice(SHAPE) + rng.choice(CLEARANCE) + rng.choice(TOLERANCE) + rng.choice(TYPE)
                  + rng.choice(SIZE) + rng.choice(THICKNESS) + rng.choice(RADIUS))
    return sorted(codes)


def main():
    DATA.mkdir(exist_ok=True)
    (DATA / "qwerty.json").write_text(json.dumps(
        {"symmetric_subs": True, "substitutions": substitutions(ADJACENT_COST)}, indent=1) + "\n")
    (DATA / "case3_config.json").write_text(json.dumps(
        {"default_cost": 1.0, "k": 1.0, "alpha": 0.4, "symmetric_subs": True,
         "substitutions": substitutions(ADJACENT_COST)}, indent=1) + "\n")
    with open(DATA / "iso1832_catalog.csv", "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["code"])
        for code in iso_codes(1000, 1832):
            w.writerow([code])


if __name__ == "__main__":
    main()
