#!/usr/bin/env python3
# Copyright 2026 The qmut Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Brute-force mutant enumeration for the directed operators.

Builds each ansatz as nested lists (layer -> block -> gate), lists every
mutant descriptor explicitly and counts them. Shares no code with the C++
engine. Output: tests/data/operator_counts.json.
"""

import itertools
import json
import pathlib
import sys

ROT = "rotation"
ENT = "entangle"
APC_CHANGES = ["zero", "signflip"] + [("add", d) for d in ("-pi", "-pi/2", "pi/2", "pi")] + [
    ("scale", s) for s in (0.5, 2.0)]
APGC = {"ry": ["rz"], "rx": ["rz"], "rz": ["rx", "ry"]}


def ra(n, reps):
    layers = []
    for _ in range(reps):
        layers.append([(ROT, [("ry", (q,)) for q in range(n)]),
                       (ENT, [("cx", (q, q + 1)) for q in range(n - 1)])])
    layers.append([(ROT, [("ry", (q,)) for q in range(n)])])
    return layers


def su2(n, reps):
    layers = []
    for _ in range(reps):
        layers.append([(ROT, [("ry", (q,)) for q in range(n)]),
                       (ROT, [("rz", (q,)) for q in range(n)]),
                       (ENT, [("cx", (q, q + 1)) for q in range(n - 1)])])
    layers.append([(ROT, [("ry", (q,)) for q in range(n)]),
                   (ROT, [("rz", (q,)) for q in range(n)])])
    return layers


def qcnn(n):
    layers = []
    active = list(range(n))
    while len(active) > 1:
        conv = []
        for a, b in zip(active, active[1:]):
            conv += [(ROT, [("ry", (a,)), ("ry", (b,))]), (ENT, [("cx", (a, b))]),
                     (ROT, [("ry", (a,)), ("ry", (b,))])]
        layers.append(conv)
        half = len(active) // 2
        layers.append([(ROT, [("cry", (active[i], active[i + half]))]) for i in range(half)])
        active = active[half:]
    return layers


def parameterized(kind):
    return kind in ("rx", "ry", "rz", "cry")


def enumerate_mutants(layers):
    out = {k: [] for k in ("APC", "APGC", "LS", "ILS", "ALA", "ALD")}
    for li, layer in enumerate(layers):
        if any(parameterized(g[0]) for _, gates in layer for g in gates):
            for change in APC_CHANGES:
                out["APC"].append((li, change))
        for bi, (_, gates) in enumerate(layer):
            for gi, (kind, _) in enumerate(gates):
                for to in APGC.get(kind, []):
                    out["APGC"].append((li, bi, gi, to))
        for bi in range(len(layer) - 1):
            if layer[bi] != layer[bi + 1]:
                order = list(range(len(layer)))
                order[bi], order[bi + 1] = order[bi + 1], order[bi]
                out["ILS"].append((li, tuple(order)))
        for init in ("random", "copy"):
            out["ALA"].append((li, init))
        roles = {role for role, _ in layer}
        for target, needed in (("full", {ROT, ENT}), ("rot", {ROT}), ("ent", {ENT})):
            if roles & needed:
                out["ALD"].append((li, target))
    for i, j in itertools.combinations(range(len(layers)), 2):
        out["LS"].append((i, j))
    return {k: len(v) for k, v in out.items()}


def dfc_tabular(num_features):
    ops = [("add", "pi/2"), ("add", "pi"), ("mul", 0.5), ("mul", 2.0), "signflip", "oneminus"]
    return sum(1 for _ in range(num_features - 1) for _ in itertools.product(ops, ops))


def main():
    records = []
    for name, build in (("RA", ra), ("SU2", su2)):
        for n in (2, 4, 8):
            for reps in (1, 2, 3):
                records.append({"ansatz": name, "qubits": n, "reps": reps,
                                "counts": enumerate_mutants(build(n, reps))})
    for n in (2, 4, 8):
        records.append({"ansatz": "QCNN", "qubits": n, "reps": 1,
                        "counts": enumerate_mutants(qcnn(n))})
    doc = {"directed": records, "dfc_tabular": {str(f): dfc_tabular(f) for f in (2, 4, 8)}}
    out = pathlib.Path(sys.argv[1]) if len(sys.argv) > 1 else (
        pathlib.Path(__file__).resolve().parent.parent / "data" / "operator_counts.json")
    out.write_text(json.dumps(doc, indent=1) + "\n")


if __name__ == "__main__":
    main()
