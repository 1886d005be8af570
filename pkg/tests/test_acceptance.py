"""Acceptance criteria 1-9, one test each; every test prints a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s`` or ``python3 tests/test_acceptance.py``.
"""

from __future__ import annotations

import subprocess
import sys
import time

import numpy as np
import pytest

from barfill.groups import build_group
from barfill.oracles import all_boundaries
from barfill.selftest import SUITES, dumps

SEED = 0
_RESULTS: dict[str, dict] = {}
_TIMES: dict[str, float] = {}


def _suite(name: str) -> dict:
    if name not in _RESULTS:
        t = time.perf_counter()
        _RESULTS[name] = SUITES[name](SEED)
        _TIMES[name] = time.perf_counter() - t
    return _RESULTS[name]


def _report(number: int, title: str, ok: bool, detail: str) -> None:
    line = f"criterion {number} [{'PASS' if ok else 'FAIL'}] {title}: {detail}"
    capman = _CAPTURE.get("capsys")
    if capman is not None:
        with capman.disabled():
            print("\n" + line)
    else:
        print(line)


_CAPTURE: dict = {}


@pytest.fixture(autouse=True)
def _uncaptured(capsys):
    _CAPTURE["capsys"] = capsys
    yield
    _CAPTURE.pop("capsys", None)


def test_criterion_1_dd_zero():
    r = _suite("dd")
    t = _TIMES["dd"]
    ok = r["passed"] and r["chains"] == 10_000 and r["failure_count"] == 0 and t < 60
    _report(1, "d o d = 0", ok, f"{r['chains']} chains, per degree {r['per_degree']}, "
            f"{r['failure_count']} failures, {t:.1f}s (limit 60s)")
    assert ok


def test_criterion_2_homology_oracles():
    r = _suite("homology")
    t = _TIMES["homology"]
    mism = [x for x in r["h1"] if x["pipeline"] != x["oracle"]]
    ok = r["passed"] and not mism and t < 120
    _report(2, "homology oracle battery", ok,
            f"cyclic dims {[x['dims'] for x in r['cyclic']]}, {len(r['h1'])} H1 checks "
            f"({len(mism)} mismatches), Kunneth {[(x['product'], x['kunneth']) for x in r['kunneth']]}"
            f", {t:.1f}s (limit 120s)")
    assert ok


def test_criterion_3_filler_vs_bruteforce():
    r = _suite("filler_oracle")
    t = _TIMES["filler_oracle"]
    full = all(c["checked"] == c["boundaries"] for c in r["configs"])
    ok = r["passed"] and full and r["instances"] >= 500 and t < 300
    _report(3, "filler solver vs enumeration", ok,
            f"{r['instances']} boundaries over {len(r['configs'])} configs, all checked: {full}, "
            f"{len(r['mismatches'])} mismatches, {t:.1f}s (limit 300s)")
    assert ok


def test_criterion_4_isop_micro():
    r = _suite("isop_micro")
    Z2 = build_group("cyclic:2")
    # hand value B_1 = {0, <e>}: the enumerated boundary set must be exactly that
    hand = all_boundaries(Z2, 1, 2) == {np.array([0, 0]).tobytes(), np.array([1, 0]).tobytes()}
    vals = {int(k): v for k, v in r["isop"].items()}
    ok = r["passed"] and vals == {1: 1, 2: 0} and hand
    _report(4, "isop micro-values", ok, f"isop(1), isop(2) = {vals[1]}, {vals[2]}; "
            f"enumeration oracle {r['oracle']}; B1 = {{0, <e>}}: {hand}")
    assert ok


def test_criterion_5_sentences():
    r = _suite("sentences")
    bad = [x for x in r["psi"] if not x["holds"]]
    ok = (r["passed"] and r["phi_1_K1_1"] and not r["phi_1_1_0"] and not bad
          and {x["K"] for x in r["psi"]} == {1, 2})
    groups = sorted({x["group"] for x in r["psi"]})
    _report(5, "Phi and Psi checks", ok,
            f"K1={r['K1']}, Phi_(1,K1,1)={r['phi_1_K1_1']}, Phi_(1,1,0)={r['phi_1_1_0']}; "
            f"Psi held in {len(r['psi']) - len(bad)}/{len(r['psi'])} cases over {len(groups)} "
            f"groups, {len(r['psi_skipped'])} beyond the census cap: "
            f"{[(s['group'], s['l'], s['K']) for s in r['psi_skipped']]}")
    assert ok


def test_criterion_6_torus():
    r = _suite("torus")
    t = _TIMES["torus"]
    cases = {(c["group"], c["l"]) for c in r["cases"]}
    want = {("gl:2:3", 2), ("gl:2:4", 3), ("gl:2:5", 2), ("gl:2:5", 3)}
    bad = [c for c in r["cases"] if c["prime_to_l"] and not c["surjective"]]
    ok = r["passed"] and cases == want and not bad and t < 600
    _report(6, "torus surjection", ok,
            "; ".join(f"{c['group']} l={c['l']} index {c['index']} prime={c['prime_to_l']} "
                      f"surj={c['surjective']}" for c in r["cases"])
            + f"; {len(bad)} inconsistencies, {t:.1f}s (limit 600s)")
    assert ok


def test_criterion_7_metric():
    r = _suite("metric")
    ok = (r["passed"] and r["triangle"] >= 200 and r["subadditivity"] >= 200
          and r["violation_count"] == 0)
    _report(7, "metric axioms", ok, f"{r['triangle']} triangle, {r['subadditivity']} "
            f"subadditivity instances, {r['violation_count']} violations")
    assert ok


def test_criterion_8_family_round_trip():
    r = _suite("family")
    ok = r["passed"] and r["round_trips"] == r["chains"] == 100 and len(r["members"]) == 5
    _report(8, "family round trip", ok, f"{r['round_trips']}/{r['chains']} chains over "
            f"torus:1 members q={r['members']}")
    assert ok


def test_criterion_9_determinism():
    names = [n for n in SUITES if n != "determinism"]
    first = {n: dumps(_suite(n)) for n in names}
    code = ("import sys; from barfill.selftest import SUITES, dumps\n"
            f"for n in {names!r}:\n"
            f"    sys.stdout.write(dumps(SUITES[n]({SEED})) + '\\n')\n")
    p = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True, check=True)
    second = dict(zip(names, p.stdout.splitlines()))
    same = [n for n in names if first[n] == second.get(n)]
    inner = _suite("determinism")
    ok = len(same) == len(names) and inner["passed"]
    _report(9, "determinism", ok, f"{len(same)}/{len(names)} suites byte-identical across "
            f"two processes (seed {SEED}); in-process double run identical: {inner['identical']}")
    assert ok


if __name__ == "__main__":
    failed = 0
    for name, fn in list(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                failed += 1
    sys.exit(1 if failed else 0)
