"""Acceptance gate: criteria 1-12, one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py -s`` to see the lines inline; they
are also repeated in the terminal summary.
"""

from __future__ import annotations

import json
import subprocess
import sys
import time

import pytest

from adjoint_sections.correspond import e7_quadruple_evidence
from adjoint_sections.intlat import IntMatrix
from adjoint_sections.registry import Settings, run_lemma
from adjoint_sections.reps import classify_minuscule
from adjoint_sections.rootsys import all_types, build_root_system, cartan_matrix, center_order
from adjoint_sections.sections import (
    build_kostant_slice,
    build_steinberg_slice,
    kostant_steinberg_link,
    parse_algebra,
    verify_section_group,
    verify_section_lie,
)
from adjoint_sections.weyl import check_transitivity, minuscule_orbit

ALL = all_types()
SETTINGS = Settings()


class Clock:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.seconds = time.perf_counter() - self.t0


def label(t):
    return f"{t[0]}{t[1]}"


def test_criterion_1_minuscule_census(criterion):
    with Clock() as c:
        bad = [label(t) for t in ALL if classify_minuscule(build_root_system(*t)).count != IntMatrix(cartan_matrix(*t)).det() - 1]
    ok = not bad and c.seconds < 1
    assert criterion(1, ok, f"minuscule count = det(Cartan) - 1 for {len(ALL)} types, mismatches {bad}, {c.seconds:.2f}s")


def test_criterion_2_e6_geometry(criterion):
    with Clock() as c:
        e6 = build_root_system("E", 6)
        size = len(minuscule_orbit(e6, 1))
        rep = check_transitivity(e6, "e6_weights_meeting_varpi")
    ok = size == 27 and rep.total_count == 10 and rep.transitive and c.seconds < 5
    assert criterion(2, ok, f"orbit {size}, meeting varpi {rep.total_count}, W0 orbits {rep.orbit_count}, {c.seconds:.2f}s")


def test_criterion_3_e7_geometry(criterion):
    with Clock() as c:
        e7 = build_root_system("E", 7)
        n = len(minuscule_orbit(e7, 7))
        rep = check_transitivity(e7, "e7_proper_quadruples_with_marked")
        ev = e7_quadruple_evidence(e7)
    ok = n == 56 and rep.transitive and ev.contains_three_cycle and ev.full_invariant_rank == 0 and c.seconds < 60
    assert criterion(
        3,
        ok,
        f"{n} weights, {rep.total_count} marked quadruples in {rep.orbit_count} orbit(s), "
        f"3-cycle {ev.contains_three_cycle}, invariant rank {ev.full_invariant_rank}, {c.seconds:.1f}s",
    )


ONE_ORBIT_LITERAL = [("A", 2), ("A", 3), ("A", 4), ("A", 5), ("C", 2), ("C", 3), ("C", 4), ("D", 4), ("F", 4), ("G", 2), ("E", 6), ("E", 7)]


def _triple_reports():
    return {t: check_transitivity(build_root_system(*t), "short_triples_sum_zero") for t in ALL}


@pytest.fixture(scope="module")
def triple_reports():
    with Clock() as c:
        reps = _triple_reports()
    return reps, c.seconds


@pytest.mark.xfail(strict=True, reason="C2 = B2 has no zero-sum short triples, so the literal list is wrong for C2")
def test_criterion_4_literal(criterion, triple_reports):
    reps, secs = triple_reports
    one_orbit = all(reps[t].transitive for t in ONE_ORBIT_LITERAL)
    vacuous = sorted(label(t) for t, r in reps.items() if r.vacuous)
    expected = sorted(label(t) for t in ALL if t == ("A", 1) or t[0] == "B")
    ok = one_orbit and vacuous == expected and secs < 60
    criterion(4, ok, f"literal statement: listed types one orbit {one_orbit}, vacuous {vacuous}")
    assert ok


def test_criterion_4_corrected(criterion, triple_reports):
    reps, secs = triple_reports
    listed = [t for t in ONE_ORBIT_LITERAL if t != ("C", 2)]
    one_orbit = all(reps[t].transitive for t in listed)
    nonvacuous_transitive = all(r.transitive for r in reps.values() if not r.vacuous)
    vacuous = sorted(label(t) for t, r in reps.items() if r.vacuous)
    expected = sorted(label(t) for t in ALL if t in (("A", 1), ("C", 2)) or t[0] == "B")
    ok = one_orbit and nonvacuous_transitive and vacuous == expected and secs < 60
    assert criterion(4, ok, f"corrected statement (vacuous exactly for A1, Bn, C2): one orbit everywhere else, {secs:.1f}s")


def test_criterion_5_kernel_generation(criterion):
    types = [t for t in ALL if t[1] <= 6] + [("E", 7)]
    with Clock() as c:
        bad = [label(t) for t in types if run_lemma("kernel-generation", build_root_system(*t), SETTINGS).status != "pass"]
    ok = not bad and c.seconds < 60
    assert criterion(5, ok, f"index 1 for {len(types)} types, failures {bad}, {c.seconds:.1f}s")


def test_criterion_6_torus_recovery(criterion):
    types = [t for t in ALL if t[1] <= 6]
    with Clock() as c:
        verdicts = [run_lemma("torus-recovery", build_root_system(*t), SETTINGS) for t in types]
    bad = [v.type for v in verdicts if v.status != "pass" or "relation" not in v.witness.get("rejection", {})]
    ok = not bad and all(v.witness["trials"] == 100 for v in verdicts) and c.seconds < 30
    assert criterion(6, ok, f"100 round trips and 1 rejected corruption for {len(types)} types, failures {bad}, {c.seconds:.1f}s")


def test_criterion_7_restriction_sequence(criterion):
    types = [("A", 2), ("B", 2), ("B", 3), ("C", 3), ("G", 2), ("D", 4)]
    with Clock() as c:
        bad = [label(t) for t in types if run_lemma("restriction-sequence", build_root_system(*t), SETTINGS).status != "pass"]
    ok = not bad and c.seconds < 10
    assert criterion(7, ok, f"surjective with kernel <varpi> for {', '.join(map(label, types))}, failures {bad}, {c.seconds:.2f}s")


KOSTANT = ["sl2", "sl3", "sl4", "sl5", "sl6", "sp4", "sp6", "so5", "so7", "so8"]


def test_criterion_8_kostant_slices(criterion):
    with Clock() as c:
        reports = [verify_section_lie(build_kostant_slice(*parse_algebra(a)), samples=50) for a in KOSTANT]
    need = ("complement", "sl2_relations", "regular", "round_trip")
    bad = [r.label for r in reports if not all(r.checks[k] for k in need)]
    ok = not bad and all(r.samples == 50 for r in reports) and c.seconds < 120
    assert criterion(8, ok, f"{len(KOSTANT)} slices x 50 samples, failures {bad}, {c.seconds:.1f}s")


def test_criterion_9_steinberg_slices(criterion):
    with Clock() as c:
        reports = [verify_section_group(build_steinberg_slice(n), samples=100) for n in range(2, 7)]
    need = ("det_one", "charpoly", "cyclic_vector")
    bad = [r.label for r in reports if not all(r.checks[k] for k in need)]
    ok = not bad and c.seconds < 30
    assert criterion(9, ok, f"SL2..SL6 x 100 samples, failures {bad}, {c.seconds:.1f}s")


def test_criterion_10_link(criterion):
    with Clock() as c:
        bad = [n for n in (2, 3, 4) if not kostant_steinberg_link(n).passed]
    ok = not bad and c.seconds < 5
    assert criterion(10, ok, f"exp X = sigma(e) for n = 2, 3, 4, failures {bad}, {c.seconds:.2f}s")


@pytest.fixture(scope="module")
def report_runs():
    """The default-seed report over every type, produced twice by the CLI."""
    argv = [sys.executable, "-m", "adjoint_sections", "report", "--type", "all"]
    runs = [subprocess.run(argv, capture_output=True) for _ in range(2)]
    return runs


EVIDENCE_ALWAYS = {
    "minuscule-census",
    "quasi-minuscule-weights",
    "short-triple-transitivity",
    "kernel-generation",
    "torus-recovery",
}
EVIDENCE_BY_TYPE = {
    "E6": {"e6-weights-meeting-varpi", "e6-triple-marked-transitivity", "e6-triple-stabilizer-invariants"},
    "E7": {"e7-quadruple-transitivity", "e7-quadruple-stabilizer", "e7-quadruple-e6-bijection"},
}


def test_criterion_11_h0_table(criterion, report_runs):
    run = report_runs[0]
    doc = json.loads(run.stdout)
    problems = []
    for row, t in zip(doc["rows"], ALL):
        z = center_order(*t)
        if row["type"] != label(t) or row["center_order"] != z:
            problems.append(row["type"])
            continue
        ans = row["answers"]
        if (ans["cuspidal"]["torsion_order"], ans["cuspidal"]["free_rank"]) != (z, 0):
            problems.append(row["type"])
        if (ans["nodal"]["torsion_order"], ans["nodal"]["free_rank"]) != (z, 1):
            problems.append(row["type"])
        ids = {v["lemma"] for v in row["evidence"]}
        need = EVIDENCE_ALWAYS | EVIDENCE_BY_TYPE.get(row["type"], set())
        if t != ("A", 1):
            need = need | {"restriction-sequence"}
        if not need <= ids or not row["supported"]:
            problems.append(row["type"])
        if any(v["status"] not in ("pass", "vacuous", "skipped") for v in row["evidence"]):
            problems.append(row["type"])
    caveat = "NOT verified" in doc["caveat"]
    ok = run.returncode == 0 and len(doc["rows"]) == len(ALL) and not problems and caveat
    assert criterion(11, ok, f"{len(doc['rows'])} rows match torsion #Z(G) with free rank 0/1 and are supported; problems {sorted(set(problems))}; H^1 caveat present {caveat}")


def test_criterion_12_determinism(criterion, report_runs):
    a, b = report_runs
    argv = [sys.executable, "-m", "adjoint_sections", "classify"]
    c1, c2 = (subprocess.run(argv, capture_output=True).stdout for _ in range(2))
    ok = a.returncode == b.returncode == 0 and a.stdout == b.stdout and len(a.stdout) > 0 and c1 == c2
    assert criterion(12, ok, f"two default-seed report runs byte-identical ({len(a.stdout)} bytes), classify identical {c1 == c2}")
