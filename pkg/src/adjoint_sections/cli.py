"""Command-line front end: classify, verify, section, report.

Exit codes: 0 when every verdict passes or is vacuous, 1 on any failure,
2 on usage errors (unknown lemma, invalid type, cap exceeded, missing flag).
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Sequence, Tuple

from . import sections
from .registry import (
    DEFAULT_SEED,
    FAIL,
    LEMMAS,
    PASS,
    SKIPPED,
    VACUOUS,
    FlagRequired,
    NotApplicableError,
    Settings,
    UnknownLemmaError,
    Verdict,
    applicable_lemmas,
    run_lemma,
)
from .reps import classify_minuscule, short_simple_root_count
from .rootsys import MAX_RANK, InvalidTypeError, all_types, build_root_system, center_order, center_structure, parse_type
from .weyl import DEFAULT_ORBIT_CAP, OrbitCapExceeded

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

H1_CAVEAT = (
    "H^1 = {1} is NOT verified: it has no finite model in this package. "
    "Only the lattice-level inputs (invariant ranks, kernel generation, transitivity) are checked."
)


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    types: List[Tuple[str, int]] = field(default_factory=list)
    lemmas: List[str] = field(default_factory=list)
    seed: int = DEFAULT_SEED
    trials: int = 100
    orbit_cap: int = DEFAULT_ORBIT_CAP
    max_size: int = sections.MAX_MATRIX_SIZE
    output: Optional[str] = None
    format: str = "json"
    include_e8: bool = False
    timings: bool = False
    curve: str = "both"
    algebra: Optional[str] = None
    steinberg: Optional[int] = None
    link: Optional[int] = None
    samples: int = sections.DEFAULT_SAMPLES
    roots: bool = False

    @property
    def settings(self) -> Settings:
        return Settings(seed=self.seed, trials=self.trials, orbit_cap=self.orbit_cap, include_e8=self.include_e8)


def parse_types(selectors: Sequence[str], max_rank: int = MAX_RANK) -> List[Tuple[str, int]]:
    out = []
    for sel in selectors:
        for part in sel.split(","):
            part = part.strip()
            if not part:
                continue
            if part.lower() == "all":
                out.extend(all_types(max_rank))
            else:
                out.append(parse_type(part))
    if not out:
        raise UsageError("no types selected")
    order = {t: i for i, t in enumerate(all_types())}
    return sorted(set(out), key=lambda t: order.get(t, 0))


# --- commands -------------------------------------------------------------------------


def classify_rows(types: Iterable[Tuple[str, int]]) -> List[dict]:
    rows = []
    for fam, n in types:
        rs = build_root_system(fam, n)
        rep = classify_minuscule(rs)
        z = center_order(fam, n)
        rows.append(
            {
                "type": rs.label,
                "minuscule": list(rep.minuscule),
                "count": rep.count,
                "det_cartan": z,
                "m0": short_simple_root_count(rs),
                "roots": len(rs.roots),
                "short_roots": len(rs.short_roots),
                "pass": rep.count == z - 1,
            }
        )
    return rows


def verify_pairs(cfg: RunConfig) -> List[Tuple[str, Tuple[str, int]]]:
    ids = sorted(LEMMAS) if cfg.lemmas in ([], ["all"]) else sorted(set(cfg.lemmas))
    for l in ids:
        if l not in LEMMAS:
            raise UnknownLemmaError(l)
    pairs = []
    for l in ids:
        for t in cfg.types:
            if LEMMAS[l].applies(build_root_system(*t)):
                pairs.append((l, t))
    if not pairs:
        raise NotApplicableError("no selected lemma applies to the selected types")
    return pairs


def evidence_lemmas(rs) -> Tuple[List[str], dict]:
    """Lemmas attached to an H^0 row, with the reasons for any omissions."""
    ids = applicable_lemmas(rs)
    notes = {}
    if "restriction-sequence" not in ids:
        notes["restriction-sequence"] = "highest short root is divisible in X(H); the lemma's hypothesis fails"
    return ids, notes


def report_h0(types: Iterable[Tuple[str, int]], curve_kind: str = "both", settings: Settings = Settings(), stream=None, timings: bool = False) -> dict:
    """H^0 answers per type: torsion #Z(G) and free rank 0 (cuspidal) or 1 (nodal)."""
    if curve_kind not in ("cuspidal", "nodal", "both"):
        raise UsageError(f"unknown curve kind {curve_kind!r}")
    kinds = ["cuspidal", "nodal"] if curve_kind == "both" else [curve_kind]
    rows = []
    for fam, n in types:
        rs = build_root_system(fam, n)
        z = center_order(fam, n)
        ids, notes = evidence_lemmas(rs)
        evidence = []
        for l in ids:
            try:
                v = run_lemma(l, rs, settings).to_json(timings)
            except FlagRequired as exc:
                v = Verdict(l, rs.label, SKIPPED, {"reason": str(exc)}).to_json()
            evidence.append(v)
            if stream:
                stream(v)
        statuses = [e["status"] for e in evidence]
        row = {
            "type": rs.label,
            "center_order": z,
            "center_structure": list(center_structure(fam, n)),
            "answers": {k: _h0_answer(center_structure(fam, n), k) for k in kinds},
            "evidence": evidence,
            "omitted": notes,
            "supported": all(s in (PASS, VACUOUS, SKIPPED) for s in statuses),
            "skipped": sorted(e["lemma"] for e in evidence if e["status"] == SKIPPED),
        }
        rows.append(row)
    return {"rows": rows, "caveat": H1_CAVEAT}


def _h0_answer(factors: Sequence[int], kind: str) -> dict:
    free = 1 if kind == "nodal" else 0
    z = 1
    for d in factors:
        z *= d
    parts = [f"Z/{d}" for d in factors]
    if free:
        parts.append("Z")
    return {"torsion_order": z, "free_rank": free, "group": " x ".join(parts) or "1"}


def section_result(cfg: RunConfig) -> dict:
    if cfg.algebra:
        fam, rank = sections.parse_algebra(cfg.algebra)
        sl = sections.build_kostant_slice(fam, rank, cfg.max_size)
        return sections.verify_section_lie(sl, cfg.samples, cfg.seed).to_json()
    if cfg.steinberg is not None:
        if cfg.steinberg > cfg.max_size:
            raise sections.SizeCapExceeded(f"n = {cfg.steinberg} exceeds cap {cfg.max_size}")
        st = sections.build_steinberg_slice(cfg.steinberg)
        return sections.verify_section_group(st, cfg.trials, cfg.seed).to_json()
    if cfg.link is not None:
        return sections.kostant_steinberg_link(cfg.link).to_json()
    raise UsageError("section needs --algebra, --steinberg or --link")


# --- rendering ---------------------------------------------------------------------


def _md_verdicts(verdicts: List[dict]) -> str:
    lines = ["| lemma | type | status |", "|---|---|---|"]
    lines += [f"| {v['lemma']} | {v['type']} | {v['status']} |" for v in verdicts]
    return "\n".join(lines) + "\n"


def _md_classify(rows: List[dict]) -> str:
    lines = ["| type | minuscule | count | #Z(G) | m0 | pass |", "|---|---|---|---|---|---|"]
    for r in rows:
        mins = ", ".join(str(i) for i in r["minuscule"]) or "-"
        lines.append(f"| {r['type']} | {mins} | {r['count']} | {r['det_cartan']} | {r['m0']} | {r['pass']} |")
    return "\n".join(lines) + "\n"


def _md_report(rep: dict) -> str:
    kinds = list(rep["rows"][0]["answers"]) if rep["rows"] else []
    head = "| type | #Z(G) | " + " | ".join(kinds) + " | supported |"
    lines = [head, "|" + "---|" * (len(kinds) + 3)]
    for r in rep["rows"]:
        cells = " | ".join(r["answers"][k]["group"] for k in kinds)
        lines.append(f"| {r['type']} | {r['center_order']} | {cells} | {r['supported']} |")
    lines.append("")
    lines.append(f"> {rep['caveat']}")
    return "\n".join(lines) + "\n"


def _md_section(res: dict) -> str:
    lines = [f"**{res['kind']} {res['label']}** (samples {res['samples']}, seed {res['seed']}): pass = {res['pass']}", ""]
    lines += [f"- {k}: {v}" for k, v in res["checks"].items()]
    return "\n".join(lines) + "\n"


def _dump(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"


# --- entry point ------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="adjsec", description="Verify the finite combinatorics behind sections of the adjoint quotient.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--format", choices=("json", "jsonl", "markdown"), default="json")
        sp.add_argument("--output", "-o", help="write to a file instead of stdout")
        sp.add_argument("--seed", type=lambda s: int(s, 0), default=DEFAULT_SEED)
        sp.add_argument("--trials", type=int, default=100)
        sp.add_argument("--orbit-cap", type=int, default=DEFAULT_ORBIT_CAP)
        sp.add_argument("--timings", action="store_true", help="include runtimes (output is then not reproducible)")

    c = sub.add_parser("classify", help="minuscule census per type")
    c.add_argument("--type", action="append", default=[], dest="types")
    c.add_argument("--max-rank", type=int, default=MAX_RANK)
    common(c)

    v = sub.add_parser("verify", help="run lemma checks")
    v.add_argument("--lemma", action="append", default=[], dest="lemmas")
    v.add_argument("--type", action="append", default=[], dest="types")
    v.add_argument("--max-rank", type=int, default=MAX_RANK)
    v.add_argument("--include-e8", action="store_true", help="allow E8 kernel generation (about 30 s)")
    v.add_argument("--list", action="store_true", help="list lemma ids and exit")
    common(v)

    s = sub.add_parser("section", help="build and verify a slice")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--algebra", help="sl2..sl12, sp4.., so5..")
    g.add_argument("--steinberg", type=int, metavar="N")
    g.add_argument("--link", type=int, metavar="N")
    s.add_argument("--samples", type=int, default=sections.DEFAULT_SAMPLES)
    s.add_argument("--max-size", type=int, default=sections.MAX_MATRIX_SIZE)
    common(s)

    r = sub.add_parser("report", help="H^0 table with supporting evidence")
    r.add_argument("--type", action="append", default=[], dest="types")
    r.add_argument("--max-rank", type=int, default=MAX_RANK)
    r.add_argument("--curve", choices=("cuspidal", "nodal", "both"), default="both")
    r.add_argument("--include-e8", action="store_true")
    r.add_argument("--roots", action="store_true", help="dump root system data instead")
    common(r)
    return p


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(
        command=ns.command,
        seed=ns.seed,
        trials=ns.trials,
        orbit_cap=ns.orbit_cap,
        output=ns.output,
        format=ns.format,
        timings=ns.timings,
    )
    if ns.trials <= 0:
        raise UsageError("--trials must be positive")
    if ns.command in ("classify", "verify", "report"):
        cfg.types = parse_types(ns.types or ["all"], ns.max_rank)
    if ns.command == "verify":
        cfg.lemmas = ns.lemmas
        cfg.include_e8 = ns.include_e8
    if ns.command == "report":
        cfg.curve = ns.curve
        cfg.include_e8 = ns.include_e8
        cfg.roots = ns.roots
    if ns.command == "section":
        cfg.algebra, cfg.steinberg, cfg.link = ns.algebra, ns.steinberg, ns.link
        cfg.samples, cfg.max_size = ns.samples, ns.max_size
    return cfg


def run(cfg: RunConfig, out=None) -> int:
    own = None
    if out is None:
        if cfg.output:
            own = out = open(cfg.output, "w", encoding="utf-8")
        else:
            out = sys.stdout
    try:
        return _run(cfg, out)
    finally:
        if own:
            own.close()


def _emit_line(out, obj) -> None:
    out.write(json.dumps(obj, sort_keys=False) + "\n")
    out.flush()


def _run(cfg: RunConfig, out) -> int:
    fmt = cfg.format
    if cfg.command == "classify":
        rows = classify_rows(cfg.types)
        if fmt == "markdown":
            out.write(_md_classify(rows))
        elif fmt == "jsonl":
            for r in rows:
                _emit_line(out, r)
        else:
            out.write(_dump({"command": "classify", "rows": rows}))
        return EXIT_OK if all(r["pass"] for r in rows) else EXIT_FAIL

    if cfg.command == "verify":
        pairs = verify_pairs(cfg)
        st = cfg.settings
        verdicts = []
        for lemma, t in pairs:
            rs = build_root_system(*t)
            try:
                v = run_lemma(lemma, rs, st).to_json(cfg.timings)
            except FlagRequired as exc:
                # explicit single requests fail loudly; batch runs record the gap
                if len(pairs) == 1:
                    raise
                v = Verdict(lemma, rs.label, SKIPPED, {"reason": str(exc)}).to_json()
            verdicts.append(v)
            if fmt == "jsonl":
                _emit_line(out, v)
        if fmt == "markdown":
            out.write(_md_verdicts(verdicts))
        elif fmt == "json":
            out.write(_dump({"command": "verify", "seed": cfg.seed, "trials": cfg.trials, "verdicts": verdicts}))
        return EXIT_FAIL if any(v["status"] == FAIL for v in verdicts) else EXIT_OK

    if cfg.command == "section":
        res = {"command": "section", **section_result(cfg)}
        if fmt == "markdown":
            out.write(_md_section(res))
        else:
            out.write(_dump(res) if fmt == "json" else json.dumps(res) + "\n")
        return EXIT_OK if res["pass"] else EXIT_FAIL

    if cfg.command == "report":
        if cfg.roots:
            doc = {"command": "report", "root_systems": [build_root_system(*t).to_json() for t in cfg.types]}
            out.write(_dump(doc))
            return EXIT_OK
        stream = (lambda v: _emit_line(out, v)) if fmt == "jsonl" else None
        rep = report_h0(cfg.types, cfg.curve, cfg.settings, stream, cfg.timings)
        if fmt == "markdown":
            out.write(_md_report(rep))
        elif fmt == "json":
            out.write(_dump({"command": "report", "seed": cfg.seed, "trials": cfg.trials, **rep}))
        else:
            _emit_line(out, {"caveat": rep["caveat"], "supported": [r["type"] for r in rep["rows"] if r["supported"]]})
        if fmt != "json":
            sys.stderr.write(H1_CAVEAT + "\n")
        return EXIT_OK if all(r["supported"] for r in rep["rows"]) else EXIT_FAIL
    raise UsageError(f"unknown command {cfg.command!r}")


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    if ns.command == "verify" and ns.list:
        for k in sorted(LEMMAS):
            print(f"{k}\t{LEMMAS[k].description}")
        return EXIT_OK
    try:
        cfg = config_from_args(ns)
        return run(cfg)
    except UnknownLemmaError as exc:
        print(f"error: unknown lemma id {exc.args[0]!r} (see verify --list)", file=sys.stderr)
    except InvalidTypeError as exc:
        print(f"error: invalid type: {exc}", file=sys.stderr)
    except NotApplicableError as exc:
        print(f"error: not applicable: {exc}", file=sys.stderr)
    except OrbitCapExceeded as exc:
        print(f"error: orbit cap exceeded: {exc}", file=sys.stderr)
    except sections.SizeCapExceeded as exc:
        print(f"error: matrix size cap exceeded: {exc}", file=sys.stderr)
    except FlagRequired as exc:
        print(f"error: {exc}", file=sys.stderr)
    except (UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
