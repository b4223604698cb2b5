"""Stable lemma identifiers and the checks that produce a verdict for each.

A check takes a root system and a ``Settings`` and returns ``(status,
witness)``; status is ``pass``, ``fail`` or ``vacuous``.  Failing checks
always carry the offending data in the witness.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Tuple

from .correspond import (
    NODAL,
    CurveModel,
    FiberFunction,
    RelationViolation,
    build_relation_set,
    e6_triple_evidence,
    e6_triples_from_quadruples,
    e7_proper_quadruples,
    e7_quadruple_evidence,
    random_point,
    short_triple_evidence,
    solve_torus_point,
    subscheme_vanishing_check,
    verify_kernel_generation,
    zero_sum_short_triples,
)
from .intlat import primitive, restriction_invariants_sequence
from .reps import classify_minuscule, minuscule_weights, quasi_minuscule_weights
from .rootsys import RootSystem, center_order
from .weyl import (
    DEFAULT_ORBIT_CAP,
    check_transitivity,
    minuscule_orbit,
    stabilizer_of_weight,
    zero_sum_triples,
)

PASS, FAIL, VACUOUS, SKIPPED = "pass", "fail", "vacuous", "skipped"
DEFAULT_SEED = 0xC0FFEE


class UnknownLemmaError(KeyError):
    pass


class NotApplicableError(ValueError):
    """The lemma is not stated for the requested type."""


class FlagRequired(RuntimeError):
    """The computation is gated behind an explicit flag (E8 kernel generation)."""


@dataclass(frozen=True)
class Settings:
    seed: int = DEFAULT_SEED
    trials: int = 100
    orbit_cap: int = DEFAULT_ORBIT_CAP
    include_e8: bool = False


@dataclass
class Verdict:
    lemma: str
    type: str
    status: str
    witness: dict = field(default_factory=dict)
    runtime_ms: Optional[int] = None

    def to_json(self, timings: bool = False) -> dict:
        out = {"lemma": self.lemma, "type": self.type, "status": self.status, "witness": self.witness}
        if timings and self.runtime_ms is not None:
            out["runtime_ms"] = self.runtime_ms
        return out


@dataclass(frozen=True)
class Lemma:
    id: str
    description: str
    check: Callable[[RootSystem, Settings], Tuple[str, dict]]
    applies: Callable[[RootSystem], bool] = lambda rs: True


def _status(ok: bool) -> str:
    return PASS if ok else FAIL


def _minuscule_census(rs, st):
    rep = classify_minuscule(rs)
    return _status(rep.count == center_order(rs.family, rs.rank) - 1), rep.to_json()


def _quasi_minuscule(rs, st):
    ms = quasi_minuscule_weights(rs)
    ok = ms.is_w_stable(rs) and set(ms.nonzero_weights()) == set(rs.short_roots)
    return _status(ok), {"dimension": ms.dimension, "zero_multiplicity": ms.zero_multiplicity, "short_roots": len(rs.short_roots)}


def _short_triples(rs, st):
    rep = check_transitivity(rs, "short_triples_sum_zero", st.orbit_cap)
    if rep.vacuous:
        return VACUOUS, rep.to_json()
    w = rep.to_json()
    w["representatives"] = [[list(x) for x in r] for r in rep.representatives]
    return _status(rep.transitive), w


def _triple_rotation(rs, st):
    ev = short_triple_evidence(rs, st.orbit_cap)
    if ev is None:
        return VACUOUS, {"triples": 0}
    return _status(ev.span_passed), ev.to_json()


def _kernel_generation(rs, st):
    if rs.label == "E8" and not st.include_e8:
        raise FlagRequired("E8 kernel generation needs --include-e8")
    kg = verify_kernel_generation(rs)
    return _status(kg.passed), kg.to_json()


def _torus_recovery(rs, st):
    rng = random.Random(st.seed)
    rels = build_relation_set(rs)
    curve = CurveModel(NODAL)
    for t in range(st.trials):
        x = random_point(curve, rs.rank, rng)
        f = FiberFunction.from_dict({r: x.evaluate(r) for r in rels.roots})
        h = solve_torus_point(f, rs, rels)
        if h.simple_values != tuple(x.evaluate(a) for a in rs.simple_roots):
            return FAIL, {"trial": t, "point": [str(c) for c in x.coords]}
    # one corrupted function must be rejected with the violated relation
    x = random_point(curve, rs.rank, rng)
    vals = {r: x.evaluate(r) for r in rels.roots}
    victim = rels.roots[-1]
    vals[victim] = vals[victim] * 2
    try:
        solve_torus_point(FiberFunction.from_dict(vals), rs, rels)
    except RelationViolation as exc:
        rejected = {"kind": exc.relation.kind, "relation": [list(r) for r in exc.relation.label], "value": str(exc.value)}
    else:
        return FAIL, {"corrupted_weight": list(victim), "rejected": False}
    return PASS, {"trials": st.trials, "seed": st.seed, "corrupted_weight": list(victim), "rejection": rejected}


def _restriction(rs, st):
    varpi = rs.highest_short_root
    seq = restriction_invariants_sequence(varpi, stabilizer_of_weight(rs, varpi), rs)
    w = seq.to_json()
    w["varpi_primitive"] = primitive(varpi) == tuple(varpi)
    return _status(seq.surjective and seq.kernel_is_varpi), w


def _subscheme(rs, st):
    triples = zero_sum_short_triples(rs)
    if not triples:
        return VACUOUS, {"triples": 0}
    chk = subscheme_vanishing_check(rs, triples[0], st.trials, st.seed)
    return _status(chk.passed), chk.to_json()


def _e6_meeting(rs, st):
    rep = check_transitivity(rs, "e6_weights_meeting_varpi", st.orbit_cap)
    ok = rep.total_count == 10 and rep.transitive and len(minuscule_orbit(rs, 1)) == 27
    w = rep.to_json()
    w["orbit_size"] = len(minuscule_orbit(rs, 1))
    return _status(ok), w


def _e6_pairs(rs, st):
    rep = check_transitivity(rs, "e6_pairs_triple_with_marked", st.orbit_cap)
    return _status(rep.transitive), rep.to_json()


def _e6_stab(rs, st):
    ev = e6_triple_evidence(rs, st.orbit_cap)
    return _status(ev.passed), ev.to_json()


def _e7_quads(rs, st):
    rep = check_transitivity(rs, "e7_proper_quadruples_with_marked", st.orbit_cap)
    w = rep.to_json()
    w["weights"] = len(minuscule_orbit(rs, 7))
    return _status(rep.transitive and w["weights"] == 56), w


def _e7_stab(rs, st):
    ev = e7_quadruple_evidence(rs, st.orbit_cap)
    return _status(ev.passed), ev.to_json()


def _e7_bijection(rs, st):
    from .rootsys import build_root_system

    quads = e7_proper_quadruples(rs, minuscule_orbit(rs, 7))
    restricted = e6_triples_from_quadruples(rs, quads, rs.fundamental_weight(7))
    e6 = build_root_system("E", 6)
    ok = False
    for i in (1, 6):
        triples = zero_sum_triples(minuscule_orbit(e6, i))
        if sorted(restricted) == sorted(triples):
            ok = True
    w = {"quadruples": len(quads), "through_varpi": len(restricted), "e6_triples": len(zero_sum_triples(minuscule_orbit(e6, 1))), "bijection": ok}
    return _status(ok and len(set(restricted)) == len(restricted)), w


def _primitive_short_root(rs):
    # the lemma assumes varpi is primitive in X(H); this fails only for A1
    return primitive(rs.highest_short_root) == tuple(rs.highest_short_root)


def _is(label):
    return lambda rs: rs.label == label


LEMMAS: Dict[str, Lemma] = {
    l.id: l
    for l in (
        Lemma("minuscule-census", "minuscule fundamental weights number #Z(G) - 1", _minuscule_census),
        Lemma("quasi-minuscule-weights", "quasi-minuscule weights are the short roots plus m0 zero weights", _quasi_minuscule),
        Lemma("short-triple-transitivity", "W is transitive on zero-sum triples of short roots", _short_triples),
        Lemma("triple-rotation-invariants", "an A2 rotation of a short triple has no invariants on the triple's span", _triple_rotation),
        Lemma("kernel-generation", "relations a+(-a) and a+b-(a+b) generate the kernel of Z[R_s] -> Q(R)", _kernel_generation),
        Lemma("torus-recovery", "fiber functions satisfying the relations come from a torus point", _torus_recovery),
        Lemma("restriction-sequence", "X(H)^W0 -> X(H0)^W0 is onto with kernel spanned by varpi", _restriction, _primitive_short_root),
        Lemma("subscheme-vanishing", "c vanishes on the triple locus for functions trivial at p0", _subscheme),
        Lemma("e6-weights-meeting-varpi", "W0 is transitive on the 10 weights meeting varpi in the 27 of E6", _e6_meeting, _is("E6")),
        Lemma("e6-triple-marked-transitivity", "W is transitive on (zero-sum triple, marked weight) in the 27 of E6", _e6_pairs, _is("E6")),
        Lemma("e6-triple-stabilizer-invariants", "the triple stabilizer of E6 has no invariant characters", _e6_stab, _is("E6")),
        Lemma("e7-quadruple-transitivity", "W is transitive on (proper quadruple, marked weight) in the 56 of E7", _e7_quads, _is("E7")),
        Lemma("e7-quadruple-stabilizer", "the quadruple stabilizer of E7 acts through A4 without invariants", _e7_stab, _is("E7")),
        Lemma("e7-quadruple-e6-bijection", "quadruples through varpi restrict to the zero-sum triples of E6", _e7_bijection, _is("E7")),
    )
}


def run_lemma(lemma_id: str, rs: RootSystem, st: Settings) -> Verdict:
    if lemma_id not in LEMMAS:
        raise UnknownLemmaError(lemma_id)
    lemma = LEMMAS[lemma_id]
    if not lemma.applies(rs):
        raise NotApplicableError(f"{lemma_id} is not defined for {rs.label}")
    t0 = time.perf_counter()
    status, witness = lemma.check(rs, st)
    return Verdict(lemma_id, rs.label, status, witness, int((time.perf_counter() - t0) * 1000))


def applicable_lemmas(rs: RootSystem) -> List[str]:
    return sorted(k for k, l in LEMMAS.items() if l.applies(rs))
