"""Finite fibers of spectral covers over E_reg (x) Lambda, relation lattices,
the triple/quadruple correspondence, and recovery of torus points.

A cuspidal cubic has E_reg = G_a, modeled by exact rationals under addition;
a nodal cubic has E_reg = G_m, modeled by nonzero exact rationals under
multiplication.  Points of E_reg (x) Lambda are tuples of group elements in
the simple-coroot basis, so a weight mu evaluates to sum mu_i x_i (cuspidal)
or prod x_i^mu_i (nodal).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .intlat import IntMatrix, Relation, Sublattice, kernel_lattice, solve_integer, sublattice_equals
from .reps import WeightMultiset
from .rootsys import RootSystem, WeightVec
from .weyl import (
    WeylElement,
    proper_zero_sum_quadruples,
    zero_sum_triples,
)

CUSPIDAL = "cuspidal"
NODAL = "nodal"

# small primes for sampling nodal points; products stay exact and distinct
PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97)


class RelationViolation(ValueError):
    """A fiber function fails a defining relation; ``relation`` is the witness."""

    def __init__(self, relation: "LabeledRelation", value: Fraction):
        super().__init__(f"relation {relation.kind} {relation.label} evaluates to {value}, not 1")
        self.relation = relation
        self.value = value


@dataclass(frozen=True)
class CurveModel:
    kind: str

    def __post_init__(self) -> None:
        if self.kind not in (CUSPIDAL, NODAL):
            raise ValueError(f"unknown curve kind {self.kind!r}")

    @property
    def identity(self) -> Fraction:
        return Fraction(0) if self.kind == CUSPIDAL else Fraction(1)

    def op(self, a: Fraction, b: Fraction) -> Fraction:
        return a + b if self.kind == CUSPIDAL else a * b

    def inverse(self, a: Fraction) -> Fraction:
        return -a if self.kind == CUSPIDAL else 1 / a

    def power(self, a: Fraction, k: int) -> Fraction:
        return a * k if self.kind == CUSPIDAL else a**k

    def is_identity(self, a: Fraction) -> bool:
        return a == self.identity


@dataclass(frozen=True)
class TorusPoint:
    curve: CurveModel
    coords: Tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if self.curve.kind == NODAL and any(c == 0 for c in self.coords):
            raise ValueError("nodal coordinates must be nonzero")

    def evaluate(self, mu: Sequence[int]) -> Fraction:
        if len(mu) != len(self.coords):
            raise ValueError("rank mismatch")
        c = self.curve
        out = c.identity
        for m, x in zip(mu, self.coords):
            if m:
                out = c.op(out, c.power(x, m))
        return out

    def act(self, w: WeylElement, rs: RootSystem) -> "TorusPoint":
        """w . x, using the coroot action of w."""
        cm = w.coroot_matrix(rs)
        c = self.curve
        new = []
        for row in cm:
            v = c.identity
            for k, x in zip(row, self.coords):
                if k:
                    v = c.op(v, c.power(x, k))
            new.append(v)
        return TorusPoint(c, tuple(new))


def identity_point(curve: CurveModel, rank: int) -> TorusPoint:
    return TorusPoint(curve, (curve.identity,) * rank)


def random_point(curve: CurveModel, rank: int, rng: random.Random, bound: int = 97) -> TorusPoint:
    if curve.kind == CUSPIDAL:
        coords = tuple(Fraction(rng.randint(-bound, bound), rng.randint(1, bound)) for _ in range(rank))
    else:
        coords = tuple(
            Fraction(rng.choice(PRIMES), rng.choice(PRIMES)) * rng.choice((1, -1)) for _ in range(rank)
        )
    return TorusPoint(curve, coords)


@dataclass(frozen=True)
class SpectralFiber:
    values: Tuple[Tuple[WeightVec, Fraction], ...]
    zero_multiplicity: int
    at_identity: Tuple[WeightVec, ...]  # weights whose point is p0 (incidence with T1 / D-hat)

    def as_dict(self) -> Dict[WeightVec, Fraction]:
        return dict(self.values)

    @property
    def has_zero_slot(self) -> bool:
        return self.zero_multiplicity > 0


def spectral_fiber(rs: RootSystem, ms: WeightMultiset, x: TorusPoint) -> SpectralFiber:
    if len(x.coords) != rs.rank:
        raise ValueError("torus point of wrong rank")
    vals = tuple((w, x.evaluate(w)) for w in ms.support)
    hits = tuple(w for w, v in vals if x.curve.is_identity(v))
    return SpectralFiber(vals, ms.zero_multiplicity, hits)


@dataclass(frozen=True)
class LabeledRelation:
    kind: str  # "i" or "ii"
    label: Tuple[WeightVec, ...]  # (alpha, -alpha) or (alpha, beta, alpha+beta)
    vector: Tuple[int, ...]  # in Z[R_s], indexed by RelationSet.roots

    @property
    def terms(self) -> Tuple[Tuple[WeightVec, int], ...]:
        """Nonzero (root, coefficient) pairs of the relation."""
        if len(self.label) == 2:
            return ((self.label[0], 1), (self.label[1], 1))
        a, b, c = self.label
        return ((a, 1), (b, 1), (c, -1))


@dataclass(frozen=True)
class RelationSet:
    roots: Tuple[WeightVec, ...]  # sorted short roots, the basis of Z[R_s]
    type_i: Tuple[LabeledRelation, ...]
    type_ii: Tuple[LabeledRelation, ...]

    @property
    def all(self) -> Tuple[LabeledRelation, ...]:
        return self.type_i + self.type_ii

    def vectors(self) -> List[Tuple[int, ...]]:
        return [r.vector for r in self.all]


def _neg(v):
    return tuple(-x for x in v)


_RELATIONS: Dict[str, RelationSet] = {}


def build_relation_set(rs: RootSystem) -> RelationSet:
    if rs.label in _RELATIONS:
        return _RELATIONS[rs.label]
    roots = tuple(rs.sorted_short_roots())
    idx = {r: i for i, r in enumerate(roots)}
    n = len(roots)

    def vec(plus, minus=()):
        v = [0] * n
        for r in plus:
            v[idx[r]] += 1
        for r in minus:
            v[idx[r]] -= 1
        return tuple(v)

    type_i = []
    for a in roots:
        if a in rs.positive_roots:
            type_i.append(LabeledRelation("i", (a, _neg(a)), vec((a, _neg(a)))))
    type_ii = []
    seen = set()
    for a in roots:
        for b in roots:
            c = tuple(x + y for x, y in zip(a, b))
            if c in idx:
                key = tuple(sorted((a, b)))
                if key in seen:
                    continue
                seen.add(key)
                type_ii.append(LabeledRelation("ii", (key[0], key[1], c), vec(key, (c,))))
    rels = RelationSet(roots, tuple(type_i), tuple(sorted(type_ii, key=lambda r: r.label)))
    for r in rels.all:
        if any(sum(k * root[j] for root, k in r.terms) for j in range(rs.rank)):
            raise ArithmeticError(f"relation {r.label} is not in the kernel of phi")
    _RELATIONS[rs.label] = rels
    return rels


def phi_matrix(rs: RootSystem) -> IntMatrix:
    """Rows are the short roots: the map Z[R_s] -> Q(R), e_alpha -> alpha."""
    return IntMatrix(rs.sorted_short_roots(), cols=rs.rank)


@dataclass(frozen=True)
class KernelGeneration:
    type: str
    short_roots: int
    kernel_rank: int
    generated_rank: int
    index: Optional[int]
    relation: str
    type_i_count: int
    type_ii_count: int

    @property
    def passed(self) -> bool:
        return self.relation == Relation.EQUAL.value and self.index == 1

    def to_json(self) -> dict:
        return {
            "type": self.type,
            "short_roots": self.short_roots,
            "kernel_rank": self.kernel_rank,
            "generated_rank": self.generated_rank,
            "index": self.index,
            "relation": self.relation,
            "type_i": self.type_i_count,
            "type_ii": self.type_ii_count,
        }


def verify_kernel_generation(rs: RootSystem) -> KernelGeneration:
    """Compare the span of the two relation types with Ker(phi) exactly."""
    rels = build_relation_set(rs)
    kern = kernel_lattice(phi_matrix(rs))
    gen = Sublattice.span(rels.vectors(), len(rels.roots))
    cmp = sublattice_equals(gen, kern)
    return KernelGeneration(
        type=rs.label,
        short_roots=len(rels.roots),
        kernel_rank=kern.rank,
        generated_rank=gen.rank,
        index=cmp.index,
        relation=cmp.relation.value,
        type_i_count=len(rels.type_i),
        type_ii_count=len(rels.type_ii),
    )


@dataclass(frozen=True)
class FiberFunction:
    values: Tuple[Tuple[WeightVec, Fraction], ...]

    @classmethod
    def from_dict(cls, d: Dict[WeightVec, Fraction]) -> "FiberFunction":
        return cls(tuple(sorted((tuple(k), Fraction(v)) for k, v in d.items())))

    def as_dict(self) -> Dict[WeightVec, Fraction]:
        return dict(self.values)

    def __getitem__(self, mu) -> Fraction:
        d = self.as_dict()
        try:
            return d[tuple(mu)]
        except KeyError:
            raise KeyError(f"fiber function undefined at weight {mu}") from None


def character_function(x: TorusPoint, weights: Sequence[WeightVec]) -> FiberFunction:
    """a_mu = mu(h) for a torus point h (nodal model)."""
    if x.curve.kind != NODAL:
        raise ValueError("characters of the torus live on the nodal model")
    return FiberFunction.from_dict({w: x.evaluate(w) for w in weights})


def evaluate_relation(f: FiberFunction, rels: RelationSet, rel: LabeledRelation, d: Optional[dict] = None) -> Fraction:
    d = f.as_dict() if d is None else d
    out = Fraction(1)
    for r, k in rel.terms:
        if r not in d:
            raise KeyError(f"fiber function undefined at weight {r}")
        out = out * d[r] if k == 1 else out / d[r]
    return out


def find_violated_relation(f: FiberFunction, rels: RelationSet) -> Optional[Tuple[LabeledRelation, Fraction]]:
    d = f.as_dict()
    for rel in rels.all:
        val = evaluate_relation(f, rels, rel, d)
        if val != 1:
            return rel, val
    return None


def check_fiber_relations(f: FiberFunction, rels: RelationSet) -> bool:
    return find_violated_relation(f, rels) is None


@dataclass(frozen=True)
class AdjointTorusPoint:
    """A point h of Hom(Q(R), G_m), stored by its values on the simple roots."""

    simple_values: Tuple[Fraction, ...]

    def character(self, rs: RootSystem, root: WeightVec) -> Fraction:
        out = Fraction(1)
        for v, n in zip(self.simple_values, rs.root_coords(root)):
            out *= v ** int(n)
        return out


_EXPANSIONS: Dict[str, Tuple] = {}


def _simple_root_expansions(rs: RootSystem) -> Tuple:
    """Each simple root as an integer combination of short roots."""
    if rs.label not in _EXPANSIONS:
        phi = phi_matrix(rs)
        roots = rs.sorted_short_roots()
        out = []
        for alpha in rs.simple_roots:
            if alpha in rs.short_roots:
                out.append(((alpha, 1),))
                continue
            coeffs = solve_integer(phi, alpha)
            if coeffs is None:
                raise ArithmeticError("simple root outside the span of short roots")
            out.append(tuple((r, k) for r, k in zip(roots, coeffs) if k))
        _EXPANSIONS[rs.label] = tuple(out)
    return _EXPANSIONS[rs.label]


def solve_torus_point(f: FiberFunction, rs: RootSystem, rels: Optional[RelationSet] = None) -> AdjointTorusPoint:
    """Recover h with alpha(h) = a_alpha from a fiber function satisfying the relations.

    Long simple roots are written as integer combinations of short roots, so
    their values are monomials in the a_alpha.  The result is then expanded
    back to every short root and compared with f.
    """
    rels = rels or build_relation_set(rs)
    bad = find_violated_relation(f, rels)
    if bad is not None:
        raise RelationViolation(*bad)
    d = f.as_dict()
    values = []
    for alpha, terms in zip(rs.simple_roots, _simple_root_expansions(rs)):
        v = Fraction(1)
        for r, k in terms:
            v *= d[r] ** k
        values.append(v)
    h = AdjointTorusPoint(tuple(values))
    for r in rels.roots:
        if h.character(rs, r) != d[r]:
            raise ArithmeticError(f"expansion does not reproduce a_alpha at {r}")
    return h


def zero_sum_short_triples(rs: RootSystem) -> List[Tuple[WeightVec, WeightVec, WeightVec]]:
    return zero_sum_triples(rs.short_roots)


def correspondence_c(f: FiberFunction, tuples: Sequence[Sequence[WeightVec]]) -> Dict[tuple, Fraction]:
    """c(f)(tuple) = product of f over the tuple's weights."""
    out = {}
    for t in tuples:
        v = Fraction(1)
        for mu in t:
            v *= f[mu]
        out[tuple(t)] = v
    return out


def in_kernel_of_c(values: Dict[tuple, Fraction]) -> bool:
    return all(v == 1 for v in values.values())


def e7_proper_quadruples(rs: RootSystem, weights: Sequence[WeightVec]) -> List[Tuple[WeightVec, ...]]:
    if rs.label != "E7":
        raise ValueError("proper quadruples are defined here for E7 only")
    weights = sorted(set(tuple(w) for w in weights))
    if len(weights) != 56:
        raise ValueError("expected the 56 weights of the minuscule representation")
    return proper_zero_sum_quadruples(weights)


def random_constrained_function(fiber: SpectralFiber, rng: random.Random, weights: Sequence[WeightVec]) -> FiberFunction:
    """Random nonzero rationals on ``weights``, forced to 1 where the fiber meets p0."""
    hits = set(fiber.at_identity)
    d = {}
    for w in weights:
        if w in hits:
            d[w] = Fraction(1)
        else:
            d[w] = Fraction(rng.choice(PRIMES), rng.choice(PRIMES)) * rng.choice((1, -1))
    return FiberFunction.from_dict(d)


def point_on_triple_locus(rs: RootSystem, curve: CurveModel, triple, rng: random.Random) -> TorusPoint:
    """A random x with alpha(x) = beta(x) = gamma(x) = p0."""
    a, b, _ = triple
    lat = kernel_lattice(IntMatrix([(p, q) for p, q in zip(a, b)], cols=2))
    coords = [curve.identity] * rs.rank
    for vec in lat.basis:
        t = random_point(curve, 1, rng).coords[0]
        for i, k in enumerate(vec):
            if k:
                coords[i] = curve.op(coords[i], curve.power(t, k))
    return TorusPoint(curve, tuple(coords))


@dataclass(frozen=True)
class VanishingCheck:
    type: str
    triple: Tuple[WeightVec, ...]
    trials: int
    seed: int
    passed: bool
    failures: Tuple = ()

    def to_json(self) -> dict:
        return {
            "type": self.type,
            "triple": [list(t) for t in self.triple],
            "trials": self.trials,
            "seed": self.seed,
            "pass": self.passed,
        }


def subscheme_vanishing_check(rs: RootSystem, triple, trials: int = 100, seed: int = 0xC0FFEE, kinds=(CUSPIDAL, NODAL)) -> VanishingCheck:
    """On the locus where the triple's weights all hit p0, c(f) of the triple is 1
    for every fiber function that is 1 wherever the fiber meets p0."""
    triple = tuple(tuple(t) for t in triple)
    if len(triple) != 3 or any(t not in rs.short_roots for t in triple) or any(sum(c) for c in zip(*triple)):
        raise ValueError("need three short roots summing to zero")
    rng = random.Random(seed)
    short = rs.sorted_short_roots()
    failures = []
    for trial in range(trials):
        curve = CurveModel(kinds[trial % len(kinds)])
        x = point_on_triple_locus(rs, curve, triple, rng)
        vals = {w: x.evaluate(w) for w in short}
        if not all(curve.is_identity(vals[t]) for t in triple):
            raise ArithmeticError("sampled point is off the locus")
        fiber = SpectralFiber(tuple(sorted(vals.items())), 0, tuple(w for w in short if curve.is_identity(vals[w])))
        f = random_constrained_function(fiber, rng, short)
        c = correspondence_c(f, [triple])[triple]
        if c != 1:
            failures.append((trial, c))
    return VanishingCheck(rs.label, triple, trials, seed, not failures, tuple(failures))


def e6_triples_from_quadruples(rs7: RootSystem, quads: Sequence[Tuple[WeightVec, ...]], varpi: WeightVec) -> List[Tuple[WeightVec, ...]]:
    """Restrict the other three members of each quadruple through ``varpi`` to E6.

    The E6 subdiagram is nodes 1..6, so restriction keeps the first six
    fundamental-weight coordinates.  Returns the sorted restricted triples.
    """
    if rs7.label != "E7":
        raise ValueError("restriction is implemented from E7 only")
    varpi = tuple(varpi)
    out = []
    for q in quads:
        if varpi in q:
            rest = tuple(sorted(mu[:6] for mu in q if mu != varpi))
            out.append(rest)
    return sorted(out)


# --- stabilizer subgroups of tuples and their invariant lattices -----------------


def tuple_transporter(rs: RootSystem, tup: Sequence[WeightVec], perm: Sequence[int], cap: int = 10**6) -> Optional[WeylElement]:
    """Some w with w(tup[i]) = tup[perm[i]] for all i, read off the ordered-tuple orbit."""
    from .weyl import orbit_tuples

    tup = tuple(tuple(t) for t in tup)
    target = tuple(tup[p] for p in perm)
    orb = orbit_tuples(rs, tup, "ordered", cap)
    if target not in orb:
        return None
    w = orb.witness(target)
    if tuple(w(t) for t in tup) != target:
        raise ArithmeticError("orbit witness does not realize the permutation")
    return w


def _perm_closure(perms: Sequence[Tuple[int, ...]], n: int) -> set:
    group = {tuple(range(n))}
    frontier = list(group)
    while frontier:
        nxt = []
        for p in frontier:
            for q in perms:
                r = tuple(q[p[i]] for i in range(n))
                if r not in group:
                    group.add(r)
                    nxt.append(r)
        frontier = nxt
    return group


def _is_three_cycle(p: Tuple[int, ...]) -> bool:
    moved = [i for i, j in enumerate(p) if i != j]
    return len(moved) == 3


def _span_action(lat: Sublattice, g: WeylElement) -> IntMatrix:
    from .intlat import coordinates_in

    cols = []
    for b in lat.basis:
        c = coordinates_in(lat, g(b))
        if c is None:
            raise ArithmeticError("generator does not preserve the span")
        cols.append(c)
    return IntMatrix(cols, cols=lat.rank).T


@dataclass(frozen=True)
class StabilizerEvidence:
    """A subgroup of the stabilizer of a tuple of weights and its invariants.

    ``span_invariant_rank`` is the rank of the invariants on the lattice
    spanned by the tuple; ``full_invariant_rank`` is the rank on all of X(H)
    once reflections fixing the tuple pointwise are added.  Both are upper
    bounds for the invariants of the full stabilizer.
    """

    type: str
    tuple: Tuple[WeightVec, ...]
    permutations: Tuple[Tuple[int, ...], ...]
    permutation_group_order: int
    contains_three_cycle: bool
    pointwise_reflections: int
    span_rank: int
    span_invariant_rank: int
    full_invariant_rank: int

    @property
    def passed(self) -> bool:
        return self.contains_three_cycle and self.span_invariant_rank == 0 and self.full_invariant_rank == 0

    @property
    def span_passed(self) -> bool:
        return self.contains_three_cycle and self.span_invariant_rank == 0

    def to_json(self) -> dict:
        return {
            "type": self.type,
            "tuple": [list(t) for t in self.tuple],
            "permutations": [list(p) for p in self.permutations],
            "permutation_group_order": self.permutation_group_order,
            "contains_three_cycle": self.contains_three_cycle,
            "pointwise_reflections": self.pointwise_reflections,
            "span_rank": self.span_rank,
            "span_invariant_rank": self.span_invariant_rank,
            "full_invariant_rank": self.full_invariant_rank,
        }


def stabilizer_evidence(rs: RootSystem, tup: Sequence[WeightVec], perms: Sequence[Sequence[int]], cap: int = 10**6) -> StabilizerEvidence:
    """Transporters realizing ``perms`` on ``tup`` plus pointwise reflections."""
    from .intlat import invariant_sublattice
    from .weyl import pointwise_stabilizer_roots

    tup = tuple(tuple(t) for t in tup)
    perms = tuple(tuple(p) for p in perms)
    movers = []
    for p in perms:
        w = tuple_transporter(rs, tup, p, cap)
        if w is None:
            raise ArithmeticError(f"no Weyl element realizes {p} on the tuple")
        movers.append(w)
    group = _perm_closure(perms, len(tup))
    span = Sublattice.span(tup, rs.rank)
    span_inv = invariant_sublattice([_span_action(span, w) for w in movers], span.rank) if span.rank else span
    pointwise = pointwise_stabilizer_roots(rs, tup)
    full_inv = invariant_sublattice([w.int_matrix() for w in movers] + pointwise.matrices(), rs.rank)
    return StabilizerEvidence(
        type=rs.label,
        tuple=tup,
        permutations=perms,
        permutation_group_order=len(group),
        contains_three_cycle=any(_is_three_cycle(p) for p in group),
        pointwise_reflections=len(pointwise),
        span_rank=span.rank,
        span_invariant_rank=span_inv.rank,
        full_invariant_rank=full_inv.rank,
    )


# 3-cycle on the last three entries, and a double transposition; together A4
A4_GENERATORS = ((0, 2, 3, 1), (1, 0, 3, 2))
ROTATION = ((1, 2, 0),)


def e7_quadruple_evidence(rs: RootSystem, cap: int = 10**6) -> StabilizerEvidence:
    """Stabilizer of a proper quadruple through the minuscule weight of E7."""
    from .weyl import minuscule_orbit

    if rs.label != "E7":
        raise ValueError("E7 only")
    varpi = rs.fundamental_weight(7)
    quads = [q for q in e7_proper_quadruples(rs, minuscule_orbit(rs, 7)) if varpi in q]
    q = quads[0]
    tup = (varpi,) + tuple(m for m in q if m != varpi)
    return stabilizer_evidence(rs, tup, A4_GENERATORS, cap)


def e6_triple_evidence(rs: RootSystem, cap: int = 10**6) -> StabilizerEvidence:
    """Stabilizer of a zero-sum triple of weights of the 27 of E6."""
    from .weyl import minuscule_orbit

    if rs.label != "E6":
        raise ValueError("E6 only")
    t = zero_sum_triples(minuscule_orbit(rs, 1))[0]
    return stabilizer_evidence(rs, t, ROTATION, cap)


def short_triple_evidence(rs: RootSystem, cap: int = 10**6) -> Optional[StabilizerEvidence]:
    """Stabilizer of a zero-sum short-root triple; None when there are no triples."""
    triples = zero_sum_short_triples(rs)
    if not triples:
        return None
    return stabilizer_evidence(rs, triples[0], ROTATION, cap)
