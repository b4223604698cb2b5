"""Weyl group elements, orbit enumeration and stabilizer generators.

Weyl elements act on weights (fundamental-weight coordinates, column vectors)
by integer matrices.  Orbits are computed by breadth-first search; every
orbit point keeps a parent pointer so a witnessing word can be rebuilt on
demand instead of being stored per point.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from itertools import combinations
from math import prod
from typing import Callable, Dict, Hashable, Iterable, List, Optional, Sequence, Tuple

from .intlat import IntMatrix
from .rootsys import RootSystem, WeightVec, pairing, weyl_group_degrees

DEFAULT_ORBIT_CAP = int(os.environ.get("ADJSEC_ORBIT_CAP", 10**7))


class OrbitCapExceeded(RuntimeError):
    """An orbit grew beyond the configured size cap."""


class InvalidTripleError(ValueError):
    pass


def _mat_vec(m: Tuple[Tuple[int, ...], ...], v: Sequence[int]) -> WeightVec:
    return tuple(sum(a * b for a, b in zip(row, v)) for row in m)


def _mat_mul(a, b):
    bt = list(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(r, c)) for c in bt) for r in a)


def _identity(n: int):
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def _reflection_matrix(rs: RootSystem, alpha: WeightVec):
    """Matrix of s_alpha on weights: column k is w_k - <w_k, alpha^vee> alpha."""
    n = rs.rank
    cols = []
    for k in range(n):
        wk = rs.fundamental_weight(k + 1)
        c = pairing(rs, wk, alpha)
        cols.append(tuple(wk[i] - c * alpha[i] for i in range(n)))
    return tuple(tuple(cols[k][i] for k in range(n)) for i in range(n))


@dataclass(frozen=True)
class WeylElement:
    """A Weyl group element; ``word`` lists simple reflections, leftmost applied last.

    The word may be empty for elements given only by a matrix (for example
    reflections in non-simple roots); ``word is None`` marks that case.
    """

    matrix: Tuple[Tuple[int, ...], ...]
    word: Optional[Tuple[int, ...]] = ()

    @classmethod
    def identity(cls, rank: int) -> "WeylElement":
        return cls(_identity(rank), ())

    @classmethod
    def from_word(cls, rs: RootSystem, word: Sequence[int]) -> "WeylElement":
        m = _identity(rs.rank)
        for i in word:
            m = _mat_mul(m, simple_reflection(rs, i).matrix)
        return cls(m, tuple(word))

    @classmethod
    def reflection(cls, rs: RootSystem, alpha: WeightVec) -> "WeylElement":
        if alpha not in rs.roots:
            raise ValueError(f"{alpha} is not a root")
        if alpha in rs.simple_roots:
            i = rs.simple_roots.index(alpha)
            return simple_reflection(rs, i)
        if tuple(-x for x in alpha) in rs.simple_roots:
            i = rs.simple_roots.index(tuple(-x for x in alpha))
            return simple_reflection(rs, i)
        return cls(_reflection_matrix(rs, alpha), None)

    @property
    def rank(self) -> int:
        return len(self.matrix)

    def __call__(self, lam: Sequence[int]) -> WeightVec:
        return _mat_vec(self.matrix, lam)

    def __mul__(self, other: "WeylElement") -> "WeylElement":
        word = None if self.word is None or other.word is None else self.word + other.word
        return WeylElement(_mat_mul(self.matrix, other.matrix), word)

    def __pow__(self, k: int) -> "WeylElement":
        out = WeylElement.identity(self.rank)
        for _ in range(k):
            out = out * self
        return out

    def is_identity(self) -> bool:
        return self.matrix == _identity(self.rank)

    def det(self) -> int:
        return IntMatrix(self.matrix).det()

    def int_matrix(self) -> IntMatrix:
        return IntMatrix(self.matrix)

    def inverse(self, rs: RootSystem) -> "WeylElement":
        if self.word is not None:
            return WeylElement.from_word(rs, tuple(reversed(self.word)))
        # a matrix-only element: invert by repeated powers (W is finite)
        acc = self
        while not (acc * self).is_identity():
            acc = acc * self
        return WeylElement(acc.matrix, None)

    def coroot_matrix(self, rs: RootSystem) -> Tuple[Tuple[int, ...], ...]:
        """Action on the coroot lattice in simple-coroot coordinates: (M^{-1})^T."""
        inv = self.inverse(rs).matrix
        return tuple(tuple(inv[j][i] for j in range(self.rank)) for i in range(self.rank))

    def permutes_roots(self, rs: RootSystem) -> bool:
        return {self(r) for r in rs.roots} == rs.roots

    def to_json(self) -> dict:
        return {"matrix": [list(r) for r in self.matrix], "word": None if self.word is None else list(self.word)}


def simple_reflection(rs: RootSystem, i: int) -> WeylElement:
    """s_i for 0-based index ``i``."""
    n = rs.rank
    alpha = rs.simple_roots[i]
    # s_i(lam) = lam - lam_i alpha_i  =>  M = I - alpha_i e_i^T
    m = tuple(tuple(int(r == c) - (alpha[r] if c == i else 0) for c in range(n)) for r in range(n))
    return WeylElement(m, (i,))


@dataclass(frozen=True)
class GeneratorSet:
    generators: Tuple[WeylElement, ...]
    description: str

    def __len__(self) -> int:
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)

    def check_fixes(self, fixed: Callable[[WeylElement], bool]) -> None:
        for g in self.generators:
            if not fixed(g):
                raise ValueError(f"generator does not fix the object for {self.description!r}")

    def matrices(self) -> List[IntMatrix]:
        return [g.int_matrix() for g in self.generators]


@dataclass
class OrbitResult:
    """Orbit points plus parent pointers back to the base point.

    ``parents[p] = (q, g)`` means p = gens[g](q).  For orbits under simple
    reflections ``g`` is the simple index, so witnesses carry words.
    """

    base: Hashable
    parents: Dict[Hashable, Optional[Tuple[Hashable, int]]]
    generators: Tuple[WeylElement, ...]
    _rank: int = field(repr=False, default=0)

    @property
    def elements(self):
        return self.parents.keys()

    def __len__(self) -> int:
        return len(self.parents)

    def __contains__(self, p) -> bool:
        return p in self.parents

    def path(self, point) -> List[int]:
        """Generator indices g_1..g_k with point = gen[g_k] ... gen[g_1] (base)."""
        steps = []
        p = point
        while True:
            link = self.parents[p]
            if link is None:
                break
            p, g = link
            steps.append(g)
        return steps[::-1]

    def witness(self, point) -> WeylElement:
        """A Weyl element sending the base point to ``point``."""
        if point not in self.parents:
            raise KeyError(f"{point} is not in the orbit")
        w = WeylElement.identity(self._rank)
        for g in self.path(point):
            w = self.generators[g] * w
        return w


def _bfs(base, gens: Sequence[WeylElement], act: Callable, cap: int, rank: int) -> OrbitResult:
    parents: Dict = {base: None}
    frontier = [base]
    while frontier:
        nxt = []
        for p in frontier:
            for gi, g in enumerate(gens):
                q = act(g, p)
                if q not in parents:
                    parents[q] = (p, gi)
                    nxt.append(q)
                    if len(parents) > cap:
                        raise OrbitCapExceeded(f"orbit exceeded cap {cap}")
        frontier = nxt
    return OrbitResult(base, parents, tuple(gens), rank)


def orbit(rs: RootSystem, base: Sequence[int], cap: int = DEFAULT_ORBIT_CAP, gens: Optional[GeneratorSet] = None) -> OrbitResult:
    """W-orbit of a weight (or the orbit under ``gens`` when given)."""
    base = tuple(base)
    if len(base) != rs.rank:
        raise ValueError("weight of wrong rank")
    if gens is None:
        cartan = rs.cartan
        simple = [simple_reflection(rs, i) for i in range(rs.rank)]

        def act(g, lam):
            i = g.word[0]
            c = lam[i]
            if c == 0:
                return lam
            return tuple(x - c * a for x, a in zip(lam, cartan[i]))

        return _bfs(base, simple, act, cap, rs.rank)
    return _bfs(base, list(gens.generators), lambda g, lam: g(lam), cap, rs.rank)


def canonical_tuple(points: Iterable[Sequence[int]], symmetry: str) -> tuple:
    pts = tuple(tuple(p) for p in points)
    if symmetry == "unordered":
        return tuple(sorted(pts))
    if symmetry == "ordered":
        return pts
    raise ValueError(f"unknown symmetry {symmetry!r}")


def orbit_tuples(
    rs: RootSystem,
    base: Sequence[Sequence[int]],
    symmetry: str = "unordered",
    cap: int = DEFAULT_ORBIT_CAP,
    gens: Optional[GeneratorSet] = None,
) -> OrbitResult:
    """Orbit of a tuple of weights under the diagonal action."""
    if any(len(p) != rs.rank for p in base):
        raise ValueError("tuple entry of wrong rank")
    key = canonical_tuple(base, symmetry)
    generators = [simple_reflection(rs, i) for i in range(rs.rank)] if gens is None else list(gens.generators)

    def act(g, tup):
        return canonical_tuple((g(p) for p in tup), symmetry)

    return _bfs(key, generators, act, cap, rs.rank)


def orbit_marked(
    rs: RootSystem,
    points: Sequence[Sequence[int]],
    marked: Sequence[int],
    cap: int = DEFAULT_ORBIT_CAP,
    gens: Optional[GeneratorSet] = None,
) -> OrbitResult:
    """Orbit of a pair (unordered set of weights, marked member of the set)."""
    key = (canonical_tuple(points, "unordered"), tuple(marked))
    generators = [simple_reflection(rs, i) for i in range(rs.rank)] if gens is None else list(gens.generators)

    def act(g, pair):
        pts, m = pair
        return (canonical_tuple((g(p) for p in pts), "unordered"), g(m))

    return _bfs(key, generators, act, cap, rs.rank)


def stabilizer_of_weight(rs: RootSystem, varpi: Sequence[int]) -> GeneratorSet:
    """Reflections s_beta in all roots beta with <varpi, beta^vee> = 0 (one per +-pair)."""
    varpi = tuple(varpi)
    gens = []
    for beta in sorted(rs.positive_roots):
        if pairing(rs, varpi, beta) == 0:
            gens.append(WeylElement.reflection(rs, beta))
    gs = GeneratorSet(tuple(gens), "reflections annihilating the weight")
    gs.check_fixes(lambda g: g(varpi) == varpi)
    return gs


def roots_annihilating(rs: RootSystem, weights: Iterable[Sequence[int]]) -> List[WeightVec]:
    ws = [tuple(w) for w in weights]
    return sorted(b for b in rs.roots if all(pairing(rs, w, b) == 0 for w in ws))


def pointwise_stabilizer_roots(rs: RootSystem, weights: Iterable[Sequence[int]]) -> GeneratorSet:
    """Reflections in positive roots orthogonal to every given weight."""
    ws = [tuple(w) for w in weights]
    gens = tuple(WeylElement.reflection(rs, b) for b in sorted(rs.positive_roots) if all(pairing(rs, w, b) == 0 for w in ws))
    gs = GeneratorSet(gens, "reflections fixing the weights pointwise")
    gs.check_fixes(lambda g: all(g(w) == w for w in ws))
    return gs


def _validate_triple(rs: RootSystem, triple: Sequence[Sequence[int]]) -> Tuple[WeightVec, WeightVec, WeightVec]:
    if len(triple) != 3:
        raise InvalidTripleError("need exactly three roots")
    a, b, c = (tuple(x) for x in triple)
    if any(x not in rs.short_roots for x in (a, b, c)):
        raise InvalidTripleError("triple entries must be short roots")
    if any(x + y + z for x, y, z in zip(a, b, c)):
        raise InvalidTripleError("triple does not sum to zero")
    return a, b, c


def triple_rotation(rs: RootSystem, triple: Sequence[Sequence[int]]) -> WeylElement:
    """s_alpha s_beta, which sends alpha -> beta -> gamma -> alpha."""
    a, b, c = _validate_triple(rs, triple)
    w = WeylElement.reflection(rs, a) * WeylElement.reflection(rs, b)
    if not (w(a) == b and w(b) == c and w(c) == a):
        raise ArithmeticError("rotation does not cycle the triple")
    return w


def all_generators_involutions(gens: GeneratorSet) -> bool:
    """True if every generator squares to 1 (so Hom(group, Z) = 0)."""
    return all((g * g).is_identity() for g in gens.generators)


@dataclass(frozen=True)
class WeylOrder:
    order: int
    provenance: str  # "orbit" or "degrees"


def weyl_order(rs: RootSystem, cap: int = DEFAULT_ORBIT_CAP) -> WeylOrder:
    """|W| from the orbit of rho; falls back to the product of degrees above the cap."""
    predicted = prod(weyl_group_degrees(rs.family, rs.rank))
    if predicted > cap:
        return WeylOrder(predicted, "degrees")
    return WeylOrder(len(orbit(rs, rs.rho(), cap=cap)), "orbit")


def subgroup_order(rs: RootSystem, gens: GeneratorSet, cap: int = DEFAULT_ORBIT_CAP) -> int:
    """Order of a reflection subgroup via the orbit of rho, which no reflection fixes."""
    return len(orbit(rs, rs.rho(), cap=cap, gens=gens))


def dominant_representative(rs: RootSystem, lam: Sequence[int]) -> WeightVec:
    lam = tuple(lam)
    cartan = rs.cartan
    while True:
        i = next((k for k, x in enumerate(lam) if x < 0), None)
        if i is None:
            return lam
        c = lam[i]
        lam = tuple(x - c * a for x, a in zip(lam, cartan[i]))


def set_orbits(points: Iterable, gens: Sequence[WeylElement], act: Callable, cap: int = DEFAULT_ORBIT_CAP) -> List[List]:
    """Partition a finite invariant set into orbits under ``gens``."""
    remaining = set(points)
    if len(remaining) > cap:
        raise OrbitCapExceeded(f"{len(remaining)} points exceed cap {cap}")
    orbits = []
    for p in sorted(remaining):
        if p not in remaining:
            continue
        seen = {p}
        frontier = [p]
        while frontier:
            nxt = []
            for q in frontier:
                for g in gens:
                    r = act(g, q)
                    if r not in seen:
                        if r not in remaining:
                            raise ValueError("set is not invariant under the generators")
                        seen.add(r)
                        nxt.append(r)
            frontier = nxt
        remaining -= seen
        orbits.append(sorted(seen))
    return orbits


def zero_sum_triples(weights: Iterable[Sequence[int]]) -> List[Tuple[WeightVec, WeightVec, WeightVec]]:
    """Unordered triples of distinct weights summing to zero, each sorted."""
    ws = sorted(set(tuple(w) for w in weights))
    wset = set(ws)
    out = set()
    for a, b in combinations(ws, 2):
        c = tuple(-x - y for x, y in zip(a, b))
        if c in wset and c != a and c != b:
            out.add(tuple(sorted((a, b, c))))
    return sorted(out)


def proper_zero_sum_quadruples(weights: Iterable[Sequence[int]]) -> List[Tuple[WeightVec, ...]]:
    """Unordered 4-sets summing to zero with no two members summing to zero."""
    ws = sorted(set(tuple(w) for w in weights))
    index = {w: i for i, w in enumerate(ws)}
    out = []
    for i, j, k in combinations(range(len(ws)), 3):
        a, b, c = ws[i], ws[j], ws[k]
        d = tuple(-x - y - z for x, y, z in zip(a, b, c))
        l = index.get(d)
        if l is None or l <= k:
            continue
        quad = (a, b, c, d)
        if any(all(x + y == 0 for x, y in zip(p, q)) for p, q in combinations(quad, 2)):
            continue
        out.append(quad)
    return out


TRANSITIVITY_FAMILIES = (
    "short_triples_sum_zero",
    "e6_weights_meeting_varpi",
    "e6_pairs_triple_with_marked",
    "e7_proper_quadruples_with_marked",
)


@dataclass(frozen=True)
class TransitivityReport:
    family: str
    type: str
    total_count: int
    orbit_count: int
    orbit_sizes: Tuple[int, ...]
    representatives: Tuple = ()

    @property
    def vacuous(self) -> bool:
        return self.total_count == 0

    @property
    def transitive(self) -> bool:
        return self.orbit_count == 1

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "type": self.type,
            "total_count": self.total_count,
            "orbit_count": self.orbit_count,
            "orbit_sizes": list(self.orbit_sizes),
            "vacuous": self.vacuous,
        }


def minuscule_orbit(rs: RootSystem, index: int) -> List[WeightVec]:
    return sorted(orbit(rs, rs.fundamental_weight(index)).elements)


def _unordered_act(g, tup):
    return tuple(sorted(g(p) for p in tup))


def _marked_act(g, pair):
    pts, m = pair
    return (tuple(sorted(g(p) for p in pts)), g(m))


def check_transitivity(rs: RootSystem, family: str, cap: int = DEFAULT_ORBIT_CAP) -> TransitivityReport:
    """Enumerate a finite W-set by brute force and split it into orbits."""
    if family not in TRANSITIVITY_FAMILIES:
        raise ValueError(f"unknown tuple family {family!r}")
    simple = [simple_reflection(rs, i) for i in range(rs.rank)]
    if family == "short_triples_sum_zero":
        points = zero_sum_triples(rs.short_roots)
        gens, act = simple, _unordered_act
    elif family.startswith("e6"):
        if rs.label != "E6":
            raise ValueError(f"{family} is defined for E6 only")
        weights = minuscule_orbit(rs, 1)
        if family == "e6_weights_meeting_varpi":
            varpi = rs.fundamental_weight(1)
            wset = set(weights)
            points = [mu for mu in weights if tuple(-x - y for x, y in zip(varpi, mu)) in wset]
            gens = list(stabilizer_of_weight(rs, varpi).generators)
            act = lambda g, p: g(p)  # noqa: E731
        else:
            points = [(t, m) for t in zero_sum_triples(weights) for m in t]
            gens, act = simple, _marked_act
    else:
        if rs.label != "E7":
            raise ValueError(f"{family} is defined for E7 only")
        weights = minuscule_orbit(rs, 7)
        points = [(q, m) for q in proper_zero_sum_quadruples(weights) for m in q]
        gens, act = simple, _marked_act
    orbits = set_orbits(points, gens, act, cap) if points else []
    return TransitivityReport(
        family=family,
        type=rs.label,
        total_count=len(points),
        orbit_count=len(orbits),
        orbit_sizes=tuple(len(o) for o in orbits),
        representatives=tuple(o[0] for o in orbits),
    )
