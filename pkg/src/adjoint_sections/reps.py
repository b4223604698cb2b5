"""Minuscule and quasi-minuscule representations, modeled by their weights."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Dict, List, Tuple

from .rootsys import RootSystem, WeightVec, center_order, pairing
from .weyl import orbit, simple_reflection


class InvariantViolation(AssertionError):
    """An internal consistency identity failed."""


class NotMinusculeError(ValueError):
    pass


# dimension of the quasi-minuscule representation with highest weight the
# highest short root; used only to cross-check the zero-weight multiplicity
def quasi_minuscule_dimension(family: str, rank: int) -> int:
    n = rank
    if family == "A":
        return n * n + 2 * n
    if family == "B":
        return 2 * n + 1
    if family == "C":
        return 2 * n * n - n - 1
    if family == "D":
        return 2 * n * n - n
    return {("E", 6): 78, ("E", 7): 133, ("E", 8): 248, ("F", 4): 26, ("G", 2): 7}[(family, n)]


@dataclass(frozen=True)
class WeightMultiset:
    entries: Tuple[Tuple[WeightVec, int], ...]  # sorted by weight
    highest: WeightVec

    @classmethod
    def from_dict(cls, d: Dict[WeightVec, int], highest: WeightVec) -> "WeightMultiset":
        if any(m <= 0 for m in d.values()):
            raise ValueError("multiplicities must be positive")
        if any(x < 0 for x in highest):
            raise ValueError("highest weight must be dominant")
        if d.get(highest) != 1:
            raise ValueError("highest weight must have multiplicity one")
        return cls(tuple(sorted(d.items())), tuple(highest))

    def as_dict(self) -> Dict[WeightVec, int]:
        return dict(self.entries)

    @property
    def support(self) -> List[WeightVec]:
        return [w for w, _ in self.entries]

    def nonzero_weights(self) -> List[WeightVec]:
        return [w for w, _ in self.entries if any(w)]

    def multiplicity(self, w) -> int:
        return self.as_dict().get(tuple(w), 0)

    @property
    def zero_multiplicity(self) -> int:
        return next((m for w, m in self.entries if not any(w)), 0)

    @property
    def dimension(self) -> int:
        return sum(m for _, m in self.entries)

    def is_w_stable(self, rs: RootSystem) -> bool:
        d = self.as_dict()
        for i in range(rs.rank):
            s = simple_reflection(rs, i)
            if any(d.get(s(w)) != m for w, m in d.items()):
                return False
        return True

    def to_json(self) -> dict:
        return {
            "highest": list(self.highest),
            "dimension": self.dimension,
            "weights": [{"weight": list(w), "multiplicity": m} for w, m in self.entries],
        }


@dataclass(frozen=True)
class MinusculeReport:
    type: str
    minuscule: Tuple[int, ...]  # 1-based fundamental weight indices
    center_order: int

    @property
    def count(self) -> int:
        return len(self.minuscule)

    def to_json(self) -> dict:
        return {"type": self.type, "minuscule": list(self.minuscule), "count": self.count, "center_order": self.center_order}


def highest_coroot_coefficients(rs: RootSystem) -> Tuple[int, ...]:
    """Coefficients of the highest coroot (the coroot of the highest short root)
    in the simple-coroot basis, i.e. <varpi_i, theta_s^vee>."""
    return tuple(pairing(rs, rs.fundamental_weight(i + 1), rs.highest_short_root) for i in range(rs.rank))


def classify_minuscule(rs: RootSystem) -> MinusculeReport:
    """Fundamental weights whose simple coroot has coefficient 1 in the highest coroot.

    In simply laced types this is the coefficient in the highest root.  In
    B_n and C_n the two readings differ (they would pick the vector weights,
    which carry a zero weight), so the coroot reading is used throughout.
    """
    coeffs = highest_coroot_coefficients(rs)
    idx = tuple(i + 1 for i, h in enumerate(coeffs) if h == 1)
    z = center_order(rs.family, rs.rank)
    if len(idx) != z - 1:
        raise InvariantViolation(f"{rs.label}: {len(idx)} minuscule weights but #Z = {z}")
    return MinusculeReport(rs.label, idx, z)


def minuscule_weights(rs: RootSystem, varpi) -> WeightMultiset:
    varpi = tuple(varpi)
    mins = classify_minuscule(rs).minuscule
    if varpi not in {rs.fundamental_weight(i) for i in mins}:
        raise NotMinusculeError(f"{varpi} is not a minuscule fundamental weight of {rs.label}")
    pts = orbit(rs, varpi).elements
    return WeightMultiset.from_dict({w: 1 for w in pts}, varpi)


def short_simple_root_count(rs: RootSystem) -> int:
    return sum(1 for a in rs.simple_roots if a in rs.short_roots)


def quasi_minuscule_weights(rs: RootSystem) -> WeightMultiset:
    """Short roots with multiplicity one and the zero weight with multiplicity m0."""
    m0 = short_simple_root_count(rs)
    expected = quasi_minuscule_dimension(rs.family, rs.rank) - len(rs.short_roots)
    if m0 != expected:
        raise InvariantViolation(f"{rs.label}: m0 = {m0} disagrees with the dimension table ({expected})")
    d = {r: 1 for r in rs.short_roots}
    d[rs.zero()] = m0
    return WeightMultiset.from_dict(d, rs.highest_short_root)


def adjoint_weights(rs: RootSystem) -> WeightMultiset:
    d = {r: 1 for r in rs.roots}
    d[rs.zero()] = rs.rank
    return WeightMultiset.from_dict(d, rs.highest_root)


def is_quasi_minuscule(ms: WeightMultiset, rs: RootSystem) -> bool:
    nonzero = ms.nonzero_weights()
    if not nonzero:
        return True
    d = ms.as_dict()
    if any(d[w] != 1 for w in nonzero):
        return False
    return set(orbit(rs, nonzero[0]).elements) == set(nonzero)


def is_minuscule(ms: WeightMultiset, rs: RootSystem) -> bool:
    return ms.zero_multiplicity == 0 and is_quasi_minuscule(ms, rs)


def differences_are_never_root_multiples(ms: WeightMultiset, rs: RootSystem) -> bool:
    """True if no difference of two weights is k*alpha with k >= 2 and alpha a root."""
    for a, b in combinations(ms.support, 2):
        diff = tuple(x - y for x, y in zip(a, b))
        for k in range(2, 5):
            if all(x % k == 0 for x in diff) and tuple(x // k for x in diff) in rs.roots:
                return False
    return True
