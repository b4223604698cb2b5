"""Root systems of simple type, built from Cartan matrices.

Weights are integer tuples in the basis of fundamental weights: the i-th
coordinate of a weight is its pairing with the i-th simple coroot.  The i-th
simple root is therefore the i-th row of the Cartan matrix, and every simple
reflection acts by an integer matrix.

Simple roots are numbered as in Bourbaki's tables (see ``docs/numbering.md``).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, FrozenSet, List, Tuple

WeightVec = Tuple[int, ...]
Matrix = Tuple[Tuple[int, ...], ...]

MAX_RANK = 8
FAMILIES = "ABCDEFG"


class InvalidTypeError(ValueError):
    """Raised for a (family, rank) pair that names no simple root system."""


def _check_type(family: str, rank: int) -> None:
    if family not in FAMILIES or not isinstance(rank, int):
        raise InvalidTypeError(f"unknown type {family!r}{rank!r}")
    ok = {
        "A": 1 <= rank,
        "B": 2 <= rank,
        "C": 2 <= rank,
        "D": 3 <= rank,
        "E": rank in (6, 7, 8),
        "F": rank == 4,
        "G": rank == 2,
    }[family]
    if not ok or rank > MAX_RANK:
        raise InvalidTypeError(f"{family}{rank} is not a simple type of rank <= {MAX_RANK}")


def all_types(max_rank: int = MAX_RANK) -> List[Tuple[str, int]]:
    """Every simple type of rank at most ``max_rank``, in a fixed order."""
    out = []
    for fam in FAMILIES:
        for n in range(1, max_rank + 1):
            try:
                _check_type(fam, n)
            except InvalidTypeError:
                continue
            out.append((fam, n))
    return out


def parse_type(label: str) -> Tuple[str, int]:
    """Parse labels such as ``"E6"`` or ``"b3"``."""
    label = label.strip()
    if len(label) < 2 or not label[1:].isdigit():
        raise InvalidTypeError(f"cannot parse type label {label!r}")
    fam, rank = label[0].upper(), int(label[1:])
    _check_type(fam, rank)
    return fam, rank


def type_label(family: str, rank: int) -> str:
    return f"{family}{rank}"


def cartan_matrix(family: str, rank: int) -> Matrix:
    """Cartan matrix with entry [i][j] = <alpha_i, alpha_j^vee>.

    Row i is the simple root alpha_i written in fundamental-weight coordinates.
    """
    _check_type(family, rank)
    n = rank
    a = [[0] * n for _ in range(n)]
    for i in range(n):
        a[i][i] = 2

    def link(i: int, j: int, aij: int = -1, aji: int = -1) -> None:
        a[i][j] = aij
        a[j][i] = aji

    if family in "ABCD":
        last = n - 1 if family != "D" else n - 2
        for i in range(last):
            link(i, i + 1)
        if family == "B":
            # alpha_n short
            link(n - 2, n - 1, -2, -1)
        elif family == "C":
            # alpha_n long
            link(n - 2, n - 1, -1, -2)
        elif family == "D":
            link(n - 3, n - 1)
    elif family == "E":
        link(0, 2)
        link(1, 3)
        for i in range(2, n - 1):
            link(i, i + 1)
    elif family == "F":
        link(0, 1)
        link(1, 2, -2, -1)
        link(2, 3)
    elif family == "G":
        # alpha_1 short, alpha_2 long
        link(0, 1, -1, -3)
    return tuple(tuple(row) for row in a)


def _frac_inverse(m: Matrix) -> List[List[Fraction]]:
    n = len(m)
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for col in range(n):
        piv = next(r for r in range(col, n) if aug[r][col] != 0)
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        aug[col] = [x / p for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def _det(m: Matrix) -> int:
    n = len(m)
    a = [[Fraction(x) for x in row] for row in m]
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return 0
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        det *= a[col][col]
        for r in range(col + 1, n):
            f = a[r][col] / a[col][col]
            if f:
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    assert det.denominator == 1
    return int(det)


def _half_lengths(cartan: Matrix) -> List[Fraction]:
    """(alpha_i, alpha_i)/2 for each simple root, longest normalized to 1."""
    n = len(cartan)
    d = [None] * n
    d[0] = Fraction(1)
    stack = [0]
    while stack:
        i = stack.pop()
        for j in range(n):
            if j != i and cartan[i][j] != 0 and d[j] is None:
                # A[i][j] d_j = (alpha_i, alpha_j) = A[j][i] d_i
                d[j] = d[i] * cartan[j][i] / cartan[i][j]
                stack.append(j)
    top = max(d)
    return [x / top for x in d]


@dataclass(frozen=True)
class CartanDatum:
    family: str
    rank: int
    cartan: Matrix

    def __post_init__(self) -> None:
        n = self.rank
        c = self.cartan
        if len(c) != n or any(len(row) != n for row in c):
            raise ValueError("Cartan matrix has wrong shape")
        for i in range(n):
            if c[i][i] != 2:
                raise ValueError("Cartan diagonal must be 2")
            for j in range(n):
                if i != j:
                    if c[i][j] not in (0, -1, -2, -3):
                        raise ValueError("off-diagonal Cartan entry out of range")
                    if (c[i][j] == 0) != (c[j][i] == 0):
                        raise ValueError("Cartan zero pattern is not symmetric")
        if _det(c) <= 0:
            raise ValueError("Cartan determinant must be positive")

    @property
    def label(self) -> str:
        return type_label(self.family, self.rank)


@dataclass(frozen=True)
class LatticeFrame:
    """Generator matrices (rows) inside fundamental-weight coordinates.

    ``root_lattice`` spans Q(R); the character lattice X(H) is all of Z^rank
    (``weight_lattice``); ``coroot_lattice`` is given in simple-coroot
    coordinates, where it is the standard lattice.
    """

    root_lattice: Matrix
    coroot_lattice: Matrix
    weight_lattice: Matrix

    @property
    def index(self) -> int:
        return abs(_det(self.root_lattice))


@dataclass(frozen=True)
class RootSystem:
    datum: CartanDatum
    roots: FrozenSet[WeightVec]
    positive_roots: FrozenSet[WeightVec]
    simple_roots: Tuple[WeightVec, ...]
    short_roots: FrozenSet[WeightVec]
    highest_root: WeightVec
    highest_short_root: WeightVec
    form: Tuple[Tuple[Fraction, ...], ...]
    _root_coords: Dict[WeightVec, Tuple[int, ...]] = field(repr=False, compare=False, hash=False)
    _inv_cartan: Tuple[Tuple[Fraction, ...], ...] = field(repr=False, compare=False, hash=False)

    @property
    def rank(self) -> int:
        return self.datum.rank

    @property
    def family(self) -> str:
        return self.datum.family

    @property
    def label(self) -> str:
        return self.datum.label

    @property
    def cartan(self) -> Matrix:
        return self.datum.cartan

    @property
    def simply_laced(self) -> bool:
        return self.short_roots == self.roots

    def sorted_roots(self) -> List[WeightVec]:
        return sorted(self.roots)

    def sorted_short_roots(self) -> List[WeightVec]:
        return sorted(self.short_roots)

    def inner(self, x: WeightVec, y: WeightVec) -> Fraction:
        """W-invariant inner product, long roots of squared length 2."""
        f = self.form
        return sum((f[i][j] * x[i] * y[j] for i in range(self.rank) for j in range(self.rank) if x[i] and y[j]), Fraction(0))

    def norm2(self, x: WeightVec) -> Fraction:
        return self.inner(x, x)

    def root_coords(self, lam: WeightVec) -> Tuple[Fraction, ...]:
        """Coordinates of a weight in the simple-root basis."""
        if lam in self._root_coords:
            return self._root_coords[lam]
        n = self.rank
        inv = self._inv_cartan
        return tuple(sum((lam[j] * inv[j][i] for j in range(n)), Fraction(0)) for i in range(n))

    def height(self, root: WeightVec) -> int:
        return int(sum(self.root_coords(root)))

    def is_short(self, root: WeightVec) -> bool:
        return root in self.short_roots

    def lattice_frame(self) -> LatticeFrame:
        ident = tuple(tuple(int(i == j) for j in range(self.rank)) for i in range(self.rank))
        return LatticeFrame(root_lattice=self.cartan, coroot_lattice=ident, weight_lattice=ident)

    def fundamental_weight(self, i: int) -> WeightVec:
        """The i-th fundamental weight, ``i`` counted from 1."""
        if not 1 <= i <= self.rank:
            raise ValueError(f"fundamental weight index {i} out of range")
        return tuple(int(j == i - 1) for j in range(self.rank))

    def zero(self) -> WeightVec:
        return (0,) * self.rank

    def rho(self) -> WeightVec:
        return (1,) * self.rank

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "rank": self.rank,
            "cartan": [list(r) for r in self.cartan],
            "roots": [list(r) for r in self.sorted_roots()],
            "short_roots": [list(r) for r in self.sorted_short_roots()],
            "highest_root": list(self.highest_root),
            "highest_short_root": list(self.highest_short_root),
        }


def reflect_simple(cartan: Matrix, lam: WeightVec, i: int) -> WeightVec:
    """s_i(lam) = lam - <lam, alpha_i^vee> alpha_i."""
    c = lam[i]
    if c == 0:
        return lam
    row = cartan[i]
    return tuple(x - c * a for x, a in zip(lam, row))


def pairing(rs: RootSystem, lam: WeightVec, alpha: WeightVec) -> int:
    """<lam, alpha^vee> = 2 (lam, alpha) / (alpha, alpha)."""
    if len(lam) != rs.rank or len(alpha) != rs.rank:
        raise ValueError("rank mismatch in pairing")
    if alpha not in rs.roots:
        raise ValueError(f"{alpha} is not a root")
    val = 2 * rs.inner(lam, alpha) / rs.norm2(alpha)
    if val.denominator != 1:
        raise ArithmeticError("non-integral pairing of a weight with a coroot")
    return int(val)


@lru_cache(maxsize=None)
def build_root_system(family: str, rank: int) -> RootSystem:
    """Close the simple roots under simple reflections and classify them."""
    cartan = cartan_matrix(family, rank)
    datum = CartanDatum(family, rank, cartan)
    n = rank
    simple = tuple(tuple(row) for row in cartan)

    roots = set(simple)
    frontier = list(simple)
    while frontier:
        nxt = []
        for r in frontier:
            for i in range(n):
                s = reflect_simple(cartan, r, i)
                if s not in roots:
                    roots.add(s)
                    nxt.append(s)
        frontier = nxt

    inv = _frac_inverse(cartan)
    coords: Dict[WeightVec, Tuple[int, ...]] = {}
    for r in roots:
        c = [sum((r[j] * inv[j][i] for j in range(n)), Fraction(0)) for i in range(n)]
        if any(x.denominator != 1 for x in c):
            raise ArithmeticError(f"root {r} is not integral in the root basis")
        coords[r] = tuple(int(x) for x in c)
    positive = frozenset(r for r, c in coords.items() if all(x >= 0 for x in c))
    if any(not (all(x >= 0 for x in c) or all(x <= 0 for x in c)) for c in coords.values()):
        raise ArithmeticError("found a root with mixed-sign coefficients")

    d = _half_lengths(cartan)
    # (w_k, w_l) = (A^{-1})_{lk} d_k
    form = tuple(tuple(inv[l][k] * d[k] for l in range(n)) for k in range(n))
    for k in range(n):
        for l in range(n):
            assert form[k][l] == form[l][k], "form matrix not symmetric"

    def norm2(x: WeightVec) -> Fraction:
        return sum((form[i][j] * x[i] * x[j] for i in range(n) for j in range(n)), Fraction(0))

    lengths = {r: norm2(r) for r in roots}
    shortest = min(lengths.values())
    short = frozenset(r for r in roots if lengths[r] == shortest)

    highest = max(positive, key=lambda r: (sum(coords[r]), r))
    dominant_short = [r for r in short if all(x >= 0 for x in r)]
    if len(dominant_short) != 1:
        raise ArithmeticError("expected a unique dominant short root")

    return RootSystem(
        datum=datum,
        roots=frozenset(roots),
        positive_roots=positive,
        simple_roots=simple,
        short_roots=short,
        highest_root=highest,
        highest_short_root=dominant_short[0],
        form=form,
        _root_coords=coords,
        _inv_cartan=tuple(tuple(row) for row in inv),
    )


def center_order(family: str, rank: int) -> int:
    """Order of the center of the simply connected group: |X(H)/Q(R)|."""
    return _det(cartan_matrix(family, rank))


def center_structure(family: str, rank: int) -> Tuple[int, ...]:
    """Invariant factors (> 1) of X(H)/Q(R), from the Smith form of the Cartan matrix."""
    from .intlat import IntMatrix, smith

    return tuple(d for d in smith(IntMatrix(cartan_matrix(family, rank))).diagonal if d > 1)


def weyl_group_degrees(family: str, rank: int) -> Tuple[int, ...]:
    """Degrees of the basic invariants; their product is |W|."""
    _check_type(family, rank)
    n = rank
    if family == "A":
        return tuple(range(2, n + 2))
    if family in "BC":
        return tuple(range(2, 2 * n + 1, 2))
    if family == "D":
        return tuple(sorted(list(range(2, 2 * n - 1, 2)) + [n]))
    return {
        ("E", 6): (2, 5, 6, 8, 9, 12),
        ("E", 7): (2, 6, 8, 10, 12, 14, 18),
        ("E", 8): (2, 8, 12, 14, 18, 20, 24, 30),
        ("F", 4): (2, 6, 8, 12),
        ("G", 2): (2, 6),
    }[(family, n)]
