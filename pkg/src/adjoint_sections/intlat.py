"""Exact integer linear algebra: Smith forms, kernels and sublattices.

Everything here works on Python ints; no floating point is involved.  Row
vectors are the convention throughout, so ``kernel_lattice(M)`` is the left
kernel {v : v M = 0}.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from math import gcd
from typing import Iterable, List, Optional, Sequence, Tuple

Row = Tuple[int, ...]


class IntMatrix:
    """Immutable rectangular matrix of Python ints."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, data: Iterable[Sequence[int]], cols: Optional[int] = None):
        rows = tuple(tuple(int(x) for x in r) for r in data)
        if cols is None:
            if not rows:
                raise ValueError("cols must be given for a matrix with no rows")
            cols = len(rows[0])
        if any(len(r) != cols for r in rows):
            raise ValueError("ragged matrix")
        self.rows = len(rows)
        self.cols = cols
        self.data = rows

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(((int(i == j) for j in range(n)) for i in range(n)), cols=n)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(((0,) * cols for _ in range(rows)), cols=cols)

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]

    def __eq__(self, other) -> bool:
        return isinstance(other, IntMatrix) and (self.rows, self.cols, self.data) == (other.rows, other.cols, other.data)

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self.data))

    def __repr__(self) -> str:
        return f"IntMatrix({[list(r) for r in self.data]}, cols={self.cols})"

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch in product")
        ot = other.T.data
        return IntMatrix(
            (tuple(sum(a * b for a, b in zip(r, c)) for c in ot) for r in self.data),
            cols=other.cols,
        )

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        return IntMatrix((tuple(a - b for a, b in zip(r, s)) for r, s in zip(self.data, other.data)), cols=self.cols)

    @property
    def T(self) -> "IntMatrix":
        return IntMatrix(((self.data[i][j] for i in range(self.rows)) for j in range(self.cols)), cols=self.rows)

    def tolist(self) -> List[List[int]]:
        return [list(r) for r in self.data]

    def is_diagonal(self) -> bool:
        return all(self.data[i][j] == 0 for i in range(self.rows) for j in range(self.cols) if i != j)

    def det(self) -> int:
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        return _bareiss_det([list(r) for r in self.data])


def _bareiss_det(a: List[List[int]]) -> int:
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((r for r in range(k + 1, n) if a[r][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def hstack(mats: Sequence[IntMatrix]) -> IntMatrix:
    rows = mats[0].rows
    return IntMatrix((sum((m.data[i] for m in mats), ()) for i in range(rows)), cols=sum(m.cols for m in mats))


@dataclass(frozen=True)
class SmithDecomposition:
    """U M V = D with U, V unimodular and d_1 | d_2 | ... on the diagonal of D."""

    U: IntMatrix
    D: IntMatrix
    V: IntMatrix

    @property
    def diagonal(self) -> Tuple[int, ...]:
        return tuple(self.D[i, i] for i in range(min(self.D.rows, self.D.cols)))

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)

    @property
    def invariant_factors(self) -> Tuple[int, ...]:
        return tuple(d for d in self.diagonal if d != 0)


def smith(M: IntMatrix) -> SmithDecomposition:
    """Smith normal form with transforms.

    Pivots are entries of minimal absolute value, ties broken by lowest row
    index and then lowest column index, so the output is reproducible.
    """
    m, n = M.rows, M.cols
    a = [list(r) for r in M.data]
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):
        # row_dst -= q * row_src
        if q:
            ra, rs = a[dst], a[src]
            for k in range(n):
                if rs[k]:
                    ra[k] -= q * rs[k]
            ua, us = U[dst], U[src]
            for k in range(m):
                if us[k]:
                    ua[k] -= q * us[k]

    def add_col(dst, src, q):
        if q:
            for row in a:
                if row[src]:
                    row[dst] -= q * row[src]
            for row in V:
                if row[src]:
                    row[dst] -= q * row[src]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                x = a[i][j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, pi, pj = best
        swap_rows(t, pi)
        swap_cols(t, pj)
        while True:
            p = a[t][t]
            dirty = False
            for i in range(t + 1, m):
                if a[i][t]:
                    add_row(i, t, a[i][t] // p)
                    if a[i][t]:
                        dirty = True
            for j in range(t + 1, n):
                if a[t][j]:
                    add_col(j, t, a[t][j] // p)
                    if a[t][j]:
                        dirty = True
            if not dirty:
                # divisibility: p must divide every remaining entry
                bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if a[i][j] % p), None)
                if bad is None:
                    break
                # fold the offending row into row t and continue reducing
                i, _ = bad
                add_row(t, i, -1)
                continue
            # move the smallest nonzero entry of row/col t into the pivot slot
            cands = [(abs(a[i][t]), i, t) for i in range(t, m) if a[i][t]]
            cands += [(abs(a[t][j]), t, j) for j in range(t, n) if a[t][j]]
            _, pi, pj = min(cands)
            swap_rows(t, pi)
            swap_cols(t, pj)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            U[t] = [-x for x in U[t]]
        t += 1

    return SmithDecomposition(IntMatrix(U, cols=m), IntMatrix(a, cols=n), IntMatrix(V, cols=n))


def hermite_basis(vectors: Iterable[Sequence[int]], dim: int) -> List[Row]:
    """Row-echelon Z-basis of the lattice spanned by ``vectors``.

    Pivots strictly increase and are positive; entries above a pivot are
    reduced into [0, pivot).  The result is the Hermite normal form, hence a
    canonical basis of the spanned lattice.
    """
    basis: dict = {}  # pivot column -> row

    def insert(v: List[int]) -> None:
        while True:
            p = next((k for k in range(dim) if v[k]), None)
            if p is None:
                return
            if p not in basis:
                if v[p] < 0:
                    v = [-x for x in v]
                basis[p] = v
                return
            b = basis[p]
            # extended gcd combination of b and v at column p
            x, y = b[p], v[p]
            g, s, t = _xgcd(x, y)
            new_b = [s * bi + t * vi for bi, vi in zip(b, v)]
            new_v = [(x // g) * vi - (y // g) * bi for bi, vi in zip(b, v)]
            if new_b[p] < 0:
                new_b = [-z for z in new_b]
            basis[p] = new_b
            v = new_v

    for vec in vectors:
        v = list(vec)
        if len(v) != dim:
            raise ValueError("vector of wrong dimension")
        insert(v)

    pivots = sorted(basis)
    rows = [basis[p] for p in pivots]
    for idx, p in enumerate(pivots):
        for above in range(idx):
            q = rows[above][p] // rows[idx][p]
            if q:
                rows[above] = [a - q * b for a, b in zip(rows[above], rows[idx])]
    return [tuple(r) for r in rows]


def _xgcd(a: int, b: int) -> Tuple[int, int, int]:
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


@dataclass(frozen=True)
class Sublattice:
    """A sublattice of Z^ambient_rank given by a Z-basis (rows)."""

    ambient_rank: int
    basis: Tuple[Row, ...]

    def __post_init__(self) -> None:
        if any(len(r) != self.ambient_rank for r in self.basis):
            raise ValueError("basis vector of wrong length")
        if len(hermite_basis(self.basis, self.ambient_rank)) != len(self.basis):
            raise ValueError("basis rows are linearly dependent")

    @classmethod
    def span(cls, vectors: Iterable[Sequence[int]], ambient_rank: int) -> "Sublattice":
        return cls(ambient_rank, tuple(hermite_basis(vectors, ambient_rank)))

    @classmethod
    def full(cls, n: int) -> "Sublattice":
        return cls(n, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @property
    def rank(self) -> int:
        return len(self.basis)

    def matrix(self) -> IntMatrix:
        return IntMatrix(self.basis, cols=self.ambient_rank)

    def hermite(self) -> Tuple[Row, ...]:
        return tuple(hermite_basis(self.basis, self.ambient_rank))

    def contains(self, v: Sequence[int]) -> bool:
        return echelon_solve(self.hermite(), v) is not None


def coordinates_in(lat: Sublattice, v: Sequence[int]) -> Optional[Tuple[int, ...]]:
    """Integer coefficients c with sum c_i basis_i = v, or None."""
    return solve_integer(lat.matrix(), v)


def solve_integer(M: IntMatrix, v: Sequence[int]) -> Optional[Tuple[int, ...]]:
    """Integer row vector c with c M = v, or None if none exists."""
    if len(v) != M.cols:
        raise ValueError("right-hand side of wrong length")
    if M.rows == 0:
        return () if not any(v) else None
    snf = smith(M)
    # c M = v  <=>  (c U^{-1}) D = v V
    y = [sum(v[i] * snf.V[i, j] for i in range(M.cols)) for j in range(M.cols)]
    diag = snf.diagonal
    z = [0] * M.rows
    for j in range(M.cols):
        d = diag[j] if j < len(diag) else 0
        if d == 0:
            if y[j] != 0:
                return None
        else:
            if y[j] % d:
                return None
            z[j] = y[j] // d
    c = [sum(z[k] * snf.U[k, i] for k in range(M.rows)) for i in range(M.rows)]
    return tuple(c)


def kernel_lattice(M: IntMatrix) -> Sublattice:
    """Z-basis of {v in Z^rows : v M = 0}."""
    if M.cols == 0:
        return Sublattice.full(M.rows)
    snf = smith(M)
    r = snf.rank
    rows = [snf.U.data[i] for i in range(r, M.rows)]
    return Sublattice(M.rows, tuple(hermite_basis(rows, M.rows)))


def image_lattice(M: IntMatrix) -> Sublattice:
    """Row lattice {c M : c integral}."""
    return Sublattice.span(M.data, M.cols)


class Relation(Enum):
    EQUAL = "equal"
    A_INSIDE_B = "A_strictly_inside_B"
    B_INSIDE_A = "B_strictly_inside_A"
    INCOMPARABLE = "incomparable"


@dataclass(frozen=True)
class Comparison:
    relation: Relation
    index: Optional[int]  # None when incomparable or of different rank

    def to_json(self) -> dict:
        return {"relation": self.relation.value, "index": self.index}


def echelon_solve(rows: Sequence[Row], v: Sequence[int]) -> Optional[Tuple[int, ...]]:
    """Coefficients of ``v`` in an echelon basis such as ``hermite_basis`` output."""
    v = list(v)
    coeffs = []
    start = 0
    for row in rows:
        p = next(k for k in range(len(row)) if row[k])
        if any(v[k] for k in range(start, p)):
            return None
        q, rem = divmod(v[p], row[p])
        if rem:
            return None
        if q:
            v = [a - q * b for a, b in zip(v, row)]
        coeffs.append(q)
        start = p + 1
    if any(v):
        return None
    return tuple(coeffs)


def _inside(a: Sublattice, b: Sublattice) -> bool:
    hb = b.hermite()
    return all(echelon_solve(hb, v) is not None for v in a.basis)


def _index_in(small: Sublattice, big: Sublattice) -> Optional[int]:
    if small.rank != big.rank:
        return None
    if small.rank == 0:
        return 1
    hb = big.hermite()
    coeffs = [echelon_solve(hb, v) for v in small.basis]
    return abs(IntMatrix(coeffs, cols=big.rank).det())


def sublattice_equals(a: Sublattice, b: Sublattice) -> Comparison:
    """Decide the containment relation between two sublattices exactly."""
    if a.ambient_rank != b.ambient_rank:
        raise ValueError("sublattices live in different ambient lattices")
    a_in_b = _inside(a, b)
    b_in_a = _inside(b, a)
    if a_in_b and b_in_a:
        return Comparison(Relation.EQUAL, 1)
    if a_in_b:
        return Comparison(Relation.A_INSIDE_B, _index_in(a, b))
    if b_in_a:
        return Comparison(Relation.B_INSIDE_A, _index_in(b, a))
    return Comparison(Relation.INCOMPARABLE, None)


def invariant_sublattice(action: Sequence[IntMatrix], ambient_rank: int) -> Sublattice:
    """Vectors fixed by every matrix in ``action``.

    The matrices act on column vectors, so v is fixed by g when (g - I) v = 0,
    i.e. v lies in the left kernel of the block row [(g_1 - I)^T | ...].
    """
    if not action:
        return Sublattice.full(ambient_rank)
    ident = IntMatrix.identity(ambient_rank)
    blocks = []
    for g in action:
        if g.rows != ambient_rank or g.cols != ambient_rank:
            raise ValueError("action matrix of wrong size")
        blocks.append((g - ident).T)
    return kernel_lattice(hstack(blocks))


def primitive(v: Sequence[int]) -> Tuple[int, ...]:
    g = 0
    for x in v:
        g = gcd(g, x)
    if g == 0:
        return tuple(v)
    return tuple(x // g for x in v)


@dataclass(frozen=True)
class RestrictionSequence:
    """Restriction of invariant characters X(H)^W0 -> X(H0)^W0, H0 = torus of Ker(varpi)."""

    varpi: Row
    invariants_full: Sublattice  # X(H)^W0 in fundamental-weight coordinates
    sub_basis: Tuple[Row, ...]  # Z-basis of Ker(varpi) in the coroot lattice
    invariants_sub: Sublattice  # X(H0)^W0 in the dual basis of sub_basis
    image: Sublattice
    kernel: Sublattice  # inside fundamental-weight coordinates
    kernel_generator: Optional[Row]
    kernel_is_varpi: bool
    surjective: bool

    def to_json(self) -> dict:
        return {
            "varpi": list(self.varpi),
            "invariants_full_rank": self.invariants_full.rank,
            "invariants_full_basis": [list(r) for r in self.invariants_full.basis],
            "sub_rank": len(self.sub_basis),
            "invariants_sub_rank": self.invariants_sub.rank,
            "kernel_generator": None if self.kernel_generator is None else list(self.kernel_generator),
            "kernel_is_varpi": self.kernel_is_varpi,
            "surjective": self.surjective,
        }


def restriction_invariants_sequence(varpi: Sequence[int], w0_gens, rs) -> RestrictionSequence:
    """Compute X(H)^W0 -> X(H0)^W0 and decide its kernel and surjectivity.

    ``w0_gens`` is the generator set of the stabilizer of ``varpi``; the
    generators act on weights by their matrices and on coroots by the
    inverse transpose.
    """
    varpi = tuple(varpi)
    if not any(varpi):
        raise ValueError("varpi must be nonzero")
    r = rs.rank
    gens = list(w0_gens)
    full = invariant_sublattice([g.int_matrix() for g in gens], r)

    lam0 = kernel_lattice(IntMatrix([[x] for x in varpi], cols=1))
    basis = lam0.basis
    k = len(basis)
    bmat = IntMatrix(basis, cols=r) if k else None

    sub_action = []
    for g in gens:
        cm = g.coroot_matrix(rs)
        cols = []
        for b in basis:
            v = tuple(sum(cm[i][j] * b[j] for j in range(r)) for i in range(r))
            c = solve_integer(bmat, v)
            if c is None:
                raise ArithmeticError("stabilizer does not preserve Ker(varpi)")
            cols.append(c)
        # N has the coefficient vectors as columns; invariant functionals satisfy N^T f = f
        n_t = IntMatrix(cols, cols=k)
        sub_action.append(n_t)
    sub_inv = invariant_sublattice(sub_action, k) if k else Sublattice(0, ())

    def restrict(lam):
        return tuple(sum(a * b for a, b in zip(lam, bv)) for bv in basis)

    images = [restrict(lam) for lam in full.basis]
    image = Sublattice.span(images, k)
    surjective = sublattice_equals(image, sub_inv).relation is Relation.EQUAL

    if full.rank:
        rmat = IntMatrix(images, cols=k) if k else IntMatrix(((),) * full.rank, cols=0)
        coeffs = kernel_lattice(rmat).basis if k else tuple(Sublattice.full(full.rank).basis)
        kern_vecs = [tuple(sum(c[i] * full.basis[i][j] for i in range(full.rank)) for j in range(r)) for c in coeffs]
        kernel = Sublattice.span(kern_vecs, r)
    else:
        kernel = Sublattice(r, ())
    gen = kernel.basis[0] if kernel.rank == 1 else None
    is_varpi = kernel.rank == 1 and sublattice_equals(kernel, Sublattice.span([varpi], r)).relation is Relation.EQUAL
    return RestrictionSequence(varpi, full, basis, sub_inv, image, kernel, gen, is_varpi, surjective)
