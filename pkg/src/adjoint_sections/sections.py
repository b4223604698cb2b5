"""Kostant slices for classical Lie algebras, Steinberg sections for SL(n),
and the exponential link between them, all in exact rational arithmetic.

Matrices are lists of lists of ``Fraction``.  The orthogonal and symplectic
algebras are realized with antidiagonal forms so that upper triangular
matrices form a Borel subalgebra and the principal grading is diagonal.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import comb
from typing import Callable, Dict, List, Optional, Sequence, Tuple

Mat = List[List[Fraction]]

MAX_MATRIX_SIZE = 12
DEFAULT_SEED = 0xC0FFEE
DEFAULT_SAMPLES = 50
PARAM_BOUND = 1000


class SizeCapExceeded(ValueError):
    pass


class FalsifiedSection(AssertionError):
    """Raised by builders when a structural invariant fails at build time."""


# --- exact matrix helpers -------------------------------------------------------


def zeros(n: int, m: Optional[int] = None) -> Mat:
    return [[Fraction(0)] * (n if m is None else m) for _ in range(n)]


def identity(n: int) -> Mat:
    out = zeros(n)
    for i in range(n):
        out[i][i] = Fraction(1)
    return out


def unit(n: int, i: int, j: int) -> Mat:
    out = zeros(n)
    out[i][j] = Fraction(1)
    return out


def mat_mul(a: Mat, b: Mat) -> Mat:
    bt = list(zip(*b))
    return [[sum((x * y for x, y in zip(row, col) if x and y), Fraction(0)) for col in bt] for row in a]


def mat_add(a: Mat, b: Mat) -> Mat:
    return [[x + y for x, y in zip(r, s)] for r, s in zip(a, b)]


def mat_sub(a: Mat, b: Mat) -> Mat:
    return [[x - y for x, y in zip(r, s)] for r, s in zip(a, b)]


def mat_scale(c, a: Mat) -> Mat:
    return [[c * x for x in r] for r in a]


def transpose(a: Mat) -> Mat:
    return [list(r) for r in zip(*a)]


def bracket(a: Mat, b: Mat) -> Mat:
    return mat_sub(mat_mul(a, b), mat_mul(b, a))


def trace(a: Mat) -> Fraction:
    return sum((a[i][i] for i in range(len(a))), Fraction(0))


def flatten(a: Mat) -> List[Fraction]:
    return [x for r in a for x in r]


def is_zero(a: Mat) -> bool:
    return all(x == 0 for r in a for x in r)


def rref(rows: Sequence[Sequence[Fraction]]) -> Tuple[List[List[Fraction]], List[int]]:
    m = [[Fraction(x) for x in r] for r in rows]
    if not m:
        return m, []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: Sequence[Sequence[Fraction]]) -> int:
    return len(rref(rows)[1])


def nullspace(rows: Sequence[Sequence[Fraction]], ncols: int) -> List[List[Fraction]]:
    """Basis of {x : A x = 0} for A given by ``rows``."""
    red, piv = rref(rows) if rows else ([], [])
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, p in zip(red, piv):
            v[p] = -row[f]
        basis.append(v)
    return basis


def solve(a: Sequence[Sequence[Fraction]], b: Sequence[Fraction]) -> Optional[List[Fraction]]:
    """A solution of A x = b, or None when inconsistent."""
    ncols = len(a[0]) if a else 0
    aug = [list(r) + [Fraction(y)] for r, y in zip(a, b)]
    red, piv = rref(aug)
    if ncols in piv:
        return None
    x = [Fraction(0)] * ncols
    for row, p in zip(red, piv):
        x[p] = row[-1]
    return x


def det(a: Mat) -> Fraction:
    m = [list(r) for r in a]
    n = len(m)
    out = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if m[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            m[c], m[p] = m[p], m[c]
            out = -out
        out *= m[c][c]
        for i in range(c + 1, n):
            if m[i][c]:
                f = m[i][c] / m[c][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return out


def inverse(a: Mat) -> Mat:
    n = len(a)
    red, piv = rref([list(r) + list(e) for r, e in zip(a, identity(n))])
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [r[n:] for r in red]


def charpoly(a, one=Fraction(1)) -> List:
    """[1, c_1, ..., c_n] with det(tI - A) = t^n + c_1 t^(n-1) + ... + c_n.

    Faddeev-LeVerrier; works over any field whose elements support ``/ k``.
    """
    n = len(a)
    coeffs = [one]
    m = [[0 * one] * n for _ in range(n)]
    for k in range(1, n + 1):
        for i in range(n):
            m[i][i] += coeffs[-1]
        m = [[sum((a[i][l] * m[l][j] for l in range(n)), 0 * one) for j in range(n)] for i in range(n)]
        coeffs.append(-sum((m[i][i] for i in range(n)), 0 * one) / k)
    return coeffs


def pfaffian(a: Mat) -> Fraction:
    """Pfaffian by expansion along the first row."""
    n = len(a)
    if n % 2:
        return Fraction(0)
    if n == 0:
        return Fraction(1)
    total = Fraction(0)
    rest = list(range(1, n))
    for k, j in enumerate(rest):
        if a[0][j] == 0:
            continue
        keep = [i for i in rest if i != j]
        minor = [[a[p][q] for q in keep] for p in keep]
        total += (-1) ** k * a[0][j] * pfaffian(minor)
    return total


def antidiagonal(n: int) -> Mat:
    out = zeros(n)
    for i in range(n):
        out[i][n - 1 - i] = Fraction(1)
    return out


def symplectic_form(n2: int) -> Mat:
    n = n2 // 2
    out = zeros(n2)
    for i in range(n):
        out[i][n2 - 1 - i] = Fraction(1)
        out[n2 - 1 - i][i] = Fraction(-1)
    return out


def frac_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def mat_json(a: Mat) -> List[List[str]]:
    return [[frac_str(x) for x in r] for r in a]


def random_rational(rng: random.Random, bound: int = PARAM_BOUND) -> Fraction:
    return Fraction(rng.randint(-bound, bound), rng.randint(1, bound))


# --- Lie algebras ---------------------------------------------------------------


ALGEBRA_FOR_FAMILY = {"A": "sl", "B": "so", "C": "sp", "D": "so"}


@dataclass(frozen=True)
class LieMatrix:
    n: int
    entries: Tuple[Tuple[Fraction, ...], ...]
    algebra_tag: str

    @classmethod
    def of(cls, m: Mat, tag: str) -> "LieMatrix":
        lm = cls(len(m), tuple(tuple(Fraction(x) for x in r) for r in m), tag)
        if not lm.in_algebra():
            raise ValueError(f"matrix is not in the {tag} algebra")
        return lm

    @property
    def mat(self) -> Mat:
        return [list(r) for r in self.entries]

    def form(self) -> Optional[Mat]:
        return _form(self.algebra_tag, self.n)

    def in_algebra(self) -> bool:
        m = self.mat
        if self.algebra_tag == "sl":
            return trace(m) == 0
        j = self.form()
        return is_zero(mat_add(mat_mul(transpose(m), j), mat_mul(j, m)))

    def to_json(self) -> List[List[str]]:
        return mat_json(self.mat)


def _form(tag: str, n: int) -> Optional[Mat]:
    if tag == "sl":
        return None
    if tag == "so":
        return antidiagonal(n)
    if tag == "sp":
        return symplectic_form(n)
    raise ValueError(f"unknown algebra tag {tag!r}")


def matrix_size(family: str, rank: int) -> int:
    if family == "A":
        return rank + 1
    if family == "B":
        return 2 * rank + 1
    if family in ("C", "D"):
        return 2 * rank
    raise ValueError(f"no matrix realization for family {family!r}")


def min_rank(family: str) -> int:
    return {"A": 1, "B": 2, "C": 2, "D": 3}[family]


def principal_grading(family: str, rank: int) -> List[int]:
    """Diagonal of the semisimple element h of a principal sl2."""
    n = rank
    if family == "A":
        return [n - 2 * i for i in range(n + 1)]
    if family == "C":
        return [2 * n - 1 - 2 * i for i in range(2 * n)]
    if family == "B":
        return [2 * n - 2 * i for i in range(2 * n + 1)]
    if family == "D":
        top = [2 * n - 2 - 2 * i for i in range(n)]
        return top + [-x for x in reversed(top)]
    raise ValueError(family)


def _constraint_rows(tag: str, n: int, cells: Sequence[Tuple[int, int]]) -> List[List[Fraction]]:
    """Linear conditions cutting the algebra out of span{E_ij : (i,j) in cells}."""
    if tag == "sl":
        diag = [Fraction(1) if i == j else Fraction(0) for i, j in cells]
        return [diag] if any(diag) else []
    j = _form(tag, n)
    images = []
    for (a, b) in cells:
        e = unit(n, a, b)
        images.append(flatten(mat_add(mat_mul(transpose(e), j), mat_mul(j, e))))
    return [list(r) for r in zip(*images)] if images else []


def graded_basis(family: str, rank: int) -> Dict[int, List[Mat]]:
    """Basis of each ad(h)-eigenspace of the algebra."""
    tag = ALGEBRA_FOR_FAMILY[family]
    n = matrix_size(family, rank)
    h = principal_grading(family, rank)
    grades: Dict[int, List[Tuple[int, int]]] = {}
    for i, j in product(range(n), repeat=2):
        grades.setdefault(h[i] - h[j], []).append((i, j))
    out = {}
    for k in sorted(grades):
        cells = grades[k]
        rows = _constraint_rows(tag, n, cells)
        vecs = nullspace(rows, len(cells)) if rows else [[Fraction(int(t == s)) for t in range(len(cells))] for s in range(len(cells))]
        mats = []
        for v in vecs:
            m = zeros(n)
            for c, (a, b) in zip(v, cells):
                m[a][b] = c
            mats.append(m)
        if mats:
            out[k] = mats
    return out


def ad_image(x: Mat, basis: Sequence[Mat]) -> List[List[Fraction]]:
    return [flatten(bracket(x, b)) for b in basis]


def ad_nullity(x: Mat, basis: Sequence[Mat]) -> int:
    return len(basis) - rank(ad_image(x, basis))


# --- Kostant slices ---------------------------------------------------------------


@dataclass(frozen=True)
class KostantSlice:
    family: str
    rank: int
    n: int
    algebra_tag: str
    h: Tuple[int, ...]
    X: Mat = field(repr=False)
    Y: Mat = field(repr=False)
    L_basis: Tuple = field(repr=False)
    L_degrees: Tuple[int, ...] = ()  # degree of the invariant paired with each L element
    basis: Tuple = field(repr=False, default=())
    invariant_names: Tuple[str, ...] = ()

    @property
    def label(self) -> str:
        return f"{self.algebra_tag}{self.n}"

    @property
    def dim(self) -> int:
        return len(self.basis)

    def point(self, b: Sequence[Fraction]) -> Mat:
        if len(b) != self.rank:
            raise ValueError("parameter vector of wrong length")
        m = [list(r) for r in self.X]
        for c, l in zip(b, self.L_basis):
            if c:
                m = mat_add(m, mat_scale(c, l))
        return m

    def invariants(self, m, one=Fraction(1)) -> List:
        """Chevalley generators at ``m``, ordered by degree."""
        cp = charpoly(m, one)
        if self.family == "A":
            return cp[2:]
        if self.family in ("B", "C"):
            return [cp[2 * k] for k in range(1, self.rank + 1)]
        j = _form("so", self.n)
        pf = pfaffian(mat_mul(j, m))
        vals = [cp[2 * k] for k in range(1, self.rank)] + [pf]
        order = sorted(range(self.rank), key=lambda i: self.invariant_degrees[i])
        return [vals[i] for i in order]

    @property
    def invariant_degrees(self) -> Tuple[int, ...]:
        """Degrees in the unsorted generator order used by ``invariants``."""
        if self.family == "A":
            return tuple(range(2, self.rank + 2))
        if self.family in ("B", "C"):
            return tuple(2 * k for k in range(1, self.rank + 1))
        return tuple(2 * k for k in range(1, self.rank)) + (self.rank,)

    def to_json(self) -> dict:
        return {
            "algebra": self.label,
            "type": f"{self.family}{self.rank}",
            "h": list(self.h),
            "X": mat_json(self.X),
            "Y": mat_json(self.Y),
            "L": [mat_json(l) for l in self.L_basis],
            "L_degrees": list(self.L_degrees),
            "invariants": list(self.invariant_names),
        }


def _invariant_names(family: str, rank: int) -> Tuple[str, ...]:
    if family == "A":
        return tuple(f"c{k}" for k in range(2, rank + 2))
    if family in ("B", "C"):
        return tuple(f"c{2 * k}" for k in range(1, rank + 1))
    names = [(2 * k, f"c{2 * k}") for k in range(1, rank)] + [(rank, "pf")]
    return tuple(n for _, n in sorted(names, key=lambda t: t[0]))


def build_kostant_slice(family: str, rank: int, max_size: int = MAX_MATRIX_SIZE) -> KostantSlice:
    if family not in ALGEBRA_FOR_FAMILY:
        raise ValueError(f"no classical matrix realization for family {family!r}")
    if rank < min_rank(family):
        raise ValueError(f"{family}{rank} is not a valid classical type here")
    n = matrix_size(family, rank)
    if n > max_size:
        raise SizeCapExceeded(f"matrix size {n} exceeds cap {max_size}")
    tag = ALGEBRA_FOR_FAMILY[family]
    hdiag = principal_grading(family, rank)
    h = zeros(n)
    for i, v in enumerate(hdiag):
        h[i][i] = Fraction(v)
    graded = graded_basis(family, rank)
    basis = [m for k in sorted(graded) for m in graded[k]]

    x = zeros(n)
    for m in graded[2]:
        x = mat_add(x, m)
    neg = graded[-2]
    ys = [flatten(bracket(x, m)) for m in neg]
    coeffs = solve([list(r) for r in zip(*ys)], flatten(h))
    if coeffs is None:
        raise FalsifiedSection("no Y in the -2 eigenspace completes the sl2 triple")
    y = zeros(n)
    for c, m in zip(coeffs, neg):
        y = mat_add(y, mat_scale(c, m))

    if bracket(h, x) != mat_scale(2, x) or bracket(h, y) != mat_scale(-2, y) or bracket(x, y) != h:
        raise FalsifiedSection("sl2 relations fail")

    l_basis, l_deg = [], []
    for k in sorted(graded):
        if k >= 0:
            continue
        comps = graded[k]
        images = ad_image(y, comps)
        for v in nullspace([list(r) for r in zip(*images)], len(comps)):
            m = zeros(n)
            for c, b in zip(v, comps):
                m = mat_add(m, mat_scale(c, b))
            l_basis.append(m)
            l_deg.append(-k // 2 + 1)
    order = sorted(range(len(l_basis)), key=lambda i: l_deg[i])
    sl = KostantSlice(
        family=family,
        rank=rank,
        n=n,
        algebra_tag=tag,
        h=tuple(hdiag),
        X=x,
        Y=y,
        L_basis=tuple(l_basis[i] for i in order),
        L_degrees=tuple(l_deg[i] for i in order),
        basis=tuple(basis),
        invariant_names=_invariant_names(family, rank),
    )
    cp = complement_property(sl)
    if not cp["pass"]:
        raise FalsifiedSection(f"complement property fails: {cp}")
    if tuple(sorted(sl.invariant_degrees)) != sl.L_degrees:
        raise FalsifiedSection("slice degrees do not match the invariant degrees")
    return sl


def complement_property(sl: KostantSlice) -> dict:
    im = ad_image(sl.X, sl.basis)
    r_im = rank(im)
    r_l = rank([flatten(l) for l in sl.L_basis])
    r_sum = rank(im + [flatten(l) for l in sl.L_basis])
    ok = r_l == sl.rank and r_im == sl.dim - sl.rank and r_sum == r_im + r_l
    members = all(LieMatrix.of(m, sl.algebra_tag) for m in (sl.X, sl.Y, *sl.L_basis))
    return {"dim_g": sl.dim, "rank_im_adX": r_im, "dim_L": r_l, "rank_sum": r_sum, "in_algebra": members, "pass": ok and members}


def sl2_relations(sl: KostantSlice) -> bool:
    h = zeros(sl.n)
    for i, v in enumerate(sl.h):
        h[i][i] = Fraction(v)
    return bracket(h, sl.X) == mat_scale(2, sl.X) and bracket(h, sl.Y) == mat_scale(-2, sl.Y) and bracket(sl.X, sl.Y) == h


def _lagrange_derivative_weights(npts: int) -> List[Fraction]:
    """Weights w_i with q'(0) = sum w_i q(i) for deg q < npts."""
    pts = list(range(npts))
    ws = []
    for i in pts:
        # derivative at 0 of prod_{j != i} (s - j) / (i - j)
        denom = Fraction(1)
        for j in pts:
            if j != i:
                denom *= i - j
        others = [j for j in pts if j != i]
        deriv = Fraction(0)
        for k in others:
            term = Fraction(1)
            for j in others:
                if j != k:
                    term *= -j
            deriv += term
        ws.append(deriv / denom)
    return ws


def exact_jacobian(sl: KostantSlice, b: Sequence[Fraction]) -> List[List[Fraction]]:
    """d invariants / d b, exactly, by interpolating along coordinate lines."""
    r = sl.rank
    jac = [[Fraction(0)] * r for _ in range(r)]
    degs = sorted(sl.invariant_degrees)
    for k in range(r):
        npts = max(degs) // sl.L_degrees[k] + 1
        ws = _lagrange_derivative_weights(npts)
        vals = []
        for s in range(npts):
            bb = list(b)
            bb[k] += s
            vals.append(sl.invariants(sl.point(bb)))
        for j in range(r):
            jac[j][k] = sum((w * v[j] for w, v in zip(ws, vals)), Fraction(0))
    return jac


def float_jacobian(sl: KostantSlice, b: Sequence[Fraction], step: float = 1e-3) -> List[List[float]]:
    """Central differences in floating point."""
    r = sl.rank
    jac = [[0.0] * r for _ in range(r)]

    def inv_at(bb):
        m = [[float(x) for x in row] for row in sl.point([Fraction(0)] * r)]
        for c, l in zip(bb, sl.L_basis):
            m = [[x + c * float(y) for x, y in zip(rm, rl)] for rm, rl in zip(m, l)]
        return [float(v) for v in sl.invariants(m, 1.0)]

    for k in range(r):
        hi = [float(x) for x in b]
        lo = list(hi)
        hi[k] += step
        lo[k] -= step
        a, c = inv_at(hi), inv_at(lo)
        for j in range(r):
            jac[j][k] = (a[j] - c[j]) / (2 * step)
    return jac


def recover_parameters(sl: KostantSlice, values: Sequence[Fraction]) -> Optional[List[Fraction]]:
    """Invert the invariant map on the slice, one degree group at a time.

    Within a degree group the invariants are affine in that group's
    parameters with constant linear part, and do not involve parameters of
    higher degree, so each group is a linear solve.
    """
    r = sl.rank
    b = [Fraction(0)] * r
    degs = sl.L_degrees
    for d in sorted(set(degs)):
        group = [k for k in range(r) if degs[k] == d]
        rows = group  # invariants are ordered by degree, like L
        base = sl.invariants(sl.point(b))
        cols = []
        for k in group:
            bb = list(b)
            bb[k] = Fraction(1)
            v = sl.invariants(sl.point(bb))
            cols.append([v[j] - base[j] for j in rows])
        a = [list(r_) for r_ in zip(*cols)]
        rhs = [values[j] - base[j] for j in rows]
        sol = solve(a, rhs)
        if sol is None:
            return None
        for k, s in zip(group, sol):
            b[k] = s
    return b


@dataclass
class SectionReport:
    kind: str
    label: str
    samples: int
    seed: int
    checks: Dict[str, bool]
    details: Dict = field(default_factory=dict)
    witness: Optional[dict] = None

    @property
    def passed(self) -> bool:
        return all(self.checks.values()) and self.witness is None

    def to_json(self) -> dict:
        out = {
            "kind": self.kind,
            "label": self.label,
            "samples": self.samples,
            "seed": self.seed,
            "checks": dict(sorted(self.checks.items())),
            "pass": self.passed,
            "details": self.details,
        }
        if self.witness is not None:
            out["witness"] = self.witness
        return out


def _float_close(a: List[List[float]], b: List[List[Fraction]], rtol: float) -> bool:
    for ra, rb in zip(a, b):
        scale = max(1.0, max(abs(float(x)) for x in rb))
        if any(abs(x - float(y)) > rtol * scale for x, y in zip(ra, rb)):
            return False
    return True


def verify_section_lie(sl: KostantSlice, samples: int = DEFAULT_SAMPLES, seed: int = DEFAULT_SEED, bound: int = PARAM_BOUND, float_check: bool = True) -> SectionReport:
    rng = random.Random(seed)
    checks = {"regular": True, "jacobian_nonsingular": True, "jacobian_float_agrees": True, "round_trip": True}
    witness = None
    zero = [Fraction(0)] * sl.rank
    base_nullity = ad_nullity(sl.X, sl.basis)
    for t in range(samples):
        b = zero if t == 0 else [random_rational(rng, bound) for _ in range(sl.rank)]
        m = sl.point(b)
        nul = ad_nullity(m, sl.basis)
        jac = exact_jacobian(sl, b)
        nonsing = det(jac) != 0
        fl_ok = True
        if float_check:
            fl_ok = _float_close(float_jacobian(sl, b), jac, 1e-4)
        values = sl.invariants(m)
        back = recover_parameters(sl, values)
        rt = back == list(b)
        step = {"regular": nul == sl.rank, "jacobian_nonsingular": nonsing, "jacobian_float_agrees": fl_ok, "round_trip": rt}
        for key, ok in step.items():
            if not ok:
                checks[key] = False
                if witness is None:
                    witness = {"sample": t, "check": key, "b": [frac_str(x) for x in b], "ad_nullity": nul}
    details = {
        "complement": complement_property(sl),
        "sl2_relations": sl2_relations(sl),
        "ad_nullity_at_X": base_nullity,
        "slice": sl.to_json(),
    }
    checks["complement"] = details["complement"]["pass"]
    checks["sl2_relations"] = details["sl2_relations"]
    return SectionReport("kostant", sl.label, samples, seed, checks, details, witness)


# --- Steinberg sections for SL(n) ----------------------------------------------------


@dataclass(frozen=True)
class SteinbergSlice:
    n: int

    def __post_init__(self) -> None:
        if self.n < 2:
            raise ValueError("n must be at least 2")

    def builder(self, a: Sequence[Fraction]) -> Mat:
        """Companion matrix of t^n - a_1 t^(n-1) + a_2 t^(n-2) - ... + (-1)^n."""
        n = self.n
        if len(a) != n - 1:
            raise ValueError("need n-1 parameters")
        c = [Fraction((-1) ** k) * Fraction(x) for k, x in enumerate(a, start=1)] + [Fraction((-1) ** n)]
        m = zeros(n)
        for i in range(1, n):
            m[i][i - 1] = Fraction(1)
        for i in range(n):
            m[i][n - 1] = -c[n - 1 - i]
        return m

    def parameters_of(self, m: Mat) -> List[Fraction]:
        cp = charpoly(m)
        return [(-1) ** k * cp[k] for k in range(1, self.n)]


def build_steinberg_slice(n: int) -> SteinbergSlice:
    return SteinbergSlice(n)


def cyclic_certificate(m: Mat) -> Fraction:
    """det of (e1, M e1, ..., M^(n-1) e1); nonzero iff e1 is cyclic."""
    n = len(m)
    v = [Fraction(int(i == 0)) for i in range(n)]
    cols = []
    for _ in range(n):
        cols.append(v)
        v = [sum((m[i][j] * v[j] for j in range(n)), Fraction(0)) for i in range(n)]
    return det(transpose(cols))


def commutant_nullity(m: Mat) -> int:
    n = len(m)
    basis = [unit(n, i, j) for i in range(n) for j in range(n)]
    return ad_nullity(m, basis)


def verify_section_group(st: SteinbergSlice, samples: int = 100, seed: int = DEFAULT_SEED, bound: int = PARAM_BOUND) -> SectionReport:
    rng = random.Random(seed)
    checks = {"det_one": True, "charpoly": True, "cyclic_vector": True, "commutant_nullity": True}
    witness = None
    for t in range(samples):
        a = [random_rational(rng, bound) for _ in range(st.n - 1)]
        m = st.builder(a)
        step = {
            "det_one": det(m) == 1,
            "charpoly": st.parameters_of(m) == a,
            "cyclic_vector": cyclic_certificate(m) != 0,
            "commutant_nullity": commutant_nullity(m) == st.n,
        }
        for key, ok in step.items():
            if not ok:
                checks[key] = False
                if witness is None:
                    witness = {"sample": t, "check": key, "a": [frac_str(x) for x in a], "matrix": mat_json(m)}
    details = {"example": mat_json(st.builder([Fraction(0)] * (st.n - 1)))}
    return SectionReport("steinberg", f"SL{st.n}", samples, seed, checks, details, witness)


# --- exp / log link -----------------------------------------------------------------


def nilpotent_log(u: Mat) -> Mat:
    """log(u) for unipotent u via the terminating series in N = u - I."""
    n = len(u)
    nil = mat_sub(u, identity(n))
    out = zeros(n)
    power = identity(n)
    for k in range(1, n + 1):
        power = mat_mul(power, nil)
        if is_zero(power):
            break
        out = mat_add(out, mat_scale(Fraction((-1) ** (k + 1), k), power))
    if not is_zero(mat_mul(power, nil)) and not is_zero(power):
        raise ValueError("matrix is not unipotent")
    return out


def nilpotent_exp(x: Mat) -> Mat:
    n = len(x)
    out = identity(n)
    power = identity(n)
    fact = 1
    for k in range(1, n + 1):
        power = mat_mul(power, x)
        if is_zero(power):
            break
        fact *= k
        out = mat_add(out, mat_scale(Fraction(1, fact), power))
    return out


def sl_basis(n: int) -> List[Mat]:
    basis = [unit(n, i, j) for i in range(n) for j in range(n) if i != j]
    for i in range(n - 1):
        basis.append(mat_sub(unit(n, i, i), unit(n, i + 1, i + 1)))
    return basis


def kostant_steinberg_link(n: int, max_size: int = 8) -> SectionReport:
    if n > max_size:
        raise SizeCapExceeded(f"n = {n} exceeds cap {max_size}")
    st = build_steinberg_slice(n)
    e = [Fraction(comb(n, k)) for k in range(1, n)]  # (t-1)^n
    s = st.builder(e)
    x = nilpotent_log(s)
    basis = sl_basis(n)
    nilp = is_zero(_power(x, n))
    nul = ad_nullity(x, basis)
    back = nilpotent_exp(x) == s
    s_inv = inverse(s)
    tangent = []
    for k in range(n - 1):
        ek = list(e)
        ek[k] += 1
        d = mat_sub(st.builder(ek), s)  # the builder is affine in a
        tangent.append(mat_mul(s_inv, d))
    traceless = all(trace(t) == 0 for t in tangent)
    im = ad_image(x, basis)
    r_im = rank(im)
    r_t = rank([flatten(t) for t in tangent])
    r_sum = rank(im + [flatten(t) for t in tangent])
    dim_g = n * n - 1
    complement = r_t == n - 1 and r_im == dim_g - (n - 1) and r_sum == r_im + r_t
    checks = {
        "unipotent_log_nilpotent": nilp and trace(x) == 0,
        "principal": nul == n - 1,
        "exp_round_trip": back,
        "tangent_in_sl": traceless,
        "complement": complement,
    }
    details = {
        "sigma_e": mat_json(s),
        "X": mat_json(x),
        "ad_nullity": nul,
        "rank_im_adX": r_im,
        "dim_image_dsigma": r_t,
        "rank_sum": r_sum,
    }
    witness = None if all(checks.values()) else {"failed": sorted(k for k, v in checks.items() if not v)}
    return SectionReport("link", f"SL{n}", 0, 0, checks, details, witness)


def _power(m: Mat, k: int) -> Mat:
    out = identity(len(m))
    for _ in range(k):
        out = mat_mul(out, m)
    return out


KOSTANT_TARGETS = (("A", 1), ("A", 2), ("A", 3), ("A", 4), ("A", 5), ("C", 2), ("C", 3), ("B", 2), ("B", 3), ("D", 4))


def parse_algebra(label: str) -> Tuple[str, int]:
    """'sl4' -> ('A', 3), 'sp6' -> ('C', 3), 'so8' -> ('D', 4), 'so7' -> ('B', 3)."""
    label = label.strip().lower()
    for tag in ("sl", "sp", "so"):
        if label.startswith(tag) and label[len(tag):].isdigit():
            n = int(label[len(tag):])
            if tag == "sl" and n >= 2:
                return "A", n - 1
            if tag == "sp" and n >= 4 and n % 2 == 0:
                return "C", n // 2
            if tag == "so" and n >= 5:
                return ("B", n // 2) if n % 2 else ("D", n // 2)
    raise ValueError(f"unrecognized algebra {label!r}")
