"""Exact rational linear algebra, plus a float root finder for univariate polynomials.

Everything except :func:`complex_roots` works over :class:`fractions.Fraction`
and never rounds.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floats are not allowed in exact matrices")
    return Fraction(x)


class RationalMatrix:
    """Immutable dense matrix of Fractions."""

    __slots__ = ("_rows", "rows", "cols")

    def __init__(self, entries: Iterable[Iterable], cols: int | None = None):
        rows = tuple(tuple(_frac(x) for x in row) for row in entries)
        if rows:
            width = len(rows[0])
            if any(len(r) != width for r in rows):
                raise ValueError("ragged matrix")
        else:
            width = cols or 0
        self._rows = rows
        self.rows = len(rows)
        self.cols = width

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)], cols=n)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RationalMatrix":
        return cls([[0] * cols for _ in range(rows)], cols=cols)

    @classmethod
    def diag(cls, values: Sequence) -> "RationalMatrix":
        n = len(values)
        return cls([[values[i] if i == j else 0 for j in range(n)] for i in range(n)], cols=n)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], nrows: int) -> "RationalMatrix":
        if not columns:
            return cls([[] for _ in range(nrows)], cols=0)
        return cls([[col[i] for col in columns] for i in range(nrows)])

    def to_lists(self) -> list[list[Fraction]]:
        return [list(r) for r in self._rows]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self._rows[i]

    def column(self, j: int) -> tuple[Fraction, ...]:
        return tuple(r[j] for r in self._rows)

    def __getitem__(self, ij):
        i, j = ij
        return self._rows[i][j]

    def __iter__(self):
        return iter(self._rows)

    def __eq__(self, other):
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        return self.shape == other.shape and self._rows == other._rows

    def __hash__(self):
        return hash((self.shape, self._rows))

    def __repr__(self):
        body = ", ".join("[" + ", ".join(str(x) for x in r) + "]" for r in self._rows)
        return f"RationalMatrix([{body}])"

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    @property
    def T(self) -> "RationalMatrix":
        return RationalMatrix([[self._rows[i][j] for i in range(self.rows)] for j in range(self.cols)],
                              cols=self.rows)

    def __add__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return RationalMatrix([[a + b for a, b in zip(r, s)] for r, s in zip(self._rows, other._rows)],
                              cols=self.cols)

    def __sub__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return RationalMatrix([[a - b for a, b in zip(r, s)] for r, s in zip(self._rows, other._rows)],
                              cols=self.cols)

    def __neg__(self) -> "RationalMatrix":
        return RationalMatrix([[-a for a in r] for r in self._rows], cols=self.cols)

    def scale(self, c) -> "RationalMatrix":
        c = _frac(c)
        return RationalMatrix([[c * a for a in r] for r in self._rows], cols=self.cols)

    def __matmul__(self, other):
        if isinstance(other, RationalMatrix):
            if self.cols != other.rows:
                raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
            ocols = [other.column(j) for j in range(other.cols)]
            return RationalMatrix(
                [[sum((a * b for a, b in zip(r, c) if a and b), Fraction(0)) for c in ocols]
                 for r in self._rows],
                cols=other.cols,
            )
        vec = [_frac(x) for x in other]
        if len(vec) != self.cols:
            raise ValueError("vector length mismatch")
        return [sum((a * b for a, b in zip(r, vec) if a and b), Fraction(0)) for r in self._rows]

    def __pow__(self, k: int) -> "RationalMatrix":
        if not self.is_square or k < 0:
            raise ValueError("matrix power needs a square matrix and k >= 0")
        result = RationalMatrix.identity(self.rows)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def is_symmetric(self) -> bool:
        return self.is_square and all(
            self._rows[i][j] == self._rows[j][i] for i in range(self.rows) for j in range(i)
        )

    def is_zero(self) -> bool:
        return all(x == 0 for r in self._rows for x in r)

    def stack(self, other: "RationalMatrix") -> "RationalMatrix":
        """Vertical concatenation."""
        if self.rows and other.rows and self.cols != other.cols:
            raise ValueError("column mismatch")
        cols = self.cols if self.rows else other.cols
        return RationalMatrix(list(self._rows) + list(other._rows), cols=cols)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "RationalMatrix":
        return RationalMatrix([[self._rows[i][j] for j in cols] for i in rows], cols=len(cols))

    def det(self) -> Fraction:
        if not self.is_square:
            raise ValueError("determinant of a non-square matrix")
        a = self.to_lists()
        n = self.rows
        det = Fraction(1)
        for c in range(n):
            p = next((r for r in range(c, n) if a[r][c] != 0), None)
            if p is None:
                return Fraction(0)
            if p != c:
                a[c], a[p] = a[p], a[c]
                det = -det
            det *= a[c][c]
            inv = 1 / a[c][c]
            for r in range(c + 1, n):
                f = a[r][c] * inv
                if f:
                    a[r] = [x - f * y for x, y in zip(a[r], a[c])]
        return det

    def inverse(self) -> "RationalMatrix":
        if not self.is_square:
            raise ValueError("inverse of a non-square matrix")
        n = self.rows
        aug = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(self._rows)]
        red, pivots = _rref(aug, n)
        if len(pivots) < n:
            raise ZeroDivisionError("singular matrix")
        return RationalMatrix([r[n:] for r in red], cols=n)

    def rank(self) -> int:
        _, pivots = _rref(self.to_lists(), self.cols)
        return len(pivots)

    def rref(self) -> tuple["RationalMatrix", list[int]]:
        red, pivots = _rref(self.to_lists(), self.cols)
        return RationalMatrix(red, cols=self.cols), pivots


def _rref(a: list[list[Fraction]], ncols: int) -> tuple[list[list[Fraction]], list[int]]:
    """In-place reduced row echelon form restricted to the first ``ncols`` columns."""
    pivots: list[int] = []
    r = 0
    nrows = len(a)
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(nrows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    return a, pivots


def kernel_basis(m: RationalMatrix) -> list[tuple[Fraction, ...]]:
    """Exact basis of the right null space, one vector per free column."""
    red, pivots = _rref(m.to_lists(), m.cols)
    free = [c for c in range(m.cols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * m.cols
        v[f] = Fraction(1)
        for row, pc in zip(red, pivots):
            v[pc] = -row[f]
        basis.append(tuple(v))
    return basis


def column_space_basis(vectors: Sequence[Sequence]) -> list[tuple[Fraction, ...]]:
    """Canonical (RREF) basis of the span of ``vectors``; equal spans give equal output."""
    if not vectors:
        return []
    red, pivots = _rref([[_frac(x) for x in v] for v in vectors], len(vectors[0]))
    return [tuple(red[i]) for i in range(len(pivots))]


def solve_in_span(basis: Sequence[Sequence], target: Sequence) -> list[Fraction] | None:
    """Coefficients c with sum c_i basis_i == target, or None when target is outside the span."""
    k = len(basis)
    if k == 0:
        return [] if all(_frac(x) == 0 for x in target) else None
    n = len(target)
    aug = [[_frac(basis[j][i]) for j in range(k)] + [_frac(target[i])] for i in range(n)]
    red, pivots = _rref(aug, k + 1)
    if k in pivots:
        return None
    coeffs = [Fraction(0)] * k
    for row, pc in zip(red, pivots):
        coeffs[pc] = row[k]
    return coeffs


@dataclass(frozen=True)
class InertiaTriple:
    n_plus: int
    n_zero: int
    n_minus: int

    @property
    def signature(self) -> int:
        return self.n_plus - self.n_minus

    @property
    def dim(self) -> int:
        return self.n_plus + self.n_zero + self.n_minus

    def __str__(self):
        return f"({self.n_plus}, {self.n_zero}, {self.n_minus})"


def inertia(s: RationalMatrix) -> InertiaTriple:
    """Sylvester inertia by symmetric Gaussian elimination.

    Uses 1x1 pivots while a nonzero diagonal entry remains, and a 2x2 hyperbolic
    pivot [[0, b], [b, 0]] (one positive, one negative square) otherwise.
    """
    if not s.is_symmetric():
        raise ValueError("inertia needs a symmetric matrix")
    a = s.to_lists()
    active = list(range(s.rows))
    plus = minus = 0
    while active:
        i = next((k for k in active if a[k][k] != 0), None)
        if i is not None:
            d = a[i][i]
            if d > 0:
                plus += 1
            else:
                minus += 1
            active.remove(i)
            row = a[i]
            for j in active:
                f = a[j][i] / d
                if f:
                    for k in active:
                        a[j][k] -= f * row[k]
            continue
        pair = next(((k, l) for k in active for l in active if k < l and a[k][l] != 0), None)
        if pair is None:
            break
        i, j = pair
        b = a[i][j]
        plus += 1
        minus += 1
        active.remove(i)
        active.remove(j)
        # inverse of [[0, b], [b, 0]] is [[0, 1/b], [1/b, 0]]
        inv_b = 1 / b
        ri, rj = a[i], a[j]
        for p in active:
            cpi, cpj = a[p][i], a[p][j]
            if not (cpi or cpj):
                continue
            for q in active:
                corr = (cpi * rj[q] + cpj * ri[q]) * inv_b
                if corr:
                    a[p][q] -= corr
    return InertiaTriple(plus, len(active), minus)


# Univariate polynomials: coefficient tuples, lowest degree first.

def _trim(c: list) -> list:
    while c and c[-1] == 0:
        c.pop()
    return c


def upoly_mul(p: Sequence, q: Sequence) -> list[Fraction]:
    if not p or not q:
        return []
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return _trim(out)


def upoly_sub(p: Sequence, q: Sequence) -> list[Fraction]:
    n = max(len(p), len(q))
    return _trim([(_frac(p[i]) if i < len(p) else 0) - (_frac(q[i]) if i < len(q) else 0)
                  for i in range(n)])


def upoly_divmod(p: Sequence, q: Sequence) -> tuple[list[Fraction], list[Fraction]]:
    q = _trim([_frac(x) for x in q])
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    r = _trim([_frac(x) for x in p])
    if len(r) < len(q):
        return [], r
    quot = [Fraction(0)] * (len(r) - len(q) + 1)
    lead = q[-1]
    while len(r) >= len(q):
        c = r[-1] / lead
        shift = len(r) - len(q)
        quot[shift] = c
        for i, b in enumerate(q):
            r[shift + i] -= c * b
        r.pop()
        _trim(r)
    return _trim(quot), r


def upoly_deriv(p: Sequence) -> list[Fraction]:
    return _trim([i * _frac(p[i]) for i in range(1, len(p))])


def upoly_gcd(p: Sequence, q: Sequence) -> list[Fraction]:
    """Monic gcd over the rationals."""
    a = _trim([_frac(x) for x in p])
    b = _trim([_frac(x) for x in q])
    while b:
        _, r = upoly_divmod(a, b)
        a, b = b, r
    if not a:
        return []
    return [x / a[-1] for x in a]


def upoly_eval_matrix(p: Sequence, m: RationalMatrix) -> RationalMatrix:
    """p(M) by Horner's rule."""
    n = m.rows
    acc = RationalMatrix.zeros(n, n)
    eye = RationalMatrix.identity(n)
    for c in reversed(list(p)):
        acc = acc @ m + eye.scale(c)
    return acc


def char_poly(m: RationalMatrix) -> tuple[Fraction, ...]:
    """Characteristic polynomial det(tI - M), lowest coefficient first (monic).

    Reduces M to upper Hessenberg form by exact similarity transforms, then
    expands the Hessenberg determinant by the usual three-term recurrence.
    """
    if not m.is_square:
        raise ValueError("characteristic polynomial of a non-square matrix")
    n = m.rows
    h = m.to_lists()
    for col in range(n - 2):
        piv = next((i for i in range(col + 1, n) if h[i][col] != 0), None)
        if piv is None:
            continue
        if piv != col + 1:
            h[piv], h[col + 1] = h[col + 1], h[piv]
            for r in h:
                r[piv], r[col + 1] = r[col + 1], r[piv]
        t = h[col + 1][col]
        for i in range(col + 2, n):
            u = h[i][col] / t
            if u:
                h[i] = [x - u * y for x, y in zip(h[i], h[col + 1])]
                for r in h:
                    r[col + 1] += u * r[i]
    # p[k] = char poly of the leading k x k block
    polys: list[list[Fraction]] = [[Fraction(1)]]
    for k in range(1, n + 1):
        cur = upoly_mul([-h[k - 1][k - 1], Fraction(1)], polys[k - 1])
        t = Fraction(1)
        for i in range(k - 1, 0, -1):
            t *= h[i][i - 1]
            if t == 0:
                break
            c = h[i - 1][k - 1] * t
            if c:
                cur = upoly_sub(cur, [c * x for x in polys[i - 1]])
        polys.append(cur)
    out = list(polys[n])
    out += [Fraction(0)] * (n + 1 - len(out))
    return tuple(out)


@dataclass(frozen=True)
class ComplexPoint:
    coordinates: tuple[complex, ...]
    residual: float = 0.0

    def __len__(self):
        return len(self.coordinates)

    def __getitem__(self, i):
        return self.coordinates[i]


class RootFindingError(RuntimeError):
    pass


def _scaled_residual(coeffs_high: np.ndarray, z: complex) -> float:
    val = np.polyval(coeffs_high, z)
    scale = np.polyval(np.abs(coeffs_high), abs(z))
    return float(abs(val) / scale) if scale else float(abs(val))


def complex_roots(p: Sequence, tol: float = 1e-10, seed: int = 0,
                  max_iter: int = 1000) -> list[ComplexPoint]:
    """All complex roots of p (coefficients lowest degree first) with multiplicity.

    Aberth-Ehrlich simultaneous iteration from points on a circle whose phase
    offset is drawn from ``seed``. Exact zero roots are split off before
    iterating. Each accepted root has scaled residual |p(z)| / sum|a_i||z|^i <= tol.
    """
    coeffs = list(p)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    if not coeffs:
        raise ValueError("the zero polynomial has no finite root set")
    zeros = 0
    while coeffs[zeros] == 0:
        zeros += 1
    coeffs = coeffs[zeros:]
    roots: list[complex] = [0j] * zeros
    deg = len(coeffs) - 1
    if deg > 0:
        a = np.array([complex(c) for c in reversed(coeffs)])
        a = a / a[0]
        roots.extend(_aberth(a, tol, seed, max_iter))
    out = []
    full = np.array([complex(c) for c in reversed(coeffs)])
    full = full / full[0]
    for z in roots:
        # exact zeros were split off; the rest are checked against the deflated polynomial
        res = _scaled_residual(full, z) if z != 0 else 0.0
        if res > tol:
            raise RootFindingError(f"root {z} has scaled residual {res:.3e} > {tol:.1e}")
        out.append(ComplexPoint((complex(z),), res))
    return out


def _aberth(a: np.ndarray, tol: float, seed: int, max_iter: int) -> list[complex]:
    deg = len(a) - 1
    if deg == 1:
        return [-a[1]]
    rng = np.random.default_rng(seed)
    # Fujiwara bound on root moduli; start inside it near the geometric mean modulus
    bound = 2 * max(abs(a[k]) ** (1.0 / k) for k in range(1, deg + 1))
    r0 = abs(a[-1]) ** (1.0 / deg)
    if not (0 < r0 < bound):
        r0 = bound / 2
    phase = rng.uniform(0, 2 * math.pi)
    z = np.array([r0 * cmath.exp(1j * (2 * math.pi * k / deg + phase + 0.4)) for k in range(deg)])
    da = np.polyder(a)
    for _ in range(max_iter):
        pv = np.polyval(a, z)
        dv = np.polyval(da, z)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(dv != 0, pv / dv, 0)
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, 1)
            s = (1 / diff).sum(axis=1) - 1
            w = ratio / (1 - ratio * s)
        w = np.where(np.isfinite(w), w, 0)
        z = z - w
        if np.all(np.abs(w) <= 1e-15 * np.maximum(1, np.abs(z))):
            break
        if all(_scaled_residual(a, zk) <= tol * 1e-3 for zk in z) and np.all(np.abs(w) <= 1e-12 * np.maximum(1, np.abs(z))):
            break
    else:
        if not all(_scaled_residual(a, zk) <= tol for zk in z):
            raise RootFindingError(f"Aberth iteration did not converge in {max_iter} steps")
    return [complex(x) for x in z]
