"""Multivariate polynomials over the rationals and polynomial 1-forms.

A :class:`Poly` is a map from exponent tuples to nonzero Fractions in a fixed
number of variables. A :class:`OneForm` is the coefficient vector (A_1, ..., A_n)
of sum A_i dx_i.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Iterable, Mapping, Sequence

from quotsig.exactlin import ComplexPoint, RationalMatrix

Monomial = tuple[int, ...]


def grevlex_key(m: Monomial):
    return (sum(m), tuple(-e for e in reversed(m)))


class Poly:
    __slots__ = ("nvars", "_terms", "_hash")

    def __init__(self, nvars: int, terms: Mapping[Monomial, object] | None = None):
        self.nvars = nvars
        clean: dict[Monomial, Fraction] = {}
        if terms:
            for m, c in terms.items():
                if len(m) != nvars:
                    raise ValueError(f"monomial {m} does not have {nvars} exponents")
                c = c if isinstance(c, Fraction) else Fraction(c)
                if c:
                    clean[tuple(m)] = c
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, nvars: int, terms: dict) -> "Poly":
        p = cls.__new__(cls)
        p.nvars = nvars
        p._terms = terms
        p._hash = None
        return p

    @classmethod
    def constant(cls, nvars: int, c) -> "Poly":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def variable(cls, nvars: int, i: int) -> "Poly":
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): 1})

    @classmethod
    def monomial(cls, m: Sequence[int], c=1) -> "Poly":
        return cls(len(m), {tuple(m): c})

    @property
    def terms(self) -> dict[Monomial, Fraction]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def coefficient(self, m: Monomial) -> Fraction:
        return self._terms.get(tuple(m), Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def __len__(self):
        return len(self._terms)

    def degree(self) -> int:
        return max((sum(m) for m in self._terms), default=-1)

    def low_degree(self) -> int:
        return min((sum(m) for m in self._terms), default=-1)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.nvars == other.nvars and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self == Poly.constant(self.nvars, other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self._terms.items())))
        return self._hash

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.nvars != self.nvars:
                raise ValueError(f"variable count mismatch: {self.nvars} vs {other.nvars}")
            return other
        return Poly.constant(self.nvars, other)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self._terms)
        for m, c in other._terms.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return Poly._raw(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(self.nvars, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Poly):
            c = Fraction(other)
            if not c:
                return Poly(self.nvars)
            return Poly._raw(self.nvars, {m: c * v for m, v in self._terms.items()})
        other = self._coerce(other)
        out: dict[Monomial, Fraction] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                out[m] = out.get(m, 0) + c1 * c2
        return Poly._raw(self.nvars, {m: c for m, c in out.items() if c})

    __rmul__ = __mul__

    def __truediv__(self, c):
        c = Fraction(c)
        return Poly._raw(self.nvars, {m: v / c for m, v in self._terms.items()})

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result = Poly.constant(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def mul_monomial(self, m: Monomial, c=1) -> "Poly":
        c = Fraction(c)
        return Poly._raw(self.nvars, {tuple(a + b for a, b in zip(k, m)): c * v
                                      for k, v in self._terms.items()})

    def derivative(self, i: int) -> "Poly":
        out = {}
        for m, c in self._terms.items():
            if m[i]:
                e = list(m)
                e[i] -= 1
                out[tuple(e)] = c * m[i]
        return Poly._raw(self.nvars, out)

    def truncate(self, max_degree: int) -> "Poly":
        """Drop every term of total degree above ``max_degree``."""
        return Poly._raw(self.nvars, {m: c for m, c in self._terms.items() if sum(m) <= max_degree})

    def evaluate(self, point: Sequence) -> Fraction:
        point = [Fraction(x) for x in point]
        total = Fraction(0)
        for m, c in self._terms.items():
            term = c
            for x, e in zip(point, m):
                if e:
                    term *= x ** e
            total += term
        return total

    def compose_linear(self, matrix: RationalMatrix) -> "Poly":
        """p(M y) for an n x k matrix M: a polynomial in k new variables."""
        if matrix.rows != self.nvars:
            raise ValueError("matrix row count must equal the variable count")
        k = matrix.cols
        images = [Poly(k, {tuple(int(j == c) for j in range(k)): matrix[i, c] for c in range(k)})
                  for i in range(self.nvars)]
        return self.substitute(images)

    def substitute(self, images: Sequence["Poly"]) -> "Poly":
        """Replace x_i by images[i] (all in a common ring)."""
        if len(images) != self.nvars:
            raise ValueError("need one image per variable")
        if not self._terms:
            return Poly(images[0].nvars if images else 0)
        target = images[0].nvars if images else 0
        powers: list[dict[int, Poly]] = [{0: Poly.constant(target, 1)} for _ in images]

        def power(i: int, e: int) -> Poly:
            cache = powers[i]
            if e not in cache:
                cache[e] = power(i, e - 1) * images[i]
            return cache[e]

        total = Poly(target)
        for m, c in self._terms.items():
            term = Poly.constant(target, c)
            for i, e in enumerate(m):
                if e:
                    term = term * power(i, e)
            total = total + term
        return total

    def shift(self, point: Sequence) -> "Poly":
        """p(x + point)."""
        n = self.nvars
        return self.substitute([Poly.variable(n, i) + Fraction(point[i]) for i in range(n)])

    def sorted_terms(self) -> list[tuple[Monomial, Fraction]]:
        """Terms in descending graded reverse lexicographic order."""
        return sorted(self._terms.items(), key=lambda t: grevlex_key(t[0]), reverse=True)

    def to_str(self, names: Sequence[str] | None = None) -> str:
        names = list(names) if names is not None else default_names(self.nvars)
        if not self._terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            factors = []
            for name, e in zip(names, m):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            mag = abs(c)
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = str(mag) + "*" + "*".join(factors)
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"Poly({self.nvars}, {self.to_str()!r})"


def default_names(n: int) -> list[str]:
    return [f"x{i + 1}" for i in range(n)]


def differential(f: Poly) -> "OneForm":
    return OneForm(tuple(f.derivative(i) for i in range(f.nvars)))


def poly_det(rows: Sequence[Sequence[Poly]]) -> Poly:
    """Determinant of a square polynomial matrix by Laplace expansion over column subsets."""
    n = len(rows)
    if n == 0:
        raise ValueError("empty matrix")
    nvars = rows[0][0].nvars
    memo: dict[tuple[int, ...], Poly] = {}

    def minor(r: int, cols: tuple[int, ...]) -> Poly:
        # determinant of rows r..n-1 against the column set ``cols``
        if r == n:
            return Poly.constant(nvars, 1)
        if cols in memo:
            return memo[cols]
        total = Poly(nvars)
        for k, c in enumerate(cols):
            entry = rows[r][c]
            if entry:
                sub = minor(r + 1, cols[:k] + cols[k + 1:])
                term = entry * sub
                total = total - term if k % 2 else total + term
        memo[cols] = total
        return total

    return minor(0, tuple(range(n)))


@dataclass(frozen=True)
class OneForm:
    components: tuple[Poly, ...]

    def __post_init__(self):
        comps = tuple(self.components)
        object.__setattr__(self, "components", comps)
        if not comps:
            raise ValueError("a 1-form needs at least one component")
        n = comps[0].nvars
        if any(c.nvars != n for c in comps):
            raise ValueError("components live in different rings")
        if len(comps) != n:
            raise ValueError(f"{len(comps)} components for {n} variables")

    @property
    def nvars(self) -> int:
        return len(self.components)

    def __add__(self, other: "OneForm") -> "OneForm":
        return OneForm(tuple(a + b for a, b in zip(self.components, other.components)))

    def scale(self, c) -> "OneForm":
        return OneForm(tuple(a * c for a in self.components))

    def shift(self, point: Sequence) -> "OneForm":
        return OneForm(tuple(a.shift(point) for a in self.components))

    def transform(self, g: RationalMatrix) -> "OneForm":
        """Pull-back of the form by x -> g^-1 x, i.e. components (g^-1)^T A(g^-1 x)."""
        ginv = g.inverse()
        moved = [a.compose_linear(ginv) for a in self.components]
        n = self.nvars
        return OneForm(tuple(
            reduce(lambda acc, i: acc + moved[i] * ginv[i, j], range(n), Poly(n)) for j in range(n)
        ))

    def is_invariant(self, g: RationalMatrix) -> bool:
        return self.transform(g) == self

    def to_strs(self, names: Sequence[str] | None = None) -> list[str]:
        return [c.to_str(names) for c in self.components]


def jacobian_matrix(omega: OneForm) -> list[list[Poly]]:
    n = omega.nvars
    return [[omega.components[i].derivative(j) for j in range(n)] for i in range(n)]


def jacobian_det(omega: OneForm) -> Poly:
    return poly_det(jacobian_matrix(omega))


def act_linear(p: Poly, g: RationalMatrix) -> Poly:
    """p composed with g^-1, the left action of g on functions."""
    try:
        ginv = g.inverse()
    except ZeroDivisionError:
        raise ValueError("act_linear needs an invertible matrix") from None
    return p.compose_linear(ginv)


def eval_complex(p: Poly, z) -> complex:
    """Float evaluation at a complex point, nested Horner in the first variable.

    Rounding error grows roughly like deg(p) * max|z|^deg * sum|c| * machine epsilon.
    """
    coords = z.coordinates if isinstance(z, ComplexPoint) else tuple(z)
    if len(coords) != p.nvars:
        raise ValueError("dimension mismatch")
    return _horner(list(p.items()), [complex(c) for c in coords], 0)


def _horner(terms: list, coords: list[complex], var: int) -> complex:
    if not terms:
        return 0j
    if var == len(coords):
        return complex(sum(float(c) for _, c in terms))
    by_power: dict[int, list] = {}
    for m, c in terms:
        by_power.setdefault(m[var], []).append((m, c))
    acc = 0j
    x = coords[var]
    for e in range(max(by_power), -1, -1):
        acc = acc * x + _horner(by_power.get(e, []), coords, var + 1)
    return acc


class PolySyntaxError(ValueError):
    def __init__(self, message: str, column: int):
        super().__init__(f"column {column}: {message}")
        self.message = message
        self.column = column


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\^|\*|\+|-|/|\(|\))|(\S))")


def _tokenize(text: str):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        if m.group(4) is not None:
            raise PolySyntaxError(f"unexpected character {m.group(4)!r}", m.start(4) + 1)
        if m.group(1) is not None:
            out.append(("num", int(m.group(1)), m.start(1) + 1))
        elif m.group(2) is not None:
            out.append(("var", m.group(2), m.start(2) + 1))
        elif m.group(3) is not None:
            out.append((m.group(3), m.group(3), m.start(3) + 1))
        pos = m.end()
    out.append(("end", None, len(text) + 1))
    return out


def parse_poly(text: str, names: Sequence[str]) -> Poly:
    """Parse a polynomial built from numbers, ``p/q`` rationals, variables, + - * ^ and parentheses."""
    names = list(names)
    index = {name: i for i, name in enumerate(names)}
    n = len(names)
    toks = _tokenize(text)
    pos = 0

    def peek():
        return toks[pos]

    def describe(tok):
        return "end of input" if tok[0] == "end" else repr(tok[1])

    def take(kind=None):
        nonlocal pos
        tok = toks[pos]
        if kind is not None and tok[0] != kind:
            want = "a number" if kind == "num" else repr(kind)
            raise PolySyntaxError(f"expected {want}, found {describe(tok)}", tok[2])
        pos += 1
        return tok

    def atom() -> Poly:
        tok = peek()
        if tok[0] == "num":
            take()
            value = Fraction(tok[1])
            if peek()[0] == "/":
                take()
                den = take("num")
                if den[1] == 0:
                    raise PolySyntaxError("zero denominator", den[2])
                value /= den[1]
            return Poly.constant(n, value)
        if tok[0] == "var":
            take()
            if tok[1] not in index:
                raise PolySyntaxError(f"unknown variable {tok[1]!r}", tok[2])
            return Poly.variable(n, index[tok[1]])
        if tok[0] == "(":
            take()
            inner = expr()
            take(")")
            return inner
        raise PolySyntaxError(f"expected a number, variable or '(', found {describe(tok)}", tok[2])

    def power() -> Poly:
        if peek()[0] in ("+", "-"):
            sign = -1 if take()[0] == "-" else 1
            return power() * sign
        base = atom()
        if peek()[0] == "^":
            take()
            return base ** take("num")[1]
        return base

    def term() -> Poly:
        p = power()
        while peek()[0] == "*":
            take()
            p = p * power()
        return p

    def expr() -> Poly:
        total = Poly(n)
        sign = 1
        if peek()[0] in ("+", "-"):
            sign = -1 if take()[0] == "-" else 1
        total = total + term() * sign
        while peek()[0] in ("+", "-"):
            sign = -1 if take()[0] == "-" else 1
            total = total + term() * sign
        return total

    total = expr()
    if peek()[0] != "end":
        tok = peek()
        raise PolySyntaxError(f"unexpected {describe(tok)}", tok[2])
    return total
