"""The Burnside ring A(G) of a finite abelian group and its reductions.

Subgroups are keyed by their sorted element tuples (from the subgroup
lattice). An element of A(G) is an integer combination of classes [G/H]; for a
subgroup P <= G the ring A(P) is represented by the same class with
``ambient = P``.
"""

from __future__ import annotations

import cmath
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from quotsig.group import AbelianGroup, Element, SubgroupLattice, cyclotomic

Subgroup = tuple[Element, ...]


class BurnsideError(ValueError):
    pass


@dataclass(frozen=True)
class BurnsideElement:
    group: AbelianGroup
    ambient: Subgroup
    coefficients: Mapping[Subgroup, int] = field(default_factory=dict)

    def __post_init__(self):
        amb = set(self.ambient)
        clean = {}
        for h, c in dict(self.coefficients).items():
            h = tuple(sorted(h))
            if not set(h) <= amb:
                raise BurnsideError(f"{h} is not a subgroup of the ambient group")
            if c:
                clean[h] = clean.get(h, 0) + int(c)
        object.__setattr__(self, "ambient", tuple(sorted(self.ambient)))
        object.__setattr__(self, "coefficients", {h: c for h, c in clean.items() if c})

    def _check(self, other: "BurnsideElement"):
        if self.group != other.group or self.ambient != other.ambient:
            raise BurnsideError("elements of different Burnside rings")

    def __eq__(self, other):
        if not isinstance(other, BurnsideElement):
            return NotImplemented
        return (self.group == other.group and self.ambient == other.ambient
                and self.coefficients == other.coefficients)

    def __hash__(self):
        return hash((self.group, self.ambient, frozenset(self.coefficients.items())))

    def __add__(self, other: "BurnsideElement") -> "BurnsideElement":
        self._check(other)
        out = dict(self.coefficients)
        for h, c in other.coefficients.items():
            out[h] = out.get(h, 0) + c
        return BurnsideElement(self.group, self.ambient, out)

    def __neg__(self):
        return BurnsideElement(self.group, self.ambient, {h: -c for h, c in self.coefficients.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, k: int) -> "BurnsideElement":
        return BurnsideElement(self.group, self.ambient, {h: k * c for h, c in self.coefficients.items()})

    def __mul__(self, other: "BurnsideElement") -> "BurnsideElement":
        return multiply(self, other)


def burnside_class(group: AbelianGroup, h: Sequence[Element], ambient: Sequence[Element] | None = None,
                   coefficient: int = 1) -> BurnsideElement:
    amb = tuple(ambient) if ambient is not None else group.elements
    return BurnsideElement(group, amb, {tuple(sorted(h)): coefficient})


def one(group: AbelianGroup, ambient: Sequence[Element] | None = None) -> BurnsideElement:
    amb = tuple(ambient) if ambient is not None else group.elements
    return burnside_class(group, amb, amb)


def _intersect(h: Subgroup, k: Subgroup) -> Subgroup:
    ks = set(k)
    return tuple(x for x in h if x in ks)


def multiply(a: BurnsideElement, b: BurnsideElement) -> BurnsideElement:
    """[A/H][A/K] = (|A||H n K| / (|H||K|)) [A/(H n K)] for abelian A, extended bilinearly."""
    a._check(b)
    order = len(a.ambient)
    out: dict[Subgroup, int] = {}
    for h, ch in a.coefficients.items():
        for k, ck in b.coefficients.items():
            inter = _intersect(h, k)
            mult, rem = divmod(order * len(inter), len(h) * len(k))
            assert rem == 0
            out[inter] = out.get(inter, 0) + ch * ck * mult
    return BurnsideElement(a.group, a.ambient, out)


def r0(a: BurnsideElement) -> int:
    """Euler characteristic of the quotient: [G/H] -> 1."""
    return sum(a.coefficients.values())


def r1(a: BurnsideElement) -> int:
    """Orbifold Euler characteristic: [G/H] -> |H|."""
    return sum(c * len(h) for h, c in a.coefficients.items())


def cardinality(a: BurnsideElement) -> int:
    """Number of points of the virtual G-set: [G/H] -> |G/H|."""
    return sum(c * (len(a.ambient) // len(h)) for h, c in a.coefficients.items())


def induce(a: BurnsideElement, ambient: Sequence[Element] | None = None) -> BurnsideElement:
    """Induction A(P) -> A(G) for P <= G: [P/H] -> [G/H]."""
    target = tuple(sorted(ambient)) if ambient is not None else a.group.elements
    if not set(a.ambient) <= set(target):
        raise BurnsideError("induction target does not contain the source group")
    return BurnsideElement(a.group, target, dict(a.coefficients))


@dataclass(frozen=True)
class RepRingElement:
    """Virtual complex representation of an abelian group, by irreducible-character multiplicity.

    Characters are indexed by dual exponent tuples b; chi_b(a) = exp(2 pi i <a, b>).
    """

    group: AbelianGroup
    multiplicities: Mapping[Element, int]

    def __post_init__(self):
        object.__setattr__(self, "multiplicities",
                           {b: int(c) for b, c in dict(self.multiplicities).items() if c})

    def __eq__(self, other):
        if not isinstance(other, RepRingElement):
            return NotImplemented
        return self.group == other.group and self.multiplicities == other.multiplicities

    def __hash__(self):
        return hash((self.group, frozenset(self.multiplicities.items())))

    def __add__(self, other: "RepRingElement") -> "RepRingElement":
        out = dict(self.multiplicities)
        for b, c in other.multiplicities.items():
            out[b] = out.get(b, 0) + c
        return RepRingElement(self.group, out)

    def __mul__(self, other: "RepRingElement") -> "RepRingElement":
        out: dict[Element, int] = {}
        for b1, c1 in self.multiplicities.items():
            for b2, c2 in other.multiplicities.items():
                b = self.group.add(b1, b2)
                out[b] = out.get(b, 0) + c1 * c2
        return RepRingElement(self.group, out)

    @property
    def conductor(self) -> int:
        return math.lcm(1, *self.group.invariant_factors)

    def value(self, a: Element) -> tuple[int, ...]:
        """chi(a) in Z[zeta_M] (M the exponent of G) reduced modulo the M-th cyclotomic polynomial.

        Returned as integer coefficients of 1, zeta, ..., zeta^(phi(M)-1).
        """
        m = self.conductor
        raw = [0] * m
        for b, c in self.multiplicities.items():
            k = int(self.group.dual_pairing(a, b) * m)
            raw[k] += c
        phi = cyclotomic(m)
        deg = len(phi) - 1
        coeffs = [Fraction(x) for x in raw]
        for top in range(len(coeffs) - 1, deg - 1, -1):
            c = coeffs[top]
            if c:
                for i, p in enumerate(phi):
                    coeffs[top - deg + i] -= c * p
        return tuple(int(x) for x in coeffs[:deg])

    def character_values(self) -> dict[Element, tuple[int, ...]]:
        return {a: self.value(a) for a in self.group.elements}

    def complex_value(self, a: Element) -> complex:
        return sum(c * cmath.exp(2j * cmath.pi * float(self.group.dual_pairing(a, b)))
                   for b, c in self.multiplicities.items())

    def real_value(self, a: Element) -> int | None:
        """The exact integer value when chi(a) is a rational integer, else None."""
        v = self.value(a)
        return v[0] if all(x == 0 for x in v[1:]) else None


def to_rep_ring(a: BurnsideElement) -> RepRingElement:
    """Linearization: [G/H] -> sum of the characters of G trivial on H.

    Only defined for elements of A(G) itself (ambient = whole group).
    """
    group = a.group
    if set(a.ambient) != set(group.elements):
        raise BurnsideError("to_rep_ring expects an element of A(G); induce first")
    out: dict[Element, int] = {}
    for h, c in a.coefficients.items():
        for b in group.elements:
            if all(group.dual_pairing(x, b) == 0 for x in h):
                out[b] = out.get(b, 0) + c
    return RepRingElement(group, out)


_CLASS = re.compile(r"\[\s*G\s*/\s*(H\d+|G|e)\s*\]")


def parse_burnside(text: str, lattice: SubgroupLattice) -> BurnsideElement:
    """Parse an integer combination like ``1 - 2*[G/e] + [G/H3]``.

    ``H<i>`` refers to the i-th subgroup of the lattice listing (0-based),
    ``e`` to the trivial subgroup and ``G`` to the whole group; a bare integer
    stands for that multiple of [G/G].
    """
    group = lattice.group
    s = text.replace(" ", "")
    if not s:
        raise BurnsideError("empty Burnside expression")
    terms = re.findall(r"[+-]?[^+-]+", s)
    if "".join(terms) != s:
        raise BurnsideError(f"cannot parse {text!r}")
    total = BurnsideElement(group, group.elements, {})
    for t in terms:
        sign = -1 if t.startswith("-") else 1
        t = t.lstrip("+-")
        m = re.fullmatch(r"(?:(\d+)\*?)?(\[[^\]]*\])", t)
        if m:
            coeff = int(m.group(1)) if m.group(1) else 1
            cm = _CLASS.fullmatch(m.group(2))
            if not cm:
                raise BurnsideError(f"bad class {m.group(2)!r}; use [G/Hi], [G/e] or [G/G]")
            name = cm.group(1)
            if name == "G":
                h = lattice.whole
            elif name == "e":
                h = lattice.trivial
            else:
                idx = int(name[1:])
                if idx >= len(lattice):
                    raise BurnsideError(f"H{idx} does not exist; the lattice has {len(lattice)} subgroups")
                h = lattice.subgroups[idx]
            total = total + burnside_class(group, h, coefficient=sign * coeff)
        elif t.isdigit():
            total = total + burnside_class(group, lattice.whole, coefficient=sign * int(t))
        else:
            raise BurnsideError(f"cannot parse term {t!r}")
    return total


def format_burnside(a: BurnsideElement, lattice: SubgroupLattice) -> str:
    if not a.coefficients:
        return "0"
    parts = []
    for h in sorted(a.coefficients, key=lambda h: lattice.index(h), reverse=True):
        c = a.coefficients[h]
        idx = lattice.index(h)
        parts.append((c, f"[G/H{idx}]"))
    out = ""
    for i, (c, name) in enumerate(parts):
        sign = "-" if c < 0 else "+"
        body = name if abs(c) == 1 else f"{abs(c)}*{name}"
        out += (("-" if sign == "-" else "") + body) if i == 0 else f" {sign} {body}"
    return out
