"""Standard bases and finite-dimensional quotient algebras.

Two monomial orders are supported:

* ``GLOBAL``: degree reverse lexicographic. The quotient R/I counts every
  complex zero of I with multiplicity.
* ``LOCAL``: negative degree reverse lexicographic (1 is the largest monomial).
  The quotient is the local algebra of I at the origin.

For the local order the standard basis is completed with Mora's normal form.
Once it is known, every monomial above the highest corner lies in the local
ideal, so exact normal forms are obtained by reducing and truncating there.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from quotsig.exactlin import RationalMatrix
from quotsig.poly import Monomial, OneForm, Poly


class NonIsolatedSingularity(ValueError):
    """The quotient by the ideal is infinite-dimensional."""


class MonomialOrder(enum.Enum):
    LOCAL = "local-negative-graded-revlex"
    GLOBAL = "global-graded-revlex"

    def key(self, m: Monomial):
        tie = tuple(-e for e in reversed(m))
        if self is MonomialOrder.GLOBAL:
            return (sum(m), tie)
        return (-sum(m), tie)


def leading(p: Poly, order: MonomialOrder) -> tuple[Monomial, Fraction]:
    m = max((k for k, _ in p.items()), key=order.key)
    return m, p.coefficient(m)


def _divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _quo(b: Monomial, a: Monomial) -> Monomial:
    return tuple(y - x for x, y in zip(a, b))


def _lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


def _ecart(p: Poly, order: MonomialOrder) -> int:
    return p.degree() - sum(leading(p, order)[0])


def _spoly(f: Poly, g: Poly, order: MonomialOrder) -> Poly:
    mf, cf = leading(f, order)
    mg, cg = leading(g, order)
    l = _lcm(mf, mg)
    return f.mul_monomial(_quo(l, mf), 1 / cf) - g.mul_monomial(_quo(l, mg), 1 / cg)


def _reduce_step(h: Poly, g: Poly, order: MonomialOrder) -> Poly:
    mh, ch = leading(h, order)
    mg, cg = leading(g, order)
    return h - g.mul_monomial(_quo(mh, mg), ch / cg)


def _global_nf(p: Poly, basis: Sequence[Poly], order: MonomialOrder) -> Poly:
    """Full reduction (leading and tail terms) for a well-order."""
    lead = [(leading(g, order), g) for g in basis]
    remainder: dict[Monomial, Fraction] = {}
    h = p
    while h:
        m, c = leading(h, order)
        for (mg, cg), g in lead:
            if _divides(mg, m):
                h = h - g.mul_monomial(_quo(m, mg), c / cg)
                break
        else:
            remainder[m] = c
            h = h - Poly.monomial(m, c)
    return Poly(p.nvars, remainder)


def _mora_nf(p: Poly, basis: Sequence[Poly], order: MonomialOrder) -> Poly:
    """Mora's weak normal form: u*p = sum a_i g_i + h, u a unit, LM(h) not in L(basis).

    Reducers are chosen by minimal ecart; a reducer with larger ecart than the
    current remainder causes the remainder to join the reducer set.
    """
    h = p
    reducers = [(g, leading(g, order)[0], _ecart(g, order)) for g in basis]
    while h:
        mh = leading(h, order)[0]
        cands = [(e, i) for i, (g, mg, e) in enumerate(reducers) if _divides(mg, mh)]
        if not cands:
            break
        e, i = min(cands)
        eh = _ecart(h, order)
        g = reducers[i][0]
        if e > eh:
            reducers.append((h, mh, eh))
        h = _reduce_step(h, g, order)
    return h


def _nf(p: Poly, basis: Sequence[Poly], order: MonomialOrder) -> Poly:
    if order is MonomialOrder.GLOBAL:
        return _global_nf(p, basis, order)
    return _mora_nf(p, basis, order)


def _complete(generators: Sequence[Poly], order: MonomialOrder) -> list[Poly]:
    """Buchberger completion with the product criterion; pairs by smallest lcm degree."""
    basis = [g for g in generators if g]
    pairs = [(i, j) for j in range(len(basis)) for i in range(j)]
    while pairs:
        pairs.sort(key=lambda ij: sum(_lcm(leading(basis[ij[0]], order)[0],
                                           leading(basis[ij[1]], order)[0])))
        i, j = pairs.pop(0)
        mi = leading(basis[i], order)[0]
        mj = leading(basis[j], order)[0]
        if all(a == 0 or b == 0 for a, b in zip(mi, mj)):
            continue
        h = _nf(_spoly(basis[i], basis[j], order), basis, order)
        if h:
            if all(e == 0 for e in leading(h, order)[0]):
                # a unit of the local ring (or a nonzero constant): the ideal is everything
                return [Poly.constant(h.nvars, 1)]
            basis.append(h)
            k = len(basis) - 1
            pairs.extend((a, k) for a in range(k))
    return basis


def _minimalize(basis: Sequence[Poly], order: MonomialOrder) -> list[Poly]:
    items = [(leading(g, order)[0], g) for g in basis]
    keep = []
    for idx, (m, g) in enumerate(items):
        redundant = False
        for jdx, (m2, _) in enumerate(items):
            if jdx == idx:
                continue
            if _divides(m2, m) and (m2 != m or jdx < idx):
                redundant = True
                break
        if not redundant:
            keep.append(g / leading(g, order)[1])
    return sorted(keep, key=lambda g: order.key(leading(g, order)[0]))


def _standard_monomials(leads: Sequence[Monomial], nvars: int) -> list[Monomial] | None:
    """Monomials outside the monomial ideal generated by ``leads``; None if infinitely many."""
    bounds = []
    for i in range(nvars):
        pure = [m[i] for m in leads if all(e == 0 for k, e in enumerate(m) if k != i) and m[i] > 0]
        if not pure and not any(all(e == 0 for e in m) for m in leads):
            return None
        bounds.append(min(pure) if pure else 0)
    return [m for m in itertools.product(*(range(b) for b in bounds))
            if not any(_divides(l, m) for l in leads)]


def standard_basis(ideal: Sequence[Poly], order: MonomialOrder) -> list[Poly]:
    """Reduced, monic standard basis of the ideal (of its localization for LOCAL).

    For the local order, tails are reduced modulo the standard basis and
    truncated above the highest corner when the quotient is finite; the result
    generates the same ideal of the local ring.
    """
    if not ideal:
        raise ValueError("empty ideal")
    basis = _minimalize(_complete(list(ideal), order), order)
    nvars = ideal[0].nvars
    if order is MonomialOrder.GLOBAL:
        out = []
        for i, g in enumerate(basis):
            others = basis[:i] + basis[i + 1:]
            m, _ = leading(g, order)
            tail = _global_nf(g - Poly.monomial(m, 1), others, order)
            out.append(Poly.monomial(m, 1) + tail)
        return out
    leads = [leading(g, order)[0] for g in basis]
    std = _standard_monomials(leads, nvars)
    if std is None:
        return basis
    corner = max((sum(m) for m in std), default=-1)
    out = []
    for i, g in enumerate(basis):
        m, _ = leading(g, order)
        tail = _local_truncated_nf(g - Poly.monomial(m, 1), basis[:i] + basis[i + 1:], order, corner)
        out.append(Poly.monomial(m, 1) + tail)
    return out


def _local_truncated_nf(p: Poly, basis: Sequence[Poly], order: MonomialOrder, corner: int) -> Poly:
    """Reduced normal form in the local ring, valid once m^(corner+1) lies in the ideal."""
    lead = [(leading(g, order), g) for g in basis]
    remainder: dict[Monomial, Fraction] = {}
    h = p.truncate(corner)
    while h:
        m, c = leading(h, order)
        for (mg, cg), g in lead:
            if _divides(mg, m):
                h = (h - g.mul_monomial(_quo(m, mg), c / cg)).truncate(corner)
                break
        else:
            remainder[m] = c
            h = h - Poly.monomial(m, c)
    return Poly(p.nvars, remainder)


@dataclass(frozen=True)
class QuotientAlgebra:
    """R/I (GLOBAL) or R_0/I R_0 (LOCAL) with a monomial basis.

    ``monomial_basis`` is sorted descending in the order, so for LOCAL the
    constant 1 comes first. ``mult_matrices[i]`` has as column j the
    coordinates of x_i times basis monomial j.
    """

    order: MonomialOrder
    nvars: int
    standard_basis: tuple[Poly, ...]
    monomial_basis: tuple[Monomial, ...]
    mult_matrices: tuple[RationalMatrix, ...] = field(repr=False)
    corner: int = -1

    @property
    def dim(self) -> int:
        return len(self.monomial_basis)

    def reduce(self, p: Poly) -> Poly:
        if not self.monomial_basis:
            return Poly(self.nvars)
        if self.order is MonomialOrder.GLOBAL:
            return _global_nf(p, self.standard_basis, self.order)
        return _local_truncated_nf(p, self.standard_basis, self.order, self.corner)

    def normal_form(self, p: Poly) -> tuple[Fraction, ...]:
        r = self.reduce(p)
        return tuple(r.coefficient(m) for m in self.monomial_basis)

    def element(self, coords: Sequence) -> Poly:
        return Poly(self.nvars, {m: c for m, c in zip(self.monomial_basis, coords)})

    def mult_matrix(self, p: Poly) -> RationalMatrix:
        """Matrix of multiplication by p on the monomial basis."""
        cols = [self.normal_form(p.mul_monomial(m)) for m in self.monomial_basis]
        return RationalMatrix.from_columns(cols, self.dim)


def quotient_algebra(omega: OneForm | Sequence[Poly], order: MonomialOrder) -> QuotientAlgebra:
    """Quotient by the ideal of the form's coefficients (or of the given polynomials)."""
    gens = list(omega.components) if isinstance(omega, OneForm) else list(omega)
    if not gens:
        raise ValueError("empty ideal")
    nvars = gens[0].nvars
    if nvars == 0:
        # the ring of a point: the quotient is the field itself unless I is the unit ideal
        unit = any(g for g in gens)
        return QuotientAlgebra(order, 0, (Poly.constant(0, 1),) if unit else (),
                               () if unit else ((),), (), 0)
    sb = standard_basis(gens, order)
    leads = [leading(g, order)[0] for g in sb]
    std = _standard_monomials(leads, nvars)
    if std is None:
        raise NonIsolatedSingularity(
            "the quotient algebra is infinite-dimensional (the singular point is not isolated)")
    std = sorted(std, key=order.key, reverse=True)
    corner = max((sum(m) for m in std), default=-1)
    partial = QuotientAlgebra(order, nvars, tuple(sb), tuple(std), (), corner)
    mats = tuple(partial.mult_matrix(Poly.variable(nvars, i)) for i in range(nvars))
    return QuotientAlgebra(order, nvars, tuple(sb), tuple(std), mats, corner)
