"""Sector decomposition of the quantum state space of (f, G).

For each g in G the sector is the G-invariant part of Omega of f restricted to
the fixed subspace of g. Two input tiers exist:

* rational matrix actions, with exact dimensions and residue signatures;
* diagonal actions given by character vectors mod m, with dimensions only,
  obtained by counting invariant monomials.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from quotsig.exactlin import InertiaTriple, RationalMatrix
from quotsig.group import Element, MatrixAction
from quotsig.localalg import MonomialOrder, quotient_algebra
from quotsig.poly import Poly, act_linear, differential
from quotsig.residue import NotInvariantError, invariant_basis, omega_module, residue_pairing

EMPTY_SECTOR_INERTIA = InertiaTriple(1, 0, 0)


@dataclass(frozen=True)
class Sector:
    g: Element
    fixed_basis: tuple[tuple[Fraction, ...], ...]
    restricted_f: Poly
    inv_dim: int
    inertia: InertiaTriple | None
    dim: int | None = None            # dimension of the whole sector algebra, before taking invariants

    @property
    def n_g(self) -> int:
        return len(self.fixed_basis)

    @property
    def by_convention(self) -> bool:
        return self.n_g == 0

    @property
    def signature(self) -> int:
        return self.inertia.signature if self.inertia else 0


@dataclass(frozen=True)
class QuantumReport:
    sectors: tuple[Sector, ...]

    @property
    def total_dim(self) -> int:
        return sum(s.inv_dim for s in self.sectors)

    @property
    def orbifold_dim(self) -> int:
        return sum((-1) ** s.n_g * s.inv_dim for s in self.sectors)

    @property
    def real_signature(self) -> int:
        return sum(s.signature for s in self.sectors)


def check_function_invariance(f: Poly, action: MatrixAction):
    for i, g in enumerate(action.generators):
        if act_linear(f, g) != f:
            raise NotInvariantError(f"f is not invariant under generator {i + 1}", i + 1)


def restrict_to_fixed(f: Poly, action: MatrixAction, g: Element):
    """(fixed basis, f composed with the inclusion of the fixed subspace, residual action)."""
    basis = action.fixed_subspace(g)
    inclusion = RationalMatrix.from_columns(basis, action.n) if basis else RationalMatrix.zeros(action.n, 0)
    return tuple(basis), f.compose_linear(inclusion), action.restricted(basis)


def sector(f: Poly, g: Element, action: MatrixAction) -> Sector:
    basis, fg, residual = restrict_to_fixed(f, action, g)
    if not basis:
        return Sector(tuple(g), basis, fg, 1, EMPTY_SECTOR_INERTIA, 1)
    module = omega_module(differential(fg), residual)
    if not invariant_basis(module):
        return Sector(tuple(g), basis, fg, 0, InertiaTriple(0, 0, 0), module.dim)
    pairing = residue_pairing(module)
    return Sector(tuple(g), basis, fg, len(pairing.invariant_basis), pairing.inertia_invariant, module.dim)


def quantum_report(f: Poly, action: MatrixAction) -> QuantumReport:
    check_function_invariance(f, action)
    return QuantumReport(tuple(sector(f, a, action) for a in action.elements))


# diagonal tier

class DiagonalInputError(ValueError):
    pass


@dataclass(frozen=True)
class DiagonalGroup:
    """Subgroup of the diagonal torus (mu_m)^n generated by character vectors a: x_j -> exp(2 pi i a_j/m) x_j."""

    modulus: int
    nvars: int
    generators: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.modulus < 1:
            raise DiagonalInputError("the modulus must be positive")
        gens = tuple(tuple(int(x) % self.modulus for x in a) for a in self.generators)
        if any(len(a) != self.nvars for a in gens):
            raise DiagonalInputError(f"character vectors must have length {self.nvars}")
        object.__setattr__(self, "generators", gens)

    @property
    def elements(self) -> tuple[tuple[int, ...], ...]:
        m = self.modulus
        found = {(0,) * self.nvars}
        frontier = list(found)
        while frontier:
            new = []
            for x in frontier:
                for a in self.generators:
                    y = tuple((u + v) % m for u, v in zip(x, a))
                    if y not in found:
                        found.add(y)
                        new.append(y)
            frontier = new
        return tuple(sorted(found))

    def contains(self, a: Sequence[int]) -> bool:
        return tuple(int(x) % self.modulus for x in a) in set(self.elements)


def check_quasihomogeneous(f: Poly, weights: Sequence[int], degree: int):
    for m, _ in f.items():
        if sum(w * e for w, e in zip(weights, m)) != degree:
            raise DiagonalInputError(f"f is not quasihomogeneous of degree {degree} for weights {list(weights)}")


def _diagonal_invariant(f: Poly, group: DiagonalGroup):
    for a in group.generators:
        for m, _ in f.items():
            if sum(x * e for x, e in zip(a, m)) % group.modulus:
                raise NotInvariantError(f"f is not invariant under the character {list(a)}")


@dataclass(frozen=True)
class DiagonalSector:
    g: tuple[int, ...]
    fixed: tuple[int, ...]            # indices of the fixed coordinates
    milnor_basis: tuple[tuple[int, ...], ...]
    inv_dim: int

    @property
    def n_g(self) -> int:
        return len(self.fixed)


def diagonal_sector_dims(f: Poly, weights: Sequence[int], degree: int,
                         group: DiagonalGroup) -> list[DiagonalSector]:
    """Invariant sector dimensions by counting basis monomials x^k with sum_j a_j (k_j + 1) = 0 mod m."""
    check_quasihomogeneous(f, weights, degree)
    _diagonal_invariant(f, group)
    m = group.modulus
    out = []
    for g in group.elements:
        fixed = tuple(j for j in range(group.nvars) if g[j] == 0)
        if not fixed:
            out.append(DiagonalSector(g, (), ((),), 1))
            continue
        proj = RationalMatrix.from_columns(
            [[int(i == j) for i in range(group.nvars)] for j in fixed], group.nvars)
        fg = f.compose_linear(proj)
        alg = quotient_algebra(differential(fg), MonomialOrder.LOCAL)
        count = 0
        for k in alg.monomial_basis:
            if all(sum(a[j] * (e + 1) for j, e in zip(fixed, k)) % m == 0 for a in group.generators):
                count += 1
        out.append(DiagonalSector(g, fixed, alg.monomial_basis, count))
    return out


def grading_element(weights: Sequence[int], degree: int, modulus: int) -> tuple[int, ...]:
    """Character vector of J = diag(exp(2 pi i w_j / d)) inside (mu_m)^n."""
    if degree <= 0 or modulus % degree:
        raise DiagonalInputError(f"the degree {degree} does not divide the torus order {modulus}")
    return tuple((w * (modulus // degree)) % modulus for w in weights)


def admissibility_check(weights: Sequence[int], degree: int, group: DiagonalGroup) -> bool:
    return group.contains(grading_element(weights, degree, group.modulus))


def fermat_sign_data(exponents: Sequence[int]):
    """Diagonal data for sum x_j^(e_j) with the group of all sign changes, modulus 2."""
    n = len(exponents)
    d = math.lcm(*exponents)
    weights = [d // e for e in exponents]
    gens = [tuple(int(i == j) for i in range(n)) for j in range(n)]
    return weights, d, DiagonalGroup(2, n, tuple(gens))

