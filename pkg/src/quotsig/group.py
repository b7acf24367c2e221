"""Finite abelian groups acting linearly on R^n through rational matrices."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from quotsig.exactlin import (
    RationalMatrix,
    column_space_basis,
    kernel_basis,
    solve_in_span,
    upoly_divmod,
    upoly_eval_matrix,
)

Element = tuple[int, ...]


class GroupInputError(ValueError):
    pass


class SubgroupBoundExceeded(ValueError):
    pass


@dataclass(frozen=True)
class AbelianGroup:
    """Z/m_1 x ... x Z/m_k; elements are exponent tuples."""

    invariant_factors: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "invariant_factors", tuple(int(m) for m in self.invariant_factors))
        if any(m < 1 for m in self.invariant_factors):
            raise GroupInputError("invariant factors must be positive")

    @property
    def order(self) -> int:
        return math.prod(self.invariant_factors)

    @property
    def identity(self) -> Element:
        return (0,) * len(self.invariant_factors)

    @cached_property
    def elements(self) -> tuple[Element, ...]:
        return tuple(itertools.product(*(range(m) for m in self.invariant_factors)))

    def add(self, a: Element, b: Element) -> Element:
        return tuple((x + y) % m for x, y, m in zip(a, b, self.invariant_factors))

    def neg(self, a: Element) -> Element:
        return tuple((-x) % m for x, m in zip(a, self.invariant_factors))

    def scale(self, a: Element, k: int) -> Element:
        return tuple((k * x) % m for x, m in zip(a, self.invariant_factors))

    def element_order(self, a: Element) -> int:
        return math.lcm(1, *(m // math.gcd(x, m) for x, m in zip(a, self.invariant_factors)))

    def contains(self, a: Element) -> bool:
        return len(a) == len(self.invariant_factors) and all(
            0 <= x < m for x, m in zip(a, self.invariant_factors))

    def cyclic_subgroup(self, a: Element) -> frozenset:
        out = {self.identity}
        cur = a
        while cur != self.identity:
            out.add(cur)
            cur = self.add(cur, a)
        return frozenset(out)

    def subgroup_lattice(self, bound: int = 256) -> "SubgroupLattice":
        """All subgroups, as joins of cyclic subgroups, with the inclusion relation."""
        if self.order > bound:
            raise SubgroupBoundExceeded(f"|G| = {self.order} exceeds the bound {bound}")
        found = {self.cyclic_subgroup(a) for a in self.elements}
        frontier = set(found)
        while frontier:
            new = set()
            for h in frontier:
                for k in found:
                    j = self.join(h, k)
                    if j not in found and j not in new:
                        new.add(j)
            found |= new
            frontier = new
        subs = sorted((tuple(sorted(h)) for h in found), key=lambda h: (len(h), h))
        return SubgroupLattice(self, tuple(subs))

    def join(self, h: frozenset, k: frozenset) -> frozenset:
        # H + K is already a subgroup in an abelian group
        return frozenset(self.add(x, y) for x in h for y in k)

    def dual_pairing(self, a: Element, b: Element) -> Fraction:
        """Exponent of exp(2 pi i * value) for the character b evaluated at a."""
        return sum((Fraction(x * y, m) for x, y, m in zip(a, b, self.invariant_factors)),
                   Fraction(0)) % 1


@dataclass(frozen=True)
class SubgroupLattice:
    group: AbelianGroup
    subgroups: tuple[tuple[Element, ...], ...]

    def __len__(self):
        return len(self.subgroups)

    def index(self, h: Sequence[Element]) -> int:
        return self.subgroups.index(tuple(sorted(h)))

    @cached_property
    def inclusion(self) -> tuple[tuple[bool, ...], ...]:
        sets = [set(h) for h in self.subgroups]
        return tuple(tuple(a <= b for b in sets) for a in sets)

    @property
    def trivial(self) -> tuple[Element, ...]:
        return self.subgroups[0]

    @property
    def whole(self) -> tuple[Element, ...]:
        return self.subgroups[-1]


@dataclass(frozen=True)
class Stratum:
    g: Element
    plus_basis: tuple[tuple[Fraction, ...], ...]
    minus_basis: tuple[tuple[Fraction, ...], ...]

    @property
    def k(self) -> int:
        return len(self.minus_basis)

    def describe(self) -> str:
        return f"dim R_g+ = {len(self.plus_basis)}, dim R_g- = {self.k}"


class MatrixAction:
    """A finite abelian group acting on R^n, one matrix per invariant-factor generator.

    Generators must commute and the i-th generator must satisfy g_i^(m_i) = I;
    violations raise :class:`GroupInputError` at construction.
    """

    def __init__(self, group: AbelianGroup, generators: Sequence[RationalMatrix]):
        self.group = group
        self.generators = tuple(generators)
        if len(self.generators) != len(group.invariant_factors):
            raise GroupInputError(
                f"{len(group.invariant_factors)} invariant factors but {len(self.generators)} generator matrices")
        if not self.generators:
            raise GroupInputError("at least one generator is needed (use invariant factor 1 for the trivial group)")
        n = self.generators[0].rows
        for i, (g, m) in enumerate(zip(self.generators, group.invariant_factors)):
            if g.shape != (n, n):
                raise GroupInputError(f"generator {i + 1} is not {n}x{n}")
            if g.det() == 0:
                raise GroupInputError(f"generator {i + 1} is singular")
            if g ** m != RationalMatrix.identity(n):
                raise GroupInputError(f"generator {i + 1} does not satisfy g^{m} = I")
        for i, j in itertools.combinations(range(len(self.generators)), 2):
            if self.generators[i] @ self.generators[j] != self.generators[j] @ self.generators[i]:
                raise GroupInputError(f"generators {i + 1} and {j + 1} do not commute")
        self.n = n
        self._matrices: dict[Element, RationalMatrix] = {}

    @classmethod
    def trivial(cls, n: int) -> "MatrixAction":
        return cls(AbelianGroup((1,)), [RationalMatrix.identity(n)])

    @classmethod
    def antipodal(cls, n: int) -> "MatrixAction":
        return cls(AbelianGroup((2,)), [RationalMatrix.identity(n).scale(-1)])

    @classmethod
    def sign_changes(cls, n: int) -> "MatrixAction":
        gens = [RationalMatrix.diag([-1 if j == i else 1 for j in range(n)]) for i in range(n)]
        return cls(AbelianGroup((2,) * n), gens)

    def __repr__(self):
        return f"MatrixAction(factors={self.group.invariant_factors}, n={self.n})"

    @property
    def elements(self) -> tuple[Element, ...]:
        return self.group.elements

    def element_matrix(self, a: Element) -> RationalMatrix:
        a = tuple(a)
        if not self.group.contains(a):
            raise GroupInputError(f"{a} is not an element of Z/{self.group.invariant_factors}")
        if a not in self._matrices:
            m = RationalMatrix.identity(self.n)
            for g, e in zip(self.generators, a):
                if e:
                    m = m @ (g ** e)
            self._matrices[a] = m
        return self._matrices[a]

    def det_character(self) -> dict[Element, int]:
        return {a: int(self.element_matrix(a).det()) for a in self.elements}

    def det_kernel(self) -> frozenset:
        return frozenset(a for a, d in self.det_character().items() if d == 1)

    def pm_eigenspaces(self, a: Element):
        g = self.element_matrix(a)
        eye = RationalMatrix.identity(self.n)
        plus = column_space_basis(kernel_basis(g - eye))
        minus = column_space_basis(kernel_basis(g + eye))
        return tuple(plus), tuple(minus)

    def fixed_subspace(self, a: Element) -> list[tuple[Fraction, ...]]:
        return self.pm_eigenspaces(a)[0]

    def stratify(self) -> list[Stratum]:
        """Subspaces R^n_{g+} + i R^n_{g-} over g = e and all even-order g, deduplicated."""
        seen = set()
        out = []
        for a in self.elements:
            if a != self.group.identity and self.group.element_order(a) % 2:
                continue
            plus, minus = self.pm_eigenspaces(a)
            key = (plus, minus)
            if key in seen:
                continue
            seen.add(key)
            out.append(Stratum(a, plus, minus))
        return out

    def subgroup_lattice(self, bound: int = 256) -> SubgroupLattice:
        return self.group.subgroup_lattice(bound)

    def restricted(self, basis: Sequence[Sequence[Fraction]]) -> "MatrixAction":
        """The action on an invariant subspace, in coordinates of the given basis columns."""
        k = len(basis)
        gens = []
        for g in self.generators:
            cols = []
            for v in basis:
                image = g @ list(v)
                coeffs = solve_in_span(basis, image)
                if coeffs is None:
                    raise GroupInputError("subspace is not invariant under the action")
                cols.append(coeffs)
            gens.append(RationalMatrix.from_columns(cols, k))
        if k == 0:
            return _EmptyAction(self.group)
        return MatrixAction(self.group, gens)

    def isotypic_refinement(self) -> list[tuple[tuple[Fraction, ...], ...]]:
        return isotypic_blocks(self.generators, self.group.invariant_factors, self.n)[1]


class _EmptyAction(MatrixAction):
    """The action of G on the zero vector space."""

    def __init__(self, group: AbelianGroup):
        self.group = group
        self.generators = tuple(RationalMatrix([], cols=0) for _ in group.invariant_factors)
        self.n = 0
        self._matrices = {}

    def element_matrix(self, a):
        return RationalMatrix([], cols=0)

    def det_character(self):
        return {a: 1 for a in self.elements}


def cyclotomic(d: int) -> list[Fraction]:
    """Coefficients of the d-th cyclotomic polynomial, lowest first."""
    num = [Fraction(-1)] + [Fraction(0)] * (d - 1) + [Fraction(1)]
    for e in range(1, d):
        if d % e == 0:
            num, rem = upoly_divmod(num, cyclotomic(e))
            assert not rem
    return num


def isotypic_blocks(matrices: Sequence[RationalMatrix], orders: Sequence[int], n: int):
    """Common refinement of the rational primary decompositions of commuting finite-order matrices.

    Returns (labels, bases): label is the tuple of cyclotomic indices d_j such that
    the j-th matrix has minimal polynomial Phi_{d_j} on the block.
    """
    if n == 0:
        return [], []
    choices = []
    for m, order in zip(matrices, orders):
        opts = []
        for d in range(1, order + 1):
            if order % d == 0:
                opts.append((d, upoly_eval_matrix(cyclotomic(d), m)))
        choices.append(opts)
    labels, bases = [], []
    for combo in itertools.product(*choices):
        stacked = combo[0][1]
        for _, mat in combo[1:]:
            stacked = stacked.stack(mat)
        ker = kernel_basis(stacked)
        if ker:
            labels.append(tuple(d for d, _ in combo))
            bases.append(tuple(column_space_basis(ker)))
    return labels, bases
