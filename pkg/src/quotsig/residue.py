"""Residue pairing on Omega_omega and its restriction to the G-invariant part.

Omega_omega = Omega^n / omega ^ Omega^(n-1) is identified with the local algebra
Q = R_0 / <A_1, ..., A_n> through phi -> phi dx. An element g acts on phi dx by
pull-back along g^-1, which on Q reads

    phi -> det(g) * (phi o g^-1).

The pairing is B(phi, psi) = l(phi psi) for a G-invariant functional l with
l(J) = 1 on the Jacobian class J. Its inertia does not depend on the choice of
such l (checked in the test suite, not assumed).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from quotsig.burnside import RepRingElement
from quotsig.exactlin import (
    InertiaTriple,
    RationalMatrix,
    inertia,
    kernel_basis,
    column_space_basis,
)
from quotsig.group import Element, MatrixAction, isotypic_blocks
from quotsig.localalg import MonomialOrder, QuotientAlgebra, quotient_algebra
from quotsig.poly import OneForm, Poly, act_linear, jacobian_det


class NotInvariantError(ValueError):
    def __init__(self, message: str, generator: int | None = None):
        super().__init__(message)
        self.generator = generator


class DegeneratePairingError(RuntimeError):
    """A Gram matrix that should be nondegenerate has a kernel."""

    def __init__(self, message: str, diagnostic: str = ""):
        super().__init__(message + ("\n" + diagnostic if diagnostic else ""))
        self.diagnostic = diagnostic


@dataclass(frozen=True)
class OmegaModule:
    form: OneForm
    action: MatrixAction
    algebra: QuotientAlgebra
    elements: tuple[Element, ...]
    det: dict
    untwisted: dict = field(repr=False)
    twist: dict = field(repr=False)
    jacobian: Poly = field(repr=False)
    jacobian_coords: tuple[Fraction, ...] = ()

    @property
    def dim(self) -> int:
        return self.algebra.dim


def check_invariance(omega: OneForm, action: MatrixAction, elements: Sequence[Element] | None = None):
    """Raise NotInvariantError naming the first generator (or element) that moves the form."""
    if elements is None:
        for i, g in enumerate(action.generators):
            if not omega.is_invariant(g):
                raise NotInvariantError(f"the form is not invariant under generator {i + 1}", i + 1)
        return
    for a in elements:
        if not omega.is_invariant(action.element_matrix(a)):
            raise NotInvariantError(f"the form is not invariant under group element {a}")


def _algebra_action(algebra: QuotientAlgebra, g: RationalMatrix) -> RationalMatrix:
    cols = [algebra.normal_form(act_linear(Poly.monomial(m), g)) for m in algebra.monomial_basis]
    return RationalMatrix.from_columns(cols, algebra.dim)


def omega_module(omega: OneForm, action: MatrixAction,
                 elements: Sequence[Element] | None = None) -> OmegaModule:
    """Local Omega_omega at the origin with its determinant-twisted action.

    ``elements`` restricts the acting group to a subgroup (given by its element
    list), e.g. an isotropy group; by default the whole group acts.
    """
    if action.n != omega.nvars:
        raise ValueError(f"action on R^{action.n} but the form has {omega.nvars} variables")
    check_invariance(omega, action, elements)
    elements = tuple(elements) if elements is not None else action.elements
    algebra = quotient_algebra(omega, MonomialOrder.LOCAL)
    dets, untwisted, twist = {}, {}, {}
    for a in elements:
        g = action.element_matrix(a)
        d = int(g.det())
        u = _algebra_action(algebra, g)
        dets[a] = d
        untwisted[a] = u
        twist[a] = u.scale(d)
    jac = jacobian_det(omega)
    jc = algebra.normal_form(jac) if algebra.dim else ()
    return OmegaModule(omega, action, algebra, elements, dets, untwisted, twist, jac, tuple(jc))


def invariant_basis(module: OmegaModule) -> list[tuple[Fraction, ...]]:
    """Basis of the fixed space of all twist matrices (kernel of the stacked T(g) - I)."""
    n = module.dim
    if n == 0:
        return []
    eye = RationalMatrix.identity(n)
    stacked = RationalMatrix.zeros(0, n)
    for a in module.elements:
        stacked = stacked.stack(module.twist[a] - eye)
    return column_space_basis(kernel_basis(stacked))


def _symmetrize(module: OmegaModule, covector: Sequence[Fraction]) -> list[Fraction]:
    n = module.dim
    total = [Fraction(0)] * n
    for a in module.elements:
        u = module.untwisted[a]
        for j in range(n):
            total[j] += sum((covector[i] * u[i, j] for i in range(n) if covector[i]), Fraction(0))
    k = len(module.elements)
    return [x / k for x in total]


def _dual_to_jacobian(module: OmegaModule) -> list[Fraction]:
    """Covector l0 with l0(J) = 1 that kills the greedy completion of J to a basis.

    Basis monomials are tried in descending local order; the one left out is
    the last monomial where J has a nonzero coordinate.
    """
    c = module.jacobian_coords
    n = module.dim
    chosen = [list(c)]
    added = []
    for k in range(n):
        e = [Fraction(int(i == k)) for i in range(n)]
        trial = RationalMatrix(chosen + [e])
        if trial.rank() == len(chosen) + 1:
            chosen.append(e)
            added.append(k)
    skipped = [k for k in range(n) if k not in added]
    assert len(skipped) == 1
    k = skipped[0]
    return [Fraction(int(i == k)) / c[k] for i in range(n)]


def residue_functional(module: OmegaModule, covector: Sequence | None = None) -> tuple[Fraction, ...]:
    """G-invariant functional l on Q with l(J) = 1.

    Without ``covector`` the canonical dual-completion functional is used.
    A supplied covector is symmetrized over the untwisted action and rescaled.
    """
    if module.dim == 0:
        return ()
    if not any(module.jacobian_coords):
        raise DegeneratePairingError("the Jacobian class vanishes in the local algebra")
    base = _dual_to_jacobian(module) if covector is None else [Fraction(x) for x in covector]
    ell = _symmetrize(module, base)
    value = sum((a * b for a, b in zip(ell, module.jacobian_coords)), Fraction(0))
    if value == 0:
        raise DegeneratePairingError("the symmetrized functional vanishes on the Jacobian class")
    return tuple(x / value for x in ell)


@dataclass(frozen=True)
class ResiduePairing:
    functional: tuple[Fraction, ...]
    gram_full: RationalMatrix
    invariant_basis: tuple[tuple[Fraction, ...], ...]
    gram_invariant: RationalMatrix
    inertia_full: InertiaTriple
    inertia_invariant: InertiaTriple

    @property
    def signature(self) -> int:
        return self.inertia_invariant.signature

    @property
    def full_signature(self) -> int:
        return self.inertia_full.signature


def gram_matrix(module: OmegaModule, ell: Sequence[Fraction]) -> RationalMatrix:
    alg = module.algebra
    basis = alg.monomial_basis
    n = alg.dim
    cache: dict = {}

    def pair(a, b):
        m = tuple(x + y for x, y in zip(a, b))
        if m not in cache:
            coords = alg.normal_form(Poly.monomial(m))
            cache[m] = sum((l * c for l, c in zip(ell, coords) if l and c), Fraction(0))
        return cache[m]

    rows = [[pair(basis[i], basis[j]) for j in range(n)] for i in range(n)]
    return RationalMatrix(rows, cols=n)


def restrict_form(gram: RationalMatrix, basis: Sequence[Sequence[Fraction]]) -> RationalMatrix:
    if not basis:
        return RationalMatrix.zeros(0, 0)
    v = RationalMatrix.from_columns(basis, gram.rows)
    return v.T @ gram @ v


def residue_pairing(module: OmegaModule, covector: Sequence | None = None,
                    check: bool = True) -> ResiduePairing:
    ell = residue_functional(module, covector)
    gram = gram_matrix(module, ell)
    inv = tuple(invariant_basis(module))
    gram_inv = restrict_form(gram, inv)
    full = inertia(gram) if module.dim else InertiaTriple(0, 0, 0)
    part = inertia(gram_inv) if inv else InertiaTriple(0, 0, 0)
    if check and (full.n_zero or part.n_zero):
        which = "full" if full.n_zero else "invariant"
        raise DegeneratePairingError(
            f"the {which} residue pairing is degenerate",
            f"functional = {list(map(str, ell))}\ngram_full = {gram}\ngram_invariant = {gram_inv}\n"
            f"inertia_full = {full}, inertia_invariant = {part}")
    return ResiduePairing(ell, gram, inv, gram_inv, full, part)


@dataclass(frozen=True)
class SignatureBlock:
    label: tuple[int, ...]              # cyclotomic index d_j for each generator
    basis: tuple[tuple[Fraction, ...], ...]
    inertia: InertiaTriple

    @property
    def is_sign_character(self) -> bool:
        return all(d in (1, 2) for d in self.label)

    def character_signs(self) -> tuple[int, ...]:
        return tuple(1 if d == 1 else -1 for d in self.label)


@dataclass(frozen=True)
class GSignature:
    blocks: tuple[SignatureBlock, ...]
    virtual_character: RepRingElement | None

    def block_for(self, label) -> SignatureBlock:
        return next(b for b in self.blocks if b.label == tuple(label))


def g_signature(module: OmegaModule, pairing: ResiduePairing | None = None) -> GSignature:
    """Inertia of the residue pairing on each isotypic block of the twisted action.

    When every block carries a +-1 character, the virtual character
    sum(signature(block) * chi_block) is reported as well.
    """
    action = module.action
    if module.elements != action.elements:
        raise ValueError("g_signature needs the module of the whole group")
    pairing = pairing or residue_pairing(module)
    gens = []
    for i in range(len(action.generators)):
        a = tuple(int(j == i) for j in range(len(action.generators)))
        a = tuple(x % m for x, m in zip(a, action.group.invariant_factors))
        gens.append(module.twist[a])
    labels, bases = isotypic_blocks(gens, action.group.invariant_factors, module.dim)
    blocks = []
    for label, basis in zip(labels, bases):
        sub = restrict_form(pairing.gram_full, basis)
        blocks.append(SignatureBlock(label, tuple(basis), inertia(sub)))
    virtual = None
    if all(b.is_sign_character for b in blocks):
        mult: dict = {}
        for b in blocks:
            dual = tuple(m // 2 if d == 2 else 0 for d, m in zip(b.label, action.group.invariant_factors))
            mult[dual] = mult.get(dual, 0) + b.inertia.signature
        virtual = RepRingElement(action.group, mult)
    return GSignature(tuple(blocks), virtual)


@dataclass
class RadialIndexReport:
    dim: int
    invariant_dim: int
    monomial_basis: tuple
    pairing: ResiduePairing
    g_signature: GSignature | None
    oracle: object = None

    @property
    def signature(self) -> int:
        return self.pairing.signature

    @property
    def radial_index(self) -> int:
        # the index of the pushed-down form on the closure of the real quotient
        return self.pairing.signature


def radial_index_report(omega: OneForm, action: MatrixAction, with_blocks: bool = True) -> RadialIndexReport:
    module = omega_module(omega, action)
    pairing = residue_pairing(module)
    blocks = g_signature(module, pairing) if with_blocks and module.dim else None
    return RadialIndexReport(module.dim, len(pairing.invariant_basis),
                             module.algebra.monomial_basis, pairing, blocks)


def isotropy(action: MatrixAction, point: Sequence[Fraction]) -> tuple[Element, ...]:
    pt = [Fraction(x) for x in point]
    return tuple(a for a in action.elements if action.element_matrix(a) @ pt == pt)


def local_signature_at(omega: OneForm, action: MatrixAction, point: Sequence) -> InertiaTriple:
    """Inertia of B^{G_p} at a rational point p, computed on the form recentred at p."""
    pt = [Fraction(x) for x in point]
    stab = isotropy(action, pt)
    moved = omega.shift(pt)
    module = omega_module(moved, action, elements=stab)
    return residue_pairing(module).inertia_invariant


def orbit(action: MatrixAction, point: Sequence) -> list[tuple[Fraction, ...]]:
    pt = [Fraction(x) for x in point]
    seen = []
    for a in action.elements:
        q = tuple(action.element_matrix(a) @ pt)
        if q not in seen:
            seen.append(q)
    return seen


def conservation_signature(omega: OneForm, action: MatrixAction, points: Sequence[Sequence]) -> int:
    """Sum of local invariant signatures over the G-orbits of the given rational points."""
    remaining = [tuple(Fraction(x) for x in p) for p in points]
    total = 0
    while remaining:
        p = remaining[0]
        orb = orbit(action, p)
        total += local_signature_at(omega, action, p).signature
        remaining = [q for q in remaining if q not in orb]
    return total
