"""Numerical cross-check of the invariant signature by counting singular points.

The form is perturbed by differentials of invariant functions so that all
singular points become nondegenerate. The points near the origin are found
from eigenvalues of multiplication matrices on the global quotient algebra.
They are then grouped into G-orbits. Every orbit that is real in the quotient
and whose isotropy lies in ker(det) contributes sign((-1)^k J(p)), where k is
the dimension of the (-1)-eigenspace of an element carrying p to its complex
conjugate. All other orbits contribute nothing.

Floating point is used only here; every integer the oracle reports is checked
against tolerances and a decision too close to its threshold aborts the run.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from quotsig.exactlin import (
    ComplexPoint,
    RationalMatrix,
    RootFindingError,
    char_poly,
    complex_roots,
    kernel_basis,
    upoly_deriv,
    upoly_gcd,
)
from quotsig.group import Element, MatrixAction
from quotsig.localalg import MonomialOrder, NonIsolatedSingularity, QuotientAlgebra, quotient_algebra
from quotsig.poly import OneForm, Poly, act_linear, differential, eval_complex, jacobian_det, jacobian_matrix


class OracleError(RuntimeError):
    """The oracle could not reach a trustworthy count."""


class AmbiguousClassification(OracleError):
    pass


class DegeneratePerturbation(OracleError):
    pass


@dataclass(frozen=True)
class Perturbation:
    t: Fraction
    lambdas: tuple[Fraction, ...]
    generators: tuple[Poly, ...]

    def form(self) -> OneForm:
        n = self.generators[0].nvars
        z = Poly(n)
        for lam, g in zip(self.lambdas, self.generators):
            z = z + g * lam
        return differential(z * self.t)

    def apply(self, omega: OneForm) -> OneForm:
        if not self.generators:
            return omega
        return omega + self.form()


def _monomials(n: int, lo: int, hi: int):
    for d in range(lo, hi + 1):
        for c in itertools.combinations_with_replacement(range(n), d):
            m = [0] * n
            for i in c:
                m[i] += 1
            yield tuple(m)


def _is_diagonal(g: RationalMatrix) -> bool:
    return all(g[i, j] == 0 for i in range(g.rows) for j in range(g.cols) if i != j)


def invariant_generators(action: MatrixAction, max_degree: int = 2) -> list[Poly]:
    """Invariant polynomials of degree 1..max_degree spanning the invariants in that range.

    Diagonal actions give invariant monomials; otherwise Reynolds averages of
    monomials are taken and a linearly independent subset is kept.
    """
    n = action.n
    if all(_is_diagonal(g) for g in action.generators):
        out = []
        for m in _monomials(n, 1, max_degree):
            p = Poly.monomial(m)
            if all(act_linear(p, g) == p for g in action.generators):
                out.append(p)
        return out
    mats = [action.element_matrix(a) for a in action.elements]
    monos = list(_monomials(n, 1, max_degree))
    index = {m: i for i, m in enumerate(monos)}
    out, rows = [], []
    for m in monos:
        p = Poly.monomial(m)
        avg = Poly(n)
        for g in mats:
            avg = avg + act_linear(p, g)
        avg = avg / len(mats)
        if not avg:
            continue
        vec = [Fraction(0)] * len(monos)
        for k, c in avg.items():
            vec[index[k]] = c
        if RationalMatrix(rows + [vec]).rank() > len(rows):
            rows.append(vec)
            out.append(avg)
    return out


def _float_matrix(m: RationalMatrix) -> np.ndarray:
    return np.array([[float(x) for x in row] for row in m.to_lists()], dtype=float).reshape(m.rows, m.cols)


def _component_scale(omega: OneForm, z: np.ndarray) -> float:
    r = max(1.0, float(np.max(np.abs(z)))) if len(z) else 1.0
    return max(1.0, max(sum(abs(float(c)) * r ** sum(m) for m, c in a.items()) for a in omega.components))


def newton_polish(omega: OneForm, z: np.ndarray, steps: int = 8) -> np.ndarray:
    jac = jacobian_matrix(omega)
    best = z
    best_res = np.max(np.abs([eval_complex(a, z) for a in omega.components]))
    for _ in range(steps):
        f = np.array([eval_complex(a, z) for a in omega.components])
        j = np.array([[eval_complex(p, z) for p in row] for row in jac])
        try:
            z = z - np.linalg.solve(j, f)
        except np.linalg.LinAlgError:
            break
        res = np.max(np.abs([eval_complex(a, z) for a in omega.components]))
        if res < best_res:
            best, best_res = z, res
        if res == 0:
            break
    return best


def singular_points(omega: OneForm, tol_root: float = 1e-10, seed: int = 0,
                    algebra: QuotientAlgebra | None = None, max_tries: int = 5) -> list[ComplexPoint]:
    """All complex zeros of the form's coefficients, assumed simple.

    Eigenvalues of a generic multiplication matrix M_h come from its exact
    characteristic polynomial; the points are read off from the left
    eigenvectors as Rayleigh quotients of the coordinate matrices and then
    polished by Newton's method.
    """
    alg = algebra or quotient_algebra(omega, MonomialOrder.GLOBAL)
    n, dim = omega.nvars, alg.dim
    if dim == 0:
        return []
    rng = random.Random(seed)
    for _ in range(max_tries):
        h = [Fraction(rng.randint(-7, 7), rng.randint(1, 5)) for _ in range(n)]
        if not any(h):
            continue
        mh = RationalMatrix.zeros(dim, dim)
        for c, m in zip(h, alg.mult_matrices):
            mh = mh + m.scale(c)
        cp = char_poly(mh)
        if len(upoly_gcd(cp, upoly_deriv(cp))) == 1:
            break
    else:
        raise DegeneratePerturbation("singular points are not simple (or collide under every tried projection)")
    eigen = complex_roots(cp, tol=tol_root, seed=seed)
    mh_t = _float_matrix(mh).T
    coord_t = [_float_matrix(m).T for m in alg.mult_matrices]
    points = []
    for e in eigen:
        lam = e.coordinates[0]
        _, _, vh = np.linalg.svd(mh_t - lam * np.eye(dim))
        w = vh[-1].conj()
        z = np.array([np.vdot(w, c @ w) / np.vdot(w, w) for c in coord_t])
        z = newton_polish(omega, z)
        res = max(abs(eval_complex(a, z)) for a in omega.components) / _component_scale(omega, z)
        if res > tol_root:
            raise RootFindingError(f"singular point residual {res:.3e} exceeds {tol_root:.1e}")
        points.append(ComplexPoint(tuple(complex(x) for x in z), float(res)))
    return points


def ball_radius(omega: OneForm, default: float = 1.0, seed: int = 0) -> float:
    """Half the distance bound to the nearest singular point of omega other than the origin."""
    try:
        alg = quotient_algebra(omega, MonomialOrder.GLOBAL)
    except NonIsolatedSingularity:
        return default
    if alg.dim == 0:
        return default
    rng = random.Random(seed + 7919)
    h = [Fraction(rng.randint(1, 7), rng.randint(1, 5)) * rng.choice((-1, 1)) for _ in range(omega.nvars)]
    mh = RationalMatrix.zeros(alg.dim, alg.dim)
    for c, m in zip(h, alg.mult_matrices):
        mh = mh + m.scale(c)
    cp = list(char_poly(mh))
    while cp and cp[0] == 0:
        cp.pop(0)
    if len(cp) <= 1:
        return default
    roots = complex_roots(cp, tol=1e-8, seed=seed)
    hn = float(np.linalg.norm([float(x) for x in h]))
    nearest = min(abs(r.coordinates[0]) for r in roots) / hn
    return min(default, 0.5 * nearest)


@dataclass(frozen=True)
class ClassifiedPoint:
    point: ComplexPoint
    orbit_id: int
    isotropy: tuple[Element, ...]
    real_in_closure: bool
    witness: Element | None = None
    stratum_k: int | None = None
    jacobian_sign: int | None = None
    contribution: int = 0             # carried by the first point of each orbit, 0 elsewhere


def _complex_matrix(m: RationalMatrix) -> np.ndarray:
    return _float_matrix(m).astype(complex)


def classify(points: Sequence[ComplexPoint], action: MatrixAction, omega: OneForm,
             tol: float = 1e-6) -> list[ClassifiedPoint]:
    if not points:
        return []
    zs = [np.array(p.coordinates, dtype=complex) for p in points]
    scale = max(1e-8, max(float(np.linalg.norm(z)) for z in zs))
    mats = {a: _complex_matrix(action.element_matrix(a)) for a in action.elements}
    dets = action.det_character()
    jac = jacobian_det(omega)

    def close(u, v) -> bool:
        d = float(np.linalg.norm(u - v)) / scale
        if tol < d < 100 * tol:
            raise AmbiguousClassification(
                f"relative distance {d:.3e} is within a factor 100 of the tolerance {tol:.1e}; "
                "try another seed or a smaller --t")
        return d <= tol

    orbit_of = [-1] * len(points)
    out: list[ClassifiedPoint | None] = [None] * len(points)
    orbit_count = 0
    for i, z in enumerate(zs):
        if orbit_of[i] >= 0:
            continue
        members = []
        for a in action.elements:
            gz = mats[a] @ z
            for j, w in enumerate(zs):
                if close(gz, w):
                    if orbit_of[j] not in (-1, orbit_count):
                        raise AmbiguousClassification("a point was assigned to two orbits")
                    if orbit_of[j] == -1:
                        orbit_of[j] = orbit_count
                        members.append(j)
        stab = tuple(a for a in action.elements if close(mats[a] @ z, z))
        group = action.group
        if any(group.add(a, b) not in stab for a in stab for b in stab):
            raise AmbiguousClassification("the numerical isotropy is not a subgroup")
        conj = z.conj()
        witness = None
        for a in action.elements:
            if close(mats[a] @ z, conj):
                witness = a
                break
        k = sign = None
        contribution = 0
        if witness is not None:
            g = action.element_matrix(witness)
            k = len(kernel_basis(g + RationalMatrix.identity(action.n)))
            val = (-1) ** k * eval_complex(jac, z)
            if val == 0:
                raise AmbiguousClassification("the Jacobian vanishes at a perturbed singular point")
            if abs(val.imag) > tol * abs(val):
                raise AmbiguousClassification(f"(-1)^k J(p) = {val} is not real within tolerance")
            sign = 1 if val.real > 0 else -1
            if all(dets[a] == 1 for a in stab):
                contribution = sign
        for j in members:
            out[j] = ClassifiedPoint(points[j], orbit_count, stab if j == i else _stabilizer(j, zs, mats, close),
                                     witness is not None, witness, k, sign, contribution if j == i else 0)
        orbit_count += 1
    return out


def _stabilizer(j, zs, mats, close):
    return tuple(a for a, m in mats.items() if close(m @ zs[j], zs[j]))


def conservation_sum(classified: Sequence[ClassifiedPoint]) -> int:
    return sum(c.contribution for c in classified)


@dataclass
class OracleResult:
    seed: int
    perturbation: Perturbation
    local_mu: int
    radius: float
    points: list[ComplexPoint]
    inside: list[ComplexPoint]
    classified: list[ClassifiedPoint]
    total: int
    shrinks: int = 0
    resamples: int = 0
    global_dim: int = 0
    notes: list[str] = field(default_factory=list)

    @property
    def escapees(self) -> int:
        # points outside the ball; the local count matched, so these come from far away
        return len(self.points) - len(self.inside)


def _sample_lambdas(rng: random.Random, k: int) -> tuple[Fraction, ...]:
    out = []
    for _ in range(k):
        num = rng.choice([x for x in range(-9, 10) if x])
        out.append(Fraction(num, rng.randint(1, 9)))
    return tuple(out)


def run_oracle(omega: OneForm, action: MatrixAction, seed: int = 0, t: Fraction | None = None,
               max_degree: int = 2, tol_root: float = 1e-10, tol_classify: float = 1e-6,
               radius: float | None = None, max_shrink: int = 6, max_resample: int = 8) -> OracleResult:
    """Perturb, locate, classify and count. Raises OracleError when no trustworthy count is found."""
    for i, g in enumerate(action.generators):
        if not omega.is_invariant(g):
            raise ValueError(f"the form is not invariant under generator {i + 1}")
    local_mu = quotient_algebra(omega, MonomialOrder.LOCAL).dim
    gens = tuple(invariant_generators(action, max_degree))
    if not gens:
        raise OracleError("no invariant polynomials of positive degree up to max_degree")
    rad = radius if radius is not None else ball_radius(omega, seed=seed)
    rng = random.Random(seed)
    t0 = Fraction(t) if t is not None else Fraction(1, 10)
    last_error = None
    for attempt in range(max_resample):
        lambdas = _sample_lambdas(rng, len(gens))
        tt = t0
        for shrink in range(max_shrink):
            pert = Perturbation(tt, lambdas, gens)
            moved = pert.apply(omega)
            try:
                alg = quotient_algebra(moved, MonomialOrder.GLOBAL)
                pts = singular_points(moved, tol_root, seed + attempt, alg)
            except (NonIsolatedSingularity, DegeneratePerturbation, RootFindingError) as exc:
                last_error = exc
                break
            if len(pts) != alg.dim:
                last_error = OracleError("point count differs from the global quotient dimension")
                break
            inside = [p for p in pts if float(np.linalg.norm(p.coordinates)) < rad]
            if len(inside) == local_mu:
                classified = classify(inside, action, moved, tol_classify)
                return OracleResult(seed, pert, local_mu, rad, pts, inside, classified,
                                    conservation_sum(classified), shrink, attempt, alg.dim)
            tt = tt / 10
        else:
            last_error = OracleError(f"could not confine {local_mu} points to the ball of radius {rad:.3g}")
    raise OracleError(f"oracle failed after {max_resample} perturbations: {last_error}")


@dataclass(frozen=True)
class OracleCheck:
    symbolic: int
    oracle: int
    results: tuple[OracleResult, ...]

    @property
    def agree(self) -> bool:
        return all(r.total == self.symbolic for r in self.results)


def oracle_check(omega: OneForm, action: MatrixAction, symbolic: int,
                 seeds: Sequence[int] = (0,), **kwargs) -> OracleCheck:
    results = tuple(run_oracle(omega, action, seed=s, **kwargs) for s in seeds)
    return OracleCheck(symbolic, results[0].total, results)
