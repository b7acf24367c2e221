from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from quotsig.exactlin import (
    InertiaTriple,
    RationalMatrix,
    RootFindingError,
    char_poly,
    complex_roots,
    inertia,
    kernel_basis,
    upoly_mul,
)

small = st.integers(-5, 5)
rationals = st.fractions(min_value=-4, max_value=4, max_denominator=5)


def square(n, elems=small):
    return st.lists(st.lists(elems, min_size=n, max_size=n), min_size=n, max_size=n)


def test_kernel_examples():
    assert kernel_basis(RationalMatrix([[0]])) == [(Fraction(1),)]
    assert kernel_basis(RationalMatrix.identity(2)) == []
    assert kernel_basis(RationalMatrix([[1, -1], [-1, 1]])) == [(Fraction(1), Fraction(1))]


def test_inertia_examples():
    assert inertia(RationalMatrix.diag([1, -1])) == InertiaTriple(1, 0, 1)
    assert inertia(RationalMatrix([[0, 1], [1, 0]])) == InertiaTriple(1, 0, 1)
    assert inertia(RationalMatrix([[Fraction(1, 12)]])) == InertiaTriple(1, 0, 0)
    assert inertia(RationalMatrix([[0, 0], [0, 0]])) == InertiaTriple(0, 2, 0)
    assert inertia(RationalMatrix([[0, 2, 0], [2, 0, 0], [0, 0, -3]])) == InertiaTriple(1, 0, 2)


def test_inertia_rejects_nonsymmetric():
    with pytest.raises(ValueError):
        inertia(RationalMatrix([[0, 1], [0, 0]]))


def test_char_poly_examples():
    assert char_poly(RationalMatrix([[0]])) == (0, 1)
    assert char_poly(RationalMatrix([[0, 1], [1, 0]])) == (-1, 0, 1)
    # multiplication by x on Q[x]/<x^2 - 2>, basis (1, x)
    assert char_poly(RationalMatrix([[0, 2], [1, 0]])) == (-2, 0, 1)


def test_root_examples():
    roots = sorted(complex_roots([1, 0, 1]), key=lambda p: p.coordinates[0].imag)
    assert abs(roots[0].coordinates[0] + 1j) < 1e-12 and abs(roots[1].coordinates[0] - 1j) < 1e-12
    r2 = sorted(p.coordinates[0].real for p in complex_roots([-2, 0, 1]))
    assert r2 == pytest.approx([-2 ** 0.5, 2 ** 0.5], abs=1e-12)
    r3 = sorted(p.coordinates[0].real for p in complex_roots([0, -1, 0, 1], seed=3))
    assert r3 == pytest.approx([-1, 0, 1], abs=1e-12)


def test_roots_deterministic():
    p = [3, -1, 4, 1, -5, 9, 2]
    assert complex_roots(p, seed=7) == complex_roots(p, seed=7)


def test_roots_of_constant_fail():
    with pytest.raises((ValueError, RootFindingError)):
        complex_roots([0])


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4).flatmap(lambda n: st.tuples(square(n, rationals), square(n))))
def test_inertia_congruence_invariant(pair):
    s, p = pair
    n = len(s)
    s = RationalMatrix(s)
    s = s + s.T
    p = RationalMatrix(p)
    if p.det() == 0:
        p = p + RationalMatrix.identity(n).scale(11)
    if p.det() == 0:
        return
    assert inertia(p.T @ s @ p) == inertia(s)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4).flatmap(lambda r: st.integers(1, 5).flatmap(
    lambda c: st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r))))
def test_rank_plus_nullity(rows):
    m = RationalMatrix(rows)
    ker = kernel_basis(m)
    assert m.rank() + len(ker) == m.cols
    for v in ker:
        assert all(x == 0 for x in m @ list(v))


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 6).flatmap(lambda n: square(n)))
def test_char_poly_matches_numpy(rows):
    m = RationalMatrix(rows)
    ours = [float(c) for c in reversed(char_poly(m))]
    ref = np.poly(np.array(rows, dtype=float))
    assert np.allclose(ours, ref, atol=1e-6 * max(1.0, np.max(np.abs(ref))))


def _from_roots(roots):
    p = [1]
    for r in roots:
        p = upoly_mul(p, [-Fraction(r), 1])
    return p


def _sorted(points):
    return sorted((p.coordinates[0] for p in points), key=lambda z: (round(z.real, 6), round(z.imag, 6)))


@settings(max_examples=30, deadline=None)
@given(st.sets(st.fractions(min_value=-3, max_value=3, max_denominator=4), min_size=2, max_size=7), st.data())
def test_roots_of_product_are_union(roots, data):
    roots = sorted(roots)
    k = data.draw(st.integers(1, len(roots) - 1))
    a, b = roots[:k], roots[k:]
    tol = 1e-10
    got = _sorted(complex_roots(upoly_mul(_from_roots(a), _from_roots(b)), tol=tol))
    union = _sorted(complex_roots(_from_roots(a), tol=tol) + complex_roots(_from_roots(b), tol=tol))
    assert len(got) == len(union) == len(roots)
    for g, e in zip(got, union):
        assert abs(g - e) <= 10 * tol


def test_repeated_roots_converge_to_cluster():
    # a double root is only determined to about sqrt(machine epsilon)
    got = _sorted(complex_roots(_from_roots([1, 1, -2])))
    assert abs(got[0] + 2) < 1e-10
    assert all(abs(z - 1) < 1e-6 for z in got[1:])
