from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from quotsig.exactlin import RationalMatrix, upoly_eval_matrix
from quotsig.localalg import MonomialOrder, NonIsolatedSingularity, quotient_algebra, standard_basis
from quotsig.poly import Poly, jacobian_det

from conftest import dform, poly

LOCAL, GLOBAL = MonomialOrder.LOCAL, MonomialOrder.GLOBAL


def test_standard_basis_examples():
    for order in (LOCAL, GLOBAL):
        assert sorted(standard_basis([poly("2*x", 2), poly("2*y", 2)], order), key=str) == [poly("x", 2), poly("y", 2)]
    assert standard_basis([poly("4*x^3", 1)], LOCAL) == [poly("x^3", 1)]
    alg = quotient_algebra([poly("3*x^2 - 1", 2), poly("2*y", 2)], LOCAL)
    assert alg.dim == 0


def test_quotient_examples():
    alg = quotient_algebra(dform("x^4 + y^4", 2), LOCAL)
    assert sorted(alg.monomial_basis) == [(a, b) for a in range(3) for b in range(3)]
    assert quotient_algebra(dform("x^2 + y^2 + z^2", 3), LOCAL).monomial_basis == ((0, 0, 0),)
    alg = quotient_algebra(dform("x^3 + y^3", 2), GLOBAL)
    assert sorted(alg.monomial_basis) == [(0, 0), (0, 1), (1, 0), (1, 1)]


def test_normal_form_examples():
    alg = quotient_algebra([poly("x", 2), poly("y", 2)], LOCAL)
    assert alg.normal_form(poly("2*x", 2)) == (0,)
    alg = quotient_algebra([poly("x^3", 1)], LOCAL)
    assert alg.monomial_basis == ((0,), (1,), (2,))
    assert alg.normal_form(poly("12*x^2", 1)) == (0, 0, 12)
    assert alg.normal_form(poly("x^3", 1)) == (0, 0, 0)


def test_local_differs_from_global_away_from_origin():
    # x^2 + x^3 has a second critical point at x = -2/3
    assert quotient_algebra(dform("x^2 + x^3", 1), LOCAL).dim == 1
    assert quotient_algebra(dform("x^2 + x^3", 1), GLOBAL).dim == 2
    assert quotient_algebra(dform("x^3 + y^3 + x^2*y^2", 2), LOCAL).dim == 4
    assert quotient_algebra(dform("x^3 + y^3 + x^2*y^2", 2), GLOBAL).dim == 7


def test_milnor_numbers():
    assert quotient_algebra(dform("x^2*y + y^4", 2), LOCAL).dim == 5
    assert quotient_algebra(dform("x^5 + y^2", 2), LOCAL).dim == 4
    assert quotient_algebra(dform("x^3 + y^4", 2), LOCAL).dim == 6


def test_non_isolated():
    with pytest.raises(NonIsolatedSingularity):
        quotient_algebra(dform("x^2", 2), LOCAL)
    with pytest.raises(NonIsolatedSingularity):
        quotient_algebra(dform("x^2*y^2", 2), GLOBAL)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_fermat_quartic_dims(n):
    f = " + ".join(f"{v}^4" for v in "xyz"[:n])
    assert quotient_algebra(dform(f, n), LOCAL).dim == 3 ** n
    assert quotient_algebra(dform(f, n), GLOBAL).dim == 3 ** n


@pytest.mark.parametrize("f,n", [("x^3 + y^5", 2), ("x^2*y + y^3", 2), ("x^4 + y^4 + z^2", 3), ("x^3*y + y^3", 2)])
def test_quasihomogeneous_local_equals_global(f, n):
    assert quotient_algebra(dform(f, n), LOCAL).dim == quotient_algebra(dform(f, n), GLOBAL).dim


@pytest.mark.parametrize("f,n,order", [
    ("x^4 + y^4", 2, LOCAL), ("x^3 + y^3 + x^2*y^2", 2, GLOBAL), ("x^2*y + y^4 + x^3", 2, LOCAL),
    ("x^3 + y^3 + z^3 + x*y*z", 3, LOCAL),
])
def test_multiplication_matrices(f, n, order):
    omega = dform(f, n)
    alg = quotient_algebra(omega, order)
    mats = alg.mult_matrices
    for a in mats:
        for b in mats:
            assert a @ b == b @ a
    # every generator acts as zero: substitute the matrices into A_i and apply to the class of 1
    one = alg.normal_form(Poly.constant(n, 1))
    for a in omega.components:
        total = RationalMatrix.zeros(alg.dim, alg.dim)
        for m, c in a.items():
            term = RationalMatrix.identity(alg.dim).scale(c)
            for mat, e in zip(mats, m):
                term = term @ (mat ** e)
            total = total + term
        assert all(x == 0 for x in total @ list(one))


def test_jacobian_class_nonzero_in_local_algebra():
    for f, n in [("x^4 + y^4", 2), ("x^2*y + y^4", 2), ("x^3 + y^3", 2)]:
        omega = dform(f, n)
        alg = quotient_algebra(omega, LOCAL)
        assert any(alg.normal_form(jacobian_det(omega)))


@settings(max_examples=25, deadline=None)
@given(st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=3), min_size=4, max_size=4))
def test_morse_germs_have_dimension_one(c):
    a, b, d, e = c
    f = Poly(2, {(2, 0): a, (1, 1): b, (0, 2): d, (3, 0): e, (1, 2): 1})
    hess = 4 * a * d - b * b
    if hess == 0:
        return
    assert quotient_algebra([f.derivative(0), f.derivative(1)], LOCAL).dim == 1
