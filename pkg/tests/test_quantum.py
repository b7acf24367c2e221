import itertools
import random

import pytest

from quotsig.exactlin import InertiaTriple, RationalMatrix
from quotsig.group import AbelianGroup, MatrixAction
from quotsig.quantum import (
    DiagonalGroup,
    DiagonalInputError,
    admissibility_check,
    diagonal_sector_dims,
    fermat_sign_data,
    grading_element,
    quantum_report,
    restrict_to_fixed,
    sector,
)
from quotsig.residue import NotInvariantError

from conftest import poly, z2
from quantum_oracle import fermat_sectors, fermat_totals


def fermat(exponents):
    return poly(" + ".join(f"{v}^{e}" for v, e in zip("xyzw", exponents)), len(exponents))


def sign_action(diagonals):
    """Elementary abelian 2-group generated by the given +-1 diagonals."""
    mats = [RationalMatrix.diag(d) for d in diagonals]
    return MatrixAction(AbelianGroup((2,) * len(mats)), mats)


def test_restriction_examples():
    f = poly("x^2 + y^4", 2)
    basis, fg, residual = restrict_to_fixed(f, z2([1, -1]), (1,))
    assert fg == poly("x^2", 1) and len(basis) == 1
    assert residual.generators[0] == RationalMatrix.identity(1)
    basis, fg, _ = restrict_to_fixed(f, z2([1, -1]), (0,))
    assert fg == f and len(basis) == 2
    basis, fg, _ = restrict_to_fixed(poly("x^2 + y^2", 2), MatrixAction.antipodal(2), (1,))
    assert basis == () and fg.nvars == 0


def test_sector_examples():
    anti = MatrixAction.antipodal(2)
    s = sector(poly("x^2 + y^2", 2), (0,), anti)
    assert (s.inv_dim, s.inertia, s.by_convention) == (1, InertiaTriple(1, 0, 0), False)
    s = sector(poly("x^2 + y^2", 2), (1,), anti)
    assert (s.n_g, s.inv_dim, s.inertia, s.by_convention) == (0, 1, InertiaTriple(1, 0, 0), True)
    s = sector(poly("x^4", 1), (0,), MatrixAction.antipodal(1))
    assert (s.inv_dim, s.inertia) == (1, InertiaTriple(1, 0, 0))


def test_report_examples():
    r = quantum_report(poly("x^2 + y^2", 2), MatrixAction.antipodal(2))
    assert (r.total_dim, r.orbifold_dim, r.real_signature) == (2, 2, 2)
    r = quantum_report(poly("x^2 + y^2 + z^2", 3), MatrixAction.antipodal(3))
    assert [s.inv_dim for s in r.sectors] == [0, 1]
    assert (r.total_dim, r.orbifold_dim, r.real_signature) == (1, 1, 1)
    r = quantum_report(poly("x^2 - y^2 + z^2", 3), MatrixAction.trivial(3))
    assert (r.total_dim, r.orbifold_dim, r.real_signature) == (1, -1, -1)


def test_non_invariant_function():
    with pytest.raises(NotInvariantError):
        quantum_report(poly("x^3 + y^2", 2), MatrixAction.antipodal(2))


@pytest.mark.parametrize("exponents,diagonals", [
    ((2, 2), [(-1, -1)]),
    ((2, 2, 2), [(-1, -1, -1)]),
    ((4, 4), [(-1, 1), (1, -1)]),
    ((4, 2), [(-1, -1)]),
    ((4, 4, 2), [(-1, 1, 1), (1, -1, -1)]),
    ((6, 4), [(-1, -1)]),
    ((4, 4, 4), [(-1, -1, 1)]),
])
def test_matrix_tier_matches_brute_force(exponents, diagonals):
    report = quantum_report(fermat(exponents), sign_action(diagonals))
    chars = [tuple(int(d == -1) for d in diag) for diag in diagonals]
    expected = {g: (ng, dim, sig) for g, ng, dim, sig in fermat_sectors(exponents, chars, 2)}
    for s in report.sectors:
        m = RationalMatrix.diag([1] * len(exponents))
        for gen, e in zip(diagonals, s.g):
            if e:
                m = m @ RationalMatrix.diag(gen)
        key = tuple(int(m[j, j] == -1) for j in range(len(exponents)))
        assert (s.n_g, s.inv_dim, s.signature) == expected[key]
    assert (report.total_dim, report.orbifold_dim, report.real_signature) == fermat_totals(exponents, chars, 2)


@pytest.mark.parametrize("exponents", [(2, 2), (4,), (4, 4), (4, 2, 2), (3, 3)])
def test_diagonal_tier_matches_matrix_tier(exponents):
    weights, d, group = fermat_sign_data(exponents)
    if any(e % 2 for e in exponents):
        with pytest.raises(NotInvariantError):
            diagonal_sector_dims(fermat(exponents), weights, d, group)
        return
    diag = diagonal_sector_dims(fermat(exponents), weights, d, group)
    mat = quantum_report(fermat(exponents), MatrixAction.sign_changes(len(exponents)))
    assert sorted((s.n_g, s.inv_dim) for s in diag) == sorted((s.n_g, s.inv_dim) for s in mat.sectors)


def test_diagonal_examples():
    cube = diagonal_sector_dims(poly("x^3", 1), [1], 3, DiagonalGroup(3, 1, ((1,),)))
    assert [(s.g, s.inv_dim) for s in cube] == [((0,), 0), ((1,), 1), ((2,), 1)]
    assert cube[0].milnor_basis == ((0,), (1,))
    sq = diagonal_sector_dims(poly("x^2", 1), [1], 2, DiagonalGroup(2, 1, ((1,),)))
    assert [s.inv_dim for s in sq] == [0, 1]
    triv = diagonal_sector_dims(poly("x^3 + y^4", 2), [4, 3], 12, DiagonalGroup(12, 2, ((0, 0),)))
    assert [s.inv_dim for s in triv] == [6]


@pytest.mark.parametrize("exponents,gens,m", [
    ((3,), [(1,)], 3), ((3, 3), [(1, 0), (0, 1)], 3), ((3, 3, 3), [(1, 1, 1)], 3),
    ((5, 5), [(1, 4)], 5), ((4, 4), [(1, 1)], 4), ((6, 3), [(1, 2)], 6),
])
def test_diagonal_tier_matches_brute_force(exponents, gens, m):
    d = max(exponents)
    weights = [d // e for e in exponents]
    out = diagonal_sector_dims(fermat(exponents), weights, d, DiagonalGroup(m, len(exponents), tuple(gens)))
    expected = {g: dim for g, _, dim, _ in fermat_sectors(exponents, gens, m)}
    assert {s.g: s.inv_dim for s in out} == expected


def test_inverse_sectors_have_equal_dimension():
    for f, action in [
        (poly("x^2 - x*y + y^2", 2), MatrixAction(AbelianGroup((3,)), [RationalMatrix([[0, -1], [1, -1]])])),
        (fermat((4, 4, 2)), sign_action([(-1, 1, 1), (1, -1, -1)])),
        (poly("x^4 + y^4 + z^2", 3),
         MatrixAction(AbelianGroup((4,)), [RationalMatrix([[0, -1, 0], [1, 0, 0], [0, 0, -1]])])),
    ]:
        r = quantum_report(f, action)
        dims = {s.g: s.inv_dim for s in r.sectors}
        for g in action.elements:
            assert dims[g] == dims[action.group.neg(g)]


def test_total_dim_invariant_under_commuting_coordinate_change():
    rng = random.Random(5)
    action = sign_action([(-1, -1, 1)])
    f = poly("x^4 + y^4 + z^2 + x*y", 3)
    base = quantum_report(f, action).total_dim
    for _ in range(3):
        # block-diagonal matrices commute with diag(-1, -1, 1)
        a = [[rng.randint(-2, 2) for _ in range(2)] for _ in range(2)]
        c = RationalMatrix([[a[0][0], a[0][1], 0], [a[1][0], a[1][1], 0], [0, 0, rng.choice([1, 2, -3])]])
        if c.det() == 0:
            continue
        assert quantum_report(f.compose_linear(c), action).total_dim == base


def test_grading_and_admissibility():
    assert grading_element([1], 3, 3) == (1,)
    assert admissibility_check([1], 3, DiagonalGroup(3, 1, ((1,),)))
    assert not admissibility_check([1], 2, DiagonalGroup(2, 1, ((0,),)))
    weights, d, group = fermat_sign_data([2, 2, 2])
    assert admissibility_check(weights, d, group)
    with pytest.raises(DiagonalInputError):
        grading_element([1], 3, 4)


def test_diagonal_input_errors():
    with pytest.raises(DiagonalInputError):
        diagonal_sector_dims(poly("x^3 + x^2", 1), [1], 3, DiagonalGroup(3, 1, ((1,),)))
    with pytest.raises(DiagonalInputError):
        DiagonalGroup(3, 2, ((1,),))
    with pytest.raises(DiagonalInputError):
        DiagonalGroup(0, 1, ((1,),))
    with pytest.raises(NotInvariantError):
        diagonal_sector_dims(poly("x^3", 1), [1], 3, DiagonalGroup(2, 1, ((1,),)))


def test_diagonal_group_closure():
    g = DiagonalGroup(4, 2, ((1, 2),))
    assert g.elements == ((0, 0), (1, 2), (2, 0), (3, 2))
    assert g.contains((5, 6)) and not g.contains((1, 0))
    assert len(DiagonalGroup(2, 3, tuple(itertools.permutations((1, 0, 0)))).elements) == 8
