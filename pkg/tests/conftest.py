from fractions import Fraction

import pytest

from quotsig.exactlin import RationalMatrix
from quotsig.group import AbelianGroup, MatrixAction
from quotsig.poly import differential, parse_poly

NAMES = ["x", "y", "z", "w"]


def dform(text, n):
    return differential(parse_poly(text, NAMES[:n]))


def poly(text, n):
    return parse_poly(text, NAMES[:n])


def z2(diag):
    return MatrixAction(AbelianGroup((2,)), [RationalMatrix.diag(diag)])


def rotation3():
    return MatrixAction(AbelianGroup((3,)), [RationalMatrix([[0, -1], [1, -1]])])


def sgn3_action():
    return z2([1, -1, -1])


def catalog():
    """(name, omega, action) triples used by the oracle and property tests."""
    return [
        ("antipodal-sphere-n2", dform("x^2 + y^2", 2), MatrixAction.antipodal(2)),
        ("antipodal-sphere-n3", dform("x^2 + y^2 + z^2", 3), MatrixAction.antipodal(3)),
        ("saddle-antipodal", dform("x^2 - y^2", 2), MatrixAction.antipodal(2)),
        ("quartic-n1", dform("x^4", 1), MatrixAction.antipodal(1)),
        ("quartic-n2-antipodal", dform("x^4 + y^4", 2), MatrixAction.antipodal(2)),
        ("quartic-n2-signs", dform("x^4 + y^4", 2), MatrixAction.sign_changes(2)),
        ("cubic-family-negative-t", dform("x^3 + x + y^2 - z^2", 3), sgn3_action()),
        ("cubic-family-zero-t", dform("x^3 + y^2 - z^2", 3), sgn3_action()),
        ("rotation-z3", dform("x^2 - x*y + y^2", 2), rotation3()),
    ]


@pytest.fixture(scope="session")
def catalog_entries():
    return catalog()


def fr(*xs):
    return tuple(Fraction(x) for x in xs)


ACCEPTANCE_LINES: list[str] = []


def verdict(number, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
