"""One test per acceptance criterion; each prints a PASS/FAIL line collected in the terminal summary."""

import itertools
import random
import time
from fractions import Fraction

from quotsig.burnside import BurnsideElement, burnside_class, multiply, parse_burnside, r0, r1, to_rep_ring
from quotsig.group import AbelianGroup, MatrixAction
from quotsig.localalg import MonomialOrder, NonIsolatedSingularity, quotient_algebra
from quotsig.oracle import OracleError, oracle_check, run_oracle
from quotsig.poly import Poly, differential, jacobian_det
from quotsig.quantum import DiagonalGroup, diagonal_sector_dims, quantum_report
from quotsig.residue import (
    DegeneratePairingError,
    g_signature,
    local_signature_at,
    omega_module,
    radial_index_report,
    residue_pairing,
)

from burnside_oracle import product_orbits, random_combination, rng_for
from conftest import catalog, dform, poly, sgn3_action, verdict
from quantum_oracle import fermat_totals


def squares(n):
    return " + ".join(f"{v}^2" for v in "xyzw"[:n])


def quartics(n):
    return " + ".join(f"{v}^4" for v in "xyz"[:n])


def test_criterion_1_antipodal_spheres():
    results, slow = [], []
    for n, expected in [(1, 0), (2, 1), (3, 0), (4, 1)]:
        start = time.perf_counter()
        sig = radial_index_report(dform(squares(n), n), MatrixAction.antipodal(n)).signature
        elapsed = time.perf_counter() - start
        results.append(sig == expected)
        if elapsed >= 1:
            slow.append(n)
    ok = all(results) and not slow
    assert verdict(1, ok, f"antipodal d(sum x_i^2) signatures n=1..4 correct={results} slow={slow}")


def test_criterion_2_fermat_quartics():
    start = time.perf_counter()
    rows = []
    for n in (1, 2, 3):
        for name, action in [("antipodal", MatrixAction.antipodal(n)), ("signs", MatrixAction.sign_changes(n))]:
            r = radial_index_report(dform(quartics(n), n), action, with_blocks=False)
            rows.append((n, name, r.dim, r.signature))
    elapsed = time.perf_counter() - start
    ok = all(sig == 1 and dim == 3 ** n for n, _, dim, sig in rows) and elapsed < 10
    assert verdict(2, ok, f"d(sum x_i^4) signature 1 with dims 3,9,27 in {elapsed:.2f}s: {rows}")


def test_criterion_3_antipodal_saddle():
    module = omega_module(dform("x^2 - y^2", 2), MatrixAction.antipodal(2))
    sig = residue_pairing(module).signature
    gs = g_signature(module)
    z2 = AbelianGroup((2,))
    a = parse_burnside("1 - 2*[G/e]", z2.subgroup_lattice())
    chi = to_rep_ring(a)
    checks = {
        "signature": sig == -1,
        "blocks": [(b.label, b.inertia.signature) for b in gs.blocks] == [((1,), -1)],
        "virtual": gs.virtual_character.multiplicities == {(0,): -1},
        "r0": r0(a) == -1,
        "character": (chi.real_value((0,)), chi.real_value((1,))) == (-3, 1),
    }
    assert verdict(3, all(checks.values()), f"saddle example {checks}")


def test_criterion_4_oracle_agreement():
    start = time.perf_counter()
    failures = []
    names = []
    for name, omega, action in catalog():
        symbolic = radial_index_report(omega, action, with_blocks=False).signature
        check = oracle_check(omega, action, symbolic, seeds=(0, 1, 2))
        names.append(name)
        if not check.agree:
            failures.append((name, symbolic, [r.total for r in check.results]))
    elapsed = time.perf_counter() - start
    ok = not failures and elapsed < 60 and len(names) >= 6
    assert verdict(4, ok, f"{len(names)} catalog inputs x 3 seeds in {elapsed:.1f}s, disagreements {failures}")


def random_cubic_gradient(rng, n):
    terms = {}
    for d in (2, 3):
        for m in itertools.product(range(d + 1), repeat=n):
            if sum(m) == d and rng.random() < 0.6:
                terms[m] = Fraction(rng.randint(-4, 4), rng.randint(1, 3))
    return Poly(n, terms)


def test_criterion_5_eisenbud_levine():
    rng = random.Random(2024)
    checked, mismatches = 0, []
    while checked < 12:
        n = rng.choice([1, 2])
        f = random_cubic_gradient(rng, n)
        omega = differential(f)
        if not f:
            continue
        try:
            quotient_algebra(omega, MonomialOrder.GLOBAL)
            report = radial_index_report(omega, MatrixAction.trivial(n), with_blocks=False)
        except NonIsolatedSingularity:
            continue
        if report.dim == 0:
            continue
        res = run_oracle(omega, MatrixAction.trivial(n), seed=checked)
        checked += 1
        if res.total != report.signature:
            mismatches.append((f.to_str(["x", "y"][:n]), report.signature, res.total))
    assert verdict(5, not mismatches, f"{checked} random degree<=3 gradients, mismatches {mismatches}")


def test_criterion_6_functional_independence():
    cases = [
        ("quartic-n2-signs", dform("x^4 + y^4", 2), MatrixAction.sign_changes(2)),
        ("quartic-n2-antipodal", dform("x^4 + y^4", 2), MatrixAction.antipodal(2)),
        ("saddle", dform("x^2 - y^2", 2), MatrixAction.antipodal(2)),
    ]
    rng = random.Random(6)
    bad, counts = [], {}
    for name, omega, action in cases:
        module = omega_module(omega, action)
        base = residue_pairing(module)
        done = 0
        while done < 20:
            cov = [Fraction(rng.randint(-9, 9), rng.randint(1, 6)) for _ in range(module.dim)]
            try:
                p = residue_pairing(module, covector=cov)
            except DegeneratePairingError:
                continue
            done += 1
            if (p.inertia_full, p.inertia_invariant) != (base.inertia_full, base.inertia_invariant):
                bad.append((name, cov))
        counts[name] = done
    assert verdict(6, not bad, f"random symmetrized functionals per input {counts}, disagreements {len(bad)}")


def test_criterion_7_conservation_sgn3():
    action = sgn3_action()
    rows = []
    for tail in ("y^2 - z^2", "y^2 + z^2", "-y^2 - z^2"):
        at_zero = radial_index_report(dform(f"x^3 + {tail}", 3), action).signature
        moved = dform(f"x^3 - 3*x + {tail}", 3)
        local = [local_signature_at(moved, action, p).signature for p in ([1, 0, 0], [-1, 0, 0])]
        rows.append((tail, at_zero, local))
    ok = all(at_zero == sum(local) for _, at_zero, local in rows)
    assert verdict(7, ok, f"d(x^3 - t x + tail) at t=0 vs local sum at t=3 (real points need t > 0): {rows}")


def test_criterion_8_quantum_sectors():
    anti2 = quantum_report(poly("x^2 + y^2", 2), MatrixAction.antipodal(2))
    anti3 = quantum_report(poly("x^2 + y^2 + z^2", 3), MatrixAction.antipodal(3))
    cube = diagonal_sector_dims(poly("x^3", 1), [1], 3, DiagonalGroup(3, 1, ((1,),)))
    got = {
        "x^2+y^2": (anti2.total_dim, anti2.orbifold_dim, anti2.real_signature),
        "x^2+y^2+z^2": (anti3.total_dim, anti3.orbifold_dim, anti3.real_signature),
        "x^3/Z3": sum(s.inv_dim for s in cube),
    }
    brute = {
        "x^2+y^2": fermat_totals([2, 2], [(1, 1)], 2),
        "x^2+y^2+z^2": fermat_totals([2, 2, 2], [(1, 1, 1)], 2),
        "x^3/Z3": fermat_totals([3], [(1,)], 3)[0],
    }
    expected = {"x^2+y^2": (2, 2, 2), "x^2+y^2+z^2": (1, 1, 1), "x^3/Z3": 2}
    ok = got == brute == expected
    assert verdict(8, ok, f"pipeline {got}, brute force {brute}")


def test_criterion_9_burnside():
    mult_bad = []
    for group in (AbelianGroup((2, 4)), AbelianGroup((6,))):
        for h, k in itertools.product(group.subgroup_lattice().subgroups, repeat=2):
            expected = {}
            for stab in product_orbits(group, h, k):
                expected[stab] = expected.get(stab, 0) + 1
            if multiply(burnside_class(group, h), burnside_class(group, k)) != \
                    BurnsideElement(group, group.elements, expected):
                mult_bad.append((group.invariant_factors, h, k))
    rng = rng_for(9)
    failures = {"r0": 0, "r1": 0, "to_rep_ring": 0}
    for i in range(50):
        group = AbelianGroup((2, 4)) if i % 2 else AbelianGroup((6,))
        subs = list(group.subgroup_lattice().subgroups)
        a = BurnsideElement(group, group.elements, random_combination(rng, subs))
        b = BurnsideElement(group, group.elements, random_combination(rng, subs))
        for name, hom in (("r0", r0), ("r1", r1), ("to_rep_ring", to_rep_ring)):
            if hom(a + b) != hom(a) + hom(b) or hom(a * b) != hom(a) * hom(b):
                failures[name] += 1
    ok = not mult_bad and not any(failures.values())
    assert verdict(9, ok, f"multiply vs orbit enumeration mismatches {len(mult_bad)}; "
                          f"pairs failing the ring homomorphism law out of 50: {failures}")


def test_criterion_10_property_suite():
    problems = []
    for name, omega, action in catalog():
        module = omega_module(omega, action)
        gram = residue_pairing(module).gram_full if module.dim else None
        for a, b in itertools.product(action.elements, repeat=2):
            if module.twist[a] @ module.twist[b] != module.twist[action.group.add(a, b)]:
                problems.append((name, "twist", a, b))
        if gram is not None:
            for a in action.elements:
                t = module.twist[a]
                if t.T @ gram @ t != gram:
                    problems.append((name, "invariance", a))
        res = run_oracle(omega, action, seed=0)
        if len(res.points) != res.global_dim:
            problems.append((name, "stickelberger"))
        odd = all(action.group.element_order(a) % 2 for a in action.elements if a != action.group.identity)
        if odd and len(action.stratify()) != 1:
            problems.append((name, "odd-order strata"))
        if odd:
            for c in res.classified:
                if c.real_in_closure and c.witness != action.group.identity:
                    problems.append((name, "odd-order witness"))
    assert verdict(10, not problems, f"catalog of {len(catalog())} inputs, violations {problems}")
