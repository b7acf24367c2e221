"""Command line interface: ``quotsig <command> --input FILE [options]``.

Exit codes: 0 success, 2 input error, 3 non-isolated singularity,
4 verification failure (oracle disagreement, failed classification,
degenerate pairing).
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from quotsig.burnside import (
    BurnsideError,
    format_burnside,
    parse_burnside,
    r0,
    r1,
    to_rep_ring,
)
from quotsig.exactlin import RationalMatrix, RootFindingError
from quotsig.group import AbelianGroup, GroupInputError, SubgroupBoundExceeded
from quotsig.localalg import NonIsolatedSingularity
from quotsig.oracle import OracleError, OracleResult, run_oracle
from quotsig.poly import Poly
from quotsig.problem import (
    DiagonalGroupSpec,
    MatrixGroupSpec,
    ProblemDescription,
    ProblemError,
    parse,
)
from quotsig.quantum import (
    DiagonalInputError,
    admissibility_check,
    diagonal_sector_dims,
    quantum_report,
)
from quotsig.residue import DegeneratePairingError, NotInvariantError, radial_index_report

EXIT_OK, EXIT_INPUT, EXIT_NONISOLATED, EXIT_VERIFY = 0, 2, 3, 4


class Report:
    """Plain-text report: ``key: value`` lines, indented blocks and aligned tables."""

    def __init__(self):
        self.lines: list[str] = []

    def kv(self, key: str, value):
        self.lines.append(f"{key}: {value}")

    def block(self, key: str, rows: Sequence[str]):
        self.lines.append(f"{key}:")
        self.lines += ["  " + r for r in rows] if rows else ["  (empty)"]

    def table(self, key: str, header: Sequence[str], rows: Sequence[Sequence]):
        cells = [list(map(str, header))] + [[str(c) for c in r] for r in rows]
        widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
        self.lines.append(f"{key}:")
        for r in cells:
            self.lines.append("  " + "  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip())

    def blank(self):
        self.lines.append("")

    def text(self) -> str:
        return "\n".join(self.lines) + "\n"


def fmt_vector(v) -> str:
    return "(" + ", ".join(str(x) for x in v) + ")"


def fmt_matrix_rows(m: RationalMatrix) -> list[str]:
    return ["[" + ", ".join(str(x) for x in row) + "]" for row in m.to_lists()]


def fmt_real(x: float) -> str:
    s = f"{x:.12g}"
    return "0" if s in ("-0", "0") else s


def fmt_complex(z: complex, scale: float = 1.0) -> str:
    # components far below the size of the point are rounding noise
    cut = 1e-13 * max(scale, abs(z))
    re = z.real if abs(z.real) > cut else 0.0
    im = z.imag if abs(z.imag) > cut else 0.0
    if im == 0:
        return fmt_real(re)
    if re == 0:
        return fmt_real(im) + "i"
    sign = "-" if im < 0 else "+"
    return f"{fmt_real(re)}{sign}{fmt_real(abs(im))}i"


def fmt_element(a) -> str:
    return "(" + ",".join(map(str, a)) + ")"


def fmt_monomial(m, names) -> str:
    return Poly.monomial(m).to_str(names)


def describe_input(rep: Report, desc: ProblemDescription):
    names = list(desc.variables)
    if desc.variables:
        rep.kv("variables", ", ".join(names))
    g = desc.group
    if isinstance(g, MatrixGroupSpec):
        rep.kv("group", " x ".join(f"Z/{m}" for m in g.invariant_factors))
        for i, m in enumerate(g.generators, 1):
            rep.kv(f"generator {i}", "[" + ", ".join(fmt_matrix_rows(m)) + "]")
    elif isinstance(g, DiagonalGroupSpec):
        rep.kv("group", f"diagonal, modulus {g.modulus}")
        for i, c in enumerate(g.characters, 1):
            rep.kv(f"character {i}", fmt_vector(c))
    if desc.form is not None:
        if desc.form.f is not None:
            rep.kv("form", "d(" + desc.form.f.to_str(names) + ")")
        else:
            rep.kv("form", "(" + ", ".join(c.to_str(names) for c in desc.form.components) + ")")


def _need(desc: ProblemDescription, *, form=True, matrix=True):
    if form and desc.form is None:
        raise ProblemError("this command needs a [form] section")
    if form and not desc.variables:
        raise ProblemError("this command needs a [ring] section")
    if matrix and not (isinstance(desc.group, MatrixGroupSpec) and desc.group.generators):
        raise ProblemError("this command needs a [group] with generator matrices")


def _oracle_section(rep: Report, results: Sequence[OracleResult], symbolic: int, names):
    for res in results:
        rep.blank()
        rep.kv("oracle seed", res.seed)
        rep.kv("perturbation t", res.perturbation.t)
        rep.kv("perturbation generators", ", ".join(g.to_str(names) for g in res.perturbation.generators))
        rep.kv("perturbation lambdas", fmt_vector(res.perturbation.lambdas))
        rep.kv("ball radius", fmt_real(res.radius))
        rep.kv("global quotient dim", res.global_dim)
        rep.kv("points in ball", f"{len(res.inside)} (local multiplicity {res.local_mu})")
        rep.kv("points outside ball", res.escapees)
        scale = max((abs(c) for p in res.inside for c in p.coordinates), default=1.0)
        rows = []
        for i, c in enumerate(res.classified):
            rows.append([i, "(" + ", ".join(fmt_complex(z, scale) for z in c.point.coordinates) + ")",
                         c.orbit_id, "{" + " ".join(fmt_element(a) for a in c.isotropy) + "}",
                         "yes" if c.real_in_closure else "no",
                         fmt_element(c.witness) if c.witness is not None else "-",
                         c.stratum_k if c.stratum_k is not None else "-",
                         {1: "+", -1: "-", None: "n/a"}[c.jacobian_sign], c.contribution])
        rep.table("points", ["#", "coordinates", "orbit", "isotropy", "real", "witness", "k", "sign(J)",
                             "contribution"], rows)
        rep.kv("conservation sum", res.total)
    verdict = "AGREE" if all(r.total == symbolic for r in results) else "DISAGREE"
    totals = ", ".join(str(r.total) for r in results)
    rep.blank()
    rep.kv("oracle verdict", f"{verdict} (symbolic {symbolic}, oracle {totals})")
    return verdict == "AGREE"


def _oracle_kwargs(opts) -> dict:
    kw = dict(t=opts["t"], max_degree=opts["max_degree"], tol_root=opts["tol_root"],
              tol_classify=opts["tol_classify"])
    if opts.get("radius") is not None:
        kw["radius"] = opts["radius"]
    return kw


def cmd_signature(desc: ProblemDescription, opts) -> tuple[str, int]:
    _need(desc)
    action = desc.group.action()
    omega = desc.form.one_form()
    names = list(desc.variables)
    r = radial_index_report(omega, action)
    p = r.pairing
    rep = Report()
    rep.kv("command", "signature")
    describe_input(rep, desc)
    rep.kv("local algebra dim", r.dim)
    rep.kv("monomial basis", ", ".join(fmt_monomial(m, names) for m in r.monomial_basis))
    rep.kv("functional", fmt_vector(p.functional))
    rep.block("gram full", fmt_matrix_rows(p.gram_full))
    rep.kv("inertia full", p.inertia_full)
    rep.kv("invariant dim", r.invariant_dim)
    rep.block("invariant basis", [fmt_vector(v) for v in p.invariant_basis])
    rep.block("gram invariant", fmt_matrix_rows(p.gram_invariant))
    rep.kv("inertia invariant", p.inertia_invariant)
    rep.kv("signature", r.signature)
    rep.kv("radial index of the pushed-down form on the closed real quotient at 0", r.radial_index)
    if r.g_signature is not None:
        rows = [[fmt_vector(b.label), len(b.basis), b.inertia, b.inertia.signature]
                for b in r.g_signature.blocks]
        rep.table("g-signature blocks (cyclotomic index per generator)", ["label", "dim", "inertia", "signature"],
                  rows)
        vc = r.g_signature.virtual_character
        if vc is not None:
            terms = [f"{c}*chi{fmt_element(b)}" for b, c in sorted(vc.multiplicities.items())]
            rep.kv("g-signature virtual character", " + ".join(terms) if terms else "0")
    code = EXIT_OK
    if opts["with_oracle"]:
        results = [run_oracle(omega, action, seed=opts["seed"], **_oracle_kwargs(opts))]
        if not _oracle_section(rep, results, r.signature, names):
            code = EXIT_VERIFY
    return rep.text(), code


def cmd_oracle(desc: ProblemDescription, opts) -> tuple[str, int]:
    _need(desc)
    action = desc.group.action()
    omega = desc.form.one_form()
    symbolic = radial_index_report(omega, action, with_blocks=False).signature
    rep = Report()
    rep.kv("command", "oracle-check")
    describe_input(rep, desc)
    rep.kv("symbolic signature", symbolic)
    results = [run_oracle(omega, action, seed=opts["seed"], **_oracle_kwargs(opts))]
    ok = _oracle_section(rep, results, symbolic, list(desc.variables))
    return rep.text(), EXIT_OK if ok else EXIT_VERIFY


def cmd_quantum(desc: ProblemDescription, opts) -> tuple[str, int]:
    _need(desc, matrix=False)
    if desc.form.f is None:
        raise ProblemError("quantum needs a function f, not 1-form components")
    rep = Report()
    rep.kv("command", "quantum")
    describe_input(rep, desc)
    names = list(desc.variables)
    if isinstance(desc.group, DiagonalGroupSpec):
        form = desc.form
        if form.weights is None or form.degree is None:
            raise ProblemError("diagonal quantum data needs 'weights' and 'degree' in [form]")
        group = desc.group.group(desc.nvars)
        sectors = diagonal_sector_dims(form.f, form.weights, form.degree, group)
        rows = [[fmt_element(s.g), s.n_g, "{" + ", ".join(names[j] for j in s.fixed) + "}",
                 len(s.milnor_basis) if s.n_g else 1, s.inv_dim, "yes" if s.n_g == 0 else ""]
                for s in sectors]
        rep.table("sectors", ["g", "n_g", "fixed", "milnor dim", "inv dim", "convention"], rows)
        rep.kv("total dim", sum(s.inv_dim for s in sectors))
        rep.kv("orbifold dim", sum((-1) ** s.n_g * s.inv_dim for s in sectors))
        try:
            adm = "yes" if admissibility_check(form.weights, form.degree, group) else "no"
        except DiagonalInputError as exc:
            adm = f"undefined ({exc})"
        rep.kv("admissible (J in G)", adm)
        return rep.text(), EXIT_OK
    _need(desc)
    q = quantum_report(desc.form.f, desc.group.action())
    rows = []
    for s in q.sectors:
        fg = s.restricted_f.to_str([f"y{i + 1}" for i in range(s.n_g)]) if s.n_g else "-"
        rows.append([fmt_element(s.g), s.n_g, fg, s.dim, s.inv_dim, s.inertia, s.signature,
                     "yes" if s.by_convention else ""])
    rep.table("sectors", ["g", "n_g", "f^g", "dim", "inv dim", "inertia", "signature", "convention"], rows)
    rep.kv("total dim", q.total_dim)
    rep.kv("orbifold dim", q.orbifold_dim)
    rep.kv("real signature", q.real_signature)
    rep.kv("orbifold index of df on the closed real quotient at 0", q.real_signature)
    rep.kv("note", "sectors with n_g = 0 have dimension 1 and inertia (1, 0, 0) by convention")
    return rep.text(), EXIT_OK


def cmd_burnside(desc: ProblemDescription, opts) -> tuple[str, int]:
    g = desc.group
    if not isinstance(g, MatrixGroupSpec):
        raise ProblemError("burnside needs a [group] with invariant_factors")
    group = AbelianGroup(g.invariant_factors)
    lattice = group.subgroup_lattice()
    rep = Report()
    rep.kv("command", "burnside")
    rep.kv("group", " x ".join(f"Z/{m}" for m in g.invariant_factors))
    rows = [[f"H{i}", len(h), "{" + " ".join(fmt_element(a) for a in h) + "}"]
            for i, h in enumerate(lattice.subgroups)]
    rep.table("subgroups", ["name", "order", "elements"], rows)
    values = {}
    for name, text in desc.burnside:
        a = parse_burnside(text, lattice)
        values[name] = a
        _burnside_lines(rep, name, a, lattice)
    if "a" in values and "b" in values:
        _burnside_lines(rep, "a*b", values["a"] * values["b"], lattice)
    return rep.text(), EXIT_OK


def _burnside_lines(rep: Report, name, a, lattice):
    rep.blank()
    rep.kv(name, format_burnside(a, lattice))
    rep.kv(f"r0({name})", r0(a))
    rep.kv(f"r1({name})", r1(a))
    chi = to_rep_ring(a)
    rows = []
    for e in a.group.elements:
        v = chi.real_value(e)
        rows.append([fmt_element(e), v if v is not None else fmt_vector(chi.value(e))])
    rep.table(f"character of r({name})", ["g", "value"], rows)


COMMAND_FUNCS = {
    "signature": cmd_signature,
    "quantum": cmd_quantum,
    "oracle-check": cmd_oracle,
    "burnside": cmd_burnside,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quotsig",
        description="Radial index of invariant 1-forms on real quotient singularities.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMAND_FUNCS:
        p = sub.add_parser(name)
        p.add_argument("--input", required=True, help="problem description file ('-' for stdin)")
        p.add_argument("--seed", type=int)
        p.add_argument("--tol-root", type=float)
        p.add_argument("--tol-classify", type=float)
        p.add_argument("--max-degree", type=int)
        p.add_argument("--t", type=Fraction, help="initial perturbation scale (rational)")
        p.add_argument("--radius", type=float, help="ball radius for the oracle")
        p.add_argument("--with-oracle", action="store_true", default=None)
    return parser


DEFAULTS = {"seed": 0, "tol_root": 1e-10, "tol_classify": 1e-6, "max_degree": 2, "t": None,
            "radius": None, "with_oracle": False}


@dataclass(frozen=True)
class RunResult:
    stdout: str
    stderr: str
    code: int


def run(command: str, text: str, opts: dict | None = None) -> RunResult:
    """Parse, dispatch and report. Command-line options override [task] values, which override defaults."""
    try:
        desc = parse(text)
        merged = dict(DEFAULTS)
        merged.update({k: v for k, v in desc.task if k in DEFAULTS})
        merged.update({k: v for k, v in (opts or {}).items() if v is not None})
        out, code = COMMAND_FUNCS[command](desc, merged)
        return RunResult(out, "", code)
    except (ProblemError, GroupInputError, NotInvariantError, BurnsideError, DiagonalInputError,
            SubgroupBoundExceeded) as exc:
        return RunResult("", f"input error: {exc}\n", EXIT_INPUT)
    except NonIsolatedSingularity as exc:
        return RunResult("", f"non-isolated singularity: {exc}\n", EXIT_NONISOLATED)
    except (OracleError, RootFindingError, DegeneratePairingError) as exc:
        return RunResult("", f"verification failure: {exc}\n", EXIT_VERIFY)


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.input == "-":
            text = sys.stdin.read()
        else:
            with open(args.input, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    flags = {k: getattr(args, k) for k in DEFAULTS}
    result = run(args.command, text, flags)
    sys.stdout.write(result.stdout)
    sys.stderr.write(result.stderr)
    return result.code


if __name__ == "__main__":
    sys.exit(main())
