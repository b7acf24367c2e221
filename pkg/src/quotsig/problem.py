"""Problem descriptions: a small sectioned text format, its parser and formatter.

Example::

    [ring]
    variables = x, y

    [group]
    invariant_factors = 2
    generator = [[-1, 0], [0, -1]]

    [form]
    f = x^2 - y^2

Diagonal groups use ``kind = diagonal`` with ``modulus`` and repeated
``character`` lines; forms may be given as repeated ``component`` lines instead
of ``f``. Optional ``[task]`` keys set default options and ``[burnside]`` holds
named Burnside ring expressions.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from quotsig.exactlin import RationalMatrix
from quotsig.group import AbelianGroup, GroupInputError, MatrixAction
from quotsig.poly import OneForm, Poly, PolySyntaxError, act_linear, differential, parse_poly
from quotsig.quantum import DiagonalGroup


class ProblemError(ValueError):
    """Syntax or semantic error in a problem description, with a source position."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        where = f"line {line}, column {column}: " if line else ""
        super().__init__(where + message)
        self.message = message
        self.line = line
        self.column = column


@dataclass(frozen=True)
class MatrixGroupSpec:
    invariant_factors: tuple[int, ...]
    generators: tuple[RationalMatrix, ...]

    def action(self) -> MatrixAction:
        return MatrixAction(AbelianGroup(self.invariant_factors), self.generators)


@dataclass(frozen=True)
class DiagonalGroupSpec:
    modulus: int
    characters: tuple[tuple[int, ...], ...]

    def group(self, nvars: int) -> DiagonalGroup:
        return DiagonalGroup(self.modulus, nvars, self.characters)


@dataclass(frozen=True)
class FormSpec:
    f: Poly | None = None
    components: tuple[Poly, ...] | None = None
    weights: tuple[int, ...] | None = None
    degree: int | None = None

    def one_form(self) -> OneForm:
        if self.f is not None:
            return differential(self.f)
        return OneForm(tuple(self.components))


TASK_KEYS = {
    "command": str, "seed": int, "t": Fraction, "max_degree": int, "tol_root": float,
    "tol_classify": float, "with_oracle": bool, "radius": float,
}
COMMANDS = ("signature", "quantum", "oracle-check", "burnside")


@dataclass(frozen=True)
class ProblemDescription:
    variables: tuple[str, ...] = ()
    group: MatrixGroupSpec | DiagonalGroupSpec | None = None
    form: FormSpec | None = None
    task: tuple[tuple[str, object], ...] = ()
    burnside: tuple[tuple[str, str], ...] = ()

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def task_option(self, key: str, default=None):
        return dict(self.task).get(key, default)


SECTIONS = {
    "ring": {"variables"},
    "group": {"invariant_factors", "generator", "kind", "modulus", "character"},
    "form": {"f", "component", "weights", "degree"},
    "task": set(TASK_KEYS),
    "burnside": None,
}
REPEATABLE = {("group", "generator"), ("group", "character"), ("form", "component")}

_NAME = re.compile(r"[A-Za-z_][A-Za-z_0-9]*")


@dataclass
class _Entry:
    value: str
    line: int
    column: int


def _split(text: str):
    """Sections as {name: (header line, {key: [entries]})}."""
    sections: dict = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.split("#", 1)[0].rstrip()
        if not stripped.strip():
            continue
        indent = len(stripped) - len(stripped.lstrip())
        body = stripped.strip()
        if body.startswith("["):
            m = re.fullmatch(r"\[\s*([A-Za-z_]+)\s*\]", body)
            if not m:
                raise ProblemError(f"malformed section header {body!r}", lineno, indent + 1)
            name = m.group(1)
            if name not in SECTIONS:
                raise ProblemError(f"unknown section [{name}]; expected one of "
                                   + ", ".join(f"[{s}]" for s in SECTIONS), lineno, indent + 2)
            if name in sections:
                raise ProblemError(f"section [{name}] appears twice", lineno, indent + 1)
            sections[name] = (lineno, {})
            current = name
            continue
        if current is None:
            raise ProblemError("a 'key = value' line appears before any section header", lineno, indent + 1)
        if "=" not in body:
            raise ProblemError("expected 'key = value'", lineno, indent + 1)
        key, _, value = body.partition("=")
        key = key.strip()
        if not _NAME.fullmatch(key):
            raise ProblemError(f"invalid key {key!r}", lineno, indent + 1)
        allowed = SECTIONS[current]
        if allowed is not None and key not in allowed:
            raise ProblemError(f"unknown key {key!r} in [{current}]; allowed: {', '.join(sorted(allowed))}",
                               lineno, indent + 1)
        entries = sections[current][1].setdefault(key, [])
        if entries and (current, key) not in REPEATABLE:
            raise ProblemError(f"key {key!r} repeated in [{current}]", lineno, indent + 1)
        vcol = stripped.index("=") + 2 + (len(value) - len(value.lstrip()))
        entries.append(_Entry(value.strip(), lineno, vcol))
    return sections


def _int_list(e: _Entry) -> tuple[int, ...]:
    parts = [p.strip() for p in e.value.split(",")] if e.value else []
    out = []
    for p in parts:
        if not re.fullmatch(r"[+-]?\d+", p):
            raise ProblemError(f"expected an integer, found {p!r}", e.line, e.column + e.value.find(p))
        out.append(int(p))
    return tuple(out)


def _single_int(e: _Entry) -> int:
    vals = _int_list(e)
    if len(vals) != 1:
        raise ProblemError("expected a single integer", e.line, e.column)
    return vals[0]


_ROW = re.compile(r"\[([^\[\]]*)\]")


def parse_matrix(e: _Entry) -> RationalMatrix:
    text = e.value
    if not re.fullmatch(r"\[\s*(\[[^\[\]]*\]\s*,?\s*)*\]", text):
        raise ProblemError("expected a matrix written as [[a, b], [c, d]]", e.line, e.column)
    rows = []
    for m in _ROW.finditer(text, 1):
        row = []
        offset = m.start(1)
        for part in m.group(1).split(","):
            token = part.strip()
            col = e.column + offset + (len(part) - len(part.lstrip()))
            offset += len(part) + 1
            if not re.fullmatch(r"[+-]?\d+(/\d+)?", token):
                raise ProblemError(f"expected a rational entry p/q, found {token!r}", e.line, col)
            try:
                row.append(Fraction(token))
            except ZeroDivisionError:
                raise ProblemError("zero denominator", e.line, col) from None
        rows.append(row)
    if not rows or len({len(r) for r in rows}) != 1:
        raise ProblemError("matrix rows must be nonempty and of equal length", e.line, e.column)
    return RationalMatrix(rows)


def _poly(e: _Entry, names) -> Poly:
    try:
        return parse_poly(e.value, names)
    except PolySyntaxError as exc:
        raise ProblemError(exc.message, e.line, e.column + exc.column - 1) from None


def _task_value(key: str, e: _Entry):
    kind = TASK_KEYS[key]
    try:
        if kind is bool:
            if e.value.lower() not in ("true", "false"):
                raise ValueError
            return e.value.lower() == "true"
        if kind is str:
            if key == "command" and e.value not in COMMANDS:
                raise ProblemError(f"unknown command {e.value!r}; expected one of {', '.join(COMMANDS)}",
                                   e.line, e.column)
            return e.value
        return kind(e.value)
    except (ValueError, ZeroDivisionError):
        raise ProblemError(f"invalid value {e.value!r} for {key}", e.line, e.column) from None


def parse(text: str, validate: bool = True) -> ProblemDescription:
    """Parse and validate a problem description."""
    secs = _split(text)
    variables: tuple[str, ...] = ()
    if "ring" in secs:
        entries = secs["ring"][1].get("variables")
        if not entries:
            raise ProblemError("[ring] needs 'variables'", secs["ring"][0], 1)
        e = entries[0]
        names = [v.strip() for v in e.value.split(",")] if e.value.strip() else []
        for v in names:
            if not _NAME.fullmatch(v):
                raise ProblemError(f"invalid variable name {v!r}", e.line, e.column + e.value.find(v))
        if len(set(names)) != len(names):
            raise ProblemError("repeated variable name", e.line, e.column)
        variables = tuple(names)

    group = None
    group_lines: dict = {}
    if "group" in secs:
        gline, g = secs["group"]
        kind = g["kind"][0].value if "kind" in g else "matrix"
        if kind == "matrix":
            for bad in ("modulus", "character"):
                if bad in g:
                    raise ProblemError(f"'{bad}' belongs to kind = diagonal", g[bad][0].line, g[bad][0].column)
            if "invariant_factors" not in g:
                raise ProblemError("[group] needs 'invariant_factors'", gline, 1)
            factors = _int_list(g["invariant_factors"][0])
            gens = tuple(parse_matrix(e) for e in g.get("generator", []))
            group = MatrixGroupSpec(factors, gens)
            group_lines = {"factors": g["invariant_factors"][0], "generators": g.get("generator", [])}
        elif kind == "diagonal":
            for bad in ("invariant_factors", "generator"):
                if bad in g:
                    raise ProblemError(f"'{bad}' belongs to matrix groups", g[bad][0].line, g[bad][0].column)
            if "modulus" not in g:
                raise ProblemError("diagonal [group] needs 'modulus'", gline, 1)
            modulus = _single_int(g["modulus"][0])
            if modulus < 1:
                raise ProblemError("modulus must be positive", g["modulus"][0].line, g["modulus"][0].column)
            chars = tuple(tuple(x % modulus for x in _int_list(e)) for e in g.get("character", []))
            group = DiagonalGroupSpec(modulus, chars)
            group_lines = {"characters": g.get("character", [])}
        else:
            e = g["kind"][0]
            raise ProblemError(f"unknown group kind {kind!r}; expected matrix or diagonal", e.line, e.column)

    form = None
    if "form" in secs:
        fline, fs = secs["form"]
        if ("f" in fs) == ("component" in fs):
            raise ProblemError("[form] needs exactly one of 'f' or 'component' lines", fline, 1)
        f = _poly(fs["f"][0], variables) if "f" in fs else None
        comps = tuple(_poly(e, variables) for e in fs["component"]) if "component" in fs else None
        weights = _int_list(fs["weights"][0]) if "weights" in fs else None
        degree = _single_int(fs["degree"][0]) if "degree" in fs else None
        form = FormSpec(f, comps, weights, degree)

    task = ()
    if "task" in secs:
        task = tuple((k, _task_value(k, es[0])) for k, es in secs["task"][1].items())
    burnside = ()
    if "burnside" in secs:
        burnside = tuple((k, es[0].value) for k, es in secs["burnside"][1].items())

    desc = ProblemDescription(variables, group, form, task, burnside)
    if validate:
        _validate(desc, secs, group_lines)
    return desc


def _validate(desc: ProblemDescription, secs, group_lines):
    n = desc.nvars
    if isinstance(desc.group, MatrixGroupSpec):
        spec = desc.group
        fl = group_lines["factors"]
        if any(m < 1 for m in spec.invariant_factors) or not spec.invariant_factors:
            raise ProblemError("invariant factors must be positive integers", fl.line, fl.column)
        gens = group_lines["generators"]
        if spec.generators or "ring" in secs:
            if len(spec.generators) != len(spec.invariant_factors):
                raise ProblemError(f"{len(spec.invariant_factors)} invariant factors but "
                                   f"{len(spec.generators)} generator lines", fl.line, fl.column)
            for e, g in zip(gens, spec.generators):
                if "ring" in secs and g.shape != (n, n):
                    raise ProblemError(f"generator is {g.rows}x{g.cols} but there are {n} variables",
                                       e.line, e.column)
            try:
                spec.action()
            except GroupInputError as exc:
                m = re.search(r"generators? (\d+)", str(exc))
                e = gens[int(m.group(1)) - 1] if m else fl
                raise ProblemError(str(exc), e.line, e.column) from None
    if isinstance(desc.group, DiagonalGroupSpec):
        for e, c in zip(group_lines["characters"], desc.group.characters):
            if len(c) != n:
                raise ProblemError(f"character has {len(c)} entries but there are {n} variables",
                                   e.line, e.column)
    if desc.form is not None:
        fline = secs["form"][0]
        form = desc.form
        if form.components is not None and len(form.components) != n:
            raise ProblemError(f"{len(form.components)} components for {n} variables", fline, 1)
        if form.weights is not None and len(form.weights) != n:
            raise ProblemError(f"{len(form.weights)} weights for {n} variables", fline, 1)
        if isinstance(desc.group, MatrixGroupSpec) and desc.group.generators:
            gens = group_lines["generators"]
            for i, g in enumerate(desc.group.generators):
                ok = act_linear(form.f, g) == form.f if form.f is not None else form.one_form().is_invariant(g)
                if not ok:
                    what = "f" if form.f is not None else "the 1-form"
                    raise ProblemError(f"{what} is not invariant under generator {i + 1}",
                                       gens[i].line, gens[i].column)
        if isinstance(desc.group, DiagonalGroupSpec) and form.f is not None:
            m = desc.group.modulus
            for e, a in zip(group_lines["characters"], desc.group.characters):
                for mono, _ in form.f.items():
                    if sum(x * k for x, k in zip(a, mono)) % m:
                        raise ProblemError(f"f is not invariant under the character {list(a)}",
                                           e.line, e.column)


def _frac_str(x: Fraction) -> str:
    return str(x)


def format_matrix(m: RationalMatrix) -> str:
    return "[" + ", ".join("[" + ", ".join(_frac_str(x) for x in row) + "]" for row in m.to_lists()) + "]"


def _task_str(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    return repr(v) if isinstance(v, float) else str(v)


def format_description(desc: ProblemDescription) -> str:
    """Canonical text for a description; ``parse(format_description(d)) == d``."""
    out = []
    names = list(desc.variables)
    if desc.variables or desc.form is not None:
        out += ["[ring]", "variables = " + ", ".join(desc.variables), ""]
    if isinstance(desc.group, MatrixGroupSpec):
        out += ["[group]", "invariant_factors = " + ", ".join(map(str, desc.group.invariant_factors))]
        out += ["generator = " + format_matrix(g) for g in desc.group.generators]
        out.append("")
    elif isinstance(desc.group, DiagonalGroupSpec):
        out += ["[group]", "kind = diagonal", f"modulus = {desc.group.modulus}"]
        out += ["character = " + ", ".join(map(str, c)) for c in desc.group.characters]
        out.append("")
    if desc.form is not None:
        out.append("[form]")
        if desc.form.f is not None:
            out.append("f = " + desc.form.f.to_str(names))
        else:
            out += ["component = " + c.to_str(names) for c in desc.form.components]
        if desc.form.weights is not None:
            out.append("weights = " + ", ".join(map(str, desc.form.weights)))
        if desc.form.degree is not None:
            out.append(f"degree = {desc.form.degree}")
        out.append("")
    if desc.task:
        out.append("[task]")
        out += [f"{k} = {_task_str(v)}" for k, v in desc.task]
        out.append("")
    if desc.burnside:
        out.append("[burnside]")
        out += [f"{k} = {v}" for k, v in desc.burnside]
        out.append("")
    return "\n".join(out)
