"""Problem definition files: line-oriented ``key = value`` text.

Recognised keys::

    alpha         fractional order, in (0, 1/2)
    lambda        coupling constant, > 0
    T             interval length, > 0
    f.kind        constant | affine-clamped | sinusoidal | table-interpolated
    f.params      comma-separated reals (kind-specific)
    f.L           declared Lipschitz constant of f
    f.c1, f.c2    conductivity band, 0 < c1 <= c2
    h.kind        zero | constant | table-interpolated | polynomial
    h.params      comma-separated reals (empty for zero)
    mesh.n        default subinterval count (optional, default 1024)
    mesh.grading  default grading exponent (optional, default 1)

``#`` starts a comment; blank lines are ignored.  Parsing failures carry
the offending line number.  ``format_problem`` writes the canonical form
with 17-significant-digit floats, so a parse -> format -> parse round
trip reproduces every constant exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

from .fracquad import FractionalOrder
from .model import ConductivitySpec, SourceSpec, ThermistorProblem

_REQUIRED_KEYS = (
    "alpha", "lambda", "T",
    "f.kind", "f.params", "f.L", "f.c1", "f.c2",
    "h.kind", "h.params",
)
_OPTIONAL_KEYS = ("mesh.n", "mesh.grading")
_DEFAULT_MESH_N = 1024
_DEFAULT_GRADING = 1.0


class ProblemFormatError(ValueError):
    """Malformed problem text; carries the 1-based line number."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


@dataclass
class ProblemFile:
    problem: ThermistorProblem
    mesh_n: int
    mesh_grading: float


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _parse_float(raw: str, line_no: int, key: str) -> float:
    try:
        return float(raw)
    except ValueError:
        raise ProblemFormatError(line_no, f"{key}: expected a real number, got {raw!r}") from None


def _parse_params(raw: str, line_no: int, key: str) -> tuple[float, ...]:
    raw = raw.strip()
    if not raw:
        return ()
    return tuple(_parse_float(p.strip(), line_no, key) for p in raw.split(","))


def parse_problem_text(text: str) -> ProblemFile:
    entries: dict[str, tuple[str, int]] = {}
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ProblemFormatError(line_no, f"expected 'key = value', got {raw.strip()!r}")
        key = key.strip()
        if key not in _REQUIRED_KEYS and key not in _OPTIONAL_KEYS:
            raise ProblemFormatError(line_no, f"unknown key {key!r}")
        if key in entries:
            raise ProblemFormatError(line_no, f"duplicate key {key!r}")
        entries[key] = (value.strip(), line_no)

    for key in _REQUIRED_KEYS:
        if key not in entries:
            last = max((ln for _, ln in entries.values()), default=0)
            raise ProblemFormatError(last + 1, f"missing required key {key!r}")

    def val(key: str) -> str:
        return entries[key][0]

    def line(key: str) -> int:
        return entries[key][1]

    alpha = _parse_float(val("alpha"), line("alpha"), "alpha")
    lam = _parse_float(val("lambda"), line("lambda"), "lambda")
    T = _parse_float(val("T"), line("T"), "T")

    try:
        order = FractionalOrder(alpha)
    except ValueError as exc:
        raise ProblemFormatError(line("alpha"), str(exc)) from None
    try:
        f = ConductivitySpec(
            kind=val("f.kind"),
            params=_parse_params(val("f.params"), line("f.params"), "f.params"),
            L=_parse_float(val("f.L"), line("f.L"), "f.L"),
            c1=_parse_float(val("f.c1"), line("f.c1"), "f.c1"),
            c2=_parse_float(val("f.c2"), line("f.c2"), "f.c2"),
        )
    except ValueError as exc:
        if isinstance(exc, ProblemFormatError):
            raise
        raise ProblemFormatError(line("f.kind"), str(exc)) from None
    try:
        h = SourceSpec(
            kind=val("h.kind"),
            params=_parse_params(val("h.params"), line("h.params"), "h.params"),
            T=T,
        )
    except ValueError as exc:
        if isinstance(exc, ProblemFormatError):
            raise
        raise ProblemFormatError(line("h.kind"), str(exc)) from None
    try:
        problem = ThermistorProblem(order=order, lam=lam, T=T, f=f, h=h)
    except ValueError as exc:
        raise ProblemFormatError(line("lambda"), str(exc)) from None

    mesh_n = _DEFAULT_MESH_N
    if "mesh.n" in entries:
        raw_n, ln = entries["mesh.n"]
        try:
            mesh_n = int(raw_n)
        except ValueError:
            raise ProblemFormatError(ln, f"mesh.n: expected an integer, got {raw_n!r}") from None
        if mesh_n < 1:
            raise ProblemFormatError(ln, f"mesh.n must be >= 1, got {mesh_n}")
    mesh_grading = _DEFAULT_GRADING
    if "mesh.grading" in entries:
        raw_g, ln = entries["mesh.grading"]
        mesh_grading = _parse_float(raw_g, ln, "mesh.grading")
        if mesh_grading < 1.0:
            raise ProblemFormatError(ln, f"mesh.grading must be >= 1, got {mesh_grading}")

    return ProblemFile(problem=problem, mesh_n=mesh_n, mesh_grading=mesh_grading)


def load_problem(path) -> ProblemFile:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_problem_text(fh.read())


def format_problem(pf: ProblemFile) -> str:
    """Canonical serialisation; stable key order, 17-significant-digit reals."""
    p = pf.problem
    lines = [
        f"alpha = {_fmt(p.order.alpha)}",
        f"lambda = {_fmt(p.lam)}",
        f"T = {_fmt(p.T)}",
        f"f.kind = {p.f.kind}",
        "f.params = " + ", ".join(_fmt(x) for x in p.f.params),
        f"f.L = {_fmt(p.f.L)}",
        f"f.c1 = {_fmt(p.f.c1)}",
        f"f.c2 = {_fmt(p.f.c2)}",
        f"h.kind = {p.h.kind}",
        "h.params = " + ", ".join(_fmt(x) for x in p.h.params),
        f"mesh.n = {pf.mesh_n}",
        f"mesh.grading = {_fmt(pf.mesh_grading)}",
    ]
    return "\n".join(lines) + "\n"
