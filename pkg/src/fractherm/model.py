"""Problem data for the nonlocal thermistor model and its fixed-point map.

The unknown temperature u on [0, T] is driven by the field

    lam * f(u(t)) / (integral_0^T f(u) dx)**2 + h(t),

where the electrical conductivity f is Lipschitz and pinned to a band
[c1, c2], and the source h is bounded.  The fixed-point map sends u to
the fractional integral (order 2*alpha) of that field; its fixed point
is the model solution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .fracquad import FractionalOrder, WeightTable, fractional_integral
from .mesh import GridFunction

CONDUCTIVITY_KINDS = ("constant", "affine-clamped", "sinusoidal", "table-interpolated")
SOURCE_KINDS = ("zero", "constant", "table-interpolated", "polynomial")

_LIPSCHITZ_PAIRS = 1000
_LIPSCHITZ_SEED = 20260810
_SUP_SAMPLES = 40961  # dense sample used for the source sup bound
_ORDER_MATCH_TOL = 1e-12


def _as_params(params: Sequence[float]) -> tuple[float, ...]:
    return tuple(float(p) for p in params)


def _table_axes(params: tuple[float, ...], what: str) -> tuple[np.ndarray, np.ndarray]:
    if len(params) < 4 or len(params) % 2 != 0:
        raise ValueError(
            f"{what} table needs an even number of values (>= 4), got {len(params)}"
        )
    xs = np.asarray(params[0::2])
    ys = np.asarray(params[1::2])
    if not np.all(np.diff(xs) > 0):
        raise ValueError(f"{what} table abscissae must be strictly increasing")
    return xs, ys


@dataclass
class ConductivitySpec:
    """Parametric conductivity u -> f(u), clamped into [c1, c2] at evaluation.

    The Lipschitz constant L and the band [c1, c2] are declared by the
    caller (the certification formulas consume the declared constants);
    construction spot-checks the declaration on random argument pairs and
    refuses gross violations.  ``clamp_events`` counts evaluations where
    the raw formula left the band, so callers can tell when the effective
    conductivity differs from the formula they wrote.
    """

    kind: str
    params: tuple[float, ...]
    L: float
    c1: float
    c2: float
    clamp_events: int = field(default=0, init=False, compare=False, repr=False)
    band_clamp_events: int = field(default=0, init=False, compare=False, repr=False)

    def __post_init__(self):
        if self.kind not in CONDUCTIVITY_KINDS:
            raise ValueError(
                f"unknown conductivity kind {self.kind!r}; expected one of {CONDUCTIVITY_KINDS}"
            )
        self.params = _as_params(self.params)
        self.L = float(self.L)
        self.c1 = float(self.c1)
        self.c2 = float(self.c2)
        if not (self.L >= 0.0 and math.isfinite(self.L)):
            raise ValueError(f"Lipschitz constant must be nonnegative, got {self.L!r}")
        if not (0.0 < self.c1 <= self.c2 and math.isfinite(self.c2)):
            raise ValueError(
                f"conductivity band needs 0 < c1 <= c2, got c1={self.c1!r} c2={self.c2!r}"
            )
        npar = {"constant": 1, "affine-clamped": 2, "sinusoidal": 3}.get(self.kind)
        if npar is not None and len(self.params) != npar:
            raise ValueError(
                f"{self.kind} conductivity takes {npar} parameter(s), got {len(self.params)}"
            )
        if self.kind == "table-interpolated":
            _table_axes(self.params, "conductivity")
        self._spot_check_lipschitz()

    def _raw(self, u: np.ndarray) -> np.ndarray:
        if self.kind == "constant":
            return np.full_like(u, self.params[0])
        if self.kind == "affine-clamped":
            a0, a1 = self.params
            return a0 + a1 * u
        if self.kind == "sinusoidal":
            base, amp, freq = self.params
            return base + amp * np.sin(freq * u)
        xs, ys = _table_axes(self.params, "conductivity")
        return np.interp(u, xs, ys)

    def evaluate(self, u) -> np.ndarray:
        """Clamped conductivity values at the given arguments."""
        u = np.asarray(u, dtype=float)
        raw = self._raw(u)
        out = np.clip(raw, self.c1, self.c2)
        if np.any(raw != out):
            self.clamp_events += 1
        return out

    def _spot_check_lipschitz(self) -> None:
        rng = np.random.default_rng(_LIPSCHITZ_SEED)
        lo, hi = -10.0, 10.0
        if self.kind == "table-interpolated":
            xs, _ = _table_axes(self.params, "conductivity")
            lo, hi = float(xs[0]) - 1.0, float(xs[-1]) + 1.0
        a = rng.uniform(lo, hi, _LIPSCHITZ_PAIRS)
        b = rng.uniform(lo, hi, _LIPSCHITZ_PAIRS)
        fa = np.clip(self._raw(a), self.c1, self.c2)
        fb = np.clip(self._raw(b), self.c1, self.c2)
        slack = self.L * np.abs(a - b) * (1.0 + 1e-9) + 1e-12
        bad = np.abs(fa - fb) > slack
        if np.any(bad):
            i = int(np.argmax(bad))
            raise ValueError(
                f"declared Lipschitz constant {self.L} violated: "
                f"|f({a[i]:.6g}) - f({b[i]:.6g})| = {abs(fa[i] - fb[i]):.6g} "
                f"> L*|a-b| = {self.L * abs(a[i] - b[i]):.6g}"
            )


@dataclass
class SourceSpec:
    """Source term t -> h(t) on [0, T] with a conservative sup bound.

    ``h_inf`` is the max of |h| over a dense sample of [0, T], computed
    once at construction.
    """

    kind: str
    params: tuple[float, ...]
    T: float
    h_inf: float = field(default=0.0, init=False, compare=False)

    def __post_init__(self):
        if self.kind not in SOURCE_KINDS:
            raise ValueError(
                f"unknown source kind {self.kind!r}; expected one of {SOURCE_KINDS}"
            )
        self.params = _as_params(self.params)
        self.T = float(self.T)
        if not (math.isfinite(self.T) and self.T > 0.0):
            raise ValueError(f"source interval length must be positive, got {self.T!r}")
        if self.kind == "zero" and self.params:
            raise ValueError("zero source takes no parameters")
        if self.kind == "constant" and len(self.params) != 1:
            raise ValueError("constant source takes exactly one parameter")
        if self.kind == "polynomial" and not self.params:
            raise ValueError("polynomial source needs at least one coefficient")
        if self.kind == "table-interpolated":
            _table_axes(self.params, "source")
        dense = np.linspace(0.0, self.T, _SUP_SAMPLES)
        self.h_inf = float(np.max(np.abs(self.evaluate(dense))))

    def evaluate(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        if self.kind == "zero":
            return np.zeros_like(t)
        if self.kind == "constant":
            return np.full_like(t, self.params[0])
        if self.kind == "polynomial":
            return np.polynomial.polynomial.polyval(t, self.params)
        xs, ys = _table_axes(self.params, "source")
        return np.interp(t, xs, ys)


@dataclass
class ThermistorProblem:
    """Full data set: order, coupling lam, interval, conductivity, source."""

    order: FractionalOrder
    lam: float
    T: float
    f: ConductivitySpec
    h: SourceSpec

    def __post_init__(self):
        self.lam = float(self.lam)
        self.T = float(self.T)
        if not (math.isfinite(self.lam) and self.lam > 0.0):
            raise ValueError(f"coupling lam must be positive, got {self.lam!r}")
        if not (math.isfinite(self.T) and self.T > 0.0):
            raise ValueError(f"interval length T must be positive, got {self.T!r}")
        if self.h.T != self.T:
            raise ValueError(
                f"source was built for [0, {self.h.T}], problem interval is [0, {self.T}]"
            )


def nonlocal_denominator(u: GridFunction, f: ConductivitySpec) -> float:
    """Squared trajectory integral (integral_0^T f(u) dx)**2.

    Composite trapezoid on u's own mesh; the result is pinned into the
    band [(c1*T)**2, (c2*T)**2] if quadrature rounding ever leaves it.
    """
    T = u.mesh.T
    integral = float(np.trapezoid(f.evaluate(u.values), u.mesh.nodes))
    lo, hi = f.c1 * T, f.c2 * T
    if integral < lo or integral > hi:
        f.band_clamp_events += 1
        integral = min(max(integral, lo), hi)
    return integral**2


def rhs_field(problem: ThermistorProblem, u: GridFunction) -> GridFunction:
    """Driving field lam * f(u)/denominator + h evaluated nodewise."""
    if u.mesh.T != problem.T:
        raise ValueError(
            f"grid endpoint {u.mesh.T} does not match problem interval {problem.T}"
        )
    den = nonlocal_denominator(u, problem.f)
    vals = problem.lam * problem.f.evaluate(u.values) / den
    vals = vals + problem.h.evaluate(u.mesh.nodes)
    return GridFunction(u.mesh, vals)


def apply_fixed_point_map(
    problem: ThermistorProblem, u: GridFunction, w2a: WeightTable
) -> GridFunction:
    """One application of the fixed-point map: order-2*alpha integral of the field."""
    if w2a.mesh != u.mesh:
        raise ValueError("weight table and iterate live on different meshes")
    if abs(w2a.order - problem.order.two_alpha) > _ORDER_MATCH_TOL:
        raise ValueError(
            f"weight table order {w2a.order} does not match 2*alpha = "
            f"{problem.order.two_alpha}"
        )
    return fractional_integral(rhs_field(problem, u), w2a)
