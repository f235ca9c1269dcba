"""Discrete fractional integral and derivative operators on meshes.

The order-mu integral of g over [0, t_k],

    (I^mu g)(t_k) = integral_0^{t_k} (t_k - s)**(mu - 1) / Gamma(mu) * g(s) ds,

is discretised by product integration: on each subinterval g is replaced
by its linear interpolant and the moments of the singular kernel factor
are evaluated in closed form.  The resulting lower-triangular weight
tables are exact for constant and linear integrands, second-order
accurate for smooth ones, and have nonnegative entries.

The fractional derivative of order a in (0, 1) is realised literally as
the first derivative of the (1-a)-order integral, using finite
differences on the mesh.  It is intended for verification work; accuracy
is first order in the mesh width away from t = 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .gammafn import gamma
from .mesh import GridFunction, Mesh, _frozen

_ORDER_MATCH_TOL = 1e-12


@dataclass(frozen=True)
class FractionalOrder:
    """Order parameter alpha restricted to (0, 1/2)."""

    alpha: float

    def __post_init__(self):
        if not (isinstance(self.alpha, float) and 0.0 < self.alpha < 0.5):
            raise ValueError(
                f"fractional order alpha must lie in (0, 1/2), got {self.alpha!r}"
            )

    @property
    def two_alpha(self) -> float:
        return 2.0 * self.alpha


@dataclass(frozen=True, eq=False)
class WeightTable:
    """Lower-triangular product-integration weights for one integral order.

    Row k holds weights w[k, 0..k] such that
    (I^order g)(t_k) ~= sum_j w[k, j] * g(t_j).  Row sums equal
    t_k**order / Gamma(order + 1) (exactness for constants) and every
    entry is nonnegative.
    """

    order: float
    mesh: Mesh
    weights: np.ndarray


def build_weights(mesh: Mesh, order: float) -> WeightTable:
    """Assemble the dense weight table for an integral order in (0, 1]."""
    order = float(order)
    if not (0.0 < order <= 1.0):
        raise ValueError(f"integral order must lie in (0, 1], got {order!r}")
    n = mesh.n
    w = np.zeros((n + 1, n + 1))
    g1 = gamma(order + 1.0)
    g2 = gamma(order + 2.0)
    if mesh.grading == 1.0:
        _fill_uniform(w, mesh, order, g1, g2)
    else:
        _fill_general(w, mesh, order, g1, g2)
    return WeightTable(order=order, mesh=mesh, weights=_frozen(w))


def _fill_general(w: np.ndarray, mesh: Mesh, mu: float, g1: float, g2: float) -> None:
    # processed in row blocks: one power evaluation per block keeps the
    # Python overhead negligible next to the O(n^2) moment arithmetic
    nodes = mesh.nodes
    n = mesh.n
    h = nodes[1:] - nodes[:-1]
    block = 256
    for k0 in range(1, n + 1, block):
        k1 = min(k0 + block, n + 1)
        cols = k1  # rows in this block only reach columns < k1
        d = nodes[k0:k1, None] - nodes[None, :cols]
        np.maximum(d, 0.0, out=d)  # upper-triangle remainder is masked to 0
        p = d**mu
        pp = p * d
        # scaled kernel moments over each subinterval [t_j, t_{j+1}]:
        # q1 = int K ds / Gamma(mu), q2 = int K * (s - t_j) ds / Gamma(mu)
        q1 = (p[:, :-1] - p[:, 1:]) / g1
        q2 = d[:, :-1] * q1 - mu * (pp[:, :-1] - pp[:, 1:]) / g2
        right = q2 / h[: cols - 1]
        left = q1 - right
        # row k uses subintervals j < k; entries at j >= k are exactly zero
        # because d (hence every moment) vanishes there
        w[k0:k1, : cols - 1] = left
        w[k0:k1, 1:cols] += right


def _fill_uniform(w: np.ndarray, mesh: Mesh, mu: float, g1: float, g2: float) -> None:
    # On a uniform mesh the moments depend on k - j only, so one power
    # evaluation serves every row.
    n = mesh.n
    h = mesh.T / n
    i = np.arange(n + 1, dtype=float)
    p = (i * h) ** mu
    pp = p * (i * h)
    q1 = np.empty(n + 1)
    q2 = np.empty(n + 1)
    q1[0] = q2[0] = 0.0
    q1[1:] = (p[1:] - p[:-1]) / g1
    q2[1:] = i[1:] * h * q1[1:] - mu * (pp[1:] - pp[:-1]) / g2
    interior = q1[1:n] - (q2[1:n] - q2[2 : n + 1]) / h
    # row k reads interior[k-j-1] at column j; pre-reverse once so each row
    # assignment is a contiguous forward copy
    interior_rev = interior[::-1].copy() if n >= 2 else interior
    first = q1 - q2 / h  # weight attached to node 0 in row k is first[k]
    last = q2[1] / h  # weight attached to node k itself
    for k in range(1, n + 1):
        w[k, 0] = first[k]
        w[k, k] = last
        if k >= 2:
            w[k, 1:k] = interior_rev[n - k : n - 1]


def fractional_integral(g: GridFunction, w: WeightTable) -> GridFunction:
    """Apply a weight table to a grid function; exact zero at node 0."""
    if g.mesh != w.mesh:
        raise ValueError("grid function and weight table live on different meshes")
    out = w.weights @ g.values
    out[0] = 0.0
    return GridFunction(g.mesh, out)


def rl_derivative(g: GridFunction, order: float, w1m: WeightTable) -> GridFunction:
    """Fractional derivative of order in (0, 1): d/dt of the (1-order) integral.

    The complementary integral is computed with ``w1m`` (which must hold
    weights for order ``1 - order`` on g's mesh), then differentiated by
    finite differences: one-sided at the endpoints, the three-point
    nonuniform formula inside.
    """
    order = float(order)
    if not (0.0 < order < 1.0):
        raise ValueError(f"derivative order must lie in (0, 1), got {order!r}")
    if abs(w1m.order - (1.0 - order)) > _ORDER_MATCH_TOL:
        raise ValueError(
            f"weight table has order {w1m.order}, expected {1.0 - order} "
            f"(complement of {order})"
        )
    if g.mesh != w1m.mesh:
        raise ValueError("grid function and weight table live on different meshes")
    v = fractional_integral(g, w1m).values
    t = g.mesh.nodes
    dv = np.empty_like(v)
    dv[0] = (v[1] - v[0]) / (t[1] - t[0])
    dv[-1] = (v[-1] - v[-2]) / (t[-1] - t[-2])
    if g.mesh.n >= 2:
        hm = t[1:-1] - t[:-2]
        hp = t[2:] - t[1:-1]
        dv[1:-1] = (
            (-hp / (hm * (hm + hp))) * v[:-2]
            + ((hp - hm) / (hm * hp)) * v[1:-1]
            + (hm / (hp * (hm + hp))) * v[2:]
        )
    return GridFunction(g.mesh, dv)
