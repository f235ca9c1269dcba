"""Interval meshes on [0, T] and real-valued nodal grid functions."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Mesh:
    """Partition of [0, T] into n subintervals.

    Nodes follow t_j = T * (j/n)**grading.  grading == 1 is the uniform
    mesh; grading > 1 clusters nodes toward t = 0, which resolves the
    t**(2*alpha) behaviour of fixed points near the origin.
    """

    T: float
    n: int
    grading: float
    nodes: np.ndarray

    def __eq__(self, other: object):
        if not isinstance(other, Mesh):
            return NotImplemented
        return (
            self.T == other.T
            and self.n == other.n
            and self.grading == other.grading
            and np.array_equal(self.nodes, other.nodes)
        )

    def __hash__(self):
        return hash((self.T, self.n, self.grading))


def make_mesh(T: float, n: int, grading: float = 1.0) -> Mesh:
    """Build a (possibly graded) mesh with endpoints 0 and T hit exactly."""
    T = float(T)
    if not (math.isfinite(T) and T > 0.0):
        raise ValueError(f"mesh endpoint T must be positive and finite, got {T!r}")
    if not (isinstance(n, (int, np.integer)) and n >= 1):
        raise ValueError(f"subinterval count n must be a positive integer, got {n!r}")
    grading = float(grading)
    if not (math.isfinite(grading) and grading >= 1.0):
        raise ValueError(f"grading exponent must be >= 1, got {grading!r}")

    j = np.arange(n + 1, dtype=float)
    nodes = j * T / n if grading == 1.0 else T * (j / n) ** grading
    nodes[0] = 0.0
    nodes[n] = T
    if not np.all(np.diff(nodes) > 0.0):
        raise ValueError(
            f"mesh degenerated: nodes not strictly increasing (n={n}, grading={grading})"
        )
    return Mesh(T=T, n=int(n), grading=grading, nodes=_frozen(nodes))


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Finite real samples attached to the nodes of a mesh."""

    mesh: Mesh
    values: np.ndarray

    def __post_init__(self):
        vals = np.array(self.values, dtype=float)
        if vals.shape != (self.mesh.n + 1,):
            raise ValueError(
                f"values shape {vals.shape} does not match mesh with {self.mesh.n + 1} nodes"
            )
        if not np.all(np.isfinite(vals)):
            raise ValueError("grid function values must all be finite")
        object.__setattr__(self, "values", _frozen(vals))

    @classmethod
    def zeros(cls, mesh: Mesh) -> "GridFunction":
        return cls(mesh, np.zeros(mesh.n + 1))

    @classmethod
    def sample(cls, mesh: Mesh, fn) -> "GridFunction":
        """Sample a vectorised callable at the mesh nodes."""
        return cls(mesh, np.asarray(fn(mesh.nodes), dtype=float))
