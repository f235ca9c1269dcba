"""Seeded random problem instances for certification sweeps.

Problems draw their constants from the ranges the certification suite
exercises; the conductivity is a sinusoid whose amplitude and frequency
are chosen so that the declared band [c1, c2] and Lipschitz constant L
are attained exactly.  The coupling is set to a fixed fraction of the
certified threshold at the automatically chosen norm weight, which keeps
the contraction factor at that fraction.
"""

from __future__ import annotations

from dataclasses import replace

import numpy as np

from .fracquad import FractionalOrder
from .model import ConductivitySpec, SourceSpec, ThermistorProblem
from .solver import choose_norm_weight, lambda_threshold


def sample_problem(seed: int, threshold_fraction: float = 0.5) -> tuple[ThermistorProblem, float]:
    """Build one random problem; returns (problem, chosen norm weight N).

    The coupling satisfies lam == threshold_fraction * lambda_threshold(N),
    so the contraction factor at N equals threshold_fraction.
    """
    rng = np.random.default_rng(seed)
    alpha = float(rng.uniform(0.06, 0.44))
    T = float(rng.uniform(0.5, 2.0))
    c1 = float(rng.uniform(0.3, 1.0))
    c2 = float(c1 * rng.uniform(1.0 + 1e-6, 2.0))
    L = float(rng.uniform(0.1, 1.0))

    base = 0.5 * (c1 + c2)
    amp = 0.5 * (c2 - c1)
    if amp > 1e-9:
        f = ConductivitySpec("sinusoidal", (base, amp, L / amp), L=L, c1=c1, c2=c2)
    else:
        f = ConductivitySpec("constant", (base,), L=L, c1=c1, c2=c2)

    h_kind = int(rng.integers(0, 3))
    if h_kind == 0:
        h = SourceSpec("zero", (), T)
    elif h_kind == 1:
        h = SourceSpec("constant", (float(rng.uniform(0.0, 1.0)),), T)
    else:
        h = SourceSpec("polynomial", (float(rng.uniform(0.0, 1.0)), float(rng.uniform(0.0, 0.5))), T)

    # the optimal N does not depend on lam (the contraction factor is
    # linear in lam), so choose it with a placeholder coupling
    probe = ThermistorProblem(FractionalOrder(alpha), 1.0, T, f, h)
    N = choose_norm_weight(probe)
    lam = threshold_fraction * lambda_threshold(probe, N)
    return replace(probe, lam=lam), N
