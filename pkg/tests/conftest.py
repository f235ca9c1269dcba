from dataclasses import replace

import fractherm as ft


def constant_problem(lam=1.0, T=1.0, alpha=0.25, fval=1.0):
    """Conductivity == fval, no source: the fixed point has a closed form."""
    f = ft.ConductivitySpec("constant", (fval,), L=0.0, c1=fval, c2=fval)
    h = ft.SourceSpec("zero", (), T)
    return ft.ThermistorProblem(ft.FractionalOrder(alpha), lam, T, f, h)


def representative_problem(
    alpha=0.25, T=1.0, c1=0.5, c2=1.5, L=0.5,
    h_kind="zero", h_params=(), threshold_fraction=0.4, lam=None,
):
    """Sinusoidal conductivity hitting the declared band and Lipschitz constant
    exactly; coupling defaults to a fraction of the certified threshold."""
    base, amp = 0.5 * (c1 + c2), 0.5 * (c2 - c1)
    f = ft.ConductivitySpec("sinusoidal", (base, amp, L / amp), L=L, c1=c1, c2=c2)
    h = ft.SourceSpec(h_kind, h_params, T)
    probe = ft.ThermistorProblem(ft.FractionalOrder(alpha), 1.0, T, f, h)
    if lam is None:
        N = ft.choose_norm_weight(probe)
        lam = threshold_fraction * ft.lambda_threshold(probe, N)
    return replace(probe, lam=lam)


def oscillating_problem(lam=1.0, T=1.0, alpha=0.25):
    """Coupling far beyond the certified threshold with a rapidly oscillating
    conductivity; Picard genuinely fails to settle."""
    c1, c2, L = 0.2, 2.0, 400.0
    base, amp = 0.5 * (c1 + c2), 0.5 * (c2 - c1)
    f = ft.ConductivitySpec("sinusoidal", (base, amp, L / amp), L=L, c1=c1, c2=c2)
    h = ft.SourceSpec("zero", (), T)
    return ft.ThermistorProblem(ft.FractionalOrder(alpha), lam, T, f, h)
