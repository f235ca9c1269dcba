import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import quad

from fractherm import (
    FractionalOrder,
    GridFunction,
    build_weights,
    fractional_integral,
    gamma,
    make_mesh,
    rl_derivative,
)

# beta-identity constants, frozen from a 50-digit evaluation
INV_GAMMA_1_5 = 1.1283791670955125739  # 1/Gamma(1.5)
INV_GAMMA_2_5 = 0.75225277806367504926  # 1/Gamma(2.5)
FRAC_HALF_SIN_AT_1 = 0.66968425957766356696  # order-0.5 integral of sin at t=1
FRAC_03_SIN_AT_1 = 0.74903216991750981075  # order-0.3 integral of sin at t=1


def quad_oracle(fn, t, mu):
    """Adaptive quadrature of the singular convolution, independent of the
    product-integration path."""
    val, _ = quad(fn, 0.0, t, weight="alg", wvar=(0.0, mu - 1.0))
    return val / gamma(mu)


# ---------------------------------------------------------------- orders


def test_fractional_order_fields():
    o = FractionalOrder(0.3)
    assert o.alpha == 0.3
    assert o.two_alpha == 0.6


@pytest.mark.parametrize("bad", [0.0, 0.5, 0.75, -0.1, 1.0])
def test_fractional_order_rejects_out_of_range(bad):
    with pytest.raises(ValueError):
        FractionalOrder(bad)


# ---------------------------------------------------------------- weights


def test_order_one_gives_trapezoid_weights():
    m = make_mesh(1.0, 5)
    w = build_weights(m, 1.0).weights
    h = 0.2
    expected = np.array([h / 2, h, h, h, h, h / 2])
    assert w[5] == pytest.approx(expected, rel=1e-12)


def test_row_zero_is_empty():
    w = build_weights(make_mesh(1.0, 6, 2.0), 0.4).weights
    assert np.all(w[0] == 0.0)


def test_row_sum_half_order_frozen():
    # order 0.5, uniform n=2, T=1: total mass at t=1 is 1/Gamma(1.5)
    w = build_weights(make_mesh(1.0, 2), 0.5).weights
    assert w[2].sum() == pytest.approx(INV_GAMMA_1_5, rel=1e-12)


@pytest.mark.parametrize("bad", [0.0, -0.2, 1.5])
def test_build_weights_rejects_bad_order(bad):
    with pytest.raises(ValueError):
        build_weights(make_mesh(1.0, 4), bad)


@settings(max_examples=40, deadline=None)
@given(
    st.integers(min_value=1, max_value=80),
    st.floats(min_value=1.0, max_value=4.0),
    st.floats(min_value=0.05, max_value=1.0),
    st.floats(min_value=0.1, max_value=5.0),
)
def test_weight_invariants(n, grading, order, T):
    m = make_mesh(T, n, grading)
    w = build_weights(m, order).weights
    assert np.all(w >= 0.0)
    assert np.all(np.triu(w, 1) == 0.0)
    sums = w.sum(axis=1)[1:]
    exact = m.nodes[1:] ** order / gamma(order + 1.0)
    assert np.max(np.abs(sums - exact) / exact) <= 1e-12


# ------------------------------------------------------- integral values


def test_integral_of_zero_is_zero():
    m = make_mesh(1.0, 16)
    w = build_weights(m, 0.35)
    out = fractional_integral(GridFunction.zeros(m), w)
    assert np.all(out.values == 0.0)


@pytest.mark.parametrize("grading", [1.0, 2.0])
@pytest.mark.parametrize("order", [0.1, 0.5, 0.9])
def test_constant_exactness(order, grading):
    c = 2.7
    m = make_mesh(1.5, 200, grading)
    w = build_weights(m, order)
    out = fractional_integral(GridFunction.sample(m, lambda t: np.full_like(t, c)), w)
    exact = c * m.nodes**order / gamma(order + 1.0)
    assert np.max(np.abs(out.values - exact)) <= 1e-10 * abs(c)


@pytest.mark.parametrize("grading", [1.0, 2.0])
def test_linear_exactness(grading):
    a, b = 0.3, 1.7
    m = make_mesh(1.0, 128, grading)
    w = build_weights(m, 0.5)
    out = fractional_integral(GridFunction.sample(m, lambda t: a + b * t), w)
    exact = a * m.nodes**0.5 / gamma(1.5) + b * m.nodes**1.5 / gamma(2.5)
    assert np.max(np.abs(out.values[1:] - exact[1:]) / exact[1:]) <= 1e-10


def test_linear_beta_identity_frozen():
    # g(s) = s, order 0.5, value at t=1 equals 1/Gamma(2.5); the rule is
    # exact for linear integrands so any n already hits the target
    for n in (4, 64):
        m = make_mesh(1.0, n)
        out = fractional_integral(
            GridFunction.sample(m, lambda t: t), build_weights(m, 0.5)
        )
        assert out.values[-1] == pytest.approx(INV_GAMMA_2_5, rel=1e-12)


def test_sin_against_adaptive_quadrature_oracle():
    for mu, frozen in ((0.5, FRAC_HALF_SIN_AT_1), (0.3, FRAC_03_SIN_AT_1)):
        oracle = quad_oracle(np.sin, 1.0, mu)
        assert oracle == pytest.approx(frozen, rel=1e-10)
        errs = []
        for n in (64, 128, 256):
            m = make_mesh(1.0, n)
            out = fractional_integral(
                GridFunction.sample(m, np.sin), build_weights(m, mu)
            )
            errs.append(abs(out.values[-1] - oracle))
        orders = [math.log2(e0 / e1) for e0, e1 in zip(errs, errs[1:])]
        assert errs[-1] < 1e-5
        assert min(orders) >= 1.8


def test_mesh_mismatch_rejected():
    w = build_weights(make_mesh(1.0, 8), 0.5)
    g = GridFunction.zeros(make_mesh(1.0, 16))
    with pytest.raises(ValueError):
        fractional_integral(g, w)


@settings(max_examples=25, deadline=None)
@given(
    st.integers(min_value=1, max_value=60),
    st.floats(min_value=0.05, max_value=1.0),
    st.integers(min_value=0, max_value=2**32 - 1),
)
def test_zero_at_origin_and_monotonicity(n, order, seed):
    m = make_mesh(1.0, n)
    w = build_weights(m, order)
    vals = np.random.default_rng(seed).uniform(0.0, 5.0, n + 1)
    out = fractional_integral(GridFunction(m, vals), w)
    assert out.values[0] == 0.0
    assert np.all(out.values >= 0.0)


def test_linearity():
    m = make_mesh(1.0, 32)
    w = build_weights(m, 0.4)
    rng = np.random.default_rng(7)
    a = GridFunction(m, rng.standard_normal(33))
    b = GridFunction(m, rng.standard_normal(33))
    lhs = fractional_integral(GridFunction(m, 2.0 * a.values - 3.0 * b.values), w)
    rhs = 2.0 * fractional_integral(a, w).values - 3.0 * fractional_integral(b, w).values
    assert lhs.values == pytest.approx(rhs, abs=1e-14)


@pytest.mark.parametrize("p,q", [(0.3, 0.4), (0.25, 0.25), (0.5, 0.5)])
def test_semigroup_deviation_shrinks_at_second_order(p, q):
    devs = []
    for n in (256, 512, 1024):
        m = make_mesh(1.0, n)
        g = GridFunction.sample(m, lambda t: t**2)
        inner = fractional_integral(g, build_weights(m, q))
        twice = fractional_integral(inner, build_weights(m, p))
        once = fractional_integral(g, build_weights(m, p + q))
        devs.append(float(np.max(np.abs(twice.values - once.values))))
    orders = [math.log2(d0 / d1) for d0, d1 in zip(devs, devs[1:])]
    assert min(orders) >= 1.8


def test_quadratic_convergence_order_at_endpoint():
    exact = gamma(3.0) / gamma(3.5)  # order-0.5 integral of s^2 at t=1
    errs = []
    for n in (512, 1024, 2048):
        m = make_mesh(1.0, n)
        out = fractional_integral(
            GridFunction.sample(m, lambda t: t**2), build_weights(m, 0.5)
        )
        errs.append(abs(out.values[-1] - exact))
    orders = [math.log2(e0 / e1) for e0, e1 in zip(errs, errs[1:])]
    assert min(orders) >= 1.8


# ------------------------------------------------------------ derivative


def test_derivative_of_zero():
    m = make_mesh(1.0, 16)
    w1m = build_weights(m, 0.6)
    out = rl_derivative(GridFunction.zeros(m), 0.4, w1m)
    assert np.all(out.values == 0.0)


@pytest.mark.parametrize("a", [0.2, 0.5, 0.8])
def test_derivative_inverts_integral(a):
    # D^a I^a phi = phi for smooth phi with phi(0) = 0, up to first-order
    # discretisation error away from the origin
    errs = []
    for n in (256, 512):
        m = make_mesh(1.0, n)
        phi = GridFunction.sample(m, lambda t: t**2)
        ia = fractional_integral(phi, build_weights(m, a))
        back = rl_derivative(ia, a, build_weights(m, 1.0 - a))
        sel = m.nodes >= 0.25
        errs.append(float(np.max(np.abs(back.values[sel] - m.nodes[sel] ** 2))))
    assert errs[0] <= 5e-3
    assert errs[1] <= 0.7 * errs[0]


@pytest.mark.parametrize("alpha", [0.1, 0.25, 0.45])
def test_derivative_power_rule(alpha):
    # beta identity: the order-2a derivative of t**(2a)/Gamma(2a+1) is 1
    two_a = 2.0 * alpha
    errs = []
    for n in (512, 1024):
        m = make_mesh(1.0, n)
        g = GridFunction.sample(m, lambda t: t**two_a / gamma(two_a + 1.0))
        out = rl_derivative(g, two_a, build_weights(m, 1.0 - two_a))
        sel = m.nodes >= 0.25
        errs.append(float(np.max(np.abs(out.values[sel] - 1.0))))
    assert errs[0] <= 1e-3
    assert errs[1] <= 0.7 * errs[0]


def test_derivative_rejects_bad_order():
    m = make_mesh(1.0, 8)
    w = build_weights(m, 0.5)
    g = GridFunction.zeros(m)
    with pytest.raises(ValueError):
        rl_derivative(g, 1.0, w)
    with pytest.raises(ValueError):
        rl_derivative(g, 0.0, w)
    with pytest.raises(ValueError):
        rl_derivative(g, 0.4, w)  # table order 0.5 != 1 - 0.4
