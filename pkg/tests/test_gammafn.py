import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from fractherm import gamma

# 1.5 * 0.5 * sqrt(pi), cross-checked against the series oracle below
GAMMA_2_5 = 1.3293403881791370205


def test_gamma_at_one():
    assert gamma(1.0) == pytest.approx(1.0, rel=1e-13)


def test_gamma_at_half():
    assert gamma(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-13)


def test_gamma_at_2p5_frozen():
    assert gamma(2.5) == pytest.approx(GAMMA_2_5, rel=1e-13)


def test_gamma_at_2p5_series_oracle():
    mpmath.mp.dps = 30
    assert gamma(2.5) == pytest.approx(float(mpmath.gamma("2.5")), rel=1e-13)


def test_gamma_relative_error_on_contract_range():
    mpmath.mp.dps = 30
    xs = np.concatenate(
        [np.geomspace(1e-3, 0.5, 150), np.linspace(0.5, 20.0, 450)]
    )
    for x in xs:
        ref = float(mpmath.gamma(mpmath.mpf(float(x))))
        assert abs(gamma(float(x)) - ref) <= 1e-12 * abs(ref), f"x={x}"


@pytest.mark.parametrize("bad", [0.0, -1.0, -0.5, math.nan])
def test_gamma_rejects_nonpositive(bad):
    with pytest.raises(ValueError):
        gamma(bad)


@given(st.floats(min_value=0.01, max_value=19.0))
def test_gamma_recurrence(x):
    assert gamma(x + 1.0) == pytest.approx(x * gamma(x), rel=1e-11)
