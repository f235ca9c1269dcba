import numpy as np
import pytest
from hypothesis import given, strategies as st

from fractherm import GridFunction, make_mesh


def test_uniform_nodes():
    m = make_mesh(1.0, 4, 1.0)
    assert m.nodes.tolist() == [0.0, 0.25, 0.5, 0.75, 1.0]


def test_graded_nodes():
    m = make_mesh(2.0, 2, 2.0)
    assert m.nodes.tolist() == [0.0, 0.5, 2.0]


def test_single_interval():
    m = make_mesh(1.0, 1, 3.0)
    assert m.nodes.tolist() == [0.0, 1.0]


@pytest.mark.parametrize(
    "T,n,grading",
    [(0.0, 4, 1.0), (-1.0, 4, 1.0), (1.0, 0, 1.0), (1.0, -3, 1.0), (1.0, 4, 0.5)],
)
def test_make_mesh_rejects_bad_arguments(T, n, grading):
    with pytest.raises(ValueError):
        make_mesh(T, n, grading)


@given(
    st.floats(min_value=1e-3, max_value=1e3),
    st.integers(min_value=1, max_value=400),
    st.floats(min_value=1.0, max_value=5.0),
)
def test_mesh_invariants(T, n, grading):
    m = make_mesh(T, n, grading)
    assert m.nodes[0] == 0.0
    assert m.nodes[-1] == T
    assert np.all(np.diff(m.nodes) > 0)
    assert len(m.nodes) == n + 1


@given(
    st.floats(min_value=1e-3, max_value=1e3),
    st.integers(min_value=1, max_value=400),
)
def test_uniform_mesh_matches_arithmetic_nodes(T, n):
    m = make_mesh(T, n, 1.0)
    direct = np.arange(n + 1) * T / n
    # interior nodes reproduce j*T/n exactly; the forced endpoint may sit
    # one rounding step away from the arithmetic value
    assert np.all(m.nodes[:-1] == direct[:-1])
    assert abs(m.nodes[-1] - direct[-1]) <= np.spacing(T)


def test_mesh_value_equality():
    assert make_mesh(1.0, 8) == make_mesh(1.0, 8)
    assert make_mesh(1.0, 8) != make_mesh(1.0, 8, 2.0)
    assert make_mesh(1.0, 8) != make_mesh(1.0, 16)


def test_grid_function_validation():
    m = make_mesh(1.0, 4)
    with pytest.raises(ValueError):
        GridFunction(m, np.zeros(4))  # wrong length
    with pytest.raises(ValueError):
        GridFunction(m, [0.0, 1.0, np.inf, 0.0, 0.0])
    with pytest.raises(ValueError):
        GridFunction(m, [0.0, 1.0, np.nan, 0.0, 0.0])


def test_grid_function_zeros_and_sample():
    m = make_mesh(2.0, 4)
    assert np.all(GridFunction.zeros(m).values == 0.0)
    g = GridFunction.sample(m, lambda t: 2.0 * t)
    assert g.values.tolist() == (2.0 * m.nodes).tolist()


def test_grid_function_values_are_insulated():
    m = make_mesh(1.0, 4)
    src = np.ones(5)
    g = GridFunction(m, src)
    src[0] = 99.0
    assert g.values[0] == 1.0
    with pytest.raises(ValueError):
        g.values[0] = 5.0
