import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from berrylab.model import TwoLevelParams, build_hamiltonian, drive_value

finite = st.floats(-50, 50, allow_nan=False)


def test_decoupled_levels():
    h = build_hamiltonian(TwoLevelParams.from_gap(2.0), 0)
    assert np.array_equal(h, np.diag([-1.0, 1.0]).astype(complex))


def test_real_coupling_substitution():
    h = build_hamiltonian(TwoLevelParams.from_gap(1.0), 0.5)
    assert np.array_equal(h, np.array([[-0.5, 0.5], [0.5, 0.5]], dtype=complex))


def test_complex_coupling_is_conjugated_above_diagonal():
    h = build_hamiltonian(TwoLevelParams.from_gap(1.0), 0.3 + 0.4j)
    assert h[0, 1] == 0.3 - 0.4j
    assert h[1, 0] == 0.3 + 0.4j


def test_shift_depends_only_on_gap():
    a = build_hamiltonian(TwoLevelParams(3.0, 5.0), 0.2j)
    b = build_hamiltonian(TwoLevelParams(-1.0, 1.0), 0.2j)
    assert np.array_equal(a, b)


@given(finite, finite, st.floats(1e-3, 20))
def test_hamiltonian_hermitian_and_traceless(re, im, gap):
    h = build_hamiltonian(TwoLevelParams.from_gap(gap), complex(re, im))
    assert np.array_equal(h, h.conj().T)
    assert h.trace() == 0
    assert h[0, 0] == -gap / 2 and h[1, 1] == gap / 2


@pytest.mark.parametrize(
    "d12, field, expected",
    [
        ((1, 0, 0), (0.5, 9, 9), 0.5),
        ((1, 0, 0), (0.5 * np.exp(-1j * 0.0), 0, 0), 0.5),
        ((0, 0, 1), (0.7, -1.3j, 0), 0.0),
    ],
)
def test_drive_value_projection(d12, field, expected):
    assert drive_value(TwoLevelParams.from_gap(1.0, d12), np.array(field, dtype=complex)) == expected


@given(finite, finite, finite, finite)
def test_fields_with_same_dipole_component_give_same_hamiltonian(ex, ey1, ey2, ez):
    params = TwoLevelParams.from_gap(1.0, (1.0, 0.0, 0.0))
    e1 = np.array([ex + 0.5j, ey1, ez * 1j])
    e2 = np.array([ex + 0.5j, ey2 * 1j, -ez])
    h1 = build_hamiltonian(params, drive_value(params, e1))
    h2 = build_hamiltonian(params, drive_value(params, e2))
    assert np.array_equal(h1, h2)


def test_drive_value_broadcasts_over_samples():
    params = TwoLevelParams.from_gap(1.0, (0.0, 2.0, 0.0))
    e = np.array([[1, 1, 1], [0, 1j, 0]], dtype=complex)
    assert np.array_equal(drive_value(params, e), np.array([2, 2j]))


@pytest.mark.parametrize("e1, e2", [(1.0, 1.0), (2.0, 1.0), (0.0, float("nan"))])
def test_degenerate_or_invalid_levels_rejected(e1, e2):
    with pytest.raises(ValueError):
        TwoLevelParams(e1, e2)


def test_complex_dipole_rejected():
    with pytest.raises(ValueError, match="real"):
        TwoLevelParams(0.0, 1.0, (1j, 0, 0))


def test_delta_epsilon():
    p = TwoLevelParams(-0.25, 1.5, (0, 1, 0))
    assert p.delta_epsilon() == 1.75
    assert p.d12 == (0.0, 1.0, 0.0)
