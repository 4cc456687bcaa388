import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from berrylab import fields
from berrylab.fields import FieldSpec, UserField, eval_drive, eval_field
from berrylab.model import TwoLevelParams

X = TwoLevelParams.from_gap(1.0, (1.0, 0.0, 0.0))


def test_monochromatic_plus_at_origin():
    spec = FieldSpec("monochromatic_plus", (1, 0, 0), 1.0, 0.0)
    assert np.array_equal(eval_field(spec, 0.0), np.array([1, 0, 0], dtype=complex))


def test_superposition_zero_of_cosine():
    spec = FieldSpec("superposition", (1, 0, 0), 1.0, 0.0)
    assert np.allclose(eval_field(spec, np.pi / 2), 0, atol=1e-15)


def test_monochromatic_minus_half_period():
    spec = FieldSpec("monochromatic_minus", (1, 0, 0), 1.0, 0.0)
    assert np.allclose(eval_field(spec, np.pi), [-1, 0, 0], atol=1e-15)


def test_positive_frequency_drive_and_derivative():
    spec = FieldSpec("monochromatic_plus", (0.5, 0, 0), 0.01, 0.0)
    s = eval_drive(spec, X, 0.0)
    assert s.value == 0.5
    assert s.derivative == pytest.approx(-0.005j, abs=1e-18)
    assert s.phase == 0.0 and s.phase_defined


def test_real_cosine_zero_crossing_has_undefined_phase():
    spec = FieldSpec("real_cosine", (1, 0, 0), 1.0, 0.0)
    s = eval_drive(spec, X, np.pi / 2)
    assert abs(s.value) < 1e-15
    assert not s.phase_defined
    assert np.isnan(s.phase)


def test_phase_defined_array_flags():
    spec = FieldSpec("real_cosine", (1, 0, 0), 1.0, 0.0)
    s = eval_drive(spec, X, np.array([0.0, np.pi / 2, np.pi]))
    assert s.phase_defined.tolist() == [True, False, True]
    assert s.phase[2] == pytest.approx(np.pi)


def test_single_fourier_term_reduces_to_monochromatic():
    c = np.array([0.3 - 0.2j, 0.1, 0.0])
    spec = FieldSpec("fourier", omega=0.7, fourier_terms=((1, c),))
    t = np.linspace(0, 20, 37)
    d = eval_drive(spec, X, t).value
    assert np.allclose(d, c[0] * np.exp(-1j * 0.7 * t), atol=1e-15)


def test_fourier_terms_normalized_and_merged():
    spec = FieldSpec("fourier", omega=1.0, fourier_terms=((2, (1, 0, 0)), (-1, (0, 1, 0)), (2, (1, 0, 0))))
    assert [n for n, _ in spec.fourier_terms] == [-1, 2]
    assert spec.fourier_terms[1][1] == (2, 0, 0)


def test_real_fourier_detected_and_exactly_real():
    spec = fields.real_fourier([(1, (0.3 + 0.4j, 1, 0)), (3, (0.1j, 0, 0.2)), (0, (0.5, 0, 0))], omega=1.3)
    assert spec.is_real
    d = eval_drive(spec, X, np.linspace(0, 10, 101))
    assert np.all(d.value.imag == 0)
    assert np.all(d.derivative.imag == 0)


def test_complex_fourier_not_real():
    assert not FieldSpec("fourier", omega=1.0, fourier_terms=((1, (1, 0, 0)),)).is_real
    assert not FieldSpec("fourier", omega=1.0, fourier_terms=((1, (1j, 0, 0)), (-1, (1j, 0, 0)))).is_real


@pytest.mark.parametrize(
    "kwargs",
    [
        {"kind": "sawtooth"},
        {"kind": "real_cosine", "omega": 0.0},
        {"kind": "real_cosine", "amplitude": (1, 2)},
        {"kind": "fourier"},
        {"kind": "fourier", "fourier_terms": ((0.5, (1, 0, 0)),)},
        {"kind": "real_cosine", "fourier_terms": ((1, (1, 0, 0)),)},
    ],
)
def test_invalid_specs_rejected(kwargs):
    with pytest.raises(ValueError):
        FieldSpec(**kwargs)


def test_omega_times_period_is_two_pi():
    spec = FieldSpec("real_cosine", (1, 0, 0), 0.37)
    assert spec.omega * spec.period == pytest.approx(2 * np.pi, rel=1e-15)


def test_adiabaticity_round_trip():
    params = TwoLevelParams.from_gap(2.5)
    spec = FieldSpec("monochromatic_plus", (1, 0, 0), fields.omega_for_adiabaticity(params, 400))
    assert fields.adiabaticity(spec, params) == pytest.approx(400, rel=1e-14)


# --- properties over random specs -------------------------------------------------

vec = st.lists(st.floats(-2, 2), min_size=3, max_size=3)
cvec = st.tuples(vec, vec).map(lambda p: tuple(complex(a, b) for a, b in zip(*p)))


@st.composite
def specs(draw):
    kind = draw(st.sampled_from(fields.KINDS))
    omega = draw(st.floats(0.05, 5))
    phi0 = draw(st.floats(-np.pi, np.pi))
    if kind == "fourier":
        ns = draw(st.lists(st.integers(-5, 5), min_size=1, max_size=5, unique=True))
        terms = tuple((n, draw(cvec)) for n in ns)
        return FieldSpec(kind, omega=omega, phi0=phi0, fourier_terms=terms)
    return FieldSpec(kind, tuple(draw(vec)), omega, phi0)


dipoles = st.lists(st.floats(-1, 1), min_size=3, max_size=3).filter(lambda v: np.linalg.norm(v) > 1e-3)


@settings(max_examples=60, deadline=None)
@given(specs(), dipoles, st.floats(0, 50))
def test_drive_is_periodic(spec, d12, t_over_period):
    params = TwoLevelParams.from_gap(1.0, d12)
    t = t_over_period * spec.period
    a = eval_drive(spec, params, t).value
    b = eval_drive(spec, params, t + spec.period).value
    assert abs(a - b) < 1e-12


@settings(max_examples=30, deadline=None)
@given(specs(), dipoles, st.integers(0, 2**32 - 1))
def test_analytic_derivative_matches_central_difference(spec, d12, seed):
    params = TwoLevelParams.from_gap(1.0, d12)
    t = np.random.default_rng(seed).uniform(0, spec.period, 100)
    h = spec.period * 1e-6
    exact = eval_drive(spec, params, t).derivative
    fd = (eval_drive(spec, params, t + h).value - eval_drive(spec, params, t - h).value) / (2 * h)
    # relative to the derivative's scale over the sample, so isolated zeros of dD/dt are harmless
    scale = np.max(np.abs(exact))
    if scale == 0:
        assert np.max(np.abs(fd)) < 1e-9
    else:
        assert np.max(np.abs(fd - exact)) / scale < 1e-6


@settings(max_examples=40, deadline=None)
@given(vec, st.floats(0.05, 5), st.floats(-np.pi, np.pi), st.floats(-100, 100), dipoles)
def test_superposition_drive_exactly_real(amp, omega, phi0, t, d12):
    spec = FieldSpec("superposition", tuple(amp), omega, phi0)
    s = eval_drive(spec, TwoLevelParams.from_gap(1.0, d12), t)
    assert s.value.imag == 0.0
    assert s.modulus ** 2 == pytest.approx(s.value.real ** 2 + s.value.imag ** 2, rel=1e-15, abs=1e-300)


@settings(max_examples=40, deadline=None)
@given(specs(), st.floats(0, 1))
def test_drive_sample_polar_form(spec, frac):
    s = eval_drive(spec, X, frac * spec.period)
    if s.modulus > 0:
        assert s.modulus * np.exp(1j * s.phase) == pytest.approx(s.value, abs=1e-12)


def test_user_field_uses_central_differences():
    ref = FieldSpec("monochromatic_minus", (0.4, 0.1, 0), 0.8, 0.2)
    user = UserField(lambda t: eval_field(ref, t), ref.period)
    t = np.linspace(0, ref.period, 9)
    a, b = eval_drive(ref, X, t), eval_drive(user, X, t)
    assert np.allclose(a.value, b.value, atol=1e-15)
    assert np.allclose(a.derivative, b.derivative, rtol=1e-6, atol=1e-9)
