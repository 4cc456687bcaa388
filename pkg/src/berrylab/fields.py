"""Periodic classical electric fields and the scalar drive they induce.

Every built-in field kind is evaluated together with its exact time
derivative. Monochromatic components carry the time dependence
``exp(-i n (omega t + phi0))``, so harmonic ``n = 1`` is the positive-frequency
field and ``n = -1`` the negative-frequency one.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .model import TwoLevelParams

KINDS = ("monochromatic_plus", "monochromatic_minus", "real_cosine", "superposition", "fourier")


def _as_vec3(x, what, dtype=float):
    arr = np.asarray(x, dtype=dtype)
    if arr.shape != (3,):
        raise ValueError(f"{what} must be a 3-vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{what} must be finite")
    return arr


@dataclass(frozen=True)
class FieldSpec:
    """A periodic electric field ``E(t)`` with period ``2 pi / omega``.

    ``fourier_terms`` is only read for ``kind="fourier"``: a sequence of
    ``(n, c)`` pairs meaning ``sum_n c * exp(-i n (omega t + phi0))``.
    A Fourier field whose terms are exactly conjugate-symmetric
    (``c_{-n} = conj(c_n)``) is real, and is evaluated as such so that its
    imaginary part is exactly zero.
    """

    kind: str
    amplitude: tuple = (0.0, 0.0, 0.0)
    omega: float = 1.0
    phi0: float = 0.0
    fourier_terms: tuple = ()
    is_real: bool = field(init=False, default=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown field kind {self.kind!r}; expected one of {KINDS}")
        omega = float(self.omega)
        if not (np.isfinite(omega) and omega > 0):
            raise ValueError(f"omega must be finite and > 0, got {self.omega}")
        phi0 = float(self.phi0)
        if not np.isfinite(phi0):
            raise ValueError("phi0 must be finite")
        amp = _as_vec3(self.amplitude, "amplitude")
        object.__setattr__(self, "omega", omega)
        object.__setattr__(self, "phi0", phi0)
        object.__setattr__(self, "amplitude", tuple(float(a) for a in amp))

        terms = {}
        if self.kind == "fourier":
            if len(self.fourier_terms) == 0:
                raise ValueError("fourier field needs at least one term")
            for n, c in self.fourier_terms:
                if int(n) != n:
                    raise ValueError(f"harmonic index must be an integer, got {n}")
                c = _as_vec3(c, f"coefficient of harmonic {n}", complex)
                terms[int(n)] = terms.get(int(n), np.zeros(3, complex)) + c
        elif self.fourier_terms:
            raise ValueError(f"fourier_terms given for kind {self.kind!r}")
        normalized = tuple((n, tuple(complex(x) for x in terms[n])) for n in sorted(terms))
        object.__setattr__(self, "fourier_terms", normalized)
        object.__setattr__(self, "is_real", self._detect_real(terms))

    def _detect_real(self, terms):
        if self.kind in ("real_cosine", "superposition"):
            return True
        if self.kind != "fourier":
            return False
        for n, c in terms.items():
            partner = terms.get(-n)
            if partner is None or np.any(partner != np.conj(c)):
                return False
        return True

    @property
    def period(self) -> float:
        return 2.0 * np.pi / self.omega

    def with_omega(self, omega) -> "FieldSpec":
        return FieldSpec(self.kind, self.amplitude, omega, self.phi0, self.fourier_terms)


def monochromatic(amplitude, omega, phi0=0.0, sign=+1) -> FieldSpec:
    """``E0 exp(-/+ i (omega t + phi0))`` for ``sign = +1 / -1``."""
    kind = "monochromatic_plus" if sign > 0 else "monochromatic_minus"
    return FieldSpec(kind, amplitude, omega, phi0)


def real_fourier(terms, omega, phi0=0.0) -> FieldSpec:
    """Real field ``sum_n [c_n e^{-i n x} + conj(c_n) e^{+i n x}]`` over ``n >= 1``.

    A single real vector at ``n = 0`` adds a static component.
    """
    full = []
    for n, c in terms:
        c = np.asarray(c, dtype=complex)
        if n == 0:
            if np.any(c.imag != 0):
                raise ValueError("static component of a real field must be real")
            full.append((0, c))
        else:
            full.append((n, c))
            full.append((-n, np.conj(c)))
    return FieldSpec("fourier", omega=omega, phi0=phi0, fourier_terms=tuple(full))


def omega_for_adiabaticity(params: TwoLevelParams, rho) -> float:
    """Drive frequency giving the adiabaticity ratio ``rho = T * delta / (2 pi)``."""
    return params.delta_epsilon() / float(rho)


def adiabaticity(spec, params: TwoLevelParams) -> float:
    return spec.period * params.delta_epsilon() / (2.0 * np.pi)


@dataclass(frozen=True)
class UserField:
    """A user-supplied periodic field given as a callable ``t -> E(t)``.

    The callable must accept scalar times and return a 3-vector. Its
    derivative is taken by central differences with step ``period * 1e-6``.
    """

    func: Callable
    period: float

    @property
    def omega(self) -> float:
        return 2.0 * np.pi / self.period

    @property
    def is_real(self) -> bool:
        return False


def _field_and_derivative(spec, t):
    """E(t) and dE/dt, shaped ``t.shape + (3,)``."""
    t = np.asarray(t, dtype=float)
    if isinstance(spec, UserField):
        h = spec.period * 1e-6
        flat = t.reshape(-1)
        e = np.array([np.asarray(spec.func(s), dtype=complex) for s in flat]).reshape(t.shape + (3,))
        ep = np.array([np.asarray(spec.func(s + h), dtype=complex) for s in flat])
        em = np.array([np.asarray(spec.func(s - h), dtype=complex) for s in flat])
        return e, ((ep - em) / (2 * h)).reshape(t.shape + (3,))

    w = spec.omega
    x = w * t + spec.phi0
    amp = np.array(spec.amplitude)
    if spec.kind in ("monochromatic_plus", "monochromatic_minus"):
        s = 1.0 if spec.kind == "monochromatic_plus" else -1.0
        phase = np.exp(-1j * s * x)[..., None]
        e = amp * phase
        return e, (-1j * s * w) * e
    if spec.kind == "real_cosine":
        e = (amp * np.cos(x)[..., None]).astype(complex)
        de = (-w * amp * np.sin(x)[..., None]).astype(complex)
        return e, de
    if spec.kind == "superposition":
        e = (2.0 * amp * np.cos(x)[..., None]).astype(complex)
        de = (-2.0 * w * amp * np.sin(x)[..., None]).astype(complex)
        return e, de

    e = np.zeros(t.shape + (3,), dtype=complex)
    de = np.zeros_like(e)
    for n, c in spec.fourier_terms:
        c = np.array(c)
        term = c * np.exp(-1j * n * x)[..., None]
        e += term
        de += (-1j * n * w) * term
    if spec.is_real:
        e = e.real.astype(complex)
        de = de.real.astype(complex)
    return e, de


def eval_field(spec, t):
    """Complex field vector ``E(t)``; ``t`` may be a scalar or an array."""
    return _field_and_derivative(spec, t)[0]


@dataclass(frozen=True)
class DriveSample:
    """``D(t) = d12 . E(t)`` with its derivative, modulus and phase.

    Fields are scalars or arrays, matching the shape of the requested times.
    ``phase`` is NaN wherever the modulus is zero to within rounding of the
    drive's amplitude scale (see ``phase_defined``).
    """

    value: complex
    derivative: complex
    modulus: float
    phase: float

    @property
    def phase_defined(self):
        return ~np.isnan(self.phase) if np.ndim(self.phase) else not np.isnan(self.phase)


def drive_scale(spec, params: TwoLevelParams) -> float:
    """Upper bound on ``|D(t)|`` for built-in kinds, 0 for user fields."""
    if isinstance(spec, UserField):
        return 0.0
    if spec.kind == "fourier":
        return float(sum(abs(np.dot(params.dipole, c)) for _, c in spec.fourier_terms))
    factor = 2.0 if spec.kind == "superposition" else 1.0
    return factor * abs(float(np.dot(params.dipole, spec.amplitude)))


# moduli below this multiple of the drive scale are rounding noise
PHASE_NOISE = 8 * np.finfo(float).eps


def eval_drive(spec, params: TwoLevelParams, t) -> DriveSample:
    e, de = _field_and_derivative(spec, t)
    d = e @ params.dipole
    dd = de @ params.dipole
    mod = np.abs(d)
    defined = mod > PHASE_NOISE * drive_scale(spec, params)
    phase = np.where(defined, np.arctan2(d.imag, d.real), np.nan)
    if np.ndim(d) == 0:
        return DriveSample(complex(d), complex(dd), float(mod), float(phase))
    return DriveSample(d, dd, mod, phase)
