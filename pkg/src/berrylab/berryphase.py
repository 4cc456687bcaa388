"""Berry phase of the instantaneous eigenstates over one drive period.

Sign convention: the phase of branch ``l`` is ``gamma_l = -i \\oint <W_l|dW_l>``,
with the loop traversed in the direction of increasing time. In the gauge of
:mod:`berrylab.eigensystem` the real part of ``<W_l|dW_l>`` is an exact
differential and drops out, leaving

    gamma_l = 1/2 \\int_0^T Im(conj(D) dD/dt) / F_l dt,

which equals ``1/2 \\int |D|^2 dphi/dt / F_l dt`` wherever the drive phase is
defined and stays smooth through zero crossings of ``D``. The branch only
enters through ``F_l``.

Two routes are provided: the quadrature above, reported unreduced, and a
discrete Wilson loop, ``arg prod_k <W(t_k)|W(t_{k+1})>``, which is gauge
invariant and reported as a principal value in ``(-pi, pi]``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import simpson

from . import fields
from .eigensystem import _check_branch, amplitudes, eigenvectors
from .errors import NonFiniteIntegrand, ZeroOverlap
from .model import TwoLevelParams

MIN_OVERLAP = 1e-8


def principal(phase):
    """Reduce an angle to ``(-pi, pi]``."""
    x = np.mod(np.asarray(phase, dtype=float) + np.pi, 2 * np.pi) - np.pi
    x = np.where(x == -np.pi, np.pi, x)
    return float(x) if np.ndim(x) == 0 else x


def phase_distance(a, b):
    """Absolute difference of two phases modulo 2 pi."""
    return abs(principal(a - b))


@dataclass(frozen=True)
class BerryPhaseResult:
    branch: int
    gamma: float
    method: str
    samples: int
    error_estimate: float

    @property
    def reduced(self) -> float:
        return principal(self.gamma)


@dataclass(frozen=True)
class ConnectionSample:
    """Berry-connection densities (per unit time) at a single instant.

    ``gradient_part`` is ``Re <W|dW/dt>``, the total time derivative of
    ``A_l/2 + |D|^2/(4 F_l)``; ``geometric_part`` is ``Im(conj(D) dD/dt)/F_l``,
    twice the rate at which the phase accumulates.
    """

    gradient_part: float
    geometric_part: float
    u_part: float = 0.0


def geometric_density(params: TwoLevelParams, d, dd, l):
    """``Im(conj(D) dD/dt) / F_l``, vectorized, with the limit 0 at ``D = 0``."""
    d = np.asarray(d, dtype=complex)
    numer = (np.conj(d) * np.asarray(dd, dtype=complex)).imag
    _, F = amplitudes(params, d, l)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(F > 0, numer / np.where(F > 0, F, 1.0), 0.0)
    # F underflows only together with D; a non-vanishing numerator there is not finite
    bad = ~(F > 0) & (numer != 0)
    if np.any(bad) or not np.all(np.isfinite(out)):
        raise NonFiniteIntegrand("geometric integrand is not finite; check the field for non-finite values")
    return out


def _simpson_gamma(spec, params, l, n):
    t = np.linspace(0.0, spec.period, n + 1)
    drive = fields.eval_drive(spec, params, t)
    g = geometric_density(params, drive.value, drive.derivative, l)
    return 0.5 * float(simpson(g, x=t))


def berry_phase_analytic(spec, params: TwoLevelParams, l, N=1024) -> BerryPhaseResult:
    """Berry phase from composite Simpson quadrature on ``N`` uniform panels.

    The error estimate is the change on refining to ``2N`` panels.
    """
    _check_branch(l)
    if N < 16 or N % 2:
        raise ValueError(f"analytic quadrature needs an even panel count >= 16, got {N}")
    coarse = _simpson_gamma(spec, params, l, N)
    fine = _simpson_gamma(spec, params, l, 2 * N)
    return BerryPhaseResult(l, coarse, "analytic_quadrature", N, abs(fine - coarse))


def wilson_loop_phase(states) -> float:
    """Gauge-invariant phase of a closed loop of sampled states.

    ``states`` has shape ``(N, dim)``; the loop closes from the last row back
    to the first. Returns ``arg prod_k <psi_k|psi_{k+1}>`` in ``(-pi, pi]``.
    """
    states = np.asarray(states, dtype=complex)
    nxt = np.roll(states, -1, axis=0)
    overlaps = np.einsum("ki,ki->k", states.conj(), nxt)
    worst = np.min(np.abs(overlaps))
    if worst < MIN_OVERLAP:
        raise ZeroOverlap(f"consecutive overlap {worst:.3e} below {MIN_OVERLAP}; increase the sample count")
    # running product, renormalized to keep the modulus near one
    acc = 1.0 + 0.0j
    for z in overlaps:
        acc *= z
        acc /= abs(acc)
    return principal(np.angle(acc))


def _loop_states(spec, params, l, n):
    t = spec.period * np.arange(n) / n
    drive = fields.eval_drive(spec, params, t)
    return eigenvectors(params, drive.value, l)


def berry_phase_wilson(spec, params: TwoLevelParams, l, N=4096) -> BerryPhaseResult:
    """Discrete Wilson-loop Berry phase from ``N`` equally spaced times.

    The error estimate is a Richardson-style comparison against the loop on
    every other sample, assuming the ``O(N^-2)`` convergence of the
    discretized loop.
    """
    _check_branch(l)
    if N < 64:
        raise ValueError(f"Wilson loop needs N >= 64 samples, got {N}")
    states = _loop_states(spec, params, l, N)
    gamma = wilson_loop_phase(states)
    coarse_states = states[::2] if N % 2 == 0 else _loop_states(spec, params, l, N // 2)
    coarse = wilson_loop_phase(coarse_states)
    return BerryPhaseResult(l, gamma, "wilson_loop", N, phase_distance(gamma, coarse) / 3.0)


def connection_decomposition(spec, params: TwoLevelParams, l, t) -> ConnectionSample:
    """Split the Berry connection at time ``t`` into exact and geometric parts.

    ``u_part`` is the contribution ``u du/dt`` of the first entry alone; it is
    the derivative of ``A_l/2`` and never contributes around a loop.
    """
    _check_branch(l)
    s = fields.eval_drive(spec, params, t)
    d, dd = s.value, s.derivative
    a = 0.5 * params.delta_epsilon()
    d2 = abs(d) ** 2
    d2_dot = 2.0 * (np.conj(d) * dd).real
    r = np.sqrt(a * a + d2)
    r_dot = 0.5 * d2_dot / r
    A, F = amplitudes(params, d, l)
    # d/dt [A_l / 2] with A_l = 1/2 - l a / (2 r)
    u_part = 0.25 * l * a * r_dot / r**2
    # d/dt [|D|^2 / (4 F_l)] with F_l = r^2 - l a r
    if F > 0:
        f_dot = r_dot * (2 * r - l * a)
        v_part = (d2_dot * F - d2 * f_dot) / (4.0 * F * F)
    else:
        v_part = 0.0
    geo = float(geometric_density(params, d, dd, l))
    return ConnectionSample(float(u_part + v_part), geo, float(u_part))
