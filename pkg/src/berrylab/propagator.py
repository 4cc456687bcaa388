"""Direct integration of the Schroedinger equation over one drive period.

This is the physical reference for the geometric phase: start in an
instantaneous eigenstate, evolve with fixed-step RK4, strip off the dynamical
phase and read what is left from the overlap with the final eigenstate.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.integrate import simpson

from . import fields
from .berryphase import principal
from .eigensystem import _check_branch, eigenvectors, radius
from .errors import LowFidelityWarning, NormDrift
from .model import TwoLevelParams

NORM_TOLERANCE = 1e-6
MIN_FIDELITY = 0.99
MIN_ADIABATICITY = 10.0
N_CHECKPOINTS = 100


@dataclass(frozen=True)
class PropagationRun:
    """Outcome of one propagated period.

    The final state satisfies, up to non-adiabatic leakage,
    ``psi(T) = exp(i * (dynamical_phase - geometric_phase)) * W_l(T)``; the
    minus sign makes ``geometric_phase`` directly comparable with
    :func:`berrylab.berryphase.berry_phase_analytic`.
    """

    branch: int
    adiabaticity: float
    steps: int
    final_state: np.ndarray
    fidelity: float
    dynamical_phase: float
    geometric_phase: float
    norm_checkpoints: np.ndarray

    @property
    def max_norm_drift(self) -> float:
        return float(np.max(np.abs(self.norm_checkpoints - 1.0)))


def _hamiltonians(params, d):
    """Stack of 2x2 Hamiltonians for an array of drive values."""
    half = 0.5 * params.delta_epsilon()
    h = np.empty(d.shape + (2, 2), dtype=complex)
    h[..., 0, 0] = -half
    h[..., 1, 1] = half
    h[..., 0, 1] = np.conj(d)
    h[..., 1, 0] = d
    return h


def rk4_step_matrices(spec, params: TwoLevelParams, M):
    """One-step RK4 propagators for ``i dpsi/dt = H(t) psi`` on ``M`` steps of ``[0, T]``.

    The equation is linear, so each classical RK4 step is a fixed 2x2 matrix
    built from ``H`` at the start, midpoint and end of the step.
    """
    T = spec.period
    h = T / M
    t0 = h * np.arange(M)
    d_start = fields.eval_drive(spec, params, t0).value
    d_mid = fields.eval_drive(spec, params, t0 + 0.5 * h).value
    d_end = fields.eval_drive(spec, params, t0 + h).value
    a1 = -1j * _hamiltonians(params, d_start)
    a2 = -1j * _hamiltonians(params, d_mid)
    a4 = -1j * _hamiltonians(params, d_end)
    k2 = a2 + 0.5 * h * (a2 @ a1)
    k3 = a2 + 0.5 * h * (a2 @ k2)
    k4 = a4 + h * (a4 @ k3)
    return np.eye(2) + (h / 6.0) * (a1 + 2 * k2 + 2 * k3 + k4)


def _apply_steps(steps, psi, every):
    p0, p1 = complex(psi[0]), complex(psi[1])
    norms = []
    m00, m01 = steps[:, 0, 0].tolist(), steps[:, 0, 1].tolist()
    m10, m11 = steps[:, 1, 0].tolist(), steps[:, 1, 1].tolist()
    for k in range(len(m00)):
        p0, p1 = m00[k] * p0 + m01[k] * p1, m10[k] * p0 + m11[k] * p1
        if (k + 1) % every == 0:
            norms.append(math.hypot(abs(p0), abs(p1)))
    return np.array([p0, p1]), np.array(norms)


def propagate(spec, params: TwoLevelParams, l, M) -> PropagationRun:
    """Evolve ``W_l(0)`` over one period with ``M`` RK4 steps.

    Raises :class:`NormDrift` if the norm strays by more than 1e-6 and warns
    with :class:`LowFidelityWarning` when the final overlap with the
    instantaneous eigenstate drops below 0.99.
    """
    _check_branch(l)
    M = int(M)
    if M < 1000:
        raise ValueError(f"propagation needs at least 1000 steps, got {M}")
    rho = fields.adiabaticity(spec, params)
    if rho < MIN_ADIABATICITY:
        warnings.warn(f"adiabaticity ratio {rho:.3g} is small; the geometric phase will be unreliable",
                      LowFidelityWarning, stacklevel=2)

    T = spec.period
    psi0 = eigenvectors(params, fields.eval_drive(spec, params, np.array([0.0])).value, l)[0]
    steps = rk4_step_matrices(spec, params, M)
    every = max(1, M // N_CHECKPOINTS)
    psi, norms = _apply_steps(steps, psi0, every)
    drift = float(np.max(np.abs(norms - 1.0))) if len(norms) else 0.0
    if not drift <= NORM_TOLERANCE:  # also catches a diverged, non-finite norm
        raise NormDrift(f"norm drifted by {drift:.3e} over {M} steps; use more steps")

    t = np.linspace(0.0, T, M + 1)
    lam = l * radius(params, fields.eval_drive(spec, params, t).value)
    dynamical = -float(simpson(lam, x=t))

    w_final = eigenvectors(params, fields.eval_drive(spec, params, np.array([T])).value, l)[0]
    overlap = np.vdot(w_final, psi)
    fidelity = float(min(1.0, abs(overlap) ** 2))
    if fidelity < MIN_FIDELITY:
        warnings.warn(f"fidelity {fidelity:.4f} below {MIN_FIDELITY}", LowFidelityWarning, stacklevel=2)
    geometric = principal(-(np.angle(overlap) - dynamical))
    return PropagationRun(l, rho, M, psi, fidelity, dynamical, geometric, norms)
