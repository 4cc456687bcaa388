"""Closed-form instantaneous eigensystem of the shifted two-level Hamiltonian.

Branch ``l = +1`` is the upper level and ``l = -1`` the lower one. Branches
are labelled, never sorted, so they stay continuous along a drive.

Gauge: the first entry ``u`` is real and non-negative; all phase sits in
the second entry ``v``. With ``a = delta/2`` and ``r = sqrt(a^2 + |d|^2)``
the amplitudes used here are

    A_l = 1/2 - l a / (2 r),     F_l = r^2 - l a r,
    u_l = sqrt(A_l),             v_l = l d / sqrt(2 F_l).

For ``l = +1`` both ``A`` and ``F`` vanish like ``|d|^2`` as ``d -> 0``; they
are evaluated through ``r - a = |d|^2 / (r + a)`` to avoid cancellation.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import TwoLevelParams

BRANCHES = (-1, +1)

# below SINGULAR_RATIO * delta the upper branch uses its d -> 0 limit
SINGULAR_RATIO = 1e-14


def _check_branch(l):
    if l not in BRANCHES:
        raise ValueError(f"branch must be -1 or +1, got {l!r}")


@dataclass(frozen=True)
class Eigensystem:
    branch: int
    eigenvalue: float
    A: float
    F: float
    u: float
    v: complex

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.u, self.v], dtype=complex)


def radius(params: TwoLevelParams, d):
    """``sqrt((delta/2)^2 + |d|^2)``, the magnitude of both eigenvalues."""
    return np.hypot(0.5 * params.delta_epsilon(), np.abs(d))


def eigenvalues(params: TwoLevelParams, d):
    r = float(radius(params, d))
    return -r, r


def amplitudes(params: TwoLevelParams, d, l):
    """``(A_l, F_l)`` for scalar or array ``d``, evaluated without cancellation."""
    _check_branch(l)
    a = 0.5 * params.delta_epsilon()
    d2 = np.abs(d) ** 2
    r = np.sqrt(a * a + d2)
    if l == 1:
        gap_part = d2 / (r + a)  # r - a
        return gap_part / (2 * r), r * gap_part
    return (r + a) / (2 * r), r * (r + a)


def eigenvector_components(params: TwoLevelParams, d, l):
    """Vectorized ``(u_l, v_l)`` for an array of drive values."""
    _check_branch(l)
    d = np.asarray(d, dtype=complex)
    a = 0.5 * params.delta_epsilon()
    mod = np.abs(d)
    r = np.sqrt(a * a + mod * mod)
    if l == -1:
        u = np.sqrt((r + a) / (2 * r))
        v = -d / np.sqrt(2 * r * (r + a))
        return u, v
    singular = mod < SINGULAR_RATIO * params.delta_epsilon()
    # phase of d where defined, +1 at d == 0
    unit = np.where(mod > 0, np.exp(1j * np.angle(d)), 1.0)
    u = np.where(singular, 0.0, mod / np.sqrt(2 * r * (r + a)))
    v = np.where(singular, unit, unit * np.sqrt((r + a) / (2 * r)))
    return u, v


def eigenvector(params: TwoLevelParams, d, l) -> Eigensystem:
    """Normalized instantaneous eigenvector ``W_l = (u_l, v_l)`` at drive ``d``."""
    _check_branch(l)
    A, F = amplitudes(params, d, l)
    u, v = eigenvector_components(params, d, l)
    lam = l * float(radius(params, d))
    return Eigensystem(l, lam, float(A), float(F), float(u), complex(v))


def eigenvectors(params: TwoLevelParams, d, l) -> np.ndarray:
    """Eigenvectors as rows of an ``(N, 2)`` complex array."""
    u, v = eigenvector_components(params, d, l)
    return np.stack([np.asarray(u, dtype=complex), v], axis=-1)
