"""Two-level system parameters and the traceless dipole Hamiltonian.

Natural units (hbar = c = 1) are used everywhere; there is no unit layer.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class TwoLevelParams:
    """Bare level energies and the (real, time-independent) transition dipole."""

    epsilon1: float
    epsilon2: float
    d12: tuple = (1.0, 0.0, 0.0)

    def __post_init__(self):
        e1, e2 = float(self.epsilon1), float(self.epsilon2)
        if not (np.isfinite(e1) and np.isfinite(e2)):
            raise ValueError("level energies must be finite")
        if not e1 < e2:
            raise ValueError(f"levels must be non-degenerate with epsilon1 < epsilon2, got {e1}, {e2}")
        d = np.asarray(self.d12)
        if d.shape != (3,):
            raise ValueError("d12 must be a 3-vector")
        if np.iscomplexobj(d):
            if np.any(d.imag != 0):
                raise ValueError("d12 must be real")
            d = d.real
        d = d.astype(float)
        if not np.all(np.isfinite(d)):
            raise ValueError("d12 entries must be finite")
        object.__setattr__(self, "epsilon1", e1)
        object.__setattr__(self, "epsilon2", e2)
        object.__setattr__(self, "d12", tuple(float(x) for x in d))

    @classmethod
    def from_gap(cls, delta_epsilon, d12=(1.0, 0.0, 0.0)):
        """Symmetric levels ``-delta/2, +delta/2``; only the gap matters physically."""
        half = 0.5 * float(delta_epsilon)
        return cls(-half, half, d12)

    def delta_epsilon(self) -> float:
        return self.epsilon2 - self.epsilon1

    @property
    def dipole(self) -> np.ndarray:
        return np.array(self.d12)


def drive_value(params: TwoLevelParams, field_value):
    """Scalar drive ``D = d12 . E``.

    ``field_value`` may be a single 3-vector or an array of shape ``(..., 3)``.
    No conjugation is applied; the dipole is real.
    """
    return np.asarray(field_value) @ params.dipole


def build_hamiltonian(params: TwoLevelParams, d) -> np.ndarray:
    """The 2x2 Hamiltonian shifted by the mean level energy.

    Returns ``[[-delta/2, conj(d)], [d, +delta/2]]``. The diagonal is exact
    and the off-diagonal pair is conjugate by construction.
    """
    half = 0.5 * params.delta_epsilon()
    d = complex(d)
    return np.array([[-half, d.conjugate()], [d, half]], dtype=complex)
