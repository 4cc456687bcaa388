"""Equivalent spin-1/2 picture: H = mu sigma . B(t).

The drive maps onto ``B = (Re D, Im D, -delta/2) / mu``. Since ``B_z`` is a
negative constant the field direction never leaves the southern hemisphere,
and the solid angle of its path is measured around the south pole.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import fields
from .errors import OriginOnPath
from .model import TwoLevelParams

SOUTH = np.array([0.0, 0.0, -1.0])


@dataclass(frozen=True)
class EquivalentField:
    Bx: float
    By: float
    Bz: float
    mu: float

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.Bx, self.By, self.Bz])


@dataclass(frozen=True)
class SolidAngleResult:
    """Signed solid angle of the field-direction loop.

    ``cos_theta`` is the polar cosine of the field at the start of the loop.
    """

    omega_solid: float
    cos_theta: float


def field_vectors(spec, params: TwoLevelParams, mu, t) -> np.ndarray:
    """``B(t)`` as an array of shape ``t.shape + (3,)``."""
    if not mu > 0:
        raise ValueError(f"mu must be positive, got {mu}")
    d = fields.eval_drive(spec, params, t).value
    b = np.empty(np.shape(d) + (3,))
    b[..., 0] = np.real(d) / mu
    b[..., 1] = np.imag(d) / mu
    b[..., 2] = -0.5 * params.delta_epsilon() / mu
    return b


def map_to_field(spec, params: TwoLevelParams, mu, t) -> EquivalentField:
    bx, by, bz = field_vectors(spec, params, mu, float(t))
    return EquivalentField(float(bx), float(by), float(bz), float(mu))


def _arc(p, q):
    """Great-circle distance between rows of unit vectors, accurate for short arcs."""
    cross = np.linalg.norm(np.cross(p, q), axis=-1)
    return np.arctan2(cross, np.einsum("...i,...i->...", p, q))


def triangle_excess(a, b, c):
    """Unsigned spherical excess of triangles ``(a, b, c)`` by l'Huilier's theorem."""
    sa, sb, sc = _arc(b, c), _arc(a, c), _arc(a, b)
    s = 0.5 * (sa + sb + sc)
    prod = np.tan(0.5 * s) * np.tan(0.5 * (s - sa)) * np.tan(0.5 * (s - sb)) * np.tan(0.5 * (s - sc))
    return 4.0 * np.arctan(np.sqrt(np.clip(prod, 0.0, None)))


def polygon_solid_angle(points, pole=SOUTH) -> float:
    """Signed area of a closed spherical polygon, fanned from ``pole``.

    Vertices are the rows of ``points`` (normalized here), joined by minor
    great-circle arcs and closed back to the first vertex. The area is that of
    the region not containing ``-pole``, positive when the boundary circulates
    counter-clockwise about ``-pole`` (for the default south pole: increasing
    azimuth about +z).
    """
    p = np.asarray(points, dtype=float)
    p = p / np.linalg.norm(p, axis=1, keepdims=True)
    q = np.roll(p, -1, axis=0)
    pole = np.broadcast_to(pole, p.shape)
    excess = triangle_excess(pole, p, q)
    orientation = -np.sign(np.einsum("ki,ki->k", pole, np.cross(p, q)))
    return float(np.sum(orientation * excess))


def solid_angle(spec, params: TwoLevelParams, mu=1.0, N=4096) -> SolidAngleResult:
    """Signed solid angle traced by the direction of ``B(t)`` over one period.

    The sign follows the azimuthal sense of traversal about +z, so a drive
    whose phase decreases in time gives a negative value.
    """
    if N < 64:
        raise ValueError(f"solid angle needs N >= 64 samples, got {N}")
    t = spec.period * np.arange(N) / N
    b = field_vectors(spec, params, mu, t)
    norms = np.linalg.norm(b, axis=1)
    if np.min(norms) < 1e-12:
        raise OriginOnPath("field passes through the origin; direction undefined")
    omega = polygon_solid_angle(b)
    return SolidAngleResult(omega, float(b[0, 2] / norms[0]))
