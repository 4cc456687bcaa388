"""Geometric phases of a two-level system driven through an electric dipole."""

from .berryphase import (
    BerryPhaseResult,
    ConnectionSample,
    berry_phase_analytic,
    berry_phase_wilson,
    connection_decomposition,
    principal,
    wilson_loop_phase,
)
from .eigensystem import Eigensystem, eigenvalues, eigenvector
from .fields import DriveSample, FieldSpec, UserField, eval_drive, eval_field, monochromatic, real_fourier
from .model import TwoLevelParams, build_hamiltonian, drive_value
from .propagator import PropagationRun, propagate
from .spinmap import EquivalentField, SolidAngleResult, map_to_field, solid_angle

__all__ = [
    "BerryPhaseResult", "ConnectionSample", "DriveSample", "Eigensystem", "EquivalentField",
    "FieldSpec", "PropagationRun", "SolidAngleResult", "TwoLevelParams", "UserField",
    "berry_phase_analytic", "berry_phase_wilson", "build_hamiltonian", "connection_decomposition",
    "drive_value", "eigenvalues", "eigenvector", "eval_drive", "eval_field", "map_to_field",
    "monochromatic", "principal", "propagate", "real_fourier", "solid_angle", "wilson_loop_phase",
]
