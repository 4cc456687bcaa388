"""Execute configured experiments and serialize their results."""
from __future__ import annotations

import csv
import json
import os
import time
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import berryphase, fields, propagator, spinmap
from .config import ExperimentConfig, expand_sweep, to_dict
from .eigensystem import radius

WORKERS_ENV = "BERRYLAB_WORKERS"

TRACE_COLUMNS = ("t", "re_D", "im_D", "abs_D", "phi", "lambda_plus", "lambda_minus",
                 "integrand_plus", "integrand_minus")


@dataclass
class ResultRecord:
    sweep_index: int
    sweep_point: dict
    config: dict
    branches: dict
    warnings: list = field(default_factory=list)
    duration_s: float = 0.0

    def to_dict(self, include_timing=False) -> dict:
        out = {
            "sweep_index": self.sweep_index,
            "sweep": self.sweep_point,
            "config": self.config,
            "branches": self.branches,
            "warnings": self.warnings,
        }
        if include_timing:
            out["duration_s"] = self.duration_s
        return out

    def to_json(self, include_timing=False) -> str:
        return json.dumps(self.to_dict(include_timing), sort_keys=True)


def _branch_key(l):
    return f"{l:+d}"


def _run_branch(cfg: ExperimentConfig, l, solid):
    spec, params, n = cfg.field, cfg.params, cfg.samples
    out = {}
    analytic = None
    if "analytic" in cfg.methods or "propagate" in cfg.methods:
        analytic = berryphase.berry_phase_analytic(spec, params, l, n)
    if "analytic" in cfg.methods:
        out["analytic"] = {
            "gamma": analytic.gamma,
            "gamma_reduced": analytic.reduced,
            "error_estimate": analytic.error_estimate,
            "samples": n,
        }
    if "wilson" in cfg.methods:
        w = berryphase.berry_phase_wilson(spec, params, l, n)
        out["wilson"] = {"gamma": w.gamma, "error_estimate": w.error_estimate, "samples": n}
    if "propagate" in cfg.methods:
        run = propagator.propagate(spec, params, l, cfg.steps)
        out["propagate"] = {
            "geometric_phase": run.geometric_phase,
            "dynamical_phase": run.dynamical_phase,
            "fidelity": run.fidelity,
            "max_norm_drift": run.max_norm_drift,
            "adiabaticity": run.adiabaticity,
            "steps": run.steps,
            "analytic_reference": analytic.reduced,
            "abs_error": berryphase.phase_distance(run.geometric_phase, analytic.gamma),
        }
    if solid is not None:
        out["solid_angle"] = {
            "omega_solid": solid.omega_solid,
            "cos_theta": solid.cos_theta,
            "gamma_equivalent": berryphase.principal(-l * solid.omega_solid / 2.0),
            "samples": n,
        }
    return out


def run_point(cfg: ExperimentConfig, index=0, point=None) -> ResultRecord:
    """Run every requested method and branch for a single configuration."""
    start = time.perf_counter()
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        solid = None
        if "solid_angle" in cfg.methods:
            solid = spinmap.solid_angle(cfg.field, cfg.params, cfg.mu, cfg.samples)
        branches = {_branch_key(l): _run_branch(cfg, l, solid) for l in cfg.branches}
    config = to_dict(cfg)
    config["run"].pop("sweep", None)
    return ResultRecord(
        sweep_index=index,
        sweep_point=point or {},
        config=config,
        branches=branches,
        warnings=[str(w.message) for w in caught],
        duration_s=time.perf_counter() - start,
    )


def _run_indexed(args):
    index, point, cfg = args
    return run_point(cfg, index, point)


def default_workers() -> int:
    value = os.environ.get(WORKERS_ENV, "1")
    try:
        return max(1, int(value))
    except ValueError:
        return 1


def run_experiment(cfg: ExperimentConfig, workers=None) -> list:
    """Run all sweep points; records come back in sweep order regardless of workers."""
    points = list(expand_sweep(cfg))
    workers = default_workers() if workers is None else max(1, int(workers))
    if workers == 1 or len(points) == 1:
        return [_run_indexed(p) for p in points]
    with ProcessPoolExecutor(max_workers=min(workers, len(points))) as pool:
        return list(pool.map(_run_indexed, points))


def trace_rows(cfg: ExperimentConfig, n=None):
    """Per-sample diagnostics over one period at ``n`` uniform times."""
    n = n or cfg.samples
    spec, params = cfg.field, cfg.params
    t = spec.period * np.arange(n) / n
    drive = fields.eval_drive(spec, params, t)
    lam = radius(params, drive.value)
    integrand = {l: 0.5 * berryphase.geometric_density(params, drive.value, drive.derivative, l)
                 for l in (1, -1)}
    cols = (t, drive.value.real, drive.value.imag, drive.modulus, drive.phase, lam, -lam,
            integrand[1], integrand[-1])
    return np.column_stack(cols)


def write_trace(path, configs):
    """Write trace tables for ``[(index, cfg), ...]`` as CSV, 17 significant digits."""
    with_index = len(configs) > 1
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow((("sweep_index",) if with_index else ()) + TRACE_COLUMNS)
        for index, cfg in configs:
            for row in trace_rows(cfg):
                cells = [f"{x:.17g}" for x in row]
                writer.writerow(([str(index)] if with_index else []) + cells)
