"""Experiment configuration: YAML parsing, validation, sweeps and round-trip.

A configuration has three tables::

    system:
      delta_epsilon: 1.0          # level gap, > 0
      d12: [1.0, 0.0, 0.0]        # real transition dipole
    field:
      kind: monochromatic_plus    # or monochromatic_minus, real_cosine,
                                  #    superposition, fourier
      amplitude: [0.5, 0.0, 0.0]
      omega: 0.001                # optional when run.adiabaticity is given
      phi0: 0.0
      fourier_terms:              # kind=fourier only
        - {n: 1, coeff: [[0.5, 0.0], 0.0, 0.0]}   # entries: x or [re, im]
    run:
      method: all                 # analytic | wilson | propagate | solid_angle | all
      branch: both                # -1 | 1 | both
      samples: 4096               # quadrature panels / loop samples
      steps: auto                 # RK4 steps, or "auto" for 200 * adiabaticity
      adiabaticity: 1000          # sets omega = delta_epsilon / adiabaticity
      mu: 1.0                     # spin-map moment, optional
      sweep:                      # optional; cartesian product, first axis slowest
        - {path: run.adiabaticity, values: [250, 500, 1000, 2000]}

Errors are raised as :class:`ConfigError` carrying the dotted key path.
"""
from __future__ import annotations

import copy
import itertools
import math
from dataclasses import dataclass, field as dc_field

import yaml

from .errors import ConfigError
from .fields import KINDS, FieldSpec
from .model import TwoLevelParams

METHODS = ("analytic", "wilson", "propagate", "solid_angle")
STEPS_PER_ADIABATICITY = 200

_ALLOWED = {
    "system": {"delta_epsilon", "d12"},
    "field": {"kind", "amplitude", "omega", "phi0", "fourier_terms"},
    "run": {"method", "branch", "samples", "steps", "adiabaticity", "mu", "sweep"},
}


@dataclass(frozen=True)
class SweepAxis:
    path: str
    values: tuple


@dataclass(frozen=True)
class ExperimentConfig:
    params: TwoLevelParams
    field: FieldSpec
    methods: tuple
    branches: tuple
    samples: int
    steps: int | None
    adiabaticity: float | None
    mu: float
    sweep: tuple
    steps_auto: bool = False
    raw: dict = dc_field(default_factory=dict, compare=False, repr=False)

    @property
    def delta_epsilon(self) -> float:
        return self.params.delta_epsilon()


def _number(value, path, *, positive=False, integer=False):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(path, f"expected a number, got {value!r}")
    if not math.isfinite(value):
        raise ConfigError(path, "must be finite")
    if integer and int(value) != value:
        raise ConfigError(path, f"expected an integer, got {value!r}")
    if positive and value <= 0:
        raise ConfigError(path, f"must be > 0, got {value!r}")
    return int(value) if integer else float(value)


def _vector(value, path, allow_complex=False):
    if not isinstance(value, (list, tuple)) or len(value) != 3:
        raise ConfigError(path, "expected a list of 3 entries")
    out = []
    for i, x in enumerate(value):
        p = f"{path}[{i}]"
        if allow_complex and isinstance(x, (list, tuple)):
            if len(x) != 2:
                raise ConfigError(p, "complex entries are written [re, im]")
            out.append(complex(_number(x[0], p), _number(x[1], p)))
        else:
            out.append(_number(x, p))
    return tuple(out)


def _table(raw, name):
    table = raw.get(name)
    if not isinstance(table, dict):
        raise ConfigError(name, "missing table")
    unknown = set(table) - _ALLOWED[name]
    if unknown:
        raise ConfigError(f"{name}.{sorted(unknown)[0]}", "unknown key")
    return table


def _parse_field(table, omega_override):
    kind = table.get("kind")
    if kind not in KINDS:
        raise ConfigError("field.kind", f"expected one of {KINDS}, got {kind!r}")
    amplitude = _vector(table.get("amplitude", [0.0, 0.0, 0.0]), "field.amplitude")
    phi0 = _number(table.get("phi0", 0.0), "field.phi0")
    if omega_override is not None:
        omega = omega_override
    elif "omega" in table:
        omega = _number(table["omega"], "field.omega", positive=True)
    else:
        raise ConfigError("field.omega", "required unless run.adiabaticity is set")
    terms = ()
    if kind == "fourier":
        raw_terms = table.get("fourier_terms")
        if not isinstance(raw_terms, list) or not raw_terms:
            raise ConfigError("field.fourier_terms", "a non-empty list is required for kind=fourier")
        parsed = []
        for i, entry in enumerate(raw_terms):
            p = f"field.fourier_terms[{i}]"
            if not isinstance(entry, dict) or set(entry) != {"n", "coeff"}:
                raise ConfigError(p, "expected a mapping with keys n and coeff")
            n = _number(entry["n"], f"{p}.n", integer=True)
            parsed.append((n, _vector(entry["coeff"], f"{p}.coeff", allow_complex=True)))
        terms = tuple(parsed)
    elif "fourier_terms" in table:
        raise ConfigError("field.fourier_terms", f"only valid for kind=fourier, not {kind}")
    try:
        return FieldSpec(kind, amplitude, omega, phi0, terms)
    except ValueError as exc:
        raise ConfigError("field", str(exc)) from None


def _parse_sweep(value):
    if value is None:
        return ()
    if not isinstance(value, list) or not value:
        raise ConfigError("run.sweep", "expected a non-empty list of {path, values}")
    axes = []
    for i, entry in enumerate(value):
        p = f"run.sweep[{i}]"
        if not isinstance(entry, dict) or set(entry) != {"path", "values"}:
            raise ConfigError(p, "expected a mapping with keys path and values")
        path = entry["path"]
        parts = path.split(".") if isinstance(path, str) else []
        if len(parts) != 2 or parts[0] not in _ALLOWED or parts[1] not in _ALLOWED[parts[0]] or path == "run.sweep":
            raise ConfigError(f"{p}.path", f"not a sweepable parameter: {path!r}")
        values = entry["values"]
        if not isinstance(values, list) or not values:
            raise ConfigError(f"{p}.values", "must be a non-empty list")
        for j, v in enumerate(values):
            _check_finite(v, f"{p}.values[{j}]")
        axes.append(SweepAxis(path, tuple(values)))
    return tuple(axes)


def _check_finite(value, path):
    if isinstance(value, (list, tuple)):
        for i, v in enumerate(value):
            _check_finite(v, f"{path}[{i}]")
    elif isinstance(value, (int, float)) and not isinstance(value, bool):
        if not math.isfinite(value):
            raise ConfigError(path, "sweep values must be finite")


def from_dict(raw) -> ExperimentConfig:
    if not isinstance(raw, dict):
        raise ConfigError("", "configuration must be a mapping")
    unknown = set(raw) - set(_ALLOWED)
    if unknown:
        raise ConfigError(sorted(unknown)[0], "unknown table")
    system = _table(raw, "system")
    run = _table(raw, "run")
    field_table = _table(raw, "field")

    if "delta_epsilon" not in system:
        raise ConfigError("system.delta_epsilon", "required")
    gap = _number(system["delta_epsilon"], "system.delta_epsilon", positive=True)
    d12 = _vector(system.get("d12", [1.0, 0.0, 0.0]), "system.d12")
    params = TwoLevelParams.from_gap(gap, d12)

    method = run.get("method", "all")
    if method == "all":
        methods = METHODS
    elif method in METHODS:
        methods = (method,)
    else:
        raise ConfigError("run.method", f"expected one of {METHODS + ('all',)}, got {method!r}")

    branch = run.get("branch", "both")
    if branch == "both":
        branches = (1, -1)
    elif branch in (1, -1) and not isinstance(branch, bool):
        branches = (int(branch),)
    else:
        raise ConfigError("run.branch", f"expected -1, 1 or both, got {branch!r}")

    samples = _number(run.get("samples", 1024), "run.samples", positive=True, integer=True)
    if ("analytic" in methods or "propagate" in methods) and samples % 2:
        raise ConfigError("run.samples", "quadrature needs an even number of panels")

    rho = run.get("adiabaticity")
    if rho is not None:
        rho = _number(rho, "run.adiabaticity", positive=True)

    steps = run.get("steps")
    if "propagate" in methods:
        if rho is None:
            raise ConfigError("run.adiabaticity", "required for method propagate")
        if steps is None:
            raise ConfigError("run.steps", "required for method propagate (an integer or 'auto')")
    steps_auto = steps == "auto"
    if steps_auto:
        if rho is None:
            raise ConfigError("run.steps", "'auto' needs run.adiabaticity")
        steps = int(round(STEPS_PER_ADIABATICITY * rho))
    elif steps is not None:
        steps = _number(steps, "run.steps", positive=True, integer=True)

    mu = _number(run.get("mu", 1.0), "run.mu", positive=True)
    omega = gap / rho if rho is not None else None
    field = _parse_field(field_table, omega)
    sweep = _parse_sweep(run.get("sweep"))
    return ExperimentConfig(params, field, methods, branches, samples, steps, rho, mu, sweep,
                            steps_auto, copy.deepcopy(raw))


def parse_config(text) -> ExperimentConfig:
    try:
        raw = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError("", f"not valid YAML: {exc}") from None
    return from_dict(raw)


def load_config(path) -> ExperimentConfig:
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError("", f"cannot read {path}: {exc}") from None
    return parse_config(text)


def _complex_entry(c):
    return [c.real, c.imag] if c.imag else c.real


def to_dict(cfg: ExperimentConfig) -> dict:
    """Canonical mapping for ``cfg``; ``from_dict(to_dict(cfg))`` reproduces it."""
    f = cfg.field
    field = {"kind": f.kind, "amplitude": list(f.amplitude), "phi0": f.phi0}
    if cfg.adiabaticity is None:
        field["omega"] = f.omega
    if f.kind == "fourier":
        # regroup harmonics as parsed; duplicates were summed on construction
        field["fourier_terms"] = [{"n": n, "coeff": [_complex_entry(x) for x in c]} for n, c in f.fourier_terms]
    run = {
        "method": "all" if cfg.methods == METHODS else cfg.methods[0],
        "branch": "both" if len(cfg.branches) == 2 else cfg.branches[0],
        "samples": cfg.samples,
        "mu": cfg.mu,
    }
    if cfg.steps is not None:
        run["steps"] = "auto" if cfg.steps_auto else cfg.steps
    if cfg.adiabaticity is not None:
        run["adiabaticity"] = cfg.adiabaticity
    if cfg.sweep:
        run["sweep"] = [{"path": a.path, "values": list(a.values)} for a in cfg.sweep]
    return {
        "system": {"delta_epsilon": cfg.delta_epsilon, "d12": list(cfg.params.d12)},
        "field": field,
        "run": run,
    }


def dump_config(cfg: ExperimentConfig) -> str:
    return yaml.safe_dump(to_dict(cfg), sort_keys=False, default_flow_style=None)


def expand_sweep(cfg: ExperimentConfig):
    """Yield ``(index, point, config)`` for every sweep point, in a fixed order.

    Without a sweep there is a single point with an empty ``point`` mapping.
    """
    if not cfg.sweep:
        yield 0, {}, cfg
        return
    base = copy.deepcopy(cfg.raw)
    del base["run"]["sweep"]
    paths = [a.path for a in cfg.sweep]
    for index, combo in enumerate(itertools.product(*(a.values for a in cfg.sweep))):
        raw = copy.deepcopy(base)
        for path, value in zip(paths, combo):
            table, key = path.split(".")
            raw[table][key] = value
        point_cfg = from_dict(raw)
        yield index, dict(zip(paths, combo)), point_cfg
