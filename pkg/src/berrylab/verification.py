"""Acceptance checks, runnable from the CLI (``berrylab verify``) or pytest.

Each check draws its own seeded random configurations, measures the worst
deviation, and compares it against a fixed tolerance and runtime budget.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from . import berryphase, fields, propagator, spinmap
from .eigensystem import BRANCHES, amplitudes, eigenvector_components, radius
from .model import TwoLevelParams, build_hamiltonian

SEED = 20240607

# anchor: delta = 1, |D0| = 0.5, upper branch, positive-frequency drive
ANCHOR_F_PLUS = 0.5 - 0.5 * math.sqrt(0.5)
ANCHOR_GAMMA = -math.pi * 0.25 / ANCHOR_F_PLUS
ANCHOR_GAMMA_REDUCED = ANCHOR_GAMMA + 2 * math.pi


@dataclass
class CheckResult:
    key: str
    title: str
    passed: bool
    measured: float
    tolerance: float
    runtime: float
    limit: float
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (f"[{status}] {self.key} {self.title}: measured {self.measured:.3e} "
                f"(tol {self.tolerance:.1e}), {self.runtime:.2f}s (limit {self.limit:.0f}s)"
                + (f" -- {self.detail}" if self.detail else ""))


def _random_unit(rng):
    v = rng.normal(size=3)
    return v / np.linalg.norm(v)


def _random_monochromatic(rng, sign):
    """Random gap, dipole direction and field; returns ``(params, spec, |D0|)``."""
    gap = rng.uniform(0.2, 5.0)
    direction = _random_unit(rng)
    params = TwoLevelParams.from_gap(gap, direction)
    d0 = rng.uniform(0.05, 3.0)
    omega = rng.uniform(0.01, 2.0)
    phi0 = rng.uniform(-math.pi, math.pi)
    spec = fields.monochromatic(d0 * direction, omega, phi0, sign)
    return params, spec, d0


def random_real_fourier(rng):
    """Random real field with up to five harmonics and a random dipole."""
    params = TwoLevelParams.from_gap(rng.uniform(0.2, 5.0), _random_unit(rng))
    harmonics = rng.choice(np.arange(1, 6), size=rng.integers(1, 6), replace=False)
    terms = [(int(n), rng.normal(size=3) + 1j * rng.normal(size=3)) for n in sorted(harmonics)]
    if rng.random() < 0.5:
        terms.append((0, rng.normal(size=3)))
    return params, fields.real_fourier(terms, omega=rng.uniform(0.01, 2.0), phi0=rng.uniform(-math.pi, math.pi))


def random_complex_fourier(rng):
    """Generic complex field: random harmonics in -3..3 with random coefficients."""
    params = TwoLevelParams.from_gap(rng.uniform(0.2, 5.0), _random_unit(rng))
    harmonics = rng.choice(np.arange(-3, 4), size=rng.integers(1, 4), replace=False)
    terms = tuple((int(n), 0.3 * (rng.normal(size=3) + 1j * rng.normal(size=3))) for n in harmonics)
    return params, fields.FieldSpec("fourier", omega=rng.uniform(0.01, 2.0), fourier_terms=terms)


def check_real_field_null(draws=50, samples=None, seed=SEED):
    samples = samples or 4096
    rng = np.random.default_rng(seed)
    worst_a = worst_w = 0.0
    for _ in range(draws):
        params, spec = random_real_fourier(rng)
        for l in BRANCHES:
            worst_a = max(worst_a, abs(berryphase.berry_phase_analytic(spec, params, l, 1024).gamma))
            worst_w = max(worst_w, abs(berryphase.berry_phase_wilson(spec, params, l, samples).gamma))
    ok = worst_a < 1e-8 and worst_w < 1e-6
    return ok, worst_a, 1e-8, f"max |gamma_analytic| {worst_a:.2e}, max |gamma_wilson| {worst_w:.2e} (tol 1e-6)"


def check_sign_flip(draws=50, samples=None, seed=SEED + 1):
    n = samples or 1024
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(draws):
        params, plus, _ = _random_monochromatic(rng, +1)
        minus = fields.FieldSpec("monochromatic_minus", plus.amplitude, plus.omega, plus.phi0)
        for l in BRANCHES:
            gp = berryphase.berry_phase_analytic(plus, params, l, n).gamma
            gm = berryphase.berry_phase_analytic(minus, params, l, n).gamma
            worst = max(worst, abs(gp + gm))
    return worst < 1e-10, worst, 1e-10, "max |gamma(+) + gamma(-)|"


def check_closed_form_anchor(samples=None):
    wilson_n = samples or 8192
    params = TwoLevelParams.from_gap(1.0)
    spec = fields.monochromatic((0.5, 0.0, 0.0), 1.0)
    quad = berryphase.berry_phase_analytic(spec, params, 1, 1024).gamma
    wil = berryphase.berry_phase_wilson(spec, params, 1, wilson_n).gamma
    err_q = abs(quad - ANCHOR_GAMMA)
    err_w = abs(wil - ANCHOR_GAMMA_REDUCED)
    ok = err_q < 1e-10 and err_w < 1e-5
    return ok, err_w, 1e-5, (f"quadrature {quad:.10f} vs {ANCHOR_GAMMA:.10f} (err {err_q:.1e}, tol 1e-10); "
                             f"wilson {wil:.10f} vs {ANCHOR_GAMMA_REDUCED:.10f}")


def check_spin_map(draws=20, samples=None, seed=SEED + 2):
    n = samples or 4096
    rng = np.random.default_rng(seed)
    worst_phase = worst_identity = 0.0
    for i in range(draws):
        sign = +1 if i % 2 == 0 else -1
        params, spec, d0 = _random_monochromatic(rng, sign)
        mu = rng.uniform(0.5, 2.0)
        solid = spinmap.solid_angle(spec, params, mu, n)
        for l in BRANCHES:
            gamma = berryphase.berry_phase_analytic(spec, params, l, 1024).gamma
            worst_phase = max(worst_phase, berryphase.phase_distance(gamma, -l * solid.omega_solid / 2))
        _, f_plus = amplitudes(params, d0, 1)
        _, f_minus = amplitudes(params, d0, -1)
        worst_identity = max(worst_identity,
                             abs(d0**2 / f_plus - (1 - solid.cos_theta)),
                             abs(d0**2 / f_minus - (1 + solid.cos_theta)))
    ok = worst_phase < 1e-6 and worst_identity < 1e-12
    return ok, worst_phase, 1e-6, f"phase mismatch mod 2pi; cone identity error {worst_identity:.1e} (tol 1e-12)"


def check_propagation(rhos=(250, 500, 1000, 2000), reference_rho=1000, samples=None):
    params = TwoLevelParams.from_gap(1.0)
    worst_rel = 0.0
    monotone = True
    notes = []
    for sign in (+1, -1):
        for l in BRANCHES:
            errors = []
            for rho in rhos:
                spec = fields.monochromatic((0.5, 0.0, 0.0), fields.omega_for_adiabaticity(params, rho), 0.0, sign)
                run = propagator.propagate(spec, params, l, 200 * rho)
                ref = berryphase.berry_phase_analytic(spec, params, l, samples or 1024).reduced
                err = berryphase.phase_distance(run.geometric_phase, ref)
                errors.append(err)
                if rho == reference_rho:
                    worst_rel = max(worst_rel, err / abs(ref))
            if any(b >= a for a, b in zip(errors, errors[1:])):
                monotone = False
                notes.append(f"non-monotone for sign {sign:+d}, l {l:+d}: {errors}")
    return worst_rel < 0.05 and monotone, worst_rel, 0.05, "; ".join(notes) or "relative error at rho=1000; errors decrease with rho"


def check_eigensystem(draws=1000, seed=SEED + 3, samples=None):
    rng = np.random.default_rng(seed)
    gaps = 10 ** rng.uniform(-2, 1, draws)
    d = 10 ** rng.uniform(-4, 1, draws) * np.exp(1j * rng.uniform(-math.pi, math.pi, draws))
    worst_norm = worst_ident = worst_resid = worst_eig = 0.0
    for gap, di in zip(gaps, d):
        params = TwoLevelParams.from_gap(gap)
        h = build_hamiltonian(params, di)
        dense = np.linalg.eigvalsh(h)
        scale = max(gap / 2, abs(di))
        for l in BRANCHES:
            u, v = eigenvector_components(params, di, l)
            A, F = amplitudes(params, di, l)
            w = np.array([u, v])
            lam = l * radius(params, di)
            worst_norm = max(worst_norm, abs(abs(u) ** 2 + abs(v) ** 2 - 1))
            worst_ident = max(worst_ident, abs(A + abs(di) ** 2 / (2 * F) - 1))
            worst_resid = max(worst_resid, np.linalg.norm(h @ w - lam * w) / scale)
            worst_eig = max(worst_eig, abs(lam - dense[0 if l < 0 else 1]))
    ok = worst_norm < 1e-12 and worst_ident < 1e-12 and worst_resid <= 1e-12 and worst_eig < 1e-13
    worst = max(worst_norm, worst_ident, worst_resid)
    return ok, worst, 1e-12, (f"norm {worst_norm:.1e}, identity {worst_ident:.1e}, "
                              f"residual/scale {worst_resid:.1e}, eigenvalue vs dense {worst_eig:.1e} (tol 1e-13)")


def check_gauge_invariance(draws=10, samples=None, seed=SEED + 4):
    n = samples or 4096
    rng = np.random.default_rng(seed)
    worst = 0.0
    for i in range(draws):
        if i % 2 == 0:
            params, spec, _ = _random_monochromatic(rng, +1 if i % 4 == 0 else -1)
        else:
            params, spec = random_complex_fourier(rng)
        for l in BRANCHES:
            states = berryphase._loop_states(spec, params, l, n)
            twirled = states * np.exp(1j * rng.uniform(-math.pi, math.pi, n))[:, None]
            g0 = berryphase.wilson_loop_phase(states)
            g1 = berryphase.wilson_loop_phase(twirled)
            worst = max(worst, berryphase.phase_distance(g0, g1))
    return worst < 1e-12, worst, 1e-12, "max change of wilson phase under random per-sample phases"


def check_superposition(draws=20, samples=None, seed=SEED + 5):
    n = samples or 4096
    rng = np.random.default_rng(seed)
    worst_a = worst_w = 0.0
    for _ in range(draws):
        params, plus, _ = _random_monochromatic(rng, +1)
        spec = fields.FieldSpec("superposition", plus.amplitude, plus.omega, plus.phi0)
        for l in BRANCHES:
            worst_a = max(worst_a, abs(berryphase.berry_phase_analytic(spec, params, l, 1024).gamma))
            worst_w = max(worst_w, abs(berryphase.berry_phase_wilson(spec, params, l, n).gamma))
    worst = max(worst_a, worst_w)
    return worst < 1e-8, worst, 1e-8, f"analytic {worst_a:.1e}, wilson {worst_w:.1e}"


def check_oracle_agreement(samples=None):
    """Analytic vs Wilson within 1e-4 at N=4096, discrepancy shrinking up to 16384."""
    params = TwoLevelParams.from_gap(1.0)
    spec = fields.monochromatic((0.5, 0.0, 0.0), 1.0)
    ns = (samples,) if samples else (4096, 8192, 16384)
    ref = berryphase.berry_phase_analytic(spec, params, 1, 1024).reduced
    gaps = [berryphase.phase_distance(berryphase.berry_phase_wilson(spec, params, 1, n).gamma, ref) for n in ns]
    monotone = all(b < a for a, b in zip(gaps, gaps[1:]))
    return gaps[0] < 1e-4 and monotone, gaps[0], 1e-4, f"discrepancies {['%.2e' % g for g in gaps]}"


CHECKS = (
    ("C1", "real-field null phase", check_real_field_null, 10.0, {"draws": (50, 10)}),
    ("C2", "sign flip between E+ and E-", check_sign_flip, 5.0, {"draws": (50, 10)}),
    ("C3", "closed-form anchor", check_closed_form_anchor, 5.0, {}),
    ("C4", "spin-map solid angle consistency", check_spin_map, 10.0, {"draws": (20, 6)}),
    ("C5", "propagation ground truth", check_propagation, 120.0, {}),
    ("C6", "eigensystem integrity", check_eigensystem, 1.0, {"draws": (1000, 200)}),
    ("C7", "wilson gauge invariance", check_gauge_invariance, 5.0, {"draws": (10, 4)}),
    ("C8", "superposition nullity", check_superposition, 5.0, {"draws": (20, 6)}),
    ("X1", "analytic/wilson oracle agreement", check_oracle_agreement, 10.0, {}),
)


def run_check(key, quick=False, samples=None) -> CheckResult:
    for k, title, func, limit, sizes in CHECKS:
        if k != key:
            continue
        kwargs = {name: pair[1 if quick else 0] for name, pair in sizes.items()}
        start = time.perf_counter()
        try:
            ok, measured, tol, detail = func(samples=samples, **kwargs)
        except Exception as exc:  # noqa: BLE001 - a crashing check is a failing check
            ok, measured, tol, detail = False, math.inf, math.nan, f"{type(exc).__name__}: {exc}"
        runtime = time.perf_counter() - start
        if runtime > limit:
            ok = False
            detail += f"; exceeded runtime budget {limit:.0f}s"
        return CheckResult(k, title, bool(ok), float(measured), tol, runtime, limit, detail)
    raise KeyError(key)


def verify_suite(quick=False, samples=None, stream=None) -> list:
    results = []
    for key, *_ in CHECKS:
        result = run_check(key, quick, samples)
        results.append(result)
        if stream is not None:
            print(result.line(), file=stream, flush=True)
    if stream is not None:
        failed = [r.key for r in results if not r.passed]
        print("all checks passed" if not failed else f"failed: {', '.join(failed)}", file=stream)
    return results
