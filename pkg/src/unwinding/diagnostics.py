"""Invariant checks run against a finished expansion (used by ``unwind verify``)."""

from __future__ import annotations

from dataclasses import dataclass
from typing import List

import numpy as np

from .expansion import ExpansionResult, partial_sum, reconstruction_tolerance
from .hardy import AnalyticCoeffs, cauchy_kernel, inner
from .multipliers import UNIT_BALL_TOL, BlaschkeProduct, Monomial

PROBE_ORDER = 256


@dataclass
class Check:
    name: str
    value: float
    tol: float

    @property
    def passed(self) -> bool:
        return bool(self.value <= self.tol)

    def as_dict(self):
        return {"name": self.name, "value": float(self.value), "tol": float(self.tol), "pass": self.passed}


def run_checks(result: ExpansionResult, f: AnalyticCoeffs, seed: int = 0, n_probes: int = 4) -> List[Check]:
    N = result.n_terms
    grid = result.config.N
    checks = []

    # partial-sum identity at every prefix, scaled by its own tolerance
    worst = 0.0
    for k in range(N + 1):
        diff = f - partial_sum(result, k) - result.remainder(k)
        worst = max(worst, diff.norm() / reconstruction_tolerance(k))
    checks.append(Check("partial_sum_identity (err / tol_rec)", worst, 1.0))

    # residual recursion against a direct application of the whole product
    direct = result.products[N].conj_mul(f, grid)
    checks.append(Check("residual_recursion", (direct - result.residuals[N]).norm(), 1e-10))

    # every distinct symbol lies in the closed unit ball on the grid
    sup = max((float(np.max(np.abs(t.multiplier.samples(grid)))) for t in result.terms), default=0.0)
    checks.append(Check("contraction (sup|b| - 1)", max(sup - 1.0, 0.0), UNIT_BALL_TOL))

    inner_steps = all(isinstance(t.multiplier, (BlaschkeProduct, Monomial)) for t in result.terms)
    if inner_steps:
        norms = [r.norm() for r in result.residuals]
        rise = max((b - a for a, b in zip(norms, norms[1:])), default=0.0)
        checks.append(Check("monotone_residual (max rise)", max(rise, 0.0), 1e-12))
    if all(t.scalar is not None for t in result.terms) and result.terms:
        norms = [r.norm() for r in result.residuals]
        gap = max(
            abs(norms[k - 1] ** 2 - norms[k] ** 2 - result.terms[k - 1].energy) for k in range(1, N + 1)
        )
        checks.append(Check("energy_identity", gap, 1e-10))

    # eigenvector property of the full product at seeded random points; the
    # probe order is kept high enough that kernel truncation stays below 1e-15
    rng = np.random.default_rng(seed)
    B = result.products[N]
    probe_M = max(f.M, PROBE_ORDER)
    err = 0.0
    for _ in range(n_probes):
        lam = 0.7 * np.sqrt(rng.uniform()) * np.exp(2j * np.pi * rng.uniform())
        k = cauchy_kernel(lam, probe_M)
        got = B.conj_mul(k)
        want = np.conj(complex(B(lam))) * k.coeffs
        err = max(err, np.linalg.norm(got.coeffs - want) / k.norm())
    checks.append(Check("kernel_eigenvector (relative)", err, 1e-9))

    if result.model_term is not None:
        m = result.model_term
        checks.append(Check("model_orthogonality", abs(inner(f - m, m)), 1e-9 + m.tail_mass))
    return checks
