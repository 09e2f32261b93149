"""
Analytic and co-analytic Toeplitz operators and the ``P_b`` / ``Q_b`` calculus.

``P_b = T_b T_{conj b}`` and ``Q_b = I - P_b``.  Outputs keep the truncation
order of the input; the H^2 mass pushed past order ``M`` is accumulated in
``AnalyticCoeffs.tail_mass``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import TruncationError, UnwindingError
from .hardy import AnalyticCoeffs, default_grid
from .multipliers import Multiplier, MultiplierProduct


class ConsistencyError(UnwindingError):
    """Two routes that must agree did not."""


def apply_analytic(b: Multiplier, f: AnalyticCoeffs, N: Optional[int] = None) -> AnalyticCoeffs:
    """``T_b f = b f``."""
    return b.mul(f, N)


def apply_coanalytic(b: Multiplier, f: AnalyticCoeffs, N: Optional[int] = None) -> AnalyticCoeffs:
    """``T_{conj b} f = P_+(conj(b) f)``."""
    return b.conj_mul(f, N)


def apply_P(b: Multiplier, f: AnalyticCoeffs, N: Optional[int] = None) -> AnalyticCoeffs:
    return b.mul(b.conj_mul(f, N), N)


def apply_Q(b: Multiplier, f: AnalyticCoeffs, N: Optional[int] = None) -> AnalyticCoeffs:
    """``Q_b f = f - b T_{conj b} f``; the model-space projection when ``b`` is inner."""
    return f - apply_P(b, f, N)


def shift(f: AnalyticCoeffs) -> AnalyticCoeffs:
    c = np.zeros_like(f.coeffs)
    c[1:] = f.coeffs[:-1]
    return AnalyticCoeffs(c, f.tail_mass + abs(f.coeffs[-1]))


def backward_shift(f: AnalyticCoeffs) -> AnalyticCoeffs:
    c = np.zeros_like(f.coeffs)
    c[:-1] = f.coeffs[1:]
    return AnalyticCoeffs(c, f.tail_mass)


def outer_q_formula(f: AnalyticCoeffs) -> AnalyticCoeffs:
    """Closed form of ``Q_b`` for ``b = (z - 1)/2``: ``(2f + f(0) + S f + Z f) / 4``."""
    c = 2.0 * f.coeffs.copy()
    c[0] += f.coeffs[0]
    s = shift(f)
    z = backward_shift(f)
    return AnalyticCoeffs((c + s.coeffs + z.coeffs) / 4.0, (3 * f.tail_mass + s.tail_mass + z.tail_mass) / 4.0)


def compose_coanalytic(
    b: Multiplier,
    c: Multiplier,
    f: AnalyticCoeffs,
    N: Optional[int] = None,
    check: bool = True,
    tol: float = 1e-12,
) -> AnalyticCoeffs:
    """``T_{conj b} T_{conj c} f``, optionally cross-checked against the product symbol on the grid.

    The check is skipped when the grid cannot hold the product symbol without
    aliasing (Blaschke zeros too close to the circle for the chosen ``N``).
    """
    out = b.conj_mul(c.conj_mul(f, N), N)
    if check:
        try:
            ref = MultiplierProduct([b, c]).conj_mul_grid(f, N)
        except TruncationError:
            return out
        err = float(np.linalg.norm(out.coeffs - ref.coeffs))
        if err > tol * (1.0 + f.norm()):
            raise ConsistencyError(f"T_(conj b) T_(conj c) differs from T_(conj bc) by {err:.3e}")
    return out


@dataclass(frozen=True)
class ToeplitzContext:
    """Fixed ``(M, N)`` pair for repeated applications."""

    M: int = 256
    N: Optional[int] = None

    def __post_init__(self):
        if self.N is None:
            object.__setattr__(self, "N", default_grid(self.M))
        if self.N < 2 * self.M:
            raise TruncationError(f"grid N={self.N} < 2M={2 * self.M}")

    def coerce(self, f: AnalyticCoeffs) -> AnalyticCoeffs:
        return f if f.M == self.M else f.resized(self.M)

    def analytic(self, b, f):
        return apply_analytic(b, self.coerce(f), self.N)

    def coanalytic(self, b, f):
        return apply_coanalytic(b, self.coerce(f), self.N)

    def Q(self, b, f):
        return apply_Q(b, self.coerce(f), self.N)
