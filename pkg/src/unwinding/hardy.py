"""
Finite representations of analytic functions on the unit disc.

A function is held as its first ``M`` Taylor coefficients (``AnalyticCoeffs``)
or as samples on the ``N``-th roots of unity (``BoundarySamples``).  With a
uniform grid the Riesz projection is a frequency mask applied to the DFT, so
both directions of the conversion are exact for polynomials as long as the
grid has headroom (``N >= 2 M``).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np

from .errors import DomainError, TruncationError

DEFAULT_M = 256
DEFAULT_N = 1024
# points closer than this to the circle are rejected
DISC_MARGIN = 1e-12


def _is_pow2(n: int) -> bool:
    return n > 0 and (n & (n - 1)) == 0


def next_pow2(n: int) -> int:
    return 1 << max(0, int(n - 1).bit_length())


def default_grid(M: int) -> int:
    """Grid size used when the caller does not pick one: at least ``2 M``."""
    return max(DEFAULT_N, next_pow2(2 * M))


def check_disc_point(z) -> complex:
    """Validate a point of the open disc and return it as a Python complex."""
    z = complex(z)
    if not np.isfinite(z) or abs(z) >= 1.0 - DISC_MARGIN:
        raise DomainError(f"point {z} is not inside the unit disc (margin {DISC_MARGIN})")
    return z


@dataclass(frozen=True, eq=False)
class AnalyticCoeffs:
    """Truncated Taylor coefficients ``c_0 .. c_{M-1}``.

    ``tail_mass`` bounds the H^2 norm of whatever was discarded when the
    represented function was truncated to order ``M``; it is zero for a genuine
    polynomial of degree below ``M``.
    """

    coeffs: np.ndarray
    tail_mass: float = 0.0

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex).reshape(-1)
        if c.size == 0:
            raise DomainError("AnalyticCoeffs needs at least one coefficient")
        if not np.all(np.isfinite(c)):
            raise DomainError("coefficients must be finite")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)
        object.__setattr__(self, "tail_mass", float(self.tail_mass))

    @classmethod
    def from_values(cls, values: Iterable, M: Optional[int] = None, tail_mass: float = 0.0):
        """Build from a coefficient list, zero-padding (or truncating) to order ``M``."""
        c = np.asarray(list(values) if not isinstance(values, np.ndarray) else values, dtype=complex)
        if M is None:
            M = max(1, c.size)
        out = np.zeros(M, dtype=complex)
        n = min(M, c.size)
        out[:n] = c[:n]
        dropped = float(np.linalg.norm(c[n:])) if c.size > n else 0.0
        return cls(out, tail_mass + dropped)

    @classmethod
    def zeros(cls, M: int):
        return cls(np.zeros(M, dtype=complex))

    @property
    def truncation_order(self) -> int:
        return self.coeffs.size

    M = truncation_order

    @property
    def is_polynomial(self) -> bool:
        return self.tail_mass == 0.0

    def degree(self, atol: float = 0.0) -> int:
        """Index of the last coefficient with modulus above ``atol`` (-1 for zero)."""
        nz = np.nonzero(np.abs(self.coeffs) > atol)[0]
        return int(nz[-1]) if nz.size else -1

    def resized(self, M: int) -> "AnalyticCoeffs":
        return AnalyticCoeffs.from_values(self.coeffs, M, self.tail_mass)

    def norm(self) -> float:
        """Parseval H^2 norm of the stored coefficients."""
        return float(np.linalg.norm(self.coeffs))

    def trimmed(self, atol: float = 0.0) -> np.ndarray:
        return self.coeffs[: self.degree(atol) + 1]

    def _coerce(self, other):
        if not isinstance(other, AnalyticCoeffs):
            return NotImplemented
        if other.M != self.M:
            raise DomainError(f"truncation orders differ: {self.M} vs {other.M}")
        return other

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return AnalyticCoeffs(self.coeffs + other.coeffs, self.tail_mass + other.tail_mass)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return AnalyticCoeffs(self.coeffs - other.coeffs, self.tail_mass + other.tail_mass)

    def __neg__(self):
        return AnalyticCoeffs(-self.coeffs, self.tail_mass)

    def __mul__(self, scalar):
        if not np.isscalar(scalar):
            return NotImplemented
        return AnalyticCoeffs(self.coeffs * scalar, abs(scalar) * self.tail_mass)

    __rmul__ = __mul__

    def __repr__(self):
        head = np.array2string(self.trimmed()[:6], precision=4)
        return f"AnalyticCoeffs(M={self.M}, head={head}, tail_mass={self.tail_mass:.2e})"


@dataclass(frozen=True, eq=False)
class BoundarySamples:
    """Values at ``exp(2 pi i j / N)``, ``j = 0 .. N-1``; ``N`` a power of two."""

    values: np.ndarray
    grid_size: int = field(init=False)

    def __post_init__(self):
        v = np.array(self.values, dtype=complex).reshape(-1)
        if not _is_pow2(v.size):
            raise DomainError(f"grid size {v.size} is not a power of two")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "grid_size", v.size)


def circle_grid(N: int) -> np.ndarray:
    """The ``N``-th roots of unity, in grid order."""
    return np.exp(2j * np.pi * np.arange(N) / N)


def riesz_project(g: BoundarySamples, order: Optional[int] = None) -> AnalyticCoeffs:
    """Keep the nonnegative frequencies of ``g``; return the first ``order`` of them."""
    N = g.grid_size
    if order is None:
        order = N // 2
    if order < 1 or order > N // 2:
        raise TruncationError(f"requested order {order} exceeds capacity N/2 = {N // 2} of the grid")
    spectrum = np.fft.fft(g.values) / N
    return AnalyticCoeffs(spectrum[:order])


def to_boundary(f: AnalyticCoeffs, N: int) -> BoundarySamples:
    """Sample ``sum c_k z^k`` on the ``N``-grid (needs ``N >= 2 M``)."""
    if not _is_pow2(N):
        raise DomainError(f"grid size {N} is not a power of two")
    if N < 2 * f.M:
        raise TruncationError(f"grid N={N} < 2M={2 * f.M}: products would alias")
    padded = np.zeros(N, dtype=complex)
    padded[: f.M] = f.coeffs
    return BoundarySamples(N * np.fft.ifft(padded))


def horner(coeffs: np.ndarray, z):
    """Evaluate a coefficient vector (lowest degree first) at scalar or array ``z``."""
    z = np.asarray(z, dtype=complex)
    acc = np.zeros_like(z)
    for c in coeffs[::-1]:
        acc = acc * z + c
    return acc


def evaluate(f: AnalyticCoeffs, z) -> complex:
    """Value of the truncated series at a point of the open disc."""
    z = check_disc_point(z)
    return complex(horner(f.trimmed(), z))


def inner(f: AnalyticCoeffs, g: AnalyticCoeffs) -> complex:
    """H^2 inner product ``<f, g>`` of the stored coefficients."""
    n = min(f.M, g.M)
    return complex(np.vdot(g.coeffs[:n], f.coeffs[:n]))


def hp_norm(f: AnalyticCoeffs, p: float = 2.0, N: Optional[int] = None) -> float:
    """H^p norm; Parseval for ``p = 2``, trapezoidal quadrature on the grid otherwise."""
    p = float(p)
    if not (1.0 < p < np.inf):
        raise DomainError(f"p={p} must lie in (1, inf)")
    if N is None:
        N = default_grid(f.M)
    if p == 2.0:
        if N < 2 * f.M:
            raise TruncationError(f"grid N={N} < 2M={2 * f.M}")
        return f.norm()
    vals = np.abs(to_boundary(f, N).values)
    return float(np.mean(vals ** p) ** (1.0 / p))


def cauchy_kernel(lam, M: int = DEFAULT_M) -> AnalyticCoeffs:
    """Truncated Szego kernel ``k_lam(z) = 1 / (1 - conj(lam) z)``."""
    lam = check_disc_point(lam)
    c = np.conj(lam) ** np.arange(M)
    r = abs(lam)
    tail = r ** M / np.sqrt(1.0 - r * r) if r > 0 else 0.0
    return AnalyticCoeffs(c, tail)
