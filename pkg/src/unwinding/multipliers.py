"""
Symbols in the closed unit ball of H^infinity and their running products.

Every multiplier knows how to evaluate itself inside the closed disc, how to
produce boundary samples, and how to act on truncated coefficient vectors in
two ways: ``mul`` (multiplication, i.e. the analytic Toeplitz operator) and
``conj_mul`` (the co-analytic Toeplitz operator ``f -> P_+(conj(b) f)``).

Polynomial symbols act through the boundary grid (multiply samples, mask the
spectrum).  Blaschke factors use exact recurrences in coefficient space: their
spectra decay like ``|lam|^k``, and for ``|lam|`` near one no affordable grid
avoids aliasing.  Multiplication by ``b_lam`` is a causal first-order filter, so
the leading ``M`` coefficients of a product are exact regardless of truncation.
"""

from __future__ import annotations

import enum
from typing import Iterable, Optional, Sequence

import numpy as np
from scipy.signal import lfilter

from .errors import ContractionError, DomainError, TruncationError
from .hardy import (
    AnalyticCoeffs,
    check_disc_point,
    circle_grid,
    default_grid,
    next_pow2,
    to_boundary,
)

UNIT_BALL_TOL = 1e-10


class Dichotomy(str, enum.Enum):
    VANISHING = "vanishing"
    LIMIT = "limit"
    INDETERMINATE = "indeterminate"


class Multiplier:
    """Base class.  Subclasses set ``kind`` and override the actions they can do exactly."""

    kind = "abstract"
    is_inner = False
    #: polynomial degree, ``None`` for rational symbols
    degree: Optional[int] = None

    def __init__(self):
        self._sample_cache = {}

    def __call__(self, z):
        raise NotImplementedError

    def samples(self, N: int) -> np.ndarray:
        """Boundary values on the ``N``-grid (cached, read-only)."""
        s = self._sample_cache.get(N)
        if s is None:
            s = np.asarray(self(circle_grid(N)), dtype=complex)
            s.setflags(write=False)
            self._sample_cache[N] = s
        return s

    def symbol_coeffs(self, M: int) -> np.ndarray:
        """First ``M`` Taylor coefficients of the symbol."""
        N = next_pow2(max(4 * M, 1024))
        return np.fft.fft(self.samples(N))[:M] / N

    def alias_bound(self, N: int, M: int) -> float:
        """Bound on grid aliasing when acting on order-``M`` data with an ``N``-grid."""
        if self.degree is not None:
            return 0.0 if self.degree <= N - M else np.inf
        return np.inf

    # grid route -----------------------------------------------------------

    def _grid_apply(self, f: AnalyticCoeffs, N: Optional[int], conjugate: bool) -> AnalyticCoeffs:
        M = f.M
        if N is None:
            extra = self.degree if self.degree is not None else 3 * M
            N = max(default_grid(M), next_pow2(M + extra))
        bound = self.alias_bound(N, M)
        if bound > 1e-13:
            raise TruncationError(
                f"grid N={N} lacks headroom for a {self.kind} symbol acting on order {M}",
                tail_mass=bound,
            )
        s = self.samples(N)
        fv = to_boundary(f, N).values
        spectrum = np.fft.fft((np.conj(s) if conjugate else s) * fv) / N
        tail = f.tail_mass
        if not conjugate:
            tail += float(np.linalg.norm(spectrum[M:]))
        return AnalyticCoeffs(spectrum[:M], tail)

    def mul(self, f: AnalyticCoeffs, N: Optional[int] = None) -> AnalyticCoeffs:
        """Truncated coefficients of ``b f``."""
        return self._grid_apply(f, N, conjugate=False)

    def conj_mul(self, f: AnalyticCoeffs, N: Optional[int] = None) -> AnalyticCoeffs:
        """Coefficients of ``P_+(conj(b) f)``."""
        return self._grid_apply(f, N, conjugate=True)

    def mul_grid(self, f, N=None):
        return Multiplier._grid_apply(self, f, N, conjugate=False)

    def conj_mul_grid(self, f, N=None):
        return Multiplier._grid_apply(self, f, N, conjugate=True)


class Monomial(Multiplier):
    """``b(z) = z``: the forward shift and, conjugated, the backward shift."""

    kind = "monomial"
    is_inner = True
    degree = 1

    def __call__(self, z):
        return np.asarray(z, dtype=complex) + 0j

    def mul(self, f, N=None):
        c = np.zeros_like(f.coeffs)
        c[1:] = f.coeffs[:-1]
        return AnalyticCoeffs(c, f.tail_mass + abs(f.coeffs[-1]))

    def conj_mul(self, f, N=None):
        c = np.zeros_like(f.coeffs)
        c[:-1] = f.coeffs[1:]
        return AnalyticCoeffs(c, f.tail_mass)

    def __repr__(self):
        return "Monomial()"


def _blaschke_mul(lam: complex, c: np.ndarray):
    # (lam - z) * c / (1 - conj(lam) z), truncated; returns (coeffs, tail norm)
    h = lfilter([1.0], [1.0, -np.conj(lam)], c)
    y = lam * h
    y[1:] -= h[:-1]
    tail = np.sqrt(1.0 - abs(lam) ** 2) * abs(h[-1])
    return y, tail


def _blaschke_conj_mul(lam: complex, c: np.ndarray):
    # (T_{conj b} c)_j = conj(lam) c_j - (1 - |lam|^2) sum_{i>j} lam^{i-j-1} c_i
    t = lfilter([1.0], [1.0, -lam], c[::-1])
    s = np.zeros_like(c)
    s[:-1] = t[:-1][::-1]
    return np.conj(lam) * c - (1.0 - abs(lam) ** 2) * s


class BlaschkeProduct(Multiplier):
    """``unit * prod_k (lam_k - z) / (1 - conj(lam_k) z)``; empty product is the constant ``unit``."""

    is_inner = True

    def __init__(self, zeros: Sequence = (), unit: complex = 1.0):
        super().__init__()
        self.zeros = tuple(check_disc_point(z) for z in zeros)
        unit = complex(unit)
        if abs(abs(unit) - 1.0) > 1e-12:
            raise DomainError(f"unit {unit} is not unimodular")
        self.unit = unit
        self.degree = 0 if not self.zeros else None

    @property
    def kind(self):
        if not self.zeros:
            return "constant"
        return "blaschke_factor" if len(self.zeros) == 1 else "finite_blaschke"

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.full(z.shape, self.unit, dtype=complex)
        for lam in self.zeros:
            out = out * ((lam - z) / (1.0 - np.conj(lam) * z))
        return out

    def alias_bound(self, N, M):
        if not self.zeros:
            return 0.0
        r = max(abs(z) for z in self.zeros)
        if r == 0.0:
            return 0.0 if len(self.zeros) <= N - M else np.inf
        gap = N - M - len(self.zeros)
        if gap <= 0:
            return np.inf
        return len(self.zeros) * r ** gap / (1.0 - r)

    def mul(self, f, N=None):
        c = f.coeffs.copy()
        tail = f.tail_mass
        for lam in self.zeros:
            c, t = _blaschke_mul(lam, c)
            tail += t
        return AnalyticCoeffs(self.unit * c, tail)

    def conj_mul(self, f, N=None):
        c = f.coeffs.copy()
        for lam in self.zeros:
            c = _blaschke_conj_mul(lam, c)
        return AnalyticCoeffs(np.conj(self.unit) * c, f.tail_mass)

    def __repr__(self):
        zs = ", ".join(f"{z:.4g}" for z in self.zeros)
        return f"BlaschkeProduct([{zs}], unit={self.unit:.4g})"


class GeneralSymbol(Multiplier):
    """A polynomial symbol, validated on the boundary grid to lie in the closed unit ball."""

    kind = "general"

    def __init__(self, coeffs, check: bool = True):
        super().__init__()
        if isinstance(coeffs, AnalyticCoeffs):
            coeffs = coeffs.coeffs
        c = np.array(coeffs, dtype=complex).reshape(-1)
        nz = np.nonzero(c)[0]
        c = c[: nz[-1] + 1] if nz.size else c[:1]
        c.setflags(write=False)
        self.coeffs = c
        self.degree = c.size - 1
        if check:
            sup = self.sup_norm()
            if sup > 1.0 + UNIT_BALL_TOL:
                raise ContractionError(f"symbol has sup norm {sup:.12g} > 1 on the circle")

    def sup_norm(self, N: Optional[int] = None) -> float:
        """Largest boundary modulus on the validation grid."""
        if N is None:
            N = max(1024, next_pow2(8 * (self.degree + 1)))
        return float(np.max(np.abs(self.samples(N))))

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        acc = np.zeros_like(z)
        for a in self.coeffs[::-1]:
            acc = acc * z + a
        return acc

    def symbol_coeffs(self, M):
        out = np.zeros(M, dtype=complex)
        n = min(M, self.coeffs.size)
        out[:n] = self.coeffs[:n]
        return out

    def __repr__(self):
        return f"GeneralSymbol({np.array2string(self.coeffs, precision=4)})"


class OuterHalfShift(GeneralSymbol):
    """The outer function ``(z - 1) / 2``."""

    kind = "outer_half_shift"

    def __init__(self):
        super().__init__([-0.5, 0.5], check=False)

    def __repr__(self):
        return "OuterHalfShift()"


class MultiplierProduct(Multiplier):
    """Running product ``B_n = b_1 ... b_n``; ``extend`` returns a new product."""

    def __init__(self, factors: Sequence[Multiplier] = ()):
        super().__init__()
        self.factors = tuple(factors)
        self.is_inner = all(b.is_inner for b in self.factors)
        degs = [b.degree for b in self.factors]
        self.degree = sum(degs) if all(d is not None for d in degs) else None
        self._parent = None

    kind = "product"

    @property
    def n(self) -> int:
        return len(self.factors)

    def extend(self, b: Multiplier) -> "MultiplierProduct":
        out = MultiplierProduct(self.factors + (b,))
        out._parent = self
        return out

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.ones(z.shape, dtype=complex)
        for b in self.factors:
            out = out * b(z)
        return out

    def samples(self, N):
        s = self._sample_cache.get(N)
        if s is None:
            if self._parent is not None and self.factors:
                s = self._parent.samples(N) * self.factors[-1].samples(N)
            else:
                s = np.asarray(self(circle_grid(N)), dtype=complex)
            s.setflags(write=False)
            self._sample_cache[N] = s
        return s

    def alias_bound(self, N, M):
        if self.degree is not None:
            return 0.0 if self.degree <= N - M else np.inf
        return float(sum(b.alias_bound(N, M) for b in self.factors))

    def mul(self, f, N=None):
        for b in self.factors:
            f = b.mul(f, N)
        return f

    def conj_mul(self, f, N=None):
        for b in self.factors:
            f = b.conj_mul(f, N)
        return f

    @property
    def zeros(self):
        """Zeros when every factor is Blaschke-type (monomials count as zeros at 0)."""
        out = []
        for b in self.factors:
            if isinstance(b, BlaschkeProduct):
                out.extend(b.zeros)
            elif isinstance(b, Monomial):
                out.append(0j)
            else:
                return None
        return out

    def __repr__(self):
        return f"MultiplierProduct(n={self.n})"


def blaschke_factor(lam) -> BlaschkeProduct:
    """``b_lam(z) = (lam - z) / (1 - conj(lam) z)``."""
    return BlaschkeProduct([lam])


def finite_blaschke(lams: Iterable) -> BlaschkeProduct:
    return BlaschkeProduct(list(lams))


def outer_half_shift() -> OuterHalfShift:
    return OuterHalfShift()


def extend_product(P: MultiplierProduct, b: Multiplier) -> MultiplierProduct:
    return P.extend(b)


def scale_unimodular(b: Multiplier, c: complex) -> Multiplier:
    """``c * b`` for a unimodular constant ``c``."""
    c = complex(c)
    if abs(abs(c) - 1.0) > 1e-12:
        raise DomainError(f"{c} is not unimodular")
    if isinstance(b, BlaschkeProduct):
        return BlaschkeProduct(b.zeros, b.unit * c)
    if isinstance(b, Monomial):
        return GeneralSymbol([0.0, c], check=False)
    if isinstance(b, GeneralSymbol):
        return GeneralSymbol(c * b.coeffs, check=False)
    if isinstance(b, MultiplierProduct):
        return MultiplierProduct((BlaschkeProduct((), c),) + b.factors)
    raise DomainError(f"cannot scale {b!r}")


def normalizing_unit(lams: Iterable) -> complex:
    """``prod |lam| / lam`` over the nonzero points (the convergence factors of infinite products)."""
    u = 1.0 + 0j
    for lam in lams:
        lam = complex(lam)
        if lam != 0:
            u *= abs(lam) / lam
    return u


# tail rules -----------------------------------------------------------------

def _repeat_last(n, prefix):
    if not prefix:
        raise DomainError("tail rule 'repeat_last' needs a nonempty prefix")
    return prefix[-1]


def _dyadic(n, prefix):
    return 1.0 - 2.0 ** (-n)


def _zero(n, prefix):
    return 0.0


#: name -> (lambda generator for 1-based index n, Blaschke-summable?)
TAIL_RULES = {
    "repeat_last": (_repeat_last, False),
    "dyadic": (_dyadic, True),
    "zero": (_zero, False),
}

PROBES = np.array([0.0, 0.5, -0.5, 0.5j, -0.5j], dtype=complex)
VANISH_LEVEL = 1e-8
LIMIT_WINDOW = 16
LIMIT_STALL = 1e-12
LIMIT_FLOOR = 1e-6


def probe_dichotomy(stream: Iterable[Multiplier], max_steps: int = 256) -> Dichotomy:
    """Numeric fallback: watch ``max |B_n|`` on a few interior probes.

    Vanishing once the maximum drops below ``VANISH_LEVEL``; Limit once the probe
    values stall (change below ``LIMIT_STALL`` over ``LIMIT_WINDOW`` steps) while
    staying above ``LIMIT_FLOOR``; otherwise Indeterminate.
    """
    vals = np.ones(PROBES.size, dtype=complex)
    history = [vals]
    for n, b in enumerate(stream, start=1):
        vals = vals * b(PROBES)
        history.append(vals)
        m = float(np.max(np.abs(vals)))
        if m <= VANISH_LEVEL:
            return Dichotomy.VANISHING
        if (
            n >= 2 * LIMIT_WINDOW
            and m >= LIMIT_FLOOR
            and np.max(np.abs(vals - history[-1 - LIMIT_WINDOW])) <= LIMIT_STALL
        ):
            return Dichotomy.LIMIT
        if n >= max_steps:
            break
    return Dichotomy.INDETERMINATE


def classify_tail(lams=None, tail: Optional[str] = None, stream=None, max_steps: int = 256) -> Dichotomy:
    """Decide whether ``B_n -> 0`` pointwise or converges to a nonzero product.

    With a lambda prefix and a declared tail rule the Blaschke condition decides
    analytically.  A ``stream`` of multipliers goes through the numeric probe.
    """
    if stream is not None:
        return probe_dichotomy(stream, max_steps)
    if tail is None:
        return Dichotomy.INDETERMINATE
    if tail not in TAIL_RULES:
        raise DomainError(f"unknown tail rule {tail!r}")
    if tail == "repeat_last" and not lams:
        raise DomainError("tail rule 'repeat_last' needs a nonempty prefix")
    summable = TAIL_RULES[tail][1]
    return Dichotomy.LIMIT if summable else Dichotomy.VANISHING
