"""
Diagonal-weight reproducing kernel spaces on the disc.

The monomials are orthogonal with ``||z^n||^2 = w_n``.  Multiplication by a
polynomial is a lower-triangular Toeplitz matrix in the monomial basis; its
adjoint in the weighted inner product is ``W^{-1} A^H W``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Sequence

import numpy as np
from scipy.linalg import toeplitz

from .errors import ContractionError, DomainError
from .hardy import AnalyticCoeffs, check_disc_point

CONTRACTION_TOL = 1e-8
POWER_ITERATIONS = 64
HEADROOM_RTOL = 1e-15


@dataclass(frozen=True, eq=False)
class WeightedSpace:
    weights: np.ndarray
    name: str = "weighted"

    def __post_init__(self):
        w = np.array(self.weights, dtype=float).reshape(-1)
        if w.size == 0 or np.any(~(w > 0)):
            raise DomainError("weights must be positive")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    @classmethod
    def hardy(cls, M: int):
        return cls(np.ones(M), "hardy")

    @classmethod
    def bergman(cls, M: int):
        return cls(1.0 / np.arange(1, M + 1), "bergman")

    @classmethod
    def dirichlet(cls, M: int):
        return cls(np.arange(1, M + 1, dtype=float), "dirichlet")

    @classmethod
    def named(cls, name: str, M: int):
        try:
            return {"hardy": cls.hardy, "bergman": cls.bergman, "dirichlet": cls.dirichlet}[name](M)
        except KeyError:
            raise DomainError(f"unknown space {name!r}") from None

    @property
    def M(self) -> int:
        return self.weights.size

    def inner(self, f, g) -> complex:
        f, g = _vec(f, self.M), _vec(g, self.M)
        return complex(np.sum(self.weights * f * np.conj(g)))

    def norm(self, f) -> float:
        f = _vec(f, self.M)
        return float(np.sqrt(np.sum(self.weights * np.abs(f) ** 2)))

    def kernel(self, x) -> AnalyticCoeffs:
        """Truncated reproducing kernel ``k_x(z) = sum conj(x)^n z^n / w_n``."""
        x = check_disc_point(x)
        return AnalyticCoeffs(np.conj(x) ** np.arange(self.M) / self.weights)


def _vec(f, M: int) -> np.ndarray:
    c = f.coeffs if isinstance(f, AnalyticCoeffs) else np.asarray(f, dtype=complex)
    if c.size != M:
        raise DomainError(f"vector of length {c.size} does not match space dimension {M}")
    return c


@dataclass(frozen=True, eq=False)
class MultOperatorMatrix:
    matrix: np.ndarray
    symbol: np.ndarray

    @property
    def degree(self) -> int:
        nz = np.nonzero(self.symbol)[0]
        return int(nz[-1]) if nz.size else 0

    def apply(self, f) -> AnalyticCoeffs:
        c = f.coeffs if isinstance(f, AnalyticCoeffs) else np.asarray(f, dtype=complex)
        return AnalyticCoeffs(self.matrix @ c)


def mult_matrix(phi, space: WeightedSpace = None, M: int = None) -> MultOperatorMatrix:
    """Matrix of ``f -> phi f`` truncated to order ``M``: entry ``(i, j) = phi_{i-j}``."""
    c = phi.coeffs if isinstance(phi, AnalyticCoeffs) else np.asarray(phi, dtype=complex).reshape(-1)
    if M is None:
        M = space.M if space is not None else c.size
    if np.any(c[M:] != 0):
        raise DomainError(f"symbol degree {np.nonzero(c)[0][-1]} does not fit order {M}")
    col = np.zeros(M, dtype=complex)
    col[: min(M, c.size)] = c[:M]
    A = toeplitz(col, np.zeros(M, dtype=complex))
    A.setflags(write=False)
    sym = col.copy()
    sym.setflags(write=False)
    return MultOperatorMatrix(A, sym)


def adjoint_apply(A: MultOperatorMatrix, space: WeightedSpace, f) -> AnalyticCoeffs:
    """``M_phi^* f`` in the weighted inner product."""
    w = space.weights
    c = _vec(f, space.M)
    return AnalyticCoeffs((A.matrix.conj().T @ (w * c)) / w)


def operator_norm(A: MultOperatorMatrix, space: WeightedSpace, iterations: int = POWER_ITERATIONS) -> float:
    """Largest singular value of the truncated multiplication operator (power iteration)."""
    s = np.sqrt(space.weights)
    Bw = (s[:, None] * A.matrix) / s[None, :]
    x = np.ones(space.M, dtype=complex) / np.sqrt(space.M)
    sigma2 = 0.0
    for _ in range(iterations):
        y = Bw.conj().T @ (Bw @ x)
        nrm = np.linalg.norm(y)
        if nrm == 0.0:
            return 0.0
        sigma2 = float(np.real(np.vdot(x, y)))
        x = y / nrm
    return float(np.sqrt(max(sigma2, 0.0)))


@dataclass
class RKHSExpansion:
    space: WeightedSpace
    f: AnalyticCoeffs
    #: Phi_{n-1} Q_{phi_n} M^*_{Phi_{n-1}} f
    terms: List[AnalyticCoeffs]
    #: M^*_{Phi_n} f, n = 0..N
    residuals: List[AnalyticCoeffs]
    residual_norms: List[float]
    products: List[MultOperatorMatrix] = field(repr=False)

    @property
    def n_terms(self) -> int:
        return len(self.terms)

    def partial_sum(self, N: int = None) -> AnalyticCoeffs:
        if N is None:
            N = self.n_terms
        acc = np.zeros(self.space.M, dtype=complex)
        for t in self.terms[:N]:
            acc += t.coeffs
        return AnalyticCoeffs(acc)

    def remainder(self, N: int = None) -> AnalyticCoeffs:
        """``Phi_N M^*_{Phi_N} f``."""
        if N is None:
            N = self.n_terms
        return self.products[N].apply(self.residuals[N])

    def reconstruction_error(self, N: int = None) -> float:
        diff = self.f.coeffs - self.partial_sum(N).coeffs - self.remainder(N).coeffs
        return self.space.norm(diff)


def expand_rkhs(f, phis: Sequence, space: WeightedSpace, n_terms: int = None) -> RKHSExpansion:
    """Unwinding expansion with polynomial multipliers in a weighted space.

    Each ``phi_n`` must be a contraction of the space, certified numerically on
    the truncated matrix.
    """
    M = space.M
    f = f if isinstance(f, AnalyticCoeffs) else AnalyticCoeffs.from_values(f, M)
    if f.M != M:
        raise DomainError(f"f has order {f.M}, space has dimension {M}")
    phis = list(phis)
    if n_terms is None:
        n_terms = len(phis)
    if len(phis) < n_terms:
        raise DomainError(f"{n_terms} terms requested but only {len(phis)} multipliers given")
    mats = [mult_matrix(p, space) for p in phis[:n_terms]]
    for k, A in enumerate(mats, start=1):
        nrm = operator_norm(A, space)
        if nrm > 1.0 + CONTRACTION_TOL:
            raise ContractionError(f"multiplier phi_{k} has norm {nrm:.10g} > 1 on the {space.name} space", index=k)
    max_deg = max((A.degree for A in mats), default=0)
    # coefficients below 1e-15 relative carry no mass the products could lose
    deg = f.degree(HEADROOM_RTOL * f.norm())
    if deg >= M - max_deg:
        raise DomainError(f"f of effective degree {deg} leaves no headroom for multipliers of degree {max_deg} at order {M}")

    identity = mult_matrix([1.0], space)
    Phi = identity
    g = f
    terms, residuals, products = [], [f], [identity]
    for A in mats:
        g_next = adjoint_apply(A, space, g)
        q = g.coeffs - A.matrix @ g_next.coeffs
        terms.append(Phi.apply(q))
        prod = A.matrix @ Phi.matrix
        Phi = MultOperatorMatrix(prod, prod[:, 0].copy())
        g = g_next
        residuals.append(g)
        products.append(Phi)
    norms = [space.norm(r) for r in residuals]
    return RKHSExpansion(space, f, terms, residuals, norms, products)
