"""
The unwinding engine.

Starting from ``r_0 = f`` each step takes a multiplier ``b_n`` from a strategy
and splits the current residual as ``r_{n-1} = Q_{b_n} r_{n-1} + b_n r_n`` with
``r_n = T_{conj b_n} r_{n-1}``.  The emitted term is ``B_{n-1} Q_{b_n} r_{n-1}``,
so that for every ``N``

    f = sum_{n <= N} term_n + B_N r_N

holds exactly in the truncated coefficient space.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from .errors import DomainError, RearrangementError, TruncationError, UnwindingError
from .hardy import AnalyticCoeffs, cauchy_kernel, check_disc_point, default_grid, evaluate, hp_norm
from .multipliers import (
    BlaschkeProduct,
    Dichotomy,
    Multiplier,
    MultiplierProduct,
    blaschke_factor,
    normalizing_unit,
)
from .strategies import StrategyConfig, make_provider, strategy_name


@dataclass(frozen=True)
class ExpansionConfig:
    M: int
    N: int
    p: float = 2.0
    max_terms: int = 50
    tol: float = 1e-10
    strategy: str = "taylor"

    def as_dict(self):
        return {
            "M": self.M,
            "N": self.N,
            "p": self.p,
            "max_terms": self.max_terms,
            "tol": self.tol,
            "strategy": self.strategy,
        }


def reconstruction_tolerance(n_terms: int) -> float:
    return 1e-10 * (1 + n_terms)


@dataclass
class ExpansionTerm:
    n: int
    term_fn: AnalyticCoeffs
    B_prev: MultiplierProduct
    q_output: AnalyticCoeffs
    multiplier: Multiplier
    norm: float
    lam: Optional[complex] = None
    #: TMW Fourier coefficient sqrt(1 - |lam|^2) r_{n-1}(lam), Blaschke steps only
    scalar: Optional[complex] = None

    @property
    def energy(self) -> Optional[float]:
        return None if self.scalar is None else abs(self.scalar) ** 2


@dataclass
class ExpansionResult:
    terms: List[ExpansionTerm]
    residuals: List[AnalyticCoeffs]
    residual_norms: List[float]
    products: List[MultiplierProduct]
    dichotomy: Dichotomy
    config: ExpansionConfig
    model_term: Optional[AnalyticCoeffs] = None

    @property
    def n_terms(self) -> int:
        return len(self.terms)

    @property
    def lambdas(self) -> List[Optional[complex]]:
        return [t.lam for t in self.terms]

    @property
    def tail_mass(self) -> float:
        """Largest truncation tail attached to any term."""
        return max([t.term_fn.tail_mass for t in self.terms], default=0.0)

    def partial_sum(self, N: Optional[int] = None) -> AnalyticCoeffs:
        return partial_sum(self, N)

    def remainder(self, N: Optional[int] = None) -> AnalyticCoeffs:
        """``B_N r_N``."""
        if N is None:
            N = self.n_terms
        _check_range(self, N)
        return self.products[N].mul(self.residuals[N], self.config.N)


def _check_range(result: ExpansionResult, N: int):
    if not (0 <= N <= result.n_terms):
        raise DomainError(f"N={N} outside 0..{result.n_terms}")


def _tag(exc: UnwindingError, n: int):
    exc.term_index = n
    if exc.args:
        exc.args = (f"term {n}: {exc.args[0]}",) + exc.args[1:]
    return exc


def expand(
    f: AnalyticCoeffs,
    strategy: StrategyConfig,
    max_terms: int = 50,
    p: float = 2.0,
    tol: float = 1e-10,
    N: Optional[int] = None,
) -> ExpansionResult:
    """Run the expansion until ``max_terms`` or ``||r_n||_p < tol``."""
    M = f.M
    if N is None:
        N = default_grid(M)
    if N < 2 * M:
        raise TruncationError(f"grid N={N} < 2M={2 * M}")
    if max_terms < 0:
        raise DomainError("max_terms must be nonnegative")
    config = ExpansionConfig(M, N, float(p), max_terms, tol, strategy_name(strategy))
    provider = make_provider(strategy)

    r = f
    B = MultiplierProduct()
    residuals, norms, products, terms = [f], [hp_norm(f, p, N)], [B], []
    for n in range(1, max_terms + 1):
        if norms[-1] < tol:
            break
        try:
            step = provider.next(r)
            b = step.multiplier
            r_next = b.conj_mul(r, N)
            q = r - b.mul(r_next, N)
            g = B.mul(q, N)
        except UnwindingError as exc:
            raise _tag(exc, n)
        scalar = None
        if step.lam is not None:
            scalar = np.sqrt(1.0 - abs(step.lam) ** 2) * evaluate(r, step.lam)
        terms.append(ExpansionTerm(n, g, B, q, b, g.norm(), step.lam, scalar))
        B = B.extend(b)
        r = r_next
        residuals.append(r)
        norms.append(hp_norm(r, p, N))
        products.append(B)

    dichotomy = provider.dichotomy(B)
    model = None
    if dichotomy is Dichotomy.LIMIT:
        zeros = B.zeros
        surrogate = BlaschkeProduct(zeros, normalizing_unit(zeros)) if zeros is not None else B
        model = model_projection(surrogate, f, N)
    return ExpansionResult(terms, residuals, norms, products, dichotomy, config, model)


def partial_sum(result: ExpansionResult, N: Optional[int] = None) -> AnalyticCoeffs:
    """Sum of the first ``N`` terms (all of them by default)."""
    if N is None:
        N = result.n_terms
    _check_range(result, N)
    acc = np.zeros(result.config.M, dtype=complex)
    tail = 0.0
    for t in result.terms[:N]:
        acc += t.term_fn.coeffs
        tail += t.term_fn.tail_mass
    return AnalyticCoeffs(acc, tail)


def model_projection(B: Multiplier, f: AnalyticCoeffs, N: Optional[int] = None) -> AnalyticCoeffs:
    """``B T_{conj B} f``: for inner ``B`` the projection of ``f`` onto ``B H^2``."""
    return B.mul(B.conj_mul(f, N), N)


@dataclass
class ReconstructionCheck:
    error: float
    residual_norm: float
    tol: float
    ok: bool


def verify_reconstruction(result: ExpansionResult, f: AnalyticCoeffs, N: Optional[int] = None, p: Optional[float] = None) -> ReconstructionCheck:
    """``||f - partial_sum(N) - B_N r_N||_p`` and ``||r_N||_p``."""
    if N is None:
        N = result.n_terms
    if p is None:
        p = result.config.p
    grid = result.config.N
    diff = f - partial_sum(result, N) - result.remainder(N)
    err = hp_norm(AnalyticCoeffs(diff.coeffs), p, grid)
    res = hp_norm(AnalyticCoeffs(result.residuals[N].coeffs), p, grid)
    tol = reconstruction_tolerance(N)
    return ReconstructionCheck(err, res, tol, bool(err <= tol))


@dataclass
class TMWData:
    """Scalar-coefficient (rearranged) form of a Blaschke-factor expansion.

    ``scalars[n]`` multiplies ``B_n``; ``fourier[n-1]`` is the coefficient of the
    orthonormal element ``basis[n-1] = sqrt(1 - |lam_n|^2) B_{n-1} k_{lam_n}``.
    """

    lams: List[complex]
    scalars: List[complex]
    fourier: List[complex]
    basis: List[AnalyticCoeffs]
    products: List[AnalyticCoeffs]
    #: r_{n-1}(lam_n) for n = 1..len(lams)
    residual_values: List[complex]

    def scalar_sum(self, count: int) -> AnalyticCoeffs:
        """``sum_{k < count} scalars[k] B_k``."""
        acc = self.products[0] * 0.0
        for k in range(count):
            acc = acc + self.scalars[k] * self.products[k]
        return acc

    def partial_sum(self, N: int) -> AnalyticCoeffs:
        """Rearranged equivalent of the engine's ``partial_sum(N)``.

        The first ``N`` engine terms equal ``sum_{k < N} c_k B_k`` minus the
        boundary piece ``conj(lam_N) r_{N-1}(lam_N) B_N`` that the rearrangement
        has not yet closed.
        """
        if not (1 <= N < len(self.products)):
            raise DomainError(f"N={N} outside 1..{len(self.products) - 1}")
        lam = self.lams[N - 1]
        return self.scalar_sum(N) - (np.conj(lam) * self.residual_values[N - 1]) * self.products[N]

    def orthogonal_sum(self, N: int) -> AnalyticCoeffs:
        acc = self.basis[0] * 0.0
        for a, e in zip(self.fourier[:N], self.basis[:N]):
            acc = acc + a * e
        return acc


def tmw_coefficients(f: AnalyticCoeffs, lams: Sequence, N: Optional[int] = None) -> TMWData:
    """Coefficients ``c_0 = f(lam_1)``, ``c_n = (T_{conj B_n} f)(lam_{n+1}) - conj(lam_n) (T_{conj B_{n-1}} f)(lam_n)``.

    Needs ``N + 1`` points to produce ``c_0 .. c_N``.  Only polynomial ``f`` is
    accepted: the rearranged series is not guaranteed to converge otherwise.
    """
    if not f.is_polynomial:
        raise RearrangementError(
            f"input carries truncation tail {f.tail_mass:.3e}; rearranged scalar form needs a polynomial"
        )
    lams = [check_disc_point(z) for z in lams]
    if N is None:
        N = len(lams) - 1
    if N < 0 or len(lams) < N + 1:
        raise DomainError(f"need {N + 1} points for coefficients c_0..c_{N}, got {len(lams)}")
    lams = lams[: N + 1]
    M = f.M
    one = AnalyticCoeffs.from_values([1.0], M)

    residuals = [f]
    for lam in lams[:-1]:
        residuals.append(blaschke_factor(lam).conj_mul(residuals[-1]))
    vals = [evaluate(residuals[n], lams[n]) for n in range(N + 1)]

    scalars = [vals[0]]
    for n in range(1, N + 1):
        scalars.append(vals[n] - np.conj(lams[n - 1]) * vals[n - 1])

    products = [one]
    for lam in lams[:-1]:
        products.append(blaschke_factor(lam).mul(products[-1]))
    basis, fourier = [], []
    for n, lam in enumerate(lams):
        w = np.sqrt(1.0 - abs(lam) ** 2)
        Bprev = BlaschkeProduct(lams[:n])
        basis.append(w * Bprev.mul(cauchy_kernel(lam, M)))
        fourier.append(w * vals[n])
    return TMWData(lams, scalars, fourier, basis, products, vals)
