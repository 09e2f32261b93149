"""
Multiplier-sequence providers.

A strategy is described by a small frozen config (``Taylor``, ``FixedSequence``,
``GreedyAFD``, ``ClassicalUnwinding``, ``Outer``, ``SymbolSequence``).
``make_provider`` turns it into a single-use iterator that hands the expansion
engine one multiplier per step, possibly looking at the current residual.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import List, Optional, Tuple, Union

import numpy as np

from .errors import DeflationError, DegenerateRemainder, DomainError, StrategyExhausted
from .hardy import AnalyticCoeffs, check_disc_point, horner
from .multipliers import (
    TAIL_RULES,
    BlaschkeProduct,
    Dichotomy,
    Monomial,
    Multiplier,
    MultiplierProduct,
    OuterHalfShift,
    blaschke_factor,
    classify_tail,
    finite_blaschke,
    probe_dichotomy,
)

ROOT_MERGE = 1e-7


@dataclass(frozen=True)
class Taylor:
    kind = "taylor"


@dataclass(frozen=True)
class Outer:
    kind = "outer"


@dataclass(frozen=True)
class FixedSequence:
    lams: Tuple[complex, ...] = ()
    tail: Optional[str] = None
    kind = "fixed"

    def __post_init__(self):
        object.__setattr__(self, "lams", tuple(check_disc_point(z) for z in self.lams))
        if self.tail is not None and self.tail not in TAIL_RULES:
            raise DomainError(f"unknown tail rule {self.tail!r}; expected one of {sorted(TAIL_RULES)}")
        if self.tail == "repeat_last" and not self.lams:
            raise DomainError("tail rule 'repeat_last' needs a nonempty prefix")

    def lam(self, n: int) -> complex:
        """The 1-based ``n``-th point of the sequence."""
        if n <= len(self.lams):
            return self.lams[n - 1]
        if self.tail is None:
            raise StrategyExhausted(f"sequence of {len(self.lams)} points exhausted at step {n}")
        return check_disc_point(TAIL_RULES[self.tail][0](n, self.lams))


@dataclass(frozen=True)
class GreedyAFD:
    radii: int = 32
    angles: int = 256
    r_max: float = 0.95
    kind = "greedy"

    def __post_init__(self):
        if self.radii < 1 or self.angles < 1:
            raise DomainError("greedy grid needs at least one radius and one angle")
        if not (0.0 <= self.r_max <= 0.99):
            raise DomainError(f"r_max={self.r_max} must lie in [0, 0.99]")

    def grid(self) -> np.ndarray:
        """Search points in radius-major order (ties resolve to the first entry)."""
        r = np.linspace(0.0, self.r_max, self.radii)
        theta = 2 * np.pi * np.arange(self.angles) / self.angles
        return (r[:, None] * np.exp(1j * theta)[None, :]).reshape(-1)


@dataclass(frozen=True)
class ClassicalUnwinding:
    eps_root: float = 1e-6
    max_degree: int = 512
    kind = "classical"

    def __post_init__(self):
        if not (0.0 < self.eps_root < 0.1):
            raise DomainError(f"eps_root={self.eps_root} must lie in (0, 0.1)")


@dataclass(frozen=True)
class SymbolSequence:
    """Explicit multipliers, optionally repeating the last one forever."""

    symbols: Tuple[Multiplier, ...] = ()
    repeat_last: bool = False
    kind = "symbols"

    def __post_init__(self):
        object.__setattr__(self, "symbols", tuple(self.symbols))
        if self.repeat_last and not self.symbols:
            raise DomainError("repeat_last needs at least one symbol")


StrategyConfig = Union[Taylor, Outer, FixedSequence, GreedyAFD, ClassicalUnwinding, SymbolSequence]


@dataclass
class Step:
    multiplier: Multiplier
    lam: Optional[complex] = None
    energy: Optional[float] = None


# single-step operations ------------------------------------------------------

def next_taylor() -> Monomial:
    return Monomial()


@dataclass
class FixedState:
    config: FixedSequence
    n: int = 0


def next_fixed(state: FixedState) -> BlaschkeProduct:
    state.n += 1
    return blaschke_factor(state.config.lam(state.n))


@dataclass
class GreedyChoice:
    multiplier: BlaschkeProduct
    lam: complex
    energy: float


def captured_energy(r: AnalyticCoeffs, points: np.ndarray) -> np.ndarray:
    """``(1 - |lam|^2) |r(lam)|^2``: squared TMW coefficient captured by choosing ``lam``."""
    vals = horner(r.trimmed(), points)
    return (1.0 - np.abs(points) ** 2) * np.abs(vals) ** 2


def next_greedy(r_prev: AnalyticCoeffs, params: GreedyAFD = GreedyAFD()) -> GreedyChoice:
    """Pick the grid point capturing the most energy of ``r_prev``."""
    pts = params.grid()
    e = captured_energy(r_prev, pts)
    k = int(np.argmax(e))
    if not e[k] > 1e-15:
        raise DegenerateRemainder("every grid point captures less than 1e-15 energy")
    lam = complex(pts[k])
    return GreedyChoice(blaschke_factor(lam), lam, float(e[k]))


def _cluster(roots: np.ndarray) -> List[complex]:
    # single-linkage groups within ROOT_MERGE, each replaced by its mean
    n = len(roots)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(roots[i] - roots[j]) <= ROOT_MERGE:
                parent[find(i)] = find(j)
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(roots[i])
    out = []
    for g in groups.values():
        m = complex(np.mean(g))
        out.extend([m] * len(g))
    return out


def find_roots(p: AnalyticCoeffs, rel_zero: float = 1e-14) -> List[complex]:
    """All roots of a polynomial, zeros at the origin counted exactly, others via the companion matrix."""
    c = p.coeffs
    scale = float(np.max(np.abs(c))) if c.size else 0.0
    if scale == 0.0:
        raise DomainError("cannot take roots of the zero polynomial")
    big = np.nonzero(np.abs(c) > rel_zero * scale)[0]
    lo, hi = int(big[0]), int(big[-1])
    core = c[lo : hi + 1]
    roots = [0j] * lo
    d = core.size - 1
    if d >= 1:
        comp = np.zeros((d, d), dtype=complex)
        comp[1:, :-1] = np.eye(d - 1)
        comp[:, -1] = -core[:-1] / core[-1]
        roots.extend(_cluster(np.linalg.eigvals(comp)))
    return sorted(roots, key=lambda z: (abs(z), np.angle(z)))


def roots_in_disc(p: AnalyticCoeffs, eps_root: float = 1e-6) -> List[complex]:
    """Roots with ``|z| < 1 - eps_root``, with multiplicity, origin first."""
    if p.degree() <= 0:
        return []
    return [z for z in find_roots(p) if abs(z) < 1.0 - eps_root]


@dataclass
class UnwindingStep:
    blaschke: BlaschkeProduct
    g_next: AnalyticCoeffs
    constant: complex
    excluded: List[complex] = field(default_factory=list)

    @property
    def degree(self) -> int:
        return len(self.blaschke.zeros)


def _is_negligible(h: AnalyticCoeffs, ref: float) -> bool:
    return h.norm() <= 1e-13 * max(1.0, ref)


def classical_unwinding_step(g: AnalyticCoeffs, eps_root: float = 1e-6, max_degree: int = 512) -> UnwindingStep:
    """Split ``g = g(0) + B g_next`` with ``B`` carrying every zero of ``g - g(0)`` in the disc."""
    const = complex(g.coeffs[0])
    hc = g.coeffs.copy()
    hc[0] = 0.0
    h = AnalyticCoeffs(hc, g.tail_mass)
    if _is_negligible(h, g.norm()):
        return UnwindingStep(BlaschkeProduct(()), AnalyticCoeffs.zeros(g.M), const)
    if h.degree() > max_degree:
        raise DomainError(f"degree {h.degree()} exceeds max_degree={max_degree}")
    all_roots = find_roots(h)
    inside = [z for z in all_roots if abs(z) < 1.0 - eps_root]
    excluded = [z for z in all_roots if abs(z) >= 1.0 - eps_root]
    B = finite_blaschke(inside)
    g_next = B.conj_mul(h)
    if g_next.degree(1e-14 * max(1.0, g_next.norm())) >= 1:
        left = [z for z in find_roots(g_next) if abs(z) < 1.0 - eps_root]
        if left:
            raise DeflationError(f"deflated factor still has roots in the disc: {left}")
    return UnwindingStep(B, g_next, const, excluded)


@dataclass
class UnwindingSeries:
    """``f = c_0 + c_1 B_1 + c_2 B_1 B_2 + ...`` from repeated classical steps."""

    constants: List[complex]
    blocks: List[Tuple[complex, ...]]
    excluded: List[complex]
    remainder: AnalyticCoeffs

    @property
    def degrees(self) -> List[int]:
        return [len(b) for b in self.blocks]

    def lambda_sequence(self) -> List[complex]:
        """Concatenated zeros, plus the origin that opens the next block."""
        return [z for b in self.blocks for z in b] + [0j]

    def partial_sum(self, M: int) -> AnalyticCoeffs:
        acc = AnalyticCoeffs.from_values([self.constants[0]], M)
        P = BlaschkeProduct(())
        for c, block in zip(self.constants[1:], self.blocks):
            P = BlaschkeProduct(P.zeros + tuple(block))
            acc = acc + c * P.mul(AnalyticCoeffs.from_values([1.0], M))
        return acc


def classical_unwinding(f: AnalyticCoeffs, eps_root: float = 1e-6, max_steps: int = 64, max_degree: int = 512) -> UnwindingSeries:
    constants, blocks, excluded = [], [], []
    g = f
    for _ in range(max_steps):
        step = classical_unwinding_step(g, eps_root, max_degree)
        constants.append(step.constant)
        excluded.extend(step.excluded)
        if not step.blaschke.zeros:
            g = AnalyticCoeffs.zeros(f.M)
            break
        blocks.append(step.blaschke.zeros)
        g = step.g_next
    return UnwindingSeries(constants, blocks, excluded, g)


# providers -------------------------------------------------------------------

class Provider:
    def __init__(self, config):
        self.config = config
        self.n = 0

    def next(self, residual: AnalyticCoeffs) -> Step:
        raise NotImplementedError

    def dichotomy(self, realized: MultiplierProduct) -> Dichotomy:
        return Dichotomy.INDETERMINATE


class _TaylorProvider(Provider):
    def next(self, residual):
        self.n += 1
        return Step(next_taylor(), lam=None)

    def dichotomy(self, realized):
        return Dichotomy.VANISHING


class _OuterProvider(Provider):
    def next(self, residual):
        self.n += 1
        return Step(OuterHalfShift())

    def dichotomy(self, realized):
        return classify_tail(stream=itertools.repeat(OuterHalfShift()))


class _FixedProvider(Provider):
    def __init__(self, config):
        super().__init__(config)
        self.state = FixedState(config)

    def next(self, residual):
        b = next_fixed(self.state)
        self.n = self.state.n
        return Step(b, lam=b.zeros[0])

    def dichotomy(self, realized):
        return classify_tail(self.config.lams, self.config.tail)


class _SymbolProvider(Provider):
    def next(self, residual):
        syms = self.config.symbols
        self.n += 1
        if self.n <= len(syms):
            b = syms[self.n - 1]
        elif self.config.repeat_last:
            b = syms[-1]
        else:
            raise StrategyExhausted(f"symbol sequence of length {len(syms)} exhausted at step {self.n}")
        lam = b.zeros[0] if isinstance(b, BlaschkeProduct) and len(b.zeros) == 1 else None
        return Step(b, lam=lam)

    def dichotomy(self, realized):
        if not self.config.repeat_last:
            return Dichotomy.INDETERMINATE
        syms = self.config.symbols
        return classify_tail(stream=itertools.chain(syms, itertools.repeat(syms[-1])))


class _GreedyProvider(Provider):
    def next(self, residual):
        self.n += 1
        ch = next_greedy(residual, self.config)
        return Step(ch.multiplier, lam=ch.lam, energy=ch.energy)

    def dichotomy(self, realized):
        # only the realized prefix is known
        d = probe_dichotomy(realized.factors, max_steps=max(1, realized.n))
        return d if d is Dichotomy.VANISHING else Dichotomy.INDETERMINATE


class _ClassicalProvider(Provider):
    def __init__(self, config):
        super().__init__(config)
        self.queue: List[complex] = []
        self.constants: List[complex] = []
        self.blocks: List[Tuple[complex, ...]] = []

    def next(self, residual):
        self.n += 1
        if not self.queue:
            step = classical_unwinding_step(residual, self.config.eps_root, self.config.max_degree)
            self.constants.append(step.constant)
            self.queue = list(step.blaschke.zeros) or [0j]
            self.blocks.append(tuple(self.queue))
        lam = self.queue.pop(0)
        return Step(blaschke_factor(lam), lam=lam)

    def dichotomy(self, realized):
        # the origin opens every block, so the sequence is never Blaschke-summable
        return Dichotomy.VANISHING


_PROVIDERS = {
    Taylor: _TaylorProvider,
    Outer: _OuterProvider,
    FixedSequence: _FixedProvider,
    SymbolSequence: _SymbolProvider,
    GreedyAFD: _GreedyProvider,
    ClassicalUnwinding: _ClassicalProvider,
}


def make_provider(config: StrategyConfig) -> Provider:
    try:
        return _PROVIDERS[type(config)](config)
    except KeyError:
        raise DomainError(f"unknown strategy {config!r}") from None


def strategy_name(config: StrategyConfig) -> str:
    return config.kind
