"""Run the same multiplier sequence in Hardy, Bergman and Dirichlet weights."""

import numpy as np

from unwinding import WeightedSpace, expand_rkhs, mult_matrix, operator_norm

M = 96
rng = np.random.default_rng(7)
f = np.zeros(M, complex)
f[:6] = rng.normal(size=6) + 1j * rng.normal(size=6)
raw = [rng.normal(size=3) + 1j * rng.normal(size=3) for _ in range(10)]

for name in ("hardy", "bergman", "dirichlet"):
    sp = WeightedSpace.named(name, M)
    # rescale each symbol to norm 0.9 in this space, so it stays a contraction
    phis = [0.9 * c / operator_norm(mult_matrix(c, sp), sp) for c in raw]
    res = expand_rkhs(f, phis, sp)
    norms = ", ".join(f"{x:.3e}" for x in res.residual_norms[::2])
    print(f"{name:10s} residual norms (every 2nd): {norms}")
    print(f"{'':10s} reconstruction error: {res.reconstruction_error():.2e}")
