"""Residual norms and the model term for summable vs non-summable zero sequences."""

import argparse

import numpy as np

from unwinding import AnalyticCoeffs, FixedSequence, expand, inner, partial_sum


def run(f, strategy, terms):
    res = expand(f, strategy, max_terms=terms, tol=0.0)
    print(f"  dichotomy: {res.dichotomy.value}")
    for n, r in enumerate(res.residual_norms):
        step = res.residual_norms[n - 1] - r if n else float("nan")
        print(f"  n={n:2d}  |r_n| = {r:.8f}  decrease {step:.2e}")
    if res.model_term is not None:
        m = res.model_term
        print(f"  |model| = {m.norm():.8f}, |<f - m, m>| = {abs(inner(f - m, m)):.2e}")
        print(f"  reconstruction error with model: {(f - partial_sum(res) - m).norm():.2e}")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--terms", type=int, default=12)
    ap.add_argument("--log2M", type=int, default=17)
    args = ap.parse_args()
    M = 1 << args.log2M
    f = AnalyticCoeffs.from_values(np.array([1.0, 0.5, -0.25j]), M)

    print("zeros 1 - 2^-n (Blaschke condition holds):")
    run(f, FixedSequence((), "dyadic"), args.terms)
    print("zeros fixed at 0.3 (products vanish):")
    run(f, FixedSequence((0.3,), "repeat_last"), args.terms)


if __name__ == "__main__":
    main()
