"""Compare residual decay of the built-in strategies on one input.

    python3 scripts/residual_decay.py --function rational --terms 30
"""

import argparse

import numpy as np

from unwinding import AnalyticCoeffs, ClassicalUnwinding, FixedSequence, GreedyAFD, Outer, Taylor, expand
from unwinding.jobs import rational_coeffs

FUNCTIONS = {
    "shift": lambda M: AnalyticCoeffs.from_values([0, 1], M),
    "cubic": lambda M: AnalyticCoeffs.from_values([1, -0.5, 0.25j, 0.8], M),
    # 1 / ((1 - 0.6 z)(1 + 0.7i z)): two poles outside the disc
    "rational": lambda M: rational_coeffs([1], np.convolve([1, -0.6], [1, 0.7j]).tolist(), M),
}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--function", choices=sorted(FUNCTIONS), default="rational")
    ap.add_argument("--terms", type=int, default=30)
    ap.add_argument("--M", type=int, default=256)
    args = ap.parse_args()

    f = FUNCTIONS[args.function](args.M)
    runs = {
        "taylor": Taylor(),
        "outer": Outer(),
        "fixed 0.3": FixedSequence((0.3,), "repeat_last"),
        "greedy": GreedyAFD(radii=24, angles=128),
        "classical": ClassicalUnwinding(),
    }
    table = {}
    for name, strat in runs.items():
        try:
            res = expand(f, strat, max_terms=args.terms, tol=1e-14)
        except Exception as exc:  # report and keep going with the others
            print(f"{name}: {type(exc).__name__}: {exc}")
            continue
        table[name] = res.residual_norms

    names = list(table)
    print("n    " + "".join(f"{n:>14}" for n in names))
    for n in range(args.terms + 1):
        row = [table[k][n] if n < len(table[k]) else float("nan") for k in names]
        print(f"{n:<5}" + "".join(f"{v:14.3e}" for v in row))


if __name__ == "__main__":
    main()
