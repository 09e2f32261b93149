"""
Acceptance suite: one test per criterion, each at its stated tolerance.

Every test appends a ``criterion k: PASS/FAIL ...`` line that is printed in the
pytest terminal summary.
"""

from pathlib import Path

import numpy as np
import pytest
from scipy.linalg import toeplitz

from conftest import ACCEPTANCE_LINES, random_disc_point, random_poly
from unwinding import (
    AnalyticCoeffs,
    ClassicalUnwinding,
    FixedSequence,
    GeneralSymbol,
    GreedyAFD,
    MultiplierProduct,
    Outer,
    SymbolSequence,
    Taylor,
    WeightedSpace,
    adjoint_apply,
    apply_Q,
    blaschke_factor,
    cauchy_kernel,
    classical_unwinding,
    evaluate,
    expand,
    expand_rkhs,
    finite_blaschke,
    inner,
    mult_matrix,
    operator_norm,
    outer_half_shift,
    outer_q_formula,
    partial_sum,
    tmw_coefficients,
    verify_reconstruction,
)
from unwinding.cli import main as cli_main

SEED = 1729


def report(label, title, ok, detail):
    line = f"criterion {label}: {'PASS' if ok else 'FAIL'}  {title}  [{detail}]"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def random_symbol(rng, kind):
    if kind == "blaschke":
        return blaschke_factor(random_disc_point(rng, 0.9))
    if kind == "finite":
        return finite_blaschke([random_disc_point(rng, 0.9) for _ in range(3)])
    if kind == "outer":
        return outer_half_shift()
    c = rng.normal(size=4) + 1j * rng.normal(size=4)
    s = GeneralSymbol(c, check=False)
    return GeneralSymbol(0.95 * c / s.sup_norm())


SYMBOL_KINDS = ["blaschke", "finite", "outer", "general"]


def test_criterion_01_taylor_reduction():
    rng = np.random.default_rng(SEED)
    worst, exact_zero = 0.0, True
    for _ in range(100):
        deg = int(rng.integers(0, 33))
        f = random_poly(rng, deg, M=256)
        res = expand(f, Taylor(), max_terms=deg + 1, tol=0.0)
        for n, t in enumerate(res.terms):
            c = t.term_fn.coeffs
            others = np.delete(c, n)
            worst = max(worst, abs(c[n] - f.coeffs[n]), float(np.max(np.abs(others))))
        exact_zero &= res.residual_norms[deg + 1] == 0.0
    ok = worst <= 1e-12 and exact_zero
    assert report(1, "Taylor reduction", ok, f"max coeff err {worst:.2e}, residual exactly 0: {exact_zero}")


def _mixed_strategy(rng, n):
    pick = int(rng.integers(0, 6))
    if pick == 0:
        return Taylor()
    if pick == 1:
        return Outer()
    if pick == 2:
        return FixedSequence(tuple(random_disc_point(rng, 0.9) for _ in range(n)))
    if pick == 3:
        return GreedyAFD(radii=8, angles=32, r_max=0.9)
    if pick == 4:
        return ClassicalUnwinding()
    syms = tuple(random_symbol(rng, SYMBOL_KINDS[int(rng.integers(0, 4))]) for _ in range(n))
    return SymbolSequence(syms)


def test_criterion_02_partial_sum_identity():
    rng = np.random.default_rng(SEED + 2)
    worst_ratio = 0.0
    for _ in range(50):
        n = int(rng.integers(1, 21))
        f = random_poly(rng, int(rng.integers(0, 17)), M=256)
        res = expand(f, _mixed_strategy(rng, n), max_terms=n, tol=0.0)
        for N in range(res.n_terms + 1):
            chk = verify_reconstruction(res, f, N, p=2)
            worst_ratio = max(worst_ratio, chk.error / (1e-10 * (1 + N)))
    assert report(2, "finite partial-sum identity", worst_ratio <= 1.0, f"max err / (1e-10 (1+N)) = {worst_ratio:.2e}")


def test_criterion_03_eigenvector_property():
    rng = np.random.default_rng(SEED + 3)
    worst = 0.0
    for i in range(20):
        b = random_symbol(rng, SYMBOL_KINDS[i % 4])
        lam = random_disc_point(rng, 0.7)
        k = cauchy_kernel(lam, 256)
        got = b.conj_mul(k)
        want = np.conj(complex(b(lam))) * k.coeffs
        worst = max(worst, np.linalg.norm(got.coeffs - want) / k.norm())
    assert report(3, "kernel eigenvector", worst <= 1e-9, f"max relative err {worst:.2e}")


def test_criterion_04_projection_formula():
    rng = np.random.default_rng(SEED + 4)
    worst = 0.0
    for _ in range(20):
        lam = random_disc_point(rng, 0.9)
        f = random_poly(rng, int(rng.integers(0, 17)), M=256)
        got = apply_Q(blaschke_factor(lam), f)
        want = (1 - abs(lam) ** 2) * evaluate(f, lam) * cauchy_kernel(lam, 256).coeffs
        worst = max(worst, float(np.max(np.abs(got.coeffs - want))))
    assert report(4, "rank-one projection formula", worst <= 1e-10, f"max err {worst:.2e}")


def test_criterion_05_energy_identity_and_decay():
    rng = np.random.default_rng(SEED + 5)
    worst_gap, worst_rise = 0.0, 0.0
    runs = [FixedSequence(tuple(random_disc_point(rng, 0.9) for _ in range(50))) for _ in range(8)]
    runs.append(GreedyAFD(radii=16, angles=64, r_max=0.9))
    for strat in runs:
        f = random_poly(rng, int(rng.integers(4, 17)), M=256)
        res = expand(f, strat, max_terms=50, tol=0.0)
        norms = np.array(res.residual_norms)
        worst_rise = max(worst_rise, float(np.max(np.diff(norms))))
        for k, t in enumerate(res.terms, start=1):
            worst_gap = max(worst_gap, abs(norms[k - 1] ** 2 - norms[k] ** 2 - t.energy))
    ok = worst_gap <= 1e-10 and worst_rise <= 0.0
    assert report(5, "energy identity and monotone decay", ok, f"max identity gap {worst_gap:.2e}, max rise {worst_rise:.2e}")


def test_criterion_06_toeplitz_commutation():
    rng = np.random.default_rng(SEED + 6)
    worst = 0.0
    for i in range(50):
        b = random_symbol(rng, SYMBOL_KINDS[i % 4])
        c = random_symbol(rng, SYMBOL_KINDS[(i // 4) % 4])
        f = random_poly(rng, int(rng.integers(0, 17)), M=256)
        bc = b.conj_mul(c.conj_mul(f))
        cb = c.conj_mul(b.conj_mul(f))
        prod = MultiplierProduct([b, c]).conj_mul_grid(f, 1 << 13)
        worst = max(worst, np.max(np.abs(bc.coeffs - cb.coeffs)), np.max(np.abs(bc.coeffs - prod.coeffs)))
    assert report(6, "co-analytic Toeplitz commutation", worst <= 1e-12, f"max err {worst:.2e}")


def test_criterion_07_tmw_orthonormality_and_equivalence():
    rng = np.random.default_rng(SEED + 7)
    lams = [random_disc_point(rng, 0.9) for _ in range(12)]
    data = tmw_coefficients(AnalyticCoeffs.from_values([1.0], 512), lams)
    V = np.array([e.coeffs for e in data.basis])
    gram_err = float(np.max(np.abs(V.conj() @ V.T - np.eye(12))))
    sum_err = 0.0
    for _ in range(10):
        f = random_poly(rng, int(rng.integers(0, 17)), M=256)
        pts = tuple(random_disc_point(rng, 0.8) for _ in range(13))
        d = tmw_coefficients(f, pts)
        res = expand(f, FixedSequence(pts), max_terms=12, tol=0.0)
        for N in range(1, 13):
            sum_err = max(sum_err, float(np.max(np.abs(d.partial_sum(N).coeffs - partial_sum(res, N).coeffs))))
    ok = gram_err <= 1e-9 and sum_err <= 1e-9
    assert report(7, "TMW orthonormality and scalar-form equivalence", ok, f"Gram err {gram_err:.2e}, partial-sum err {sum_err:.2e}")


@pytest.fixture(scope="module")
def dyadic_run():
    rng = np.random.default_rng(SEED + 8)
    f = random_poly(rng, 4, M=1 << 17)
    res = expand(f, FixedSequence((), "dyadic"), max_terms=12, tol=0.0)
    return f, res


def test_criterion_08i_residual_norms_settle(dyadic_run):
    f, res = dyadic_run
    B = res.products[12]
    target = B.mul(B.conj_mul(f)).norm()
    norms = np.array(res.residual_norms)
    gap = abs(norms[12] - target)
    step = abs(norms[12] - norms[11])
    ok = gap <= 1e-9 and step < 1e-6
    assert report("8(i)", "dyadic zeros: residual norms settle", ok, f"|r_12| vs model norm {gap:.2e}, successive diff at n=12 {step:.2e}")


def test_criterion_08ii_model_orthogonality(dyadic_run):
    f, res = dyadic_run
    m = res.model_term
    err = abs(inner(f - m, m))
    assert report("8(ii)", "dyadic zeros: model term orthogonality", err <= 1e-9, f"|<f - m, m>| {err:.2e}")


def test_criterion_08iii_reconstruction_with_model(dyadic_run):
    f, res = dyadic_run
    err = (f - partial_sum(res) - res.model_term).norm()
    assert report("8(iii)", "dyadic zeros: reconstruction with model term", err <= 1e-8, f"err {err:.2e}")


def _dense_reference_residuals(f_coeffs, lam, steps, M=1024):
    # independent route: explicit Toeplitz matrix of the Blaschke symbol
    c = np.empty(M, complex)
    c[0] = lam
    c[1:] = -(1 - abs(lam) ** 2) * np.conj(lam) ** np.arange(M - 1)
    A_adj = toeplitz(c, np.zeros(M)).conj().T
    r = np.zeros(M, complex)
    r[: f_coeffs.size] = f_coeffs
    norms = [np.linalg.norm(r)]
    for _ in range(steps):
        r = A_adj @ r
        norms.append(np.linalg.norm(r))
    return np.array(norms)


def test_criterion_09_vanishing_decay():
    rng = np.random.default_rng(SEED + 9)
    worst_match, worst_final = 0.0, 0.0
    for _ in range(5):
        f = random_poly(rng, int(rng.integers(0, 9)), M=256)
        res = expand(f, FixedSequence((0.3,), "repeat_last"), max_terms=50, tol=0.0)
        ref = _dense_reference_residuals(f.trimmed(), 0.3, 50)
        worst_match = max(worst_match, float(np.max(np.abs(np.array(res.residual_norms) - ref))))
        worst_final = max(worst_final, res.residual_norms[50])
    ok = worst_final < 1e-6 and worst_match <= 1e-8
    assert report(9, "vanishing-regime decay", ok, f"max |r_50| {worst_final:.2e}, max per-step diff vs M=1024 reference {worst_match:.2e}")


def test_criterion_10_outer_formula():
    rng = np.random.default_rng(SEED + 10)
    b = outer_half_shift()
    worst = 0.0
    for _ in range(50):
        f = random_poly(rng, int(rng.integers(0, 33)), M=256)
        worst = max(worst, float(np.max(np.abs(outer_q_formula(f).coeffs - apply_Q(b, f).coeffs))))
    z = AnalyticCoeffs.from_values([0, 1], 256)
    q = apply_Q(b, z)
    idem = float(np.linalg.norm(apply_Q(b, q).coeffs - q.coeffs))
    ok = worst <= 1e-12 and idem > 1e-3
    assert report(10, "outer-function formula", ok, f"max err {worst:.2e}, idempotence deviation on z {idem:.3f}")


def test_criterion_11_classical_unwinding():
    s1 = classical_unwinding(AnalyticCoeffs.from_values([0, 1, 1], 64))
    s2 = classical_unwinding(AnalyticCoeffs.from_values([0, 0, 1], 64))
    hand_ok = (
        np.allclose(s1.constants, [0, -1, 1], atol=1e-12)
        and s1.degrees == [1, 1]
        and np.allclose(s2.constants, [0, 1], atol=1e-12)
        and s2.degrees == [2]
    )
    rng = np.random.default_rng(SEED + 11)
    worst = 0.0
    for _ in range(20):
        f = random_poly(rng, int(rng.integers(1, 17)), M=64)
        s = classical_unwinding(f)
        worst = max(worst, float(np.linalg.norm(s.partial_sum(64).coeffs - f.coeffs)))
    ok = hand_ok and worst <= 1e-9
    assert report(11, "classical unwinding", ok, f"hand values {'match' if hand_ok else 'differ'}, max deflation err {worst:.2e}")


def test_criterion_12_weighted_rkhs():
    rng = np.random.default_rng(SEED + 12)
    M = 64
    adj_err, ps_err = 0.0, 0.0
    for name in ("hardy", "bergman", "dirichlet"):
        sp = WeightedSpace.named(name, M)
        for _ in range(5):
            A = mult_matrix(rng.normal(size=4) + 1j * rng.normal(size=4), sp)
            f = rng.normal(size=M) + 1j * rng.normal(size=M)
            g = rng.normal(size=M) + 1j * rng.normal(size=M)
            lhs = sp.inner(A.apply(f), g)
            adj_err = max(adj_err, abs(lhs - sp.inner(f, adjoint_apply(A, sp, g))) / (1 + abs(lhs)))

            phis = []
            for _ in range(4):
                c = rng.normal(size=3) + 1j * rng.normal(size=3)
                phis.append(0.9 * c / operator_norm(mult_matrix(c, sp), sp))
            fp = random_poly(rng, 8, M=M)
            res = expand_rkhs(fp, phis, sp)
            for N in range(len(phis) + 1):
                ps_err = max(ps_err, res.reconstruction_error(N))

    M = 128
    f = random_poly(rng, 10, M=M)
    hardy = WeightedSpace.hardy(M)
    phis = []
    for _ in range(4):
        c = rng.normal(size=3) + 1j * rng.normal(size=3)
        phis.append(0.9 * c / operator_norm(mult_matrix(c, hardy), hardy))
    rk = expand_rkhs(f, phis, hardy)
    eng = expand(f, SymbolSequence(tuple(GeneralSymbol(p) for p in phis)), max_terms=4, tol=0.0)
    path_err = max(float(np.max(np.abs(a.coeffs - b.term_fn.coeffs))) for a, b in zip(rk.terms, eng.terms))
    ok = adj_err <= 1e-11 and ps_err <= 1e-10 and path_err <= 1e-10
    assert report(12, "weighted RKHS expansion", ok, f"adjoint {adj_err:.2e}, partial sums {ps_err:.2e}, Hardy vs Toeplitz {path_err:.2e}")


def test_criterion_13_cli_golden(tmp_path):
    golden = Path(__file__).parent / "golden"
    jobs = sorted(golden.glob("*.job.json"))
    matches = []
    for job in jobs:
        stem = job.name[: -len(".job.json")]
        expected = next(golden.glob(f"{stem}.expected.*"))
        out = tmp_path / expected.name
        code = cli_main(["expand", "--input", str(job), "--out", str(out)])
        matches.append(code == 0 and out.read_bytes() == expected.read_bytes())
    ok = len(jobs) == 3 and all(matches)
    assert report(13, "CLI golden files", ok, f"{sum(matches)}/{len(jobs)} byte-identical")
