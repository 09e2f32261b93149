import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import disc_points, random_disc_point, random_poly
from unwinding import (
    AnalyticCoeffs,
    BlaschkeProduct,
    ClassicalUnwinding,
    Dichotomy,
    DomainError,
    FixedSequence,
    GeneralSymbol,
    GreedyAFD,
    Outer,
    RearrangementError,
    StrategyExhausted,
    SymbolSequence,
    Taylor,
    TruncationError,
    blaschke_factor,
    cauchy_kernel,
    evaluate,
    expand,
    inner,
    model_projection,
    partial_sum,
    tmw_coefficients,
    verify_reconstruction,
)


def test_taylor_on_quadratic():
    f = AnalyticCoeffs.from_values([1, 2, 3], 16)
    res = expand(f, Taylor())
    assert res.n_terms == 3
    for n, t in enumerate(res.terms):
        expected = np.zeros(16)
        expected[n] = n + 1
        np.testing.assert_array_equal(t.term_fn.coeffs, expected)
    assert res.residual_norms[-1] == 0.0
    assert res.dichotomy is Dichotomy.VANISHING
    assert res.config.strategy == "taylor"


def test_single_kernel_term_captures_kernel():
    k = cauchy_kernel(0.5, 256)
    res = expand(k, FixedSequence((0.5,)), max_terms=1)
    np.testing.assert_allclose(res.terms[0].term_fn.coeffs, k.coeffs, atol=1e-14)
    assert res.residual_norms[1] < 1e-14


def test_outer_strategy_vanishes():
    f = AnalyticCoeffs.from_values([0, 1], 64)
    res = expand(f, Outer(), max_terms=40)
    norms = np.array(res.residual_norms)
    assert np.all(np.diff(norms) < 0)
    assert res.dichotomy is Dichotomy.VANISHING
    assert verify_reconstruction(res, f).ok


def test_stops_on_tolerance():
    f = AnalyticCoeffs.from_values([1, 1], 16)
    res = expand(f, Taylor(), max_terms=10, tol=1e-3)
    assert res.n_terms == 2


def test_max_terms_zero():
    f = AnalyticCoeffs.from_values([1, 1], 16)
    res = expand(f, Taylor(), max_terms=0)
    assert res.n_terms == 0
    np.testing.assert_array_equal(res.remainder().coeffs, f.coeffs)


def test_engine_errors_carry_term_index():
    f = AnalyticCoeffs.from_values([1, 1], 16)
    with pytest.raises(StrategyExhausted) as exc:
        expand(f, FixedSequence((0.2, 0.3)), max_terms=5)
    assert exc.value.term_index == 3
    assert str(exc.value).startswith("term 3:")
    with pytest.raises(TruncationError):
        expand(f, Taylor(), N=16)
    with pytest.raises(DomainError):
        expand(f, Taylor(), max_terms=-1)


def test_partial_sum_range():
    f = AnalyticCoeffs.from_values([1, 1], 16)
    res = expand(f, Taylor())
    with pytest.raises(DomainError):
        partial_sum(res, 5)


@given(st.lists(disc_points, min_size=1, max_size=8), st.integers(0, 1000))
def test_partial_sum_identity_blaschke(lams, seed):
    f = random_poly(np.random.default_rng(seed), 6, M=128)
    res = expand(f, FixedSequence(tuple(lams)), max_terms=len(lams))
    for N in range(res.n_terms + 1):
        assert verify_reconstruction(res, f, N).ok


@given(st.integers(0, 1000))
def test_energy_identity_and_monotone_decay(seed):
    rng = np.random.default_rng(seed)
    f = random_poly(rng, 5, M=256)
    lams = tuple(random_disc_point(rng, 0.8) for _ in range(10))
    res = expand(f, FixedSequence(lams), max_terms=10)
    norms = np.array(res.residual_norms)
    assert np.all(np.diff(norms) <= 1e-14)
    for k, t in enumerate(res.terms, start=1):
        assert norms[k - 1] ** 2 - norms[k] ** 2 == pytest.approx(t.energy, abs=1e-10)
        # each term has the norm of its captured coefficient
        assert t.norm == pytest.approx(abs(t.scalar), abs=1e-10)


def test_term_shapes_for_blaschke_step():
    # term_n = B_{n-1} (1-|lam|^2) r_{n-1}(lam) k_lam
    f = AnalyticCoeffs.from_values([1, -2, 0.5j], 128)
    lams = (0.3, -0.2 + 0.4j)
    res = expand(f, FixedSequence(lams), max_terms=2)
    r1 = blaschke_factor(lams[0]).conj_mul(f)
    expected = blaschke_factor(lams[0]).mul((1 - abs(lams[1]) ** 2) * evaluate(r1, lams[1]) * cauchy_kernel(lams[1], 128))
    np.testing.assert_allclose(res.terms[1].term_fn.coeffs, expected.coeffs, atol=1e-13)


def test_greedy_expansion_decreases_fast(rng):
    f = random_poly(rng, 4, M=128)
    res = expand(f, GreedyAFD(radii=16, angles=64), max_terms=6)
    taylor = expand(f, Taylor(), max_terms=6)
    assert res.residual_norms[1] <= taylor.residual_norms[1] + 1e-12
    assert verify_reconstruction(res, f).ok
    assert res.dichotomy in (Dichotomy.VANISHING, Dichotomy.INDETERMINATE)


def test_classical_strategy_in_engine_terminates():
    f = AnalyticCoeffs.from_values([0, 1, 1], 64)
    res = expand(f, ClassicalUnwinding(), max_terms=20)
    assert res.residual_norms[-1] < 1e-10
    assert verify_reconstruction(res, f).ok


def test_symbol_sequence_with_general_symbol():
    f = AnalyticCoeffs.from_values([1, 0.5, -0.25], 64)
    s = SymbolSequence((GeneralSymbol([0.3, 0.6]), blaschke_factor(0.1)), repeat_last=True)
    res = expand(f, s, max_terms=8)
    assert res.terms[0].lam is None and res.terms[1].lam == 0.1
    assert verify_reconstruction(res, f).ok
    assert res.dichotomy is Dichotomy.VANISHING


def test_limit_case_model_term():
    f = AnalyticCoeffs.from_values([1, 0.5], 1 << 14)
    res = expand(f, FixedSequence((), "dyadic"), max_terms=8)
    assert res.dichotomy is Dichotomy.LIMIT
    m = res.model_term
    assert abs(inner(f - m, m)) < 1e-9
    # the unimodular normalizer does not change the projection
    np.testing.assert_allclose(m.coeffs, res.remainder().coeffs, atol=1e-12)


def test_model_projection_kernel_line():
    lam = 0.4j
    f = AnalyticCoeffs.from_values([2, 1], 128)
    B = BlaschkeProduct([lam])
    p = model_projection(B, f)
    q = f - p
    np.testing.assert_allclose(q.coeffs, (1 - 0.16) * evaluate(f, lam) * cauchy_kernel(lam, 128).coeffs, atol=1e-13)


def test_hp_residual_norms():
    f = AnalyticCoeffs.from_values([1, 1], 64)
    res = expand(f, Taylor(), p=4.0)
    assert res.residual_norms[0] == pytest.approx((np.mean(np.abs(1 + np.exp(2j * np.pi * np.arange(256) / 256)) ** 4)) ** 0.25)


# rearranged scalar form ------------------------------------------------------


def _gram(vectors):
    V = np.array([v.coeffs for v in vectors])
    return V.conj() @ V.T


def test_tmw_orthonormal(rng):
    lams = [random_disc_point(rng, 0.7) for _ in range(8)]
    data = tmw_coefficients(AnalyticCoeffs.from_values([1], 256), lams)
    np.testing.assert_allclose(_gram(data.basis), np.eye(8), atol=1e-10)


def test_tmw_fourier_coefficients_are_inner_products(rng):
    f = random_poly(rng, 5, M=256)
    lams = [random_disc_point(rng, 0.7) for _ in range(6)]
    data = tmw_coefficients(f, lams)
    for a, e in zip(data.fourier, data.basis):
        assert a == pytest.approx(inner(f, e), abs=1e-11)


def test_tmw_matches_engine(rng):
    f = random_poly(rng, 7, M=256)
    lams = tuple(random_disc_point(rng, 0.7) for _ in range(9))
    data = tmw_coefficients(f, lams)
    res = expand(f, FixedSequence(lams), max_terms=8)
    for N in range(1, 9):
        np.testing.assert_allclose(data.partial_sum(N).coeffs, partial_sum(res, N).coeffs, atol=1e-10)
        np.testing.assert_allclose(data.orthogonal_sum(N).coeffs, partial_sum(res, N).coeffs, atol=1e-10)


def test_tmw_scalar_hand_values():
    # f = 1 + z, lam = (0, 0): c0 = f(0), c1 = (T_{conj b_0} f)(0) - 0 = -1
    data = tmw_coefficients(AnalyticCoeffs.from_values([1, 1], 8), [0, 0])
    np.testing.assert_allclose(data.scalars, [1, -1])
    np.testing.assert_allclose(data.scalar_sum(2).coeffs[:2], [1, 1])


def test_tmw_guards():
    with pytest.raises(RearrangementError):
        tmw_coefficients(cauchy_kernel(0.5, 16), [0.1, 0.2])
    with pytest.raises(DomainError):
        tmw_coefficients(AnalyticCoeffs.from_values([1], 8), [0.1], N=3)
    data = tmw_coefficients(AnalyticCoeffs.from_values([1], 8), [0.1, 0.2])
    with pytest.raises(DomainError):
        data.partial_sum(2)


def test_outer_single_step_values():
    f = AnalyticCoeffs.from_values([0, 1], 8)
    res = expand(f, Outer(), max_terms=1)
    np.testing.assert_allclose(res.terms[0].term_fn.coeffs[:4], [0.25, 0.5, 0.25, 0], atol=1e-15)
    # conj((z - 1)/2) z = (1 - z)/2 on the circle
    np.testing.assert_allclose(res.residuals[1].coeffs[:3], [0.5, -0.5, 0], atol=1e-15)


def test_term_is_product_of_stored_parts(rng):
    f = random_poly(rng, 6, M=128)
    res = expand(f, FixedSequence(tuple(random_disc_point(rng, 0.8) for _ in range(5))), max_terms=5)
    for t in res.terms:
        np.testing.assert_allclose(t.B_prev.mul(t.q_output).coeffs, t.term_fn.coeffs, atol=1e-11)


def test_partial_sum_small_cases():
    f = AnalyticCoeffs.from_values([1, 2, 3], 8)
    res = expand(f, Taylor())
    np.testing.assert_array_equal(partial_sum(res, 0).coeffs, np.zeros(8))
    np.testing.assert_array_equal(partial_sum(res, 2).coeffs[:3], [1, 2, 0])


def test_model_projection_examples():
    from unwinding import Monomial, MultiplierProduct

    f = AnalyticCoeffs.from_values([1, 2, 3], 16)
    z2 = MultiplierProduct([Monomial(), Monomial()])
    np.testing.assert_allclose(model_projection(z2, f).coeffs[:4], [0, 0, 3, 0])
    b = blaschke_factor(0.5)
    one = AnalyticCoeffs.from_values([1], 64)
    np.testing.assert_allclose(model_projection(b, one).coeffs, 0.5 * b.mul(one).coeffs, atol=1e-15)
    np.testing.assert_array_equal(model_projection(BlaschkeProduct(()), f).coeffs, f.coeffs)


def test_tmw_origin_points_give_signed_taylor_coefficients():
    f = AnalyticCoeffs.from_values([1, 2, 3], 8)
    data = tmw_coefficients(f, [0, 0, 0])
    np.testing.assert_allclose(data.scalars, [1, -2, 3])
    assert tmw_coefficients(f, [0.5]).scalars[0] == pytest.approx(2.75)


def test_limit_run_residuals_track_model_norm():
    f = AnalyticCoeffs.from_values([1, -0.5j], 1 << 14)
    res = expand(f, FixedSequence((), "dyadic"), max_terms=8)
    for N in range(res.n_terms + 1):
        B = res.products[N]
        assert res.residual_norms[N] == pytest.approx(model_projection(B, f).norm(), abs=1e-12)
    assert res.residual_norms[-1] > 0.1
