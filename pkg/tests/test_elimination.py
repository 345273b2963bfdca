from fractions import Fraction

import numpy as np
import pytest
import scipy.linalg

from oracles import dense, laplace_cofactor, laplace_det
from symplectic_factor import elimination
from symplectic_factor.core import (
    E,
    F,
    K,
    SymplecticMatrix,
    apply_factor_left,
    check_symplectic,
    factor_to_matrix,
    multiply_word,
    random_word,
    relative_frobenius,
)
from symplectic_factor.elimination import (
    NeighborhoodSpec,
    adjugate,
    column_certificate,
    determinant,
    factor_count_bound,
    factor_near_identity,
    factor_stable_rank_one,
)
from symplectic_factor.errors import (
    CapabilityMissing,
    CertificateFailure,
    MilestoneViolation,
    OutsideNeighborhood,
    PivotNotUnit,
)
from symplectic_factor.homotopy import symplectic_form
from symplectic_factor.rings import ComplexApprox, IntegersMod, PrimeField, Rationals, SampledFunctions

from conftest import EXACT_RINGS, ring_id

Q = Rationals()
C = ComplexApprox()


def generic_near_identity(n, seed, scale=0.02):
    """exp of a random Hamiltonian matrix: dense, so no elimination step vanishes."""
    rng = np.random.default_rng(seed)
    S = rng.normal(size=(2 * n, 2 * n)) + 1j * rng.normal(size=(2 * n, 2 * n))
    S = S + S.T
    X = symplectic_form(n) @ S
    X *= scale / np.max(np.abs(X))
    return SymplecticMatrix(C, scipy.linalg.expm(X))


# -- factor count -------------------------------------------------------------

def test_count_bound_small_cases():
    # n=1: K11 expands to 4, one F11, one E11
    assert factor_count_bound(1) == 6
    # n=2: column 1 is K11 (4), K21 (5), F11 and F21; column 2 is K22 (4), K12 (5), F22;
    # then three E factors clear the upper triangle of B
    assert factor_count_bound(2) == (4 + 5 + 2) + (4 + 5 + 1) + 3
    assert [factor_count_bound(n) for n in range(1, 6)] == [6 * n * n for n in range(1, 6)]


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_generic_input_attains_count_bound(n):
    M = generic_near_identity(n, seed=n)
    word = factor_near_identity(M)
    assert len(word) == factor_count_bound(n)
    assert relative_frobenius(multiply_word(word, n, C), M) <= 1e-12


def test_count_bound_rejects_zero():
    with pytest.raises(ValueError):
        factor_count_bound(0)


# -- near identity ----------------------------------------------------------------

@pytest.mark.parametrize("ctx", [Q, C], ids=ring_id)
def test_identity_gives_empty_word(ctx):
    assert len(factor_near_identity(SymplecticMatrix.identity(3, ctx))) == 0


def test_two_factor_product_over_complex():
    M = multiply_word([E(1, 2, 0.05), F(1, 1, 0.03)], 2, C)
    word = factor_near_identity(M)
    assert word.elementary_only
    assert relative_frobenius(multiply_word(word, 2, C), M) <= 1e-10


def test_small_random_words_stay_inside_and_reconstruct():
    V = NeighborhoodSpec(0.5)
    for seed in range(100):
        n = 1 + seed % 4
        M = multiply_word(random_word(n, 10, C, seed=seed, radius=0.01), n, C)
        assert M.distance_from_identity() <= V.radius
        word = factor_near_identity(M, V)
        assert len(word) <= factor_count_bound(n)
        assert relative_frobenius(multiply_word(word, n, C), M) <= 1e-9


def test_exact_over_rationals():
    for seed in range(20):
        n = 1 + seed % 4
        M = multiply_word(random_word(n, 10, Q, seed=seed, radius=0.01), n, Q)
        assert multiply_word(factor_near_identity(M, NeighborhoodSpec(0.5)), n, Q).equals(M)


def test_sampled_functions_near_identity():
    S = SampledFunctions(11)
    M = multiply_word(random_word(2, 6, S, seed=4, radius=0.02), 2, S)
    word = factor_near_identity(M)
    assert all(np.shape(f.a) == (11,) for f in word)
    assert relative_frobenius(multiply_word(word, 2, S), M) <= 1e-12


def test_outside_neighborhood():
    M = factor_to_matrix(F(1, 1, 0.5), 1, C)
    with pytest.raises(OutsideNeighborhood):
        factor_near_identity(M, NeighborhoodSpec(0.1))


def test_radius_must_be_below_one():
    with pytest.raises(ValueError):
        NeighborhoodSpec(1.0)


def test_zero_pivot_over_exact_ring():
    J = SymplecticMatrix.from_rows(PrimeField(7), [[0, 1], [-1, 0]])
    with pytest.raises(PivotNotUnit):
        factor_near_identity(J)


def test_non_symplectic_input_trips_milestone():
    bad = SymplecticMatrix.from_rows(Q, [[1, 0], [0, Fraction(21, 20)]])
    with pytest.raises(MilestoneViolation):
        factor_near_identity(bad)


def test_trace_replays_to_identity():
    M = multiply_word(random_word(3, 10, Q, seed=9, radius=0.01), 3, Q)
    word, trace = factor_near_identity(M, NeighborhoodSpec(0.5), return_trace=True)
    X = M
    for f, residual in trace.steps:
        X = apply_factor_left(f, X)
        assert residual == 0.0
    assert X.equals(SymplecticMatrix.identity(3, Q))
    assert [col for col, _, _ in trace.pivot_log] == [1, 2, 3]
    for _, pivot, inv in trace.pivot_log:
        assert pivot * inv == 1


def test_unexpanded_word_uses_K():
    M = multiply_word(random_word(2, 10, Q, seed=2, radius=0.01), 2, Q)
    word = factor_near_identity(M, NeighborhoodSpec(0.5), elementary=False)
    assert not word.elementary_only
    assert multiply_word(word, 2, Q).equals(M)


def test_strict_mode_counts_checks():
    before = dict(elimination.STRICT_STATS)
    factor_near_identity(multiply_word(random_word(2, 5, Q, seed=1, radius=0.01), 2, Q))
    assert elimination.STRICT_STATS["milestone_checks"] > before["milestone_checks"]
    assert elimination.STRICT_STATS["prefix_checks"] > before["prefix_checks"]


# -- determinants and certificates ----------------------------------------------

@pytest.mark.parametrize("ctx", EXACT_RINGS, ids=ring_id)
def test_adjugate_matches_laplace(ctx):
    rng = np.random.default_rng(20)
    for m in range(1, 6):
        rows = [[ctx.random_element(rng) for _ in range(m)] for _ in range(m)]
        X = ctx.asarray(rows)
        assert ctx.equal(determinant(ctx, X), laplace_det(ctx, rows))
        adj = adjugate(ctx, X)
        for r in range(m):
            for c in range(m):
                assert ctx.equal(adj[c, r], laplace_cofactor(ctx, rows, r, c))


@pytest.mark.parametrize("ctx", EXACT_RINGS, ids=ring_id)
def test_symplectic_determinant_is_one(ctx):
    for seed in range(10):
        M = multiply_word(random_word(3, 12, ctx, seed=seed, kinds=("E", "F", "K")), 3, ctx)
        assert ctx.is_one(determinant(ctx, M.data))


def test_certificate_of_identity():
    x, y = column_certificate(SymplecticMatrix.identity(3, Q), 1)
    assert x == [1, 0, 0] and y == [0, 0, 0]


def test_certificate_of_diagonal_K():
    x, y = column_certificate(factor_to_matrix(K(1, 1, 2), 1, Q), 1)
    # the cofactor of a_11 = 2 is d_11 = 1/2
    assert x == [Fraction(1, 2)] and y == [0]


@pytest.mark.parametrize("ctx", [PrimeField(7), IntegersMod(12)], ids=ring_id)
def test_certificate_sums_to_one(ctx):
    for seed in range(20):
        M = multiply_word(random_word(3, 15, ctx, seed=seed), 3, ctx)
        for col in (1, 2, 3):
            x, y = column_certificate(M, col)
            rows = dense(M)
            total = 0
            for i in range(3):
                total += x[i] * rows[i][col - 1] + y[i] * rows[3 + i][col - 1]
            assert total % ctx.m == 1


def test_certificate_rejects_non_symplectic():
    with pytest.raises(CertificateFailure):
        column_certificate(SymplecticMatrix.from_rows(Q, [[2, 0], [0, 2]]), 1)


# -- stable rank one ----------------------------------------------------------------

@pytest.mark.parametrize("ctx", EXACT_RINGS + [C], ids=ring_id)
def test_bsr1_identity(ctx):
    assert len(factor_stable_rank_one(SymplecticMatrix.identity(2, ctx))) == 0


def test_bsr1_lower_elementary_over_f5():
    ctx = PrimeField(5)
    M = factor_to_matrix(F(1, 1, 1), 1, ctx)
    assert multiply_word(factor_stable_rank_one(M), 1, ctx).equals(M)


@pytest.mark.parametrize("ctx", EXACT_RINGS + [C], ids=ring_id)
def test_bsr1_zero_pivot(ctx):
    J = SymplecticMatrix.from_rows(ctx, [[0, 0, 1, 0], [0, 0, 0, 1], [-1, 0, 0, 0], [0, -1, 0, 0]])
    word = factor_stable_rank_one(J)
    R = multiply_word(word, 2, ctx)
    assert R.equals(J) if ctx.exact else relative_frobenius(R, J) <= 1e-12


def test_bsr1_z12_non_unit_pivots():
    ctx = IntegersMod(12)
    hits = 0
    for seed in range(60):
        M = multiply_word(random_word(2, 20, ctx, seed=seed), 2, ctx)
        hits += ctx.inverse(M.data[0, 0]) is None
        assert multiply_word(factor_stable_rank_one(M), 2, ctx).equals(M)
    assert hits > 10


def test_bsr1_trace_pivots_are_units():
    ctx = IntegersMod(12)
    M = multiply_word(random_word(3, 30, ctx, seed=3), 3, ctx)
    word, trace = factor_stable_rank_one(M, return_trace=True)
    assert all(ctx.mul(p, inv) == 1 for _, p, inv in trace.pivot_log)
    assert word.elementary_only


@pytest.mark.parametrize("ctx", EXACT_RINGS, ids=ring_id)
def test_bsr1_random_words(ctx):
    for seed in range(25):
        n = 1 + seed % 4
        M = multiply_word(random_word(n, 30, ctx, seed=seed, kinds=("E", "F", "K")), n, ctx)
        R = multiply_word(factor_stable_rank_one(M), n, ctx)
        assert R.equals(M)
        assert check_symplectic(R).ok


def test_bsr1_needs_witness():
    with pytest.raises(CapabilityMissing):
        factor_stable_rank_one(SymplecticMatrix.identity(1, SampledFunctions(3)))
