import numpy as np
import pytest

from subprod import fock
from subprod import systems as S
from subprod.kernel import InvalidInput
from subprod.ncpoly import HomogeneousIdeal, NCPolynomial, contains, parse_poly
from subprod.sampling import random_ideal, random_member, random_poly


def golden(N):
    return S.from_forbidden_words([(2, 2)], 2, N, True)


def test_d1_full_is_unilateral_shift():
    F = fock.build(S.full(1, 6))
    assert np.abs(F.shifts[0] - np.eye(7, k=-1)).max() == 0


def test_shift_blocks_match_projection(rng):
    X = S.from_ideal(HomogeneousIdeal.parse(2, ["x1x2 - 2 x2x1"]), 4)
    F = fock.build(X)
    for i in range(2):
        for n in range(3):
            x = X[n].frame @ rng.standard_normal(X[n].dim)
            img = X[n + 1].project(np.kron(np.eye(2)[i], x))
            coords = F.shifts[i][F.degree_slice(n + 1), F.degree_slice(n)] @ (X[n].frame.conj().T @ x)
            assert np.abs(X[n + 1].frame @ coords - img).max() < 1e-12


def test_truncation_kills_top_degree():
    F = fock.build(S.symmetric(2, 4))
    for Si in F.shifts:
        assert np.abs(Si[:, F.degree_slice(4)]).max() == 0


def test_symmetric_shifts_commute():
    F = fock.build(S.symmetric(2, 6))
    S1, S2 = F.shifts
    comm = S1 @ S2 - S2 @ S1
    assert np.abs(F.compress(comm, 0, 4)).max() < 1e-12 or np.abs(comm[:, : F.offsets[5]]).max() < 1e-12


def test_x2x2_squares_to_zero():
    F = fock.build(S.from_ideal(HomogeneousIdeal.parse(2, ["x2x2"]), 6))
    assert np.abs(F.shifts[1] @ F.shifts[1]).max() < 1e-12


@pytest.mark.parametrize("X", [S.full(2, 6), S.symmetric(2, 6), S.symmetric(3, 4), golden(7),
                               S.q_commuting([[0, 2j], [-0.5j, 0]], 5)])
def test_row_contraction(X):
    assert fock.row_norm(fock.build(X)) <= 1 + 1e-12


def test_cuntz_defect():
    assert fock.check_cuntz_defect(fock.build(S.full(2, 6)), 1) < 1e-12
    assert fock.check_cuntz_defect(fock.build(S.symmetric(2, 8)), 1) < 1e-7
    F = fock.build(golden(8))
    assert fock.check_cuntz_defect(F, 2) < 1e-7
    with pytest.raises(InvalidInput):
        fock.check_cuntz_defect(F, 9)


def test_cuntz_window_is_reported():
    F = fock.build(S.full(2, 5))
    c = fock.cuntz_check(F, 2)
    assert c.window == (0, 3) and c.passed
    # brute force over words for k = 2
    D = sum(F.word(w) @ F.word(w).conj().T for w in [(1, 1), (1, 2), (2, 1), (2, 2)])
    want = np.eye(F.total_dim) - D - F.degree_projector(0, 1)
    assert np.abs(F.compress(want, 0, 3)).max() < 1e-12


def test_pairwise_orthogonality_monomial_only():
    assert fock.pairwise_orthogonality(fock.build(golden(6))) == 0.0
    assert fock.pairwise_orthogonality(fock.build(S.full(2, 4))) == 0.0
    # fails for non-monomial systems: S_1* S_2 e_1 has a component 1/2 on e_2 in the symmetric case
    assert abs(fock.pairwise_orthogonality(fock.build(S.symmetric(2, 4))) - 0.5) < 1e-12


def test_membership_examples():
    J = HomogeneousIdeal.parse(2, ["x1x2-x2x1"])
    F = fock.build(S.from_ideal(J, 5))
    assert fock.membership_via_shift(F, parse_poly("x1x2-x2x1", 2))
    assert fock.membership_via_shift(F, parse_poly("x1 x1 x2 - x1 x2 x1", 2))
    assert not fock.membership_via_shift(F, parse_poly("x1x2", 2))
    assert abs(fock.shift_membership_residual(F, parse_poly("x1x2", 2)) - 1 / np.sqrt(2)) < 1e-12
    with pytest.raises(InvalidInput):
        fock.shift_membership_residual(F, parse_poly("x1x1x1x1x1x1", 2))
    with pytest.raises(InvalidInput):
        fock.shift_membership_residual(F, parse_poly("x1 + x1x2", 2))


def test_membership_agrees_with_linear_algebra(rng):
    for _ in range(8):
        d = int(rng.integers(2, 4))
        J = random_ideal(d, rng)
        N = 4
        F = fock.build(S.from_ideal(J, N))
        for n in range(1, N + 1):
            for p in (random_poly(d, n, rng, terms=3), random_member(J, n, rng)):
                assert fock.membership_via_shift(F, p) == contains(J, p)
            g = J.generators[0]
            if g.degree <= n:
                word = NCPolynomial.monomial((1,) * (n - g.degree), d)
                assert fock.membership_via_shift(F, word * g)


def test_graded_extract_examples():
    F = fock.build(S.symmetric(2, 4))
    S1, S2 = F.shifts
    assert np.abs(fock.graded_component_extract(F, S1, 1) - S1).max() == 0
    assert np.abs(fock.graded_component_extract(F, S1, 2)).max() == 0
    I = np.eye(F.total_dim)
    assert np.abs(fock.graded_component_extract(F, I, 0) - I).max() == 0
    T = S1 @ S2.conj().T
    assert np.abs(fock.graded_component_extract(F, T, 0) - T).max() == 0


def test_graded_extract_is_fourier_average(rng):
    F = fock.build(S.from_forbidden_words([(2, 2)], 2, 4, True))
    D = F.total_dim
    T = rng.standard_normal((D, D)) + 1j * rng.standard_normal((D, D))
    M = 2 * F.N + 3
    for n in range(-F.N, F.N + 1):
        avg = np.zeros_like(T)
        for m in range(M):
            t = 2 * np.pi * m / M
            U = fock.gauge_unitary(F, t)
            avg += U @ T @ U.conj().T * np.exp(-1j * n * t)
        avg /= M
        assert np.abs(avg - fock.graded_component_extract(F, T, n)).max() < 1e-12


def test_graded_extract_projections(rng):
    F = fock.build(S.symmetric(2, 3))
    D = F.total_dim
    T = rng.standard_normal((D, D))
    parts = {n: fock.graded_component_extract(F, T, n) for n in range(-3, 4)}
    assert np.abs(sum(parts.values()) - T).max() == 0
    for m in parts:
        for n in parts:
            again = fock.graded_component_extract(F, parts[n], m)
            want = parts[n] if m == n else 0 * T
            assert np.abs(again - want).max() == 0


def test_subshift_relations_golden():
    F = fock.build(golden(8))
    a, b, c = fock.subshift_relations_check(F, 1)
    assert a.residual <= 1e-12 and a.window == (0, 8)
    assert b.residual <= 1e-7 and b.window == (1, 7)
    assert c.residual <= 1e-7 and c.window == (1, 7)


def test_subshift_relation_fails_at_vacuum():
    F = fock.build(golden(6))
    (c,) = fock.subshift_relations_check(F, 1, window_c=(0, 5))[2:]
    assert c.residual > 0.5


def test_subshift_full_and_two_step():
    F = fock.build(S.from_forbidden_words([], 2, 5, True))
    res = fock.subshift_relations_check(F, 0)
    assert all(r.passed for r in res)
    F = fock.build(S.from_forbidden_words([(1, 1, 2), (2, 2)], 2, 7, True))
    res = fock.subshift_relations_check(F, 2)
    assert all(r.passed for r in res)
    with pytest.raises(InvalidInput):
        fock.subshift_relations_check(F, 1)
    with pytest.raises(InvalidInput):
        fock.subshift_relations_check(fock.build(S.symmetric(2, 3)))
