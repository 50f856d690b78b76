"""Acceptance criteria, one test each; every test records a PASS/FAIL line."""
import itertools
import math
import time

import numpy as np
import scipy.linalg as sla

from subprod import cpsg, fock, reps, subshift
from subprod import systems as S
from subprod.kernel import Subspace
from subprod.ncpoly import HomogeneousIdeal, NCPolynomial, contains, graded_component, membership_residual
from subprod.sampling import (
    random_admissible,
    random_commuting_pair,
    random_golden_rep,
    random_ideal,
    random_member,
    random_noncommuting_pair,
    random_poly,
    random_unital_cp,
)

SEED = 7


def golden(N):
    return S.from_forbidden_words([(2, 2)], 2, N, True)


def words_upto(d, n):
    return [w for m in range(n + 1) for w in itertools.product(range(1, d + 1), repeat=m)]


def test_01_symmetric_dims(acceptance):
    t = time.perf_counter()
    ok = all(
        S.symmetric(d, 6).dims == [math.comb(n + d - 1, n) for n in range(7)]
        for d in (1, 2, 3)
    )
    elapsed = time.perf_counter() - t
    ok = ok and elapsed < 5
    acceptance(1, ok, f"symmetric dims = binom(n+d-1, n) for d <= 3, n <= 6 in {elapsed:.2f}s")
    assert ok


def test_02_golden_mean_dims(acceptance):
    N = 12
    A = S.from_ideal(HomogeneousIdeal.parse(2, ["x2x2"]), N)
    B = golden(N)
    same = A.equals(B)
    # A_n: words ending in 1, B_n: words ending in 2
    a, b = [1], [0]
    for n in range(1, N + 1):
        a.append(a[-1] + b[-1])
        b.append(a[-2])
    counted = [
        (sum(w[-1] == 1 for w in subshift.pruned_words([(2, 2)], 2, n)),
         sum(w[-1] == 2 for w in subshift.pruned_words([(2, 2)], 2, n)))
        for n in range(1, N + 1)
    ]
    recursion = counted == list(zip(a[1:], b[1:]))
    dims = A.dims == B.dims == [1] + [x + y for x, y in zip(a[1:], b[1:])]
    ok = same and recursion and dims
    acceptance(2, ok, f"ideal <x2x2> equals pruned W={{22}} for n <= {N}; dims {A.dims[-3:]}")
    assert ok


def test_03_linear_growth(acceptance):
    W = [(2, 2), (2, 1, 2), (2, 1, 1, 2), (2, 1, 1, 1, 2), (2, 1, 1, 1, 1, 2)]
    dims = S.from_forbidden_words(W, 2, 6, prune=False).dims
    ok = dims == [n + 1 for n in range(7)]
    acceptance(3, ok, f"unpruned dims {dims}")
    assert ok


def test_04_cuntz_defect(acceptance):
    vals = {
        "symmetric": fock.check_cuntz_defect(fock.build(S.symmetric(2, 8)), 1),
        "full": fock.check_cuntz_defect(fock.build(S.full(2, 8)), 1),
        "golden": fock.check_cuntz_defect(fock.build(golden(8)), 1),
    }
    ok = max(vals.values()) <= 1e-7
    acceptance(4, ok, "k=1 defects " + ", ".join(f"{k} {v:.1e}" for k, v in vals.items()))
    assert ok


def test_05_nullstellensatz(acceptance):
    rng = np.random.default_rng(SEED)
    agree, total, worst = 0, 0, 0.0
    N = 5
    for _ in range(50):
        d = int(rng.integers(2, 4))
        J = random_ideal(d, rng, max_generators=2, max_degree=3, min_degree=1)
        F = fock.build(S.from_ideal(J, N))
        comps = {n: graded_component(J, n) for n in range(1, N + 1)}
        for t in range(50):
            n = int(rng.integers(1, N + 1))
            p = random_member(J, n, rng) if t % 2 else random_poly(d, n, rng, terms=int(rng.integers(1, 5)))
            if p.is_zero():
                p = random_poly(d, n, rng, terms=2)
            via_shift = fock.membership_via_shift(F, p)
            via_linear = contains(J, p, component=comps[n])
            r1 = fock.shift_membership_residual(F, p)
            r2 = membership_residual(J, p, comps[n])
            worst = max(worst, abs(r1 - r2))
            agree += via_shift == via_linear
            total += 1
    ok = agree == total and worst <= 1e-7
    acceptance(5, ok, f"{agree}/{total} verdicts agree, max residual gap {worst:.1e}")
    assert ok


def test_06_representations(acceptance):
    rng = np.random.default_rng(SEED)
    X = S.symmetric(2, 6)
    passes = sum(reps.is_representation(X, random_commuting_pair(3, rng)).passed for _ in range(100))
    bound = 0.1 / np.sqrt(2) - 1e-9
    fails = 0
    for _ in range(100):
        rep = reps.is_representation(X, random_noncommuting_pair(3, rng, min_commutator=0.1))
        fails += (not rep.passed) and rep.residuals[2] >= bound
    ok = passes == 100 and fails == 100
    acceptance(6, ok, f"commuting pass {passes}/100, non-commuting fail with r2 >= 0.1/sqrt2: {fails}/100")
    assert ok


def test_07_poisson_transform(acceptance):
    rng = np.random.default_rng(SEED)
    N, r = 12, 0.999
    systems = [(S.symmetric(2, N), random_commuting_pair), (golden(N), random_golden_rep)]
    ws = words_upto(2, 3)
    worst = 0.0
    for X, make in systems:
        for _ in range(10):
            T = make(3, rng, row_norm=0.9)
            table = reps.poisson_table(T, X, ws, N, r)
            for (a, b), val in table.items():
                worst = max(worst, np.abs(val - T.word(a) @ T.word(b).conj().T).max())
    ok = worst <= 1e-6
    acceptance(7, ok, f"max |Psi(S^a S^b*) - T^a T^b*| = {worst:.2e} (target 1e-6, r = {r}, N = {N})")
    assert ok


def mixed_poly(d, deg, rng):
    p = NCPolynomial.zero(d)
    for n in range(deg + 1):
        p = p + random_poly(d, n, rng, terms=int(rng.integers(1, 3)))
    return p


def test_08_von_neumann(acceptance):
    rng = np.random.default_rng(SEED)
    N = 8
    setups = [(S.symmetric(2, N), random_commuting_pair), (golden(N), random_golden_rep)]
    setups = [(X, make, fock.build(X)) for X, make in setups]
    passed, worst = 0, -np.inf
    for t in range(200):
        X, make, F = setups[t % 2]
        T = make(3, rng, row_norm=float(rng.uniform(0.5, 1.0)))
        p = mixed_poly(2, int(rng.integers(0, 3)), rng)
        q = mixed_poly(2, int(rng.integers(0, 3)), rng)
        res = reps.vn_inequality_check(X, T, p, q, N, F)
        passed += res.passed
        worst = max(worst, res.lhs - res.rhs)
    ok = passed == 200
    acceptance(8, ok, f"{passed}/200 trials satisfy lhs <= rhs + 1e-6 (max lhs - rhs = {worst:.2e})")
    assert ok


def test_09_maximal_piece(acceptance):
    Y, X = S.full(2, 5), S.symmetric(2, 5)
    T = reps.shift_tuple(fock.build(Y))
    piece = reps.maximal_piece(X, Y, T)
    want = Subspace(sla.block_diag(*[X[n].frame for n in range(6)]))
    ok = piece.space.equals(want, 1e-8)
    acceptance(9, ok, f"piece dim {piece.space.dim} equals symmetric Fock space dim {want.dim}")
    assert ok


def test_10_subshift_relations(acceptance):
    N = 8
    a, b, c = fock.subshift_relations_check(fock.build(golden(N)), 1, window_c=(1, N - 2))
    ok = a.residual <= 1e-12 and b.residual <= 1e-7 and c.residual <= 1e-7
    acceptance(10, ok, f"orthogonal {a.residual:.1e}, row {b.residual:.1e} on {b.window}, "
                       f"extension {c.residual:.1e} on {c.window}")
    assert ok


def test_11_q_classification(acceptance):
    base = [2.0, 3.0, -2.0, 1.5, -4.0, 5.0, 2j, 0.7 + 0.7j, -1.3, 1.1]
    grid = base + [1 / z for z in base]
    assert len(grid) == 20 and len({complex(z) for z in grid}) == 20
    mat = lambda z: np.array([[0, z], [1 / z, 0]], dtype=complex)
    correct, worst = 0, 0.0
    for z, w in itertools.product(grid, repeat=2):
        res = S.iso_q(mat(z), mat(w), 6)
        expected = np.isclose(w, z) or np.isclose(w, 1 / z)
        correct += (res is not None) == expected
        if res is not None:
            worst = max(worst, res.check.residual)
    d2 = correct == 400 and worst <= 1e-9

    rng = np.random.default_rng(SEED)
    matches = 0
    for t in range(50):
        q = random_admissible(3, rng, phases=t % 3 == 0)
        if t % 2:
            sigma = tuple(rng.permutation(3))
            P = S.permutation_unitary(sigma, 3)
            r = P @ q @ P.T
        else:
            r = random_admissible(3, rng, phases=t % 3 == 0)
        res = S.iso_q(q, r, 4)
        Xq, Xr = S.q_commuting(q, 4), S.q_commuting(r, 4)
        # direct verification of every permutation map, independent of the criterion
        direct = [s for s in itertools.permutations(range(3))
                  if S.verify_isomorphism(Xq, Xr, S.permutation_unitary(s, 3)).residual <= 1e-9]
        if res is None:
            matches += not direct
        else:
            matches += res.sigma in direct
    d3 = matches == 50
    ok = d2 and d3
    acceptance(11, ok, f"d=2: {correct}/400 verdicts, max iso residual {worst:.1e}; d=3: {matches}/50 match")
    assert ok


def test_12_arveson_roundtrip(acceptance):
    rng = np.random.default_rng(SEED)
    worst_sigma, worst_cois = 0.0, 0.0
    for t in range(20):
        theta = random_unital_cp(2, 2 + t % 2, rng)
        A = cpsg.arveson_system(theta, 4)
        sg = cpsg.sigma_semigroup(A.X, A.R)
        for n in range(1, 5):
            worst_sigma = max(worst_sigma, np.abs(sg.maps[n].choi - theta.power(n).choi).max())
        for m in range(1, 4):
            for n in range(1, 5 - m):
                worst_cois = max(worst_cois, cpsg.coisometry_check(theta, m, n))
    ok = worst_sigma <= 1e-8 and worst_cois <= 1e-7
    acceptance(12, ok, f"Sigma roundtrip {worst_sigma:.1e}, coisometry {worst_cois:.1e}")
    assert ok


N3_CONSTANT = 1.7320508075688772


def test_13_n3_obstruction(acceptance):
    val = S.n3_obstruction_check()
    ok = val > 0.5 and abs(val - N3_CONSTANT) <= 1e-12
    acceptance(13, ok, f"||I (x) F - F (x) I|| = {val!r}")
    assert ok
