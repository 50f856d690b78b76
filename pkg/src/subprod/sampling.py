"""Seeded random generators for tuples, polynomials, ideals and CP maps."""
from __future__ import annotations

import numpy as np

from .cpsg import CPMap
from .ncpoly import HomogeneousIdeal, NCPolynomial, words
from .reps import RepTuple


def rng_from(seed) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def random_complex(rng, shape) -> np.ndarray:
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_unitary(k: int, rng) -> np.ndarray:
    q, r = np.linalg.qr(random_complex(rng, (k, k)))
    return q * (np.diag(r) / np.abs(np.diag(r)))


def with_row_norm(T: RepTuple, target: float) -> RepTuple:
    return T.scaled(target / T.row_norm)


def random_commuting_pair(k: int, rng, row_norm: float = 0.9) -> RepTuple:
    """(A, p(A)) for a random quadratic p, scaled to the given row norm."""
    A = random_complex(rng, (k, k))
    A /= np.linalg.norm(A, 2)
    c = random_complex(rng, 3) / 2
    B = c[0] * np.eye(k) + c[1] * A + c[2] * A @ A
    return with_row_norm(RepTuple((A, B)), row_norm)


def random_noncommuting_pair(k: int, rng, row_norm: float = 0.9, min_commutator: float = 0.1) -> RepTuple:
    while True:
        T = with_row_norm(RepTuple((random_complex(rng, (k, k)), random_complex(rng, (k, k)))), row_norm)
        A, B = T.matrices
        if np.linalg.norm(A @ B - B @ A, 2) >= min_commutator:
            return T


def random_golden_rep(k: int, rng, row_norm: float = 0.9) -> RepTuple:
    """(T_1, T_2) with T_2^2 = 0: T_2 = U [[0, B], [0, 0]] U*."""
    h = k // 2
    N = np.zeros((k, k), dtype=complex)
    N[:h, h:] = random_complex(rng, (h, k - h))
    U = random_unitary(k, rng)
    T2 = U @ N @ U.conj().T
    return with_row_norm(RepTuple((random_complex(rng, (k, k)), T2)), row_norm)


def random_poly(d: int, n: int, rng, terms: int | None = None) -> NCPolynomial:
    """Random homogeneous polynomial of degree n with up to ``terms`` monomials."""
    ws = words(d, n)
    if terms is not None and terms < len(ws):
        ws = [ws[i] for i in sorted(rng.choice(len(ws), size=terms, replace=False))]
    coeffs = random_complex(rng, len(ws))
    return NCPolynomial(d, dict(zip(ws, coeffs)))


def random_ideal(d: int, rng, max_generators: int = 2, max_degree: int = 3, min_degree: int = 2) -> HomogeneousIdeal:
    count = int(rng.integers(1, max_generators + 1))
    gens = []
    for _ in range(count):
        n = int(rng.integers(min_degree, max_degree + 1))
        gens.append(random_poly(d, n, rng, terms=int(rng.integers(1, 3))))
    return HomogeneousIdeal(d, tuple(gens))


def random_member(J: HomogeneousIdeal, n: int, rng, terms: int = 3) -> NCPolynomial:
    """Random element of the degree-n part of J (zero if J has no generators of degree <= n)."""
    gens = [g for g in J.generators if g.degree <= n]
    out = NCPolynomial.zero(J.d)
    if not gens:
        return out
    for _ in range(terms):
        g = gens[int(rng.integers(len(gens)))]
        rest = n - g.degree
        left = int(rng.integers(rest + 1))
        lw = random_poly(J.d, left, rng, terms=1)
        rw = random_poly(J.d, rest - left, rng, terms=1)
        out = out + lw * g * rw
    return out


def random_unital_cp(k: int, n_kraus: int, rng) -> CPMap:
    """Kraus operators are the k x k blocks of a co-isometry W (k x k n_kraus)."""
    W = random_unitary(k * n_kraus, rng)[:k, :]
    return CPMap.from_kraus([W[:, l * k:(l + 1) * k] for l in range(n_kraus)], k)


def random_admissible(d: int, rng, log_scale: float = 1.0, phases: bool = False) -> np.ndarray:
    q = np.zeros((d, d), dtype=complex)
    for i in range(d):
        for j in range(i + 1, d):
            z = np.exp(log_scale * rng.standard_normal())
            if phases:
                z = z * np.exp(2j * np.pi * rng.random())
            q[i, j], q[j, i] = z, 1 / z
    return q
