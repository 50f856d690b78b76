"""Representations of subproduct systems on C^k.

A representation is a row contraction T = (T_1, ..., T_d) annihilated by the
ideal of X. For a word a, T^a = T_(a1) ... T_(an). The map T~^n is the
k x (d^n k) row whose block a is T^a; everything below reshapes it to a
(k, d^n, k) array so that operators on C^(d^n) act on the middle index.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from . import fock
from .kernel import (
    CHECK_TOL,
    RANK_TOL,
    InvalidInput,
    Subspace,
    as_cmatrix,
    op_norm,
    psd_sqrt,
)
from .ncpoly import NCPolynomial
from .systems import SubproductSystem


@dataclass(frozen=True, eq=False)
class RepTuple:
    matrices: tuple
    row_norm: float = field(init=False)

    def __post_init__(self):
        mats = tuple(as_cmatrix(m, "T_i") for m in self.matrices)
        if not mats:
            raise InvalidInput("need at least one matrix")
        k = mats[0].shape[0]
        for m in mats:
            if m.shape != (k, k):
                raise InvalidInput("all T_i must be square of equal size")
        object.__setattr__(self, "matrices", mats)
        object.__setattr__(self, "row_norm", op_norm(np.hstack(mats)))

    @property
    def d(self) -> int:
        return len(self.matrices)

    @property
    def k(self) -> int:
        return self.matrices[0].shape[0]

    def __getitem__(self, i: int) -> np.ndarray:
        return self.matrices[i]

    def word(self, w) -> np.ndarray:
        out = np.eye(self.k, dtype=complex)
        for a in w:
            out = out @ self.matrices[a - 1]
        return out

    def poly(self, p: NCPolynomial) -> np.ndarray:
        return p.evaluate(self.matrices)

    def scaled(self, r: float) -> "RepTuple":
        return RepTuple(tuple(r * m for m in self.matrices))


def shift_tuple(F: fock.FockOperators) -> RepTuple:
    return RepTuple(F.shifts)


def compress(T: RepTuple, K: Subspace) -> RepTuple:
    """(P_K T_i |_K) in the frame of K."""
    Q = K.frame
    return RepTuple(tuple(Q.conj().T @ m @ Q for m in T.matrices))


def _prepend(T: RepTuple, A: np.ndarray) -> np.ndarray:
    # T^(i a) = T_i T^a, blocks ordered by the first letter
    return np.concatenate([np.einsum("rt,tas->ras", m, A, optimize=True) for m in T.matrices], axis=1)


def tilde_powers(T: RepTuple, N: int):
    """Yield (n, A_n) for n = 0..N with A_n[r, a, s] = (T^a)[r, s], words in lexicographic order."""
    A = np.eye(T.k, dtype=complex)[:, None, :]
    yield 0, A
    for n in range(1, N + 1):
        A = _prepend(T, A)
        yield n, A


def tilde(T: RepTuple, n: int) -> np.ndarray:
    """T~^n as a k x (d^n k) matrix, block a equal to T^a."""
    for m, A in tilde_powers(T, n):
        if m == n:
            return A.reshape(T.k, -1)


def _adjoint_images(A: np.ndarray) -> np.ndarray:
    """Z[a, s, h] = ((T^a)* e_h)[s]: T~_n* e_h reshaped to a d^n x k matrix."""
    return np.conj(np.transpose(A, (1, 2, 0)))


def _outside(F: np.ndarray, Z: np.ndarray, PK: np.ndarray) -> np.ndarray:
    """Z - P Z P_K^t for each trailing column, P = F F*: the part outside X(n) (x) K."""
    coords = np.tensordot(F.conj(), Z, axes=([0], [0]))  # (j, s, c)
    inside = np.tensordot(F, coords, axes=([1], [0]))  # P Z
    inside = np.einsum("asc,ts->atc", inside, PK, optimize=True)
    return Z - inside


@dataclass
class RepReport:
    residuals: dict
    row_norm: float
    tol: float

    @property
    def max_residual(self) -> float:
        return max(self.residuals.values(), default=0.0)

    @property
    def contractive(self) -> bool:
        return self.row_norm <= 1 + self.tol

    @property
    def passed(self) -> bool:
        return self.max_residual <= self.tol


def is_representation(X: SubproductSystem, T: RepTuple, tol: float = CHECK_TOL, N: int | None = None) -> RepReport:
    """Residuals r_n = ||T~^n (P_X(n)^perp (x) I)|| for 1 <= n <= N."""
    if T.d != X.d:
        raise InvalidInput(f"tuple has {T.d} operators, system has d = {X.d}")
    N = X.N if N is None else min(N, X.N)
    if T.row_norm > 1 + tol:
        warnings.warn(f"row norm {T.row_norm:.6f} exceeds 1", stacklevel=2)
    residuals = {}
    for n, A in tilde_powers(T, N):
        if n == 0:
            continue
        F = X[n].frame
        coords = np.einsum("rbs,bj->rjs", A, F, optimize=True)
        inside = np.einsum("rjs,aj->ras", coords, F.conj(), optimize=True)
        residuals[n] = op_norm((A - inside).reshape(T.k, -1))
    return RepReport(residuals, T.row_norm, tol)


# ---------------------------------------------------------------------------
# Poisson kernel

def poisson_kernel(T: RepTuple, X: SubproductSystem, N_trunc: int, r: float) -> tuple:
    """K_r(T) truncated at word length N_trunc, in Fock coordinates.

    Returns ``(F, K)`` where F is the Fock space of X cut at N_trunc and K has
    shape (dim F, k, k): K[f] is the C^k-valued coefficient of basis vector f.
    Degree n contributes sum_a e_a (x) r^n D T^(a*) h, D = (I - r^2 sum T_i T_i*)^(1/2).
    """
    if not 0 < r < 1:
        raise InvalidInput("r must lie in (0, 1)")
    if N_trunc > X.N:
        raise InvalidInput(f"system is truncated at {X.N} < N_trunc = {N_trunc}")
    if T.d != X.d:
        raise InvalidInput("dimension mismatch between tuple and system")
    F = fock.build(X.truncate(N_trunc))
    k = T.k
    D = psd_sqrt(np.eye(k) - r * r * sum(m @ m.conj().T for m in T.matrices))
    blocks = []
    for n, A in tilde_powers(T, N_trunc):
        # Ta_star[t, a, s] = (T^a)*[t, s]; fiber coordinates pair with conj(frame)
        Ta_star = np.conj(np.transpose(A, (2, 1, 0)))
        coeff = np.einsum("aj,tas->jts", X[n].frame.conj(), Ta_star, optimize=True)
        blocks.append(r**n * np.einsum("ut,jts->jus", D, coeff, optimize=True))
    return F, np.concatenate(blocks, axis=0)


def _check_poisson_args(T: RepTuple, N_trunc: int, lengths):
    if N_trunc < max(lengths, default=0):
        raise InvalidInput("N_trunc must be at least |alpha| + |beta|")
    if T.row_norm > 1 + CHECK_TOL:
        raise InvalidInput(f"row norm {T.row_norm:.6f} exceeds 1")


def poisson_transform(T: RepTuple, X: SubproductSystem, alpha, beta, N_trunc: int, r: float) -> np.ndarray:
    """K_r(T)* (S^alpha S^beta* (x) I) K_r(T) with the kernel truncated at N_trunc."""
    alpha, beta = tuple(alpha), tuple(beta)
    _check_poisson_args(T, N_trunc, [len(alpha) + len(beta)])
    F, K = poisson_kernel(T, X, N_trunc, r)
    op = F.word(alpha) @ F.word(beta).conj().T
    return np.einsum("fia,fg,gib->ab", K.conj(), op, K, optimize=True)


def poisson_table(T: RepTuple, X: SubproductSystem, words_, N_trunc: int, r: float) -> dict:
    """Psi(S^a S^b*) for all pairs of the given words, sharing one kernel.

    Uses Psi(S^a S^b*) = ((S^a* (x) I) K)* ((S^b* (x) I) K).
    """
    words_ = [tuple(w) for w in words_]
    _check_poisson_args(T, N_trunc, [2 * len(w) for w in words_])
    F, K = poisson_kernel(T, X, N_trunc, r)
    k = T.k
    flat = K.reshape(F.total_dim, k * k)
    lowered = {}
    for w in words_:
        v = flat
        for a in w:  # S^w* = S_wn* ... S_w1*, applied left to right
            v = F.shifts[a - 1].conj().T @ v
        lowered[w] = v.reshape(F.total_dim, k, k)
    return {
        (a, b): np.einsum("fia,fib->ab", lowered[a].conj(), lowered[b], optimize=True)
        for a in words_ for b in words_
    }


# ---------------------------------------------------------------------------

@dataclass
class VNResult:
    lhs: float
    rhs: float
    slack: float = 1e-6

    @property
    def passed(self) -> bool:
        return self.lhs <= self.rhs + self.slack


def vn_inequality_check(X: SubproductSystem, T: RepTuple, p: NCPolynomial, q: NCPolynomial,
                        N: int | None = None, F: fock.FockOperators | None = None) -> VNResult:
    """||p(T) q(T)*|| against ||p(S) q(S)*|| on the Fock space truncated at N."""
    N = X.N if N is None else N
    if max(p.degree, 0) + max(q.degree, 0) + 4 > N:
        raise InvalidInput(f"need deg p + deg q + 4 <= N = {N}")
    if F is None or F.N != N:
        F = fock.build(X.truncate(N))
    lhs = op_norm(T.poly(p) @ T.poly(q).conj().T)
    rhs = op_norm(F.poly(p) @ F.poly(q).conj().T)
    return VNResult(lhs, rhs)


# ---------------------------------------------------------------------------
# maximal pieces

@dataclass
class PieceResult:
    space: Subspace
    iterations: int
    dims: list


def maximal_piece(X: SubproductSystem, Y: SubproductSystem, T: RepTuple, tol: float = CHECK_TOL,
                  check_rep: bool = True) -> PieceResult:
    """Largest K with T~_n* K inside X(n) (x) K for all 1 <= n <= N.

    Starting from K_0 = C^k, K_(j+1) is the set of h in K_j whose images
    T~_n* h, reshaped to d^n x k matrices Z, satisfy Z = P_X(n) Z P_(K_j)^t.
    """
    N = min(X.N, Y.N)
    if X.d != Y.d or T.d != X.d:
        raise InvalidInput("dimension mismatch")
    if not X.truncate(N).is_subsystem_of(Y.truncate(N)):
        raise InvalidInput("X is not contained in Y")
    if check_rep:
        rep = is_representation(Y, T, tol)
        if not rep.passed:
            raise InvalidInput(f"T is not a representation of Y (residual {rep.max_residual:.3e})")
    adj = [_adjoint_images(A) for n, A in tilde_powers(T, N) if n > 0]
    scale = max(1.0, T.row_norm)
    Q = np.eye(T.k, dtype=complex)
    dims = [T.k]
    it = 0
    while Q.shape[1] > 0:
        it += 1
        PK = Q @ Q.conj().T
        M = np.vstack([
            _outside(X[n].frame, np.einsum("ash,hc->asc", Z, Q, optimize=True), PK).reshape(-1, Q.shape[1])
            for n, Z in enumerate(adj, start=1)
        ])
        # M has at least as many rows as columns, so vh is square
        _, s, vh = np.linalg.svd(M, full_matrices=False)
        rank = int(np.count_nonzero(s > RANK_TOL * scale))
        new_Q = Q @ vh.conj().T[:, rank:]
        dims.append(new_Q.shape[1])
        stable = new_Q.shape[1] == Q.shape[1]
        Q = new_Q
        if stable:
            break
    return PieceResult(Subspace(Q), it, dims)


def piece_residual(X: SubproductSystem, T: RepTuple, K: Subspace) -> float:
    """max_n ||(I - P_X(n) (x) P_K) T~_n* P_K||."""
    if K.dim == 0:
        return 0.0
    Q = K.frame
    PK = K.projector()
    worst = 0.0
    for n, A in tilde_powers(T, X.N):
        if n == 0:
            continue
        Z = np.einsum("ash,hc->asc", _adjoint_images(A), Q, optimize=True)
        worst = max(worst, op_norm(_outside(X[n].frame, Z, PK).reshape(-1, Q.shape[1])))
    return worst
