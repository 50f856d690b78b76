"""CP maps on M_k, their powers, and the subproduct system of Kraus spaces.

Choi matrix: C = sum_ij Theta(E_ij) (x) E_ij, so C[(r, i), (s, j)] =
Theta(E_ij)[r, s]. For Theta(a) = K a K* this is v v* with v = K.reshape(-1)
(row-major), hence Kraus operators are recovered as ``v.reshape(k, k)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .kernel import (
    CHECK_TOL,
    RANK_TOL,
    InvalidInput,
    as_cmatrix,
    op_norm,
    orthonormalize,
)
from .reps import RepTuple, is_representation
from .systems import SubproductSystem


@dataclass(frozen=True, eq=False)
class CPMap:
    k: int
    choi: np.ndarray

    def __post_init__(self):
        C = as_cmatrix(self.choi, "choi")
        k2 = self.k * self.k
        if C.shape != (k2, k2):
            raise InvalidInput(f"Choi matrix must be {k2} x {k2}")
        scale = max(1.0, op_norm(C))
        if op_norm(C - C.conj().T) > CHECK_TOL * scale:
            raise InvalidInput("Choi matrix is not Hermitian")
        C = (C + C.conj().T) / 2
        C.setflags(write=False)
        object.__setattr__(self, "choi", C)

    @classmethod
    def from_kraus(cls, kraus, k: int | None = None) -> "CPMap":
        kraus = [as_cmatrix(K, "Kraus operator") for K in kraus]
        if k is None:
            if not kraus:
                raise InvalidInput("need k for an empty Kraus family")
            k = kraus[0].shape[0]
        C = np.zeros((k * k, k * k), dtype=complex)
        for K in kraus:
            if K.shape != (k, k):
                raise InvalidInput(f"Kraus operators must be {k} x {k}")
            v = K.reshape(-1)
            C += np.outer(v, v.conj())
        return cls(k, C)

    @property
    def tensor(self) -> np.ndarray:
        """C4[r, i, s, j] = Theta(E_ij)[r, s]."""
        k = self.k
        return self.choi.reshape(k, k, k, k)

    def __call__(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=complex)
        return np.einsum("ij,risj->rs", a, self.tensor, optimize=True)

    def compose(self, other: "CPMap") -> "CPMap":
        """Choi of self o other: apply self to every block other(E_ij)."""
        if other.k != self.k:
            raise InvalidInput("size mismatch")
        k = self.k
        C4 = np.einsum("rpsq,piqj->risj", self.tensor, other.tensor, optimize=True)
        return CPMap(k, C4.reshape(k * k, k * k))

    def power(self, n: int) -> "CPMap":
        if n < 0:
            raise InvalidInput("power must be >= 0")
        out = identity_map(self.k)
        for _ in range(n):
            out = self.compose(out)
        return out

    @cached_property
    def kraus(self) -> list:
        return kraus_minimal(self)

    def is_psd(self, tol: float = CHECK_TOL) -> bool:
        w = np.linalg.eigvalsh(self.choi)
        return bool(w.size == 0 or w[0] >= -tol * max(1.0, abs(w[-1])))

    def unital_defect(self) -> float:
        return op_norm(self(np.eye(self.k)) - np.eye(self.k))


def identity_map(k: int) -> CPMap:
    return CPMap.from_kraus([np.eye(k)], k)


def kraus_minimal(theta: CPMap, tol: float = RANK_TOL) -> list:
    """Kraus operators sqrt(lam) unvec(v) over Choi eigenpairs with lam > tol * lam_max."""
    w, V = np.linalg.eigh(theta.choi)
    top = w[-1] if w.size else 0.0
    if w.size and w[0] < -CHECK_TOL * max(1.0, abs(top)):
        raise InvalidInput(f"Choi matrix is not positive: eigenvalue {w[0]:.3e}")
    if top <= 0:
        return []
    keep = [l for l in range(w.size - 1, -1, -1) if w[l] > tol * top]
    k = theta.k
    return [np.sqrt(w[l]) * V[:, l].reshape(k, k) for l in keep]


@dataclass
class ArvesonFiber:
    n: int
    kraus: list

    @property
    def dim(self) -> int:
        return len(self.kraus)


def arveson_fiber(theta: CPMap, n: int) -> ArvesonFiber:
    if n < 1:
        raise InvalidInput("n must be >= 1")
    return ArvesonFiber(n, kraus_minimal(theta.power(n)))


def _vec_columns(mats) -> np.ndarray:
    return np.stack([m.reshape(-1) for m in mats], axis=1)


def coisometry_check(theta: CPMap, m: int, n: int) -> float:
    """Express A_i B_j in the minimal Kraus basis of Theta^(m+n); return max(fit residual, ||mu mu* - I||)."""
    if m < 1 or n < 1:
        raise InvalidInput("m and n must be >= 1")
    A = arveson_fiber(theta, m).kraus
    B = arveson_fiber(theta, n).kraus
    C = arveson_fiber(theta, m + n).kraus
    if not C:
        return op_norm(_vec_columns([a @ b for a in A for b in B])) if A and B else 0.0
    basis = _vec_columns(C)
    prods = _vec_columns([a @ b for a in A for b in B])
    mu, *_ = np.linalg.lstsq(basis, prods, rcond=None)
    fit = op_norm(basis @ mu - prods)
    return max(fit, op_norm(mu @ mu.conj().T - np.eye(len(C))))


@dataclass
class ArvesonSystem:
    """Standard form of the Kraus-space system of {Theta^n}.

    X(n) is the orthogonal complement of the kernel of e_a -> K^a, where
    K_1..K_d is the minimal Kraus family of Theta; R = (K_1, ..., K_d).
    """

    X: SubproductSystem
    R: RepTuple
    fiber_dims: list


def arveson_system(theta: CPMap, N: int) -> ArvesonSystem:
    K = kraus_minimal(theta)
    if not K:
        raise InvalidInput("the zero map has no Kraus operators")
    d = len(K)
    R = RepTuple(tuple(K))
    fibers = []
    mats = [np.eye(theta.k, dtype=complex)]
    for n in range(N + 1):
        if n:
            mats = [Ki @ M for Ki in K for M in mats]
        # rows of M_n^H are conj(vec(K^a)); the row space of M_n is X(n)
        M = _vec_columns(mats)
        fibers.append(orthonormalize(M.conj().T))
    X = SubproductSystem(d, N, fibers, label="arveson")
    dims = [arveson_fiber(theta, n).dim for n in range(1, N + 1)]
    return ArvesonSystem(X, R, dims)


@dataclass
class SigmaSemigroup:
    maps: list  # maps[n] = Theta_n, n = 0..N

    def semigroup_residual(self) -> float:
        """max over m + n <= N and matrix units a of ||Theta_m(Theta_n(a)) - Theta_(m+n)(a)||."""
        N = len(self.maps) - 1
        worst = 0.0
        for m in range(1, N + 1):
            for n in range(1, N + 1 - m):
                lhs = self.maps[m].compose(self.maps[n]).tensor
                rhs = self.maps[m + n].tensor
                diff = lhs - rhs
                worst = max(worst, max(op_norm(diff[:, i, :, j]) for i in range(diff.shape[1]) for j in range(diff.shape[3])))
        return worst


def sigma_semigroup(X: SubproductSystem, R: RepTuple, tol: float = CHECK_TOL) -> SigmaSemigroup:
    """Theta_n(a) = R~_n (I_X(n) (x) a) R~_n*, whose Kraus operators are sum_a F[a, j] R^a."""
    rep = is_representation(X, R, tol)
    if not rep.passed:
        raise InvalidInput(f"R is not a representation of X (residual {rep.max_residual:.3e})")
    k = R.k
    maps = [identity_map(k)]
    words = [np.eye(k, dtype=complex)]
    for n in range(1, X.N + 1):
        words = [Ri @ M for Ri in R.matrices for M in words]
        F = X[n].frame
        stack = np.stack(words)  # (d^n, k, k)
        kraus = np.einsum("aj,ars->jrs", F, stack, optimize=True)
        maps.append(CPMap.from_kraus(list(kraus), k))
    return SigmaSemigroup(maps)
