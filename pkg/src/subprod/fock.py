"""The truncated X-Fock space and the X-shift.

The basis of the Fock space is the concatenation of the fiber frames of
X(0), ..., X(N); the vacuum is index 0. The shift S_i sends x in X(n) to
P_X(n+1) (e_i (x) x) and kills the top degree, so every relation check
states the degree window on which the truncation does not interfere.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import subshift
from .checks import Check
from .kernel import CHECK_TOL, InvalidInput, op_norm
from .ncpoly import NCPolynomial
from .systems import SubproductSystem


@dataclass(frozen=True, eq=False)
class FockOperators:
    X: SubproductSystem
    offsets: tuple
    shifts: tuple

    vacuum_index = 0

    @property
    def d(self) -> int:
        return self.X.d

    @property
    def N(self) -> int:
        return self.X.N

    @property
    def total_dim(self) -> int:
        return self.offsets[-1]

    def degree_slice(self, n: int) -> slice:
        return slice(self.offsets[n], self.offsets[n + 1])

    def degree_projector(self, lo: int, hi: int) -> np.ndarray:
        """Diagonal projection onto degrees lo..hi (inclusive)."""
        diag = np.zeros(self.total_dim)
        lo, hi = max(lo, 0), min(hi, self.N)
        if lo <= hi:
            diag[self.offsets[lo]: self.offsets[hi + 1]] = 1.0
        return np.diag(diag).astype(complex)

    def compress(self, T: np.ndarray, lo: int, hi: int) -> np.ndarray:
        """Block of T with rows and columns in degrees lo..hi."""
        lo, hi = max(lo, 0), min(hi, self.N)
        if lo > hi:
            return np.zeros((0, 0), dtype=complex)
        s = slice(self.offsets[lo], self.offsets[hi + 1])
        return T[s, s]

    @cached_property
    def vacuum(self) -> np.ndarray:
        v = np.zeros(self.total_dim, dtype=complex)
        v[0] = 1.0
        return v

    @cached_property
    def degrees(self) -> np.ndarray:
        """Degree of every basis vector."""
        return np.repeat(np.arange(self.N + 1), np.diff(self.offsets))

    def word(self, w) -> np.ndarray:
        """S^w = S_(w1) ... S_(wn)."""
        out = np.eye(self.total_dim, dtype=complex)
        for a in w:
            out = out @ self.shifts[a - 1]
        return out

    def apply_word(self, w, v: np.ndarray) -> np.ndarray:
        for a in reversed(tuple(w)):
            v = self.shifts[a - 1] @ v
        return v

    def poly(self, p: NCPolynomial) -> np.ndarray:
        """p(S) as a dense matrix."""
        if p.d != self.d:
            raise InvalidInput(f"polynomial in {p.d} variables, system has d = {self.d}")
        out = np.zeros((self.total_dim, self.total_dim), dtype=complex)
        for w, c in p.terms.items():
            out += c * self.word(w)
        return out

    def row(self) -> np.ndarray:
        """The row operator [S_1 ... S_d]."""
        return np.hstack(self.shifts)


def build(X: SubproductSystem) -> FockOperators:
    d, N = X.d, X.N
    dims = X.dims
    offsets = tuple(int(o) for o in np.concatenate([[0], np.cumsum(dims)]))
    total = offsets[-1]
    shifts = []
    for i in range(d):
        S = np.zeros((total, total), dtype=complex)
        for n in range(N):
            Fn, Fm = X[n].frame, X[n + 1].frame
            if Fn.shape[1] == 0 or Fm.shape[1] == 0:
                continue
            # rows of e_i (x) C^(d^n) inside C^(d^(n+1))
            rows = Fm[i * d**n: (i + 1) * d**n, :]
            S[offsets[n + 1]: offsets[n + 2], offsets[n]: offsets[n + 1]] = rows.conj().T @ Fn
        S.setflags(write=False)
        shifts.append(S)
    return FockOperators(X, offsets, tuple(shifts))


def row_norm(F: FockOperators) -> float:
    return op_norm(F.row())


def pairwise_orthogonality(F: FockOperators) -> float:
    """max_(i != j) ||S_i* S_j||. Zero for monomial systems, not in general."""
    worst = 0.0
    for i in range(F.d):
        for j in range(F.d):
            if i != j:
                worst = max(worst, op_norm(F.shifts[i].conj().T @ F.shifts[j]))
    return worst


def _cuntz_sum(F: FockOperators, k: int) -> np.ndarray:
    """sum_(|a| = k) S^a S^a*, built as D_k = sum_i S_i D_(k-1) S_i*."""
    D = np.eye(F.total_dim, dtype=complex)
    for _ in range(k):
        D = sum(S @ D @ S.conj().T for S in F.shifts)
    return D


def check_cuntz_defect(F: FockOperators, k: int = 1) -> float:
    """||(I - sum_(|a|=k) S^a S^a*) - P_W|| on degrees 0..N-k, W = degrees < k."""
    if not 1 <= k <= F.N:
        raise InvalidInput(f"k must be in 1..{F.N}")
    defect = np.eye(F.total_dim, dtype=complex) - _cuntz_sum(F, k) - F.degree_projector(0, k - 1)
    return op_norm(F.compress(defect, 0, F.N - k))


def cuntz_check(F: FockOperators, k: int = 1, tol: float = CHECK_TOL) -> Check:
    return Check(f"cuntz_k{k}", check_cuntz_defect(F, k), tol, (0, F.N - k))


def shift_membership_residual(F: FockOperators, p: NCPolynomial) -> float:
    """||p(S) Omega||; equals the distance of p(e) from the ideal component."""
    if not p.is_homogeneous():
        raise InvalidInput("membership needs a homogeneous polynomial")
    if p.degree > F.N:
        raise InvalidInput(f"degree {p.degree} exceeds truncation N = {F.N}")
    v = np.zeros(F.total_dim, dtype=complex)
    for w, c in p.terms.items():
        v += c * F.apply_word(w, F.vacuum)
    return float(np.linalg.norm(v))


def membership_via_shift(F: FockOperators, p: NCPolynomial, tol: float = CHECK_TOL) -> bool:
    if p.is_zero():
        return True
    return shift_membership_residual(F, p) <= tol * p.coeff_norm()


def gauge_unitary(F: FockOperators, t: float) -> np.ndarray:
    """Diagonal unitary multiplying degree n by exp(i n t)."""
    return np.diag(np.exp(1j * t * F.degrees))


def graded_component_extract(F: FockOperators, T, n: int) -> np.ndarray:
    """Phi_n(T): the blocks of T from degree m to degree m + n, all else zero."""
    T = np.asarray(T, dtype=complex)
    if T.shape != (F.total_dim, F.total_dim):
        raise InvalidInput(f"operator must be {F.total_dim} x {F.total_dim}")
    deg = F.degrees
    mask = (deg[:, None] - deg[None, :]) == n
    return np.where(mask, T, 0.0)


def subshift_relations_check(
    F: FockOperators,
    k: int | None = None,
    tol: float = CHECK_TOL,
    ortho_tol: float = 1e-12,
    window_c: tuple | None = None,
) -> list:
    """Cuntz-Krieger type relations for the shift of a pruned monomial system.

    (a) S_i* S_j = 0 for i != j on all degrees;
    (b) sum_i S_i S_i* = I on degrees [1, N-1];
    (c) S_i* S_i = sum_(a in E_i^k) S^a S^a* on degrees [k, N-1] by default.
    """
    X = F.X
    if X.forbidden is None or not X.pruned:
        raise InvalidInput("subshift relations need a system from pruned forbidden words")
    W = X.forbidden
    step = subshift.step(W)
    if k is None:
        k = step
    if step > k:
        raise InvalidInput(f"forbidden words of length {step + 1} do not define a {k}-step shift")
    N = F.N
    eye = np.eye(F.total_dim, dtype=complex)
    reports = [Check("subshift_orthogonal", pairwise_orthogonality(F), ortho_tol, (0, N))]

    total = sum(S @ S.conj().T for S in F.shifts)
    reports.append(Check("subshift_row_unitary", op_norm(F.compress(total - eye, 1, N - 1)), tol, (1, N - 1)))

    lo, hi = window_c if window_c is not None else (k, N - 1)
    ext = subshift.extension_sets(W, X.d, k)
    worst = 0.0
    for i, S in enumerate(F.shifts, start=1):
        rhs = np.zeros_like(eye)
        for a in ext[i]:
            Sa = F.word(a)
            rhs += Sa @ Sa.conj().T
        worst = max(worst, op_norm(F.compress(S.conj().T @ S - rhs, lo, hi)))
    reports.append(Check(f"subshift_extension_k{k}", worst, tol, (lo, hi)))
    return reports
