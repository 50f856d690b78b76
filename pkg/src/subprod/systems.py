"""Standard subproduct systems over N, truncated at degree N.

A system is stored as its fibers X(0..N), each a :class:`Subspace` of
C^(d^n) in lexicographic word order (X(0) = C). Fibers are compared as
subspaces (dimension plus mutual containment), never by frame identity.
"""
from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import subshift
from .kernel import (
    CHECK_TOL,
    InvalidInput,
    Subspace,
    complement,
    coordinate_space,
    full_space,
    intersect,
    kron_space,
    op_norm,
    orthonormalize,
)
from .ncpoly import HomogeneousIdeal, embed_coeff, word_index

DEFAULT_N = {1: 12, 2: 8, 3: 6}


def default_N(d: int) -> int:
    return DEFAULT_N.get(d, 4)


@dataclass(frozen=True, eq=False)
class SubproductSystem:
    d: int
    N: int
    fibers: tuple
    # monomial systems built from forbidden words remember where they came from
    forbidden: tuple | None = None
    pruned: bool = False
    label: str = field(default="")

    def __post_init__(self):
        fibers = tuple(self.fibers)
        if len(fibers) != self.N + 1:
            raise InvalidInput(f"expected {self.N + 1} fibers, got {len(fibers)}")
        for n, f in enumerate(fibers):
            if f.ambient_dim != self.d**n:
                raise InvalidInput(f"fiber {n} lives in C^{f.ambient_dim}, expected C^{self.d ** n}")
        if fibers[0].dim != 1:
            raise InvalidInput("X(0) must be C")
        object.__setattr__(self, "fibers", fibers)

    def __getitem__(self, n: int) -> Subspace:
        return self.fibers[n]

    def __repr__(self):
        tag = f" {self.label}" if self.label else ""
        return f"<SubproductSystem{tag} d={self.d} N={self.N} dims={self.dims}>"

    @property
    def dims(self) -> list:
        return [f.dim for f in self.fibers]

    def truncate(self, N: int) -> "SubproductSystem":
        if N > self.N:
            raise InvalidInput(f"cannot extend truncation from {self.N} to {N}")
        return SubproductSystem(self.d, N, self.fibers[: N + 1], self.forbidden, self.pruned, self.label)

    def equals(self, other: "SubproductSystem", tol: float = 1e-8) -> bool:
        if self.d != other.d:
            return False
        n = min(self.N, other.N)
        return all(self[i].equals(other[i], tol) for i in range(n + 1))

    def is_subsystem_of(self, other: "SubproductSystem", tol: float = 1e-8) -> bool:
        n = min(self.N, other.N)
        return self.d == other.d and all(other[i].contains(self[i], tol) for i in range(n + 1))


def _vacuum() -> Subspace:
    return full_space(1)


def full(d: int, N: int) -> SubproductSystem:
    return SubproductSystem(d, N, [full_space(d**n) for n in range(N + 1)], label="full")


def _next_maximal(prev: Subspace, d: int) -> Subspace:
    e = full_space(d)
    return intersect(kron_space(prev, e), kron_space(e, prev))


def from_ideal(J: HomogeneousIdeal, N: int) -> SubproductSystem:
    """X_J(n) = C^(d^n) minus the degree-n part of J.

    Built degree by degree from
    ``X(n) = (E (x) X(n-1)) & (X(n-1) (x) E) & {g(e) : deg g = n}^perp``,
    which is the orthogonal complement of
    ``I^(n) = E (x) I^(n-1) + I^(n-1) (x) E + span(deg-n generators)``.
    """
    d = J.d
    fibers = [_vacuum()]
    for n in range(1, N + 1):
        if n == 1:
            cur = full_space(d)
        else:
            cur = _next_maximal(fibers[-1], d)
        gens = J.generators_of_degree(n)
        if gens and cur.dim:
            G = np.stack([embed_coeff(g, n) for g in gens], axis=1)
            cur = _remove_directions(cur, G)
        fibers.append(cur)
    return SubproductSystem(d, N, fibers, label="ideal")


def _remove_directions(S: Subspace, vectors: np.ndarray) -> Subspace:
    """S intersected with the orthogonal complement of the columns of ``vectors``."""
    coupling = vectors.conj().T @ S.frame  # (g, k); kernel = directions orthogonal to all
    _, s, vh = np.linalg.svd(coupling, full_matrices=True)
    scale = max(s[0] if s.size else 0.0, 1.0)
    rank = int(np.count_nonzero(s > S.tol * scale))
    return Subspace(S.frame @ vh.conj().T[:, rank:], S.tol)


def system_from_components(components, d: int) -> SubproductSystem:
    """Fibers X(n) = complement of the given degree-n ideal components (n >= 1)."""
    fibers = [_vacuum()] + [complement(c) for c in components]
    return SubproductSystem(d, len(components), fibers)


def check_prescribed(prescribed, d: int, tol: float = CHECK_TOL):
    """Max violation of p_n <= p_i (x) I and p_n <= I (x) p_j over i + j = n <= k.

    Returns ``(residual, (i, j))`` of the worst pair, ``(0.0, None)`` if none.
    """
    fibers = [_vacuum()] + list(prescribed)
    worst, where = 0.0, None
    k = len(prescribed)
    for n in range(2, k + 1):
        for i in range(1, n):
            j = n - i
            left = kron_space(fibers[i], full_space(d**j))
            right = kron_space(full_space(d**i), fibers[j])
            r = max(left.distance(fibers[n].frame), right.distance(fibers[n].frame)) if fibers[n].dim else 0.0
            if r > worst:
                worst, where = r, (i, j)
    return worst, where


def maximal_from_fibers(prescribed, N: int, d: int | None = None, tol: float = CHECK_TOL) -> SubproductSystem:
    """Maximal standard system with prescribed fibers X(1..k).

    For n > k, X(n) is the intersection over i + j = n of X(i) (x) E^j and
    E^i (x) X(j). Once the lower fibers form a standard system, the smallest
    terms are those with i = n - 1 and j = n - 1, so only those two are
    intersected.
    """
    prescribed = list(prescribed)
    if not prescribed:
        raise InvalidInput("need at least X(1)")
    if d is None:
        d = prescribed[0].ambient_dim
    for n, f in enumerate(prescribed, start=1):
        if f.ambient_dim != d**n:
            raise InvalidInput(f"prescribed fiber {n} must live in C^{d ** n}")
    res, where = check_prescribed(prescribed, d)
    if res > tol:
        raise InvalidInput(f"prescribed fibers are inconsistent at (i, j) = {where}: residual {res:.3e}")
    fibers = [_vacuum()] + prescribed[:N]
    for n in range(len(fibers), N + 1):
        fibers.append(_next_maximal(fibers[-1], d))
    return SubproductSystem(d, N, fibers, label="maximal")


def from_forbidden_words(W, d: int, N: int, prune: bool = False) -> SubproductSystem:
    """X(n) = span{e_a : a in the language at length n}."""
    W = subshift.normalize_forbidden(W, d)
    fibers = []
    for n in range(N + 1):
        ws = subshift.language(W, d, n, prune)
        fibers.append(coordinate_space(d**n, [word_index(w, d) for w in ws]))
    return SubproductSystem(d, N, fibers, forbidden=W, pruned=prune, label="forbidden")


def symmetric_fiber(d: int, n: int) -> Subspace:
    """Symmetric tensors in (C^d)^(x)n: one normalized orbit sum per multiset."""
    orbits: dict = {}
    for idx, w in enumerate(itertools.product(range(1, d + 1), repeat=n)):
        orbits.setdefault(tuple(sorted(w)), []).append(idx)
    frame = np.zeros((d**n, len(orbits)), dtype=complex)
    for col, key in enumerate(sorted(orbits)):
        members = orbits[key]
        frame[members, col] = 1.0 / math.sqrt(len(members))
    return Subspace(frame)


def symmetric(d: int, N: int) -> SubproductSystem:
    if d < 1:
        raise InvalidInput("d must be >= 1")
    return SubproductSystem(d, N, [symmetric_fiber(d, n) for n in range(N + 1)], label="symmetric")


def check_admissible(q, tol: float = 1e-12) -> np.ndarray:
    q = np.asarray(q, dtype=complex)
    if q.ndim != 2 or q.shape[0] != q.shape[1]:
        raise InvalidInput("q must be a square matrix")
    d = q.shape[0]
    for i in range(d):
        if abs(q[i, i]) > tol:
            raise InvalidInput("q must have zero diagonal")
        for j in range(d):
            if i != j:
                if q[i, j] == 0:
                    raise InvalidInput(f"q[{i},{j}] must be nonzero")
                if abs(q[i, j] * q[j, i] - 1) > 1e-9:
                    raise InvalidInput(f"q[{i},{j}] * q[{j},{i}] must be 1")
    return q


def q_relations(q) -> np.ndarray:
    """Columns e_i (x) e_j - q_ij e_j (x) e_i for i < j."""
    q = np.asarray(q, dtype=complex)
    d = q.shape[0]
    cols = []
    for i, j in itertools.combinations(range(d), 2):
        v = np.zeros(d * d, dtype=complex)
        v[i * d + j] += 1.0
        v[j * d + i] -= q[i, j]
        cols.append(v)
    return np.stack(cols, axis=1) if cols else np.zeros((d * d, 0), dtype=complex)


def q_commuting(q, N: int) -> SubproductSystem:
    q = check_admissible(q)
    d = q.shape[0]
    x2 = complement(orthonormalize(q_relations(q)))
    X = maximal_from_fibers([full_space(d), x2], N, d)
    return SubproductSystem(d, N, X.fibers, label="q")


def from_matrix_A(A, N: int) -> SubproductSystem:
    """Maximal system with X(2) = E (x) E minus the vector sum_ij a_ij e_i (x) e_j."""
    A = np.asarray(A, dtype=complex)
    if A.shape != (2, 2):
        raise InvalidInput("A must be 2 x 2")
    d = 2
    if not np.any(A):
        warnings.warn("A = 0: X_A(2) is the full space", stacklevel=2)
        x2 = full_space(4)
    else:
        x2 = complement(orthonormalize(A.reshape(-1, 1)))
    X = maximal_from_fibers([full_space(d), x2], N, d)
    return SubproductSystem(d, N, X.fibers, label="matrixA")


# ---------------------------------------------------------------------------
# validation and the ideal of a system

@dataclass
class StandardReport:
    residuals: dict
    max_residual: float
    worst: tuple | None
    tol: float

    @property
    def passed(self) -> bool:
        return self.max_residual <= self.tol


def _apply_pair_projection(P_m: Subspace, P_n: Subspace, frame: np.ndarray) -> np.ndarray:
    """(P_m (x) P_n) applied to each column of ``frame`` without forming the Kronecker product."""
    a, b = P_m.ambient_dim, P_n.ambient_dim
    cols = frame.shape[1]
    Z = frame.T.reshape(cols, a, b)
    Fm, Fn = P_m.frame, P_n.frame
    # P_m Z P_n^t = Fm (Fm* Z conj(Fn)) Fn^t
    core = np.einsum("ai,cab,bj->cij", Fm.conj(), Z, Fn.conj(), optimize=True)
    Z = np.einsum("ai,cij,bj->cab", Fm, core, Fn, optimize=True)
    return Z.reshape(cols, a * b).T


def validate_standard(X: SubproductSystem, tol: float = CHECK_TOL) -> StandardReport:
    """Residuals ||(P_m (x) P_n) P_(m+n) - P_(m+n)|| for all m, n >= 1 with m + n <= N."""
    residuals = {}
    worst, where = 0.0, None
    for total in range(2, X.N + 1):
        F = X[total].frame
        for m in range(1, total):
            n = total - m
            if F.shape[1] == 0:
                r = 0.0
            else:
                r = op_norm(F - _apply_pair_projection(X[m], X[n], F))
            residuals[(m, n)] = r
            if r > worst:
                worst, where = r, (m, n)
    return StandardReport(residuals, worst, where, tol)


def ideal_of(X: SubproductSystem) -> list:
    """Degree-n components (n = 1..N) of the ideal of X: complements of X(n)."""
    return [complement(X[n]) for n in range(1, X.N + 1)]


# ---------------------------------------------------------------------------
# isomorphisms

def permutation_unitary(sigma, d: int) -> np.ndarray:
    """U with U e_i = e_sigma(i) (0-based sigma)."""
    U = np.zeros((d, d), dtype=complex)
    for i, s in enumerate(sigma):
        U[s, i] = 1.0
    return U


def tensor_power(U: np.ndarray, n: int) -> np.ndarray:
    out = np.eye(1, dtype=complex)
    for _ in range(n):
        out = np.kron(out, U)
    return out


@dataclass
class IsoCheck:
    fiber_residual: float
    product_residual: float
    fiber_maps: list

    @property
    def residual(self) -> float:
        return max(self.fiber_residual, self.product_residual)


def verify_isomorphism(X: SubproductSystem, Y: SubproductSystem, U) -> IsoCheck:
    """Check that the unitary U on C^d induces an isomorphism X -> Y up to min(N).

    Two residuals: V_n = U^(x)n must map X(n) onto Y(n), and the products must
    intertwine, V_(m+n) P^X_(m+n) (x (x) y) = P^Y_(m+n) (V_m x (x) V_n y) on
    X(m) (x) X(n). ``fiber_maps`` are the unitaries Y(n)* V_n X(n).
    """
    U = np.asarray(U, dtype=complex)
    N = min(X.N, Y.N)
    fib, prod = 0.0, 0.0
    maps = []
    Vs = [tensor_power(U, n) for n in range(N + 1)]
    for n in range(N + 1):
        if X[n].dim != Y[n].dim:
            fib = max(fib, 1.0)
            maps.append(None)
            continue
        img = Vs[n] @ X[n].frame
        fib = max(fib, Y[n].distance(img) if img.shape[1] else 0.0)
        maps.append(Y[n].frame.conj().T @ img)
    for total in range(2, N + 1):
        if X[total].dim == 0 and Y[total].dim == 0:
            continue
        for m in range(1, total):
            n = total - m
            dom = np.kron(X[m].frame, X[n].frame)
            lhs = Vs[total] @ X[total].project(dom)
            rhs = Y[total].project(np.kron(Vs[m] @ X[m].frame, Vs[n] @ X[n].frame))
            prod = max(prod, op_norm(lhs - rhs))
    return IsoCheck(fib, prod, maps)


@dataclass
class QIsomorphism:
    sigma: tuple
    check: IsoCheck


def iso_q(q, r, N: int | None = None, tol: float = 1e-9) -> QIsomorphism | None:
    """Search permutations sigma with r[sigma(i), sigma(j)] = q[i, j].

    Requires q_ij != 1 and r_ij != 1 off the diagonal. On success the induced
    basis permutation is verified fiberwise up to degree N.
    """
    q = check_admissible(q)
    r = check_admissible(r)
    d = q.shape[0]
    if r.shape != q.shape:
        raise InvalidInput("q and r must have the same size")
    off = ~np.eye(d, dtype=bool)
    if np.any(np.abs(q[off] - 1) <= tol) or np.any(np.abs(r[off] - 1) <= tol):
        raise InvalidInput("iso_q requires q_ij != 1 and r_ij != 1 for all i != j")
    if N is None:
        N = default_N(d)
    for sigma in itertools.permutations(range(d)):
        s = np.array(sigma)
        if np.max(np.abs(r[np.ix_(s, s)] - q)) <= tol:
            check = verify_isomorphism(q_commuting(q, N), q_commuting(r, N), permutation_unitary(sigma, d))
            return QIsomorphism(tuple(sigma), check)
    return None


# ---------------------------------------------------------------------------
# 2 x 2 matrix systems

J2 = np.array([[0, 1], [-1, 0]], dtype=complex)


@dataclass(frozen=True)
class AInvariants:
    """Invariants of A under A -> lam U^t A U (lam != 0, U unitary).

    ``ratio`` is (s1, s2, |c|) scaled to unit length, with s1 >= s2 the
    singular values of the symmetric part and A^a = c J. ``phase`` is the
    argument of c^2 / det(A^s) when both are nonzero (else None); the triple
    alone does not separate classes when the symmetric part has rank 2.
    """

    rank_sym: int
    rank_antisym: int
    ratio: tuple
    phase: float | None

    def matches(self, other: "AInvariants", tol: float = 1e-7) -> bool:
        if (self.rank_sym, self.rank_antisym) != (other.rank_sym, other.rank_antisym):
            return False
        if max(abs(a - b) for a, b in zip(self.ratio, other.ratio)) > tol:
            return False
        if (self.phase is None) != (other.phase is None):
            return False
        if self.phase is not None:
            dphi = (self.phase - other.phase + np.pi) % (2 * np.pi) - np.pi
            return abs(dphi) <= tol
        return True


def classify_A(A, tol: float = 1e-9) -> AInvariants:
    A = np.asarray(A, dtype=complex)
    if A.shape != (2, 2):
        raise InvalidInput("A must be 2 x 2")
    scale = op_norm(A)
    if scale == 0:
        raise InvalidInput("A must be nonzero")
    As = (A + A.T) / 2
    c = (A[0, 1] - A[1, 0]) / 2
    s = np.linalg.svd(As, compute_uv=False)
    rank_sym = int(np.count_nonzero(s > tol * scale))
    rank_antisym = 2 if abs(c) > tol * scale else 0
    triple = np.array([s[0], s[1], abs(c)])
    triple = triple / np.linalg.norm(triple)
    phase = None
    if rank_sym == 2 and rank_antisym:
        phase = float(np.angle(c * c / np.linalg.det(As)))
    return AInvariants(rank_sym, rank_antisym, tuple(float(t) for t in triple), phase)


# ---------------------------------------------------------------------------

def n3_obstruction_check() -> float:
    """||I_2 (x) F - F (x) I_2|| on C^8 with F the flip of C^2 (x) C^2."""
    F = np.zeros((4, 4))
    for i, j in itertools.product(range(2), repeat=2):
        F[j * 2 + i, i * 2 + j] = 1.0
    I2 = np.eye(2)
    return op_norm(np.kron(I2, F) - np.kron(F, I2))
