"""Dense complex linear algebra used throughout the package.

Subspaces are stored as orthonormal column frames. All rank decisions are
made from singular values relative to the largest one, and every routine is
deterministic (LAPACK SVD/eigh, no randomisation).

Index convention: ``kron(A, B)[i * B.shape[0] + k, j * B.shape[1] + l] =
A[i, j] * B[k, l]``, i.e. numpy's ``np.kron``. With words in lexicographic
order this matches concatenation ``alpha`` then ``beta``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

RANK_TOL = 1e-9
CHECK_TOL = 1e-7


class InvalidInput(ValueError):
    """Raised for malformed or out-of-range input (CLI exit code 2)."""


class NumericalFailure(ArithmeticError):
    """Raised when a numerical precondition fails (CLI exit code 3)."""


def as_cmatrix(a, name: str = "matrix") -> np.ndarray:
    """Coerce ``a`` to a 2-D complex array and reject NaN/Inf entries."""
    m = np.asarray(a, dtype=complex)
    if m.ndim == 1:
        m = m.reshape(-1, 1)
    if m.ndim != 2:
        raise InvalidInput(f"{name} must be two-dimensional, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise InvalidInput(f"{name} has non-finite entries")
    return m


@dataclass(frozen=True, eq=False)
class Subspace:
    """A subspace of C^m given by an orthonormal frame (m x k)."""

    frame: np.ndarray
    tol: float = field(default=RANK_TOL)

    def __post_init__(self):
        f = np.asarray(self.frame, dtype=complex)
        if f.ndim != 2:
            raise InvalidInput("frame must be 2-D")
        f.setflags(write=False)
        object.__setattr__(self, "frame", f)

    @property
    def ambient_dim(self) -> int:
        return self.frame.shape[0]

    @property
    def dim(self) -> int:
        return self.frame.shape[1]

    def __len__(self):
        return self.dim

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient_dim={self.ambient_dim})"

    def projector(self) -> np.ndarray:
        return self.frame @ self.frame.conj().T

    def project(self, v) -> np.ndarray:
        v = np.asarray(v, dtype=complex)
        return self.frame @ (self.frame.conj().T @ v)

    def residual(self, v) -> np.ndarray:
        """Component of ``v`` orthogonal to this subspace."""
        v = np.asarray(v, dtype=complex)
        return v - self.project(v)

    def distance(self, v) -> float:
        """Euclidean (vector) or operator (matrix) norm of the residual."""
        r = self.residual(v)
        if r.ndim == 1:
            return float(np.linalg.norm(r))
        return op_norm(r)

    def contains(self, other: "Subspace", tol: float = 1e-8) -> bool:
        _check_same_ambient(self, other)
        if other.dim == 0:
            return True
        return self.distance(other.frame) <= tol

    def equals(self, other: "Subspace", tol: float = 1e-8) -> bool:
        """Equality as subspaces: equal dimension and mutual containment."""
        return (
            self.ambient_dim == other.ambient_dim
            and self.dim == other.dim
            and self.contains(other, tol)
            and other.contains(self, tol)
        )


def _check_same_ambient(a: Subspace, b: Subspace):
    if a.ambient_dim != b.ambient_dim:
        raise InvalidInput(
            f"ambient dimension mismatch: {a.ambient_dim} vs {b.ambient_dim}"
        )


def zero_space(m: int) -> Subspace:
    return Subspace(np.zeros((m, 0), dtype=complex))


def full_space(m: int) -> Subspace:
    return Subspace(np.eye(m, dtype=complex))


def coordinate_space(m: int, indices) -> Subspace:
    """Span of the standard basis vectors e_i, i in ``indices`` (kept in order)."""
    idx = list(indices)
    f = np.zeros((m, len(idx)), dtype=complex)
    f[idx, np.arange(len(idx))] = 1.0
    return Subspace(f)


def orthonormalize(vectors, tol: float = RANK_TOL) -> Subspace:
    """Orthonormal frame for the column space of ``vectors``.

    The numerical rank counts singular values above ``tol`` times the largest.
    """
    v = as_cmatrix(vectors, "vectors")
    m, n = v.shape
    if n == 0 or m == 0:
        return Subspace(np.zeros((m, 0), dtype=complex), tol)
    u, s, _ = np.linalg.svd(v, full_matrices=False)
    if s.size == 0 or s[0] == 0.0:
        return Subspace(np.zeros((m, 0), dtype=complex), tol)
    rank = int(np.count_nonzero(s > tol * s[0]))
    return Subspace(u[:, :rank], tol)


def span(*spaces_or_vectors, tol: float = RANK_TOL) -> Subspace:
    """Sum of subspaces and/or spanning matrices with a common ambient dimension."""
    blocks = [s.frame if isinstance(s, Subspace) else as_cmatrix(s) for s in spaces_or_vectors]
    return orthonormalize(np.hstack(blocks), tol)


def complement(s: Subspace) -> Subspace:
    m, k = s.frame.shape
    if k == 0:
        return full_space(m)
    if k == m:
        return zero_space(m)
    u, _, _ = np.linalg.svd(s.frame, full_matrices=True)
    return Subspace(u[:, k:], s.tol)


def intersect(a: Subspace, b: Subspace, tol: float = RANK_TOL) -> Subspace:
    """Largest subspace contained in both ``a`` and ``b``.

    Directions of the smaller space whose sine-of-angle to the larger one is
    at most ``tol`` (right singular vectors of ``(I - P_big) F_small``).
    """
    _check_same_ambient(a, b)
    small, big = (a, b) if a.dim <= b.dim else (b, a)
    m = a.ambient_dim
    if small.dim == 0 or big.dim == 0:
        return zero_space(m)
    if big.dim == m:
        return small
    r = small.frame - big.frame @ (big.frame.conj().T @ small.frame)
    # small.dim <= m, so the reduced SVD already yields the full right factor
    _, s, vh = np.linalg.svd(r, full_matrices=False)
    sines = np.zeros(small.dim)
    sines[: s.size] = s
    keep = sines <= tol
    if not keep.any():
        return zero_space(m)
    # re-orthonormalise: the kept directions are exact up to ~tol
    return orthonormalize(small.frame @ vh.conj().T[:, keep])


def intersect_all(spaces, tol: float = RANK_TOL) -> Subspace:
    spaces = list(spaces)
    if not spaces:
        raise InvalidInput("intersect_all needs at least one subspace")
    out = spaces[0]
    for s in spaces[1:]:
        out = intersect(out, s, tol)
    return out


def kron(a, b) -> np.ndarray:
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def kron_space(a: Subspace, b: Subspace) -> Subspace:
    """Tensor product subspace; frame is the Kronecker product of the frames."""
    return Subspace(kron(a.frame, b.frame), max(a.tol, b.tol))


def op_norm(a) -> float:
    """Largest singular value (0 for empty matrices)."""
    a = np.asarray(a, dtype=complex)
    if a.size == 0:
        return 0.0
    if a.ndim == 1:
        return float(np.linalg.norm(a))
    return float(np.linalg.norm(a, 2))


def psd_sqrt(a, tol: float = CHECK_TOL) -> np.ndarray:
    """Hermitian positive square root; eigenvalues in [-tol, 0) are clamped."""
    a = as_cmatrix(a)
    if a.shape[0] != a.shape[1]:
        raise InvalidInput("psd_sqrt needs a square matrix")
    scale = max(1.0, op_norm(a))
    if op_norm(a - a.conj().T) > tol * scale:
        raise InvalidInput("psd_sqrt: matrix is not Hermitian")
    h = (a + a.conj().T) / 2
    w, v = np.linalg.eigh(h)
    if w.size and w[0] < -tol * scale:
        raise NumericalFailure(f"psd_sqrt: eigenvalue {w[0]:.3e} below -tol")
    w = np.clip(w, 0.0, None)
    return (v * np.sqrt(w)) @ v.conj().T
