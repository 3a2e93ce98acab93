"""Subspaces of R^d and their projection algebra.

A subspace is stored as a d x k matrix with orthonormal columns (k may be
zero: the zero subspace is a first-class value and projects everything to
the origin).  All operations are pure and all values are immutable, so
everything here is safe to share across threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InputError, NotOrthogonalError
from .validation import DEFAULT_RANK_TOL, DEFAULT_TOL, as_square_matrix, as_vector, frozen

#: Tolerance used to accept a basis matrix as orthonormal.
ORTH_VALIDATION_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class Subspace:
    """A subspace of R^d, represented by an orthonormal basis.

    ``basis`` has shape (d, k) with orthonormal columns; ``k == 0`` encodes
    the zero subspace.  Use :func:`orthonormalize` to build one from an
    arbitrary spanning set.
    """

    basis: np.ndarray = field()

    def __post_init__(self):
        b = np.asarray(self.basis, dtype=float)
        if b.ndim != 2:
            raise InputError(f"basis must be a 2-d array, got shape {b.shape}")
        if b.shape[0] < 1:
            raise InputError("ambient dimension must be at least 1")
        if not np.all(np.isfinite(b)):
            raise InputError("basis has non-finite entries")
        k = b.shape[1]
        if k > b.shape[0]:
            raise InputError(f"basis has {k} columns in ambient dimension {b.shape[0]}")
        if k > 0:
            gram = b.T @ b
            if np.abs(gram - np.eye(k)).max() > ORTH_VALIDATION_TOL:
                raise InputError("basis columns are not orthonormal")
        object.__setattr__(self, "basis", frozen(b))

    @property
    def ambient_dim(self) -> int:
        return self.basis.shape[0]

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    @property
    def is_zero(self) -> bool:
        return self.dim == 0

    @classmethod
    def zero(cls, ambient_dim: int) -> "Subspace":
        return cls(np.zeros((ambient_dim, 0)))

    @classmethod
    def full(cls, ambient_dim: int) -> "Subspace":
        return cls(np.eye(ambient_dim))

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"


def orthonormalize(spanning_vectors, rank_tol: float = DEFAULT_RANK_TOL,
                   ambient_dim: int | None = None) -> Subspace:
    """Orthonormal basis of the span of the given vectors.

    Rank is decided by a rank-revealing SVD: singular values above
    ``rank_tol`` times the largest one count.  The result is deterministic
    for a fixed input order.  An empty list yields the zero subspace
    (``ambient_dim`` is then required).
    """
    if rank_tol <= 0:
        raise InputError("rank_tol must be positive")
    vectors = list(spanning_vectors)
    if not vectors:
        if ambient_dim is None:
            raise InputError("ambient_dim is required for an empty spanning set")
        return Subspace.zero(ambient_dim)
    first = as_vector(vectors[0], dim=ambient_dim, name="spanning vector 0")
    d = first.shape[0]
    cols = [first] + [as_vector(v, dim=d, name=f"spanning vector {i}")
                      for i, v in enumerate(vectors[1:], start=1)]
    a = np.column_stack(cols)
    # An exactly orthonormal spanning set is kept verbatim; this keeps
    # coordinate-subspace projectors exact.
    k = a.shape[1]
    if k <= d and np.array_equal(a.T @ a, np.eye(k)):
        return Subspace(a)
    u, s, _ = np.linalg.svd(a, full_matrices=False)
    if s.size == 0 or s[0] == 0.0:
        return Subspace.zero(d)
    rank = int(np.sum(s > rank_tol * s[0]))
    return Subspace(u[:, :rank])


def projector(s: Subspace) -> np.ndarray:
    """Orthogonal projection matrix onto the subspace (d x d)."""
    if s.is_zero:
        return np.zeros((s.ambient_dim, s.ambient_dim))
    return s.basis @ s.basis.T


def operator_norm(t) -> float:
    """Spectral norm (largest singular value) of a square matrix."""
    m = as_square_matrix(t)
    return float(np.linalg.norm(m, 2))


def contains(outer: Subspace, inner: Subspace, tol: float = DEFAULT_TOL) -> bool:
    """True iff ``inner`` lies inside ``outer`` up to ``tol``.

    Measured as the spectral norm of the part of inner's basis outside
    outer; the zero subspace is contained in everything.
    """
    if outer.ambient_dim != inner.ambient_dim:
        raise InputError("subspaces live in different ambient dimensions")
    return containment_residual(outer, inner) <= tol


def containment_residual(outer: Subspace, inner: Subspace) -> float:
    """Spectral norm of (I - P_outer) applied to inner's basis."""
    if inner.is_zero:
        return 0.0
    rest = inner.basis - projector(outer) @ inner.basis
    return float(np.linalg.norm(rest, 2))


def orthogonal_complement(s: Subspace) -> Subspace:
    """The orthogonal complement; its projector plus P_s is the identity."""
    d, k = s.ambient_dim, s.dim
    if k == 0:
        return Subspace.full(d)
    if k == d:
        return Subspace.zero(d)
    u, _, _ = np.linalg.svd(s.basis, full_matrices=True)
    return Subspace(u[:, k:])


def span_union(subspaces, ambient_dim: int | None = None,
               rank_tol: float = DEFAULT_RANK_TOL) -> Subspace:
    """Smallest subspace containing every input (empty list: zero subspace)."""
    items = list(subspaces)
    if not items:
        if ambient_dim is None:
            raise InputError("ambient_dim is required for an empty union")
        return Subspace.zero(ambient_dim)
    d = items[0].ambient_dim
    for s in items:
        if s.ambient_dim != d:
            raise InputError("subspaces live in different ambient dimensions")
    columns = [s.basis for s in items if not s.is_zero]
    if not columns:
        return Subspace.zero(d)
    return orthonormalize(np.hstack(columns).T, rank_tol=rank_tol, ambient_dim=d)


def direct_sum_orthogonal(s: Subspace, u: Subspace, tol: float = DEFAULT_TOL) -> Subspace:
    """Orthogonal direct sum of two subspaces.

    ``u`` must lie in the orthogonal complement of ``s`` (within ``tol``),
    otherwise a :class:`NotOrthogonalError` reports the measured overlap.
    """
    if s.ambient_dim != u.ambient_dim:
        raise InputError("subspaces live in different ambient dimensions")
    if u.is_zero:
        return s
    if s.is_zero:
        return u
    overlap = float(np.linalg.norm(projector(s) @ u.basis, 2))
    if overlap > tol:
        raise NotOrthogonalError(
            f"summand is not orthogonal to the base subspace (overlap {overlap:.3e})")
    joint = np.hstack([s.basis, u.basis])
    out = orthonormalize(joint.T, ambient_dim=s.ambient_dim)
    if out.dim != s.dim + u.dim:
        raise NotOrthogonalError(
            f"direct sum lost rank: {out.dim} < {s.dim} + {u.dim}")
    return out


def map_subspace(l, s: Subspace, rank_tol: float = DEFAULT_RANK_TOL) -> Subspace:
    """Image of a subspace under a linear map, re-orthonormalized.

    Rank is re-detected, so a singular map may legitimately shrink the
    dimension; callers that need invertibility check it themselves.
    """
    m = as_square_matrix(l, dim=s.ambient_dim)
    if s.is_zero:
        return s
    return orthonormalize((m @ s.basis).T, rank_tol=rank_tol, ambient_dim=s.ambient_dim)


def projector_distance(a: Subspace, b: Subspace) -> float:
    """Spectral norm of the difference of the two projectors."""
    if a.ambient_dim != b.ambient_dim:
        raise InputError("subspaces live in different ambient dimensions")
    return float(np.linalg.norm(projector(a) - projector(b), 2))


def subspace_equal(a: Subspace, b: Subspace, tol: float = DEFAULT_TOL) -> bool:
    """Equality as mutual containment (basis matrices are not unique)."""
    return contains(a, b, tol) and contains(b, a, tol)
