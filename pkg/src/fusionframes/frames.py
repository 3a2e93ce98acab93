"""Weighted subspace families (fusion frames) and their frame operator.

A family {(W_i, w_i)} with positive weights is a fusion frame when the
weighted squared projections admit two-sided norm bounds; in finite
dimension the optimal bounds are the extreme eigenvalues of the frame
operator S = sum_i w_i^2 P_i.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import InputError, NotAFrameError
from .subspaces import Subspace, map_subspace, projector
from .validation import DEFAULT_TOL, EIG_FLOOR, as_vector, frozen

#: Relative membership tolerance for synthesis inputs.
MEMBERSHIP_TOL = 1e-8

#: Relative singular-value threshold for the Riesz invertibility test.
RIESZ_RANK_TOL = 1e-10


class FrameBounds(NamedTuple):
    lower: float
    upper: float


@dataclass(frozen=True, eq=False)
class FusionFrame:
    """Ordered family of (subspace, positive weight) pairs in a common R^d."""

    subspaces: tuple[Subspace, ...]
    weights: np.ndarray

    def __init__(self, subspaces, weights):
        subspaces = tuple(subspaces)
        if not subspaces:
            raise InputError("a fusion frame needs at least one subspace")
        d = subspaces[0].ambient_dim
        for i, s in enumerate(subspaces):
            if not isinstance(s, Subspace):
                raise InputError(f"item {i} is not a Subspace")
            if s.ambient_dim != d:
                raise InputError(
                    f"subspace {i} has ambient dimension {s.ambient_dim}, expected {d}")
        w = as_vector(weights, dim=len(subspaces), name="weights")
        if np.any(w <= 0):
            bad = int(np.argmin(w))
            raise InputError(f"weight {bad} is {w[bad]}, weights must be positive")
        object.__setattr__(self, "subspaces", subspaces)
        object.__setattr__(self, "weights", frozen(w))

    @classmethod
    def from_items(cls, items) -> "FusionFrame":
        pairs = list(items)
        return cls([s for s, _ in pairs], [w for _, w in pairs])

    @property
    def ambient_dim(self) -> int:
        return self.subspaces[0].ambient_dim

    def __len__(self) -> int:
        return len(self.subspaces)

    @property
    def items(self) -> list[tuple[Subspace, float]]:
        return list(zip(self.subspaces, self.weights.tolist()))

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        dims = ",".join(str(s.dim) for s in self.subspaces)
        return f"FusionFrame(d={self.ambient_dim}, dims=[{dims}])"


@dataclass(frozen=True)
class Classification:
    """Structural flags of a weighted subspace family."""

    bessel: bool
    frame: bool
    tight: bool
    parseval: bool
    uniform: bool
    riesz_fusion_basis: bool
    orthonormal_fusion_basis: bool
    riesz_bounds: FrameBounds | None = None


@dataclass(frozen=True)
class AnalysisReport:
    """Bounds, classification and per-verdict margins for one family."""

    bounds: FrameBounds
    classification: Classification
    margins: dict[str, float]
    frame_operator: np.ndarray = field(repr=False)


def frame_operator(w: FusionFrame) -> np.ndarray:
    """The positive operator sum_i w_i^2 P_i."""
    d = w.ambient_dim
    s = np.zeros((d, d))
    for sub, weight in zip(w.subspaces, w.weights):
        s += weight**2 * projector(sub)
    return s


def frame_bounds(w: FusionFrame) -> FrameBounds:
    """Optimal bounds: the extreme eigenvalues of the frame operator."""
    eig = np.linalg.eigvalsh(frame_operator(w))
    return FrameBounds(lower=float(max(eig[0], 0.0)), upper=float(eig[-1]))


def inverse_frame_operator(w: FusionFrame) -> np.ndarray:
    """Inverse of the frame operator, via symmetric eigendecomposition.

    Raises :class:`NotAFrameError` when the smallest eigenvalue falls under
    the relative floor, i.e. the family is not a frame.
    """
    lam, q = np.linalg.eigh(frame_operator(w))
    if lam[0] <= EIG_FLOOR * max(lam[-1], 0.0) or lam[-1] <= 0.0:
        raise NotAFrameError(
            f"family is not a fusion frame: lower bound {max(lam[0], 0.0):.3e}")
    return (q / lam) @ q.T


def stacked_basis(w: FusionFrame) -> np.ndarray:
    """All local orthonormal basis columns side by side (d x sum of dims)."""
    cols = [s.basis for s in w.subspaces if not s.is_zero]
    if not cols:
        return np.zeros((w.ambient_dim, 0))
    return np.hstack(cols)


def classify(w: FusionFrame, tol: float = DEFAULT_TOL) -> Classification:
    """Classify the family: Bessel/frame/tight/Parseval/uniform/Riesz flags.

    Riesz detection stacks the local orthonormal bases into a d x d matrix;
    the family is a Riesz fusion basis iff the dimensions sum to d and that
    matrix is invertible, with squared extreme singular values as the Riesz
    bounds.  It is an orthonormal fusion basis iff the matrix is orthogonal.
    Flags describe geometry and weights separately: the Riesz flags ignore
    the weights.
    """
    lower, upper = frame_bounds(w)
    is_frame = lower > tol
    tight = is_frame and (upper - lower) <= tol
    parseval = tight and abs(upper - 1.0) <= tol and abs(lower - 1.0) <= tol
    wmin, wmax = float(w.weights.min()), float(w.weights.max())
    uniform = (wmax - wmin) <= tol

    riesz = False
    orthonormal = False
    riesz_bounds = None
    total_dim = sum(s.dim for s in w.subspaces)
    if total_dim == w.ambient_dim:
        t = stacked_basis(w)
        svals = np.linalg.svd(t, compute_uv=False)
        if svals.size and svals[-1] > RIESZ_RANK_TOL * svals[0]:
            riesz = True
            riesz_bounds = FrameBounds(float(svals[-1] ** 2), float(svals[0] ** 2))
            orthonormal = float(np.abs(t.T @ t - np.eye(total_dim)).max()) <= tol
    return Classification(
        bessel=True,
        frame=is_frame,
        tight=tight,
        parseval=parseval,
        uniform=uniform,
        riesz_fusion_basis=riesz,
        orthonormal_fusion_basis=orthonormal,
        riesz_bounds=riesz_bounds,
    )


def analyze(w: FusionFrame, tol: float = DEFAULT_TOL) -> AnalysisReport:
    """Bounds plus classification, with a signed margin per boolean verdict."""
    s = frame_operator(w)
    eig = np.linalg.eigvalsh(s)
    bounds = FrameBounds(lower=float(max(eig[0], 0.0)), upper=float(eig[-1]))
    c = classify(w, tol)
    wmin, wmax = float(w.weights.min()), float(w.weights.max())
    margins = {
        # Finite families are always Bessel; the verdict has no boundary,
        # so the margin is 0 by convention.
        "bessel": 0.0,
        "frame": bounds.lower - tol,
        "tight": tol - (bounds.upper - bounds.lower),
        "parseval": tol - max(abs(bounds.upper - 1.0), abs(bounds.lower - 1.0),
                              bounds.upper - bounds.lower),
        "uniform": tol - (wmax - wmin),
    }
    if c.riesz_bounds is not None:
        sig_min = c.riesz_bounds.lower ** 0.5
        sig_max = c.riesz_bounds.upper ** 0.5
        margins["riesz_fusion_basis"] = sig_min - RIESZ_RANK_TOL * sig_max
        t = stacked_basis(w)
        k = t.shape[1]
        margins["orthonormal_fusion_basis"] = tol - float(
            np.abs(t.T @ t - np.eye(k)).max())
    else:
        margins["riesz_fusion_basis"] = float(
            -abs(sum(s_.dim for s_ in w.subspaces) - w.ambient_dim))
        margins["orthonormal_fusion_basis"] = margins["riesz_fusion_basis"]
    return AnalysisReport(bounds=bounds, classification=c, margins=margins,
                          frame_operator=s)


def analysis(w: FusionFrame, f) -> np.ndarray:
    """Weighted projections (w_i P_i f), one row per index."""
    vec = as_vector(f, dim=w.ambient_dim, name="f")
    rows = [weight * (projector(sub) @ vec) for sub, weight in zip(w.subspaces, w.weights)]
    return np.vstack(rows)


def synthesis(w: FusionFrame, pieces, membership_tol: float = MEMBERSHIP_TOL) -> np.ndarray:
    """Weighted sum of one vector per subspace.

    The domain is the direct sum of the subspaces, so every piece must lie
    in its own subspace (relative distance at most ``membership_tol``).
    """
    arr = np.asarray(pieces, dtype=float)
    if arr.ndim != 2 or arr.shape != (len(w), w.ambient_dim):
        raise InputError(
            f"pieces must have shape {(len(w), w.ambient_dim)}, got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InputError("pieces have non-finite entries")
    for i, (sub, piece) in enumerate(zip(w.subspaces, arr)):
        dist = float(np.linalg.norm(piece - projector(sub) @ piece))
        if dist > membership_tol * max(float(np.linalg.norm(piece)), 1e-300):
            raise InputError(
                f"piece {i} lies outside its subspace (distance {dist:.3e})")
    return w.weights @ arr


def canonical_dual(w: FusionFrame, tol: float = DEFAULT_TOL) -> FusionFrame:
    """The canonical dual: subspaces mapped through the inverse frame
    operator, same weights."""
    lower = frame_bounds(w).lower
    if lower <= tol:
        raise NotAFrameError(
            f"canonical dual needs a frame; computed lower bound {lower:.3e}")
    s_inv = inverse_frame_operator(w)
    mapped = [map_subspace(s_inv, sub) for sub in w.subspaces]
    return FusionFrame(mapped, w.weights)
