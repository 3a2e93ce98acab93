"""Discrete (vector) frames derived from weighted subspace families.

The bridge between the subspace picture and ordinary vector frames: a
family {(W_i, w_i)} has bounds A, B exactly when the projections of an
orthonormal basis, {w_i P_i e_j}, form a vector frame with the same
bounds; and local frames for the subspaces flatten to a global frame with
a sandwich bound.  Flattened families keep their (i, j) index map, ordered
by i then j.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InputError, NotAFrameError
from .frames import FrameBounds, FusionFrame, frame_bounds, inverse_frame_operator
from .subspaces import Subspace, projector
from .validation import DEFAULT_RANK_TOL, EIG_FLOOR, frozen

#: Relative tolerance for membership of local vectors in their subspace.
LOCAL_MEMBERSHIP_TOL = 1e-8

#: Tolerance for accepting a vector family as an orthonormal basis.
ONB_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class DiscreteFrame:
    """Ordered list of vectors in R^d, one per row.

    ``index_map`` records the (i, j) origin of each row when the family was
    flattened from per-subspace data; zero vectors are retained so the map
    stays rectangular-free but complete.
    """

    vectors: np.ndarray
    index_map: tuple[tuple[int, int], ...] | None = None

    def __post_init__(self):
        v = np.asarray(self.vectors, dtype=float)
        if v.ndim != 2:
            raise InputError(f"vectors must form a 2-d array, got shape {v.shape}")
        if v.shape[0] == 0:
            raise InputError("a discrete frame needs at least one vector")
        if not np.all(np.isfinite(v)):
            raise InputError("vectors have non-finite entries")
        if self.index_map is not None and len(self.index_map) != v.shape[0]:
            raise InputError("index_map length does not match the vector count")
        object.__setattr__(self, "vectors", frozen(v))

    @classmethod
    def standard_basis(cls, dim: int) -> "DiscreteFrame":
        return cls(np.eye(dim))

    @property
    def ambient_dim(self) -> int:
        return self.vectors.shape[1]

    def __len__(self) -> int:
        return self.vectors.shape[0]


def frame_operator_discrete(f: DiscreteFrame) -> np.ndarray:
    return f.vectors.T @ f.vectors


def frame_bounds_discrete(f: DiscreteFrame) -> FrameBounds:
    """Extreme eigenvalues of sum_k f_k f_k^T."""
    eig = np.linalg.eigvalsh(frame_operator_discrete(f))
    return FrameBounds(lower=float(max(eig[0], 0.0)), upper=float(eig[-1]))


def composite_operator(f: DiscreteFrame, g: DiscreteFrame) -> np.ndarray:
    """The operator sum_k g_k f_k^T, i.e. x -> sum_k <x, f_k> g_k."""
    if len(f) != len(g):
        raise InputError(f"vector counts differ: {len(f)} vs {len(g)}")
    if f.ambient_dim != g.ambient_dim:
        raise InputError("families live in different ambient dimensions")
    return g.vectors.T @ f.vectors


def canonical_dual_discrete(f: DiscreteFrame) -> DiscreteFrame:
    """The dual family {S^-1 f_k}; composing with the original gives I."""
    s = frame_operator_discrete(f)
    lam, q = np.linalg.eigh(s)
    if lam[0] <= EIG_FLOOR * max(lam[-1], 0.0) or lam[-1] <= 0.0:
        raise NotAFrameError(
            f"family does not span: lower bound {max(lam[0], 0.0):.3e}")
    s_inv = (q / lam) @ q.T
    return DiscreteFrame(f.vectors @ s_inv, index_map=f.index_map)


def _require_onb(e: DiscreteFrame, d: int) -> None:
    if e.ambient_dim != d:
        raise InputError(
            f"basis lives in dimension {e.ambient_dim}, expected {d}")
    if len(e) != d:
        raise InputError(f"an orthonormal basis of R^{d} needs {d} vectors, got {len(e)}")
    gram = e.vectors @ e.vectors.T
    err = float(np.abs(gram - np.eye(d)).max())
    if err > ONB_TOL:
        raise InputError(f"family is not orthonormal (Gram deviation {err:.3e})")


def local_frame_from_onb(w: FusionFrame, e: DiscreteFrame) -> DiscreteFrame:
    """Flatten {w_i P_i e_j} over an orthonormal basis {e_j}.

    The result is a vector frame with exactly the fusion bounds of ``w``;
    zero rows are kept so indices line up with (i, j).
    """
    _require_onb(e, w.ambient_dim)
    rows, index = [], []
    for i, (sub, weight) in enumerate(zip(w.subspaces, w.weights)):
        p = projector(sub)
        for j, basis_vec in enumerate(e.vectors):
            rows.append(weight * (p @ basis_vec))
            index.append((i, j))
    return DiscreteFrame(np.vstack(rows), index_map=tuple(index))


@dataclass(frozen=True, eq=False)
class LocalFrameFamily:
    """One vector frame per subspace, with per-index and aggregate bounds.

    Bounds are computed inside each subspace's coordinate chart, so they
    are the frame bounds for the subspace itself, not for the ambient
    space.  Zero-dimensional subspaces carry empty families and do not
    enter the aggregates.
    """

    subspaces: tuple[Subspace, ...]
    families: tuple[np.ndarray, ...]
    local_bounds: tuple[FrameBounds | None, ...]
    aggregate: FrameBounds

    @classmethod
    def build(cls, subspaces, vector_lists,
              membership_tol: float = LOCAL_MEMBERSHIP_TOL,
              rank_tol: float = DEFAULT_RANK_TOL) -> "LocalFrameFamily":
        subspaces = tuple(subspaces)
        raw = list(vector_lists)
        if len(raw) != len(subspaces):
            raise InputError(
                f"{len(raw)} local families for {len(subspaces)} subspaces")
        lists = []
        for i, vecs in enumerate(raw):
            if len(vecs) == 0:
                lists.append(np.zeros((0, subspaces[i].ambient_dim)))
                continue
            try:
                arr = np.asarray(vecs, dtype=float)
            except ValueError as exc:
                raise InputError(f"local family {i} is not a numeric grid") from exc
            if arr.ndim != 2:
                raise InputError(
                    f"local family {i} must be a list of equal-length vectors")
            lists.append(arr)
        bounds: list[FrameBounds | None] = []
        for i, (sub, vecs) in enumerate(zip(subspaces, lists)):
            if vecs.size and vecs.shape[1] != sub.ambient_dim:
                raise InputError(
                    f"local family {i} has vectors of length {vecs.shape[1]}, "
                    f"expected {sub.ambient_dim}")
            if not np.all(np.isfinite(vecs)):
                raise InputError(f"local family {i} has non-finite entries")
            if sub.is_zero:
                if vecs.size and np.abs(vecs).max() > 0:
                    raise InputError(
                        f"local family {i} is nonzero on a zero subspace")
                bounds.append(None)
                continue
            if vecs.shape[0] == 0:
                raise InputError(f"local family {i} is empty but its subspace is not")
            p = projector(sub)
            for j, v in enumerate(vecs):
                dist = float(np.linalg.norm(v - p @ v))
                if dist > membership_tol * max(float(np.linalg.norm(v)), 1e-300):
                    raise InputError(
                        f"vector ({i},{j}) lies outside subspace {i} "
                        f"(distance {dist:.3e})")
            coords = vecs @ sub.basis
            svals = np.linalg.svd(coords, compute_uv=False)
            if svals.size < sub.dim or svals[min(sub.dim, len(svals)) - 1] <= rank_tol * svals[0]:
                raise InputError(f"local family {i} does not span its subspace")
            lam = np.linalg.eigvalsh(coords.T @ coords)
            bounds.append(FrameBounds(float(lam[0]), float(lam[-1])))
        active = [b for b in bounds if b is not None]
        if not active:
            raise InputError("all subspaces are zero-dimensional")
        aggregate = FrameBounds(min(b.lower for b in active),
                                max(b.upper for b in active))
        obj = object.__new__(cls)
        object.__setattr__(obj, "subspaces", subspaces)
        object.__setattr__(obj, "families", tuple(frozen(v) for v in lists))
        object.__setattr__(obj, "local_bounds", tuple(bounds))
        object.__setattr__(obj, "aggregate", aggregate)
        return obj


def global_from_local(w: FusionFrame, locals_: LocalFrameFamily) -> tuple[DiscreteFrame, FrameBounds]:
    """Flatten {w_i f_{i,j}} and return it with its guaranteed bound window.

    The guarantee is (a*C, b*D): local aggregate bounds times the fusion
    bounds of ``w``.  The actual discrete bounds always land inside it.
    """
    if len(locals_.subspaces) != len(w):
        raise InputError(
            f"{len(locals_.subspaces)} local families for {len(w)} subspaces")
    for i, (sub, fam_sub) in enumerate(zip(w.subspaces, locals_.subspaces)):
        if fam_sub is not sub and float(np.abs(projector(fam_sub) - projector(sub)).max()) > 1e-8:
            raise InputError(f"local family {i} was built for a different subspace")
    rows, index = [], []
    for i, (weight, vecs) in enumerate(zip(w.weights, locals_.families)):
        for j, v in enumerate(vecs):
            rows.append(weight * v)
            index.append((i, j))
    if not rows:
        raise InputError("no local vectors to flatten")
    c, d = frame_bounds(w)
    a, b = locals_.aggregate
    guarantee = FrameBounds(a * c, b * d)
    return DiscreteFrame(np.vstack(rows), index_map=tuple(index)), guarantee


def approx_dual_local_pair(w: FusionFrame, v: FusionFrame,
                           e: DiscreteFrame) -> tuple[DiscreteFrame, DiscreteFrame]:
    """Projected-basis pair whose composite equals the mixed reconstruction
    operator of (w, v).

    Returns (F, G) with F = {w_i P_{W_i} S_W^-1 e_j} and G = {v_i P_{V_i} e_j};
    then ``composite_operator(F, G)`` is exactly the operator measured by
    duality checks, so G is an approximate dual of F iff v is one of w.
    """
    if len(v) != len(w):
        raise InputError(f"index counts differ: {len(w)} vs {len(v)}")
    if v.ambient_dim != w.ambient_dim:
        raise InputError("families live in different ambient dimensions")
    _require_onb(e, w.ambient_dim)
    s_inv = inverse_frame_operator(w)
    f_rows, g_rows, index = [], [], []
    for i in range(len(w)):
        pw = projector(w.subspaces[i])
        pv = projector(v.subspaces[i])
        for j, basis_vec in enumerate(e.vectors):
            f_rows.append(w.weights[i] * (pw @ (s_inv @ basis_vec)))
            g_rows.append(v.weights[i] * (pv @ basis_vec))
            index.append((i, j))
    index = tuple(index)
    return (DiscreteFrame(np.vstack(f_rows), index_map=index),
            DiscreteFrame(np.vstack(g_rows), index_map=index))


def approx_dual_local_general(w: FusionFrame, v: FusionFrame,
                              locals_on_v: LocalFrameFamily
                              ) -> tuple[DiscreteFrame, DiscreteFrame]:
    """Like :func:`approx_dual_local_pair` but from arbitrary local frames
    on the candidate's subspaces.

    G flattens {v_i g_{i,j}}; F pushes the local canonical duals of the
    g_{i,j} (computed inside each subspace's chart) through S_W^-1 and the
    W projections.  The composite again equals the mixed reconstruction
    operator.
    """
    if len(v) != len(w):
        raise InputError(f"index counts differ: {len(w)} vs {len(v)}")
    if len(locals_on_v.subspaces) != len(v):
        raise InputError("local family count does not match the candidate")
    s_inv = inverse_frame_operator(w)
    f_rows, g_rows, index = [], [], []
    for i in range(len(w)):
        sub_v = locals_on_v.subspaces[i]
        vecs = locals_on_v.families[i]
        if sub_v.is_zero:
            continue
        coords = vecs @ sub_v.basis
        s_loc = coords.T @ coords
        dual_coords = np.linalg.solve(s_loc, coords.T).T
        duals = dual_coords @ sub_v.basis.T
        pw = projector(w.subspaces[i])
        for j in range(vecs.shape[0]):
            g_rows.append(v.weights[i] * vecs[j])
            f_rows.append(w.weights[i] * (pw @ (s_inv @ duals[j])))
            index.append((i, j))
    if not g_rows:
        raise InputError("no local vectors on the candidate family")
    index = tuple(index)
    return (DiscreteFrame(np.vstack(f_rows), index_map=index),
            DiscreteFrame(np.vstack(g_rows), index_map=index))
