"""Dual families and duality verdicts.

The central object is the mixed reconstruction operator of a frame W and a
candidate family V,

    R = sum_i w_i v_i P_{V_i} S_W^-1 P_{W_i},

where S_W is the frame operator of W.  V is an alternate dual when R is the
identity, and an approximate alternate dual when ||I - R|| < 1, in which
case a Neumann series recovers every vector from its projections.  The rest
of the module builds duals (canonical extensions, biorthogonal complements,
corrected approximate duals, operator-mapped pairs) and checks the
characterizations that hold for Riesz fusion bases.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (FrameError, HypothesisError, InputError, InvarianceError,
                     ConvergenceError, NotApproximateError, NotDualError,
                     NotRieszError)
from .frames import (FusionFrame, canonical_dual, classify, frame_bounds,
                     frame_operator, inverse_frame_operator)
from .subspaces import (Subspace, contains, direct_sum_orthogonal, map_subspace,
                        orthogonal_complement, projector, span_union,
                        subspace_equal)
from .validation import DEFAULT_TOL, as_matrix, as_square_matrix, as_vector

#: Width of the grey zone around deviation 1 flagged as borderline.
BORDERLINE_TOL = 1e-9

#: Weight agreement tolerance for operations that require shared weights.
WEIGHT_MATCH_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class DualityReport:
    """Verdict on a (frame, candidate) pair with its margins.

    ``deviation`` is ||I - R|| for the mixed reconstruction operator R;
    ``is_approximate`` uses the strict inequality deviation < 1 with no
    slack, and ``borderline`` flags deviations within ``BORDERLINE_TOL``
    of 1 so callers can distrust knife-edge verdicts.
    """

    operator: np.ndarray = field(repr=False)
    deviation: float
    is_alternate: bool
    is_approximate: bool
    margin: float
    borderline: bool
    lower_bound_estimate: float | None = None


def _check_pair(w: FusionFrame, v: FusionFrame) -> None:
    if v.ambient_dim != w.ambient_dim:
        raise InputError(
            f"families live in different dimensions: {w.ambient_dim} vs {v.ambient_dim}")
    if len(v) != len(w):
        raise InputError(f"index counts differ: {len(w)} vs {len(v)}")


def _require_same_weights(w: FusionFrame, v: FusionFrame) -> None:
    if not np.allclose(w.weights, v.weights, rtol=0.0, atol=WEIGHT_MATCH_TOL):
        raise InputError("operation requires both families to share one weight list")


def reconstruction_operator(w: FusionFrame, v: FusionFrame) -> np.ndarray:
    """The mixed operator sum_i w_i v_i P_{V_i} S_W^-1 P_{W_i}."""
    _check_pair(w, v)
    s_inv = inverse_frame_operator(w)
    out = np.zeros((w.ambient_dim, w.ambient_dim))
    for sub_w, weight_w, sub_v, weight_v in zip(w.subspaces, w.weights,
                                                v.subspaces, v.weights):
        out += weight_w * weight_v * (projector(sub_v) @ s_inv @ projector(sub_w))
    return out


def _lower_bound_estimate(op: np.ndarray, w: FusionFrame) -> float:
    """Guaranteed lower frame bound of an approximate dual.

    Equals 1 / (||R^-1||^2 ||S_W^-1||^2 B) with B the upper bound of w;
    for real matrices the adjoint has the same norm as the operator.
    """
    r_inv_norm = float(np.linalg.norm(np.linalg.inv(op), 2))
    s_inv_norm = float(np.linalg.norm(inverse_frame_operator(w), 2))
    b = frame_bounds(w).upper
    return 1.0 / (r_inv_norm**2 * s_inv_norm**2 * b)


def check_duality(w: FusionFrame, v: FusionFrame, tol: float = DEFAULT_TOL) -> DualityReport:
    """Measure how far the candidate is from being a dual of the frame."""
    op = reconstruction_operator(w, v)
    deviation = float(np.linalg.norm(np.eye(w.ambient_dim) - op, 2))
    margin = 1.0 - deviation
    is_approximate = deviation < 1.0
    report = DualityReport(
        operator=op,
        deviation=deviation,
        is_alternate=deviation <= tol,
        is_approximate=is_approximate,
        margin=margin,
        borderline=abs(margin) < BORDERLINE_TOL,
        lower_bound_estimate=_lower_bound_estimate(op, w) if is_approximate else None,
    )
    return report


def approx_dual_lower_bound(w: FusionFrame, v: FusionFrame) -> float:
    """Lower frame bound guaranteed for an approximate dual candidate."""
    report = check_duality(w, v)
    if not report.is_approximate:
        raise NotApproximateError(
            f"candidate is not an approximate dual (deviation {report.deviation:.6g})")
    return _lower_bound_estimate(report.operator, w)


def analysis_matrix(w: FusionFrame) -> np.ndarray:
    """Matrix of f -> (w_i * local coordinates of P_i f), stacked over i."""
    blocks = [weight * sub.basis.T for sub, weight in zip(w.subspaces, w.weights)]
    return np.vstack(blocks)


def synthesis_matrix(w: FusionFrame) -> np.ndarray:
    """Matrix of (c_i) -> sum_i w_i B_i c_i, the adjoint of the analysis map."""
    return analysis_matrix(w).T


def coupling_block_matrix(w: FusionFrame, v: FusionFrame) -> np.ndarray:
    """Coordinates of {f_i} -> {P_{V_i} S_W^-1 f_i} in the local bases.

    Block-diagonal with blocks B_{V_i}^T S_W^-1 B_{W_i}; sandwiching it
    between the synthesis map of v and the analysis map of w yields the
    mixed reconstruction operator.
    """
    _check_pair(w, v)
    s_inv = inverse_frame_operator(w)
    rows = sum(s.dim for s in v.subspaces)
    cols = sum(s.dim for s in w.subspaces)
    out = np.zeros((rows, cols))
    r = c = 0
    for sub_w, sub_v in zip(w.subspaces, v.subspaces):
        out[r:r + sub_v.dim, c:c + sub_w.dim] = sub_v.basis.T @ s_inv @ sub_w.basis
        r += sub_v.dim
        c += sub_w.dim
    return out


def q_dual_operator(w: FusionFrame, v: FusionFrame, q) -> np.ndarray:
    """T_V Q T_W* for a block operator Q given in local coordinates."""
    _check_pair(w, v)
    rows = sum(s.dim for s in v.subspaces)
    cols = sum(s.dim for s in w.subspaces)
    qm = as_matrix(q, shape=(rows, cols), name="Q")
    return synthesis_matrix(v) @ qm @ analysis_matrix(w)


def q_dual_check(w: FusionFrame, v: FusionFrame, q, tol: float = DEFAULT_TOL) -> bool:
    """True iff the given block operator witnesses a generalized duality."""
    op = q_dual_operator(w, v, q)
    return float(np.linalg.norm(np.eye(w.ambient_dim) - op, 2)) <= tol


def neumann_reconstruct(w: FusionFrame, v: FusionFrame, f,
                        target_tol: float = 1e-6,
                        max_terms: int = 10_000) -> tuple[np.ndarray, int]:
    """Recover f by the geometric series sum_n (I - R)^n R f.

    Converges exactly when the candidate is an approximate dual (deviation
    q < 1); the partial sum after N terms is f - (I - R)^N f, so the error
    contracts at least like q^N.  Returns the reconstruction and the number
    of series terms used.
    """
    if target_tol <= 0:
        raise InputError("target_tol must be positive")
    if max_terms < 1:
        raise InputError("max_terms must be at least 1")
    report = check_duality(w, v)
    if not report.is_approximate:
        raise ConvergenceError(
            "series does not converge: deviation "
            f"{report.deviation:.6g} is not below 1")
    vec = as_vector(f, dim=w.ambient_dim, name="f")
    scale = float(np.linalg.norm(vec))
    if scale == 0.0:
        return np.zeros_like(vec), 0
    op = report.operator
    residual = vec.copy()
    terms = 0
    while float(np.linalg.norm(residual)) > target_tol * scale:
        if terms >= max_terms:
            raise ConvergenceError(
                f"no convergence within {max_terms} terms "
                f"(residual {float(np.linalg.norm(residual)) / scale:.3e} relative)")
        residual = residual - op @ residual
        terms += 1
    return vec - residual, terms


def riesz_dual_check(w: FusionFrame, v: FusionFrame, tol: float = DEFAULT_TOL) -> bool:
    """Containment characterization of alternate duals of a Riesz fusion basis.

    For a Riesz fusion basis, a same-weight Bessel family is an alternate
    dual iff each V_i contains the corresponding canonical-dual subspace.
    """
    if not classify(w, tol).riesz_fusion_basis:
        raise NotRieszError("containment characterization needs a Riesz fusion basis")
    _check_pair(w, v)
    _require_same_weights(w, v)
    s_inv = inverse_frame_operator(w)
    return all(contains(sub_v, map_subspace(s_inv, sub_w), tol)
               for sub_w, sub_v in zip(w.subspaces, v.subspaces))


def correct_approximate_dual(w: FusionFrame, v: FusionFrame,
                             tol: float = DEFAULT_TOL) -> FusionFrame:
    """Turn an approximate dual of a Riesz fusion basis into an exact one.

    Maps every candidate subspace through the inverse of the mixed
    reconstruction operator; the result is an alternate dual whose
    subspaces still contain the canonical-dual subspaces.
    """
    if not classify(w, tol).riesz_fusion_basis:
        raise NotRieszError("dual correction needs a Riesz fusion basis")
    _check_pair(w, v)
    _require_same_weights(w, v)
    report = check_duality(w, v, tol)
    if not report.is_approximate:
        raise NotApproximateError(
            f"candidate is not an approximate dual (deviation {report.deviation:.6g})")
    # Conditioning is bounded by 1/(1 - deviation), so a direct solve is safe.
    op_inv = np.linalg.inv(report.operator)
    mapped = [map_subspace(op_inv, sub) for sub in v.subspaces]
    return FusionFrame(mapped, w.weights)


def construct_noncanonical_dual(w: FusionFrame, index: int | None = None,
                                extension: Subspace | None = None,
                                tol: float = DEFAULT_TOL) -> FusionFrame:
    """An alternate dual different from the canonical one.

    With ``index`` given, the canonical-dual subspace at that position is
    enlarged by ``extension``, which must be orthogonal to it (a zero or
    missing extension returns the canonical dual unchanged).  With
    ``index=None`` every subspace must be the whole space; the dual then
    concentrates everything on the first index with a compensating weight.
    """
    d = w.ambient_dim
    if index is None:
        bad = [i for i, s in enumerate(w.subspaces) if s.dim != d]
        if bad:
            raise HypothesisError(
                "full-space construction requires every subspace to equal the "
                f"ambient space; subspace {bad[0]} has dimension "
                f"{w.subspaces[bad[0]].dim} of {d}")
        weights = np.array(w.weights)
        weights[0] = float(np.sum(w.weights**2)) / float(w.weights[0])
        subs = [Subspace.full(d)] + [Subspace.zero(d) for _ in range(len(w) - 1)]
        return FusionFrame(subs, weights)
    if not 0 <= index < len(w):
        raise InputError(f"index {index} out of range for {len(w)} subspaces")
    dual = canonical_dual(w, tol)
    if extension is None or extension.is_zero:
        return dual
    if extension.ambient_dim != d:
        raise InputError("extension lives in a different ambient dimension")
    enlarged = direct_sum_orthogonal(dual.subspaces[index], extension, tol)
    subs = list(dual.subspaces)
    subs[index] = enlarged
    return FusionFrame(subs, w.weights)


def biorthogonal_dual(w: FusionFrame, tol: float = DEFAULT_TOL) -> FusionFrame:
    """The maximal biorthogonal dual of a Riesz fusion basis.

    Each dual subspace is the orthogonal complement of the span of all the
    other subspaces; with the frame's own weights (which this function
    attaches) the result is an alternate dual containing the canonical one
    subspace by subspace.  Reweighted variants of this family are not, in
    general, duals, and are not certified here.
    """
    if not classify(w, tol).riesz_fusion_basis:
        raise NotRieszError("biorthogonal dual needs a Riesz fusion basis")
    d = w.ambient_dim
    subs = []
    for i in range(len(w)):
        others = span_union([s for j, s in enumerate(w.subspaces) if j != i],
                            ambient_dim=d)
        subs.append(orthogonal_complement(others))
    return FusionFrame(subs, w.weights)


def riesz_dual_uniqueness_check(w: FusionFrame, v: FusionFrame,
                                tol: float = DEFAULT_TOL) -> bool:
    """Whether an alternate dual of a Riesz fusion basis is itself Riesz.

    True only for the canonical dual; when the flag comes back true the
    subspaces are verified to equal the canonical-dual ones, and any
    discrepancy raises, since it would contradict the uniqueness of Riesz
    duals.
    """
    if not classify(w, tol).riesz_fusion_basis:
        raise NotRieszError("uniqueness check needs a Riesz fusion basis")
    report = check_duality(w, v, tol)
    if not report.is_alternate:
        raise NotDualError(
            f"candidate is not an alternate dual (deviation {report.deviation:.6g})")
    is_riesz = classify(v, tol).riesz_fusion_basis
    if is_riesz:
        s_inv = inverse_frame_operator(w)
        for i, (sub_w, sub_v) in enumerate(zip(w.subspaces, v.subspaces)):
            if not subspace_equal(sub_v, map_subspace(s_inv, sub_w), tol):
                raise FrameError(
                    f"Riesz dual differs from the canonical dual at index {i}; "
                    "this contradicts the uniqueness of Riesz duals and "
                    "indicates a numerical defect")
    return is_riesz


def map_dual(w: FusionFrame, v: FusionFrame, l, mode: str = "exact",
             tol: float = DEFAULT_TOL) -> tuple[FusionFrame, FusionFrame, DualityReport]:
    """Push a dual pair through an invertible operator.

    Requires L^T L to leave every subspace of both families invariant (the
    projections then conjugate cleanly, and the mixed reconstruction
    operator of the mapped pair is L R L^-1).  In ``exact`` mode the
    candidate must be an alternate dual; in ``approximate`` mode its
    deviation must stay below 1/cond(L).  Returns the mapped pair and the
    duality report of the mapped pair.
    """
    if mode not in ("exact", "approximate"):
        raise InputError(f"unknown mode {mode!r}, expected 'exact' or 'approximate'")
    _check_pair(w, v)
    d = w.ambient_dim
    lm = as_square_matrix(l, dim=d, name="L")
    svals = np.linalg.svd(lm, compute_uv=False)
    if svals[-1] <= 1e-12 * svals[0]:
        raise InputError("operator L is singular")
    gram = lm.T @ lm
    gram_norm = float(svals[0] ** 2)
    worst_label, worst_index, worst_residual = "", -1, 0.0
    for label, family in (("frame", w), ("candidate", v)):
        for i, sub in enumerate(family.subspaces):
            if sub.is_zero:
                continue
            image = gram @ sub.basis
            residual = float(np.linalg.norm(image - projector(sub) @ image, 2)) / gram_norm
            if residual > worst_residual:
                worst_label, worst_index, worst_residual = label, i, residual
    if worst_residual > tol:
        raise InvarianceError(
            f"subspace {worst_index} of the {worst_label} family is not invariant "
            f"under L^T L (relative residual {worst_residual:.3e})")
    report = check_duality(w, v, tol)
    if mode == "exact":
        if not report.is_alternate:
            raise NotDualError(
                f"candidate is not an alternate dual (deviation {report.deviation:.6g})")
    else:
        bound = float(svals[-1] / svals[0])
        if not report.deviation < bound:
            raise HypothesisError(
                f"deviation {report.deviation:.6g} is not below the conjugation "
                f"bound {bound:.6g}")
    lw = FusionFrame([map_subspace(lm, s) for s in w.subspaces], w.weights)
    lv = FusionFrame([map_subspace(lm, s) for s in v.subspaces], v.weights)
    return lw, lv, check_duality(lw, lv, tol)


@dataclass(frozen=True)
class DualOfDualReport:
    """Outcome of testing a frame as approximate dual of its own dual."""

    difference_norm: float
    threshold: float
    hypothesis_holds: bool
    report: DualityReport


def dual_of_dual_check(w: FusionFrame, v: FusionFrame,
                       tol: float = DEFAULT_TOL) -> DualOfDualReport:
    """Check whether a frame is an approximate dual of its alternate dual.

    Sufficient condition: the inverse frame operators differ by less than
    the geometric mean of the inverse operator norms.  The measured
    reverse-direction report is always returned; if the condition holds the
    reverse deviation is guaranteed below 1 (a violation raises, since it
    would contradict the operator estimate).
    """
    forward = check_duality(w, v, tol)
    if not forward.is_alternate:
        raise NotDualError(
            f"candidate is not an alternate dual (deviation {forward.deviation:.6g})")
    s_w_inv = inverse_frame_operator(w)
    s_v_inv = inverse_frame_operator(v)
    lhs = float(np.linalg.norm(s_w_inv - s_v_inv, 2))
    rhs = float(np.linalg.norm(frame_operator(w), 2) ** -0.5
                * np.linalg.norm(frame_operator(v), 2) ** -0.5)
    holds = lhs < rhs
    reverse = check_duality(v, w, tol)
    if holds and not reverse.is_approximate:
        raise FrameError(
            "operator estimate violated: hypothesis holds but the reverse "
            f"deviation is {reverse.deviation:.6g}; this indicates a numerical defect")
    return DualOfDualReport(difference_norm=lhs, threshold=rhs,
                            hypothesis_holds=holds, report=reverse)
