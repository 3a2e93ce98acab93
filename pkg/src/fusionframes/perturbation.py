"""Perturbation measure and the stability of (approximate) duals.

A same-weight family U is an eps-perturbation of V when the weighted
squared projector differences stay below eps in quadratic form.  The exact
smallest admissible constant is the top eigenvalue of
sum_i v_i^2 (P_{U_i} - P_{V_i})^2, and the three stability checks compare
it against explicit thresholds under which duality survives: perturbing
the dual side, perturbing an exact dual, and perturbing the frame side.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import FrameError, InputError, NotApproximateError, NotDualError
from .duality import check_duality
from .frames import FusionFrame, frame_bounds, inverse_frame_operator
from .subspaces import projector
from .validation import DEFAULT_TOL

#: Width of the equality grey zone flagged as borderline.
BORDERLINE_TOL = 1e-9


@dataclass(frozen=True)
class PerturbationReport:
    """Outcome of one stability check.

    ``threshold`` is the theorem's bound on epsilon (sign-preserved: a
    negative value means the hypothesis is vacuous), ``condition_holds``
    says whether epsilon clears it with the comparison the result uses
    (strict or not), and ``resulting_deviation`` is the measured deviation
    of the perturbed pair whether or not the condition holds.
    """

    epsilon: float
    threshold: float
    condition_holds: bool
    borderline: bool
    resulting_deviation: float | None = None
    bessel_bound_cap: float | None = None
    details: dict[str, float] = field(default_factory=dict)


def _require_compatible(v: FusionFrame, u: FusionFrame) -> None:
    if u.ambient_dim != v.ambient_dim:
        raise InputError(
            f"families live in different dimensions: {v.ambient_dim} vs {u.ambient_dim}")
    if len(u) != len(v):
        raise InputError(f"index counts differ: {len(v)} vs {len(u)}")
    if not np.allclose(v.weights, u.weights, rtol=0.0, atol=1e-12):
        raise InputError("a perturbation must share the weights of the original family")


def perturbation_epsilon(v: FusionFrame, u: FusionFrame) -> float:
    """Exact smallest perturbation constant between two same-weight families.

    Any strictly larger value is an admissible bound in the perturbation
    definition.  Symmetric in the two families, zero iff all projectors
    agree; for a single perturbed line it equals weight^2 times the squared
    sine of the principal angle.
    """
    _require_compatible(v, u)
    d = v.ambient_dim
    quad = np.zeros((d, d))
    for sub_v, sub_u, weight in zip(v.subspaces, u.subspaces, v.weights):
        delta = projector(sub_u) - projector(sub_v)
        quad += weight**2 * (delta @ delta)
    return float(max(np.linalg.eigvalsh(quad)[-1], 0.0))


def _certify(condition_holds: bool, borderline: bool, resulting_deviation: float,
             what: str) -> None:
    # The stability results admit no counterexample; a measured violation
    # under a cleanly satisfied hypothesis means a numerical defect.
    if condition_holds and not borderline and not resulting_deviation < 1.0:
        raise FrameError(
            f"stability bound violated for {what}: hypothesis holds but the "
            f"resulting deviation is {resulting_deviation:.6g}")


def stability_dual_side(w: FusionFrame, v: FusionFrame, u: FusionFrame,
                        tol: float = DEFAULT_TOL) -> PerturbationReport:
    """Perturb an approximate dual: does it stay an approximate dual?

    The condition is eps < ((1 - deviation) / (sqrt(B) ||S_W^-1||))^2 with
    B the upper bound of the frame; under it the perturbed family is again
    an approximate dual, with Bessel bound at most (sqrt(D) + sqrt(eps))^2.
    """
    base = check_duality(w, v, tol)
    if not base.is_approximate:
        raise NotApproximateError(
            f"candidate is not an approximate dual (deviation {base.deviation:.6g})")
    eps = perturbation_epsilon(v, u)
    b = frame_bounds(w).upper
    d_bound = frame_bounds(v).upper
    s_inv_norm = float(np.linalg.norm(inverse_frame_operator(w), 2))
    threshold = ((1.0 - base.deviation) / (np.sqrt(b) * s_inv_norm)) ** 2
    holds = eps < threshold
    borderline = abs(eps - threshold) <= BORDERLINE_TOL * max(1.0, abs(threshold))
    resulting = check_duality(w, u, tol)
    _certify(holds, borderline, resulting.deviation, "the perturbed dual")
    return PerturbationReport(
        epsilon=eps,
        threshold=float(threshold),
        condition_holds=holds,
        borderline=borderline,
        resulting_deviation=resulting.deviation,
        bessel_bound_cap=float((np.sqrt(d_bound) + np.sqrt(eps)) ** 2),
        details={
            "deviation": base.deviation,
            "frame_upper_bound": float(b),
            "candidate_upper_bound": float(d_bound),
            "inverse_norm": s_inv_norm,
        },
    )


def stability_corollary_exact_dual(w: FusionFrame, v: FusionFrame, u: FusionFrame,
                                   tol: float = DEFAULT_TOL) -> PerturbationReport:
    """Perturb an exact alternate dual.

    The condition is sqrt(eps * B) <= 1 / ||S_W^-1|| (non-strict).  The
    equality case only gives deviation <= 1, so it is flagged borderline
    and approximateness is reported but not certified there.
    """
    base = check_duality(w, v, tol)
    if not base.is_alternate:
        raise NotDualError(
            f"candidate is not an alternate dual (deviation {base.deviation:.6g})")
    eps = perturbation_epsilon(v, u)
    b = frame_bounds(w).upper
    d_bound = frame_bounds(v).upper
    s_inv_norm = float(np.linalg.norm(inverse_frame_operator(w), 2))
    threshold = 1.0 / (b * s_inv_norm**2)
    holds = eps <= threshold
    borderline = abs(eps - threshold) <= BORDERLINE_TOL * max(1.0, abs(threshold))
    resulting = check_duality(w, u, tol)
    _certify(holds, borderline, resulting.deviation, "the perturbed exact dual")
    return PerturbationReport(
        epsilon=eps,
        threshold=float(threshold),
        condition_holds=holds,
        borderline=borderline,
        resulting_deviation=resulting.deviation,
        bessel_bound_cap=float((np.sqrt(d_bound) + np.sqrt(eps)) ** 2),
        details={
            "deviation": base.deviation,
            "frame_upper_bound": float(b),
            "candidate_upper_bound": float(d_bound),
            "inverse_norm": s_inv_norm,
            "sqrt_eps_b": float(np.sqrt(eps * b)),
        },
    )


def stability_frame_side(w: FusionFrame, v: FusionFrame, u: FusionFrame,
                         tol: float = DEFAULT_TOL) -> PerturbationReport:
    """Perturb the frame itself: does the candidate stay its approximate dual?

    The perturbed family must be a frame.  The condition bounds sqrt(eps) by
    (1 - (sqrt(B*D) ||S_W^-1 - S_U^-1|| + deviation)) / (sqrt(D) ||S_U^-1||);
    the reported threshold is that bound squared with its sign kept, so a
    negative threshold marks a vacuous hypothesis.
    """
    base = check_duality(w, v, tol)
    if not base.is_approximate:
        raise NotApproximateError(
            f"candidate is not an approximate dual (deviation {base.deviation:.6g})")
    eps = perturbation_epsilon(w, u)
    b = frame_bounds(w).upper
    d_bound = frame_bounds(v).upper
    s_w_inv = inverse_frame_operator(w)
    s_u_inv = inverse_frame_operator(u)  # raises NotAFrameError when U is not a frame
    diff = float(np.linalg.norm(s_w_inv - s_u_inv, 2))
    s_u_inv_norm = float(np.linalg.norm(s_u_inv, 2))
    sqrt_threshold = (1.0 - (np.sqrt(b * d_bound) * diff + base.deviation)) \
        / (np.sqrt(d_bound) * s_u_inv_norm)
    threshold = float(np.sign(sqrt_threshold) * sqrt_threshold**2)
    holds = bool(np.sqrt(eps) < sqrt_threshold)
    borderline = abs(np.sqrt(eps) - sqrt_threshold) <= BORDERLINE_TOL
    resulting = check_duality(u, v, tol)
    _certify(holds, borderline, resulting.deviation, "the perturbed frame")
    return PerturbationReport(
        epsilon=eps,
        threshold=threshold,
        condition_holds=holds,
        borderline=borderline,
        resulting_deviation=resulting.deviation,
        bessel_bound_cap=None,
        details={
            "deviation": base.deviation,
            "frame_upper_bound": float(b),
            "candidate_upper_bound": float(d_bound),
            "inverse_difference_norm": diff,
            "perturbed_inverse_norm": s_u_inv_norm,
            "sqrt_threshold": float(sqrt_threshold),
            "sqrt_epsilon": float(np.sqrt(eps)),
        },
    )
