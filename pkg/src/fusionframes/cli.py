"""Command line interface.

Every theorem check maps to one subcommand; reports carry a schema version,
a digest of the parsed input document, boolean verdicts with numeric
margins, and the scalars behind them.  Exit codes: 0 when the primary
verdict holds, 1 when it fails (or a mathematical precondition does), 2 for
usage and input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .discrete import (DiscreteFrame, LocalFrameFamily, frame_bounds_discrete,
                       global_from_local, local_frame_from_onb)
from .duality import (check_duality, correct_approximate_dual,
                      construct_noncanonical_dual, biorthogonal_dual,
                      dual_of_dual_check, map_dual, neumann_reconstruct,
                      q_dual_operator, riesz_dual_check)
from .errors import (FrameError, HypothesisError, InputError, SpecDocumentError)
from .fixtures import FIXTURE_NAMES, bundled_fixture_text, fixture_document
from .frames import (FusionFrame, analyze, canonical_dual, frame_bounds,
                     inverse_frame_operator)
from .perturbation import (perturbation_epsilon, stability_corollary_exact_dual,
                           stability_dual_side, stability_frame_side)
from .specdoc import (FrameSpecDocument, build_frame, canonical_json,
                      document_digest, format_float, parse_spec)
from .subspaces import containment_residual, map_subspace, projector_distance

REPORT_SCHEMA = "ffl-report/1"

#: Tolerance at which discrete bounds must reproduce fusion bounds.
BOUNDS_MATCH_TOL = 1e-8


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    code, report = run_command(argv)
    if report is not None:
        if _wants_json(argv):
            print(canonical_json(report))
        else:
            print(_render_text(report))
    return code


def _wants_json(argv) -> bool:
    for i, arg in enumerate(argv):
        if arg == "--format=json":
            return True
        if arg == "--format" and i + 1 < len(argv) and argv[i + 1] == "json":
            return True
    return False


def run_command(argv) -> tuple[int, dict | None]:
    """Execute one subcommand; returns (exit code, report document)."""
    argv = list(argv)
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code if isinstance(exc.code, int) else 2
        if code == 0:
            return 0, None
        return 2, _bare_report(argv, "error", "usage error")
    ctx = _Context(args, argv)
    try:
        return _HANDLERS[args.command](ctx)
    except SpecDocumentError as exc:
        return 2, ctx.report("error", message=str(exc))
    except InputError as exc:
        return 2, ctx.report("error", message=str(exc))
    except HypothesisError as exc:
        return 1, ctx.report("violation", message=str(exc))
    except FrameError as exc:
        return 2, ctx.report("error", message=str(exc))


# --------------------------------------------------------------------------
# argument parsing

def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--spec", help="frame specification file (or bundled "
                        "fixture name: ex_a, ex_b, ex_c)")
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--emit-matrices", action="store_true",
                        help="include operator matrices in the report")
    tol = argparse.ArgumentParser(add_help=False)
    tol.add_argument("--tol", type=float, default=None,
                     help="comparison tolerance for verdicts (default: the "
                          "document's tolerance field, or 1e-9)")

    parser = argparse.ArgumentParser(
        prog="fusionframes",
        description="Fusion frames: bounds, duals, approximate duals, stability.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, *, parents=(common, tol), **kwargs):
        return sub.add_parser(name, parents=list(parents), **kwargs)

    p = add("analyze", help="bounds and classification of one family")
    p.add_argument("--frame", required=True)

    p = add("canonical-dual", help="canonical dual of a frame")
    p.add_argument("--frame", required=True)

    for name in ("check-dual", "check-approx-dual", "dual-of-dual"):
        p = add(name)
        p.add_argument("--frame", required=True)
        p.add_argument("--candidate", required=True)

    p = add("q-dual", help="verify a user-supplied block operator witness")
    p.add_argument("--frame", required=True)
    p.add_argument("--candidate", required=True)
    p.add_argument("--operator", required=True,
                   help="JSON file with the block matrix in local coordinates")

    p = add("neumann-reconstruct", parents=(common,),
            help="reconstruct a vector through the geometric series")
    p.add_argument("--frame", required=True)
    p.add_argument("--candidate", required=True)
    p.add_argument("--vector", required=True,
                   help="comma-separated entries, e.g. '1,0,0'")
    p.add_argument("--tol", type=float, default=1e-6,
                   help="relative reconstruction tolerance (default 1e-6)")
    p.add_argument("--max-terms", type=int, default=10_000)

    for name in ("riesz-dual", "correct-dual"):
        p = add(name)
        p.add_argument("--frame", required=True)
        p.add_argument("--candidate", required=True)

    p = add("noncanonical-dual", help="alternate dual differing from the canonical one")
    p.add_argument("--frame", required=True)
    p.add_argument("--index", type=int, default=None,
                   help="1-based index of the subspace to enlarge; omit for "
                        "the full-space construction")
    p.add_argument("--extension",
                   help="name of a single-subspace frame in the spec to adjoin")

    p = add("biorthogonal-dual")
    p.add_argument("--frame", required=True)

    p = add("map-dual", help="push a dual pair through an invertible operator")
    p.add_argument("--frame", required=True)
    p.add_argument("--candidate", required=True)
    p.add_argument("--operator", required=True, help="JSON file with a d x d matrix")
    p.add_argument("--mode", choices=("exact", "approximate"), default="exact")

    p = add("local-frame", help="flatten a family into a discrete vector frame")
    p.add_argument("--frame", required=True)
    group = p.add_mutually_exclusive_group()
    group.add_argument("--onb", help="JSON file with an orthonormal basis "
                       "(default: standard basis)")
    group.add_argument("--locals", dest="locals_file",
                       help="JSON file with one local vector family per subspace")

    p = add("perturb-epsilon")
    p.add_argument("--frame", required=True)
    p.add_argument("--perturbed", required=True)

    for name in ("stability-dual", "stability-corollary", "stability-frame"):
        p = add(name)
        p.add_argument("--frame", required=True)
        p.add_argument("--candidate", required=True)
        p.add_argument("--perturbed", required=True)

    p = add("fixtures", help="print (or write) the bundled example documents")
    p.add_argument("--name", choices=FIXTURE_NAMES)
    p.add_argument("--write", metavar="DIR", help="write fixture files into DIR")

    return parser


# --------------------------------------------------------------------------
# report plumbing

class _Context:
    def __init__(self, args, argv):
        self.args = args
        self.argv = list(argv)
        self._doc: FrameSpecDocument | None = None

    @property
    def document(self) -> FrameSpecDocument:
        if self._doc is None:
            spec = getattr(self.args, "spec", None)
            if spec is None:
                raise SpecDocumentError("--spec is required for this command")
            path = Path(spec)
            if path.exists():
                self._doc = parse_spec(path)
            else:
                stem = path.name[:-5] if path.name.endswith(".json") else path.name
                if str(path) == path.name and stem in FIXTURE_NAMES:
                    self._doc = parse_spec(fixture_document(stem))
                else:
                    raise SpecDocumentError(f"spec file not found: {spec}")
        return self._doc

    def frame(self, name: str) -> FusionFrame:
        return build_frame(self.document, name)

    @property
    def tol(self) -> float:
        explicit = getattr(self.args, "tol", None)
        if explicit is not None:
            return explicit
        if getattr(self.args, "spec", None) is not None:
            return self.document.tolerance
        return 1e-9

    def report(self, status: str, verdicts: dict | None = None,
               scalars: dict | None = None, matrices: dict | None = None,
               frames: dict | None = None, message: str | None = None,
               extra: dict | None = None) -> dict:
        rep = {
            "schema": REPORT_SCHEMA,
            "command": getattr(self.args, "command", ""),
            "argv": self.argv,
            "input_digest": document_digest(self._doc) if self._doc else None,
            "status": status,
            "verdicts": verdicts or {},
            "scalars": scalars or {},
        }
        if matrices and getattr(self.args, "emit_matrices", False):
            rep["matrices"] = matrices
        if frames:
            rep["frames"] = frames
        if message:
            rep["message"] = message
        if extra:
            rep.update(extra)
        return rep

    def finish(self, primary: bool, verdicts: dict, scalars: dict,
               matrices: dict | None = None, frames: dict | None = None,
               extra: dict | None = None) -> tuple[int, dict]:
        status = "ok" if primary else "violation"
        rep = self.report(status, verdicts, scalars, matrices, frames, extra=extra)
        return (0 if primary else 1), rep


def _bare_report(argv, status, message) -> dict:
    return {
        "schema": REPORT_SCHEMA,
        "command": argv[0] if argv else "",
        "argv": list(argv),
        "input_digest": None,
        "status": status,
        "verdicts": {},
        "scalars": {},
        "message": message,
    }


def _verdict(value, margin) -> dict:
    return {"value": bool(value), "margin": float(margin)}


def _matrix_payload(m) -> list[list[float]]:
    return [[float(x) for x in row] for row in np.asarray(m)]


def _frame_payload(frame: FusionFrame) -> list[dict]:
    out = []
    for sub, weight in zip(frame.subspaces, frame.weights):
        out.append({
            "weight": float(weight),
            "dim": int(sub.dim),
            "basis_vectors": _matrix_payload(sub.basis.T) if sub.dim else [],
        })
    return out


def _load_json_file(path: str, what: str):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {what} file {path}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(
            f"invalid JSON in {what} file {path} at line {exc.lineno}: {exc.msg}") from exc


def _load_matrix(path: str, what: str = "operator") -> np.ndarray:
    data = _load_json_file(path, what)
    if isinstance(data, dict) and "matrix" in data:
        data = data["matrix"]
    try:
        m = np.asarray(data, dtype=float)
    except (TypeError, ValueError) as exc:
        raise InputError(f"{what} file {path} does not hold a numeric matrix") from exc
    if m.ndim != 2:
        raise InputError(f"{what} file {path} must hold a 2-d array")
    return m


def _load_families(path: str) -> list:
    data = _load_json_file(path, "local families")
    if isinstance(data, dict) and "families" in data:
        data = data["families"]
    if not isinstance(data, list):
        raise InputError(f"local families file {path} must hold a list of vector lists")
    return data


def _parse_vector(text: str) -> np.ndarray:
    raw = text.strip()
    try:
        if raw.startswith("["):
            values = json.loads(raw)
        else:
            values = [float(part) for part in raw.split(",") if part.strip()]
        vec = np.asarray(values, dtype=float)
    except (ValueError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot parse vector {text!r}") from exc
    if vec.ndim != 1 or vec.size == 0:
        raise InputError(f"cannot parse vector {text!r}")
    return vec


# --------------------------------------------------------------------------
# handlers

def _cmd_analyze(ctx: _Context):
    w = ctx.frame(ctx.args.frame)
    rep = analyze(w, ctx.tol)
    c = rep.classification
    verdicts = {
        name: _verdict(getattr(c, name), rep.margins[name])
        for name in ("bessel", "frame", "tight", "parseval", "uniform",
                     "riesz_fusion_basis", "orthonormal_fusion_basis")
    }
    scalars = {"lower_bound": rep.bounds.lower, "upper_bound": rep.bounds.upper}
    if c.riesz_bounds is not None:
        scalars["riesz_lower_bound"] = c.riesz_bounds.lower
        scalars["riesz_upper_bound"] = c.riesz_bounds.upper
    return ctx.finish(c.frame, verdicts, scalars,
                      matrices={"frame_operator": _matrix_payload(rep.frame_operator)})


def _cmd_canonical_dual(ctx: _Context):
    w = ctx.frame(ctx.args.frame)
    dual = canonical_dual(w, ctx.tol)
    after = check_duality(w, dual, ctx.tol)
    verdicts = {"is_alternate": _verdict(after.is_alternate, ctx.tol - after.deviation)}
    scalars = {"deviation": after.deviation}
    return ctx.finish(after.is_alternate, verdicts, scalars,
                      matrices={"reconstruction_operator": _matrix_payload(after.operator)},
                      frames={"canonical_dual": _frame_payload(dual)})


def _cmd_check_dual(ctx: _Context):
    w = ctx.frame(ctx.args.frame)
    v = ctx.frame(ctx.args.candidate)
    rep = check_duality(w, v, ctx.tol)
    verdicts = {
        "is_alternate": _verdict(rep.is_alternate, ctx.tol - rep.deviation),
        "is_approximate": _verdict(rep.is_approximate, rep.margin),
    }
    scalars = {"deviation": rep.deviation}
    if rep.lower_bound_estimate is not None:
        scalars["lower_bound_estimate"] = rep.lower_bound_estimate
    return ctx.finish(rep.is_alternate, verdicts, scalars,
                      matrices={"reconstruction_operator": _matrix_payload(rep.operator)})


def _cmd_check_approx_dual(ctx: _Context):
    w = ctx.frame(ctx.args.frame)
    v = ctx.frame(ctx.args.candidate)
    rep = check_duality(w, v, ctx.tol)
    verdicts = {
        "is_approximate": _verdict(rep.is_approximate, rep.margin),
        "borderline": _verdict(rep.borderline, 1e-9 - abs(rep.margin)),
    }
    scalars = {"deviation": rep.deviation}
    if rep.lower_bound_estimate is not None:
        scalars["lower_bound_estimate"] = rep.lower_bound_estimate
    return ctx.finish(rep.is_approximate, verdicts, scalars,
                      matrices={"reconstruction_operator": _matrix_payload(rep.operator)})


def _cmd_q_dual(ctx: _Context):
    w = ctx.frame(ctx.args.frame)
    v = ctx.frame(ctx.args.candidate)
    q = _load_matrix(ctx.args.operator)
    op = q_dual_operator(w, v, q)
    deviation = float(np.linalg.norm(np.eye(w.ambient_dim) - op, 2))
    ok = deviation <= ctx.tol
    verdicts = {"is_q_dual": _verdict(ok, ctx.tol - deviation)}
    return ctx.finish(ok, verdicts, {"deviation": deviation},
                      matrices={"composite_operator": _matrix_payload(op)})


def _cmd_neumann(ctx: _Context):
    w = ctx.frame(ctx.args.frame)
    v = ctx.frame(ctx.args.candidate)
    vec = _parse_vector(ctx.args.vector)
    rep = check_duality(w, v)
    result, terms = neumann_reconstruct(w, v, vec, target_tol=ctx.args.tol,
                                        max_terms=ctx.args.max_terms)
    scale = float(np.linalg.norm(vec))
    rel_error = float(np.linalg.norm(result - vec)) / scale if scale else 0.0
    verdicts = {"converged": _verdict(True, ctx.args.tol - rel_error)}
    scalars = {
        "deviation": rep.deviation,
        "terms_used": int(terms),
        "relative_error": rel_error,
    }
    return ctx.finish(True, verdicts, scalars,
                      extra={"vector": [float(x) for x in result]})


def _cmd_riesz_dual(ctx: _Context):
    w = ctx.frame(ctx.args.frame)
    v = ctx.frame(ctx.args.candidate)
    ok = riesz_dual_check(w, v, ctx.tol)
    s_inv = inverse_frame_operator(w)
    worst = max(containment_residual(sub_v, map_subspace(s_inv, sub_w))
                for sub_w, sub_v in zip(w.subspaces, v.subspaces))
    rep = check_duality(w, v, ctx.tol)
    verdicts = {"contains_canonical_duals": _verdict(ok, ctx.tol - worst)}
    scalars = {"worst_containment_residual": float(worst), "deviation": rep.deviation}
    return ctx.finish(ok, verdicts, scalars)


def _cmd_correct_dual(ctx: _Context):
    w = ctx.frame(ctx.args.frame)
    v = ctx.frame(ctx.args.candidate)
    before = check_duality(w, v, ctx.tol)
    corrected = correct_approximate_dual(w, v, ctx.tol)
    after = check_duality(w, corrected, ctx.tol)
    verdicts = {"is_alternate": _verdict(after.is_alternate, ctx.tol - after.deviation)}
    scalars = {"deviation_before": before.deviation, "deviation_after": after.deviation}
    return ctx.finish(after.is_alternate, verdicts, scalars,
                      frames={"corrected_dual": _frame_payload(corrected)})


def _cmd_noncanonical_dual(ctx: _Context):
    w = ctx.frame(ctx.args.frame)
    index = ctx.args.index
    extension = None
    if index is not None:
        if not 1 <= index <= len(w):
            raise InputError(f"--index must be between 1 and {len(w)}")
        index -= 1
        if ctx.args.extension is not None:
            ext_frame = ctx.frame(ctx.args.extension)
            if len(ext_frame) != 1:
                raise InputError(
                    f"extension frame {ctx.args.extension!r} must hold exactly "
                    f"one subspace, found {len(ext_frame)}")
            extension = ext_frame.subspaces[0]
    elif ctx.args.extension is not None:
        raise InputError("--extension requires --index")
    result = construct_noncanonical_dual(w, index, extension, ctx.tol)
    after = check_duality(w, result, ctx.tol)
    canonical = canonical_dual(w, ctx.tol)
    geometry_gap = max(projector_distance(a, b) for a, b in
                       zip(result.subspaces, canonical.subspaces))
    weight_gap = float(np.abs(result.weights - canonical.weights).max())
    difference = max(geometry_gap, weight_gap)
    verdicts = {
        "is_alternate": _verdict(after.is_alternate, ctx.tol - after.deviation),
        "different_from_canonical": _verdict(difference > ctx.tol, difference - ctx.tol),
    }
    scalars = {"deviation": after.deviation, "difference_from_canonical": difference}
    return ctx.finish(after.is_alternate, verdicts, scalars,
                      frames={"noncanonical_dual": _frame_payload(result)})


def _cmd_biorthogonal_dual(ctx: _Context):
    w = ctx.frame(ctx.args.frame)
    result = biorthogonal_dual(w, ctx.tol)
    after = check_duality(w, result, ctx.tol)
    s_inv = inverse_frame_operator(w)
    worst = max(containment_residual(sub_v, map_subspace(s_inv, sub_w))
                for sub_w, sub_v in zip(w.subspaces, result.subspaces))
    verdicts = {
        "is_alternate": _verdict(after.is_alternate, ctx.tol - after.deviation),
        "contains_canonical_duals": _verdict(worst <= ctx.tol, ctx.tol - worst),
    }
    scalars = {"deviation": after.deviation, "worst_containment_residual": float(worst)}
    return ctx.finish(after.is_alternate, verdicts, scalars,
                      frames={"biorthogonal_dual": _frame_payload(result)})


def _cmd_map_dual(ctx: _Context):
    w = ctx.frame(ctx.args.frame)
    v = ctx.frame(ctx.args.candidate)
    operator = _load_matrix(ctx.args.operator)
    before = check_duality(w, v, ctx.tol)
    lw, lv, after = map_dual(w, v, operator, mode=ctx.args.mode, tol=ctx.tol)
    conjugated = operator @ before.operator @ np.linalg.inv(operator)
    conj_residual = float(np.linalg.norm(after.operator - conjugated, 2))
    if ctx.args.mode == "exact":
        primary = after.is_alternate
        verdicts = {"mapped_is_alternate": _verdict(primary, ctx.tol - after.deviation)}
    else:
        primary = after.is_approximate
        verdicts = {"mapped_is_approximate": _verdict(primary, after.margin)}
    scalars = {
        "deviation_before": before.deviation,
        "deviation_after": after.deviation,
        "conjugation_residual": conj_residual,
    }
    return ctx.finish(primary, verdicts, scalars,
                      matrices={"reconstruction_operator": _matrix_payload(after.operator)},
                      frames={"mapped_frame": _frame_payload(lw),
                              "mapped_candidate": _frame_payload(lv)})


def _cmd_local_frame(ctx: _Context):
    w = ctx.frame(ctx.args.frame)
    if ctx.args.locals_file:
        fam = LocalFrameFamily.build(w.subspaces, _load_families(ctx.args.locals_file))
        flat, guarantee = global_from_local(w, fam)
        bounds = frame_bounds_discrete(flat)
        inside = (bounds.lower >= guarantee.lower - BOUNDS_MATCH_TOL
                  and bounds.upper <= guarantee.upper + BOUNDS_MATCH_TOL)
        margin = min(bounds.lower - guarantee.lower, guarantee.upper - bounds.upper)
        verdicts = {"bounds_within_guarantee": _verdict(inside, margin + BOUNDS_MATCH_TOL)}
        scalars = {
            "lower_bound": bounds.lower, "upper_bound": bounds.upper,
            "guarantee_lower": guarantee.lower, "guarantee_upper": guarantee.upper,
            "local_lower": fam.aggregate.lower, "local_upper": fam.aggregate.upper,
            "vector_count": int(len(flat)),
        }
    else:
        if ctx.args.onb:
            basis = DiscreteFrame(_load_matrix(ctx.args.onb, "orthonormal basis"))
        else:
            basis = DiscreteFrame.standard_basis(w.ambient_dim)
        flat = local_frame_from_onb(w, basis)
        bounds = frame_bounds_discrete(flat)
        fusion = frame_bounds(w)
        gap = max(abs(bounds.lower - fusion.lower), abs(bounds.upper - fusion.upper))
        verdicts = {"bounds_match_fusion": _verdict(gap <= BOUNDS_MATCH_TOL,
                                                    BOUNDS_MATCH_TOL - gap)}
        scalars = {
            "lower_bound": bounds.lower, "upper_bound": bounds.upper,
            "fusion_lower": fusion.lower, "fusion_upper": fusion.upper,
            "vector_count": int(len(flat)),
        }
    primary = next(iter(verdicts.values()))["value"]
    return ctx.finish(primary, verdicts, scalars,
                      matrices={"vectors": _matrix_payload(flat.vectors)})


def _cmd_perturb_epsilon(ctx: _Context):
    v = ctx.frame(ctx.args.frame)
    u = ctx.frame(ctx.args.perturbed)
    eps = perturbation_epsilon(v, u)
    return ctx.finish(True, {}, {"epsilon": eps})


def _stability(ctx: _Context, func):
    w = ctx.frame(ctx.args.frame)
    v = ctx.frame(ctx.args.candidate)
    u = ctx.frame(ctx.args.perturbed)
    rep = func(w, v, u, ctx.tol)
    verdicts = {
        "condition_holds": _verdict(rep.condition_holds, rep.threshold - rep.epsilon),
        "borderline": _verdict(rep.borderline,
                               1e-9 - abs(rep.epsilon - rep.threshold)),
    }
    scalars = {"epsilon": rep.epsilon, "threshold": rep.threshold}
    if rep.resulting_deviation is not None:
        scalars["resulting_deviation"] = rep.resulting_deviation
        verdicts["resulting_is_approximate"] = _verdict(
            rep.resulting_deviation < 1.0, 1.0 - rep.resulting_deviation)
    if rep.bessel_bound_cap is not None:
        scalars["bessel_bound_cap"] = rep.bessel_bound_cap
    for key, value in rep.details.items():
        scalars[key] = float(value)
    return ctx.finish(rep.condition_holds, verdicts, scalars)


def _cmd_stability_dual(ctx):
    return _stability(ctx, stability_dual_side)


def _cmd_stability_corollary(ctx):
    return _stability(ctx, stability_corollary_exact_dual)


def _cmd_stability_frame(ctx):
    return _stability(ctx, stability_frame_side)


def _cmd_dual_of_dual(ctx: _Context):
    w = ctx.frame(ctx.args.frame)
    v = ctx.frame(ctx.args.candidate)
    rep = dual_of_dual_check(w, v, ctx.tol)
    verdicts = {
        "hypothesis_holds": _verdict(rep.hypothesis_holds,
                                     rep.threshold - rep.difference_norm),
        "reverse_is_approximate": _verdict(rep.report.is_approximate, rep.report.margin),
    }
    scalars = {
        "inverse_difference_norm": rep.difference_norm,
        "threshold": rep.threshold,
        "reverse_deviation": rep.report.deviation,
    }
    return ctx.finish(rep.hypothesis_holds, verdicts, scalars,
                      matrices={"reverse_reconstruction_operator":
                                _matrix_payload(rep.report.operator)})


def _cmd_fixtures(ctx: _Context):
    names = [ctx.args.name] if ctx.args.name else list(FIXTURE_NAMES)
    payload = {name: json.loads(bundled_fixture_text(name)) for name in names}
    written = None
    if ctx.args.write:
        out_dir = Path(ctx.args.write)
        try:
            out_dir.mkdir(parents=True, exist_ok=True)
            written = []
            for name in names:
                target = out_dir / f"{name}.json"
                target.write_text(bundled_fixture_text(name))
                written.append(str(target))
        except OSError as exc:
            raise InputError(f"cannot write fixtures to {out_dir}: {exc}") from exc
    extra = {"fixtures": payload}
    if written is not None:
        extra["written"] = written
    return ctx.finish(True, {}, {}, extra=extra)


_HANDLERS = {
    "analyze": _cmd_analyze,
    "canonical-dual": _cmd_canonical_dual,
    "check-dual": _cmd_check_dual,
    "check-approx-dual": _cmd_check_approx_dual,
    "q-dual": _cmd_q_dual,
    "neumann-reconstruct": _cmd_neumann,
    "riesz-dual": _cmd_riesz_dual,
    "correct-dual": _cmd_correct_dual,
    "noncanonical-dual": _cmd_noncanonical_dual,
    "biorthogonal-dual": _cmd_biorthogonal_dual,
    "map-dual": _cmd_map_dual,
    "local-frame": _cmd_local_frame,
    "perturb-epsilon": _cmd_perturb_epsilon,
    "stability-dual": _cmd_stability_dual,
    "stability-corollary": _cmd_stability_corollary,
    "stability-frame": _cmd_stability_frame,
    "dual-of-dual": _cmd_dual_of_dual,
    "fixtures": _cmd_fixtures,
}


# --------------------------------------------------------------------------
# text rendering

def _fmt_value(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return format_float(x)
    return str(x)


def _render_text(report: dict) -> str:
    lines = [f"command: {report.get('command', '')}",
             f"status: {report.get('status', '')}"]
    if report.get("input_digest"):
        lines.append(f"input digest: {report['input_digest']}")
    if report.get("message"):
        lines.append(f"message: {report['message']}")
    verdicts = report.get("verdicts") or {}
    if verdicts:
        lines.append("verdicts:")
        width = max(len(k) for k in verdicts)
        for name in sorted(verdicts):
            v = verdicts[name]
            lines.append(f"  {name.ljust(width)}  {_fmt_value(v['value']):5s} "
                         f"(margin {format_float(v['margin'])})")
    scalars = report.get("scalars") or {}
    if scalars:
        lines.append("scalars:")
        width = max(len(k) for k in scalars)
        for name in sorted(scalars):
            lines.append(f"  {name.ljust(width)}  {_fmt_value(scalars[name])}")
    if "vector" in report:
        lines.append("vector: [" + ", ".join(format_float(x)
                                             for x in report["vector"]) + "]")
    for name, frame in (report.get("frames") or {}).items():
        lines.append(f"frame {name}:")
        for i, item in enumerate(frame):
            vecs = "; ".join("[" + ", ".join(format_float(x) for x in vec) + "]"
                             for vec in item["basis_vectors"]) or "(zero subspace)"
            lines.append(f"  [{i}] weight={format_float(item['weight'])} "
                         f"dim={item['dim']}  {vecs}")
    for name, matrix in (report.get("matrices") or {}).items():
        lines.append(f"matrix {name}:")
        for row in matrix:
            lines.append("  [" + ", ".join(format_float(x) for x in row) + "]")
    if "fixtures" in report:
        for name in sorted(report["fixtures"]):
            lines.append(f"fixture {name}:")
            lines.append(canonical_json(report["fixtures"][name]))
    if "written" in report:
        for path in report["written"]:
            lines.append(f"wrote {path}")
    return "\n".join(lines)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
