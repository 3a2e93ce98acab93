"""Finite-dimensional fusion frames: bounds, duals, approximate duals,
perturbation stability, and a small report-producing CLI."""

from .errors import (ConvergenceError, FrameError, HypothesisError, InputError,
                     InvarianceError, NotAFrameError, NotApproximateError,
                     NotDualError, NotOrthogonalError, NotRieszError,
                     SpecDocumentError)
from .subspaces import (Subspace, contains, containment_residual,
                        direct_sum_orthogonal, map_subspace, operator_norm,
                        orthogonal_complement, orthonormalize, projector,
                        projector_distance, span_union, subspace_equal)
from .frames import (AnalysisReport, Classification, FrameBounds, FusionFrame,
                     analysis, analyze, canonical_dual, classify, frame_bounds,
                     frame_operator, inverse_frame_operator, synthesis)
from .discrete import (DiscreteFrame, LocalFrameFamily, approx_dual_local_general,
                       approx_dual_local_pair, canonical_dual_discrete,
                       composite_operator, frame_bounds_discrete,
                       global_from_local, local_frame_from_onb)
from .duality import (DualityReport, DualOfDualReport, approx_dual_lower_bound,
                      biorthogonal_dual, check_duality, construct_noncanonical_dual,
                      correct_approximate_dual, coupling_block_matrix,
                      dual_of_dual_check, map_dual, neumann_reconstruct,
                      q_dual_check, q_dual_operator, reconstruction_operator,
                      riesz_dual_check, riesz_dual_uniqueness_check)
from .perturbation import (PerturbationReport, perturbation_epsilon,
                           stability_corollary_exact_dual, stability_dual_side,
                           stability_frame_side)
from .specdoc import (FrameSpecDocument, build_frame, canonical_json,
                      document_digest, parse_spec, serialize_spec)
from . import fixtures

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
