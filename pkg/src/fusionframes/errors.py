"""Exception hierarchy.

Two broad families matter to callers (and to the CLI exit codes):

* ``InputError`` - the data handed to an operation is malformed or
  structurally incompatible (wrong dimension, nonpositive weight, bad
  document).  The CLI reports these as usage/input errors (exit 2).
* ``HypothesisError`` - the data is well formed but a mathematical
  precondition of the requested operation fails (not a frame, not a Riesz
  fusion basis, deviation too large, ...).  The CLI reports these as a
  failed condition (exit 1).
"""


class FrameError(Exception):
    """Base class for all library errors."""


class InputError(FrameError):
    """Malformed or structurally incompatible input."""


class SpecDocumentError(InputError):
    """A frame specification document failed to parse or validate."""


class HypothesisError(FrameError):
    """A mathematical precondition of the operation is not satisfied."""


class NotAFrameError(HypothesisError):
    """The family is not a fusion frame (lower bound not positive)."""


class NotRieszError(HypothesisError):
    """The family is not a Riesz fusion basis."""


class NotDualError(HypothesisError):
    """The candidate is not an alternate dual of the frame."""


class NotApproximateError(HypothesisError):
    """The candidate is not an approximate alternate dual (deviation >= 1)."""


class NotOrthogonalError(HypothesisError):
    """Summands of an orthogonal direct sum overlap."""


class InvarianceError(HypothesisError):
    """A subspace family is not invariant under the required operator."""


class ConvergenceError(HypothesisError):
    """An iterative reconstruction cannot or did not converge."""
