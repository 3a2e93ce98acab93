"""Input validation helpers shared by all modules."""

from __future__ import annotations

import numpy as np

from .errors import InputError

#: Absolute comparison tolerance (operator norms, verdict margins).
DEFAULT_TOL = 1e-9

#: Relative singular-value threshold for rank decisions.
DEFAULT_RANK_TOL = 1e-10

#: Relative eigenvalue floor below which a frame operator counts as singular.
EIG_FLOOR = 1e-12


def as_vector(x, dim: int | None = None, name: str = "vector") -> np.ndarray:
    """Coerce to a finite 1-d float array, optionally of a fixed length."""
    v = np.asarray(x, dtype=float)
    if v.ndim != 1:
        raise InputError(f"{name} must be one-dimensional, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise InputError(f"{name} has non-finite entries")
    if dim is not None and v.shape[0] != dim:
        raise InputError(f"{name} has length {v.shape[0]}, expected {dim}")
    return v


def as_matrix(x, shape: tuple[int, int] | None = None, name: str = "matrix") -> np.ndarray:
    """Coerce to a finite 2-d float array, optionally of a fixed shape."""
    m = np.asarray(x, dtype=float)
    if m.ndim != 2:
        raise InputError(f"{name} must be two-dimensional, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise InputError(f"{name} has non-finite entries")
    if shape is not None and m.shape != shape:
        raise InputError(f"{name} has shape {m.shape}, expected {shape}")
    return m


def as_square_matrix(x, dim: int | None = None, name: str = "operator") -> np.ndarray:
    m = as_matrix(x, name=name)
    if m.shape[0] != m.shape[1]:
        raise InputError(f"{name} must be square, got shape {m.shape}")
    if dim is not None and m.shape[0] != dim:
        raise InputError(f"{name} acts on dimension {m.shape[0]}, expected {dim}")
    return m


def frozen(a: np.ndarray) -> np.ndarray:
    """Copy an array and make it read-only (values are immutable)."""
    out = np.array(a, dtype=float, copy=True)
    out.setflags(write=False)
    return out
