"""Three bundled R^3 families exercised throughout the tests and docs.

* ``ex_a``: a non-tight frame with an approximate dual at deviation 1/2 and
  a one-line perturbation parametrized by (alpha, beta).
* ``ex_b``: a Parseval coordinate frame, an exact alternate dual of upper
  bound 2, and a slightly tilted third line.
* ``ex_c``: a four-subspace frame with weights (1, sqrt 2, 1, 1) and an
  exact dual whose reverse check fails at deviation exactly 1.
"""

from __future__ import annotations

import math
from importlib import resources

from .frames import FusionFrame
from .subspaces import orthonormalize

FIXTURE_NAMES = ("ex_a", "ex_b", "ex_c")

_E1 = [1.0, 0.0, 0.0]
_E2 = [0.0, 1.0, 0.0]
_E3 = [0.0, 0.0, 1.0]


def _frame(items: list[tuple[list[list[float]], float]]) -> FusionFrame:
    return FusionFrame([orthonormalize(vs, ambient_dim=3) for vs, _ in items],
                       [w for _, w in items])


def _document(frames: dict[str, list[tuple[list[list[float]], float]]]) -> dict:
    return {
        "dimension": 3,
        "tolerance": 1e-9,
        "frames": {
            name: [{"spanning_vectors": vs, "weight": w} for vs, w in items]
            for name, items in frames.items()
        },
    }


def _ex_a_items(alpha: float, beta: float):
    return {
        "W": [([_E1, _E2], 1.0), ([_E2, _E3], 1.0), ([_E1], 1.0)],
        "V": [([_E2], 1.0), ([_E2, _E3], 1.0), ([_E1], 1.0)],
        "U": [([_E2], 1.0), ([_E2, _E3], 1.0), ([[alpha, beta, 0.0]], 1.0)],
    }


def ex_a(alpha: float = 0.5, beta: float = 0.01) -> dict[str, FusionFrame]:
    """Frames W, V and the perturbed U with a third line span{(alpha, beta, 0)}."""
    items = _ex_a_items(alpha, beta)
    return {name: _frame(entry) for name, entry in items.items()}


def ex_a_document(alpha: float = 0.5, beta: float = 0.01) -> dict:
    return _document(_ex_a_items(alpha, beta))


def _ex_b_items():
    return {
        "W": [([_E3], 1.0), ([_E2], 1.0), ([_E1], 1.0)],
        "V": [([_E1, _E2, _E3], 1.0), ([_E2, _E3], 1.0), ([_E1], 1.0)],
        "U": [([_E3], 1.0), ([_E2], 1.0), ([[1.0, 1.0 / 50.0, 0.0]], 1.0)],
    }


def ex_b() -> dict[str, FusionFrame]:
    """Parseval frame W, exact dual V, and W perturbed at the third line."""
    return {name: _frame(entry) for name, entry in _ex_b_items().items()}


def ex_b_document() -> dict:
    return _document(_ex_b_items())


def _ex_c_items():
    r = math.sqrt(2.0)
    return {
        "W": [([_E1], 1.0), ([[1.0, 1.0, 0.0]], r), ([_E2], 1.0), ([_E3], 1.0)],
        "V": [([_E2], 3.0), ([_E1, _E2, _E3], 3.0 * r), ([_E1], 3.0), ([_E3], 1.0)],
    }


def ex_c() -> dict[str, FusionFrame]:
    """Weighted four-subspace frame W and its exact alternate dual V."""
    return {name: _frame(entry) for name, entry in _ex_c_items().items()}


def ex_c_document() -> dict:
    return _document(_ex_c_items())


def fixture_document(name: str, **params) -> dict:
    """Document form of one bundled fixture (``ex_a`` accepts alpha, beta)."""
    if name == "ex_a":
        return ex_a_document(**params)
    if name == "ex_b":
        if params:
            raise TypeError("ex_b takes no parameters")
        return ex_b_document()
    if name == "ex_c":
        if params:
            raise TypeError("ex_c takes no parameters")
        return ex_c_document()
    raise KeyError(f"unknown fixture {name!r}; available: {', '.join(FIXTURE_NAMES)}")


def fixture_frames(name: str, **params) -> dict[str, FusionFrame]:
    if name == "ex_a":
        return ex_a(**params)
    if name == "ex_b":
        return ex_b()
    if name == "ex_c":
        return ex_c()
    raise KeyError(f"unknown fixture {name!r}; available: {', '.join(FIXTURE_NAMES)}")


def bundled_fixture_text(name: str) -> str:
    """Contents of the packaged fixture file ``<name>.json``."""
    if name not in FIXTURE_NAMES:
        raise KeyError(f"unknown fixture {name!r}; available: {', '.join(FIXTURE_NAMES)}")
    return resources.files("fusionframes").joinpath("data", f"{name}.json").read_text()
