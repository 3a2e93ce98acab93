"""Shared random-family generators for the test suite.

Everything is seeded through numpy Generators so failures reproduce.
"""

from __future__ import annotations

import numpy as np
import pytest

from fusionframes import (FusionFrame, Subspace, canonical_dual, check_duality,
                          frame_bounds, map_subspace, orthonormalize)


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)


def random_subspace(rng, d, k):
    if k == 0:
        return Subspace.zero(d)
    return orthonormalize(rng.standard_normal((k, d)), ambient_dim=d)


def random_fusion_frame(rng, d=None, count=None, require_frame=True):
    """Random weighted family; by default resampled until it is a frame."""
    d = int(d if d is not None else rng.integers(2, 9))
    count = int(count if count is not None else rng.integers(3, 7))
    while True:
        dims = rng.integers(1, d + 1, size=count)
        subs = [random_subspace(rng, d, int(k)) for k in dims]
        weights = rng.uniform(0.5, 2.0, size=count)
        frame = FusionFrame(subs, weights)
        if not require_frame or frame_bounds(frame).lower > 1e-3:
            return frame


def random_bessel_family(rng, d, count, max_dim=None):
    """Random family with no frame requirement (may fail to span)."""
    top = max_dim if max_dim is not None else d
    dims = rng.integers(0, top + 1, size=count)
    if not dims.any():
        dims[0] = 1
    subs = [random_subspace(rng, d, int(k)) for k in dims]
    return FusionFrame(subs, rng.uniform(0.5, 2.0, size=count))


def random_orthogonal(rng, d):
    q, r = np.linalg.qr(rng.standard_normal((d, d)))
    return q * np.sign(np.diag(r))


def random_rotation_near_identity(rng, d, scale):
    """Orthogonal matrix close to I (Cayley transform of a small skew part)."""
    g = rng.standard_normal((d, d))
    a = scale * (g - g.T) / 2.0
    eye = np.eye(d)
    return np.linalg.solve(eye + a, eye - a)


def random_riesz_basis(rng, d=None, count=None, unit_weights=True):
    """Complete family with dimensions summing to d and independent bases."""
    d = int(d if d is not None else rng.integers(2, 9))
    count = int(count if count is not None else rng.integers(2, min(d, 4) + 1))
    # random composition of d into `count` positive parts
    cuts = np.sort(rng.choice(np.arange(1, d), size=count - 1, replace=False)) \
        if count > 1 else np.array([], dtype=int)
    sizes = np.diff(np.concatenate([[0], cuts, [d]])).astype(int)
    u = random_orthogonal(rng, d)
    v = random_orthogonal(rng, d)
    m = u @ np.diag(rng.uniform(0.6, 1.7, size=d)) @ v
    subs = []
    start = 0
    for k in sizes:
        subs.append(orthonormalize(m[:, start:start + k].T, ambient_dim=d))
        start += k
    weights = np.ones(count) if unit_weights else rng.uniform(0.5, 2.0, size=count)
    return FusionFrame(subs, weights)


def perturb_frame(rng, frame, scale):
    """Rotate every subspace a little; weights are kept."""
    d = frame.ambient_dim
    subs = [map_subspace(random_rotation_near_identity(rng, d, scale), s)
            for s in frame.subspaces]
    return FusionFrame(subs, frame.weights)


def random_approximate_dual(rng, frame, scale=0.05, max_tries=50):
    """A slightly rotated canonical dual; resampled until deviation < 1."""
    base = canonical_dual(frame)
    for _ in range(max_tries):
        candidate = perturb_frame(rng, base, scale)
        report = check_duality(frame, candidate)
        if report.is_approximate:
            return candidate, report
        scale *= 0.5
    raise AssertionError("could not build an approximate dual")
