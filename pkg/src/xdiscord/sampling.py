"""Seeded random-state generators for sweeps and property suites."""

from __future__ import annotations

import math

import numpy as np

from .xstate import XState

TWO_PI = 2.0 * math.pi


def random_xstate(rng: np.random.Generator, boundary_fraction: float = 0.1) -> XState:
    """A random valid X state: Dirichlet populations, coherence magnitudes
    uniform within their positivity bounds, uniform phases. A fraction of
    draws sits exactly on a positivity boundary."""
    p = rng.dirichlet(np.ones(4))
    u = rng.random(2)
    if rng.random() < boundary_fraction:
        u[rng.integers(0, 2)] = 1.0
    r14 = u[0] * math.sqrt(p[0] * p[3])
    r23 = u[1] * math.sqrt(p[1] * p[2])
    phi1, phi2 = rng.uniform(0.0, TWO_PI, 2)
    return XState(p[0], p[1], p[2], p[3], r14=r14, phi1=phi1, r23=r23, phi2=phi2)


def random_coherence_free(rng: np.random.Generator) -> XState:
    """A random diagonal (coherence-free) state."""
    p = rng.dirichlet(np.ones(4))
    return XState(p[0], p[1], p[2], p[3])


def random_degenerate_balanced(rng: np.random.Generator) -> XState:
    """A random state with pairwise-degenerate populations and equal coherence
    magnitudes (the nontrivial zero-discord family), arbitrary phases."""
    s = rng.uniform(0.05, 0.95)
    top = 0.5 * s
    bottom = 0.5 * (1.0 - s)
    r = rng.random() * math.sqrt(top * bottom)
    phi1, phi2 = rng.uniform(0.0, TWO_PI, 2)
    return XState(top, top, bottom, bottom, r14=r, phi1=phi1, r23=r, phi2=phi2)
