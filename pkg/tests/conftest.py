"""Shared helpers: random well-conditioned instances and independent oracles."""

from __future__ import annotations

import numpy as np
import pytest

from gramlocus import GramSpace, LocusSpec


def rand_space(rng: np.random.Generator, dim: int) -> GramSpace:
    a = rng.normal(size=(dim, dim))
    return GramSpace(dim=dim, gram=a.T @ a + 0.3 * np.eye(dim))


def rand_nonzero(rng: np.random.Generator, dim: int, scale: float = 2.0) -> np.ndarray:
    while True:
        v = rng.normal(size=dim) * scale
        if np.linalg.norm(v) > 1e-3:
            return v


def rand_locus(rng: np.random.Generator, dim: int, n_foci: int) -> LocusSpec:
    foci = rng.normal(size=(n_foci, dim)) * 2.0
    signs = rng.choice([-1.0, 1.0], size=n_foci)
    alphas = signs * rng.uniform(0.2, 2.0, size=n_foci)
    # Level through a random probe point, so the locus is nonempty.
    return LocusSpec(foci=foci, alphas=alphas, c=0.0)


def closed_form_monomial_integral(k: int, a: float, b: float) -> float:
    """Exact integral of x^k over [a, b]; the quadrature oracle."""
    return (b ** (k + 1) - a ** (k + 1)) / (k + 1)


def poly_inner_closed_form(f, g, a: float, b: float, scale: float = 1.0) -> float:
    """Inner product of two coefficient polynomials via exact monomial integrals.

    Independent of the Gram-matrix path: multiplies the polynomials out and
    integrates term by term.
    """
    f = np.asarray(f, dtype=float)
    g = np.asarray(g, dtype=float)
    prod = np.convolve(f, g)
    return scale * sum(
        ck * closed_form_monomial_integral(k, a, b) for k, ck in enumerate(prod)
    )


def direct_norm_sq(space: GramSpace, v) -> float:
    """Quadratic-form oracle evaluated with a separate numpy code path."""
    v = np.asarray(v, dtype=float)
    return float(np.dot(v, np.dot(space.gram, v)))


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240817)
