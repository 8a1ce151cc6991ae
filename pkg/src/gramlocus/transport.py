"""Building Gram spaces from abstract bases and transporting loci.

Any n-dimensional real inner product space is isomorphic to R^n through
the coordinate map of an ordered basis, and the inner product carries
over as ``<x, y> = sum_ij a_i b_j <s_i, s_j>``.  This module evaluates
the basis inner products through one of three oracles (explicit table,
weighted polynomial integral, matrix trace), assembles the Gram matrix,
and pairs it with unchanged focus coordinates so membership is preserved
in both directions.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DegreeOverflow
from .locus import LocusSpec
from .spaces import GramSpace, validate_gram


@dataclass(frozen=True)
class TableOracle:
    """Explicit n x n table of basis inner products."""

    entries: np.ndarray

    def __post_init__(self) -> None:
        e = np.asarray(self.entries, dtype=float)
        e.flags.writeable = False
        object.__setattr__(self, "entries", e)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True)
class PolyIntegralOracle:
    """Monomial basis 1, x, ..., x^(n-1) under ``scale * integral_a^b f g``."""

    lower: float
    upper: float
    dim: int
    scale: float = 1.0


@dataclass(frozen=True)
class MatrixTraceOracle:
    """Unit-matrix basis (row-major) of r x c matrices under ``tr(A^T B)``."""

    rows: int
    cols: int

    @property
    def dim(self) -> int:
        return self.rows * self.cols


BasisOracle = TableOracle | PolyIntegralOracle | MatrixTraceOracle


@lru_cache(maxsize=None)
def legendre_nodes_weights(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights on [-1, 1], exact through degree 2n-1.

    Roots of the degree-n Legendre polynomial by Newton iteration from the
    Chebyshev-like initial guesses, refined to 1e-15; weights from the
    derivative values.
    """
    if n < 1:
        raise ValueError("need at least one node")
    k = np.arange(1, n + 1)
    x = np.cos(np.pi * (k - 0.25) / (n + 0.5))
    for _ in range(100):
        # Recurrence for P_n(x) and P_{n-1}(x).
        p_prev = np.zeros_like(x)
        p = np.ones_like(x)
        for j in range(1, n + 1):
            p_prev, p = p, ((2 * j - 1) * x * p - (j - 1) * p_prev) / j
        dp = n * (x * p - p_prev) / (x * x - 1.0)
        dx = p / dp
        x = x - dx
        if np.max(np.abs(dx)) < 1e-15:
            break
    p_prev = np.zeros_like(x)
    p = np.ones_like(x)
    for j in range(1, n + 1):
        p_prev, p = p, ((2 * j - 1) * x * p - (j - 1) * p_prev) / j
    dp = n * (x * p - p_prev) / (x * x - 1.0)
    w = 2.0 / ((1.0 - x * x) * dp * dp)
    order = np.argsort(x)
    nodes = x[order]
    weights = w[order]
    nodes.flags.writeable = False
    weights.flags.writeable = False
    return nodes, weights


def gauss_legendre_integral(f, a: float, b: float, n: int) -> float:
    """``integral_a^b f`` with n nodes; exact for polynomials of degree <= 2n-1."""
    nodes, weights = legendre_nodes_weights(n)
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    return float(half * np.sum(weights * f(mid + half * nodes)))


def _poly_integral_gram(oracle: PolyIntegralOracle) -> np.ndarray:
    n = oracle.dim
    g = np.empty((n, n))
    for i in range(n):
        for j in range(i, n):
            # Product degree i+j; node count per entry keeps quadrature exact.
            nodes = (i + j + 3) // 2
            val = oracle.scale * gauss_legendre_integral(
                lambda t, k=i + j: t**k, oracle.lower, oracle.upper, nodes
            )
            g[i, j] = g[j, i] = val
    return g


def _matrix_trace_gram(oracle: MatrixTraceOracle) -> np.ndarray:
    n = oracle.dim
    basis = []
    for k in range(n):
        e = np.zeros((oracle.rows, oracle.cols))
        e[divmod(k, oracle.cols)] = 1.0
        basis.append(e)
    g = np.empty((n, n))
    for i in range(n):
        for j in range(n):
            g[i, j] = np.trace(basis[i].T @ basis[j])
    return g


def gram_from_basis(oracle: BasisOracle) -> GramSpace:
    """Assemble the Gram matrix ``gram[i][j] = <s_i, s_j>`` from an oracle.

    Raises NotPositiveDefinite when the oracle describes a degenerate
    bilinear form.
    """
    if isinstance(oracle, TableOracle):
        return validate_gram(oracle.entries)
    if isinstance(oracle, PolyIntegralOracle):
        return validate_gram(_poly_integral_gram(oracle))
    if isinstance(oracle, MatrixTraceOracle):
        return validate_gram(_matrix_trace_gram(oracle))
    raise TypeError(f"unknown oracle type {type(oracle).__name__}")


def poly_coords(coefficients, n: int) -> np.ndarray:
    """Coordinates of a polynomial in the monomial basis, constant term first.

    Zero-pads up to dimension n; more coefficients than basis monomials is
    a DegreeOverflow.
    """
    coeffs = np.asarray(coefficients, dtype=float).ravel()
    if coeffs.size > n:
        raise DegreeOverflow(f"{coeffs.size} coefficients exceed dimension {n}")
    out = np.zeros(n)
    out[: coeffs.size] = coeffs
    return out


def transport_locus(oracle: BasisOracle, foci, alphas, c: float) -> tuple[GramSpace, LocusSpec]:
    """Carry a locus from the oracle's space to coordinate space.

    Focus coordinates, coefficients, and the constant are unchanged; the
    inner product becomes the assembled Gram form.  A vector satisfies the
    original equation exactly when its coordinates are a member of the
    returned spec.
    """
    space = gram_from_basis(oracle)
    spec = LocusSpec(foci=np.atleast_2d(np.asarray(foci, dtype=float)), alphas=alphas, c=c)
    if spec.dim != space.dim:
        raise ValueError(f"foci have dim {spec.dim}, oracle yields dim {space.dim}")
    return space, spec
