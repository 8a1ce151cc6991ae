"""Real inner product spaces encoded as Gram matrices.

A space of dimension ``n`` is described by the symmetric positive-definite
matrix of pairwise inner products of an implicit ordered basis; vectors are
coordinate tuples with respect to that basis, and the inner product of two
coordinate vectors ``u``, ``v`` is the quadratic form ``u @ gram @ v``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatch,
    InvalidVector,
    NotPositiveDefinite,
    NotSymmetric,
    ZeroVector,
)

#: Relative symmetry tolerance, measured against the largest |entry|.
SYMMETRY_RTOL = 1e-12


def as_vector(coords, dim: int | None = None) -> np.ndarray:
    """Coerce coordinates to a finite 1-D float array.

    Raises InvalidVector for non-finite or non-1-D input and
    DimensionMismatch when ``dim`` is given and the length differs.
    """
    v = np.asarray(coords, dtype=float)
    if v.ndim != 1:
        raise InvalidVector(f"expected a 1-D coordinate tuple, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise InvalidVector("vector coordinates must be finite")
    if dim is not None and v.shape[0] != dim:
        raise DimensionMismatch(f"vector has length {v.shape[0]}, space has dim {dim}")
    return v


@dataclass(frozen=True)
class GramSpace:
    """An n-dimensional real inner product space over an implicit basis.

    Construction validates the matrix: square and finite, symmetric to
    within ``SYMMETRY_RTOL`` relative (then symmetrized as ``(G + G.T)/2``),
    and positive-definite via a Cholesky factorization.  Instances are
    immutable and safe to share across threads.
    """

    dim: int
    gram: np.ndarray

    def __post_init__(self) -> None:
        g = np.asarray(self.gram, dtype=float)
        if g.ndim != 2 or g.shape[0] != g.shape[1]:
            raise ValueError(f"Gram matrix must be square, got shape {g.shape}")
        if g.shape[0] != self.dim:
            raise DimensionMismatch(f"dim {self.dim} does not match matrix shape {g.shape}")
        if self.dim < 1:
            raise ValueError("space dimension must be a positive integer")
        if not np.all(np.isfinite(g)):
            raise ValueError("Gram matrix entries must be finite")
        scale = np.max(np.abs(g))
        asym = np.max(np.abs(g - g.T))
        if asym > SYMMETRY_RTOL * max(scale, 1e-300):
            raise NotSymmetric(
                f"asymmetry {asym:.3e} exceeds {SYMMETRY_RTOL:.0e} relative to max entry {scale:.3e}"
            )
        g = (g + g.T) / 2.0
        try:
            np.linalg.cholesky(g)
        except np.linalg.LinAlgError:
            raise NotPositiveDefinite(
                "factorization failed: matrix is not positive-definite"
            ) from None
        g.flags.writeable = False
        object.__setattr__(self, "gram", g)

    def inner(self, u, v) -> float:
        """Inner product ``u @ gram @ v``; symmetric and bilinear."""
        a = as_vector(u, self.dim)
        b = as_vector(v, self.dim)
        return float(a @ self.gram @ b)

    def norm_sq(self, u) -> float:
        """Squared induced norm, clamped at 0 against rounding."""
        a = as_vector(u, self.dim)
        return max(float(a @ self.gram @ a), 0.0)

    def norm(self, u) -> float:
        """Induced norm ``sqrt(<u, u>)``; zero only for the zero tuple."""
        return float(np.sqrt(self.norm_sq(u)))

    def cos_angle(self, u, v) -> float:
        """Cosine of the angle between u and v, clamped to [-1, 1].

        Raises ZeroVector when either argument has zero norm, where the
        angle is undefined.
        """
        nu = self.norm(u)
        nv = self.norm(v)
        if nu == 0.0 or nv == 0.0:
            raise ZeroVector("angle undefined for a zero vector")
        c = self.inner(u, v) / (nu * nv)
        return float(min(1.0, max(-1.0, c)))


def validate_gram(matrix) -> GramSpace:
    """Build a GramSpace from a square matrix of basis inner products.

    Raises NotSymmetric or NotPositiveDefinite when the matrix does not
    define an inner product on the coordinate space.
    """
    m = np.asarray(matrix, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"Gram matrix must be square, got shape {m.shape}")
    return GramSpace(dim=m.shape[0], gram=m)


def identity_space(dim: int) -> GramSpace:
    """The standard inner product on R^dim."""
    return GramSpace(dim=dim, gram=np.eye(dim))
