"""Dense real linear algebra shared by every other module.

Everything here is a thin, checked layer over numpy/scipy: symmetric
eigendecomposition, SVD, orthonormal subspaces and their intersections,
orthogonal projectors, and the tolerance policy.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np
import scipy.linalg


class SymmetryError(ValueError):
    """Raised when a matrix expected to be symmetric is not."""

    def __init__(self, asymmetry: float):
        super().__init__(f"matrix is not symmetric (max asymmetry {asymmetry:.3e})")
        self.asymmetry = asymmetry


class DimensionError(ValueError):
    pass


@dataclass(frozen=True)
class Tolerances:
    residual_tol: float = 1e-9
    cluster_tol: float = 1e-7
    sample_count: int = 10_000
    newton_max_iter: int = 100
    seed: int = 0

    def __post_init__(self):
        for name in ("residual_tol", "cluster_tol", "sample_count", "newton_max_iter"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")

    def rng(self, *stream: int) -> np.random.Generator:
        """Generator for a named sub-stream; identical (seed, stream) gives identical draws."""
        return np.random.default_rng([self.seed, *stream])

    def with_(self, **changes) -> "Tolerances":
        return replace(self, **changes)


DEFAULT_TOL = Tolerances()


def as_tolerances(tol) -> Tolerances:
    """Accept either a ``Tolerances`` or a bare residual tolerance."""
    if tol is None:
        return DEFAULT_TOL
    return tol if isinstance(tol, Tolerances) else DEFAULT_TOL.with_(residual_tol=float(tol))


def as_matrix(a) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or 0 in a.shape:
        raise DimensionError(f"expected a non-empty 2-d array, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    return a


def sym_eigen(a, tol: float = DEFAULT_TOL.residual_tol):
    """Eigenvalues (ascending) and orthonormal eigenvectors of a symmetric matrix."""
    a = as_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise DimensionError("sym_eigen needs a square matrix")
    asym = float(np.max(np.abs(a - a.T)))
    if asym > tol * max(1.0, float(np.max(np.abs(a)))):
        raise SymmetryError(asym)
    return np.linalg.eigh(0.5 * (a + a.T))


def svd(a):
    """Thin SVD ``a = U @ diag(s) @ V.T`` with ``s`` descending."""
    u, s, vt = np.linalg.svd(as_matrix(a), full_matrices=False)
    return u, s, vt.T


def spectral_norm(a) -> float:
    return float(np.linalg.norm(as_matrix(a), 2))


def cluster_values(values, cluster_tol: float = DEFAULT_TOL.cluster_tol, scale: float = 1.0):
    """Group sorted reals whose consecutive gaps are within ``cluster_tol * max(1, scale)``.

    Returns a list of index arrays, one per cluster.
    """
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        return []
    order = np.argsort(values, kind="stable")
    eps = cluster_tol * max(1.0, scale)
    groups = [[order[0]]]
    for prev, cur in zip(order[:-1], order[1:]):
        if values[cur] - values[prev] <= eps:
            groups[-1].append(cur)
        else:
            groups.append([cur])
    return [np.array(g) for g in groups]


@dataclass(frozen=True)
class Subspace:
    """A linear subspace held as a matrix with orthonormal columns."""

    basis: np.ndarray = field(repr=False)

    def __post_init__(self):
        b = np.asarray(self.basis, dtype=float)
        if b.ndim != 2:
            raise DimensionError("basis must be 2-d (ambient_dim x k)")
        object.__setattr__(self, "basis", b)

    @property
    def ambient_dim(self) -> int:
        return self.basis.shape[0]

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient_dim={self.ambient_dim})"

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls(np.zeros((n, 0)))

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls(np.eye(n))

    @classmethod
    def span(cls, vectors, tol: float = 1e-10) -> "Subspace":
        """Orthonormal basis for the column span of ``vectors`` (ambient_dim x m)."""
        v = np.asarray(vectors, dtype=float)
        if v.ndim == 1:
            v = v[:, None]
        if v.shape[1] == 0:
            return cls.zero(v.shape[0])
        u, s, _ = np.linalg.svd(v, full_matrices=False)
        rank = int(np.sum(s > tol * max(1.0, s[0])))
        return cls(u[:, :rank])

    @classmethod
    def range_of(cls, p, tol: float = 1e-8) -> "Subspace":
        """Column space of a matrix, rank decided by singular values above ``tol``."""
        u, s, _ = np.linalg.svd(np.asarray(p, dtype=float), full_matrices=False)
        rank = int(np.sum(s > tol))
        return cls(u[:, :rank])

    def projector(self) -> np.ndarray:
        return self.basis @ self.basis.T

    def contains(self, x, tol: float = 1e-8) -> bool:
        x = np.asarray(x, dtype=float)
        return float(np.linalg.norm(x - self.basis @ (self.basis.T @ x))) <= tol * max(
            1.0, float(np.linalg.norm(x))
        )

    def complement(self) -> "Subspace":
        n = self.ambient_dim
        if self.dim == 0:
            return Subspace.full(n)
        u, _, _ = np.linalg.svd(self.basis, full_matrices=True)
        return Subspace(u[:, self.dim:])

    def equals(self, other: "Subspace", tol: float = 1e-8) -> bool:
        if self.dim != other.dim or self.ambient_dim != other.ambient_dim:
            return False
        return float(np.max(np.abs(self.projector() - other.projector()), initial=0.0)) <= tol

    def __add__(self, other: "Subspace") -> "Subspace":
        _check_ambient(self, other)
        return Subspace.span(np.hstack([self.basis, other.basis]))


def _check_ambient(s1: Subspace, s2: Subspace):
    if s1.ambient_dim != s2.ambient_dim:
        raise DimensionError(
            f"ambient dimensions differ: {s1.ambient_dim} vs {s2.ambient_dim}"
        )


def projector(s: Subspace) -> np.ndarray:
    return s.projector()


def subspace_intersect(s1: Subspace, s2: Subspace, tol: float = 1e-8) -> Subspace:
    """Largest subspace contained in both, via principal angles.

    Directions whose principal cosine is within ``tol`` of 1 are kept.
    """
    _check_ambient(s1, s2)
    if s1.dim == 0 or s2.dim == 0:
        return Subspace.zero(s1.ambient_dim)
    u, cos, _ = np.linalg.svd(s1.basis.T @ s2.basis, full_matrices=False)
    keep = cos >= 1.0 - tol
    return Subspace.span(s1.basis @ u[:, keep])


def orthogonal_complement_in(sub: Subspace, ambient: Subspace) -> Subspace:
    """Orthogonal complement of ``sub`` relative to ``ambient`` (sub assumed inside)."""
    _check_ambient(sub, ambient)
    rest = ambient.basis - sub.basis @ (sub.basis.T @ ambient.basis)
    return Subspace.span(rest)


def idempotent_defect(p) -> float:
    p = as_matrix(p)
    return float(np.max(np.abs(p @ p - p)))


def commutator_norm(a, b) -> float:
    return float(np.max(np.abs(a @ b - b @ a), initial=0.0))


def expm(a) -> np.ndarray:
    """Matrix exponential (scipy's scaling-and-squaring Pade)."""
    return scipy.linalg.expm(as_matrix(a))


def unit_sphere(rng: np.random.Generator, count: int, dim: int) -> np.ndarray:
    """``count`` points uniform on the Euclidean unit sphere of R^dim."""
    x = rng.standard_normal((count, dim))
    nrm = np.linalg.norm(x, axis=1, keepdims=True)
    nrm[nrm == 0] = 1.0
    return x / nrm
