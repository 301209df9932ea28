"""Finite-dimensional real JB*-triples given by a structure tensor.

A system of dimension ``n`` stores a dense array ``T`` of shape (n, n, n, n)
with ``{b_i, b_j, b_k} = sum_m T[i, j, k, m] b_m``.  The norm comes from a
pluggable oracle: a spectral norm through a real block encoding, the max of
the parts of an l-infinity sum, or the intrinsic ``sqrt(lambda_max L(x, x))``.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .linalg import DEFAULT_TOL, DimensionError, Tolerances, unit_sphere

_CHUNK = 2048


class TripleError(ValueError):
    """Invalid structure tensor, conjugation, or model."""


# ---------------------------------------------------------------------------
# norm oracles


@dataclass(frozen=True)
class SpectralOracle:
    """Norm = largest singular value of ``sum_i x_i * encoding[i]``.

    ``block`` is the real block size of one scalar (1 for R, 2 for C, 4 for H);
    the encoding matrices satisfy ``tr(B_i^T B_j) = block * delta_ij``.
    """

    encoding: np.ndarray = field(repr=False)
    block: int = 1
    p: int = 0
    q: int = 0
    field_tag: str = "R"

    kind = "spectral"

    def matrices(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return np.tensordot(x, self.encoding, axes=([-1], [0]))

    def decode(self, mats) -> np.ndarray:
        mats = np.asarray(mats, dtype=float)
        return np.tensordot(mats, self.encoding, axes=([-2, -1], [1, 2])) / self.block

    def norm_batch(self, xs) -> np.ndarray:
        return np.linalg.svd(self.matrices(xs), compute_uv=False)[:, 0]

    def dual_norm_batch(self, phis) -> np.ndarray:
        return np.linalg.svd(self.matrices(phis), compute_uv=False).sum(axis=1) / self.block

    def describe(self) -> dict:
        return {"kind": "spectral", "p": self.p, "q": self.q, "field": self.field_tag,
                "block": self.block}


@dataclass(frozen=True)
class LinfSumOracle:
    """Norm of an l-infinity sum: the max over parts of each part's norm."""

    parts: tuple  # of (index array, TripleSystem)

    kind = "linf_sum"

    def norm_batch(self, xs) -> np.ndarray:
        xs = np.asarray(xs, dtype=float)
        return np.max([s.norm_batch(xs[:, idx]) for idx, s in self.parts], axis=0)

    def dual_norm_batch(self, phis):
        phis = np.asarray(phis, dtype=float)
        vals = []
        for idx, s in self.parts:
            v = s.oracle.dual_norm_batch(phis[:, idx])
            if v is None:
                return None
            vals.append(v)
        return np.sum(vals, axis=0)

    def describe(self) -> dict:
        return {"kind": "linf_sum",
                "parts": [{"indices": [int(i) for i in idx], "label": s.label,
                           "oracle": s.oracle.describe()} for idx, s in self.parts]}


@dataclass(frozen=True)
class IntrinsicOracle:
    kind = "intrinsic"

    def describe(self) -> dict:
        return {"kind": "intrinsic"}

    def dual_norm_batch(self, phis):
        return None


# ---------------------------------------------------------------------------
# the triple system


@dataclass(frozen=True, eq=False)
class TripleSystem:
    tensor: np.ndarray = field(repr=False)
    oracle: object = field(default_factory=IntrinsicOracle)
    label: str = ""

    def __post_init__(self):
        t = np.asarray(self.tensor, dtype=float)
        if t.ndim != 4 or len(set(t.shape)) != 1 or t.shape[0] < 1:
            raise TripleError(f"tensor must have shape (n, n, n, n), got {t.shape}")
        if not np.all(np.isfinite(t)):
            raise TripleError("tensor has non-finite entries")
        t = 0.5 * (t + t.transpose(2, 1, 0, 3))
        t.setflags(write=False)
        object.__setattr__(self, "tensor", t)

    @property
    def dim(self) -> int:
        return self.tensor.shape[0]

    @property
    def is_degenerate(self) -> bool:
        return not np.any(self.tensor)

    def _vec(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.dim,):
            raise DimensionError(f"element has shape {x.shape}, system dim is {self.dim}")
        return x

    # products

    def product(self, x, y, z) -> np.ndarray:
        return np.einsum("ijkm,i,j,k->m", self.tensor, self._vec(x), self._vec(y), self._vec(z))

    def product_batch(self, xs, ys, zs) -> np.ndarray:
        xs, ys, zs = (np.atleast_2d(np.asarray(a, dtype=float)) for a in (xs, ys, zs))
        out = np.empty((xs.shape[0], self.dim))
        for s in range(0, xs.shape[0], _CHUNK):
            sl = slice(s, s + _CHUNK)
            t1 = np.einsum("ni,ijkm->njkm", xs[sl], self.tensor)
            t2 = np.einsum("njkm,nj->nkm", t1, ys[sl])
            out[sl] = np.einsum("nkm,nk->nm", t2, zs[sl])
        return out

    def l_operator(self, x, y) -> np.ndarray:
        """Matrix of ``a -> {x, y, a}``."""
        return np.einsum("ijkm,i,j->mk", self.tensor, self._vec(x), self._vec(y))

    def q_operator(self, x, y=None) -> np.ndarray:
        """Matrix of ``a -> {x, a, y}``; ``Q(x)`` when ``y`` is omitted."""
        y = x if y is None else y
        return np.einsum("ijkm,i,k->mj", self.tensor, self._vec(x), self._vec(y))

    def l_operator_batch(self, xs, ys) -> np.ndarray:
        return np.einsum("ijkm,ni,nj->nmk", self.tensor, xs, ys)

    # norms

    def norm(self, x) -> float:
        return float(self.norm_batch(self._vec(x)[None, :])[0])

    def norm_batch(self, xs) -> np.ndarray:
        xs = np.atleast_2d(np.asarray(xs, dtype=float))
        if isinstance(self.oracle, IntrinsicOracle):
            return self.intrinsic_norm_batch(xs)
        return self.oracle.norm_batch(xs)

    def intrinsic_norm_batch(self, xs) -> np.ndarray:
        xs = np.atleast_2d(np.asarray(xs, dtype=float))
        out = np.empty(xs.shape[0])
        for s in range(0, xs.shape[0], _CHUNK):
            ll = self.l_operator_batch(xs[s:s + _CHUNK], xs[s:s + _CHUNK])
            ll = 0.5 * (ll + ll.transpose(0, 2, 1))
            out[s:s + _CHUNK] = np.sqrt(np.maximum(np.linalg.eigvalsh(ll)[:, -1], 0.0))
        return out

    def restrict(self, basis, label: str = "") -> "TripleSystem":
        """Induced system on the span of orthonormal ``basis`` columns (assumed a subtriple)."""
        v = np.asarray(basis, dtype=float)
        t = np.einsum("abcd,ai,bj,ck,dm->ijkm", self.tensor, v, v, v, v, optimize=True)
        if isinstance(self.oracle, SpectralOracle):
            enc = np.tensordot(v.T, self.oracle.encoding, axes=([1], [0]))
            oracle = SpectralOracle(enc, self.oracle.block, self.oracle.p, self.oracle.q,
                                    self.oracle.field_tag)
        else:
            oracle = IntrinsicOracle()
        return TripleSystem(t, oracle, label or f"{self.label}|sub{v.shape[1]}")

    def fingerprint(self) -> str:
        h = hashlib.sha256()
        h.update(self.label.encode())
        h.update(np.round(self.tensor, 12).tobytes())
        return h.hexdigest()[:16]


def make_system(tensor, oracle=None, label: str = "", validate: bool = True,
                tol: Tolerances = DEFAULT_TOL) -> TripleSystem:
    """Build a system, rejecting degenerate tensors and (optionally) checking the axioms."""
    s = TripleSystem(tensor, oracle if oracle is not None else IntrinsicOracle(), label)
    if s.is_degenerate:
        raise TripleError("degenerate system: the triple product vanishes identically")
    if validate:
        rep = verify_axioms(s, tol, samples=400, exhaustive_dim=5)
        if not rep.passed:
            raise TripleError(f"axiom verification failed for {label!r}: {rep.as_dict()}")
    return s


# free-function wrappers


def triple_product(s: TripleSystem, x, y, z) -> np.ndarray:
    return s.product(x, y, z)


def l_operator(s: TripleSystem, x, y) -> np.ndarray:
    return s.l_operator(x, y)


def q_operator(s: TripleSystem, x, y=None) -> np.ndarray:
    return s.q_operator(x, y)


def norm(s: TripleSystem, x) -> float:
    return s.norm(x)


# ---------------------------------------------------------------------------
# axioms


@dataclass
class AxiomReport:
    jordan: float
    outer_symmetry: float
    gelfand_naimark: float
    norm_inequality: float
    hermitian_asymmetry: float
    min_spectrum: float
    samples: int
    tol: float
    degenerate: bool = False

    @property
    def passed(self) -> bool:
        if self.degenerate:
            return False
        return (max(self.jordan, self.outer_symmetry, self.gelfand_naimark,
                    self.norm_inequality, self.hermitian_asymmetry) <= self.tol
                and self.min_spectrum >= -self.tol)

    def as_dict(self) -> dict:
        return {
            "jordan_identity": self.jordan,
            "outer_symmetry": self.outer_symmetry,
            "gelfand_naimark": self.gelfand_naimark,
            "norm_inequality_excess": self.norm_inequality,
            "hermitian_asymmetry": self.hermitian_asymmetry,
            "min_spectrum_L_aa": self.min_spectrum,
            "samples": self.samples,
            "tol": self.tol,
            "degenerate": self.degenerate,
            "passed": self.passed,
        }


def jordan_residuals(s: TripleSystem, a, b, x, y, z) -> np.ndarray:
    """Per-row norm of ``{a,b,{x,y,z}} - {{a,b,x},y,z} + {x,{b,a,y},z} - {x,y,{a,b,z}}``."""
    p = s.product_batch
    lhs = p(a, b, p(x, y, z))
    rhs = p(p(a, b, x), y, z) - p(x, p(b, a, y), z) + p(x, y, p(a, b, z))
    return np.linalg.norm(lhs - rhs, axis=1)


def verify_axioms(s: TripleSystem, tol: float | Tolerances = DEFAULT_TOL,
                  samples: int | None = None, rng=None, exhaustive_dim: int = 0) -> AxiomReport:
    """Residuals of the Jordan identity, outer symmetry, Gelfand-Naimark, the
    product-norm inequality and positivity of ``L(a, a)``.

    Elements are drawn uniformly from the coordinate unit sphere.  When
    ``dim <= exhaustive_dim`` the Jordan identity is also checked on every
    basis quintuple.
    """
    tols = tol if isinstance(tol, Tolerances) else DEFAULT_TOL.with_(residual_tol=tol)
    samples = tols.sample_count if samples is None else samples
    rng = tols.rng(11) if rng is None else rng
    n = s.dim
    t = s.tensor
    outer = float(np.max(np.abs(t - t.transpose(2, 1, 0, 3))))
    if s.is_degenerate:
        return AxiomReport(0.0, outer, 0.0, 0.0, 0.0, 0.0, samples, tols.residual_tol, True)

    a, b, x, y, z = (unit_sphere(rng, samples, n) for _ in range(5))
    jordan = float(np.max(jordan_residuals(s, a, b, x, y, z)))
    if n <= exhaustive_dim:
        idx = np.indices((n,) * 5).reshape(5, -1)
        eye = np.eye(n)
        jordan = max(jordan, float(np.max(jordan_residuals(s, *(eye[i] for i in idx)))))

    cube = s.product_batch(a, a, a)
    na = s.norm_batch(a)
    gn = float(np.max(np.abs(s.norm_batch(cube) - na**3)))

    prod = s.product_batch(x, y, z)
    excess = s.norm_batch(prod) - s.norm_batch(x) * s.norm_batch(y) * s.norm_batch(z)
    ineq = float(max(0.0, np.max(excess)))

    m = min(samples, 2000)
    ll = s.l_operator_batch(a[:m], a[:m])
    asym = float(np.max(np.abs(ll - ll.transpose(0, 2, 1))))
    spec = float(np.min(np.linalg.eigvalsh(0.5 * (ll + ll.transpose(0, 2, 1)))))
    return AxiomReport(jordan, outer, gn, ineq, asym, spec, samples, tols.residual_tol)


# ---------------------------------------------------------------------------
# conjugations, complexification and real forms


@dataclass(frozen=True)
class Conjugation:
    """A real-linear map on a realified complex triple, meant to have period two."""

    map: np.ndarray = field(repr=False)

    @property
    def order_two(self) -> bool:
        m = self.map
        return bool(np.allclose(m @ m, np.eye(m.shape[0]), atol=1e-10))

    def defects(self, s: TripleSystem, samples: int = 200, rng=None) -> dict:
        m = np.asarray(self.map, dtype=float)
        if m.shape != (s.dim, s.dim):
            raise DimensionError("conjugation shape does not match the system")
        rng = np.random.default_rng(0) if rng is None else rng
        period = float(np.max(np.abs(m @ m - np.eye(s.dim))))
        # tau {b_i, b_j, b_k} == {tau b_i, tau b_j, tau b_k} on basis triples
        lhs = np.einsum("ijkm,am->ijka", s.tensor, m)
        rhs = np.einsum("abcd,ai,bj,ck->ijkd", s.tensor, m, m, m, optimize=True)
        product = float(np.max(np.abs(lhs - rhs)))
        xs = unit_sphere(rng, samples, s.dim)
        iso = float(np.max(np.abs(s.norm_batch(xs @ m.T) - s.norm_batch(xs))))
        return {"period_two": period, "product_preserving": product, "isometry": iso}


def canonical_conjugation(n_real: int) -> Conjugation:
    """Complex conjugation on coordinates ordered (real parts, imaginary parts)."""
    return Conjugation(np.diag(np.r_[np.ones(n_real), -np.ones(n_real)]))


def _complexify_oracle(oracle, n: int):
    if isinstance(oracle, SpectralOracle):
        # x + iy  ->  [[X, -Y], [Y, X]]
        enc = oracle.encoding
        r, c = enc.shape[1:]
        new = np.zeros((2 * n, 2 * r, 2 * c))
        new[:n, :r, :c] = enc
        new[:n, r:, c:] = enc
        new[n:, :r, c:] = -enc
        new[n:, r:, :c] = enc
        return SpectralOracle(new, 2 * oracle.block, oracle.p, oracle.q, oracle.field_tag + "c")
    if isinstance(oracle, LinfSumOracle):
        parts = []
        for idx, sub in oracle.parts:
            parts.append((np.r_[idx, n + np.asarray(idx)], complexify(sub)))
        return LinfSumOracle(tuple(parts))
    return IntrinsicOracle()


def complexify(s: TripleSystem, tau: Conjugation | None = None) -> TripleSystem:
    """Realified complexification ``E + iE`` with coordinates (re, im).

    The middle variable is conjugate-linear.  ``tau`` is accepted for symmetry
    with :func:`real_form`; only the canonical conjugation is meaningful here.
    """
    n = s.dim
    t = s.tensor
    tc = np.zeros((2 * n,) * 4)
    R, I = slice(0, n), slice(n, 2 * n)
    # real output: ac f + bd f - bc g + ad g
    tc[R, R, R, R] = t
    tc[I, I, R, R] = t
    tc[I, R, I, R] = -t
    tc[R, I, I, R] = t
    # imaginary output: ac g + bd g + bc f - ad f
    tc[R, R, I, I] = t
    tc[I, I, I, I] = t
    tc[I, R, R, I] = t
    tc[R, I, R, I] = -t
    if tau is not None and not np.allclose(tau.map, canonical_conjugation(n).map):
        raise TripleError("complexify only supports the canonical conjugation")
    return TripleSystem(tc, _complexify_oracle(s.oracle, n), f"C({s.label})")


def real_form(sc: TripleSystem, tau: Conjugation, tol: float = 1e-9) -> TripleSystem:
    """Fixed-point subtriple ``{z : tau(z) = z}`` with the induced tensor and norm."""
    d = tau.defects(sc)
    if d["period_two"] > tol:
        raise TripleError(f"conjugation is not of period two (defect {d['period_two']:.2e})")
    if d["product_preserving"] > tol:
        raise TripleError(
            f"conjugation does not preserve triple products (defect {d['product_preserving']:.2e})")
    w, v = np.linalg.eigh(0.5 * (tau.map + tau.map.T))
    basis = v[:, w > 0.5]
    if basis.shape[1] == 0:
        raise TripleError("conjugation has no fixed points")
    out = sc.restrict(basis, label=f"{sc.label}^tau")
    return TripleSystem(out.tensor, out.oracle, out.label)


# ---------------------------------------------------------------------------
# JSON structure-tensor format


def _oracle_from_json(spec: dict | None, n: int):
    if not spec or spec.get("kind", "intrinsic") == "intrinsic":
        return IntrinsicOracle()
    kind = spec["kind"]
    if kind == "spectral":
        enc = np.asarray(spec["encoding"], dtype=float)
        if enc.shape[0] != n:
            raise TripleError("encoding length does not match dim")
        return SpectralOracle(enc, int(spec.get("block", 1)), int(spec.get("p", 0)),
                              int(spec.get("q", 0)), spec.get("field", "R"))
    if kind == "linf_sum":
        parts = []
        for part in spec["parts"]:
            idx = np.asarray(part["indices"], dtype=int)
            sub = system_from_json(part["system"], validate=False)
            parts.append((idx, sub))
        return LinfSumOracle(tuple(parts))
    raise TripleError(f"unknown norm oracle kind {kind!r}")


def system_from_json(data: dict | str | Path, validate: bool = True) -> TripleSystem:
    """Load ``{"dim", "tensor", "norm_oracle", "label"}``; the tensor is symmetrized."""
    if not isinstance(data, dict):
        data = json.loads(Path(data).read_text())
    from .schema import validate_document

    validate_document(data, "tensor")
    n = int(data["dim"])
    t = np.asarray(data["tensor"], dtype=float)
    if t.shape != (n, n, n, n):
        raise TripleError(f"tensor shape {t.shape} does not match dim {n}")
    oracle = _oracle_from_json(data.get("norm_oracle"), n)
    return make_system(t, oracle, data.get("label", ""), validate=validate)


def system_to_json(s: TripleSystem) -> dict:
    out = {"dim": s.dim, "tensor": s.tensor.tolist(), "label": s.label}
    if isinstance(s.oracle, SpectralOracle):
        out["norm_oracle"] = {**s.oracle.describe(), "encoding": s.oracle.encoding.tolist()}
    elif isinstance(s.oracle, LinfSumOracle):
        out["norm_oracle"] = {"kind": "linf_sum", "parts": [
            {"indices": [int(i) for i in idx], "system": system_to_json(sub)}
            for idx, sub in s.oracle.parts]}
    else:
        out["norm_oracle"] = {"kind": "intrinsic"}
    return out
