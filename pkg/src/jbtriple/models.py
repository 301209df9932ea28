"""Concrete real JB*-triples: rectangular matrices over R, C and H, spin
factors, l-infinity sums, and JB*-algebras with their Jordan-layer helpers.

Matrix models use coordinates with respect to the basis ``E_ab (x) unit``
where the unit runs over 1 (R), 1, i (C) or 1, i, j, k (H), each encoded as
a real block.  That basis is orthonormal for ``tr(A^T B) / block``, which
keeps every ``L(x, x)`` symmetric in coordinates.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

import numpy as np

from .linalg import DEFAULT_TOL, Tolerances, commutator_norm, unit_sphere
from .triple import (
    IntrinsicOracle,
    LinfSumOracle,
    SpectralOracle,
    TripleError,
    TripleSystem,
    make_system,
)

FIELD_BLOCK = {"R": 1, "C": 2, "H": 4}


class ModelSpecError(ValueError):
    """A model string does not parse against the registry grammar."""


def field_units(field_tag: str) -> list[np.ndarray]:
    """Real block matrices of the units of R, C or H (left-regular representation)."""
    if field_tag == "R":
        return [np.eye(1)]
    if field_tag == "C":
        return [np.eye(2), np.array([[0.0, -1.0], [1.0, 0.0]])]
    if field_tag == "H":
        one = np.eye(4)
        qi = np.array([[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]], float)
        qj = np.array([[0, 0, -1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, -1, 0, 0]], float)
        qk = np.array([[0, 0, 0, -1], [0, 0, -1, 0], [0, 1, 0, 0], [1, 0, 0, 0]], float)
        return [one, qi, qj, qk]
    raise ModelSpecError(f"unknown field {field_tag!r}; expected R, C or H")


def matrix_basis(p: int, q: int, field_tag: str) -> np.ndarray:
    """Encodings of ``E_ab (x) unit``, shape (p*q*d, p*d, q*d)."""
    units = field_units(field_tag)
    out = []
    for a in range(p):
        for b in range(q):
            e = np.zeros((p, q))
            e[a, b] = 1.0
            out.extend(np.kron(e, u) for u in units)
    return np.array(out)


def _c_star_tensor(enc: np.ndarray, block: int) -> np.ndarray:
    """Tensor of ``{a,b,c} = (a b^T c + c b^T a) / 2`` in the encoded basis."""
    abc = np.einsum("iab,jcb,kcd->ijkad", enc, enc, enc, optimize=True)
    prod = 0.5 * (abc + abc.transpose(2, 1, 0, 3, 4))
    return np.einsum("ijkad,mad->ijkm", prod, enc, optimize=True) / block


def rect_matrix_triple(p: int, q: int, field_tag: str = "R", validate: bool = True,
                       tol: Tolerances = DEFAULT_TOL) -> TripleSystem:
    """The real JB*-triple of p x q matrices over R, C or H."""
    if p < 1 or q < 1:
        raise ModelSpecError("matrix dimensions must be at least 1")
    d = FIELD_BLOCK.get(field_tag)
    if d is None:
        raise ModelSpecError(f"unknown field {field_tag!r}")
    enc = matrix_basis(p, q, field_tag)
    t = _c_star_tensor(enc, d)
    oracle = SpectralOracle(enc, d, p, q, field_tag)
    return make_system(t, oracle, f"mat:{field_tag}:{p}:{q}", validate=validate, tol=tol)


def spin_factor(n: int, validate: bool = True, tol: Tolerances = DEFAULT_TOL) -> TripleSystem:
    """Real spin factor: ``{x,y,z} = <x,y>z + <z,y>x - <x,z>y`` with the intrinsic norm."""
    if n < 2:
        raise ModelSpecError("spin factor needs n >= 2")
    eye = np.eye(n)
    t = (np.einsum("ij,km->ijkm", eye, eye) + np.einsum("kj,im->ijkm", eye, eye)
         - np.einsum("ik,jm->ijkm", eye, eye))
    return make_system(t, IntrinsicOracle(), f"spin:{n}", validate=validate, tol=tol)


def direct_sum_linf(*systems: TripleSystem, label: str | None = None) -> TripleSystem:
    """Componentwise triple product with the max norm."""
    if not systems:
        raise ValueError("need at least one summand")
    dims = [s.dim for s in systems]
    n = sum(dims)
    t = np.zeros((n,) * 4)
    parts = []
    off = 0
    for s, d in zip(systems, dims):
        sl = slice(off, off + d)
        t[sl, sl, sl, sl] = s.tensor
        parts.append((np.arange(off, off + d), s))
        off += d
    label = label or "sum:" + "+".join(s.label for s in systems)
    return TripleSystem(t, LinfSumOracle(tuple(parts)), label)


def summand_slices(s: TripleSystem) -> list[np.ndarray]:
    if not isinstance(s.oracle, LinfSumOracle):
        return [np.arange(s.dim)]
    return [idx for idx, _ in s.oracle.parts]


# ---------------------------------------------------------------------------
# JB*-algebras


@dataclass(frozen=True, eq=False)
class JBAlgebraModel:
    """A unital real JB*-algebra with the triple ``(a o b*) o c + (c o b*) o a - (a o c) o b*``.

    ``product[i, j, m]`` gives ``b_i o b_j``; ``involution`` is the matrix of ``*``.
    """

    system: TripleSystem
    product: np.ndarray = field(repr=False)
    involution: np.ndarray = field(repr=False)
    unit: np.ndarray = field(repr=False)

    @property
    def dim(self) -> int:
        return self.system.dim

    @property
    def label(self) -> str:
        return self.system.label

    def jordan(self, x, y) -> np.ndarray:
        return np.einsum("ijm,i,j->m", self.product, x, y)

    def jordan_batch(self, xs, ys) -> np.ndarray:
        return np.einsum("ijm,ni,nj->nm", self.product, xs, ys)

    def star(self, x) -> np.ndarray:
        return self.involution @ np.asarray(x, dtype=float)

    def mult_operator(self, a) -> np.ndarray:
        """Matrix of ``x -> a o x``."""
        return np.einsum("ijm,i->mj", self.product, np.asarray(a, dtype=float))

    def self_adjoint_part(self, x):
        return 0.5 * (x + self.star(x))

    def skew_part(self, x):
        return 0.5 * (x - self.star(x))


def _eq2_tensor(c: np.ndarray, j: np.ndarray) -> np.ndarray:
    d = np.einsum("ilm,lj->ijm", c, j)  # b_i o b_j*
    t1 = np.einsum("ijm,mko->ijko", d, c)  # (b_i o b_j*) o b_k
    t3 = np.einsum("ikm,mjo->ijko", c, d)  # (b_i o b_k) o b_j*
    return t1 + t1.transpose(2, 1, 0, 3) - t3


def jb_algebra_defects(product, involution, unit, samples: int = 200, rng=None) -> dict:
    c = np.asarray(product, dtype=float)
    j = np.asarray(involution, dtype=float)
    u = np.asarray(unit, dtype=float)
    n = c.shape[0]
    rng = np.random.default_rng(5) if rng is None else rng
    a, b = unit_sphere(rng, samples, n), unit_sphere(rng, samples, n)
    jp = lambda x, y: np.einsum("ijm,ni,nj->nm", c, x, y)  # noqa: E731
    a2 = jp(a, a)
    return {
        "commutativity": float(np.max(np.abs(c - c.transpose(1, 0, 2)))),
        "involution_period": float(np.max(np.abs(j @ j - np.eye(n)))),
        "unit": float(np.max(np.abs(np.einsum("ijm,i->mj", c, u) - np.eye(n)))),
        "jordan_identity": float(np.max(np.abs(jp(a2, jp(a, b)) - jp(a, jp(a2, b))))),
        "star_homomorphism": float(np.max(np.abs(jp(a, b) @ j.T - jp(a @ j.T, b @ j.T)))),
    }


def jb_algebra_triple(product, involution, unit, oracle=None, label: str = "",
                      validate: bool = True, tol: Tolerances = DEFAULT_TOL) -> JBAlgebraModel:
    c = np.asarray(product, dtype=float)
    j = np.asarray(involution, dtype=float)
    u = np.asarray(unit, dtype=float)
    n = u.shape[0]
    if c.shape != (n, n, n) or j.shape != (n, n):
        raise TripleError("product must be (n, n, n) and involution (n, n)")
    if validate:
        bad = {k: v for k, v in jb_algebra_defects(c, j, u).items() if v > 1e3 * tol.residual_tol}
        if bad:
            raise TripleError(f"not a unital JB*-algebra: {bad}")
    system = make_system(_eq2_tensor(c, j), oracle, label, validate=validate, tol=tol)
    return JBAlgebraModel(system, c, j, u)


def matrix_jb_algebra(n: int, field_tag: str = "R", validate: bool = True) -> JBAlgebraModel:
    """n x n matrices over R, C or H with ``a o b = (ab + ba)/2`` and ``* = ``conjugate transpose."""
    d = FIELD_BLOCK.get(field_tag)
    if d is None:
        raise ModelSpecError(f"unknown field {field_tag!r}")
    enc = matrix_basis(n, n, field_tag)
    ab = np.einsum("iac,jcb->ijab", enc, enc)
    c = np.einsum("ijab,mab->ijm", 0.5 * (ab + ab.transpose(1, 0, 2, 3)), enc) / d
    j = np.einsum("iba,mab->mi", enc, enc) / d
    unit = np.einsum("mab,ab->m", enc, np.eye(n * d)) / d
    return jb_algebra_triple(c, j, unit, SpectralOracle(enc, d, n, n, field_tag),
                             f"jbmat:{field_tag}:{n}", validate=validate)


def symmetric_jb_algebra(n: int, validate: bool = True) -> JBAlgebraModel:
    """Real symmetric n x n matrices (a JB-algebra, ``*`` the identity)."""
    basis = []
    for a in range(n):
        for b in range(a, n):
            e = np.zeros((n, n))
            if a == b:
                e[a, a] = 1.0
            else:
                e[a, b] = e[b, a] = 1 / np.sqrt(2)
            basis.append(e)
    enc = np.array(basis)
    ab = np.einsum("iac,jcb->ijab", enc, enc)
    c = np.einsum("ijab,mab->ijm", 0.5 * (ab + ab.transpose(1, 0, 2, 3)), enc)
    m = len(basis)
    unit = np.einsum("mab,ab->m", enc, np.eye(n))
    return jb_algebra_triple(c, np.eye(m), unit, SpectralOracle(enc, 1, n, n, "R"),
                             f"sym:{n}", validate=validate)


def jb_direct_sum(*models: JBAlgebraModel) -> JBAlgebraModel:
    n = sum(m.dim for m in models)
    c = np.zeros((n, n, n))
    j = np.zeros((n, n))
    off = 0
    for m in models:
        sl = slice(off, off + m.dim)
        c[sl, sl, sl] = m.product
        j[sl, sl] = m.involution
        off += m.dim
    unit = np.concatenate([m.unit for m in models])
    system = direct_sum_linf(*(m.system for m in models))
    return JBAlgebraModel(system, c, j, unit)


def jb_algebra_from_json(data: dict | str | Path, validate: bool = True) -> JBAlgebraModel:
    """Load ``{"dim", "product", "involution", "unit", "label"}``."""
    if not isinstance(data, dict):
        data = json.loads(Path(data).read_text())
    from .schema import validate_document

    validate_document(data, "jb_algebra")
    return jb_algebra_triple(data["product"], data["involution"], data["unit"], None,
                             data.get("label", "jb"), validate=validate)


def u_operator(m: JBAlgebraModel, a, b=None) -> np.ndarray:
    """Matrix of ``x -> {a, x*, b}``; ``U_a`` when ``b`` is omitted."""
    b = a if b is None else b
    return m.system.q_operator(a, b) @ m.involution


def operator_commute(m: JBAlgebraModel, a, b, tol: float = 1e-9) -> bool:
    return commutator_norm(m.mult_operator(a), m.mult_operator(b)) <= tol


def central_defect(m: JBAlgebraModel, z) -> float:
    mz = m.mult_operator(z)
    return max(commutator_norm(mz, m.mult_operator(e)) for e in np.eye(m.dim))


def is_central(m: JBAlgebraModel, z, tol: float = 1e-9) -> bool:
    return central_defect(m, z) <= tol


# ---------------------------------------------------------------------------
# registry

REGISTERED_MODELS = (
    "mat:R:2:2",
    "mat:R:3:3",
    "mat:R:2:3",
    "mat:C:2:2",
    "mat:H:1:2",
    "spin:3",
    "spin:5",
    "sum:mat:R:2:2+mat:R:1:1",
    "sum:mat:C:1:2+spin:3",
    "sum:mat:R:2:2+mat:R:2:2+mat:R:1:1",
)

REGISTERED_JB_MODELS = (
    "jbmat:R:2",
    "jbmat:C:2",
    "sym:3",
    "sum:jbmat:R:2+jbmat:R:1",
    "sum:sym:3+jbmat:R:1",
)


def _ints(parts, spec):
    try:
        vals = [int(x) for x in parts]
    except ValueError as exc:
        raise ModelSpecError(f"bad integer in model spec {spec!r}") from exc
    if any(v < 1 for v in vals):
        raise ModelSpecError(f"dimensions must be positive in {spec!r}")
    return vals


@lru_cache(maxsize=64)
def resolve(spec: str):
    """Build the model named by ``spec``.

    Grammar: ``mat:F:p:q``, ``spin:n``, ``jbmat:F:n``, ``sym:n``,
    ``sum:A+B+...``, ``jb:file.json`` and ``file:tensor.json``.  JB*-algebra
    specs (and sums made only of them) return a :class:`JBAlgebraModel`,
    everything else a :class:`TripleSystem`.
    """
    if not isinstance(spec, str) or not spec:
        raise ModelSpecError("empty model spec")
    head, _, rest = spec.partition(":")
    if head == "sum":
        parts = [resolve(p) for p in rest.split("+") if p]
        if len(parts) < 2:
            raise ModelSpecError(f"sum needs at least two summands: {spec!r}")
        if all(isinstance(p, JBAlgebraModel) for p in parts):
            return jb_direct_sum(*parts)
        return direct_sum_linf(*(as_system(p) for p in parts), label=spec)
    fields = rest.split(":") if rest else []
    if head == "mat":
        if len(fields) != 3:
            raise ModelSpecError(f"expected mat:F:p:q, got {spec!r}")
        p, q = _ints(fields[1:], spec)
        return rect_matrix_triple(p, q, fields[0])
    if head == "spin":
        if len(fields) != 1:
            raise ModelSpecError(f"expected spin:n, got {spec!r}")
        (n,) = _ints(fields, spec)
        return spin_factor(n)
    if head == "jbmat":
        if len(fields) != 2:
            raise ModelSpecError(f"expected jbmat:F:n, got {spec!r}")
        (n,) = _ints(fields[1:], spec)
        return matrix_jb_algebra(n, fields[0])
    if head == "sym":
        if len(fields) != 1:
            raise ModelSpecError(f"expected sym:n, got {spec!r}")
        (n,) = _ints(fields, spec)
        return symmetric_jb_algebra(n)
    if head in ("jb", "file"):
        path = Path(rest)
        try:
            data = json.loads(path.read_text())
        except (OSError, ValueError) as exc:
            raise ModelSpecError(f"cannot read model file {rest!r}: {exc}") from exc
        try:
            if head == "jb":
                return jb_algebra_from_json(data)
            from .triple import system_from_json

            return system_from_json(data)
        except (TripleError, KeyError, ValueError) as exc:
            raise ModelSpecError(f"invalid model file {rest!r}: {exc}") from exc
    raise ModelSpecError(f"unknown model kind {head!r} in {spec!r}")


def as_system(model) -> TripleSystem:
    return model.system if isinstance(model, JBAlgebraModel) else model
