"""Tripotents, Peirce decompositions and the order structure on tripotents.

A tripotent is an element with ``{e,e,e} = e``.  Its Peirce projections are
computed from the closed-form expressions in ``L(e,e)`` and ``Q(e)``; the
eigenspaces of those operators give an independent second computation
which the checks compare against.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product as iproduct

import numpy as np

from .linalg import (DEFAULT_TOL, Subspace, Tolerances, as_tolerances, cluster_values,
                     commutator_norm, idempotent_defect, unit_sphere)
from .models import JBAlgebraModel
from .search import hill_climb, max_scale
from .triple import TripleSystem


class TripotentError(ValueError):
    pass


class PeirceClusterError(ValueError):
    """Eigenvalues of ``L(e,e)`` or ``Q(e)`` do not sit on their expected values."""


class IncompatibleError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Tripotent:
    element: np.ndarray = field(repr=False)
    residual: float = 0.0
    iterations: int = 0
    both_signs: bool = False  # -e was found as well
    peirce_cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        e = np.array(self.element, dtype=float)
        e.setflags(write=False)
        object.__setattr__(self, "element", e)

    @property
    def is_zero(self) -> bool:
        return not np.any(self.element)

    def __repr__(self):
        return (f"Tripotent(coords={np.round(self.element, 6).tolist()}, "
                f"residual={self.residual:.1e})")


def _elem(e) -> np.ndarray:
    return e.element if isinstance(e, Tripotent) else np.asarray(e, dtype=float)


def tripotent_residual(s: TripleSystem, e) -> float:
    e = _elem(e)
    return float(np.linalg.norm(s.product(e, e, e) - e))


def is_tripotent(s: TripleSystem, e, tol: float = DEFAULT_TOL.residual_tol):
    """``(passed, residual)`` for ``||{e,e,e} - e|| <= tol``."""
    r = tripotent_residual(s, e)
    return r <= tol, r


def certify(s: TripleSystem, e, tol: float = DEFAULT_TOL.residual_tol) -> Tripotent:
    if isinstance(e, Tripotent):
        e = e.element
    ok, r = is_tripotent(s, e, tol)
    if not ok:
        raise TripotentError(f"not a tripotent: residual {r:.3e} > {tol:.1e}")
    return Tripotent(np.asarray(e, dtype=float), r)


# ---------------------------------------------------------------------------
# Newton search


def newton(s: TripleSystem, x0, tol: float = DEFAULT_TOL.residual_tol,
           max_iter: int = DEFAULT_TOL.newton_max_iter, polish: int = 4):
    """Newton iteration for ``{e,e,e} = e`` with least-squares steps.

    The Jacobian ``2L(e,e) + Q(e) - Id`` is singular at every tripotent, so the
    minimum-norm step is taken.  A step that does not decrease the residual is
    halved (up to 8 times).  Once within ``tol`` up to ``polish`` further steps
    are taken while they still help, so returned tripotents are accurate to
    rounding.  Returns ``(e, iterations, converged)``.
    """
    e = np.array(x0, dtype=float)
    f = s.product(e, e, e) - e
    r = float(np.linalg.norm(f))
    for it in range(max_iter + 1):
        if r <= tol:
            return _polish(s, e, f, r, polish), it, True
        if it == max_iter or not np.isfinite(r) or r > 1e8:
            break
        e, f, r = _newton_step(s, e, f, r)
    return e, max_iter, False


def _newton_step(s: TripleSystem, e, f, r):
    jac = 2.0 * s.l_operator(e, e) + s.q_operator(e) - np.eye(s.dim)
    step = np.linalg.lstsq(jac, -f, rcond=1e-10)[0]
    lam = 1.0
    for _ in range(9):
        cand = e + lam * step
        fc = s.product(cand, cand, cand) - cand
        rc = float(np.linalg.norm(fc))
        if rc < r:
            break
        lam *= 0.5
    return cand, fc, rc


def _polish(s: TripleSystem, e, f, r, steps: int):
    for _ in range(steps):
        if r <= 1e-15:
            break
        e2, f2, r2 = _newton_step(s, e, f, r)
        if r2 >= r:
            break
        e, f, r = e2, f2, r2
    return e


@dataclass
class TripotentSearch:
    tripotents: list
    zero_count: int = 0
    failed: int = 0
    starts: int = 0


def structured_starts(n: int) -> np.ndarray:
    """``+-b_i`` and ``+-(b_i +- b_j)``; in matrix models these are signed matrix units
    and their sums, which Newton fixes immediately."""
    rows = list(np.eye(n)) + list(-np.eye(n))
    for i in range(n):
        for j in range(i + 1, n):
            for sign in (1.0, -1.0):
                v = np.zeros(n)
                v[i], v[j] = 1.0, sign
                rows.extend((v, -v))
    return np.array(rows)


def _dedup(found: list, e: np.ndarray, it: int, r: float, tol: float):
    for k, t in enumerate(found):
        if np.linalg.norm(t.element - e) <= tol:
            return
        if np.linalg.norm(t.element + e) <= tol:
            if not t.both_signs:
                found[k] = Tripotent(t.element, t.residual, t.iterations, True)
            return
    found.append(Tripotent(e, r, it))


def search_tripotents(s: TripleSystem, n_starts: int = 200, tol: float | Tolerances = DEFAULT_TOL,
                      rng=None, structured: bool = True, dedup_tol: float = 1e-6) -> TripotentSearch:
    """Multi-start Newton search.

    Structured starts come first (truncated to ``n_starts``); the remainder are
    random points on the unit sphere of the system norm, rescaled by a uniform
    factor in ``[0.5, 1.5]``.
    """
    if n_starts < 1:
        raise ValueError("n_starts must be >= 1")
    tols = as_tolerances(tol)
    rng = tols.rng(21) if rng is None else rng
    starts = structured_starts(s.dim)[:n_starts] if structured else np.zeros((0, s.dim))
    extra = n_starts - starts.shape[0]
    if extra > 0:
        x = unit_sphere(rng, extra, s.dim)
        x /= s.norm_batch(x)[:, None]
        x *= rng.uniform(0.5, 1.5, size=(extra, 1))
        starts = np.vstack([starts, x])
    found: list[Tripotent] = []
    zero = failed = 0
    for x0 in starts:
        e, it, ok = newton(s, x0, tols.residual_tol, tols.newton_max_iter)
        if not ok:
            failed += 1
            continue
        if np.linalg.norm(e) <= dedup_tol:
            zero += 1
            continue
        _dedup(found, e, it, tripotent_residual(s, e), dedup_tol)
    return TripotentSearch(found, zero, failed, int(starts.shape[0]))


def find_tripotents(s: TripleSystem, n_starts: int = 200, tol: float | Tolerances = DEFAULT_TOL,
                    rng=None) -> list[Tripotent]:
    return search_tripotents(s, n_starts, tol, rng).tripotents


def extend_to_complete(s: TripleSystem, e, rng=None, starts: int = 10,
                       tol: float = DEFAULT_TOL.residual_tol) -> Tripotent:
    """Add tripotents found in ``E0(e)`` until nothing is left there.

    ``E0(e)`` is a subtriple orthogonal to ``e``, so ``e + u`` is again a
    tripotent for any tripotent ``u`` in it.
    """
    e = _elem(e).copy()
    rng = np.random.default_rng(23) if rng is None else rng
    for _ in range(s.dim):
        b = peirce_data(s, e).E0.basis
        if b.shape[1] == 0:
            break
        sub = s.restrict(b)
        found = search_tripotents(sub, starts, tol, rng, structured=False).tripotents
        if not found:
            raise TripotentError("no nonzero tripotent found in E0(e)")
        x, _, ok = newton(s, e + b @ found[0].element, tol)
        if not ok:
            raise TripotentError("extension lost the tripotent property")
        e = x
    return certify(s, e, tol)


# ---------------------------------------------------------------------------
# Peirce projections


def peirce_projections(s: TripleSystem, e):
    """``(P0, P1, P2)`` from ``Q(e)^2``, ``2(L(e,e) - Q(e)^2)`` and ``Id - 2L(e,e) + Q(e)^2``."""
    e = _elem(e)
    lee = s.l_operator(e, e)
    q = s.q_operator(e)
    q2 = q @ q
    return np.eye(s.dim) - 2.0 * lee + q2, 2.0 * (lee - q2), q2


def peirce_projection(s: TripleSystem, e, k: int) -> np.ndarray:
    if k not in (0, 1, 2):
        raise ValueError("k must be 0, 1 or 2")
    return peirce_projections(s, e)[k]


def signed_projections(s: TripleSystem, e) -> dict:
    """Projections onto the ``+1``, ``-1`` and ``0`` eigenspaces of ``Q(e)``."""
    q = s.q_operator(_elem(e))
    q2 = q @ q
    return {1: 0.5 * (q2 + q), -1: 0.5 * (q2 - q), 0: np.eye(s.dim) - q2}


def eigen_projectors(a: np.ndarray, targets, cluster_tol: float = DEFAULT_TOL.cluster_tol) -> dict:
    """Spectral projectors of a diagonalizable matrix whose eigenvalues lie in ``targets``.

    Raises ``PeirceClusterError`` if an eigenvalue cluster does not sit on one
    of the targets.
    """
    a = np.asarray(a, dtype=float)
    n = a.shape[0]
    sym = np.allclose(a, a.T, atol=1e-12)
    if sym:
        vals, vecs = np.linalg.eigh(0.5 * (a + a.T))
        inv = vecs.T
    else:
        vals, vecs = np.linalg.eig(a)
        if np.max(np.abs(vals.imag), initial=0.0) > cluster_tol:
            raise PeirceClusterError("complex eigenvalues")
        inv = np.linalg.inv(vecs)
        vals = vals.real
    out = {t: np.zeros((n, n)) for t in targets}
    for grp in cluster_values(vals, cluster_tol):
        centre = float(np.mean(vals[grp]))
        hit = [t for t in targets if abs(centre - t) <= cluster_tol]
        if not hit:
            raise PeirceClusterError(f"eigenvalue cluster at {centre:.6g} not in {tuple(targets)}")
        out[hit[0]] = out[hit[0]] + np.real(vecs[:, grp] @ inv[grp, :])
    return out


@dataclass(frozen=True, eq=False)
class PeirceData:
    E2: Subspace
    E1: Subspace
    E0: Subspace
    E_plus: Subspace
    E_minus: Subspace
    projectors: dict = field(repr=False)  # keys 0, 1, 2, "+1", "-1", "0s"

    def space(self, k) -> Subspace:
        return {2: self.E2, 1: self.E1, 0: self.E0, "+1": self.E_plus, "-1": self.E_minus}[k]

    @property
    def E_zero(self) -> Subspace:
        return self.E1 + self.E0


def peirce_data(s: TripleSystem, e, rank_tol: float = 1e-8) -> PeirceData:
    key = s.fingerprint()
    if isinstance(e, Tripotent) and key in e.peirce_cache:
        return e.peirce_cache[key]
    p0, p1, p2 = peirce_projections(s, e)
    sp = signed_projections(s, e)
    pd = PeirceData(Subspace.range_of(p2, rank_tol), Subspace.range_of(p1, rank_tol),
                    Subspace.range_of(p0, rank_tol), Subspace.range_of(sp[1], rank_tol),
                    Subspace.range_of(sp[-1], rank_tol),
                    {0: p0, 1: p1, 2: p2, "+1": sp[1], "-1": sp[-1], "0s": sp[0]})
    if isinstance(e, Tripotent):
        e.peirce_cache[key] = pd
    return pd


def signed_peirce(s: TripleSystem, e):
    """``(E^{+1}, E^{-1}, E^0)`` as subspaces."""
    pd = peirce_data(s, e)
    return pd.E_plus, pd.E_minus, Subspace.range_of(pd.projectors["0s"])


def formula_vs_eigen(s: TripleSystem, e, cluster_tol: float = DEFAULT_TOL.cluster_tol) -> dict:
    """Max entrywise gap between closed-form and eigenspace projectors, per projection."""
    e = _elem(e)
    p0, p1, p2 = peirce_projections(s, e)
    sp = signed_projections(s, e)
    byl = eigen_projectors(s.l_operator(e, e), (0.0, 0.5, 1.0), cluster_tol)
    byq = eigen_projectors(s.q_operator(e), (-1.0, 0.0, 1.0), cluster_tol)
    gap = lambda a, b: float(np.max(np.abs(a - b)))  # noqa: E731
    return {"P0": gap(p0, byl[0.0]), "P1": gap(p1, byl[0.5]), "P2": gap(p2, byl[1.0]),
            "P+1": gap(sp[1], byq[1.0]), "P-1": gap(sp[-1], byq[-1.0]), "P0s": gap(sp[0], byq[0.0])}


def peirce_algebra_defects(s: TripleSystem, e) -> dict:
    """Idempotency, mutual annihilation and resolution of identity for ``P0, P1, P2``."""
    ps = peirce_projections(s, e)
    cross = max(float(np.max(np.abs(ps[i] @ ps[j]))) for i in range(3) for j in range(3) if i != j)
    return {"idempotent": max(idempotent_defect(p) for p in ps),
            "annihilate": cross,
            "sum_identity": float(np.max(np.abs(sum(ps) - np.eye(s.dim))))}


def contractivity_defect(s: TripleSystem, e, samples: int = 10_000, rng=None,
                         signed: bool = True) -> float:
    """``max (||P x|| - ||x||)`` over sampled unit vectors and each projection."""
    rng = np.random.default_rng(31) if rng is None else rng
    x = unit_sphere(rng, samples, s.dim)
    nx = s.norm_batch(x)
    pd = peirce_data(s, e)
    keys = [0, 1, 2] + (["+1", "-1"] if signed else [])
    worst = -np.inf
    for k in keys:
        worst = max(worst, float(np.max(s.norm_batch(x @ pd.projectors[k].T) - nx)))
    return worst


# ---------------------------------------------------------------------------
# Peirce rules


@dataclass
class RuleReport:
    max_residual: float
    tol: float
    checked: int
    violations: list  # (rule, witness, residual)

    @property
    def passed(self) -> bool:
        return self.max_residual <= self.tol

    def as_dict(self) -> dict:
        return {"max_residual": self.max_residual, "tol": self.tol, "checked": self.checked,
                "violations": [{"rule": r, "witness": w, "residual": v}
                               for r, w, v in self.violations[:20]]}


def _block_products(s: TripleSystem, a: np.ndarray, b: np.ndarray, c: np.ndarray) -> np.ndarray:
    return np.einsum("xyzm,xi,yj,zk->ijkm", s.tensor, a, b, c, optimize=True)


def check_peirce_rules(s: TripleSystem, e, tol: float = 1e-8) -> RuleReport:
    """Check index rules, the two vanishing rules and the signed rules on Peirce bases.

    Residuals are Euclidean norms of the component outside the target space.
    """
    pd = peirce_data(s, e)
    n = s.dim
    eye = np.eye(n)
    proj = pd.projectors
    violations = []
    worst = 0.0
    checked = 0

    def record(rule, names, res):
        nonlocal worst, checked
        checked += res.size
        if res.size == 0:
            return
        worst = max(worst, float(res.max()))
        for idx in zip(*np.nonzero(res > tol)):
            w = "{" + ",".join(f"{nm}[{i}]" for nm, i in zip(names, idx)) + "}"
            violations.append((rule, w, float(res[idx])))

    bases = {k: pd.space(k).basis for k in (0, 1, 2)}
    for i, j, k in iproduct((0, 1, 2), repeat=3):
        prod = _block_products(s, bases[i], bases[j], bases[k])
        t = i - j + k
        out = prod if t not in (0, 1, 2) else prod - prod @ proj[t].T
        record(f"E{i}E{j}E{k}->E{t}", (f"E{i}", f"E{j}", f"E{k}"), np.linalg.norm(out, axis=-1))
    for i, j in ((0, 2), (2, 0)):
        prod = _block_products(s, bases[i], bases[j], eye)
        record(f"E{i}E{j}E->0", (f"E{i}", f"E{j}", "b"), np.linalg.norm(prod, axis=-1))
    sb = {1: pd.E_plus.basis, -1: pd.E_minus.basis}
    for i, j, k in iproduct((1, -1), repeat=3):
        prod = _block_products(s, sb[i], sb[j], sb[k])
        t = i * j * k
        out = prod - prod @ proj["+1" if t == 1 else "-1"].T
        names = tuple(f"E^{m:+d}" for m in (i, j, k))
        record(f"E^{i:+d}E^{j:+d}E^{k:+d}->E^{t:+d}", names, np.linalg.norm(out, axis=-1))
    violations.sort(key=lambda v: -v[2])
    return RuleReport(worst, tol, checked, violations)


# ---------------------------------------------------------------------------
# orthogonality, order, compatibility


def are_orthogonal(s: TripleSystem, x, y, tol: float = DEFAULT_TOL.residual_tol) -> bool:
    return float(np.max(np.abs(s.l_operator(_elem(x), _elem(y))))) <= tol


def m_orthogonality_defect(s: TripleSystem, x, y) -> float:
    """``max | ||x +- y|| - max(||x||, ||y||) |``."""
    x, y = _elem(x), _elem(y)
    nx, ny, npl, nmi = s.norm_batch(np.array([x, y, x + y, x - y]))
    return float(max(abs(npl - max(nx, ny)), abs(nmi - max(nx, ny))))


def leq(s: TripleSystem, e, v, tol: float = DEFAULT_TOL.residual_tol) -> bool:
    """``e <= v`` iff ``v - e`` is a tripotent orthogonal to ``e``."""
    e, v = _elem(e), _elem(v)
    ok, _ = is_tripotent(s, v - e, tol)
    return ok and are_orthogonal(s, v - e, e, tol)


def compatibility_defect(s: TripleSystem, e, v) -> float:
    pe = peirce_projections(s, e)
    pv = peirce_projections(s, v)
    return max(commutator_norm(a, b) for a in pe for b in pv)


def are_compatible(s: TripleSystem, e, v, tol: float = DEFAULT_TOL.residual_tol) -> bool:
    return compatibility_defect(s, e, v) <= tol


def is_complete(s: TripleSystem, e, rank_tol: float = 1e-8) -> bool:
    return peirce_data(s, e, rank_tol).E0.dim == 0


def joint_peirce(s: TripleSystem, e, v, tol: float = DEFAULT_TOL.residual_tol,
                 rank_tol: float = 1e-8) -> dict:
    """``{(j, k): range(P_j(e) P_k(v))}`` for a compatible pair."""
    d = compatibility_defect(s, e, v)
    if d > tol:
        raise IncompatibleError(f"Peirce projections do not commute (defect {d:.3e})")
    pe = peirce_projections(s, e)
    pv = peirce_projections(s, v)
    return {(j, k): Subspace.range_of(pe[j] @ pv[k], rank_tol)
            for j in (0, 1, 2) for k in (0, 1, 2)}


# ---------------------------------------------------------------------------
# Peirce-2 algebra


def peirce2_algebra(s: TripleSystem, e) -> JBAlgebraModel:
    """``E2(e)`` with ``x o_e y = {x,e,y}``, ``x* = {e,x,e}`` and unit ``e``.

    Coordinates are those of an orthonormal basis of ``E2(e)``.
    """
    e = _elem(e)
    b = peirce_data(s, e).E2.basis
    prod = np.einsum("xyzm,xi,y,zj,mk->ijk", s.tensor, b, e, b, b, optimize=True)
    inv = b.T @ s.q_operator(e) @ b
    sub = s.restrict(b, f"{s.label}|E2")
    return JBAlgebraModel(sub, prod, inv, b.T @ e)


def leq_via_peirce2(s: TripleSystem, e, v, tol: float = 1e-8) -> bool:
    """``e`` lies in ``E2(v)`` and is a self-adjoint idempotent of its Peirce-2 algebra."""
    e, v = _elem(e), _elem(v)
    b = peirce_data(s, v).E2.basis
    if np.linalg.norm(e - b @ (b.T @ e)) > tol:
        return False
    m = peirce2_algebra(s, v)
    c = b.T @ e
    return (np.linalg.norm(m.jordan(c, c) - c) <= tol
            and np.linalg.norm(m.star(c) - c) <= tol)


# ---------------------------------------------------------------------------
# geometric checks around a tripotent

_SLACK = 1e-14


def _ball_samples(rng, basis: np.ndarray, s: TripleSystem, count: int) -> np.ndarray:
    """Points of the closed unit ball of ``span(basis)``, a tenth of them on the sphere."""
    if basis.shape[1] == 0:
        return np.zeros((count, s.dim))
    y = unit_sphere(rng, count, basis.shape[1]) @ basis.T
    y /= s.norm_batch(y)[:, None]
    r = rng.uniform(0.0, 1.0, size=count)
    r[: count // 10] = 1.0
    return y * r[:, None]


@dataclass
class CPReport:
    complete: bool
    inclusion_defect: float  # max(||e +- y||) - 1 over sampled y in the E0 ball
    inclusion_samples: int
    ascent_max: float  # max ||P2 x|| + ||P1 x|| over contractive perturbations found
    perturbation_max: float  # max ||x|| over contractive perturbations found
    found_perturbation: bool
    tol: float

    @property
    def consistent(self) -> bool:
        """Completeness agrees with the outcome of the perturbation search."""
        return self.complete != self.found_perturbation

    @property
    def passed(self) -> bool:
        return self.inclusion_defect <= self.tol and self.ascent_max <= 1e-6 and self.consistent

    def as_dict(self) -> dict:
        return dict(self.__dict__, consistent=self.consistent, passed=self.passed)


def cp_set_check(s: TripleSystem, e, samples: int = 10_000, rng=None, restarts: int = 24,
                 steps: int = 20, tol: float = 1e-9, found_threshold: float = 1e-3) -> CPReport:
    """Contractive perturbations of ``e`` against the unit ball of ``E0(e)``.

    (a) sampled ``y`` in the ``E0`` ball satisfy ``||e +- y|| <= 1``;
    (b) an ascent over directions ``d`` with the largest ``t`` such that
    ``||e +- t d|| <= 1`` maximizes ``||P2 x|| + ||P1 x||`` and ``||x||``.
    A perturbation counts as found when ``||x|| > found_threshold``.
    """
    e = _elem(e)
    rng = np.random.default_rng(41) if rng is None else rng
    pd = peirce_data(s, e)
    y = _ball_samples(rng, pd.E0.basis, s, samples)
    incl = max(float(np.max(s.norm_batch(e + y))), float(np.max(s.norm_batch(e - y)))) - 1.0
    bound = max(1.0, s.norm(e)) + _SLACK
    p1, p2 = pd.projectors[1], pd.projectors[2]

    def scales(d):
        return max_scale(s.norm_batch, e, d, bound, symmetric=True)

    def obj_peirce(d):
        t = scales(d)
        return t * (s.norm_batch(d @ p2.T) + s.norm_batch(d @ p1.T))

    def obj_size(d):
        return scales(d) * s.norm_batch(d)

    seeds = _seed_directions(rng, pd, restarts)
    a_max, _ = hill_climb(obj_peirce, s.dim, rng, steps=steps, starts=seeds)
    p_max, _ = hill_climb(obj_size, s.dim, rng, steps=steps, starts=seeds)
    return CPReport(is_complete(s, e), incl, samples, a_max, p_max,
                    p_max > found_threshold, tol)


def _seed_directions(rng, pd: PeirceData, count: int) -> np.ndarray:
    """Half generic unit directions, half random directions inside a single Peirce space.

    Directions off ``E0`` admit only ``t ~ 1e-7``, so the ascent alone cannot
    reach the measure-zero set of ``E0`` directions.
    """
    n = pd.E2.ambient_dim
    parts = [sp.basis for sp in (pd.E0, pd.E1, pd.E2) if sp.dim]
    out = []
    for i in range(count):
        if i % 2 == 0 or not parts:
            v = rng.standard_normal(n)
        else:
            b = parts[(i // 2) % len(parts)]
            v = b @ rng.standard_normal(b.shape[1])
        out.append(v / np.linalg.norm(v))
    return np.array(out)


@dataclass
class UnitPeirce2Report:
    ascent_max: float  # max ||P1 x|| over x with ||x|| <= 1 and P2 x = e
    converse_defect: float  # max | ||e + x0|| - 1 | over x0 in the E0 ball
    samples: int

    def passed(self, ascent_tol: float = 1e-6, tol: float = 1e-9) -> bool:
        return self.ascent_max <= ascent_tol and self.converse_defect <= tol


def unit_peirce2_check(s: TripleSystem, e, samples: int = 2_000, rng=None, restarts: int = 24,
                  steps: int = 20) -> UnitPeirce2Report:
    """Norm-one ``x`` with ``P2(e) x = e`` has no Peirce-1 part."""
    e = _elem(e)
    rng = np.random.default_rng(43) if rng is None else rng
    pd = peirce_data(s, e)
    rest = (pd.E1 + pd.E0).basis
    bound = max(1.0, s.norm(e)) + _SLACK
    asc = 0.0
    if rest.shape[1]:
        p1 = pd.projectors[1]

        def obj(c):
            d = c @ rest.T
            t = max_scale(s.norm_batch, e, d, bound, symmetric=False)
            return t * s.norm_batch(d @ p1.T)

        asc, _ = hill_climb(obj, rest.shape[1], rng, restarts=restarts, steps=steps)
    y = _ball_samples(rng, pd.E0.basis, s, samples)
    conv = float(np.max(np.abs(s.norm_batch(e + y) - 1.0)))
    return UnitPeirce2Report(asc, conv, samples)


def lek_antisymmetry(s: TripleSystem, e, samples: int = 200, rng=None) -> tuple[float, int]:
    """``max ||L(e,k) + L(k,e)||`` over sampled ``k`` in ``E^{-1}(e)``; returns (residual, count)."""
    e = _elem(e)
    rng = np.random.default_rng(47) if rng is None else rng
    b = peirce_data(s, e).E_minus.basis
    if b.shape[1] == 0:
        return 0.0, 0
    ks = unit_sphere(rng, samples, b.shape[1]) @ b.T
    worst = 0.0
    for k in ks:
        worst = max(worst, float(np.max(np.abs(s.l_operator(e, k) + s.l_operator(k, e)))))
    return worst, samples
