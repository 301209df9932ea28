"""Functionals, dual norms and the faces ``{u}'`` of the dual ball.

A functional is a coordinate vector paired with elements by the dot
product.  On matrix models this pairing is the real trace form, so the dual
norm is the nuclear norm; on l-infinity sums it is the sum of the dual norms
of the parts.  Elsewhere a multi-start ascent gives a lower bound.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .linalg import Subspace, unit_sphere
from .search import hill_climb, max_scale
from .triple import LinfSumOracle, SpectralOracle, TripleSystem
from . import tripotents as tp

EXACT_NUCLEAR = "exact_nuclear"
EXACT_L1 = "exact_l1_of_duals"
ASCENT = "ascent_bound"


class UnsupportedModel(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Functional:
    coords: np.ndarray = field(repr=False)
    dual_norm: float
    method: str

    def __call__(self, x) -> float:
        return float(self.coords @ np.asarray(x, dtype=float))


def _method(s: TripleSystem) -> str:
    if isinstance(s.oracle, SpectralOracle):
        return EXACT_NUCLEAR
    if isinstance(s.oracle, LinfSumOracle) and all(
            _method(p) != ASCENT for _, p in s.oracle.parts):
        return EXACT_L1
    return ASCENT


def has_exact_dual(s: TripleSystem) -> bool:
    return _method(s) != ASCENT


def dual_norm_batch(s: TripleSystem, phis, rng=None, restarts: int = 32, steps: int = 40) -> np.ndarray:
    phis = np.atleast_2d(np.asarray(phis, dtype=float))
    exact = s.oracle.dual_norm_batch(phis) if hasattr(s.oracle, "dual_norm_batch") else None
    if exact is not None:
        return np.asarray(exact, dtype=float)
    rng = np.random.default_rng(97) if rng is None else rng
    return np.array([_ascent_dual(s, phi, rng, restarts, steps)[0] for phi in phis])


def _ascent_dual(s: TripleSystem, phi, rng, restarts: int, steps: int):
    if not np.any(phi):
        return 0.0, 0.0

    def obj(x):
        return np.abs(x @ phi) / s.norm_batch(x)

    starts = np.vstack([phi / np.linalg.norm(phi), unit_sphere(rng, restarts - 1, s.dim)])
    best, _ = hill_climb(obj, s.dim, rng, steps=steps, starts=starts)
    return best, ASCENT


def dual_norm(s: TripleSystem, phi, rng=None) -> tuple[float, str]:
    """``(value, method)``; ascent values are lower bounds."""
    phi = np.asarray(phi, dtype=float)
    return float(dual_norm_batch(s, phi[None, :], rng)[0]), _method(s)


def functional(s: TripleSystem, coords, rng=None) -> Functional:
    val, how = dual_norm(s, coords, rng)
    return Functional(np.asarray(coords, dtype=float), val, how)


def norming_element(s: TripleSystem, phi) -> np.ndarray:
    """A unit element ``x`` with ``phi(x) = ||phi||`` on matrix models (polar part of ``phi``)."""
    if not isinstance(s.oracle, SpectralOracle):
        raise UnsupportedModel("norming elements are computed for spectral models only")
    a = s.oracle.matrices(np.asarray(phi, dtype=float))
    u, _, vt = np.linalg.svd(a, full_matrices=False)
    return s.oracle.decode(u @ vt)


# ---------------------------------------------------------------------------
# faces


def face_membership(s: TripleSystem, phi, u, tol: float = 1e-9) -> bool:
    """``phi in {u}'``: ``phi(u) = 1 = ||phi||``."""
    phi = phi.coords if isinstance(phi, Functional) else np.asarray(phi, dtype=float)
    u = u.element if isinstance(u, tp.Tripotent) else np.asarray(u, dtype=float)
    if not np.any(u):
        return False
    nrm, _ = dual_norm(s, phi)
    return abs(phi @ u - 1.0) <= tol and abs(nrm - 1.0) <= tol


@dataclass
class FaceCertificate:
    tripotent: np.ndarray = field(repr=False)
    members: np.ndarray = field(repr=False)  # rows are functional coordinates
    discarded: int
    max_defect: float


def sample_face(s: TripleSystem, u, count: int, rng=None, tol: float = 1e-9) -> FaceCertificate:
    """Members of ``{u}'`` of the form ``a / <a, u>`` with ``a = sum {h,u,h} + eps u``,
    ``h`` in ``E^{+1}(u)``; each candidate is certified by ``face_membership``."""
    u = u.element if isinstance(u, tp.Tripotent) else np.asarray(u, dtype=float)
    rng = np.random.default_rng(101) if rng is None else rng
    if not np.any(u):
        return FaceCertificate(u, np.zeros((0, s.dim)), 0, 0.0)
    hb = tp.peirce_data(s, u).E_plus.basis
    cands = []
    for _ in range(count):
        a = rng.uniform(0.05, 1.0) * u
        for _ in range(int(rng.integers(1, 3))):
            h = hb @ rng.standard_normal(hb.shape[1])
            a = a + s.product(h, u, h)
        cands.append(a / (a @ u))
    cands = np.array(cands)
    nrm = dual_norm_batch(s, cands)
    defect = np.maximum(np.abs(cands @ u - 1.0), np.abs(nrm - 1.0))
    ok = defect <= tol
    return FaceCertificate(u, cands[ok], int(np.sum(~ok)), float(np.max(defect[ok], initial=0.0)))


# ---------------------------------------------------------------------------
# support tripotents


def _spectral_support(oracle: SpectralOracle, phi, rank_tol: float) -> np.ndarray:
    a = oracle.matrices(phi)
    u, sv, vt = np.linalg.svd(a, full_matrices=False)
    if sv.size == 0 or sv[0] == 0:
        return np.zeros_like(phi)
    r = int(np.sum(sv > rank_tol * sv[0]))
    return oracle.decode(u[:, :r] @ vt[:r])


@dataclass
class SupportCheck:
    tripotent: tp.Tripotent
    p2_defect: float  # ||phi - phi P2(s)||
    value_defect: float  # |phi(s) - ||phi|||
    min_positivity: float  # smallest eigenvalue of a -> phi({a,s,a}) on E^{+1}(s), normalized

    def passed(self, tol: float = 1e-8) -> bool:
        return self.p2_defect <= tol and self.value_defect <= tol and self.min_positivity > tol


def support_tripotent(s: TripleSystem, phi, rank_tol: float = 1e-9) -> tp.Tripotent:
    """``s(phi)``: the polar part ``U_r V_r^T`` of ``phi``'s matrix, per summand on l-inf sums."""
    phi = phi.coords if isinstance(phi, Functional) else np.asarray(phi, dtype=float)
    if not np.any(phi):
        raise ValueError("the zero functional has no support tripotent")
    if isinstance(s.oracle, SpectralOracle):
        e = _spectral_support(s.oracle, phi, rank_tol)
    elif isinstance(s.oracle, LinfSumOracle) and all(
            isinstance(p.oracle, SpectralOracle) for _, p in s.oracle.parts):
        e = np.zeros(s.dim)
        for idx, part in s.oracle.parts:
            if np.any(phi[idx]):
                e[idx] = _spectral_support(part.oracle, phi[idx], rank_tol)
    else:
        raise UnsupportedModel("support tripotents are computed for matrix models and their sums")
    return tp.certify(s, e, 1e-8)


def check_support(s: TripleSystem, phi, tol: float = 1e-8) -> SupportCheck:
    phi = phi.coords if isinstance(phi, Functional) else np.asarray(phi, dtype=float)
    t = support_tripotent(s, phi)
    e = t.element
    pd = tp.peirce_data(s, e)
    p2d = float(np.linalg.norm(phi - pd.projectors[2].T @ phi))
    nrm, _ = dual_norm(s, phi)
    hb = pd.E_plus.basis
    g = np.einsum("xyzm,xi,y,zj,m->ij", s.tensor, hb, e, hb, phi, optimize=True)
    pos = float(np.min(np.linalg.eigvalsh(0.5 * (g + g.T)))) / max(nrm, 1e-300)
    return SupportCheck(t, p2d, abs(phi @ e - nrm), pos)


# ---------------------------------------------------------------------------
# L-orthogonality


def l_orthogonal(s: TripleSystem, phi, psi, tol: float = 1e-9) -> bool:
    phi, psi = (f.coords if isinstance(f, Functional) else np.asarray(f, dtype=float) for f in (phi, psi))
    a, b, c, d = dual_norm_batch(s, np.array([phi, psi, phi + psi, phi - psi]))
    scale = max(1.0, a + b)
    return abs(c - a - b) <= tol * scale and abs(d - a - b) <= tol * scale


def _field_unitary(p: int, field_tag: str, rng) -> np.ndarray:
    from .models import matrix_basis
    enc = matrix_basis(p, p, field_tag)
    a = np.tensordot(rng.standard_normal(enc.shape[0]), enc, axes=(0, 0))
    u, _, vt = np.linalg.svd(a)
    return u @ vt


def _diag_embed(diag, p: int, q: int, block: int) -> np.ndarray:
    m = np.zeros((p * block, q * block))
    for k, d in enumerate(diag):
        m[k * block:(k + 1) * block, k * block:(k + 1) * block] = d * np.eye(block)
    return m


@dataclass
class SupportLemmaReport:
    pairs: int
    agree: int
    orthogonal_pairs: int
    disagreements: list  # (index, l_orthogonal, supports_orthogonal)
    support_checks_failed: int

    @property
    def passed(self) -> bool:
        return self.agree == self.pairs and self.support_checks_failed == 0


def random_functional_pair(s: TripleSystem, rng, orthogonal: bool):
    """Two functionals on a matrix model with disjoint (orthogonal) or overlapping supports.

    Both are ``U diag(d) V^T`` for random unitaries ``U``, ``V`` over the field;
    orthogonal pairs use disjoint diagonal slots.
    """
    o = s.oracle
    if not isinstance(o, SpectralOracle):
        raise UnsupportedModel("functional pairs are generated on matrix models")
    k = min(o.p, o.q)
    ul = _field_unitary(o.p, o.field_tag, rng)
    ur = _field_unitary(o.q, o.field_tag, rng)
    slots = rng.permutation(k)
    if orthogonal and k >= 2:
        cut = int(rng.integers(1, k))
        s1, s2 = slots[:cut], slots[cut:]
    else:
        s1 = slots[: int(rng.integers(1, k + 1))]
        s2 = np.concatenate([s1[:1], slots[len(s1):][: int(rng.integers(0, k - len(s1) + 1))]])
        if not orthogonal and k >= 2 and rng.random() < 0.5:
            ur = _field_unitary(o.q, o.field_tag, rng)  # generic position
            s2 = slots[: int(rng.integers(1, k + 1))]

    def make(slot_set, right):
        d = np.zeros(k)
        d[slot_set] = rng.uniform(0.1, 1.0, size=len(slot_set)) * rng.choice([-1.0, 1.0], len(slot_set))
        return o.decode(ul @ _diag_embed(d, o.p, o.q, o.block) @ right.T)

    return make(s1, ur), make(s2, ur if orthogonal else _field_unitary(o.q, o.field_tag, rng)
                              if rng.random() < 0.3 else ur)


def verify_support_lemma(s: TripleSystem, batch: int = 200, rng=None, tol: float = 1e-9) -> SupportLemmaReport:
    """L-orthogonality of functionals against orthogonality of their support tripotents."""
    rng = np.random.default_rng(103) if rng is None else rng
    agree = n_orth = failed = 0
    dis = []
    for i in range(batch):
        want = i % 2 == 0 and min(s.oracle.p, s.oracle.q) >= 2
        phi, psi = random_functional_pair(s, rng, want)
        lo = l_orthogonal(s, phi, psi, tol)
        sp, sq = support_tripotent(s, phi), support_tripotent(s, psi)
        so = tp.are_orthogonal(s, sp, sq, 1e-8) and tp.are_orthogonal(s, sq, sp, 1e-8)
        failed += not (check_support(s, phi).passed() and check_support(s, psi).passed())
        n_orth += so
        if lo == so:
            agree += 1
        else:
            dis.append((i, lo, so))
    return SupportLemmaReport(batch, agree, n_orth, dis, failed)


# ---------------------------------------------------------------------------
# face lemmas

# the bound already includes ||v||, so t = 0 stays feasible without slack
_SLACK = 0.0


@dataclass
class FaceLemmaReport:
    orthogonal: bool
    pairs: int
    l_orthogonal_pairs: int
    witness: tuple | None = field(repr=False)  # non-L-orthogonal (phi, psi) when found
    ascent_max: float  # max ||x - v - P0(v) x|| with ||x|| <= 1 and P^1(v) x = v

    def passed(self, ascent_tol: float = 1e-6) -> bool:
        face_ok = (self.l_orthogonal_pairs == self.pairs) if self.orthogonal else self.witness is not None
        return face_ok and self.ascent_max <= ascent_tol


def face_remainder_ascent(s: TripleSystem, v, rng=None, restarts: int = 24, steps: int = 20) -> float:
    """Max of ``||x - v - P0(v)x||`` over ``x = v + t d``, ``d`` in ``ker P^{+1}(v)``, ``||x|| <= 1``."""
    v = v.element if isinstance(v, tp.Tripotent) else np.asarray(v, dtype=float)
    rng = np.random.default_rng(107) if rng is None else rng
    pd = tp.peirce_data(s, v)
    rest = Subspace.range_of(np.eye(s.dim) - pd.projectors["+1"]).basis
    if rest.shape[1] == 0:
        return 0.0
    p0 = pd.projectors[0]
    bound = max(1.0, s.norm(v)) + _SLACK

    def obj(c):
        d = c @ rest.T
        t = max_scale(s.norm_batch, v, d, bound, symmetric=False)
        return t * s.norm_batch(d - d @ p0.T)

    best, _ = hill_climb(obj, rest.shape[1], rng, restarts=restarts, steps=steps)
    return best


def verify_face_lemmas(s: TripleSystem, v, w, batch: int = 50, rng=None, tol: float = 1e-9) -> FaceLemmaReport:
    """Orthogonal tripotents have L-orthogonal faces (and conversely, by witness search);
    the constrained ascent for ``v`` stays at rounding level."""
    rng = np.random.default_rng(109) if rng is None else rng
    v = v.element if isinstance(v, tp.Tripotent) else np.asarray(v, dtype=float)
    w = w.element if isinstance(w, tp.Tripotent) else np.asarray(w, dtype=float)
    orth = tp.are_orthogonal(s, v, w, 1e-8)
    fv = sample_face(s, v, batch, rng).members
    fw = sample_face(s, w, batch, rng).members
    npairs = min(len(fv), len(fw))
    lo = 0
    witness = None
    for a, b in zip(fv[:npairs], fw[:npairs]):
        if l_orthogonal(s, a, b, tol):
            lo += 1
        elif witness is None:
            witness = (a, b)
    return FaceLemmaReport(orth, npairs, lo, witness, face_remainder_ascent(s, v, rng))


# ---------------------------------------------------------------------------
# face decomposition along an M-projection


@dataclass
class FaceDecompositionReport:
    members: int
    additivity: float  # max | ||psi|| - ||psi P|| - ||psi (Id-P)|| |
    reconstruction: float  # max ||lam phi_v + (1-lam) phi_w - psi||
    membership: float  # max face-membership defect of the normalized parts
    v_face_kills_N: float  # max |phi((Id-P) x)| over phi in {v}'
    w_face_kills_M: float
    faces_l_orthogonal: bool
    lambdas: list = field(repr=False)

    def passed(self, tol: float = 1e-7) -> bool:
        return (max(self.additivity, self.reconstruction, self.membership,
                    self.v_face_kills_N, self.w_face_kills_M) <= tol and self.faces_l_orthogonal)


def _face_defect(s: TripleSystem, phis: np.ndarray, u: np.ndarray) -> np.ndarray:
    if phis.size == 0:
        return np.zeros(0)
    return np.maximum(np.abs(phis @ u - 1.0), np.abs(dual_norm_batch(s, phis) - 1.0))


def verify_prop_face_decomposition(s: TripleSystem, p, e, batch: int = 50, rng=None,
                                   tol: float = 1e-7) -> FaceDecompositionReport:
    """Every ``psi`` in ``{e}'`` splits as ``lam phi_v + (1-lam) phi_w`` with ``phi_v = psi P / lam``
    in ``{v}'`` (annihilating ``N``) and ``phi_w = psi (Id-P) / (1-lam)`` in ``{w}'``."""
    if not has_exact_dual(s):
        raise UnsupportedModel("face decomposition needs exact dual norms")
    rng = np.random.default_rng(113) if rng is None else rng
    p = np.asarray(p, dtype=float)
    e = e.element if isinstance(e, tp.Tripotent) else np.asarray(e, dtype=float)
    eye = np.eye(s.dim)
    v, w = p @ e, e - p @ e
    psi = sample_face(s, e, batch, rng).members
    fv = sample_face(s, v, batch, rng).members if np.any(v) else np.zeros((0, s.dim))
    fw = sample_face(s, w, batch, rng).members if np.any(w) else np.zeros((0, s.dim))
    # mixtures of the two faces must land in {e}' too
    k = min(len(fv), len(fw))
    mix = 0.5 * (fv[:k] + fw[:k])
    psi = np.vstack([psi, mix]) if k else psi
    a = psi @ p  # psi o P, annihilates N
    b = psi @ (eye - p)  # psi o (Id-P), annihilates M
    na, nb, npsi = dual_norm_batch(s, a), dual_norm_batch(s, b), dual_norm_batch(s, psi)
    add = float(np.max(np.abs(npsi - na - nb), initial=0.0))
    lam = na
    rec = memb = 0.0
    for i in range(len(psi)):
        parts = np.zeros(s.dim)
        if lam[i] > tol:
            phi_v = a[i] / lam[i]
            memb = max(memb, float(_face_defect(s, phi_v[None], v)[0]))
            parts = parts + lam[i] * phi_v
        if 1 - lam[i] > tol:
            phi_w = b[i] / (1 - lam[i])
            memb = max(memb, float(_face_defect(s, phi_w[None], w)[0]))
            parts = parts + (1 - lam[i]) * phi_w
        rec = max(rec, float(np.linalg.norm(parts - psi[i])))
    memb = max(memb, float(np.max(_face_defect(s, mix, e), initial=0.0)))
    kill_n = float(np.max(np.abs(fv @ (eye - p)), initial=0.0))
    kill_m = float(np.max(np.abs(fw @ p), initial=0.0))
    lo = all(l_orthogonal(s, x, y, 1e-9) for x, y in zip(fv[:k], fw[:k]))
    return FaceDecompositionReport(len(psi), add, rec, memb, kill_n, kill_m, lo, lam.tolist())


# ---------------------------------------------------------------------------
# L-projections and face order


def l_projection_defect(s: TripleSystem, p, samples: int = 200, rng=None) -> float:
    """``max | ||phi|| - ||phi P|| - ||phi (Id-P)|| |`` for random functionals."""
    rng = np.random.default_rng(127) if rng is None else rng
    p = np.asarray(p, dtype=float)
    phis = unit_sphere(rng, samples, s.dim)
    return float(np.max(np.abs(dual_norm_batch(s, phis) - dual_norm_batch(s, phis @ p)
                               - dual_norm_batch(s, phis @ (np.eye(s.dim) - p)))))


def l_projections_commute(projections) -> float:
    """Largest commutator among the transposes (the induced L-projections)."""
    worst = 0.0
    for a in projections:
        for b in projections:
            worst = max(worst, float(np.max(np.abs(a.T @ b.T - b.T @ a.T))))
    return worst


def face_order_check(s: TripleSystem, u, v, batch: int = 50, rng=None, tol: float = 1e-8):
    """``(u <= v, fraction of sampled {u}' members lying in {v}')``."""
    rng = np.random.default_rng(131) if rng is None else rng
    u = u.element if isinstance(u, tp.Tripotent) else np.asarray(u, dtype=float)
    v = v.element if isinstance(v, tp.Tripotent) else np.asarray(v, dtype=float)
    members = sample_face(s, u, batch, rng).members
    inside = _face_defect(s, members, v) <= tol
    return tp.leq(s, u, v, 1e-8), float(np.mean(inside)) if len(inside) else 1.0
