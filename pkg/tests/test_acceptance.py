"""Acceptance criteria, one test per criterion, each printing a PASS/FAIL line."""

import subprocess
import sys
import time
from functools import lru_cache

import numpy as np

from jbtriple import dual as D
from jbtriple import ideals as I
from jbtriple import tripotents as tp
from jbtriple.cli import hand_seeded
from jbtriple.linalg import unit_sphere
from jbtriple.models import REGISTERED_JB_MODELS, REGISTERED_MODELS, resolve
from jbtriple.triple import verify_axioms

from conftest import system

RESULTS: list[str] = []
MATRIX_MODELS = [m for m in REGISTERED_MODELS if m.startswith("mat:")]
AXIOM_MODELS = MATRIX_MODELS + ["spin:3", "spin:5", "sum:mat:R:2:2+mat:R:1:1", "sum:mat:C:1:2+spin:3"]


def record(n: int, ok: bool, detail: str):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {n}: {detail}"
    RESULTS.append(line)
    print(line, flush=True)
    assert ok, line


@lru_cache(maxsize=None)
def found(spec: str, starts: int = 200):
    s = system(spec)
    return tuple(t.element for t in tp.search_tripotents(s, starts, rng=np.random.default_rng(17)).tripotents)


@lru_cache(maxsize=None)
def lattice(spec: str):
    return I.minimal_ideal_decomposition(system(spec))


@lru_cache(maxsize=None)
def complete_tripotents(spec: str):
    """Every complete tripotent of the search, plus completions of a few partial ones."""
    s = system(spec)
    rng = np.random.default_rng(19)
    comp = [e for e in found(spec) if tp.is_complete(s, e)]
    part = [e for e in found(spec) if not tp.is_complete(s, e)][:6]
    return tuple(comp + [tp.extend_to_complete(s, e, rng).element for e in part])


def test_criterion_1_axioms():
    t0 = time.time()
    worst = {}
    for spec in AXIOM_MODELS:
        r = verify_axioms(system(spec), 1e-8, samples=10_000, rng=np.random.default_rng(1))
        worst[spec] = max(r.jordan, r.outer_symmetry, r.gelfand_naimark, r.norm_inequality)
    dt = time.time() - t0
    top = max(worst.values())
    record(1, top <= 1e-8 and dt <= 120,
           f"{len(worst)} models x 10,000 tuples, max residual {top:.2e} (<= 1e-8), {dt:.1f} s (<= 120 s)")


def test_criterion_2_peirce():
    worst = {"sum": 0.0, "contract": 0.0, "rules": 0.0, "formula": 0.0}
    min_count = np.inf
    rng = np.random.default_rng(2)
    for spec in REGISTERED_MODELS:
        s = system(spec)
        seeds = hand_seeded(s)[:3]
        trips = seeds + [e for e in found(spec) if not any(np.allclose(e, x) for x in seeds)][:5]
        min_count = min(min_count, len(trips))
        for e in trips:
            p0, p1, p2 = tp.peirce_projections(s, e)
            worst["sum"] = max(worst["sum"], float(np.max(np.abs(p0 + p1 + p2 - np.eye(s.dim)))))
            worst["contract"] = max(worst["contract"], tp.contractivity_defect(s, e, 10_000, rng))
            worst["rules"] = max(worst["rules"], tp.check_peirce_rules(s, e).max_residual)
            worst["formula"] = max(worst["formula"], max(tp.formula_vs_eigen(s, e).values()))
    ok = (min_count >= 5 and worst["sum"] <= 1e-12 and worst["contract"] <= 1e-9
          and worst["rules"] <= 1e-8 and worst["formula"] <= 1e-8)
    record(2, ok, f">= {min_count} tripotents/model; sum {worst['sum']:.1e}, contractivity excess "
                  f"{worst['contract']:.1e}, rules {worst['rules']:.1e}, formula-vs-eigen {worst['formula']:.1e}")


def test_criterion_3_main_theorem():
    t0 = time.time()
    expected = {"sum:mat:R:2:2+mat:R:1:1": 4, "sum:mat:R:2:2+mat:R:2:2+mat:R:1:1": 8,
                "mat:R:3:3": 2, "spin:3": 2}
    notes, ok = [], True
    for spec, size in expected.items():
        s = system(spec)
        rep = I.verify_main_theorem(s, n_random=50, samples=10_000, rng=np.random.default_rng(3),
                                    lattice=lattice(spec))
        verified = sum(v.verdict == I.VERIFIED for _, v in rep.ideal_verdicts)
        falsified = [v for v in rep.random_verdicts if v.verdict == I.FALSIFIED and v.gap > 1e-3]
        good = (len(rep.lattice) == size and verified == size and len(falsified) == 50 and rep.passed)
        ok &= good
        notes.append(f"{spec}: {len(rep.lattice)} ideals/{verified} verified_M, "
                     f"{len(falsified)}/50 falsified (min gap {min(v.gap for v in rep.random_verdicts):.2f})")
    dt = time.time() - t0
    record(3, ok and dt <= 300, "; ".join(notes) + f"; {dt:.1f} s (<= 300 s)")


def test_criterion_4_facial():
    pairs, worst, failures = 0, 0.0, []
    for spec in REGISTERED_MODELS:
        s = system(spec)
        lat = lattice(spec)
        for mask in lat.masks:
            p = lat.projector(mask)
            if I.is_M_projection(s, p, 2000, rng=np.random.default_rng(4)).verdict != I.VERIFIED:
                failures.append((spec, mask, "not verified"))
                continue
            for e in complete_tripotents(spec):
                rep = I.verify_facial_decomposition(s, p, e)
                pairs += 1
                worst = max(worst, max(c[1] for c in rep.checks))
                if not rep.passed:
                    failures.append((spec, mask, [c[0] for c in rep.checks if not c[3]]))
    record(4, not failures and pairs >= 10,
           f"{pairs} (P, e) pairs, max residual {worst:.1e} (<= 1e-7), failures {failures[:3]}")


def test_criterion_5_jb():
    notes, ok = [], True
    for spec in REGISTERED_JB_MODELS:
        rep = I.verify_jb_theorem(resolve(spec), skew_samples=100, rng=np.random.default_rng(5))
        ok &= rep.passed
        notes.append(f"{spec}: {len(rep.theorem.lattice)} ideals = {len(rep.per_projection)} M-summands")
    record(5, ok, "; ".join(notes))


def test_criterion_6_derivations():
    inv = iso = 0.0
    for spec in REGISTERED_MODELS:
        s = system(spec)
        rng = np.random.default_rng(6)
        ideals_ = lattice(spec).all_ideals
        inv = max(inv, I.derivation_invariance(s, ideals_, 100, rng))
        for a, b in zip(unit_sphere(rng, 100, s.dim), unit_sphere(rng, 100, s.dim)):
            rep = I.exp_isometry_check(s, I.triple_derivation(s, a, b), samples=1000, rng=rng)
            iso = max(iso, rep.isometry_gap)
    record(6, inv <= 1e-8 and iso <= 1e-7,
           f"ideal invariance {inv:.1e} (<= 1e-8), exp isometry gap {iso:.1e} (<= 1e-7) over "
           f"{len(REGISTERED_MODELS)} models x 100 derivations")


def test_criterion_7_dual():
    agree = []
    for spec in MATRIX_MODELS:
        rep = D.verify_support_lemma(system(spec), 200, np.random.default_rng(7))
        agree.append(rep.agree / rep.pairs)
    ascent, recon, bad = 0.0, 0.0, []
    for spec in REGISTERED_MODELS:
        s = system(spec)
        if not D.has_exact_dual(s):
            continue
        rng = np.random.default_rng(71)
        trips = list(found(spec)[:4]) + list(complete_tripotents(spec)[:2])
        for v in trips:
            for w in trips:
                if np.allclose(v, w) or tp.are_orthogonal(s, v, w, 1e-8):
                    rep = D.verify_face_lemmas(s, v, w, 20, rng)
                    ascent = max(ascent, rep.ascent_max)
                    if not rep.passed():
                        bad.append((spec, "face lemma"))
        lat = lattice(spec)
        for mask in lat.masks:
            for e in complete_tripotents(spec)[:3]:
                rep = D.verify_prop_face_decomposition(s, lat.projector(mask), e, 30, rng)
                recon = max(recon, rep.reconstruction, rep.additivity, rep.membership)
                if not rep.passed():
                    bad.append((spec, mask))
    ok = min(agree) == 1.0 and ascent <= 1e-6 and recon <= 1e-7 and not bad
    record(7, ok, f"support agreement {min(agree):.0%} over {len(agree)} models x 200 pairs; "
                  f"face-lemma ascent max {ascent:.1e} (<= 1e-6); decomposition residual {recon:.1e} "
                  f"(<= 1e-7); failures {bad[:3]}")


def test_criterion_8_cp():
    n, agree, incl, ascent = 0, 0, 0.0, 0.0
    for spec in REGISTERED_MODELS:
        s = system(spec)
        rng = np.random.default_rng(8)
        trips = list(hand_seeded(s)[:4])
        trips += [t.element for t in tp.search_tripotents(s, 40, rng=rng, structured=False).tripotents]
        for e in trips:
            rep = tp.cp_set_check(s, e, 10_000, rng)
            n += 1
            agree += rep.consistent
            incl = max(incl, rep.inclusion_defect)
            ascent = max(ascent, rep.ascent_max)
    record(8, agree == n and incl <= 1e-9,
           f"{agree}/{n} tripotents: completeness matches the perturbation search; "
           f"E0-ball inclusion excess {incl:.1e} on 10,000 samples each; Peirce ascent max {ascent:.1e}")


def test_criterion_9_determinism(tmp_path):
    outs = [tmp_path / f"r{i}.json" for i in range(2)]
    procs = [subprocess.Popen([sys.executable, "-m", "jbtriple.cli", "report-all", "--seed", "0",
                               "--out", str(o)]) for o in outs]
    codes = [p.wait() for p in procs]
    same = outs[0].read_bytes() == outs[1].read_bytes()
    record(9, same and codes == [0, 0],
           f"two report-all runs (seed 0): exit codes {codes}, byte-identical JSON: {same}")

