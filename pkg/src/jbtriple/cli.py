"""Command-line front end: ``jbtriple <command> --model SPEC [options]``.

Exit status: 0 when every check passes (or a search completes), 1 when a check
contradicts a theorem numerically, 2 on usage or I/O errors.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import zlib
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from . import dual, ideals, tripotents as tp
from .linalg import DEFAULT_TOL, Subspace, Tolerances, unit_sphere
from .models import (REGISTERED_JB_MODELS, REGISTERED_MODELS, JBAlgebraModel, ModelSpecError,
                     as_system, resolve)
from .schema import SCHEMA_VERSION, validate_document
from .triple import TripleSystem, verify_axioms

COMMANDS = ("axioms", "tripotents", "peirce", "ideals", "verify-theorem", "verify-jb", "faces", "report-all")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    model_spec: str | None = None
    tolerances: Tolerances = DEFAULT_TOL
    output: Path | None = None
    format: str = "json"
    tol_override: float | None = None
    starts: int = 200
    batch: int = 200
    max_tripotents: int = 6
    element: Path | None = None
    extra: dict = field(default_factory=dict)


# ---------------------------------------------------------------------------
# check records


def _num(x):
    if x is None:
        return None
    x = float(x)
    if not math.isfinite(x):
        return None
    return float(f"{x:.6g}")


def _clean(obj):
    """Round every float inside nested containers so reports are byte-stable."""
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return _num(obj)
    return obj


def _rec(name: str, ref: str, passed: bool, residual=None, tol=None) -> dict:
    return {"name": name, "ref": ref, "passed": bool(passed), "residual": _num(residual), "tol": _num(tol)}


def _from_tuples(prefix: str, ref: str, checks) -> list[dict]:
    return [_rec(f"{prefix}{n}", ref, ok, r, t) for n, r, t, ok in checks]


def _stream(cfg: RunConfig, model: str, command: str) -> np.random.Generator:
    return cfg.tolerances.rng(zlib.crc32(model.encode()), zlib.crc32(command.encode()))


# ---------------------------------------------------------------------------
# tripotent selection


def hand_seeded(s: TripleSystem, tol: float = 1e-10) -> list[np.ndarray]:
    """Basis vectors and sums or differences of two basis vectors that are already tripotents."""
    out = []
    for x in tp.structured_starts(s.dim):
        if np.any(x < 0) and np.sum(x) <= 0:
            continue  # keep one of each sign pair
        if tp.tripotent_residual(s, x) <= tol:
            out.append(x)
    return out


def _dedup(xs) -> list[np.ndarray]:
    out = []
    for x in xs:
        if not any(np.linalg.norm(x - y) <= 1e-6 for y in out):
            out.append(x)
    return out


def _completions(s: TripleSystem, partial, rng, want: int) -> list[np.ndarray]:
    return [tp.extend_to_complete(s, x, rng).element for x in partial[:want]]


def select_tripotents(s: TripleSystem, cfg: RunConfig, rng) -> list[np.ndarray]:
    """Hand-seeded tripotents plus Newton finds, half complete and half not where possible.

    Complete ones missing from the search are obtained by extending partial ones.
    """
    if cfg.element is not None:
        return [load_element(cfg.element, s.dim)]
    seeds = hand_seeded(s)
    found = [t.element for t in tp.search_tripotents(s, cfg.starts, cfg.tolerances, rng).tripotents]
    pool = _dedup(seeds[:2] + found + seeds[2:])
    part = [x for x in pool if not tp.is_complete(s, x)]
    k = cfg.max_tripotents
    comp = _dedup([x for x in pool if tp.is_complete(s, x)] + _completions(s, part, rng, k))
    pick = comp[: max(k - len(part[: k // 2]), k // 2)]
    return pick + part[: k - len(pick)]


def load_element(path: Path, dim: int) -> np.ndarray:
    try:
        doc = json.loads(Path(path).read_text())
        validate_document(doc, "element")
    except (OSError, ValueError) as exc:
        raise UsageError(f"cannot read element file {path}: {exc}") from exc
    x = np.asarray(doc["coords"], dtype=float)
    if x.shape != (dim,):
        raise UsageError(f"element has {x.size} coordinates, model dimension is {dim}")
    return x


# ---------------------------------------------------------------------------
# commands


def cmd_axioms(s: TripleSystem, cfg: RunConfig, rng) -> list[dict]:
    tol = cfg.tol_override or 1e-8
    r = verify_axioms(s, tol, cfg.tolerances.sample_count, rng)
    ref = "axioms of a JB*-triple"
    return [
        _rec("jordan_identity", ref, r.jordan <= tol, r.jordan, tol),
        _rec("outer_symmetry", ref, r.outer_symmetry <= tol, r.outer_symmetry, tol),
        _rec("gelfand_naimark", ref, r.gelfand_naimark <= tol, r.gelfand_naimark, tol),
        _rec("norm_inequality", ref, r.norm_inequality <= tol, r.norm_inequality, tol),
        _rec("L_aa_hermitian", ref, r.hermitian_asymmetry <= tol, r.hermitian_asymmetry, tol),
        _rec("L_aa_nonnegative", ref, r.min_spectrum >= -tol, max(0.0, -r.min_spectrum), tol),
        _rec("nondegenerate", ref, not r.degenerate),
    ]


def cmd_tripotents(s: TripleSystem, cfg: RunConfig, rng) -> tuple[list[dict], dict]:
    res = tp.search_tripotents(s, cfg.starts, cfg.tolerances, rng)
    worst = max((t.residual for t in res.tripotents), default=0.0)
    tol = cfg.tolerances.residual_tol
    extra = {"tripotents": [
        {"coords": [_num(c) for c in t.element], "residual": _num(t.residual),
         "complete": bool(tp.is_complete(s, t)), "both_signs": bool(t.both_signs)}
        for t in res.tripotents],
        "starts": res.starts, "zero": res.zero_count, "failed": res.failed}
    checks = [_rec("found_tripotents_certified", "tripotents", worst <= tol, worst, tol),
              _rec("found_any_nonzero", "tripotents", len(res.tripotents) > 0, len(res.tripotents))]
    return checks, extra


def cmd_peirce(s: TripleSystem, cfg: RunConfig, rng) -> list[dict]:
    tol = cfg.tol_override or 1e-8
    out = []
    samples = cfg.tolerances.sample_count
    for i, e in enumerate(select_tripotents(s, cfg, rng)):
        tag = f"[e{i}]"
        if tp.tripotent_residual(s, e) > 1e-8:
            out.append(_rec(f"tripotent{tag}", "tripotents", False, tp.tripotent_residual(s, e), 1e-8))
            continue
        p0, p1, p2 = tp.peirce_projections(s, e)
        out.append(_rec(f"peirce_sum_identity{tag}", "Peirce decomposition",
                        np.max(np.abs(p0 + p1 + p2 - np.eye(s.dim))) <= 1e-12,
                        np.max(np.abs(p0 + p1 + p2 - np.eye(s.dim))), 1e-12))
        gaps = tp.formula_vs_eigen(s, e)
        g = max(gaps.values())
        out.append(_rec(f"projection_formulas_vs_eigenspaces{tag}", "Peirce decomposition", g <= 1e-8, g, 1e-8))
        c = tp.contractivity_defect(s, e, samples, rng)
        out.append(_rec(f"projections_contractive{tag}", "Peirce projections are contractive", c <= tol, c, tol))
        rules = tp.check_peirce_rules(s, e, tol)
        out.append(_rec(f"peirce_rules{tag}", "Peirce rules", rules.passed, rules.max_residual, tol))
        cp = tp.cp_set_check(s, e, samples, rng)
        ref = "extreme points are complete tripotents"
        out.append(_rec(f"cp_inclusion{tag}", ref, cp.inclusion_defect <= cp.tol, cp.inclusion_defect, cp.tol))
        out.append(_rec(f"cp_ascent{tag}", ref, cp.ascent_max <= 1e-6, cp.ascent_max, 1e-6))
        out.append(_rec(f"complete_iff_no_perturbation{tag}", ref, cp.consistent,
                        cp.perturbation_max, None))
        lek, _ = tp.lek_antisymmetry(s, e, 200, rng)
        out.append(_rec(f"L(e,k)_antisymmetric{tag}", "L(e,k) = -L(k,e) for k in E^-1(e)", lek <= tol, lek, tol))
        up2 = tp.unit_peirce2_check(s, e, min(samples, 2000), rng)
        ref = "norm-one elements with Peirce-2 part e"
        out.append(_rec(f"peirce1_part_vanishes{tag}", ref, up2.ascent_max <= 1e-6, up2.ascent_max, 1e-6))
        out.append(_rec(f"e_plus_E0_ball_on_sphere{tag}", ref, up2.converse_defect <= 1e-9,
                        up2.converse_defect, 1e-9))
    return out


def cmd_ideals(s: TripleSystem, cfg: RunConfig, rng) -> tuple[list[dict], dict]:
    lat = ideals.minimal_ideal_decomposition(s, cfg.tolerances, rng)
    ref = "ideal decomposition"
    out = [_rec("decomposition_stable", ref, lat.stable),
           _rec("minimal_ideals_certified", ref, max(lat.certificates, default=0.0) <= 1e-9,
                max(lat.certificates, default=0.0), 1e-9)]
    subs = [Subspace.range_of(lat.projector(m)) for m in lat.masks]
    inv = ideals.derivation_invariance(s, subs, 100, rng)
    out.append(_rec("derivations_preserve_ideals", "derivations preserve ideals", inv <= 1e-8, inv, 1e-8))
    iso = gap = 0.0
    for a, b in zip(unit_sphere(rng, 100, s.dim), unit_sphere(rng, 100, s.dim)):
        fr = ideals.exp_isometry_check(s, ideals.triple_derivation(s, a, b), samples=1000, rng=rng,
                                       ideals=subs)
        iso, gap = max(iso, fr.isometry_gap), max(gap, fr.ideal_gap)
    ref = "exp of a triple derivation is an isometry"
    out.append(_rec("exp_derivation_isometric", ref, iso <= 1e-7, iso, 1e-7))
    out.append(_rec("exp_derivation_preserves_ideals", ref, gap <= 1e-7, gap, 1e-7))
    return out, {"lattice": lat.as_dict()}


def _complete_tripotents(s: TripleSystem, cfg: RunConfig, rng, limit: int = 4) -> list[np.ndarray]:
    if cfg.element is not None:
        return [load_element(cfg.element, s.dim)]
    found = tp.search_tripotents(s, cfg.starts, cfg.tolerances, rng).tripotents
    comp = [t.element for t in found if tp.is_complete(s, t)]
    part = [t.element for t in found if not tp.is_complete(s, t)]
    return _dedup(comp[: limit // 2] + _completions(s, part, rng, limit))[:limit]


def cmd_verify_theorem(s: TripleSystem, cfg: RunConfig, rng) -> tuple[list[dict], dict]:
    rep = ideals.verify_main_theorem(s, cfg.tolerances, 50, cfg.tolerances.sample_count, rng)
    out = _from_tuples("", "ideals coincide with M-summands", rep.checks)
    pairs = 0
    for mask, v in rep.ideal_verdicts:
        if v.verdict != ideals.VERIFIED:
            continue
        for i, e in enumerate(_complete_tripotents(s, cfg, rng)):
            fr = ideals.verify_facial_decomposition(s, v.projection, e)
            out += _from_tuples(f"facial[P{mask},e{i}].", "facial decomposition along an M-summand",
                                fr.checks)
            pairs += 1
    out.append(_rec("facial_pairs_exercised", "facial decomposition along an M-summand", pairs > 0, pairs))
    extra = {"lattice": rep.lattice.as_dict(),
             "ideal_gaps": [_num(v.gap) for _, v in rep.ideal_verdicts],
             "min_random_gap": _num(min((v.gap for v in rep.random_verdicts), default=None))}
    return out, extra


def cmd_verify_jb(m, cfg: RunConfig, rng) -> list[dict]:
    if not isinstance(m, JBAlgebraModel):
        raise UsageError("verify-jb needs a JB*-algebra model (jbmat:, sym:, jb: or sums of them)")
    rep = ideals.verify_jb_theorem(m, rng=rng, samples=cfg.tolerances.sample_count)
    ref = "M-summands of a JB*-algebra are cut out by central projections"
    out = _from_tuples("", "ideals coincide with M-summands", rep.theorem.checks)
    for mask, cs in rep.per_projection:
        out += _from_tuples(f"[P{mask}].", ref, cs)
    return out


def cmd_faces(s: TripleSystem, cfg: RunConfig, rng) -> list[dict]:
    if not dual.has_exact_dual(s):
        return [_rec("exact_dual_norm_available", "dual ball faces", True, None, None)]
    out = []
    if isinstance(s.oracle, dual.SpectralOracle):
        sl = dual.verify_support_lemma(s, cfg.batch, rng)
        out.append(_rec("L_orth_iff_support_orth", "L-orthogonality of functionals and their supports",
                        sl.passed, sl.pairs - sl.agree, 0))
    trips = select_tripotents(s, cfg, rng)
    ref = "faces of orthogonal tripotents"
    for i, v in enumerate(trips):
        for j, w in enumerate(trips):
            if j < i or (j > i and not tp.are_orthogonal(s, v, w, 1e-8)):
                continue
            fl = dual.verify_face_lemmas(s, v, w, 20, rng)
            out.append(_rec(f"face_lemmas[e{i},e{j}]", ref, fl.passed(), fl.ascent_max, 1e-6))
    lat = ideals.minimal_ideal_decomposition(s, cfg.tolerances, rng)
    comp = [e for e in trips if tp.is_complete(s, e)]
    ref = "face decomposition along an M-summand"
    for mask in lat.masks:
        p = lat.projector(mask)
        for i, e in enumerate(comp):
            fd = dual.verify_prop_face_decomposition(s, p, e, 30, rng)
            worst = max(fd.additivity, fd.reconstruction, fd.membership, fd.v_face_kills_N, fd.w_face_kills_M)
            out.append(_rec(f"face_decomposition[P{mask},e{i}]", ref, fd.passed(), worst, 1e-7))
        lp = dual.l_projection_defect(s, p, 200, rng)
        out.append(_rec(f"L_projection[P{mask}]", "annihilators of M-summands are L-summands",
                        lp <= 1e-9, lp, 1e-9))
    comm = dual.l_projections_commute([lat.projector(m) for m in lat.masks])
    out.append(_rec("L_projections_commute", "annihilators of M-summands are L-summands", comm <= 1e-9, comm, 1e-9))
    return out


# ---------------------------------------------------------------------------
# orchestration


def _model_entry(spec: str, model, checks: list[dict], extra: dict | None = None) -> dict:
    entry = {"model": spec, "model_hash": as_system(model).fingerprint(), "checks": checks}
    if extra:
        entry.update(_clean(extra))
    return entry


def _run_one(command: str, spec: str, model, cfg: RunConfig) -> dict:
    s = as_system(model)
    rng = _stream(cfg, spec, command)
    extra = None
    if command == "axioms":
        checks = cmd_axioms(s, cfg, rng)
    elif command == "tripotents":
        checks, extra = cmd_tripotents(s, cfg, rng)
    elif command == "peirce":
        checks = cmd_peirce(s, cfg, rng)
    elif command == "ideals":
        checks, extra = cmd_ideals(s, cfg, rng)
    elif command == "verify-theorem":
        checks, extra = cmd_verify_theorem(s, cfg, rng)
    elif command == "verify-jb":
        checks = cmd_verify_jb(model, cfg, rng)
    elif command == "faces":
        checks = cmd_faces(s, cfg, rng)
    else:  # pragma: no cover - argparse restricts choices
        raise UsageError(f"unknown command {command!r}")
    return _model_entry(spec, model, checks, extra)


def _resolve(spec: str):
    try:
        return resolve(spec)
    except ModelSpecError as exc:
        raise UsageError(str(exc)) from exc


def run(cfg: RunConfig) -> tuple[int, dict]:
    """Execute ``cfg`` and return ``(exit_code, report)``."""
    if cfg.command == "report-all":
        entries = []
        for spec in REGISTERED_MODELS:
            model = _resolve(spec)
            checks = []
            for cmd in ("axioms", "peirce", "ideals", "verify-theorem", "faces"):
                e = _run_one(cmd, spec, model, cfg)
                checks += [dict(c, name=f"{cmd}:{c['name']}") for c in e["checks"]]
            entries.append(_model_entry(spec, model, checks))
        for spec in REGISTERED_JB_MODELS:
            model = _resolve(spec)
            e = _run_one("verify-jb", spec, model, cfg)
            entries.append(_model_entry(spec, model, [dict(c, name=f"verify-jb:{c['name']}")
                                                      for c in e["checks"]]))
    else:
        if not cfg.model_spec:
            raise UsageError(f"{cfg.command} needs --model")
        entries = [_run_one(cfg.command, cfg.model_spec, _resolve(cfg.model_spec), cfg)]
    ok = all(c["passed"] for e in entries for c in e["checks"])
    status = "COMPLETE" if cfg.command == "tripotents" and ok else ("PASS" if ok else "FAIL")
    report = {"schema_version": SCHEMA_VERSION, "tool_version": __version__, "command": cfg.command,
              "seed": cfg.tolerances.seed, "status": status, "models": entries}
    validate_document(report, "report")
    return (0 if ok else 1), report


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2, sort_keys=True) + "\n"
    lines = [f"jbtriple {report['tool_version']}  command={report['command']}  seed={report['seed']}  "
             f"status={report['status']}"]
    for e in report["models"]:
        lines.append(f"\n{e['model']}  (hash {e['model_hash']})")
        for c in e["checks"]:
            res = "" if c["residual"] is None else f"{c['residual']:.3e}"
            tol = "" if c["tol"] is None else f"<= {c['tol']:.0e}"
            lines.append(f"  {'PASS' if c['passed'] else 'FAIL'}  {c['name']:<48} {res:>11} {tol:<9} [{c['ref']}]")
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--model", help="model spec, e.g. mat:R:2:2, spin:3, sum:mat:R:2:2+mat:R:1:1")
    common.add_argument("--seed", type=int, default=0, help="RNG seed (JB3_SEED overrides)")
    common.add_argument("--tol", type=float, help="residual tolerance for axiom and Peirce checks")
    common.add_argument("--samples", type=int, default=DEFAULT_TOL.sample_count)
    common.add_argument("--starts", type=int, default=200, help="Newton starts for tripotent search")
    common.add_argument("--batch", type=int, default=200, help="functional pairs for the dual checks")
    common.add_argument("--max-tripotents", type=int, default=6)
    common.add_argument("--element", "--tripotent", dest="element", type=Path,
                        help="JSON file {\"coords\": [...]} used instead of searched tripotents")
    common.add_argument("--out", type=Path, help="write the report here instead of stdout")
    common.add_argument("--format", choices=("json", "text"), default="json")
    p = argparse.ArgumentParser(prog="jbtriple", description="Numerical checks for finite-dimensional JB*-triples.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name, parents=[common])
        if name == "tripotents":
            sp.add_argument("action", nargs="?", choices=("find",), default="find")
    return p


def _config(args) -> RunConfig:
    seed = args.seed
    env = os.environ.get("JB3_SEED")
    if env is not None:
        try:
            seed = int(env)
        except ValueError as exc:
            raise UsageError(f"JB3_SEED must be an integer, got {env!r}") from exc
    for name in ("samples", "starts", "batch", "max_tripotents"):
        if getattr(args, name) < 1:
            raise UsageError(f"--{name.replace('_', '-')} must be positive")
    if args.tol is not None and not args.tol > 0:
        raise UsageError("--tol must be positive")
    tols = DEFAULT_TOL.with_(seed=seed, sample_count=args.samples)
    return RunConfig(args.command, args.model, tols, args.out, args.format, args.tol,
                     args.starts, args.batch, args.max_tripotents, args.element)


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        cfg = _config(args)
        code, report = run(cfg)
        text = render(report, cfg.format)
        if cfg.output is not None:
            try:
                cfg.output.write_text(text)
            except OSError as exc:
                raise UsageError(f"cannot write {cfg.output}: {exc}") from exc
        else:
            sys.stdout.write(text)
        return code
    except UsageError as exc:
        print(f"jbtriple: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
