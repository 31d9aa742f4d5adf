"""Command-line driver.

Reads a JSON problem file, runs the pipeline (geometry, solution points,
Hermitian form, residue checks) and writes a deterministic JSON report.

Exit codes: 0 all verifications pass, 1 some verification failed,
2 unreadable or invalid problem, 3 resonant parameters, 4 no Mellin-Barnes
basis (too few tau points for every searched offset).
"""

from __future__ import annotations

import argparse
import json
import logging
import sys as _sys
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Sequence

from .fan import (
    IncompleteEnumeration,
    Zonotope,
    adjacency_graph,
    enumerate_chambers,
    enumerate_cotriangles,
    enumerate_tau,
)
from .herm import (
    RESIDUAL_TOL,
    DegenerateForm,
    IllConditioned,
    ResonantError,
    build_chi,
    hermitian_package,
    invariant_form_nullity,
    matsubara_compare,
    sigma_feasibility,
    spectrum_residual,
    verify_invariance,
)
from .numeric import DOUBLE, default_precision
from .ratlin import RankDeficientError, SystemData, SystemDataError, build_system, frac_str, to_fraction
from .resid import (
    PoleCollision,
    admissible_K,
    global_invariance,
    h_reconstruction_error,
    make_context,
    one_var_residue_audit,
    wall_crossing_check,
)
from .solpts import check_total_nonresonance, solution_points

log = logging.getLogger("gkzherm")

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_PARSE = 2
EXIT_RESONANT = 3
EXIT_NO_BASIS = 4

LOOSE_TOL = 1e-8  # spectrum matching and H-reconstruction
MAX_RESIDUE_SAMPLES = 25


class ProblemError(ValueError):
    """Problem file could not be read; the message names the line or field."""


class Resonant(ValueError):
    def __init__(self, message: str, witness: dict):
        super().__init__(message)
        self.witness = witness
        self.report: dict | None = None


class NoMellinBarnesBasis(ValueError):
    def __init__(self, message: str, search: list):
        super().__init__(message)
        self.search = search
        self.report: dict | None = None


# ---------------------------------------------------------------- problem file


@dataclass(frozen=True)
class ProblemFile:
    B: tuple[tuple[int, ...], ...]
    gamma0: tuple[Fraction, ...]
    tau_offset: tuple[Fraction, ...] | None = None
    tau: tuple[tuple[Fraction, ...], ...] | None = None
    precision: int | None = None
    tolerance: float | None = None
    seed: int | None = None

    def to_dict(self) -> dict:
        out: dict = {
            "B": [list(r) for r in self.B],
            "gamma0": [frac_str(g) for g in self.gamma0],
        }
        if self.tau_offset is not None:
            out["tau_offset"] = [frac_str(x) for x in self.tau_offset]
        if self.tau is not None:
            out["tau"] = [[frac_str(x) for x in t] for t in self.tau]
        for key in ("precision", "tolerance", "seed"):
            if getattr(self, key) is not None:
                out[key] = getattr(self, key)
        return out


_FIELDS = ("B", "gamma0", "tau_offset", "tau", "precision", "tolerance", "seed")


def _rational(value, where: str) -> Fraction:
    try:
        return to_fraction(value)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise ProblemError(f"field {where}: {value!r} is not a rational 'p/q' or integer ({exc})") from None


def _integer(value, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ProblemError(f"field {where}: expected an integer, got {value!r}")
    return value


def _list(value, where: str) -> list:
    if not isinstance(value, list):
        raise ProblemError(f"field {where}: expected a list, got {type(value).__name__}")
    return value


def parse_problem(text: str, source: str = "<problem>") -> ProblemFile:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProblemError(f"{source}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(raw, dict):
        raise ProblemError(f"{source}: top level must be a JSON object")
    unknown = sorted(set(raw) - set(_FIELDS))
    if unknown:
        raise ProblemError(f"{source}: unknown field(s) {', '.join(unknown)}")
    for key in ("B", "gamma0"):
        if key not in raw:
            raise ProblemError(f"{source}: missing required field {key}")
    B = tuple(
        tuple(_integer(x, f"B[{i}][{j}]") for j, x in enumerate(_list(row, f"B[{i}]")))
        for i, row in enumerate(_list(raw["B"], "B"))
    )
    gamma0 = tuple(_rational(g, f"gamma0[{i}]") for i, g in enumerate(_list(raw["gamma0"], "gamma0")))
    offset = raw.get("tau_offset")
    if offset is not None:
        offset = tuple(_rational(x, f"tau_offset[{i}]") for i, x in enumerate(_list(offset, "tau_offset")))
    tau = raw.get("tau")
    if tau is not None:
        tau = tuple(
            tuple(_rational(x, f"tau[{i}][{j}]") for j, x in enumerate(_list(t, f"tau[{i}]")))
            for i, t in enumerate(_list(tau, "tau"))
        )
    precision = raw.get("precision")
    if precision is not None:
        precision = _integer(precision, "precision")
        if precision < 24:
            raise ProblemError(f"field precision: {precision} bits is too few")
    tolerance = raw.get("tolerance")
    if tolerance is not None:
        if isinstance(tolerance, bool) or not isinstance(tolerance, (int, float)) or not tolerance > 0:
            raise ProblemError(f"field tolerance: expected a positive number, got {tolerance!r}")
        tolerance = float(tolerance)
    seed = raw.get("seed")
    if seed is not None:
        seed = _integer(seed, "seed")
    return ProblemFile(B, gamma0, offset, tau, precision, tolerance, seed)


def load_problem(path: str) -> ProblemFile:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ProblemError(f"{path}: {exc.strerror}") from None
    return parse_problem(text, path)


def system_of(problem: ProblemFile) -> SystemData:
    try:
        sys = build_system(problem.B, problem.gamma0)
    except (SystemDataError, RankDeficientError) as exc:
        raise ProblemError(f"invalid system: {exc}") from None
    d = sys.d
    if problem.tau_offset is not None and len(problem.tau_offset) != d:
        raise ProblemError(f"field tau_offset: expected {d} entries, got {len(problem.tau_offset)}")
    if problem.tau is not None:
        for i, t in enumerate(problem.tau):
            if len(t) != d:
                raise ProblemError(f"field tau[{i}]: expected {d} entries, got {len(t)}")
    return sys


# ---------------------------------------------------------------- serialization


def _q(x) -> str:
    return frac_str(Fraction(x))


def _qv(v) -> list[str]:
    return [_q(x) for x in v]


def _one_based(I) -> list[int]:
    return [i + 1 for i in I]


def _c(z) -> list[float]:
    z = complex(z)
    return [float(z.real), float(z.imag)]


def _cm(M) -> list:
    return [[_c(v) for v in row] for row in M]


def _check(value, tol, ok=None) -> dict:
    value = float(value)
    return {"value": value, "tolerance": tol, "pass": bool(value <= tol) if ok is None else bool(ok)}


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=True, allow_nan=True) + "\n"


# ---------------------------------------------------------------- pipeline


def require_nonresonant(sys: SystemData, cotriangles) -> None:
    rep = check_total_nonresonance(sys, cotriangles)
    if not rep.passed:
        witness = {
            "cotriangle": _one_based(rep.cotriangle),
            "mu": _qv(rep.mu),
            "index": rep.index + 1,
        }
        raise Resonant(
            f"resonant parameters: cotriangle I={{{', '.join(map(str, witness['cotriangle']))}}}, "
            f"mu=({', '.join(witness['mu'])}), "
            f"gamma^mu_{witness['index']} is an integer",
            witness,
        )


def offset_search_order(d: int, user: Sequence | None) -> list[tuple[Fraction, ...]]:
    half = tuple([Fraction(1, 2)] * d)
    zero = tuple([Fraction(0)] * d)
    order = []
    if user is not None:
        order.append(tuple(Fraction(x) for x in user))
    order += [half, zero]
    order += [tuple(map(Fraction, v)) for v in product((0, Fraction(1, 2)), repeat=d)]
    # center of the half zonotope is the origin because the b_i sum to zero
    order.append(zero)
    seen, out = set(), []
    for o in order:
        if o not in seen:
            seen.add(o)
            out.append(o)
    return out


def select_tau(sys: SystemData, D: int, user_offset=None):
    """First offset of the search order with at least ``D`` points in the half zonotope.

    Among its points the ``D`` closest to the origin are kept (ties broken
    lexicographically), then listed in lexicographic order. Every pairwise
    difference of points of the open half zonotope lies in the open zonotope.
    """
    Zh = Zonotope.of(sys.B, Fraction(1, 2))
    search = []
    for off in offset_search_order(sys.d, user_offset):
        pts = enumerate_tau(Zh, off)
        search.append({"offset": _qv(off), "points": len(pts)})
        if len(pts) >= D:
            chosen = sorted(pts, key=lambda t: (sum(x * x for x in t), t))[:D]
            return off, sorted(chosen), search
    raise NoMellinBarnesBasis(
        f"no Mellin-Barnes basis: fewer than D={D} tau points for every searched offset", search
    )


def residue_samples(sys: SystemData, limit: int = MAX_RESIDUE_SAMPLES) -> list[tuple[Fraction, ...]]:
    """Integral points of the open zonotope, nearest the origin first."""
    pts = enumerate_tau(Zonotope.of(sys.B), [0] * sys.d)
    return sorted(sorted(pts, key=lambda t: (sum(x * x for x in t), t))[:limit])


@dataclass
class Settings:
    tolerance: float = RESIDUAL_TOL
    precision: int = DOUBLE
    seed: int = 0

    @property
    def loose(self) -> float:
        return max(LOOSE_TOL, self.tolerance)


def settings_for(problem: ProblemFile, args) -> Settings:
    tol = getattr(args, "tolerance", None)
    prec = getattr(args, "precision", None)
    seed = getattr(args, "seed", None)
    return Settings(
        tolerance=tol if tol is not None else problem.tolerance if problem.tolerance is not None else RESIDUAL_TOL,
        precision=prec if prec is not None else problem.precision if problem.precision is not None else default_precision(),
        seed=seed if seed is not None else problem.seed if problem.seed is not None else 0,
    )


def system_section(sys: SystemData, D: int) -> dict:
    return {
        "N": sys.N,
        "d": sys.d,
        "r": sys.r,
        "D": D,
        "A": [list(r) for r in sys.A],
        "alpha": _qv(sys.alpha),
        "h": _qv(sys.h),
        "h_alpha": _q(sys.h_alpha),
    }


def _points_json(sys: SystemData, I) -> list:
    return [{"mu": _qv(p.mu), "gamma_mu": _qv(p.gamma_mu)} for p in solution_points(sys, I)]


def chambers_section(sys: SystemData, chambers, graph) -> tuple[list, list]:
    out = []
    for k, ch in enumerate(chambers):
        out.append({
            "index": k + 1,
            "witness": _qv(ch.witness),
            "facet_normals": [_qv(n) for n, _ in ch.facets],
            "rank": ch.cotriangulation.rank,
            "cotriangles": [
                {
                    "I": _one_based(I.indices),
                    "complement": _one_based(I.complement(sys.N)),
                    "delta": I.delta,
                    "solution_points": _points_json(sys, I),
                }
                for I in sorted(ch.cotriangulation.cotriangles)
            ],
        })
    walls = []
    for i, j in graph.edges:
        w = graph.wall(i, j)
        walls.append({"chambers": [i + 1, j + 1], "normal": _qv(w.normal), "point": _qv(w.point)})
    return out, walls


def package_section(k: int, pkg) -> dict:
    return {
        "chamber": k + 1,
        "precision": pkg.backend.bits,
        "cond": float(pkg.cond),
        "mu": [_qv(p.mu) for p in pkg.points],
        "X_phases": [_qv(p.value for p in row) for row in pkg.X_phases],
        "X": _cm(pkg.X),
        "delta": [float(v) for v in pkg.delta],
        "H": _cm(pkg.H),
        "generators": [{"j": j + 1, "M": _cm(M)} for j, M in pkg.generators],
        "signature": list(pkg.signature),
    }


def residue_section(sys: SystemData, chambers, graph, samples, settings: Settings, backend) -> tuple[dict, bool]:
    tol = settings.tolerance
    ok = True
    glob = []
    walls = []
    audits = []
    Ks = admissible_K(sys.B)
    for tau in samples:
        ctx = make_context(sys, tau, backend)
        gi = global_invariance(ctx, chambers)
        entry = {
            "tau": _qv(tau),
            "sums": [_c(s) for s in gi.sums],
            "residual": _check(gi.residual, tol),
            "opposite_sign_needed": gi.sign_flag,
        }
        ok &= entry["residual"]["pass"]
        glob.append(entry)
        for i, j in graph.edges:
            wc = wall_crossing_check(ctx, graph, i, j)
            w = {"tau": _qv(tau), "chambers": [i + 1, j + 1], "residual": _check(wc.residual, tol),
                 "characterization": wc.characterization}
            ok &= w["residual"]["pass"] and wc.characterization
            walls.append(w)
        for K in Ks:
            rep = one_var_residue_audit(ctx, K, tol=tol)
            a = {
                "tau": _qv(tau),
                "K": _one_based(K),
                "status": rep.status,
                "support_bounds": [_q(rep.lower_bound), _q(rep.upper_bound)],
                "poles": rep.poles,
                "finite_sum": None if rep.finite_sum is None else _check(rep.finite_sum, tol),
                "partition_deviation": None if rep.partition_deviation is None else _check(rep.partition_deviation, tol),
            }
            if rep.reason:
                a["reason"] = rep.reason
            ok &= rep.status == "pass"
            audits.append(a)
    return {"samples": [_qv(t) for t in samples], "global": glob, "walls": walls, "one_variable": audits}, ok


def analyze(problem: ProblemFile, settings: Settings) -> tuple[dict, int]:
    """Full report and exit code.

    Resonance and a missing Mellin-Barnes basis raise, carrying the partial
    report assembled so far in ``exc.report``.
    """
    sys = system_of(problem)
    report: dict = {
        "problem": problem.to_dict(),
        "settings": {"tolerance": settings.tolerance, "loose_tolerance": settings.loose,
                     "precision": settings.precision, "seed": settings.seed},
    }
    cots = enumerate_cotriangles(sys.B)
    try:
        require_nonresonant(sys, cots)
    except Resonant as exc:
        report["nonresonance"] = {"pass": False, "witness": exc.witness}
        report["pass"] = False
        exc.report = report
        raise
    chambers = enumerate_chambers(sys.B, seed=settings.seed)
    graph = adjacency_graph(sys.B, chambers)
    ranks = [ch.cotriangulation.rank for ch in chambers]
    D = ranks[0]
    report["system"] = system_section(sys, D)
    report["nonresonance"] = {"pass": True}
    ch_json, wall_json = chambers_section(sys, chambers, graph)
    report["chambers"] = ch_json
    report["walls"] = wall_json

    if problem.tau is not None:
        offset, tau_list, search = None, [tuple(t) for t in problem.tau], []
        if len(tau_list) != D:
            raise ProblemError(f"field tau: expected D={D} points, got {len(tau_list)}")
    else:
        try:
            offset, tau_list, search = select_tau(sys, D, problem.tau_offset)
        except NoMellinBarnesBasis as exc:
            report["tau"] = {"source": "search", "offset": None, "search": exc.search, "points": []}
            report["pass"] = False
            exc.report = report
            raise
    report["tau"] = {
        "source": "problem" if problem.tau is not None else "search",
        "offset": None if offset is None else _qv(offset),
        "search": search,
        "points": [_qv(t) for t in tau_list],
    }

    tol, loose = settings.tolerance, settings.loose
    pkgs = [
        hermitian_package(sys, ch.cotriangulation, tau_list, precision=settings.precision,
                          require_tau_hypothesis=False)
        for ch in chambers
    ]
    report["hermitian"] = [package_section(k, p) for k, p in enumerate(pkgs)]
    backend = pkgs[0].backend

    H0 = pkgs[0].H
    independence = max(pkgs[0].backend.max_abs(p.H - H0) for p in pkgs)
    invariance = max(verify_invariance(p.H, M) for p in pkgs for q in pkgs for _, M in q.generators)
    spectrum = 0.0
    for p in pkgs:
        for j, M in p.generators:
            e = [int(k == j) for k in range(sys.d)]
            spectrum = max(spectrum, spectrum_residual(M, build_chi(p.points, e), p.backend))
    hermitian_res = max(p.hermitian_residual() for p in pkgs)
    congruence = max(p.congruence_residual() for p in pkgs)
    recon = max(h_reconstruction_error(p, sys) for p in pkgs)
    sigs = sorted({tuple(p.signature) for p in pkgs})
    nullity = invariant_form_nullity([p.backend.to_complex(M) for p in pkgs for _, M in p.generators])
    mats = matsubara_compare(sys, pkgs[0].points, backend)
    sigma = sigma_feasibility(sys.B, sys.gamma0)

    residues, residues_ok = residue_section(sys, chambers, graph, residue_samples(sys), settings, backend)

    v = {
        "tau_closure": {"pass": bool(pkgs[0].tau_hypothesis),
                        "violations": [_qv(t) for t in pkgs[0].tau_violations]},
        "rank_identity": {"sums": [sum(I.delta for I in ch.cotriangulation.cotriangles) for ch in chambers],
                          "pass": len(set(ranks)) == 1},
        "hermitian": _check(hermitian_res, tol),
        "congruence": _check(congruence, tol),
        "chamber_independence": _check(independence, tol),
        "invariance": _check(invariance, tol),
        "spectrum": _check(spectrum, loose),
        "h_reconstruction": _check(recon, loose),
        "signature": {"signatures": [list(s) for s in sigs], "pass": len(sigs) == 1},
        "residues": {"pass": residues_ok},
        "matsubara": {
            "applicable": mats.applicable,
            "h_alpha": _q(mats.h_alpha),
            "rows": [{"mu": _qv(r.mu), "s1": r.s1, "delta_sign": r.delta_sign, "agree": r.agree}
                     for r in mats.rows],
            "pass": mats.passed,
        },
        "sigma_feasibility": {
            "feasible": sigma.feasible,
            "sigma": None if sigma.sigma is None else _qv(sigma.sigma),
            "informational": True,
        },
        "invariant_form_nullity": {"value": nullity, "informational": True},
    }
    report["residues"] = residues
    report["verification"] = v
    passed = all(item["pass"] for item in v.values() if "pass" in item)
    report["pass"] = passed
    return report, EXIT_OK if passed else EXIT_FAILED


# ---------------------------------------------------------------- human output


def summary_table(report: dict) -> str:
    s = report["system"]
    lines = [
        f"N={s['N']}  d={s['d']}  r={s['r']}  D={s['D']}  h(alpha)={s['h_alpha']}",
        f"chambers: {len(report['chambers'])}   walls: {len(report['walls'])}",
        f"tau: {', '.join('(' + ', '.join(t) + ')' for t in report['tau']['points'])}",
        "",
        f"{'check':<24}{'value':>14}{'tolerance':>12}  result",
    ]
    for name, item in report["verification"].items():
        if "value" in item and "tolerance" in item:
            val = f"{item['value']:.3e}"
            tol = f"{item['tolerance']:.0e}"
        elif "value" in item:
            val, tol = str(item["value"]), "-"
        elif "feasible" in item:
            val, tol = "feasible" if item["feasible"] else "infeasible", "-"
        elif item.get("applicable") is False:
            val, tol = "n/a", "-"
        else:
            val, tol = "-", "-"
        res = "info" if item.get("informational") else ("PASS" if item.get("pass") else "FAIL")
        lines.append(f"{name:<24}{val:>14}{tol:>12}  {res}")
    lines.append("")
    lines.append("overall: " + ("PASS" if report["pass"] else "FAIL"))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- subcommands


def _emit(obj: dict, path: str | None) -> None:
    text = _dump(obj)
    if path and path != "-":
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        _sys.stdout.write(text)


def cmd_analyze(args) -> int:
    problem = load_problem(args.file)
    try:
        report, code = analyze(problem, settings_for(problem, args))
    except (Resonant, NoMellinBarnesBasis) as exc:
        if args.json:
            _emit(exc.report, args.json)
        raise
    if args.json:
        _emit(report, args.json)
    if args.json != "-":
        _sys.stdout.write(summary_table(report))
    return code


def _prepare(args):
    problem = load_problem(args.file)
    settings = settings_for(problem, args)
    sys = system_of(problem)
    cots = enumerate_cotriangles(sys.B)
    return problem, settings, sys, cots


def cmd_chambers(args) -> int:
    problem, settings, sys, cots = _prepare(args)
    chambers = enumerate_chambers(sys.B, seed=settings.seed)
    graph = adjacency_graph(sys.B, chambers)
    ch_json, wall_json = chambers_section(sys, chambers, graph)
    _emit({"system": system_section(sys, chambers[0].cotriangulation.rank),
           "chambers": ch_json, "walls": wall_json}, args.json)
    return EXIT_OK


def cmd_solutions(args) -> int:
    problem, settings, sys, cots = _prepare(args)
    require_nonresonant(sys, cots)
    _emit({
        "cotriangles": [
            {"I": _one_based(I.indices), "complement": _one_based(I.complement(sys.N)), "delta": I.delta,
             "solution_points": _points_json(sys, I)}
            for I in cots
        ],
        "nonresonance": {"pass": True},
    }, args.json)
    return EXIT_OK


def cmd_hermitian(args) -> int:
    problem, settings, sys, cots = _prepare(args)
    require_nonresonant(sys, cots)
    chambers = enumerate_chambers(sys.B, seed=settings.seed)
    if args.chamber is not None and not 1 <= args.chamber <= len(chambers):
        raise ProblemError(f"--chamber {args.chamber}: there are {len(chambers)} chambers")
    D = chambers[0].cotriangulation.rank
    if problem.tau is not None:
        tau_list = list(problem.tau)
    else:
        _, tau_list, _ = select_tau(sys, D, problem.tau_offset)
    picked = range(len(chambers)) if args.chamber is None else [args.chamber - 1]
    out = []
    for k in picked:
        pkg = hermitian_package(sys, chambers[k].cotriangulation, tau_list, precision=settings.precision,
                                require_tau_hypothesis=False)
        out.append(package_section(k, pkg))
    _emit({"tau": [_qv(t) for t in tau_list], "hermitian": out}, args.json)
    return EXIT_OK


def parse_tau_arg(text: str, d: int) -> tuple[Fraction, ...]:
    parts = [p for p in text.split(",")]
    if len(parts) != d:
        raise ProblemError(f"--tau: expected {d} comma-separated rationals, got {len(parts)}")
    return tuple(_rational(p, f"--tau[{i}]") for i, p in enumerate(parts))


def cmd_residues(args) -> int:
    problem, settings, sys, cots = _prepare(args)
    require_nonresonant(sys, cots)
    tau = parse_tau_arg(args.tau, sys.d)
    chambers = enumerate_chambers(sys.B, seed=settings.seed)
    graph = adjacency_graph(sys.B, chambers)
    ctx = make_context(sys, tau, require_zonotope=False)
    section, ok = residue_section(sys, chambers, graph, [tau], settings, ctx.backend)
    section["in_zonotope"] = ctx.in_zonotope
    section["integral"] = ctx.integral
    section["hypotheses_met"] = ctx.hypotheses_met
    section["pass"] = ok
    _emit(section, args.json)
    return EXIT_OK if ok else EXIT_FAILED


# ---------------------------------------------------------------- entry point


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("file", help="JSON problem file")
    common.add_argument("--tolerance", type=float, default=None, help="residual tolerance (default 1e-9)")
    common.add_argument("--precision", type=int, default=None,
                        help="working precision in bits (default $GKZHERM_PRECISION or 53)")
    common.add_argument("--seed", type=int, default=None, help="seed for chamber sampling")
    common.add_argument("--json", metavar="PATH", default=None, help="write the JSON report here ('-' for stdout)")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="gkzherm", description="Invariant Hermitian forms for Mellin-Barnes monodromy.")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("analyze", parents=[common], help="full pipeline and verification report").set_defaults(func=cmd_analyze)
    sub.add_parser("chambers", parents=[common], help="chambers, witnesses and walls").set_defaults(func=cmd_chambers)
    sub.add_parser("solutions", parents=[common], help="solution points of every cotriangle").set_defaults(func=cmd_solutions)
    h = sub.add_parser("hermitian", parents=[common], help="transition matrices, H and generators")
    h.add_argument("--chamber", type=int, default=None, metavar="INDEX", help="1-based chamber index")
    h.set_defaults(func=cmd_hermitian)
    r = sub.add_parser("residues", parents=[common], help="residue invariance at one tau")
    r.add_argument("--tau", required=True, metavar="q1,...,qd")
    r.set_defaults(func=cmd_residues)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except ProblemError as exc:
        print(f"error: {exc}", file=_sys.stderr)
        return EXIT_PARSE
    except (Resonant, ResonantError) as exc:
        print(f"error: {exc}", file=_sys.stderr)
        return EXIT_RESONANT
    except NoMellinBarnesBasis as exc:
        print(f"error: {exc}", file=_sys.stderr)
        for row in exc.search:
            print(f"  offset ({', '.join(row['offset'])}): {row['points']} points", file=_sys.stderr)
        return EXIT_NO_BASIS
    except (IllConditioned, DegenerateForm, PoleCollision, IncompleteEnumeration) as exc:
        print(f"error: {exc}", file=_sys.stderr)
        return EXIT_FAILED


if __name__ == "__main__":
    raise SystemExit(main())
