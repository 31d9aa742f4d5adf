"""Acceptance criteria 1-10 at their stated tolerances.

Each criterion is a function returning ``(passed, detail)``; the pytest
wrappers record one PASS/FAIL line per criterion (shown in the terminal
summary) and then assert. Run directly with ``python tests/test_acceptance.py``
to print just the lines.
"""

from __future__ import annotations

import json
import subprocess
import sys
from fractions import Fraction
from functools import lru_cache
from itertools import product
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from gkzherm.cli import NoMellinBarnesBasis, residue_samples, select_tau  # noqa: E402
from gkzherm.fan import (  # noqa: E402
    Zonotope,
    adjacency_graph,
    enumerate_chambers,
    enumerate_cotriangles,
    enumerate_tau,
    zonotope_witness,
)
from gkzherm.herm import (  # noqa: E402
    build_chi,
    hermitian_package,
    matsubara_compare,
    spectrum_residual,
    tau_differences_in_zonotope,
    verify_invariance,
)
from gkzherm.ratlin import build_system  # noqa: E402
from gkzherm.resid import (  # noqa: E402
    admissible_K,
    global_invariance,
    h_reconstruction_error,
    make_context,
    one_var_residue_audit,
    wall_crossing_check,
)
from gkzherm.solpts import solution_points, solution_points_for_cotriangulation  # noqa: E402
from conftest import B_2F1, B_F4, G_2F1, G_F4, PROBLEMS, TAU_2F1, TAU_F4, record_acceptance  # noqa: E402
from oracles import brute_cotriangles, brute_cotriangulation, grid_solution_points, leibniz_det  # noqa: E402
from randsys import independent_tau, random_systems  # noqa: E402

TOL = 1e-9
LOOSE = 1e-8
MIN_RESIDUE_SAMPLES = 5
GRID_LIMIT = 20000  # largest grid the exhaustive solution-point oracle walks


@lru_cache(maxsize=None)
def systems():
    out = {}
    for name, B, g, taus in (("2F1", B_2F1, G_2F1, TAU_2F1), ("F4", B_F4, G_F4, TAU_F4)):
        sys_ = build_system(B, g)
        ch = enumerate_chambers(sys_.B)
        graph = adjacency_graph(sys_.B, ch)
        pkgs = [hermitian_package(sys_, c.cotriangulation, taus, require_tau_hypothesis=False) for c in ch]
        out[name] = (sys_, ch, graph, pkgs)
    return out


@lru_cache(maxsize=None)
def randomized():
    return list(random_systems(20))


def _fmt(x: float) -> str:
    return f"{x:.2e}"


# ---------------------------------------------------------------- criteria


def criterion_1():
    parts, ok = [], True
    for name, (_, _, _, pkgs) in systems().items():
        res = max(float(np.abs(p.H - pkgs[0].H).max()) for p in pkgs)
        ok &= res <= TOL
        parts.append(f"{name} {len(pkgs)} chambers max|H_i-H_1|={_fmt(res)}")
    return ok, "; ".join(parts)


def criterion_2():
    parts, ok = [], True
    for name, (_, _, _, pkgs) in systems().items():
        res = max(verify_invariance(p.H, M) for p in pkgs for q in pkgs for _, M in q.generators)
        ok &= res <= TOL
        parts.append(f"{name} {sum(len(q.generators) for q in pkgs)} generators x {len(pkgs)} forms max={_fmt(res)}")
    return ok, "; ".join(parts)


def criterion_3():
    parts, ok = [], True
    expected = {"2F1": 2, "F4": 4}
    for name, (sys_, ch, _, _) in systems().items():
        sums = []
        delta = brute_cotriangles(sys_.B)
        for c in ch:
            # oracle: exhaustive cotriangles and exact cone membership at the witness
            members = brute_cotriangulation(sys_.B, c.witness)
            ok &= members == c.key
            sums.append(sum(delta[I] for I in members))
        ok &= set(sums) == {expected[name]}
        parts.append(f"{name} sums {sums} expected {expected[name]}")
    return ok, "; ".join(parts)


def _count_ok(sys_) -> tuple[bool, int]:
    n = 0
    for c in enumerate_cotriangles(sys_.B):
        pts = solution_points(sys_, c)
        d = sys_.d
        BI = [[sys_.B[k][i] for i in c.indices] for k in range(d)]
        if len(pts) != abs(int(leibniz_det(BI))) or len({p.mu for p in pts}) != len(pts):
            return False, n
        for p in pts:
            if not all(0 <= x < 1 for x in p.mu):
                return False, n
            if not all((sys_.gamma0[i] + sum(p.mu[k] * sys_.B[k][i] for k in range(d))).denominator == 1
                       for i in c.indices):
                return False, n
        den = abs(int(leibniz_det(BI)))
        for i in c.indices:
            den *= sys_.gamma0[i].denominator
        if den ** d <= GRID_LIMIT and sorted(p.mu for p in pts) != grid_solution_points(sys_.B, sys_.gamma0, c.indices):
            return False, n
        n += 1
    return True, n


def criterion_4():
    ok, total = True, 0
    for _, (sys_, _, _, _) in systems().items():
        good, n = _count_ok(sys_)
        ok &= good
        total += n
    rand = randomized()
    for sys_, _, _ in rand:
        good, n = _count_ok(sys_)
        ok &= good
        total += n
    draws = rand[-1][2]
    return ok, f"{total} cotriangles over 2 named + {len(rand)} random systems ({draws - len(rand)} draws skipped)"


def _fractional_padding(sys_, have, need):
    """Extra rational samples of the open zonotope on the grid (1/4) Z^d, nearest the origin."""
    Z = Zonotope.of(sys_.B)
    lo_hi = Z.bounds()
    grid = [
        tuple(Fraction(v, 4) for v in t)
        for t in product(*[range(int(4 * lo) - 1, int(4 * hi) + 2) for lo, hi in lo_hi])
    ]
    grid = [t for t in grid if any(x.denominator != 1 for x in t)]
    grid.sort(key=lambda t: (sum(x * x for x in t), t))
    out = []
    for t in grid:
        if len(have) + len(out) >= need:
            break
        if zonotope_witness(Z, t) is not None:
            out.append(t)
    return out


def criterion_5():
    parts, ok = [], True
    for name, (sys_, ch, graph, _) in systems().items():
        samples = residue_samples(sys_)
        integral = len(samples)
        samples = samples + _fractional_padding(sys_, samples, MIN_RESIDUE_SAMPLES)
        worst_glob = worst_wall = worst_audit = 0.0
        bad = []
        audits_ok = True
        for tau in samples:
            ctx = make_context(sys_, tau)
            g = global_invariance(ctx, ch).residual
            w = max((wall_crossing_check(ctx, graph, i, j).residual for i, j in graph.edges), default=0.0)
            worst_glob, worst_wall = max(worst_glob, g), max(worst_wall, w)
            if g > TOL or w > TOL:
                bad.append("(" + ",".join(map(str, tau)) + ")")
            for K in admissible_K(sys_.B):
                rep = one_var_residue_audit(ctx, K, tol=TOL)
                if rep.status != "pass":
                    audits_ok = False
                else:
                    worst_audit = max(worst_audit, rep.finite_sum)
        enough = len(samples) >= MIN_RESIDUE_SAMPLES
        this = enough and not bad and audits_ok
        ok &= this
        detail = (f"{name} {len(samples)} samples ({integral} integral) global={_fmt(worst_glob)} "
                  f"walls={_fmt(worst_wall)} audit={'pass' if audits_ok else 'FAIL'}")
        if bad:
            detail += f" failing at {' '.join(bad)} (non-integral tau, z^tau multivalued)"
        parts.append(detail)
    return ok, "; ".join(parts)


def criterion_6():
    parts, ok = [], True
    for name, (sys_, _, _, pkgs) in systems().items():
        err = max(h_reconstruction_error(p, sys_) for p in pkgs)
        ok &= err <= LOOSE
        parts.append(f"{name} max relative={_fmt(err)}")
    return ok, "; ".join(parts)


def _signature_ok(pkgs) -> bool:
    for p in pkgs:
        vals = [float(v) for v in p.delta]
        if p.signature != (sum(v > 0 for v in vals), sum(v < 0 for v in vals)):
            return False
        eig = p.backend.eigvalsh(p.H)
        if (sum(v > 0 for v in eig), sum(v < 0 for v in eig)) != p.signature:
            return False
    return len({p.signature for p in pkgs}) == 1


def criterion_7():
    ok = True
    parts = []
    mats_applicable = mats_na = 0
    for name, (sys_, _, _, pkgs) in systems().items():
        ok &= _signature_ok(pkgs)
        rep = matsubara_compare(sys_, pkgs[0].points)
        ok &= rep.passed
        parts.append(f"{name} {pkgs[0].signature}")
    fallback = 0
    for sys_, ch, _ in randomized():
        D = ch[0].cotriangulation.rank
        try:
            _, tau, _ = select_tau(sys_, D)
            taus = [tau] * len(ch)
        except NoMellinBarnesBasis:
            fallback += 1
            taus = independent_tau([solution_points_for_cotriangulation(sys_, c.cotriangulation) for c in ch], sys_.d)
        pkgs = [hermitian_package(sys_, c.cotriangulation, t, require_tau_hypothesis=False) for c, t in zip(ch, taus)]
        ok &= _signature_ok(pkgs)
        rep = matsubara_compare(sys_, pkgs[0].points)
        if rep.applicable:
            mats_applicable += 1
            ok &= rep.passed
        else:
            mats_na += 1
    parts.append(f"20 random systems ({fallback} with an integral fallback tau list)")
    parts.append(f"Matsubara agrees on {mats_applicable + 2} systems, not applicable on {mats_na}")
    return ok, "; ".join(parts)


def criterion_8():
    parts, ok = [], True
    for name, (sys_, _, _, pkgs) in systems().items():
        worst = 0.0
        for p in pkgs:
            for j, M in p.generators:
                e = [int(k == j) for k in range(sys_.d)]
                worst = max(worst, spectrum_residual(M, build_chi(p.points, e), p.backend))
        ok &= worst <= LOOSE
        parts.append(f"{name} max={_fmt(worst)}")
    return ok, "; ".join(parts)


def criterion_9():
    half = Fraction(1, 2)
    parts, ok = [], True
    expected = {"2F1": (TAU_2F1, (half,)), "F4": (TAU_F4, (half, half))}
    for name, (sys_, _, _, _) in systems().items():
        want, offset = expected[name]
        got = enumerate_tau(Zonotope.of(sys_.B, half), offset)
        match = sorted(got) == sorted(want)
        closed, bad = tau_differences_in_zonotope(sys_, want)
        # selected list through the search, if any
        D = len(want)
        try:
            _, sel, _ = select_tau(sys_, D)
            sel_closed = tau_differences_in_zonotope(sys_, sel)[0]
        except NoMellinBarnesBasis:
            sel, sel_closed = None, False
        this = match and closed and sel_closed
        ok &= this
        pts = " ".join("(" + ",".join(map(str, t)) + ")" for t in got)
        detail = f"{name} offset {tuple(map(str, offset))} gives {len(got)} points {pts}"
        if bad:
            detail += f"; differences outside Z_B: {' '.join('(' + ','.join(map(str, t)) + ')' for t in bad)}"
        if sel is None:
            detail += "; no offset yields D points"
        parts.append(detail)
    return ok, "; ".join(parts)


def criterion_10(tmp_dir: Path | None = None):
    import tempfile

    tmp = Path(tmp_dir or tempfile.mkdtemp())
    probs = [PROBLEMS / "2f1.json", PROBLEMS / "f4_tau.json"]
    # a d = 3 system exercises the seeded chamber sampler
    d3 = tmp / "d3.json"
    d3.write_text(json.dumps({
        "B": [[1, 0, 0, -1, 1, -1], [0, 1, 0, -1, -1, 1], [0, 0, 1, 1, -1, -1]],
        "gamma0": ["-1/2", "-1/3", "-1/5", "-1/7", "-2/11", "1/13"],
        "seed": 11,
    }))
    probs.append(d3)
    ok = True
    codes = []
    for p in probs:
        outs = []
        for k in range(2):
            out = tmp / f"{p.stem}_{k}.json"
            r = subprocess.run([sys.executable, "-m", "gkzherm", "analyze", str(p), "--seed", "7", "--json", str(out)],
                               capture_output=True, text=True, check=False)
            codes.append(r.returncode)
            outs.append(out.read_bytes() if out.exists() else None)
        ok &= outs[0] is not None and outs[0] == outs[1]
    return ok, f"{len(probs)} problems run twice, byte-identical={ok}, exit codes {codes}"


CRITERIA = {
    1: ("chamber independence", criterion_1),
    2: ("invariance", criterion_2),
    3: ("rank identity", criterion_3),
    4: ("solution-point count", criterion_4),
    5: ("residue invariance", criterion_5),
    6: ("H-reconstruction", criterion_6),
    7: ("signature consistency", criterion_7),
    8: ("spectrum", criterion_8),
    9: ("tau-difference closure", criterion_9),
    10: ("determinism", criterion_10),
}


def _line(n: int, ok: bool, detail: str) -> str:
    return f"CRITERION {n}: {'PASS' if ok else 'FAIL'} [{CRITERIA[n][0]}] {detail}"


@pytest.mark.parametrize("n", sorted(CRITERIA))
def test_criterion(n, tmp_path):
    fn = CRITERIA[n][1]
    ok, detail = fn(tmp_path) if n == 10 else fn()
    line = _line(n, ok, detail)
    record_acceptance(line)
    print(line)
    assert ok, line


if __name__ == "__main__":
    for n, (_, fn) in sorted(CRITERIA.items()):
        ok, detail = fn()
        print(_line(n, ok, detail), flush=True)
