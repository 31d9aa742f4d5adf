"""Binomial residues of the form

    omega(tau, z) = z^tau / prod_j (x_j z^{b_j} - 1) dz/z,   x_j = exp(2 pi i gamma0_j),

at the torus points ``zeta^mu = exp(2 pi i mu)`` of the solution points.

The residue identities (equal sums over adjacent and over arbitrary
cotriangulations) need ``z^tau`` to be single valued, so they are only
claimed for integral ``tau``; fractional ``tau`` is accepted for evaluation
with the branch fixed by ``mu in [0, 1)^d`` and flagged as outside the
hypotheses.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .fan import (
    Chamber,
    Cotriangulation,
    FanGraph,
    Zonotope,
    check_wall_characterization,
    enumerate_cotriangles,
    wall_cotriangles,
    zonotope_contains,
)
from .numeric import Backend, Phase
from .ratlin import SystemData, columns, det, dot, hermite_normal_form, matvec, rank, shape, transpose
from .solpts import SolutionPoint, frac_part, is_integral, shifted_lattice_points, solution_points


class PoleCollision(ValueError):
    pass


class NotAdjacent(ValueError):
    pass


class HypothesisError(ValueError):
    pass


@dataclass(frozen=True)
class ResidueContext:
    sys: SystemData
    tau: tuple[Fraction, ...]
    in_zonotope: bool
    backend: Backend = field(default_factory=Backend, compare=False)

    @property
    def x(self) -> tuple[Phase, ...]:
        return tuple(Phase(g) for g in self.sys.gamma0)

    @property
    def integral(self) -> bool:
        return all(is_integral(t) for t in self.tau)

    @property
    def hypotheses_met(self) -> bool:
        return self.in_zonotope and self.integral


def make_context(sys: SystemData, tau, backend: Backend | None = None, require_zonotope: bool = True) -> ResidueContext:
    tau = tuple(Fraction(t) for t in tau)
    inside = zonotope_contains(Zonotope.of(sys.B), tau)
    if require_zonotope and not inside:
        raise HypothesisError(f"tau = {tuple(map(str, tau))} is not in the open zonotope")
    return ResidueContext(sys, tau, inside, backend or Backend())


@dataclass(frozen=True)
class ZetaPoint:
    point: SolutionPoint
    zeta: tuple[Phase, ...]


def zeta_point(ctx: ResidueContext, point: SolutionPoint) -> ZetaPoint:
    zeta = tuple(Phase(m) for m in point.mu)
    x = ctx.x
    B = ctx.sys.B
    jac = Phase(0)
    for i in point.indices:
        val = x[i]
        for k, z in enumerate(zeta):
            val = val * z ** B[k][i]
        if not val.is_one:
            raise ArithmeticError(f"x_{i} zeta^b_{i} = {val} is not 1")
        jac = jac * val
    assert jac.is_one
    return ZetaPoint(point, zeta)


def residue_at(ctx: ResidueContext, point: SolutionPoint, signed_det: bool = False):
    """Residue of omega at ``zeta^mu``.

    With ``signed_det`` the denominator uses ``det(B_I)`` instead of
    ``|det(B_I)|``, i.e. the opposite residue sign convention; it exists
    only so reports can flag which convention an identity needs.
    """
    b = ctx.backend
    num = b.expi2pi(dot(point.mu, ctx.tau))
    den = point.cotriangle.signed_det if signed_det else point.cotriangle.delta
    for j, g in enumerate(point.gamma_mu):
        if j in point.indices:
            continue
        if is_integral(g):
            raise PoleCollision(f"pole collision with divisor {j}: gamma^mu_{j} = {g}")
        den = den * (b.expi2pi(g) - 1)
    return num / den


def cotriangulation_sum(ctx: ResidueContext, cot: Cotriangulation | Sequence, signed_det: bool = False):
    cotriangles = cot.cotriangles if isinstance(cot, Cotriangulation) else cot
    total = 0
    for I in sorted(cotriangles):
        for p in solution_points(ctx.sys, I):
            total = total + residue_at(ctx, p, signed_det)
    return total


@dataclass(frozen=True)
class WallCheck:
    chambers: tuple[int, int]
    residual: float
    characterization: bool


def wall_crossing_check(ctx: ResidueContext, graph: FanGraph, i: int, j: int) -> WallCheck:
    if i == j:
        return WallCheck((i, j), 0.0, True)
    if not graph.adjacent(i, j):
        raise NotAdjacent(f"chambers {i} and {j} share no wall")
    I = graph.chambers[i].cotriangulation
    J = graph.chambers[j].cotriangulation
    side_i, side_j = wall_cotriangles(I, J)
    res = abs(cotriangulation_sum(ctx, side_i) - cotriangulation_sum(ctx, side_j))
    ok = check_wall_characterization(ctx.sys.B, graph.wall(i, j), I, J)
    return WallCheck((i, j), float(res), ok)


@dataclass(frozen=True)
class GlobalInvariance:
    sums: tuple[complex, ...]
    residual: float
    alt_sign_residual: float

    @property
    def sign_flag(self) -> bool:
        """True when only the opposite residue sign would make the identity hold."""
        return self.residual > 1e-9 and self.alt_sign_residual <= 1e-9


def global_invariance(ctx: ResidueContext, chambers: Sequence[Chamber]) -> GlobalInvariance:
    sums = [cotriangulation_sum(ctx, ch.cotriangulation) for ch in chambers]
    alt = [cotriangulation_sum(ctx, ch.cotriangulation, signed_det=True) for ch in chambers]

    def spread(vals):
        return max((float(abs(a - b)) for a, b in combinations(vals, 2)), default=0.0)

    return GlobalInvariance(tuple(complex(s) for s in sums), spread(sums), spread(alt))


def rotation_for(B, K: Sequence[int]):
    """Unimodular ``U`` with ``U b_k`` having last coordinate 0 for all ``k`` in ``K``."""
    d = len(B)
    if not K:
        return tuple(tuple(int(i == j) for j in range(d)) for i in range(d))
    BK = columns(B, K)
    if rank(BK) != len(K):
        raise ValueError(f"columns {tuple(K)} are dependent")
    _, U = hermite_normal_form(BK)
    return U


@dataclass(frozen=True)
class AuditReport:
    K: tuple[int, ...]
    status: str  # "pass", "identity failed", "hypothesis failed"
    lower_bound: Fraction
    upper_bound: Fraction
    finite_sum: float | None
    partition_deviation: float | None
    positive_sum: complex | None
    negative_sum: complex | None
    poles: int
    reason: str = ""


def one_var_residue_audit(ctx: ResidueContext, K: Sequence[int], rotation=None, tol: float = 1e-9) -> AuditReport:
    """Reduce omega to the one-variable form Omega(w) along ``K`` and audit it.

    In rotated coordinates the columns in ``K`` have last coordinate 0, so on
    each fiber over the partial points solving ``x_k z^{b_k} = 1`` (``k in K``)
    the remaining factors are binomials in ``w = z_d``. The finite poles of
    Omega are enumerated exactly as phases; their residues must sum to 0, and
    each must equal ``sign(beta_j) |delta|`` times the residue of omega at the
    matching solution point.
    """
    sys, b = ctx.sys, ctx.backend
    B = sys.B
    d, N = shape(B)
    K = tuple(sorted(K))
    U = rotation if rotation is not None else rotation_for(B, K)
    if abs(det(U)) != 1:
        raise ValueError("rotation is not unimodular")
    Bp = tuple(matvec(U, sys.column(i)) for i in range(N))  # rotated columns
    if any(Bp[k][d - 1] != 0 for k in K):
        raise ValueError("rotation does not flatten the columns of K")
    beta = [Bp[i][d - 1] for i in range(N)]
    taup = matvec(U, ctx.tau)
    tau_d = taup[d - 1]
    lower = tau_d - sum((bt for bt in beta if bt < 0), 0)
    upper = sum((bt for bt in beta if bt > 0), 0) - tau_d
    top = tuple(tuple(Bp[k][:d - 1]) for k in K)  # rows = columns of K, truncated
    delta = det(transpose(top)) if K else 1
    base = dict(K=K, lower_bound=Fraction(lower), upper_bound=Fraction(upper))
    if not ctx.integral:
        return AuditReport(status="hypothesis failed", finite_sum=None, partition_deviation=None,
                           positive_sum=None, negative_sum=None, poles=0,
                           reason="tau is not integral, z^tau is multivalued", **base)
    if lower <= 0 or upper <= 0:
        return AuditReport(status="hypothesis failed", finite_sum=None, partition_deviation=None,
                           positive_sum=None, negative_sum=None, poles=0,
                           reason="Taylor-support bound fails at 0 or infinity", **base)
    shift = [sys.gamma0[k] for k in K]
    fibers = shifted_lattice_points(transpose(top), shift) if K else [()]
    if len(fibers) != abs(delta):
        raise ArithmeticError(f"{len(fibers)} partial points, expected |delta| = {abs(delta)}")
    # solution points of every cotriangle K + {j}, keyed by mu
    lookup: dict = {}
    cot_by_idx = {c.indices: c for c in enumerate_cotriangles(B)}
    for j in range(N):
        if j in K or beta[j] == 0:
            continue
        I = tuple(sorted(K + (j,)))
        for p in solution_points(sys, cot_by_idx[I]):
            lookup[(I, p.mu)] = p
    worst_sum = 0.0
    worst_dev = 0.0
    pos_total = 0
    neg_total = 0
    n_poles = 0
    Ut = transpose(U)
    for nu in fibers:
        phi = [sys.gamma0[i] + dot(nu, Bp[i][:d - 1]) for i in range(N)]
        q0 = dot(nu, taup[:d - 1])
        poles = []
        for j in range(N):
            if j in K:
                continue
            if beta[j] == 0:
                if is_integral(phi[j]):
                    raise PoleCollision(f"factor {j} vanishes identically on the fiber {nu}")
                continue
            for m in range(abs(beta[j])):
                poles.append((frac_part(Fraction(m - phi[j], beta[j])), j))
        thetas = {}
        for theta, j in poles:
            if theta in thetas:
                raise PoleCollision(f"non-simple pole: factors {thetas[theta]} and {j} share a root")
            thetas[theta] = j
        fiber_sum = 0
        for theta, j in sorted(poles):
            val = b.expi2pi(q0 + theta * tau_d) / beta[j]
            for i in range(N):
                if i in K or i == j:
                    continue
                val = val / (b.expi2pi(phi[i] + theta * beta[i]) - 1)
            fiber_sum = fiber_sum + val
            n_poles += 1
            mu = tuple(frac_part(x) for x in matvec(Ut, tuple(nu) + (theta,)))
            I = tuple(sorted(K + (j,)))
            p = lookup.get((I, mu))
            if p is None:
                raise ArithmeticError(f"pole ({nu}, {theta}) matches no solution point of {I}")
            ref = residue_at(ctx, p)
            sgn = 1 if beta[j] > 0 else -1
            worst_dev = max(worst_dev, float(abs(val - sgn * abs(delta) * ref)))
            if sgn > 0:
                pos_total = pos_total + ref
            else:
                neg_total = neg_total + ref
        worst_sum = max(worst_sum, float(abs(fiber_sum)))
    expected_poles = sum(cot_by_idx[tuple(sorted(K + (j,)))].delta
                         for j in range(N) if j not in K and beta[j] != 0)
    if n_poles != expected_poles:
        raise ArithmeticError(f"{n_poles} poles, expected {expected_poles}")
    status = "pass" if worst_sum <= tol and worst_dev <= tol else "identity failed"
    return AuditReport(status=status, finite_sum=worst_sum, partition_deviation=worst_dev,
                       positive_sum=complex(pos_total), negative_sum=complex(neg_total),
                       poles=n_poles, **base)


def admissible_K(B) -> list[tuple[int, ...]]:
    d, N = shape(B)
    return [K for K in combinations(range(N), d - 1) if rank(columns(B, K)) == d - 1] if d > 1 else [()]


def h_reconstruction_error(pkg, sys: SystemData) -> float:
    """Largest relative deviation between ``H^{-1}`` and its residue expression."""
    b = pkg.backend
    Hinv = b.inv(pkg.H)
    factor = (2j) ** sys.r * complex(b.expi2pi(sum(sys.gamma0, Fraction(0)) / 2))
    worst = 0.0
    for r, tr in enumerate(pkg.tau_list):
        for c, tc in enumerate(pkg.tau_list):
            diff = tuple(a - e for a, e in zip(tr, tc))
            ctx = make_context(sys, diff, b, require_zonotope=False)
            val = factor * complex(cotriangulation_sum(ctx, pkg.cotriangulation))
            got = complex(Hinv[r, c])
            scale = max(abs(val), abs(got))
            if scale:
                worst = max(worst, abs(val - got) / scale)
    return worst
