"""Transition matrices, monodromy generators and the invariant Hermitian form.

For a chamber with ordered solution points ``mu_1..mu_D`` and a list of
arguments ``tau_1..tau_D`` differing by integers, the transition matrix has
entries ``X[r, c] = exp(2 pi i mu_c . (tau_r - tau_1))`` and the form is
``H = (X^H)^{-1} Delta X^{-1}`` with the real diagonal ``Delta`` built from
the parameter vectors of the solution points.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

from .fan import Cotriangulation, Zonotope, zonotope_contains
from .lp import strict_interior_point
from .numeric import DOUBLE, QUAD, Backend, Phase
from .ratlin import SystemData, dot
from .solpts import SolutionPoint, is_integral, solution_points_for_cotriangulation

log = logging.getLogger(__name__)

RESIDUAL_TOL = 1e-9
ZERO_EIG_TOL = 1e-7
COND_MAX = 1e12


class ResonantError(ValueError):
    pass


class IllConditioned(ArithmeticError):
    def __init__(self, message: str, cond: float):
        super().__init__(message)
        self.cond = cond


class DegenerateForm(ArithmeticError):
    pass


class TauHypothesisError(ValueError):
    pass


def build_chi(mu_list: Sequence[SolutionPoint | Sequence], n: Sequence[int]) -> tuple[Phase, ...]:
    """Diagonal of the local monodromy along the loop ``c(n)``."""
    mus = [p.mu if isinstance(p, SolutionPoint) else p for p in mu_list]
    return tuple(Phase(dot(mu, n)) for mu in mus)


def build_X(mu_list, tau_list, backend: Backend | None = None):
    """Exact phase matrix and its numeric materialization."""
    backend = backend or Backend()
    mus = [p.mu if isinstance(p, SolutionPoint) else p for p in mu_list]
    taus = [tuple(Fraction(x) for x in t) for t in tau_list]
    if len(mus) != len(taus):
        raise ValueError(f"{len(taus)} tau points for {len(mus)} solution points")
    t0 = taus[0]
    rows = []
    for t in taus:
        diff = [a - b for a, b in zip(t, t0)]
        if not all(is_integral(x) for x in diff):
            raise TauHypothesisError(f"tau points {t} and {t0} do not differ by an integer vector")
        rows.append(tuple(Phase(dot(mu, diff)) for mu in mus))
    return tuple(rows), backend.phases(rows)


def delta_entry(point: SolutionPoint, backend: Backend):
    I = point.indices
    val = point.cotriangle.delta
    sign = 1
    for l, g in enumerate(point.gamma_mu):
        if l in I:
            sign *= -1 if g.numerator % 2 else 1
        else:
            if is_integral(g):
                raise ResonantError(
                    f"zero diagonal entry: gamma^mu_{l} = {g} is an integer off cotriangle {I}"
                )
            val = val * backend.sinpi(g)
    return sign * val


def build_delta(mu_list: Sequence[SolutionPoint], backend: Backend | None = None) -> list:
    backend = backend or Backend()
    return [delta_entry(p, backend) for p in mu_list]


def build_H(X: np.ndarray, delta: Sequence, backend: Backend, cond_max: float = COND_MAX):
    c = backend.cond(X)
    if not np.isfinite(c) or c > cond_max:
        raise IllConditioned(f"transition matrix condition number {c:.3g} exceeds {cond_max:.3g}", c)
    Xinv = backend.inv(X)
    H = backend.ctranspose(Xinv) @ backend.diag(list(delta)) @ Xinv
    return H, Xinv


def monodromy_generators(X: np.ndarray, Xinv: np.ndarray, mu_list, backend: Backend):
    d = len(mu_list[0].mu if isinstance(mu_list[0], SolutionPoint) else mu_list[0])
    gens = []
    for j in range(d):
        e = [int(k == j) for k in range(d)]
        chi = backend.diag([backend.phase(p) for p in build_chi(mu_list, e)])
        gens.append((j, X @ chi @ Xinv))
    return gens


def verify_invariance(H: np.ndarray, M: np.ndarray) -> float:
    return Backend.max_abs(np.conj(M).T @ H @ M - H)


def spectrum_residual(M: np.ndarray, phases: Sequence[Phase], backend: Backend) -> float:
    """Largest distance between eigenvalues and target phases under optimal matching."""
    eig = np.array(backend.eigvals(M))
    want = np.array([complex(backend.phase(p)) for p in phases])
    cost = np.abs(eig[:, None] - want[None, :])
    r, c = linear_sum_assignment(cost)
    return float(cost[r, c].max())


def signature(delta: Sequence, H: np.ndarray | None = None, backend: Backend | None = None,
              zero_tol: float = ZERO_EIG_TOL) -> tuple[int, int]:
    """Sign counts of ``delta``, cross-checked against the eigenvalues of ``H``."""
    vals = [float(v) for v in delta]
    if any(v == 0 for v in vals):
        raise DegenerateForm("zero diagonal entry")
    p = sum(v > 0 for v in vals)
    n = sum(v < 0 for v in vals)
    if H is not None:
        backend = backend or Backend()
        eig = backend.eigvalsh(H)
        scale = max(abs(v) for v in eig)
        if any(abs(v) <= zero_tol * scale for v in eig):
            raise DegenerateForm(f"numerically degenerate form, eigenvalues {eig}")
        ep = sum(v > 0 for v in eig)
        en = sum(v < 0 for v in eig)
        if (ep, en) != (p, n):
            raise DegenerateForm(f"eigenvalue signature {(ep, en)} differs from diagonal signature {(p, n)}")
    return p, n


def invariant_form_nullity(generators: Sequence[np.ndarray], tol: float = 1e-8) -> int:
    """Dimension of ``{Y : M^H Y M = Y for every generator}``.

    Reported for information only; a value of 1 means the form is unique up
    to scale for the generators supplied.
    """
    D = generators[0].shape[0]
    gram = np.zeros((D * D, D * D), dtype=complex)
    eye = np.eye(D * D)
    for M in generators:
        M = np.asarray(M, dtype=complex)
        # vec(M^H Y M) = kron(M^T, M^H) vec(Y) for column-major vec
        K = np.kron(M.T, np.conj(M).T) - eye
        gram += np.conj(K).T @ K
    ev = np.linalg.eigvalsh(gram)
    scale = max(1.0, float(np.abs(ev).max()))
    return int(np.sum(ev <= tol * scale))


@dataclass(frozen=True)
class MatsubaraRow:
    mu: tuple[Fraction, ...]
    s1: float
    delta_sign: int
    agree: bool


@dataclass(frozen=True)
class MatsubaraReport:
    applicable: bool
    h_alpha: Fraction
    rows: tuple[MatsubaraRow, ...] = ()

    @property
    def passed(self) -> bool:
        return not self.applicable or all(r.agree for r in self.rows)


def matsubara_compare(sys: SystemData, points: Sequence[SolutionPoint], backend: Backend | None = None) -> MatsubaraReport:
    backend = backend or Backend()
    ha = sys.h_alpha
    if is_integral(ha):
        return MatsubaraReport(False, ha)
    lead = backend.sinpi(-ha)
    lead_sign = 1 if lead > 0 else -1
    rows = []
    for p in points:
        off = [g for i, g in enumerate(p.gamma_mu) if i not in p.indices]
        s1 = backend.sinpi(-sum(off, Fraction(0)))
        for g in off:
            s1 *= backend.sinpi(g)
        s1 = float(s1)
        dsign = 1 if float(delta_entry(p, backend)) > 0 else -1
        s1_sign = 1 if s1 > 0 else -1 if s1 < 0 else 0
        rows.append(MatsubaraRow(p.mu, s1, dsign, s1_sign == dsign * lead_sign))
    return MatsubaraReport(True, ha, tuple(rows))


@dataclass(frozen=True)
class SigmaReport:
    feasible: bool
    sigma: tuple[Fraction, ...] | None = None


def sigma_feasibility(B, gamma0) -> SigmaReport:
    """Look for ``sigma`` with ``gamma0_i < -b_i . sigma`` for every column."""
    B = B.B if hasattr(B, "B") else B
    d = len(B)
    N = len(gamma0)
    # -b_i . sigma > gamma0_i
    G = [[-B[k][i] for k in range(d)] for i in range(N)]
    found = strict_interior_point(G, [Fraction(g) for g in gamma0])
    if found is None:
        return SigmaReport(False)
    sigma = tuple(found[0])
    assert all(Fraction(gamma0[i]) < -dot(sigma, [B[k][i] for k in range(d)]) for i in range(N))
    return SigmaReport(True, sigma)


def tau_differences_in_zonotope(sys: SystemData, tau_list) -> tuple[bool, list]:
    """Check every pairwise difference of the tau list against the open zonotope."""
    Z = Zonotope.of(sys.B)
    bad = []
    seen = set()
    for a in tau_list:
        for b in tau_list:
            diff = tuple(Fraction(x) - Fraction(y) for x, y in zip(a, b))
            if diff in seen:
                continue
            seen.add(diff)
            if not zonotope_contains(Z, diff):
                bad.append(diff)
    return not bad, sorted(bad)


@dataclass
class HermitianPackage:
    cotriangulation: Cotriangulation
    tau_list: list
    points: list
    X_phases: tuple
    X: np.ndarray
    Xinv: np.ndarray
    delta: list
    H: np.ndarray
    generators: list
    signature: tuple[int, int]
    backend: Backend
    cond: float
    tau_hypothesis: bool
    tau_violations: list = field(default_factory=list)

    @property
    def D(self) -> int:
        return len(self.points)

    def hermitian_residual(self) -> float:
        return Backend.max_abs(self.H - np.conj(self.H).T)

    def congruence_residual(self) -> float:
        return Backend.max_abs(np.conj(self.X).T @ self.H @ self.X - self.backend.diag(self.delta))


def hermitian_package(
    sys: SystemData,
    cot: Cotriangulation,
    tau_list,
    precision: int = DOUBLE,
    cond_max: float = COND_MAX,
    require_tau_hypothesis: bool = True,
) -> HermitianPackage:
    """Build the full package for one chamber.

    With ``require_tau_hypothesis`` the pairwise differences of ``tau_list``
    must lie in the open zonotope; otherwise violations are only recorded.
    """
    points = solution_points_for_cotriangulation(sys, cot)
    ok, bad = tau_differences_in_zonotope(sys, tau_list)
    if not ok and require_tau_hypothesis:
        raise TauHypothesisError(f"tau differences outside the open zonotope: {bad}")
    backend = Backend(precision)
    while True:
        X_phases, X = build_X(points, tau_list, backend)
        delta = build_delta(points, backend)
        try:
            H, Xinv = build_H(X, delta, backend, cond_max)
            break
        except IllConditioned:
            if not backend.double:
                raise
            log.info("transition matrix ill-conditioned at %d bits, retrying at %d", backend.bits, QUAD)
            backend = Backend(QUAD)
    cond = backend.cond(X)
    gens = monodromy_generators(X, Xinv, points, backend)
    sig = signature(delta, H, backend)
    return HermitianPackage(
        cotriangulation=cot,
        tau_list=[tuple(Fraction(x) for x in t) for t in tau_list],
        points=points,
        X_phases=X_phases,
        X=X,
        Xinv=Xinv,
        delta=delta,
        H=H,
        generators=gens,
        signature=sig,
        backend=backend,
        cond=cond,
        tau_hypothesis=ok,
        tau_violations=bad,
    )
