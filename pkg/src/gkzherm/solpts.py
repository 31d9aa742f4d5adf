"""Solution points of each cotriangle and the effective total non-resonance test."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Sequence

from .fan import Cotriangle, Cotriangulation
from .ratlin import SystemData, columns, inverse, vecmat


def frac_part(q: Fraction) -> Fraction:
    return q - math.floor(q)


def is_integral(q: Fraction) -> bool:
    return Fraction(q).denominator == 1


@dataclass(frozen=True)
class SolutionPoint:
    mu: tuple[Fraction, ...]
    cotriangle: Cotriangle
    gamma_mu: tuple[Fraction, ...]

    @property
    def indices(self) -> tuple[int, ...]:
        return self.cotriangle.indices


def shifted_lattice_points(M, shift: Sequence[Fraction]) -> list[tuple[Fraction, ...]]:
    """All ``mu`` in ``[0,1)^k`` with ``shift + mu M`` integral, for a square nonsingular ``M``.

    Enumerates the integer vectors ``m = shift + mu M`` over the image box of
    the half-open unit cube and keeps those whose preimage lands in it.
    """
    k = len(M)
    if k == 0:
        return [()]
    Minv = inverse(M)
    ranges = []
    for j in range(k):
        lo = shift[j] + sum(min(0, M[i][j]) for i in range(k))
        hi = shift[j] + sum(max(0, M[i][j]) for i in range(k))
        ranges.append(range(math.floor(lo), math.ceil(hi) + 1))
    pts = []
    for m in product(*ranges):
        mu = vecmat([mj - sj for mj, sj in zip(m, shift)], Minv)
        if all(0 <= x < 1 for x in mu):
            pts.append(tuple(mu))
    return sorted(set(pts))


def solution_points(sys: SystemData, I: Cotriangle) -> list[SolutionPoint]:
    BI = columns(sys.B, I.indices)
    shift = [sys.gamma0[i] for i in I.indices]
    mus = shifted_lattice_points(BI, shift)
    if len(mus) != I.delta:
        raise ArithmeticError(
            f"cotriangle {I.indices}: found {len(mus)} solution points, expected {I.delta}"
        )
    out = []
    for mu in mus:
        g = sys.gamma_at(mu)
        if not all(is_integral(g[i]) for i in I.indices):
            raise ArithmeticError(f"solution point {mu} not integral on {I.indices}")
        out.append(SolutionPoint(mu, I, g))
    return out


@dataclass(frozen=True)
class ResonanceReport:
    passed: bool
    cotriangle: tuple[int, ...] | None = None
    mu: tuple[Fraction, ...] | None = None
    index: int | None = None

    def describe(self) -> str:
        if self.passed:
            return "effective total non-resonance: pass"
        return (
            f"resonant: cotriangle {self.cotriangle}, mu={tuple(map(str, self.mu))}, "
            f"gamma^mu_{self.index} is an integer"
        )


def check_total_nonresonance(sys: SystemData, cotriangles: Sequence[Cotriangle]) -> ResonanceReport:
    """Every solution point must be integral exactly on its own cotriangle.

    This is the integrality-pattern test only; it does not certify the
    cone-boundary condition on ``alpha``.
    """
    for I in cotriangles:
        for p in solution_points(sys, I):
            for i, g in enumerate(p.gamma_mu):
                if i not in I.indices and is_integral(g):
                    return ResonanceReport(False, I.indices, p.mu, i)
    return ResonanceReport(True)


def solution_points_for_cotriangulation(sys: SystemData, cot: Cotriangulation) -> list[SolutionPoint]:
    out = []
    for I in sorted(cot.cotriangles):
        out.extend(solution_points(sys, I))
    return out
