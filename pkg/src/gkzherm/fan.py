"""Polyhedral geometry of the Gale dual ``B``.

Column indices are 0-based throughout the library; reports shift them to
1-based labels. A convergence direction ``rho`` lies in a cotriangle's cone
``C_I`` iff ``B_I^{-1} rho >= 0``; the rows of ``B_I^{-1}`` are therefore the
inward normals of ``C_I`` and chambers are cut out by the union of these
normals over the cotriangulation.
"""

from __future__ import annotations

import math
import random
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product
from typing import Sequence

from .lp import strict_interior_point
from .ratlin import Matrix, as_matrix, columns, det, dot, inverse, matvec, rank, shape


class NonGenericDirection(ValueError):
    """``rho`` lies on a hyperplane spanned by ``d - 1`` columns of ``B``."""

    def __init__(self, rho, spanning: tuple[int, ...]):
        super().__init__(
            f"non-generic direction {tuple(str(x) for x in rho)}: lies on the "
            f"hyperplane spanned by columns {spanning}"
        )
        self.rho = tuple(rho)
        self.spanning = spanning


class IncompleteEnumeration(RuntimeError):
    pass


def _matrix_of(B) -> Matrix:
    return as_matrix(B.B if hasattr(B, "B") else B)


def primitive(v: Sequence) -> tuple[int, ...]:
    """Scale a nonzero rational vector to the primitive integer vector on its ray."""
    fr = [Fraction(x) for x in v]
    den = math.lcm(*(x.denominator for x in fr))
    ints = [int(x * den) for x in fr]
    g = math.gcd(*ints)
    if g == 0:
        raise ValueError("zero vector has no primitive representative")
    return tuple(x // g for x in ints)


@dataclass(frozen=True, order=True)
class Cotriangle:
    indices: tuple[int, ...]
    delta: int
    signed_det: int = field(compare=False)
    inv: Matrix = field(compare=False, repr=False)

    def coordinates(self, rho: Sequence) -> tuple[Fraction, ...]:
        """Coefficients ``x`` with ``B_I x = rho``."""
        return matvec(self.inv, rho)

    def normals(self) -> list[tuple[int, ...]]:
        return [primitive(row) for row in self.inv]

    def complement(self, N: int) -> tuple[int, ...]:
        return tuple(i for i in range(N) if i not in self.indices)


@dataclass(frozen=True)
class Cotriangulation:
    cotriangles: tuple[Cotriangle, ...]
    witness: tuple[Fraction, ...]

    @property
    def key(self) -> tuple[tuple[int, ...], ...]:
        return tuple(c.indices for c in self.cotriangles)

    @property
    def rank(self) -> int:
        return sum(c.delta for c in self.cotriangles)

    def __contains__(self, indices) -> bool:
        return tuple(indices) in self.key


@dataclass(frozen=True)
class Chamber:
    """A full-dimensional cone of the secondary fan.

    ``facets`` are primitive inward normals ``n`` of the bounding
    hyperplanes (the open chamber is ``n . rho > 0`` for all of them), each
    paired with a rational point in the relative interior of that facet.
    """

    cotriangulation: Cotriangulation
    facets: tuple[tuple[tuple[int, ...], tuple[Fraction, ...]], ...]

    @property
    def key(self):
        return self.cotriangulation.key

    @property
    def witness(self):
        return self.cotriangulation.witness

    def contains(self, rho: Sequence, closed: bool = False) -> bool:
        vals = [dot(n, rho) for n, _ in self.facets]
        return all(v >= 0 for v in vals) if closed else all(v > 0 for v in vals)


@dataclass(frozen=True)
class Wall:
    normal: tuple[int, ...]  # inward for the chamber listed first
    point: tuple[Fraction, ...]
    chambers: tuple[int, int]


@dataclass(frozen=True)
class Zonotope:
    """The open zonotope ``scale * {sum nu_i b_i : 0 < nu_i < 1}``."""

    generators: tuple[tuple[int, ...], ...]
    scale: Fraction = Fraction(1)

    @classmethod
    def of(cls, B, scale=1) -> "Zonotope":
        M = _matrix_of(B)
        d, N = shape(M)
        return cls(tuple(tuple(M[k][i] for k in range(d)) for i in range(N)), Fraction(scale))

    @property
    def dim(self) -> int:
        return len(self.generators[0])

    def bounds(self) -> list[tuple[Fraction, Fraction]]:
        """Open coordinate box containing the zonotope."""
        out = []
        for k in range(self.dim):
            lo = sum(min(0, b[k]) for b in self.generators)
            hi = sum(max(0, b[k]) for b in self.generators)
            out.append((self.scale * lo, self.scale * hi))
        return out


def enumerate_cotriangles(B) -> list[Cotriangle]:
    M = _matrix_of(B)
    d, N = shape(M)
    out = []
    for idx in combinations(range(N), d):
        sub = columns(M, idx)
        D = det(sub)
        if D != 0:
            out.append(Cotriangle(idx, abs(D), D, inverse(sub)))
    return out


def cotriangulation_for_direction(B, rho, cotriangles: Sequence[Cotriangle] | None = None) -> Cotriangulation:
    rho = tuple(Fraction(x) for x in rho)
    if cotriangles is None:
        cotriangles = enumerate_cotriangles(B)
    members = []
    for c in cotriangles:
        x = c.coordinates(rho)
        for k, v in enumerate(x):
            if v == 0:
                spanning = tuple(i for j, i in enumerate(c.indices) if j != k)
                raise NonGenericDirection(rho, spanning)
        if all(v > 0 for v in x):
            members.append(c)
    return Cotriangulation(tuple(sorted(members)), rho)


def _cotriangulation_normals(cot: Cotriangulation) -> list[tuple[int, ...]]:
    seen = []
    for c in cot.cotriangles:
        for n in c.normals():
            if n not in seen:
                seen.append(n)
    return sorted(seen)


def _kernel_vector(rows: Sequence[Sequence[int]], d: int) -> tuple[int, ...]:
    """Generalized cross product of ``d - 1`` integer rows (zero if they are dependent)."""
    return tuple(
        (-1) ** k * det(tuple(tuple(r[j] for j in range(d) if j != k) for r in rows)) for k in range(d)
    )


def extreme_rays(normals: Sequence[tuple[int, ...]], d: int) -> list[tuple[int, ...]]:
    """Primitive extreme rays of the pointed cone ``n . y >= 0`` (all ``n``).

    Every ray is cut out by ``d - 1`` independent tight normals, so trying all
    such subsets is exhaustive; it is cheap at the small ``d`` used here.
    """
    rays = set()
    for S in combinations(normals, d - 1):
        v = _kernel_vector(S, d)
        if not any(v):
            continue
        for cand in (v, tuple(-x for x in v)):
            if all(dot(n, cand) >= 0 for n in normals):
                rays.add(primitive(cand))
    return sorted(rays)


def chamber_from(cot: Cotriangulation, d: int) -> Chamber:
    normals = _cotriangulation_normals(cot)
    if d == 1:
        return Chamber(cot, tuple((n, (Fraction(0),)) for n in normals))
    rays = extreme_rays(normals, d)
    if not rays or rank(rays) < d:
        raise ArithmeticError(f"cotriangulation {cot.key} cuts out a lower-dimensional cone")
    facets = []
    for n in normals:
        on = [r for r in rays if dot(n, r) == 0]
        if on and rank(on) == d - 1:
            # the sum of the rays of a face lies in its relative interior
            facets.append((n, tuple(Fraction(sum(r[k] for r in on)) for k in range(d))))
    return Chamber(cot, tuple(facets))


def in_closure(cot: Cotriangulation, rho: Sequence) -> bool:
    return all(x >= 0 for c in cot.cotriangles for x in c.coordinates(rho))


def _is_generic(B, rho, cotriangles) -> bool:
    try:
        cotriangulation_for_direction(B, rho, cotriangles)
    except NonGenericDirection:
        return False
    return True


def _perturbations(d: int) -> list[tuple[int, ...]]:
    vs = [tuple(0 for _ in range(d))]
    vs += [tuple(int(k == j) for k in range(d)) for j in range(d)]
    vs += [tuple(-int(k == j) for k in range(d)) for j in range(d)]
    vs += [tuple(k + 1 for k in range(d)), tuple((k + 1) ** 2 * (-1) ** k for k in range(d))]
    return vs


def cross_facet(B, chamber: Chamber, facet: int, cotriangles, d: int) -> Cotriangulation:
    """Cotriangulation of the chamber on the other side of a facet."""
    n, w = chamber.facets[facet]
    for k in range(1, 60):
        eps = Fraction(1, 2 ** k)
        for v in _perturbations(d):
            rho = tuple(wi - eps * ni + eps * eps * vi for wi, ni, vi in zip(w, n, v))
            try:
                cot = cotriangulation_for_direction(B, rho, cotriangles)
            except NonGenericDirection:
                continue
            if cot.key == chamber.key:
                continue
            if in_closure(cot, w):
                return cot
    raise IncompleteEnumeration(f"could not cross facet {n} of chamber {chamber.key}")


def _angle_key(v: tuple[int, int]):
    x, y = v
    half = 0 if (y > 0 or (y == 0 and x > 0)) else 1
    return (half, Fraction(-x, abs(x) + abs(y)) if half == 0 else Fraction(x, abs(x) + abs(y)))


def _canonical_witness(B, chamber: Chamber, cotriangles, d: int, fallback):
    """A deterministic generic interior direction, independent of how the chamber was found."""
    rays = extreme_rays([n for n, _ in chamber.facets], d)
    y = tuple(sum(r[k] for r in rays) for k in range(d))
    for k in range(1, 40):
        eps = Fraction(1, 2 ** k)
        for v in _perturbations(d):
            rho = tuple(yi + eps * vi for yi, vi in zip(y, v))
            if chamber.contains(rho) and _is_generic(B, rho, cotriangles):
                return primitive(rho)
    return fallback


def enumerate_chambers(B, seed: int = 0, samples: int = 64) -> list[Chamber]:
    """All chambers of the secondary fan, sorted by cotriangulation.

    ``d == 1`` splits by sign and ``d == 2`` walks the rays through the
    columns in angular order. For ``d >= 3`` seeded random integer
    directions are used as seeds and the set is closed under crossing every
    facet of every chamber found, which reaches all chambers because the fan
    is complete and its chamber graph connected.
    """
    M = _matrix_of(B)
    d, N = shape(M)
    if d == 0:
        raise ValueError("degenerate system with d = 0 has no chambers")
    cots = enumerate_cotriangles(M)
    found: dict = {}

    def add(rho):
        cot = cotriangulation_for_direction(M, rho, cots)
        if cot.cotriangles and cot.key not in found:
            found[cot.key] = cot

    if d == 1:
        add((Fraction(1),))
        add((Fraction(-1),))
    elif d == 2:
        rays = set()
        for i in range(N):
            p = primitive((M[0][i], M[1][i]))
            rays.add(p)
            rays.add((-p[0], -p[1]))
        order = sorted(rays, key=_angle_key)
        for u, v in zip(order, order[1:] + order[:1]):
            add(tuple(Fraction(a + b) for a, b in zip(u, v)))
    else:
        rng = random.Random(seed)
        bound = 4 * max(1, max(abs(x) for r in M for x in r))
        tries = 0
        while tries < samples * 10 and len(found) < 1 + samples // 8:
            tries += 1
            rho = tuple(Fraction(rng.randint(-bound, bound)) for _ in range(d))
            if all(x == 0 for x in rho) or not _is_generic(M, rho, cots):
                continue
            add(rho)
    chambers = {k: chamber_from(c, d) for k, c in found.items()}
    if d >= 3:
        queue = deque(sorted(chambers))
        while queue:
            key = queue.popleft()
            ch = chambers[key]
            for f in range(len(ch.facets)):
                cot = cross_facet(M, ch, f, cots, d)
                if cot.key not in chambers:
                    chambers[cot.key] = chamber_from(cot, d)
                    queue.append(cot.key)
        out = []
        for key in sorted(chambers):
            ch = chambers[key]
            w = _canonical_witness(M, ch, cots, d, ch.witness)
            cot = Cotriangulation(ch.cotriangulation.cotriangles, tuple(Fraction(x) for x in w))
            out.append(Chamber(cot, ch.facets))
        return out
    return [chambers[k] for k in sorted(chambers)]


class FanGraph:
    """Chambers as vertices, walls as edges."""

    def __init__(self, chambers: Sequence[Chamber], walls: dict[tuple[int, int], Wall]):
        self.chambers = list(chambers)
        self.walls = walls
        self.neighbors: dict[int, set[int]] = {i: set() for i in range(len(chambers))}
        for i, j in walls:
            self.neighbors[i].add(j)
            self.neighbors[j].add(i)

    @property
    def edges(self) -> list[tuple[int, int]]:
        return sorted(self.walls)

    def wall(self, i: int, j: int) -> Wall:
        if (i, j) in self.walls:
            return self.walls[(i, j)]
        if (j, i) in self.walls:
            w = self.walls[(j, i)]
            return Wall(tuple(-x for x in w.normal), w.point, (i, j))
        raise KeyError(f"chambers {i} and {j} are not adjacent")

    def adjacent(self, i: int, j: int) -> bool:
        return j in self.neighbors[i]

    def is_connected(self) -> bool:
        return len(self._bfs(0)) == len(self.chambers) if self.chambers else True

    def _bfs(self, start: int) -> dict[int, int | None]:
        parent: dict[int, int | None] = {start: None}
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for v in sorted(self.neighbors[u]):
                if v not in parent:
                    parent[v] = u
                    queue.append(v)
        return parent

    def path(self, i: int, j: int) -> list[int]:
        """Shortest sequence of pairwise adjacent chambers from ``i`` to ``j``."""
        parent = self._bfs(i)
        if j not in parent:
            raise IncompleteEnumeration(f"no path between chambers {i} and {j}")
        out = [j]
        while out[-1] != i:
            out.append(parent[out[-1]])
        return out[::-1]


def adjacency_graph(B, chambers: Sequence[Chamber]) -> FanGraph:
    M = _matrix_of(B)
    d = len(M)
    cots = enumerate_cotriangles(M)
    index = {c.key: k for k, c in enumerate(chambers)}
    walls: dict[tuple[int, int], Wall] = {}
    for i, ch in enumerate(chambers):
        for f, (n, w) in enumerate(ch.facets):
            if d == 1:
                rho = (-ch.witness[0],)
                other = cotriangulation_for_direction(M, rho, cots)
            else:
                other = cross_facet(M, ch, f, cots, d)
            if other.key not in index:
                raise IncompleteEnumeration(
                    f"incomplete chamber enumeration: neighbor {other.key} of {ch.key} missing"
                )
            j = index[other.key]
            if i < j and (i, j) not in walls:
                walls[(i, j)] = Wall(n, w, (i, j))
    graph = FanGraph(chambers, walls)
    if not graph.is_connected():
        raise IncompleteEnumeration("incomplete chamber enumeration: fan graph disconnected")
    return graph


def zonotope_witness(Z: Zonotope, tau: Sequence) -> tuple[Fraction, ...] | None:
    """Coefficients ``0 < nu_i < 1`` with ``scale * sum nu_i b_i = tau``, or None."""
    return _zonotope_witness(Z, tuple(Fraction(x) for x in tau))


@lru_cache(maxsize=1 << 16)
def _zonotope_witness(Z: Zonotope, tau: tuple[Fraction, ...]):
    N = len(Z.generators)
    G = [[int(k == i) for k in range(N)] for i in range(N)]
    G += [[-int(k == i) for k in range(N)] for i in range(N)]
    h = [0] * N + [-1] * N
    E = [[Z.scale * b[k] for b in Z.generators] for k in range(Z.dim)]
    found = strict_interior_point(G, h, E, tau)
    return None if found is None else found[0]


def zonotope_contains(Z: Zonotope, tau: Sequence) -> bool:
    return zonotope_witness(Z, tau) is not None


def enumerate_tau(Z: Zonotope, offset: Sequence) -> list[tuple[Fraction, ...]]:
    """All points ``offset + k``, ``k`` integral, inside the open zonotope, lexicographically sorted."""
    offset = [Fraction(x) for x in offset]
    ranges = []
    for (lo, hi), o in zip(Z.bounds(), offset):
        first = math.floor(lo - o) + 1
        last = math.ceil(hi - o) - 1
        ranges.append(range(first, last + 1))
    pts = []
    for k in product(*ranges):
        tau = tuple(o + m for o, m in zip(offset, k))
        if zonotope_contains(Z, tau):
            pts.append(tau)
    return sorted(pts)


def wall_cotriangles(I: Cotriangulation, J: Cotriangulation) -> tuple[list[Cotriangle], list[Cotriangle]]:
    """Cotriangles of each side whose cones have the common wall as a face."""
    only_i = [c for c in I.cotriangles if c.indices not in J.key]
    only_j = [c for c in J.cotriangles if c.indices not in I.key]
    return only_i, only_j


def check_wall_characterization(B, wall: Wall, I: Cotriangulation, J: Cotriangulation) -> bool:
    """Every wall cotriangle has exactly ``d - 1`` columns on the wall hyperplane
    and shares those with a cotriangle on the other side."""
    M = _matrix_of(B)
    d = len(M)
    col = lambda i: tuple(M[k][i] for k in range(d))
    side_i, side_j = wall_cotriangles(I, J)

    def on_wall(c):
        return tuple(i for i in c.indices if dot(wall.normal, col(i)) == 0)

    for mine, theirs in ((side_i, side_j), (side_j, side_i)):
        for c in mine:
            K = on_wall(c)
            if len(K) != d - 1:
                return False
            if not any(set(K) <= set(o.indices) for o in theirs):
                return False
    return True
