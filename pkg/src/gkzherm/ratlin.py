"""Exact integer and rational linear algebra, and the system data built on it.

Matrices are plain tuples of row tuples holding ``int`` or
:class:`fractions.Fraction` entries. Everything here is exact; nothing is
ever rounded.

The Hermite normal form convention is row-style: ``U @ M = H`` with ``U``
unimodular, the pivot of each nonzero row strictly right of the pivot of the
row above, pivots positive, and entries above a pivot reduced into
``[0, pivot)``. Zero rows come last.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

Rational = Fraction
Matrix = tuple  # tuple[tuple[int | Fraction, ...], ...]


class SystemDataError(ValueError):
    """Raised when (B, gamma0) does not describe a valid system.

    ``kind`` is a short machine-readable tag, ``index`` the offending row or
    column (0-based) when there is one.
    """

    def __init__(self, message: str, kind: str, index: int | None = None):
        super().__init__(message)
        self.kind = kind
        self.index = index


class RankDeficientError(ValueError):
    def __init__(self, message: str, rank: int, witness: tuple | None = None):
        super().__init__(message)
        self.rank = rank
        self.witness = witness


def to_fraction(value) -> Fraction:
    """Parse an int, Fraction or ``"p/q"`` string exactly.

    Floats are refused: they would smuggle a binary rounding into exact data.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if not text:
            raise ValueError("empty rational")
        if "/" in text:
            num, den = text.split("/", 1)
            int(num), int(den)  # reject "1.5/2" and friends
        else:
            int(text)
        return Fraction(text)
    raise TypeError(f"cannot read {value!r} as an exact rational")


def frac_str(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def as_matrix(rows: Iterable[Iterable]) -> Matrix:
    m = tuple(tuple(r) for r in rows)
    if m and len({len(r) for r in m}) != 1:
        raise ValueError("ragged matrix")
    return m


def shape(M: Matrix) -> tuple[int, int]:
    return (len(M), len(M[0]) if M else 0)


def identity(n: int) -> Matrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def transpose(M: Matrix) -> Matrix:
    return tuple(zip(*M)) if M else ()


def matmul(P: Matrix, Q: Matrix) -> Matrix:
    Qt = transpose(Q)
    return tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in Qt) for row in P)


def matvec(M: Matrix, v: Sequence) -> tuple:
    return tuple(sum(a * b for a, b in zip(row, v)) for row in M)


def vecmat(v: Sequence, M: Matrix) -> tuple:
    """Row vector times matrix."""
    return tuple(sum(v[i] * M[i][j] for i in range(len(v))) for j in range(len(M[0])))


def dot(u: Sequence, v: Sequence):
    return sum(a * b for a, b in zip(u, v))


def columns(M: Matrix, idx: Sequence[int]) -> Matrix:
    return tuple(tuple(row[j] for j in idx) for row in M)


def det(M: Matrix):
    """Exact determinant. Integer input stays integer (Bareiss)."""
    n = len(M)
    if n == 0:
        return 1
    if any(len(r) != n for r in M):
        raise ValueError("determinant of a non-square matrix")
    if all(isinstance(x, int) for r in M for x in r):
        return _bareiss(M)
    a = [[Fraction(x) for x in r] for r in M]
    sign = 1
    result = Fraction(1)
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        result *= a[k][k]
        for i in range(k + 1, n):
            f = a[i][k] / a[k][k]
            if f:
                for j in range(k, n):
                    a[i][j] -= f * a[k][j]
    return sign * result


def _bareiss(M: Matrix) -> int:
    a = [list(r) for r in M]
    n = len(a)
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def row_echelon(M: Matrix) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q and the pivot columns."""
    a = [[Fraction(x) for x in r] for r in M]
    rows, cols = shape(M)
    pivots: list[int] = []
    p = 0
    for j in range(cols):
        piv = next((i for i in range(p, rows) if a[i][j] != 0), None)
        if piv is None:
            continue
        a[p], a[piv] = a[piv], a[p]
        inv = 1 / a[p][j]
        a[p] = [x * inv for x in a[p]]
        for i in range(rows):
            if i != p and a[i][j] != 0:
                f = a[i][j]
                a[i] = [x - f * y for x, y in zip(a[i], a[p])]
        pivots.append(j)
        p += 1
        if p == rows:
            break
    return a, pivots


def rank(M: Matrix) -> int:
    if not M or not M[0]:
        return 0
    return len(row_echelon(M)[1])


def inverse(M: Matrix) -> Matrix:
    n = len(M)
    aug = tuple(tuple(M[i]) + identity(n)[i] for i in range(n))
    red, pivots = row_echelon(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return tuple(tuple(red[i][n:]) for i in range(n))


def solve(M: Matrix, b: Sequence) -> tuple[Fraction, ...]:
    """Solve the square system ``M x = b`` exactly."""
    n = len(M)
    aug = tuple(tuple(M[i]) + (b[i],) for i in range(n))
    red, pivots = row_echelon(aug)
    if pivots != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return tuple(red[i][n] for i in range(n))


def solve_left(v: Sequence, M: Matrix) -> tuple[Fraction, ...] | None:
    """A rational row vector ``x`` with ``x @ M = v``, or None if none exists."""
    rows, cols = shape(M)
    aug = tuple(tuple(M[i][j] for i in range(rows)) + (v[j],) for j in range(cols))
    red, pivots = row_echelon(aug)
    if rows in pivots:
        return None
    x = [Fraction(0)] * rows
    for r, pc in enumerate(pivots):
        x[pc] = red[r][rows]
    return tuple(x)


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def hermite_normal_form(M: Matrix) -> tuple[Matrix, Matrix]:
    """Row-style Hermite normal form ``H`` with a unimodular ``U``, ``U M = H``."""
    rows, cols = shape(M)
    if rows == 0 or all(x == 0 for r in M for x in r):
        raise ValueError("hermite_normal_form needs a nonzero matrix")
    H = [list(map(int, r)) for r in M]
    U = [list(r) for r in identity(rows)]
    p = 0
    for j in range(cols):
        if p == rows:
            break
        for i in range(p + 1, rows):
            b = H[i][j]
            if b == 0:
                continue
            a = H[p][j]
            g, s, t = _xgcd(a, b)
            ag, bg = a // g, b // g
            for X in (H, U):
                rp, ri = X[p], X[i]
                X[p] = [s * u + t * v for u, v in zip(rp, ri)]
                X[i] = [-bg * u + ag * v for u, v in zip(rp, ri)]
        if H[p][j] == 0:
            continue
        if H[p][j] < 0:
            H[p] = [-x for x in H[p]]
            U[p] = [-x for x in U[p]]
        piv = H[p][j]
        for i in range(p):
            q = H[i][j] // piv
            if q:
                H[i] = [u - q * v for u, v in zip(H[i], H[p])]
                U[i] = [u - q * v for u, v in zip(U[i], U[p])]
        p += 1
    return as_matrix(H), as_matrix(U)


def saturated_integer_kernel(M: Matrix) -> Matrix:
    """A Z-basis (rows, in Hermite normal form) of ``{v in Z^n : M v = 0}``."""
    rows, cols = shape(M)
    rk = rank(M)
    if rk < rows:
        red, pivots = row_echelon(transpose(M))
        raise RankDeficientError(
            f"matrix has rank {rk} < {rows} rows", rank=rk, witness=tuple(pivots)
        )
    if rows == 0:
        return identity(cols)
    H, U = hermite_normal_form(transpose(M))
    basis = [U[i] for i in range(cols) if all(x == 0 for x in H[i])]
    if len(basis) != cols - rk:
        raise ArithmeticError("kernel dimension mismatch")
    if not basis:
        return ()
    return hermite_normal_form(as_matrix(basis))[0]


def maximal_minor_gcd(M: Matrix) -> int:
    rows, cols = shape(M)
    g = 0
    for idx in combinations(range(cols), rows):
        g = math.gcd(g, det(columns(M, idx)))
        if g == 1:
            return 1
    return abs(g)


@dataclass(frozen=True)
class SystemData:
    """The Gale dual ``B`` with base parameter ``gamma0`` and the data derived from them.

    ``A`` spans the integer kernel of ``B``, ``h`` is the linear form with
    ``h @ A = (1, ..., 1)`` and ``alpha = A gamma0^T``.
    """

    B: Matrix
    gamma0: tuple[Fraction, ...]
    A: Matrix
    alpha: tuple[Fraction, ...]
    h: tuple[Fraction, ...]

    @property
    def N(self) -> int:
        return len(self.gamma0)

    @property
    def d(self) -> int:
        return len(self.B)

    @property
    def r(self) -> int:
        return self.N - self.d

    @property
    def h_alpha(self) -> Fraction:
        return dot(self.h, self.alpha)

    def column(self, i: int) -> tuple[int, ...]:
        return tuple(row[i] for row in self.B)

    def gamma_at(self, mu: Sequence[Fraction]) -> tuple[Fraction, ...]:
        """``gamma0 + mu B``."""
        return tuple(g + dot(mu, self.column(i)) for i, g in enumerate(self.gamma0))


def build_system(B, gamma0) -> SystemData:
    B = as_matrix(B)
    if not B:
        raise SystemDataError("B has no rows", "shape")
    for row in B:
        for x in row:
            if isinstance(x, bool) or not isinstance(x, int):
                raise SystemDataError(f"B entry {x!r} is not an integer", "entry")
    gamma0 = tuple(to_fraction(g) for g in gamma0)
    d, N = shape(B)
    if len(gamma0) != N:
        raise SystemDataError(
            f"gamma0 has length {len(gamma0)}, B has {N} columns", "shape"
        )
    if d >= N:
        raise SystemDataError(f"need d < N, got d={d}, N={N}", "shape")
    for i, row in enumerate(B):
        if sum(row) != 0:
            raise SystemDataError(f"row sum nonzero in row {i}", "row_sum", i)
    rk = rank(B)
    if rk < d:
        raise SystemDataError(f"rows of B are dependent (rank {rk} < {d})", "rank")
    for j in range(N):
        if all(row[j] == 0 for row in B):
            raise SystemDataError(f"column {j} of B is zero", "zero_column", j)
    g = maximal_minor_gcd(B)
    if g != 1:
        raise SystemDataError(
            f"row lattice of B is not saturated (maximal minors have gcd {g})",
            "saturation",
        )
    A = saturated_integer_kernel(B)
    if any(x != 0 for row in matmul(A, transpose(B)) for x in row):
        raise ArithmeticError("A B^T != 0")
    h = solve_left((1,) * N, A)
    if h is None:
        raise SystemDataError("no linear form h with h(a_i) = 1", "linear_form")
    for j, v in enumerate(vecmat(h, A)):
        if v != 1:
            raise SystemDataError(f"h(a_{j}) = {v} != 1", "linear_form", j)
    alpha = matvec(A, gamma0)
    return SystemData(B=B, gamma0=gamma0, A=A, alpha=alpha, h=h)
