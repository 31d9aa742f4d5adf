"""Exact phases and the floating-point backends they are materialized in.

A :class:`Phase` stores ``q mod 1`` for the unit complex number
``exp(2 pi i q)``; products of phases are sums of rationals and stay exact.
Only at the very end are phases turned into complex numbers, either as
numpy ``complex128`` (53 bits) or as mpmath values at a higher working
precision.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering

import numpy as np
from mpmath.ctx_mp import MPContext

PRECISION_ENV = "GKZHERM_PRECISION"
DOUBLE = 53
QUAD = 113


def default_precision() -> int:
    raw = os.environ.get(PRECISION_ENV)
    return int(raw) if raw else DOUBLE


@total_ordering
@dataclass(frozen=True)
class Phase:
    value: Fraction

    def __post_init__(self):
        q = Fraction(self.value)
        object.__setattr__(self, "value", q - math.floor(q))

    def __mul__(self, other: "Phase") -> "Phase":
        return Phase(self.value + other.value)

    def __truediv__(self, other: "Phase") -> "Phase":
        return Phase(self.value - other.value)

    def __pow__(self, k: int) -> "Phase":
        return Phase(self.value * k)

    def __lt__(self, other: "Phase") -> bool:
        return self.value < other.value

    def conj(self) -> "Phase":
        return Phase(-self.value)

    @property
    def is_one(self) -> bool:
        return self.value == 0


class Backend:
    """Complex linear algebra at a fixed binary precision."""

    def __init__(self, bits: int = DOUBLE):
        self.bits = bits
        self.double = bits <= DOUBLE
        if not self.double:
            self.mp = MPContext()
            self.mp.prec = bits

    def __repr__(self):
        return f"Backend(bits={self.bits})"

    # scalars
    def expi2pi(self, q: Fraction):
        q = Fraction(q) % 1
        if self.double:
            if q in _EXACT:
                return _EXACT[q]
            return complex(math.cos(2 * math.pi * q), math.sin(2 * math.pi * q))
        return self.mp.expjpi(2 * self.mp.mpf(q.numerator) / q.denominator)

    def phase(self, p: Phase):
        return self.expi2pi(p.value)

    def sinpi(self, q: Fraction):
        q = Fraction(q) % 2
        if self.double:
            if q.denominator == 1:
                return 0.0
            if q.denominator == 2:
                return 1.0 if q < 1 else -1.0
            return math.sin(math.pi * q)
        return self.mp.sinpi(self.mp.mpf(q.numerator) / q.denominator)

    def real(self, x) -> float:
        return float(x.real) if self.double else float(self.mp.re(x))

    # matrices
    def array(self, rows) -> np.ndarray:
        if self.double:
            return np.array(rows, dtype=complex)
        return np.array([[self.mp.mpc(v) for v in r] for r in rows], dtype=object)

    def phases(self, rows) -> np.ndarray:
        return self.array([[self.phase(p) for p in r] for r in rows])

    def diag(self, values) -> np.ndarray:
        n = len(values)
        zero = 0.0 if self.double else self.mp.mpc(0)
        return self.array([[values[i] if i == j else zero for j in range(n)] for i in range(n)])

    def _to_mp(self, X):
        return self.mp.matrix([[X[i, j] for j in range(X.shape[1])] for i in range(X.shape[0])])

    def _from_mp(self, M) -> np.ndarray:
        return np.array([[M[i, j] for j in range(M.cols)] for i in range(M.rows)], dtype=object)

    def inv(self, X: np.ndarray) -> np.ndarray:
        if self.double:
            return np.linalg.inv(X)
        return self._from_mp(self.mp.inverse(self._to_mp(X)))

    def cond(self, X: np.ndarray) -> float:
        if self.double:
            return float(np.linalg.cond(X))
        s = self.mp.svd_c(self._to_mp(X), compute_uv=False)
        vals = [s[i] for i in range(s.rows)]
        return float(max(vals) / min(vals)) if min(vals) != 0 else math.inf

    def eigvals(self, X: np.ndarray) -> list[complex]:
        if self.double:
            return [complex(v) for v in np.linalg.eigvals(X)]
        return [complex(v) for v in self.mp.eig(self._to_mp(X))[0]]

    def eigvalsh(self, H: np.ndarray) -> list[float]:
        Hs = (H + self.ctranspose(H)) / 2
        if self.double:
            return [float(v) for v in np.linalg.eigvalsh(Hs)]
        E = self.mp.eighe(self._to_mp(Hs))[0]
        return sorted(float(E[i]) for i in range(E.rows))

    @staticmethod
    def ctranspose(X: np.ndarray) -> np.ndarray:
        return np.conj(X).T

    @staticmethod
    def max_abs(X: np.ndarray) -> float:
        return float(max((abs(v) for v in np.ravel(X)), default=0.0))

    def to_complex(self, X: np.ndarray) -> np.ndarray:
        return np.array([[complex(v) for v in r] for r in X], dtype=complex)


_EXACT = {Fraction(0): 1 + 0j, Fraction(1, 4): 1j, Fraction(1, 2): -1 + 0j, Fraction(3, 4): -1j}
