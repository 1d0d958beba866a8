"""Exact moments of pulled-back selection polynomials and the cube grid."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Sequence

from .errors import InvalidGrid, InvalidParameter, OutOfCube
from .polycore import (
    ONE_THIRD,
    ProblemInstance,
    RationalPolynomial,
    SelectionVector,
    SignVector,
    as_fraction,
)


@dataclass(frozen=True)
class GridSpec:
    """``L**m`` equal subcubes of ``[0, (n+1)M]**m`` with side ``h``."""

    n: int
    M: Fraction
    m: int
    L: int
    N: int
    h: Fraction

    @property
    def side(self) -> Fraction:
        return (self.n + 1) * self.M

    @property
    def h_upper_bound(self) -> float:
        """The looser cell-side bound ``2(n+1)M 2^(-n/m)``."""
        return 2 * (self.n + 1) * float(self.M) * 2.0 ** (-self.n / self.m)


def cells_per_axis(n: int, m: int) -> int:
    """Largest ``l >= 1`` with ``l**m <= 2**n``, i.e. the integer part of ``2**(n/m)``."""
    target = 1 << n
    lo = max(1, int(2.0 ** (n / m)) - 1)
    while lo > 1 and lo**m > target:
        lo -= 1
    while (lo + 1) ** m <= target:
        lo += 1
    return lo


def make_grid(n: int, M, m: int) -> GridSpec:
    if not 1 <= m <= n:
        raise InvalidGrid(f"need 1 <= m <= n, got m={m}, n={n}")
    M = as_fraction(M)
    L = cells_per_axis(n, m)
    return GridSpec(n=n, M=M, m=m, L=L, N=L**m, h=(n + 1) * M / L)


def basis_moment(i: int, j: int, a) -> Fraction:
    """``integral_0^1 (1 - a - a x)^i x^j dx`` in exact arithmetic."""
    a = as_fraction(a)
    if i < 0 or j < 0:
        raise InvalidParameter("moment indices must be nonnegative")
    if not 0 < a <= ONE_THIRD:
        raise InvalidParameter(f"a={a} outside (0, 1/3]")
    u = 1 - a
    total = Fraction(0)
    for t in range(i + 1):
        total += comb(i, t) * u ** (i - t) * (-a) ** t / (t + j + 1)
    return total


@lru_cache(maxsize=64)
def _basis_table(n: int, a: Fraction, m: int) -> tuple[tuple[Fraction, ...], ...]:
    u = 1 - a
    upow = [Fraction(1)]
    apow = [Fraction(1)]
    for _ in range(n):
        upow.append(upow[-1] * u)
        apow.append(apow[-1] * -a)
    rows = []
    for i in range(n + 1):
        coef = [comb(i, t) * upow[i - t] * apow[t] for t in range(i + 1)]
        rows.append(tuple(sum(coef[t] / (t + j + 1) for t in range(i + 1)) for j in range(m)))
    return tuple(rows)


def basis_table(n: int, a, m: int) -> tuple[tuple[Fraction, ...], ...]:
    """Row ``i`` holds ``mu_{i,0..m-1}``; cached per ``(n, a, m)``."""
    return _basis_table(n, as_fraction(a), m)


def weighted_columns(inst: ProblemInstance, m: int) -> list[tuple[Fraction, ...]]:
    """``w_i = a_i * mu_{i, .}``: the moment contribution of selecting index ``i``."""
    table = basis_table(inst.n, inst.a, m)
    return [tuple(w * mu for mu in row) for w, row in zip(inst.weights, table)]


def _check_m(inst: ProblemInstance, m: int) -> None:
    if not 1 <= m <= inst.n:
        raise InvalidGrid(f"need 1 <= m <= n, got m={m}, n={inst.n}")


def moment_vector(d: SelectionVector, inst: ProblemInstance, m: int) -> tuple[Fraction, ...]:
    _check_m(inst, m)
    cols = weighted_columns(inst, m)
    v = [Fraction(0)] * m
    for bit, col in zip(d.d, cols):
        if bit:
            for j in range(m):
                v[j] += col[j]
    return tuple(v)


def signed_moment_vector(b: SignVector, inst: ProblemInstance, m: int) -> tuple[Fraction, ...]:
    """Moments of the pulled-back difference polynomial ``sum b_i a_i x^i``."""
    _check_m(inst, m)
    cols = weighted_columns(inst, m)
    v = [Fraction(0)] * m
    for s, col in zip(b.b, cols):
        if s:
            for j in range(m):
                v[j] += s * col[j]
    return tuple(v)


def polynomial_moments(P: RationalPolynomial, count: int) -> tuple[Fraction, ...]:
    """``integral_0^1 P(x) x^j dx`` for ``j < count``."""
    return tuple(
        sum((c / (t + j + 1) for t, c in enumerate(P.coeffs)), Fraction(0)) for j in range(count)
    )


def quantize(v: Sequence[Fraction], g: GridSpec) -> tuple[int, ...]:
    """Half-open cells ``[k h, (k+1) h)``; the top face belongs to cell ``L - 1``."""
    if len(v) != g.m:
        raise InvalidGrid(f"moment vector has {len(v)} entries, grid has m={g.m}")
    side = g.side
    out = []
    for x in v:
        if x < 0 or x > side:
            raise OutOfCube(f"moment {x} outside [0, {side}]")
        out.append(min(math.floor(x / g.h), g.L - 1))
    return tuple(out)


def cell_key(idx: Sequence[int], L: int) -> int:
    key = 0
    for c in reversed(idx):
        key = key * L + c
    return key
