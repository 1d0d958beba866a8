"""Exact rational polynomials, the problem frame, and the affine pullback."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Iterable, Sequence

from .errors import IdenticalSelections, InvalidParameter, LengthMismatch

ONE_THIRD = Fraction(1, 3)
FRAME_SLACK = 1e-12


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        return Fraction(x)
    return Fraction(x)


class RationalPolynomial:
    """Dense polynomial with exact ``Fraction`` coefficients, constant term first.

    Trailing zeros are stripped on construction, so the zero polynomial is the
    one with an empty coefficient list.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [as_fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    @classmethod
    def constant(cls, c) -> "RationalPolynomial":
        return cls([c])

    @classmethod
    def x(cls) -> "RationalPolynomial":
        return cls([0, 1])

    @classmethod
    def from_roots(cls, roots: Sequence) -> "RationalPolynomial":
        p = cls([1])
        for r in roots:
            p = p * cls([-as_fraction(r), 1])
        return p

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        """Degree, or -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def leading(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __call__(self, x) -> Fraction:
        return evaluate(self, x)

    def __eq__(self, other) -> bool:
        if isinstance(other, RationalPolynomial):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"RationalPolynomial({[str(c) for c in self.coeffs]})"

    def __add__(self, other: "RationalPolynomial") -> "RationalPolynomial":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return RationalPolynomial(out)

    def __neg__(self) -> "RationalPolynomial":
        return RationalPolynomial([-c for c in self.coeffs])

    def __sub__(self, other: "RationalPolynomial") -> "RationalPolynomial":
        return self + (-other)

    def __mul__(self, other) -> "RationalPolynomial":
        if not isinstance(other, RationalPolynomial):
            s = as_fraction(other)
            return RationalPolynomial([c * s for c in self.coeffs])
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return RationalPolynomial()
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return RationalPolynomial(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "RationalPolynomial":
        if k < 0:
            raise ValueError("negative power")
        out = RationalPolynomial([1])
        for _ in range(k):
            out = out * self
        return out

    def derivative(self) -> "RationalPolynomial":
        return RationalPolynomial([i * c for i, c in enumerate(self.coeffs)][1:])

    def antiderivative(self) -> "RationalPolynomial":
        return RationalPolynomial([0] + [c / (i + 1) for i, c in enumerate(self.coeffs)])

    def abs_coeff_sum(self) -> Fraction:
        return sum((abs(c) for c in self.coeffs), Fraction(0))

    def to_floats(self) -> list[float]:
        return [float(c) for c in self.coeffs]


def evaluate(P: RationalPolynomial, x) -> Fraction:
    """Exact Horner evaluation."""
    x = as_fraction(x)
    acc = Fraction(0)
    for c in reversed(P.coeffs):
        acc = acc * x + c
    return acc


@dataclass(frozen=True)
class ProblemInstance:
    """Degree bound ``n``, cap ``M``, weights ``a_0..a_n`` and window parameter ``a``.

    The window is ``I_a = (1 - 2a, 1 - a)``. Instances outside the theorem's
    frame ``M <= exp(n/9)/4`` are allowed (small-n experiments need them);
    ``in_frame`` reports the check.
    """

    n: int
    M: Fraction
    weights: tuple[Fraction, ...]
    a: Fraction

    def __post_init__(self):
        object.__setattr__(self, "M", as_fraction(self.M))
        object.__setattr__(self, "a", as_fraction(self.a))
        object.__setattr__(self, "weights", tuple(as_fraction(w) for w in self.weights))
        if self.n < 1:
            raise InvalidParameter(f"n must be >= 1, got {self.n}")
        if self.M < 1:
            raise InvalidParameter(f"M must be >= 1, got {self.M}")
        if len(self.weights) != self.n + 1:
            raise LengthMismatch(f"expected {self.n + 1} weights, got {len(self.weights)}")
        for j, w in enumerate(self.weights):
            if not 1 <= w <= self.M:
                raise InvalidParameter(f"weight a_{j}={w} outside [1, {self.M}]")
        if not 0 < self.a <= ONE_THIRD:
            raise InvalidParameter(f"a={self.a} outside (0, 1/3]")

    @classmethod
    def unit(cls, n: int, a) -> "ProblemInstance":
        return cls(n, Fraction(1), (Fraction(1),) * (n + 1), a)

    @property
    def interval(self) -> tuple[Fraction, Fraction]:
        return (1 - 2 * self.a, 1 - self.a)

    @property
    def in_frame(self) -> bool:
        return frame_holds(self.n, self.M)


def frame_holds(n: int, M) -> bool:
    """Float check of ``log M <= log(1/4) + n/9`` with a small slack."""
    return math.log(float(M)) <= math.log(0.25) + n / 9 + FRAME_SLACK


@dataclass(frozen=True)
class SelectionVector:
    d: tuple[int, ...]

    def __post_init__(self):
        d = tuple(int(x) for x in self.d)
        if any(x not in (0, 1) for x in d):
            raise InvalidParameter("selection entries must be 0 or 1")
        object.__setattr__(self, "d", d)

    @classmethod
    def from_int(cls, t: int, length: int) -> "SelectionVector":
        """Bit ``i`` of ``t`` becomes ``d_i`` (lowest index least significant)."""
        return cls(tuple((t >> i) & 1 for i in range(length)))

    def to_int(self) -> int:
        return sum(bit << i for i, bit in enumerate(self.d))

    def __len__(self) -> int:
        return len(self.d)


@dataclass(frozen=True)
class SignVector:
    b: tuple[int, ...]
    k: int | None = field(init=False)

    def __post_init__(self):
        b = tuple(int(x) for x in self.b)
        if any(x not in (-1, 0, 1) for x in b):
            raise InvalidParameter("sign entries must be -1, 0 or 1")
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "k", next((j for j, x in enumerate(b) if x), None))

    @property
    def is_zero(self) -> bool:
        return self.k is None

    def __len__(self) -> int:
        return len(self.b)


def assemble(inst: ProblemInstance, b: SignVector) -> RationalPolynomial:
    """``sum_j b_j a_j x^j``."""
    if len(b) != inst.n + 1:
        raise LengthMismatch(f"sign vector has length {len(b)}, expected {inst.n + 1}")
    return RationalPolynomial([bj * aj for bj, aj in zip(b.b, inst.weights)])


def affine_pullback(P: RationalPolynomial, a) -> RationalPolynomial:
    """Coefficients of ``P(1 - a - a x)`` by binomial expansion."""
    a = as_fraction(a)
    if not 0 < a <= ONE_THIRD:
        raise InvalidParameter(f"a={a} outside (0, 1/3]")
    if P.is_zero:
        return RationalPolynomial()
    u = 1 - a
    deg = P.degree
    out = [Fraction(0)] * (deg + 1)
    upow = [Fraction(1)]
    for _ in range(deg):
        upow.append(upow[-1] * u)
    apow = [Fraction(1)]
    for _ in range(deg):
        apow.append(apow[-1] * -a)
    for i, c in enumerate(P.coeffs):
        if not c:
            continue
        for t in range(i + 1):
            out[t] += c * comb(i, t) * upow[i - t] * apow[t]
    return RationalPolynomial(out)


def difference(
    d1: SelectionVector, d2: SelectionVector, inst: ProblemInstance
) -> tuple[SignVector, RationalPolynomial]:
    if len(d1) != inst.n + 1 or len(d2) != inst.n + 1:
        raise LengthMismatch("selection vectors must have length n + 1")
    if d1.d == d2.d:
        raise IdenticalSelections("difference of identical selections is zero")
    b = SignVector(tuple(x - y for x, y in zip(d1.d, d2.d)))
    return b, assemble(inst, b)


def selection_polynomial(inst: ProblemInstance, d: SelectionVector) -> RationalPolynomial:
    return RationalPolynomial([dj * aj for dj, aj in zip(d.d, inst.weights)])


def fmt_fraction(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def parse_fraction(s: str) -> Fraction:
    return Fraction(s)
