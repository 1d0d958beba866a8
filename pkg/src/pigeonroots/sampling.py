"""Seeded random instances. All randomness goes through Philox, keyed by a 64-bit seed."""
from __future__ import annotations

from fractions import Fraction

import numpy as np

from .polycore import ProblemInstance, RationalPolynomial, as_fraction

GENERATOR = "philox"
WEIGHT_DENOMINATOR = 64
_MASK64 = (1 << 64) - 1


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=seed & _MASK64))


def derive_seed(seed: int, index: int) -> int:
    """Independent 64-bit seed for item ``index`` of a run keyed by ``seed``."""
    ss = np.random.SeedSequence([seed & _MASK64, index])
    return int(ss.generate_state(1, np.uint64)[0])


def random_magnitude(rng: np.random.Generator, M, denom: int = WEIGHT_DENOMINATOR) -> Fraction:
    """Uniform on the grid ``1 + (M - 1) j / denom``, ``j = 0..denom``."""
    M = as_fraction(M)
    return 1 + (M - 1) * Fraction(int(rng.integers(0, denom + 1)), denom)


def random_weights(rng: np.random.Generator, n: int, M) -> tuple[Fraction, ...]:
    return tuple(random_magnitude(rng, M) for _ in range(n + 1))


def random_instance(rng: np.random.Generator, n: int, M, a) -> ProblemInstance:
    return ProblemInstance(n, as_fraction(M), random_weights(rng, n, M), a)


def random_form_polynomial(
    rng: np.random.Generator, n: int, M, k: int = 0, density: float = 0.6
) -> RationalPolynomial:
    """Degree <= n, zero below ``x**k``, nonzero ``x**k`` coefficient, every nonzero magnitude in [1, M]."""
    coeffs = [Fraction(0)] * (n + 1)
    for j in range(k, n + 1):
        if j == k or rng.random() < density:
            sign = 1 if rng.random() < 0.5 else -1
            coeffs[j] = sign * random_magnitude(rng, M)
    return RationalPolynomial(coeffs)
