"""Integer-coefficient polynomial helpers (constant term first).

Everything here works on plain ``list[int]`` so that Sturm chains, gcds and
sign evaluations stay in Python's big integers instead of ``Fraction``.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

IntPoly = list


def trim(p: Sequence[int]) -> list[int]:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def degree(p: Sequence[int]) -> int:
    return len(p) - 1


def content(p: Sequence[int]) -> int:
    g = 0
    for c in p:
        g = gcd(g, c)
        if g == 1:
            break
    return g


def primitive(p: Sequence[int]) -> list[int]:
    """Divide out the positive content; the sign is kept."""
    p = trim(p)
    g = content(p)
    if g > 1:
        p = [c // g for c in p]
    return p


def normalize(p: Sequence[int]) -> list[int]:
    """Primitive part with positive leading coefficient."""
    p = primitive(p)
    if p and p[-1] < 0:
        p = [-c for c in p]
    return p


def from_rationals(coeffs: Sequence[Fraction]) -> tuple[Fraction, list[int]]:
    """Split a rational polynomial as ``scale * prim`` with ``prim`` normalized."""
    coeffs = [Fraction(c) for c in coeffs]
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    if not coeffs:
        return Fraction(0), []
    den = 1
    for c in coeffs:
        den = lcm(den, c.denominator)
    ints = [int(c * den) for c in coeffs]
    prim = normalize(ints)
    scale = Fraction(coeffs[-1]) / prim[-1]
    return scale, prim


def derivative(p: Sequence[int]) -> list[int]:
    return [i * p[i] for i in range(1, len(p))]


def mul(p: Sequence[int], q: Sequence[int]) -> list[int]:
    if not p or not q:
        return []
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return out


def prem(a: Sequence[int], b: Sequence[int]) -> list[int]:
    """Pseudo-remainder: ``lc(b)**(deg a - deg b + 1) * a mod b``."""
    r = trim(a)
    b = trim(b)
    db = len(b) - 1
    if db < 0:
        raise ZeroDivisionError("pseudo-remainder by zero polynomial")
    if len(r) - 1 < db:
        return r
    lb = b[-1]
    steps = len(r) - 1 - db + 1
    for _ in range(steps):
        if len(r) - 1 < db:
            r = [c * lb for c in r]
            continue
        lr = r[-1]
        shift = len(r) - 1 - db
        r = [c * lb for c in r]
        for j, c in enumerate(b):
            r[shift + j] -= lr * c
        r.pop()
        r = trim(r)
    return r


def divmod_exact(a: Sequence[int], b: Sequence[int]) -> list[int]:
    """Quotient ``a / b`` when ``b`` divides ``a`` in Z[x]; raises otherwise."""
    r = trim(a)
    b = trim(b)
    db = len(b) - 1
    if db < 0:
        raise ZeroDivisionError("division by zero polynomial")
    if len(r) - 1 < db:
        if r:
            raise ArithmeticError("inexact polynomial division")
        return []
    q = [0] * (len(r) - db)
    lb = b[-1]
    for shift in range(len(r) - 1 - db, -1, -1):
        c = r[shift + db]
        if c == 0:
            continue
        t, rem = divmod(c, lb)
        if rem:
            raise ArithmeticError("inexact polynomial division")
        q[shift] = t
        for j, bc in enumerate(b):
            r[shift + j] -= t * bc
    if any(r):
        raise ArithmeticError("inexact polynomial division")
    return q


def gcd_poly(a: Sequence[int], b: Sequence[int]) -> list[int]:
    """Normalized gcd via the primitive remainder sequence."""
    a, b = normalize(a), normalize(b)
    if not a:
        return b
    if not b:
        return a
    if len(a) < len(b):
        a, b = b, a
    while b:
        r = primitive(prem(a, b))
        a, b = b, r
    return normalize(a)


def squarefree(p: Sequence[int]) -> list[int]:
    p = normalize(p)
    if len(p) <= 2:
        return p
    g = gcd_poly(p, derivative(p))
    if len(g) == 1:
        return p
    return normalize(divmod_exact(p, g))


def squarefree_factors(p: Sequence[int]) -> list[tuple[int, list[int]]]:
    """Return ``[(k, f_k)]`` with ``p = c * prod f_k**k`` and each ``f_k`` squarefree.

    Constant factors are omitted; every ``f_k`` is normalized.
    """
    p = normalize(p)
    chain = [p]
    while len(chain[-1]) > 1:
        g = chain[-1]
        chain.append(gcd_poly(g, derivative(g)))
    # s_i = chain[i-1] / chain[i] collects roots of multiplicity >= i
    s = [normalize(divmod_exact(chain[i - 1], chain[i])) for i in range(1, len(chain))]
    out = []
    for i in range(len(s)):
        nxt = s[i + 1] if i + 1 < len(s) else [1]
        f = normalize(divmod_exact(s[i], nxt))
        if len(f) > 1:
            out.append((i + 1, f))
    return out


def sign_at(p: Sequence[int], x: Fraction) -> int:
    """Sign of ``p(x)`` for rational ``x``, in exact integer arithmetic."""
    if not p:
        return 0
    return _sign(_homogeneous(p, x.numerator, x.denominator))


def _homogeneous(p: Sequence[int], num: int, den: int) -> int:
    d = len(p) - 1
    dpow = 1
    acc = p[d]
    for i in range(d - 1, -1, -1):
        dpow *= den
        acc = acc * num + p[i] * dpow
    return acc


def _sign(v: int) -> int:
    return (v > 0) - (v < 0)


def value_at(p: Sequence[int], x: Fraction) -> Fraction:
    if not p:
        return Fraction(0)
    num, den = x.numerator, x.denominator
    return Fraction(_homogeneous(p, num, den), den ** (len(p) - 1))


def sturm_chain(f: Sequence[int]) -> list[list[int]]:
    """Sturm sequence with content-stripped, sign-correct pseudo-remainders."""
    f = trim(f)
    chain = [f]
    if len(f) <= 1:
        return chain
    chain.append(primitive(derivative(f)))
    while len(chain[-1]) > 1:
        a, b = chain[-2], chain[-1]
        r = prem(a, b)
        if not r:
            break
        # prem multiplies by lc(b)^e; flip if that factor is negative
        e = len(a) - len(b) + 1
        if b[-1] < 0 and e % 2 == 1:
            r = [-c for c in r]
        chain.append([-c for c in primitive(r)])
    return chain


def variations(chain: Sequence[Sequence[int]], x: Fraction) -> int:
    num, den = x.numerator, x.denominator
    count = 0
    prev = 0
    for p in chain:
        s = _sign(_homogeneous(p, num, den)) if p else 0
        if s:
            if prev and s != prev:
                count += 1
            prev = s
    return count


def root_factor(r: Fraction) -> list[int]:
    """Primitive linear factor vanishing at rational ``r``."""
    return [-r.numerator, r.denominator]
