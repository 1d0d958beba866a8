"""Exact sign-change certification and the multiplicity-at-one explorer.

A sign change of ``P`` in an open interval is an interior root of odd
multiplicity. Roots are isolated with Sturm sequences of the squarefree part
(integer coefficients, content stripped at every step) and then classified by
the exact signs of ``P`` at the rational ends of each isolating interval.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import _intpoly as ip
from .errors import ChainViolation, ZeroPolynomial
from .polycore import RationalPolynomial, SignVector, as_fraction

Interval = tuple[Fraction, Fraction]


@dataclass(frozen=True)
class SignChangeCertificate:
    """``count`` odd-multiplicity roots of ``P`` in the open ``interval``.

    ``witnesses`` are disjoint, increasing open intervals strictly inside the
    target; ``P`` has opposite nonzero signs at the two ends of each.
    ``endpoint_roots`` lists rational roots sitting on the target's ends
    (they are excluded from the count).
    """

    count: int
    witnesses: tuple[Interval, ...]
    interval: Interval
    endpoint_roots: tuple[Fraction, ...] = ()

    @property
    def midpoints(self) -> tuple[Fraction, ...]:
        return tuple((lo + hi) / 2 for lo, hi in self.witnesses)

    @property
    def max_width(self) -> Fraction:
        return max((hi - lo for lo, hi in self.witnesses), default=Fraction(0))


def _int_form(P: RationalPolynomial) -> list[int]:
    if P.is_zero:
        raise ZeroPolynomial("polynomial is identically zero")
    return ip.from_rationals(P.coeffs)[1]


def squarefree_part(P: RationalPolynomial) -> RationalPolynomial:
    """``P / gcd(P, P')`` as a primitive integer polynomial with positive leading coefficient."""
    return RationalPolynomial(ip.squarefree(_int_form(P)))


def _strip_endpoint_roots(f: list[int], ends: Sequence[Fraction]) -> tuple[list[int], list[Fraction]]:
    hit = []
    for e in ends:
        if len(f) > 1 and ip.sign_at(f, e) == 0:
            f = ip.normalize(ip.divmod_exact(f, ip.root_factor(e)))
            hit.append(e)
    return f, hit


def _check_interval(alpha, beta) -> tuple[Fraction, Fraction]:
    alpha, beta = as_fraction(alpha), as_fraction(beta)
    if not alpha < beta:
        raise ValueError(f"empty interval ({alpha}, {beta})")
    return alpha, beta


def sturm_count(P: RationalPolynomial, interval) -> int:
    """Number of distinct real roots of ``P`` in the open interval."""
    alpha, beta = _check_interval(*interval)
    f = ip.squarefree(_int_form(P))
    f, _ = _strip_endpoint_roots(f, (alpha, beta))
    if len(f) <= 1:
        return 0
    chain = ip.sturm_chain(f)
    return ip.variations(chain, alpha) - ip.variations(chain, beta)


def _split_point(f: list[int], lo: Fraction, hi: Fraction) -> Fraction:
    """A rational near the midpoint of ``(lo, hi)`` where ``f`` does not vanish."""
    mid = (lo + hi) / 2
    if ip.sign_at(f, mid):
        return mid
    w = hi - lo
    for j in itertools.count(3):
        for cand in (mid + w / 2**j, mid - w / 2**j):
            if ip.sign_at(f, cand):
                return cand


def isolate_roots(f: list[int], alpha: Fraction, beta: Fraction) -> list[Interval]:
    """Isolating intervals for the roots of squarefree ``f`` in ``(alpha, beta)``.

    ``f`` must not vanish at the ends. Every returned interval has
    non-root rational ends and contains exactly one root.
    """
    if len(f) <= 1:
        return []
    chain = ip.sturm_chain(f)
    var = {alpha: ip.variations(chain, alpha), beta: ip.variations(chain, beta)}
    out = []
    stack = [(alpha, beta)]
    while stack:
        lo, hi = stack.pop()
        cnt = var[lo] - var[hi]
        if cnt == 0:
            continue
        if cnt == 1:
            out.append((lo, hi))
            continue
        mid = _split_point(f, lo, hi)
        var[mid] = ip.variations(chain, mid)
        stack.append((mid, hi))
        stack.append((lo, mid))
    out.sort()
    return out


def _shrink_inside(f, lo, hi, alpha, beta) -> Interval:
    """Pull ends that touch the target's boundary strictly inside, keeping the root."""
    s_lo, s_hi = ip.sign_at(f, lo), ip.sign_at(f, hi)
    while lo == alpha or hi == beta:
        mid = (lo + hi) / 2
        s = ip.sign_at(f, mid)
        if s == 0:
            return (lo + mid) / 2, (mid + hi) / 2
        if lo == alpha:
            if s == s_lo:
                lo = mid
            else:
                hi, s_hi = mid, s
        else:
            if s == s_hi:
                hi = mid
            else:
                lo, s_lo = mid, s
    return lo, hi


def count_sign_changes(P: RationalPolynomial, interval) -> SignChangeCertificate:
    alpha, beta = _check_interval(*interval)
    p = _int_form(P)
    f = ip.squarefree(p)
    f, endpoint_roots = _strip_endpoint_roots(f, (alpha, beta))
    witnesses = []
    for lo, hi in isolate_roots(f, alpha, beta):
        # f is squarefree, so it flips sign across its single root in (lo, hi)
        lo, hi = _shrink_inside(f, lo, hi, alpha, beta)
        if ip.sign_at(p, lo) * ip.sign_at(p, hi) < 0:
            witnesses.append((lo, hi))
    return SignChangeCertificate(len(witnesses), tuple(witnesses), (alpha, beta), tuple(endpoint_roots))


def refine_witnesses(P: RationalPolynomial, cert: SignChangeCertificate, width) -> SignChangeCertificate:
    """Bisect each witness until it is narrower than ``width``."""
    width = as_fraction(width)
    p = _int_form(P)
    out = []
    for lo, hi in cert.witnesses:
        s_lo = ip.sign_at(p, lo)
        while hi - lo >= width:
            mid = (lo + hi) / 2
            s = ip.sign_at(p, mid)
            if s == 0:
                # the single root is rational and equals mid
                delta = min(width, hi - lo) / 4
                lo, hi = mid - delta, mid + delta
                break
            if s == s_lo:
                lo = mid
            else:
                hi = mid
        out.append((lo, hi))
    return SignChangeCertificate(cert.count, tuple(out), cert.interval, cert.endpoint_roots)


def verify_sign_certificate(P: RationalPolynomial, cert: SignChangeCertificate) -> None:
    """Re-derive the certificate's claims from ``P``; raise ``ChainViolation`` on mismatch."""
    alpha, beta = cert.interval
    p = _int_form(P)
    prev = alpha
    for lo, hi in cert.witnesses:
        if not (prev <= lo < hi < beta) or lo <= alpha:
            raise ChainViolation("sign_changes", f"witness ({lo}, {hi}) misplaced")
        if ip.sign_at(p, lo) * ip.sign_at(p, hi) >= 0:
            raise ChainViolation("sign_changes", f"no sign flip across ({lo}, {hi})")
        prev = hi
    if len(cert.witnesses) != cert.count:
        raise ChainViolation("sign_changes", "count differs from number of witnesses")
    if count_sign_changes(P, cert.interval).count != cert.count:
        raise ChainViolation("sign_changes", "recomputed count differs")


def multiplicity_at_one(P: RationalPolynomial) -> int:
    """Largest ``k`` with ``(x - 1)**k`` dividing ``P``, by repeated synthetic division."""
    if P.is_zero:
        raise ZeroPolynomial("polynomial is identically zero")
    return _mult_one(list(P.coeffs))


def _mult_one(coeffs: list) -> int:
    k = 0
    c = list(coeffs)
    while len(c) > 1:
        # synthetic division by (x - 1), highest degree first
        acc = 0
        quot = []
        for x in reversed(c):
            acc = acc + x
            quot.append(acc)
        if quot[-1] != 0:
            break
        quot.pop()
        c = quot[::-1]
        k += 1
    return k


@dataclass(frozen=True)
class MultiplicityResult:
    n: int
    k: int
    witness: SignVector
    exact: bool
    nodes: int


def _normalize_sign(b: Sequence[int]) -> tuple[int, ...]:
    first = next(x for x in b if x)
    return tuple(b) if first > 0 else tuple(-x for x in b)


def max_multiplicity_search(
    n: int, budget: int = 10**7, exhaustive_limit: int = 3**11, mode: str = "auto"
) -> MultiplicityResult:
    """Largest multiplicity at 1 over nonzero polynomials of degree <= n with coefficients in {-1, 0, 1}.

    ``mode='auto'`` enumerates everything when ``3**(n+1) <= exhaustive_limit``
    and otherwise runs a depth-first search pruned by the conditions
    ``sum_j b_j j**i = 0``. A search that hits ``budget`` nodes returns the
    best value found with ``exact=False``.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    if mode == "auto":
        mode = "exhaustive" if 3 ** (n + 1) <= exhaustive_limit else "dfs"
    if mode == "exhaustive":
        return _multiplicity_exhaustive(n)
    if mode == "dfs":
        return _multiplicity_dfs(n, budget)
    raise ValueError(f"unknown mode {mode!r}")


def _multiplicity_exhaustive(n: int) -> MultiplicityResult:
    best_k, best = -1, None
    nodes = 0
    for b in itertools.product((0, 1, -1), repeat=n + 1):
        nz = next((x for x in b if x), 0)
        if nz != 1:
            continue  # skip zero and the negated copies
        nodes += 1
        k = _mult_one(list(b))
        if k > best_k:
            best_k, best = k, b
    return MultiplicityResult(n, best_k, SignVector(best), True, nodes)


def _multiplicity_dfs(n: int, budget: int) -> MultiplicityResult:
    best = MultiplicityResult(n, 0, SignVector((1,) + (0,) * n), True, 0)
    nodes_total = 0
    k = 1
    while True:
        found, nodes, complete = _dfs_feasible(n, k, budget - nodes_total)
        nodes_total += nodes
        if found is not None:
            best = MultiplicityResult(n, k, SignVector(_normalize_sign(found)), True, nodes_total)
            k += 1
            continue
        exact = complete
        return MultiplicityResult(n, best.k, best.witness, exact, nodes_total)


def _dfs_feasible(n: int, k: int, budget: int):
    """Search b in {-1,0,1}^(n+1), b != 0, with sum_j b_j j^i = 0 for all i < k."""
    # remaining[j][i] = sum_{t < j} t^i bounds what indices below j can still cancel
    remaining = [[0] * k for _ in range(n + 2)]
    for j in range(1, n + 2):
        for i in range(k):
            remaining[j][i] = remaining[j - 1][i] + (j - 1) ** i
    powers = [[j**i for i in range(k)] for j in range(n + 1)]
    b = [0] * (n + 1)
    nodes = 0
    exhausted = False

    def rec(j: int, sums: list[int], started: bool):
        nonlocal nodes, exhausted
        if exhausted:
            return False
        nodes += 1
        if nodes > budget:
            exhausted = True
            return False
        rem = remaining[j + 1] if j >= 0 else remaining[0]
        for i in range(k):
            if abs(sums[i]) > rem[i]:
                return False
        if j < 0:
            return started and not any(sums)
        choices = (0, 1, -1) if started else (0, 1)
        pw = powers[j]
        for c in choices:
            b[j] = c
            new = [s + c * p for s, p in zip(sums, pw)] if c else sums
            if rec(j - 1, new, started or c != 0):
                return True
        b[j] = 0
        return False

    ok = rec(n, [0] * k, False)
    return (tuple(b) if ok else None), nodes, not exhausted
