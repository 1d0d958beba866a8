"""Geometric means, log-minus integrals, lemma checkers, bound calculators and
the end-to-end verifier of the collision-to-sign-change argument.

Integrals of ``log|P|`` are split as

    log|P| = log|c| + sum_k k * ( sum_r log|x - r| + g_k(x) )

over the squarefree factorization ``P = c * prod f_k**k``. The real roots
``r`` of each ``f_k`` near the interval are isolated exactly and their
logarithmic singularities integrated in closed form; the smooth remainder
``g_k = log|f_k / prod (x - r)|`` goes to adaptive Gauss-Legendre, evaluated
in exact rational arithmetic at each node so no cancellation occurs next to
a root.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import mpmath

from . import _intpoly as ip
from ._quad import adaptive_gauss_legendre
from .collider import CollisionCertificate, verify_collision
from .errors import ChainViolation, FormViolation, FrameViolation, InvalidParameter, ZeroPolynomial
from .moments import polynomial_moments
from .polycore import (
    ONE_THIRD,
    ProblemInstance,
    RationalPolynomial,
    affine_pullback,
    as_fraction,
    frame_holds,
)
from .rootcert import (
    SignChangeCertificate,
    count_sign_changes,
    isolate_roots,
    refine_witnesses,
    verify_sign_certificate,
)

C1 = 9 * math.pi / math.sqrt(2)
A_DENOMINATOR = 1 << 16
ROOT_BITS = 60
SINGULAR_BITS = 100
QUAD_TOL = 1e-12


@dataclass(frozen=True)
class Constants:
    c1: float = C1

    @property
    def chain_slope(self) -> float:
        return self.c1 + 4 + 1 / 3


@dataclass(frozen=True)
class BoundReport:
    """``lhs <= rhs`` up to ``tolerance``."""

    name: str
    lhs: float
    rhs: float
    holds: bool
    tolerance: float = 0.0
    method: dict = field(default_factory=dict)

    @property
    def margin(self) -> float:
        return self.rhs - self.lhs

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "holds": self.holds,
            "margin": self.margin,
            "tolerance": self.tolerance,
            "method": self.method,
        }


def _report(name, lhs, rhs, tol=0.0, **method) -> BoundReport:
    lhs, rhs, tol = float(lhs), float(rhs), float(tol)
    return BoundReport(name, lhs, rhs, bool(lhs <= rhs + tol), tol, method)


# -- logarithmic integrals ---------------------------------------------------


def _log_abs_int(v: int) -> float:
    return math.log(abs(v))


def _log_abs_fraction(x: Fraction) -> float:
    return math.log(abs(x.numerator)) - math.log(x.denominator)


def _xlogx_antiderivative(t: float) -> float:
    return t * math.log(abs(t)) - t if t else 0.0


def _roots_near(f: list[int], lo: Fraction, hi: Fraction, width: Fraction):
    """Real roots of squarefree ``f`` in ``[lo, hi]``.

    Returns ``(g, exact, approx)``: rational roots met exactly, rational
    approximations (within ``width``) of the others, and ``g`` with
    ``f = g * prod (den_e x - num_e)`` over the exact roots ``e``.
    """
    exact = []
    approx = []
    for e in (lo, hi):
        if len(f) > 1 and ip.sign_at(f, e) == 0:
            exact.append(e)
            f = ip.divmod_exact(f, ip.root_factor(e))
    for a, b in isolate_roots(f, lo, hi):
        s_a = ip.sign_at(f, a)
        while b - a > width:
            mid = (a + b) / 2
            s = ip.sign_at(f, mid)
            if s == 0:
                exact.append(mid)
                break
            if s == s_a:
                a = mid
            else:
                b = mid
        else:
            approx.append((a + b) / 2)
    # endpoint roots are already divided out; interior ones are not
    for e in exact:
        if e not in (lo, hi):
            f = ip.divmod_exact(f, ip.root_factor(e))
    return f, sorted(exact), sorted(approx)


@dataclass(frozen=True)
class LogIntegral:
    value: float
    error: float
    panels: int
    roots: int


def integral_log_abs(P: RationalPolynomial, alpha, beta, tol: float = QUAD_TOL) -> LogIntegral:
    """``integral_alpha^beta log|P(x)| dx`` with an error estimate."""
    alpha, beta = as_fraction(alpha), as_fraction(beta)
    if P.is_zero:
        raise ZeroPolynomial("log of the zero polynomial")
    if not alpha < beta:
        raise InvalidParameter("need alpha < beta")
    length = float(beta - alpha)
    scale, p = ip.from_rationals(P.coeffs)
    if len(p) == 1:
        return LogIntegral(length * _log_abs_fraction(scale * p[0]), 0.0, 0, 0)
    factors = ip.squarefree_factors(p)
    c = Fraction(p[-1])
    for k, f in factors:
        c /= Fraction(f[-1]) ** k
    value = length * _log_abs_fraction(scale * c)
    error = 0.0
    panels = 0
    nroots = 0
    pad = (beta - alpha) / 2
    width = (beta - alpha) / 2**SINGULAR_BITS
    a_f, b_f = float(alpha), float(beta)
    for k, f in factors:
        g, exact, approx = _roots_near(f, alpha - pad, beta + pad, width)
        roots = exact + approx
        nroots += len(roots)
        # den_e x - num_e = den_e (x - e)
        singular = length * sum(math.log(e.denominator) for e in exact) + sum(
            _xlogx_antiderivative(float(beta - r)) - _xlogx_antiderivative(float(alpha - r))
            for r in roots
        )
        deg = len(g) - 1
        rpairs = [(r.numerator, r.denominator) for r in approx]

        def smooth(x: float, g=g, deg=deg, rpairs=rpairs) -> float:
            X = Fraction(x)
            p_, q_ = X.numerator, X.denominator
            val = ip._homogeneous(g, p_, q_)
            if val == 0:
                # x sits on an irrational-looking root's float image; step one ulp
                return smooth(math.nextafter(x, math.inf))
            out = _log_abs_int(val) - deg * math.log(q_)
            for u, v in rpairs:
                out -= _log_abs_int(p_ * v - u * q_) - math.log(q_) - math.log(v)
            return out

        if deg > len(approx):
            smooth_val, smooth_err, used = adaptive_gauss_legendre(smooth, a_f, b_f, tol / len(factors))
        else:
            # g is its leading coefficient times prod (x - r)
            smooth_val, smooth_err, used = length * _log_abs_int(g[-1]), 0.0, 0
        value += k * (singular + smooth_val)
        # moving a log singularity by d changes its integral by at most d (2 + |log d|)
        error += k * (smooth_err + len(approx) * float(width) * (2 + abs(math.log(float(width)))))
        panels += used
    return LogIntegral(value, error, panels, nroots)


@dataclass(frozen=True)
class NormValue:
    """A geometric mean carried in log form to avoid underflow."""

    log_value: float
    log_error: float

    @property
    def value(self) -> float:
        return math.exp(self.log_value)

    @property
    def rel_error(self) -> float:
        return math.expm1(self.log_error)


def l0_norm(P: RationalPolynomial, interval, tol: float = QUAD_TOL) -> NormValue:
    """Geometric mean ``exp(mean of log|P|)`` over the interval."""
    alpha, beta = as_fraction(interval[0]), as_fraction(interval[1])
    li = integral_log_abs(P, alpha, beta, tol)
    length = float(beta - alpha)
    return NormValue(li.value / length, li.error / length)


def exact_signed_integral(P: RationalPolynomial, interval) -> Fraction:
    alpha, beta = as_fraction(interval[0]), as_fraction(interval[1])
    F = P.antiderivative()
    return F(beta) - F(alpha)


def _odd_root_breakpoints(P: RationalPolynomial, alpha: Fraction, beta: Fraction) -> list[Fraction]:
    if P.is_zero or P.degree < 1:
        return []
    cert = count_sign_changes(P, (alpha, beta))
    cert = refine_witnesses(P, cert, (beta - alpha) / 2**ROOT_BITS)
    return list(cert.midpoints)


def l1_norm(P: RationalPolynomial, interval) -> float:
    """Mean of ``|P|`` over the interval from exact piecewise antiderivatives."""
    return float(l1_mean_exact(P, interval))


def l1_mean_exact(P: RationalPolynomial, interval) -> Fraction:
    """Rational value of the mean of ``|P|``, split at ``2^-60``-accurate sign changes."""
    alpha, beta = as_fraction(interval[0]), as_fraction(interval[1])
    if not alpha < beta:
        raise InvalidParameter("need alpha < beta")
    if P.is_zero:
        return Fraction(0)
    F = P.antiderivative()
    pts = [alpha] + _odd_root_breakpoints(P, alpha, beta) + [beta]
    vals = [F(x) for x in pts]
    total = sum((abs(v - u) for u, v in zip(vals, vals[1:])), Fraction(0))
    return total / (beta - alpha)


def _log_part(P: RationalPolynomial, interval, tol: float, below: bool) -> LogIntegral:
    """Integral of ``|log|P||`` over the pieces where ``|P| < 1`` (``below``) or ``|P| > 1``."""
    alpha, beta = as_fraction(interval[0]), as_fraction(interval[1])
    if P.is_zero:
        raise ZeroPolynomial("log of the zero polynomial")
    one = RationalPolynomial([1])
    breaks = []
    width = (beta - alpha) / 2**ROOT_BITS
    for Q in (P - one, P + one):
        if Q.is_zero or Q.degree < 1:
            continue
        _, q = ip.from_rationals(Q.coeffs)
        f = ip.squarefree(q)
        _, exact, approx = _roots_near(f, alpha, beta, width)
        breaks += [r for r in exact + approx if alpha < r < beta]
    pts = [alpha] + sorted(set(breaks)) + [beta]
    value = 0.0
    error = 0.0
    panels = 0
    nroots = 0
    for u, v in zip(pts, pts[1:]):
        if u == v:
            continue
        size = abs(P((u + v) / 2))
        if (size >= 1) if below else (size <= 1):
            continue
        li = integral_log_abs(P, u, v, tol)
        value += -li.value if below else li.value
        error += li.error
        panels += li.panels
        nroots += li.roots
    # a breakpoint misplaced by <= width shifts the integrand only where |log|P|| is ~0
    error += len(breaks) * float(width)
    return LogIntegral(max(value, 0.0), error, panels, nroots)


def log_minus_integral(P: RationalPolynomial, interval, tol: float = QUAD_TOL) -> LogIntegral:
    """``integral max(0, -log|P|)`` over the interval, with an error estimate."""
    return _log_part(P, interval, tol, below=True)


def log_plus_integral(P: RationalPolynomial, interval, tol: float = QUAD_TOL) -> LogIntegral:
    """``integral max(0, log|P|)`` over the interval, with an error estimate."""
    return _log_part(P, interval, tol, below=False)


# -- lemma checkers ------------------------------------------------------------


def _check_a(a) -> Fraction:
    a = as_fraction(a)
    if not 0 < a <= ONE_THIRD:
        raise InvalidParameter(f"a={a} outside (0, 1/3]")
    return a


def _check_form(P: RationalPolynomial, M, k: int | None) -> int:
    """Coefficients zero below the leading index, nonzero ones of size in [1, M]."""
    if P.is_zero:
        raise FormViolation("zero polynomial")
    M = as_fraction(M)
    lead = next(j for j, c in enumerate(P.coeffs) if c)
    want = 0 if k is None else k
    if lead != want:
        raise FormViolation(f"leading index is {lead}, expected {want}")
    for j, c in enumerate(P.coeffs):
        if c and not 1 <= abs(c) <= M:
            raise FormViolation(f"|coefficient {j}| = {abs(c)} outside [1, {M}]")
    return lead


def _window(a: Fraction) -> tuple[Fraction, Fraction]:
    return (1 - 2 * a, 1 - a)


def check_lemma31(P, a, M, c1: float = C1, tol: float = 1e-6) -> BoundReport:
    """``integral over I_a of log^-|P| <= c1 log(4M)``."""
    a = _check_a(a)
    _check_form(P, M, None)
    li = log_minus_integral(P, _window(a))
    rhs = c1 * math.log(4 * float(M))
    return _report("log_minus", li.value, rhs, tol, quad_error=li.error, panels=li.panels)


def check_lemma32(P, a, M, c1: float = C1, tol: float = 1e-8) -> BoundReport:
    """``log ||P||_{L0(I_a)} >= -c1 log(4M) / a``; compared in log space."""
    a = _check_a(a)
    _check_form(P, M, None)
    norm = l0_norm(P, _window(a))
    bound = -c1 * math.log(4 * float(M)) / float(a)
    return _report("l0_lower", bound, norm.log_value, tol, space="log", quad_error=norm.log_error)


def check_lemma33(P, a, M, k: int, c1: float = C1, tol: float = 1e-8) -> BoundReport:
    """``||P||_{L0(I_a)} >= (1 - 2a)^k exp(-c1 log(4M)/a)`` for leading index ``k``."""
    a = _check_a(a)
    _check_form(P, M, k)
    norm = l0_norm(P, _window(a))
    bound = k * math.log(1 - 2 * float(a)) - c1 * math.log(4 * float(M)) / float(a)
    return _report("l0_lower_shifted", bound, norm.log_value, tol, space="log", k=k, quad_error=norm.log_error)


# -- parameter and bound calculators -------------------------------------------


def choose_a(n: int, M, strict: bool = True) -> Fraction:
    """Largest ``p / 2**16 > 0`` not exceeding ``min(1/3, sqrt(log(4M)/n))``.

    With ``strict`` the frame ``M <= exp(n/9)/4`` is enforced; otherwise
    instances outside it get the clamped value.
    """
    M = as_fraction(M)
    if n < 1 or M < 1:
        raise InvalidParameter("need n >= 1 and M >= 1")
    if strict and not frame_holds(n, M):
        raise FrameViolation(f"M={M} exceeds exp(n/9)/4 for n={n}")
    with mpmath.workdps(50):
        x = mpmath.sqrt(mpmath.log(4 * mpmath.mpf(M.numerator) / M.denominator) / n)
        x = min(x, mpmath.mpf(1) / 3)
        p = int(mpmath.floor(x * A_DENOMINATOR))
    if p <= 0:
        raise InvalidParameter(f"a rounds to zero for n={n}, M={M}")
    return Fraction(p, A_DENOMINATOR)


def chain_inequality_holds(n: int, M, m: int, c1: float = C1, separator_log: float = 1.0) -> bool:
    """Whether ``(n/m) log 2 > (log 2 + s) m + log(2n+2) + (c1 + 13/3) sqrt(n log(4M))``.

    ``separator_log`` is ``s``: 1 for the separator bound ``e^-1`` per root,
    ``1 + log 2`` for the sharp bound ``||x - c||_{L0[0,1]} >= 1/(2e)``.
    """
    lhs = n / m * math.log(2)
    rhs = (
        (math.log(2) + separator_log) * m
        + math.log(2 * n + 2)
        + (c1 + 4 + 1 / 3) * math.sqrt(math.log(4 * float(M)) * n)
    )
    return lhs > rhs


def guaranteed_m(n: int, M, c1: float = C1, strict: bool = True, corrected: bool = False) -> int:
    """Largest ``m >= 1`` for which the chain inequality still holds (0 if none).

    Any collision polynomial built with this many moments has at least that
    many sign changes in ``I_a``; the set of valid ``m`` is an initial segment
    since the left side decreases and the right side increases in ``m``.
    """
    if strict and not frame_holds(n, M):
        raise FrameViolation(f"M={M} exceeds exp(n/9)/4 for n={n}")
    sep = 1 + math.log(2) if corrected else 1.0
    m = 0
    while m + 1 <= n and chain_inequality_holds(n, M, m + 1, c1, sep):
        m += 1
    return m


# -- separator polynomial and the proof chain ----------------------------------


@dataclass(frozen=True)
class SeparatorPolynomial:
    roots: tuple[Fraction, ...]
    poly: RationalPolynomial

    @classmethod
    def from_roots(cls, roots: Sequence[Fraction]) -> "SeparatorPolynomial":
        roots = tuple(sorted(as_fraction(r) for r in roots))
        return cls(roots, RationalPolynomial.from_roots(roots))

    @property
    def degree(self) -> int:
        return len(self.roots)


def pulled_back_witnesses(sc: SignChangeCertificate, a: Fraction) -> list[tuple[Fraction, Fraction]]:
    """Map witnesses in ``I_a`` to ``(0, 1)`` through ``x -> (1 - a - x) / a``."""
    out = [((1 - a - hi) / a, (1 - a - lo) / a) for lo, hi in sc.witnesses]
    return sorted(out)


@dataclass
class ChainReport:
    links: list[BoundReport] = field(default_factory=list)
    sign_changes: int = 0
    separator: SeparatorPolynomial | None = None

    @property
    def holds(self) -> bool:
        return all(r.holds for r in self.links)

    @property
    def first_failure(self) -> BoundReport | None:
        return next((r for r in self.links if not r.holds), None)

    def link(self, name: str) -> BoundReport:
        return next(r for r in self.links if r.name == name)

    def as_dict(self) -> dict:
        return {
            "holds": self.holds,
            "sign_changes": self.sign_changes,
            "links": [r.as_dict() for r in self.links],
        }


def _log_fraction(x: Fraction) -> float:
    if x == 0:
        return -math.inf
    return _log_abs_fraction(x)


def proof_chain_check(
    P: RationalPolynomial,
    inst: ProblemInstance,
    m: int,
    cert: CollisionCertificate,
    sc: SignChangeCertificate,
    c1: float = C1,
    tol: float = 1e-8,
    witness_bits: int = 40,
    raise_on_failure: bool = True,
) -> ChainReport:
    """Verify, link by link, that the collision polynomial satisfies the chain
    of bounds that turns small moments into sign changes.

    Links, in order:

    ``moment_gap``        exact: both moment vectors recomputed, stored
                          differences match, every ``|delta_j| < h``, and
                          the pulled-back polynomial's own moments equal them.
    ``cell_side``         ``h <= 2(n+1)M 2^(-n/m)``.
    ``sign_changes``      the certificate re-verifies on ``P`` over ``I_a``.
    ``power_bound``       ``(1 - 2a)^n >= exp(-4an)``.
    ``leading_index_bound`` ``log L0(P, I_a) >= k log(1-2a) - c1 log(4M)/a``.
    ``window_lower_bound`` ``log L0(P, I_a) >= -c1 log(4M)/a - 4an``.
    ``transport``         ``L0`` of ``P`` on ``I_a`` equals ``L0`` of the
                          pullback on ``[0, 1]``.
    ``separator_coeffs``  exact: the coefficient sum of ``Q`` is ``<= 2^s``.
    ``separator_lower_bound`` ``log L0(Q) >= -s (1 + log 2)``; whether the
                          stronger ``-s`` also holds (it fails for roots
                          near 1/2) is recorded in ``method``.
    ``multiplicativity``  ``L0(P~ Q) = L0(P~) L0(Q)``.
    ``mean_comparison``   ``L0(P~ Q) <= L1(P~ Q)``.
    ``single_sign``       ``L1(P~ Q) <= |integral P~ Q| + slack`` where the
                          exact slack covers the slivers between true roots
                          and the rational roots of ``Q``.
    ``moment_bound``      exact: ``|integral P~ Q| <= sum |q_j| |delta_j|
                          <= 2^s h`` when ``s < m`` (the contradiction
                          hypothesis); otherwise only the first inequality,
                          using all moments of ``P~``.
    """
    report = ChainReport()
    a = inst.a
    n = inst.n
    M = inst.M
    g = cert.grid
    logM4 = math.log(4 * float(M))
    af = float(a)

    def add(r: BoundReport):
        report.links.append(r)
        if raise_on_failure and not r.holds:
            raise ChainViolation(r.name, f"lhs={r.lhs:.6g} rhs={r.rhs:.6g}")

    # exact collision link
    try:
        if g.m != m:
            raise ChainViolation("moment_gap", f"certificate grid has m={g.m}, expected {m}")
        verify_collision(cert, inst)
        Pt = affine_pullback(P, a)
        if polynomial_moments(Pt, m) != tuple(cert.delta):
            raise ChainViolation("moment_gap", "pulled-back moments differ from delta")
        gap_ok = True
    except ChainViolation as exc:
        if raise_on_failure:
            raise
        gap_ok = False
        Pt = affine_pullback(P, a)
        detail = str(exc)
    max_gap = max(abs(x) for x in cert.delta)
    add(BoundReport("moment_gap", float(max_gap), float(g.h), gap_ok, 0.0,
                    {"exact": True, **({} if gap_ok else {"detail": detail})}))
    add(_report("cell_side", g.h, g.h_upper_bound, 1e-12 * g.h_upper_bound))

    # sign-change certificate
    try:
        if tuple(sc.interval) != tuple(inst.interval):
            raise ChainViolation("sign_changes", "certificate interval is not I_a")
        verify_sign_certificate(P, sc)
        sc_ok = True
    except ChainViolation:
        if raise_on_failure:
            raise
        sc_ok = False
    s = sc.count
    report.sign_changes = s
    add(BoundReport("sign_changes", float(s), float(s), sc_ok, 0.0, {"exact": True}))

    add(_report("power_bound", -4 * af * n, n * math.log1p(-2 * af), 0.0, space="log"))

    k = cert.b.k
    norm_P = l0_norm(P, inst.interval)
    qerr = norm_P.log_error + tol
    add(_report("leading_index_bound", k * math.log1p(-2 * af) - c1 * logM4 / af,
                norm_P.log_value, qerr, space="log", k=k))
    add(_report("window_lower_bound", -c1 * logM4 / af - 4 * af * n,
                norm_P.log_value, qerr, space="log"))
    norm_Pt = l0_norm(Pt, (0, 1))
    add(_report("transport", abs(norm_Pt.log_value - norm_P.log_value), 0.0,
                tol + norm_P.log_error + norm_Pt.log_error, space="log"))

    # separator from the pulled-back witnesses, narrowed first
    narrow = refine_witnesses(P, sc, Fraction(1, 2**witness_bits) * a)
    wit = pulled_back_witnesses(narrow, a)
    sep = SeparatorPolynomial.from_roots([(lo + hi) / 2 for lo, hi in wit])
    report.separator = sep
    Q = sep.poly
    add(BoundReport("separator_coeffs", float(Q.abs_coeff_sum()), float(2**s),
                    Q.abs_coeff_sum() <= 2**s, 0.0, {"exact": True}))
    norm_Q = l0_norm(Q, (0, 1))
    unit = -float(s)
    add(_report("separator_lower_bound", -s * (1 + math.log(2)), norm_Q.log_value,
                tol + norm_Q.log_error, space="log", unit_bound=unit,
                unit_bound_holds=bool(norm_Q.log_value >= unit - tol)))

    PtQ = Pt * Q
    norm_PtQ = l0_norm(PtQ, (0, 1))
    add(_report("multiplicativity",
                abs(norm_PtQ.log_value - norm_Pt.log_value - norm_Q.log_value), 0.0,
                tol + norm_PtQ.log_error + norm_Pt.log_error + norm_Q.log_error, space="log"))

    l1 = l1_mean_exact(PtQ, (0, 1))
    log_l1 = _log_fraction(l1)
    add(_report("mean_comparison", norm_PtQ.log_value, log_l1, tol + norm_PtQ.log_error, space="log"))

    signed = exact_signed_integral(PtQ, (0, 1))
    # |P~Q| <= its coefficient sum on [0, 1]; each sliver is at most one witness wide
    bound = PtQ.abs_coeff_sum()
    slack = 2 * sum((hi - lo for lo, hi in wit), Fraction(0)) * bound
    add(BoundReport("single_sign", float(l1), float(abs(signed) + slack), l1 <= abs(signed) + slack, 0.0,
                    {"exact": True, "slack": float(slack)}))

    qs = Q.coeffs
    moments = polynomial_moments(Pt, len(qs))
    tri = sum((abs(qj) * abs(mj) for qj, mj in zip(qs, moments)), Fraction(0))
    ok = abs(signed) <= tri
    method = {"exact": True, "hypothesis_s_lt_m": s < m}
    rhs = tri
    if s < m:
        rhs = 2**s * g.h
        ok = ok and tri <= rhs
        method["cube_bound"] = float(2**m * g.h_upper_bound)
    add(BoundReport("moment_bound", float(abs(signed)), float(rhs), ok, 0.0, method))
    return report


def verify_construction(inst: ProblemInstance, cert: CollisionCertificate, P: RationalPolynomial, **kw):
    """Certify sign changes of ``P`` in ``I_a`` and run the full chain."""
    sc = count_sign_changes(P, inst.interval)
    return sc, proof_chain_check(P, inst, cert.grid.m, cert, sc, **kw)
