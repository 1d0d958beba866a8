import math
from fractions import Fraction as F

import mpmath
import numpy as np
import pytest

from pigeonroots import analytic as an
from pigeonroots.collider import CollisionCertificate, construct
from pigeonroots.errors import ChainViolation, FormViolation, FrameViolation, ZeroPolynomial
from pigeonroots.polycore import ProblemInstance, RationalPolynomial as R
from pigeonroots.rootcert import count_sign_changes
from pigeonroots.sampling import make_rng, random_form_polynomial

from conftest import rand_fraction

x = R([0, 1])
half = R([F(-1, 2), 1])


def mp_mean_log(P, lo, hi):
    """Independent oracle: mpmath quadrature split at numerically located real roots."""
    coeffs = [float(c) for c in P.coeffs]
    roots = [r.real for r in np.roots(coeffs[::-1]) if abs(r.imag) < 1e-9 and lo < r.real < hi]
    pts = [lo] + sorted(roots) + [hi]
    mc = [mpmath.mpf(c.numerator) / c.denominator for c in P.coeffs]

    def f(t):
        return mpmath.log(abs(mpmath.polyval(mc[::-1], t)))

    with mpmath.workdps(30):
        return float(mpmath.quad(f, pts) / (hi - lo))


def random_poly(rng, deg_max=8):
    while True:
        P = R([rand_fraction(rng) for _ in range(rng.randint(1, deg_max + 1))])
        if not P.is_zero:
            return P


def test_l0_examples():
    assert an.l0_norm(x, (0, 1)).value == pytest.approx(math.exp(-1), rel=1e-12)
    assert an.l0_norm(R([5]), (F(1, 7), 3)).value == pytest.approx(5, rel=1e-15)
    assert an.l0_norm(half * half, (0, 1)).value == pytest.approx(math.exp(-2) / 4, rel=1e-12)


def test_l1_and_signed_examples():
    assert an.l1_norm(x, (0, 1)) == pytest.approx(0.5, rel=1e-15)
    assert an.l1_mean_exact(half, (0, 1)) == F(1, 4)
    assert an.exact_signed_integral(half, (0, 1)) == 0
    assert an.exact_signed_integral(R([F(5, 3), F(-1, 3)]), (0, 1)) == F(3, 2)


def test_log_minus_examples():
    assert an.log_minus_integral(R([1]), (0, 1)).value == 0
    assert an.log_minus_integral(x, (0, 1)).value == pytest.approx(1, rel=1e-12)
    assert an.log_minus_integral(half, (0, 1)).value == pytest.approx(1 + math.log(2), rel=1e-12)


def test_zero_polynomial_rejected():
    with pytest.raises(ZeroPolynomial):
        an.l0_norm(R(), (0, 1))


def test_l0_against_mpmath(rng):
    for _ in range(15):
        P = random_poly(rng)
        lo, hi = sorted(rng.sample(range(-20, 21), 2))
        lo, hi = F(lo, 10), F(hi, 10)
        got = an.l0_norm(P, (lo, hi))
        want = mp_mean_log(P, float(lo), float(hi))
        assert abs(got.log_value - want) < 1e-9
        assert got.log_error < 1e-9


def test_l0_with_clustered_roots():
    P = R.from_roots([F(1, 2), F(1, 2) + F(1, 10**6), F(3, 10)]) * R.from_roots([F(3, 10)])
    got = an.l0_norm(P, (0, 1)).log_value
    want = sum(
        (c * math.log(c) + (1 - c) * math.log(1 - c) - 1) * k
        for c, k in ((0.5, 1), (0.5 + 1e-6, 1), (0.3, 2))
    )
    assert got == pytest.approx(want, abs=1e-9)


def test_mean_comparison(rng):
    for _ in range(200):
        P = random_poly(rng)
        lo = rand_fraction(rng, -2, 1)
        hi = lo + F(rng.randint(1, 30), 10)
        assert an.l0_norm(P, (lo, hi)).value <= an.l1_norm(P, (lo, hi)) * (1 + 1e-8)


def test_multiplicativity(rng):
    for _ in range(100):
        P, Q = random_poly(rng, 6), random_poly(rng, 6)
        lp = an.l0_norm(P, (0, 1)).log_value
        lq = an.l0_norm(Q, (0, 1)).log_value
        lpq = an.l0_norm(P * Q, (0, 1)).log_value
        assert abs(lpq - lp - lq) <= 1e-8


def test_decomposition(rng):
    for _ in range(40):
        P = random_poly(rng)
        iv = (F(-1), F(1))
        whole = an.integral_log_abs(P, *iv).value
        plus = an.log_plus_integral(P, iv).value
        minus = an.log_minus_integral(P, iv).value
        assert abs(whole / 2 - (plus - minus) / 2) <= 1e-6
        assert an.l0_norm(P, iv).value == pytest.approx(math.exp(whole / 2), rel=1e-12)


def test_lemma_checks_examples():
    r = an.check_lemma31(R([1]), F(1, 3), 1)
    assert r.lhs == 0 and r.holds
    r3 = an.check_lemma33(x, F(1, 4), 1, 1)
    base = an.check_lemma32(R([1]), F(1, 4), 1)
    assert r3.holds
    assert r3.lhs == pytest.approx(base.lhs + math.log(1 - 2 * 0.25))
    with pytest.raises(FormViolation):
        an.check_lemma31(x, F(1, 3), 1)
    with pytest.raises(FormViolation):
        an.check_lemma33(R([1, 1]), F(1, 3), 1, 1)
    with pytest.raises(FormViolation):
        an.check_lemma31(R([F(1, 2)]), F(1, 3), 1)


def test_lemmas_on_random_instances():
    rng = make_rng(17)
    for i in range(30):
        n = int(rng.integers(1, 21))
        M = [1, 2, 4, 8][i % 4]
        a = [F(1, 3), F(1, 4), F(1, 6)][i % 3]
        P = random_form_polynomial(rng, n, M)
        r1 = an.check_lemma31(P, a, M)
        r2 = an.check_lemma32(P, a, M)
        assert r1.holds and r2.holds
        # value-level consequence of the log-minus bound
        assert math.exp(-r1.lhs / float(a)) <= an.l0_norm(P, (1 - 2 * a, 1 - a)).value + 1e-8
        k = int(rng.integers(0, n + 1))
        assert an.check_lemma33(random_form_polynomial(rng, n, M, k), a, M, k).holds


def test_choose_a():
    a = an.choose_a(36, 1)
    real = math.sqrt(math.log(4) / 36)
    assert a.denominator <= 2**16 and (2**16 * a).denominator == 1
    assert a <= F(real) and real - float(a) < 2**-16
    assert float(a) == pytest.approx(0.19624, abs=2e-5)
    with pytest.raises(FrameViolation):
        an.choose_a(9, 1)
    assert an.choose_a(9, 1, strict=False) == F(21845, 65536)
    for n in (100, 400, 3000):
        assert abs(an.choose_a(4 * n, 1) - an.choose_a(n, 1) / 2) <= F(1, 2**16)


def test_guaranteed_m_examples():
    assert an.guaranteed_m(100, 1) == 0
    assert an.guaranteed_m(10**6, 1) == 24
    with pytest.raises(FrameViolation):
        an.guaranteed_m(9, 1)
    prev = None
    for M in (1, 2, 4, 16, 256):
        g = an.guaranteed_m(10**6, M)
        assert prev is None or g <= prev
        prev = g
    assert an.guaranteed_m(10**6, 1, corrected=True) <= an.guaranteed_m(10**6, 1)


def test_guaranteed_m_scaling():
    g1, g4 = an.guaranteed_m(10**6, 1), an.guaranteed_m(4 * 10**6, 1)
    assert 1.8 <= g4 / g1 <= 2.2


def _chain_instance(n, m, strategy="exhaustive", **opts):
    inst = ProblemInstance.unit(n, an.choose_a(n, 1, strict=False))
    _, P, cert = construct(inst, m, strategy, **opts)
    return inst, P, cert, count_sign_changes(P, inst.interval)


def test_chain_n12_m3():
    inst, P, cert, sc = _chain_instance(12, 3)
    rep = an.proof_chain_check(P, inst, 3, cert, sc)
    assert rep.holds
    assert [r.name for r in rep.links][:3] == ["moment_gap", "cell_side", "sign_changes"]


def test_chain_with_sign_changes():
    inst, P, cert, sc = _chain_instance(28, 2, "mitm", seed=1)
    assert sc.count >= 1
    rep = an.proof_chain_check(P, inst, 2, cert, sc)
    assert rep.holds and rep.sign_changes == sc.count
    assert rep.separator.degree == sc.count


def test_chain_empty_separator():
    inst, P, cert, sc = _chain_instance(12, 2)
    assert sc.count == 0
    rep = an.proof_chain_check(P, inst, 2, cert, sc)
    assert rep.separator.poly == R([1])
    link = rep.link("separator_lower_bound")
    assert link.rhs == 0 and link.rhs >= -2
    assert link.holds


def test_chain_tampered_delta():
    inst, P, cert, sc = _chain_instance(12, 3)
    forged = CollisionCertificate(cert.d1, cert.d2, cert.b, (cert.grid.h * 2,) + cert.delta[1:], cert.grid, cert.strategy)
    with pytest.raises(ChainViolation) as exc:
        an.proof_chain_check(P, inst, 3, forged, sc)
    assert exc.value.link == "moment_gap"
    rep = an.proof_chain_check(P, inst, 3, forged, sc, raise_on_failure=False)
    assert rep.first_failure.name == "moment_gap"


def test_chain_wrong_m():
    inst, P, cert, sc = _chain_instance(12, 3)
    with pytest.raises(ChainViolation):
        an.proof_chain_check(P, inst, 2, cert, sc)


def test_chain_inequality_examples():
    # rhs exceeds lhs at m = 1 for n = 100
    assert not an.chain_inequality_holds(100, 1, 1)
    assert an.chain_inequality_holds(10**6, 1, 24)
    assert not an.chain_inequality_holds(10**6, 1, 25)
