from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pigeonroots.errors import ChainViolation, ZeroPolynomial
from pigeonroots.polycore import RationalPolynomial as R
from pigeonroots.rootcert import (
    SignChangeCertificate,
    count_sign_changes,
    max_multiplicity_search,
    multiplicity_at_one,
    refine_witnesses,
    squarefree_part,
    sturm_count,
    verify_sign_certificate,
)

from conftest import rand_fraction

x = R([0, 1])
one = R([1])


def lin(r):
    return x - R([r])


def proportional(P, Q):
    ratio = P.coeffs[-1] / Q.coeffs[-1]
    return P == Q * R([ratio])


def test_squarefree_examples():
    assert proportional(squarefree_part(lin(F(1, 2)) * lin(F(1, 2))), lin(F(1, 2)))
    assert proportional(squarefree_part(x * x - one), x * x - one)
    assert proportional(squarefree_part(R([0, 0, -1, 1])), R([0, -1, 1]))


def test_sturm_examples():
    assert sturm_count(x * x - R([2]), (0, 2)) == 1
    assert sturm_count(lin(F(1, 3)) * lin(F(2, 3)), (0, 1)) == 2
    assert sturm_count(x * x + one, (-10, 10)) == 0


def test_sign_change_examples():
    assert count_sign_changes(lin(F(1, 2)), (0, 1)).count == 1
    assert count_sign_changes(lin(F(1, 4)) * lin(F(3, 4)), (0, 1)).count == 2
    assert count_sign_changes(lin(F(1, 2)) * lin(F(1, 2)), (0, 1)).count == 0


def test_endpoint_roots_excluded():
    P = x * lin(F(1, 2)) * lin(1)
    cert = count_sign_changes(P, (0, 1))
    assert cert.count == 1
    assert set(cert.endpoint_roots) == {0, 1}
    lo, hi = cert.witnesses[0]
    assert 0 < lo < F(1, 2) < hi < 1


def test_odd_and_even_multiplicities():
    P = lin(F(1, 5)) ** 3 * lin(F(2, 5)) ** 2 * lin(F(3, 5))
    cert = count_sign_changes(P, (0, 1))
    assert cert.count == 2
    verify_sign_certificate(P, cert)


def test_zero_polynomial():
    with pytest.raises(ZeroPolynomial):
        count_sign_changes(R(), (0, 1))


def test_refine_and_verify():
    P = (x * x - R([2])) * lin(F(1, 3))
    cert = count_sign_changes(P, (0, 2))
    fine = refine_witnesses(P, cert, F(1, 2**30))
    assert fine.max_width < F(1, 2**30)
    verify_sign_certificate(P, fine)
    mids = sorted(float(m) for m in fine.midpoints)
    assert abs(mids[0] - 1 / 3) < 1e-9 and abs(mids[1] - 2**0.5) < 1e-9


def test_refine_hits_rational_root():
    P = lin(F(1, 2))
    cert = SignChangeCertificate(1, ((F(1, 4), F(3, 4)),), (F(0), F(1)))
    fine = refine_witnesses(P, cert, F(1, 100))
    verify_sign_certificate(P, fine)
    assert fine.max_width < F(1, 100)


def test_verify_rejects_bad_certificates():
    P = lin(F(1, 2))
    good = count_sign_changes(P, (0, 1))
    with pytest.raises(ChainViolation):
        verify_sign_certificate(P, SignChangeCertificate(1, ((F(0), F(1, 4)),), good.interval))
    with pytest.raises(ChainViolation):
        verify_sign_certificate(P, SignChangeCertificate(2, good.witnesses, good.interval))
    with pytest.raises(ChainViolation):
        verify_sign_certificate(P, SignChangeCertificate(0, (), good.interval))


polys = st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=4), min_size=2, max_size=9).map(R)


@given(polys)
def test_count_bounded_by_sturm(P):
    if P.is_zero or P.degree < 1:
        return
    cert = count_sign_changes(P, (-2, 2))
    assert cert.count <= sturm_count(squarefree_part(P), (-2, 2))
    verify_sign_certificate(P, cert)
    for (a, b), (c, d) in zip(cert.witnesses, cert.witnesses[1:]):
        assert b <= c


def test_multiplicity_examples():
    assert multiplicity_at_one(lin(1)) == 1
    assert multiplicity_at_one(R([1, -1, -1, 1])) == 2
    assert multiplicity_at_one(R([1, 1, 1])) == 0
    with pytest.raises(ZeroPolynomial):
        multiplicity_at_one(R())


def test_multiplicity_recursion(rng):
    for _ in range(100):
        P = R([rand_fraction(rng) for _ in range(rng.randint(1, 10))])
        if P.is_zero:
            continue
        assert multiplicity_at_one(P * lin(1)) == multiplicity_at_one(P) + 1


@pytest.mark.parametrize("n,k", [(0, 0), (1, 1), (2, 1), (3, 2), (4, 2), (5, 2), (6, 3)])
def test_max_multiplicity_small(n, k):
    r = max_multiplicity_search(n)
    assert r.k == k and r.exact
    assert multiplicity_at_one(R(list(r.witness.b))) == k


def test_n3_witness():
    assert max_multiplicity_search(3).witness.b == (1, -1, -1, 1)


def test_dfs_agrees_with_exhaustive():
    for n in range(1, 9):
        assert max_multiplicity_search(n, mode="dfs").k == max_multiplicity_search(n, mode="exhaustive").k


def test_dfs_budget_exhaustion():
    r = max_multiplicity_search(25, budget=50, mode="dfs")
    assert not r.exact


def test_invalid_mode():
    with pytest.raises(ValueError):
        max_multiplicity_search(3, mode="magic")


def test_sign_change_transport(rng):
    from pigeonroots.polycore import affine_pullback

    for _ in range(40):
        P = R([rand_fraction(rng) for _ in range(rng.randint(2, 14))])
        if P.is_zero:
            continue
        a = F(1, rng.choice([3, 4, 6, 9]))
        planted = [1 - 2 * a + a * F(rng.randint(0, 10), 10) for _ in range(rng.randint(0, 3))]
        P = P * R.from_roots(planted)
        here = count_sign_changes(P, (1 - 2 * a, 1 - a)).count
        there = count_sign_changes(affine_pullback(P, a), (0, 1)).count
        assert here == there
