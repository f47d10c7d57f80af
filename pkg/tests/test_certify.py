from fractions import Fraction

import pytest

from congr.certify import (
    SEC9, CertConfig, ConfigInvalid, EtaNotUnit, ProductResult, build_forms, candidate_primes,
    check_hypotheses, terms_needed,
)
from congr.exact import ExactScalar, val_p
from congr.heckechar import UnsupportedField
from congr.ikeda import Unsupported

LIFT_SET = [31, 67, 137, 139, 523, 1609, 3463, 6761]

# products of the recognized values (see the acceptance suite for the individual factors)
SYM2 = [
    Fraction(2**37 * 523, 3**33 * 5**5 * 7**2 * 11 * 13 * 23),
    Fraction(2**38 * 31 * 137, 3**38 * 5**5 * 7**2 * 11 * 13 * 23),
    Fraction(2**38 * 67 * 139 * 1609, 3**40 * 5**5 * 7**2 * 11**2 * 13**2 * 23**2),
    Fraction(2**41 * 3463 * 6761, 3**44 * 5**5 * 7**3 * 13**2 * 23**2 * 29),
]
CONV = [
    Fraction(-2**33 * 5 * 7**2 * 13 * 17 * 19 * 107, 3**4),
    Fraction(2**31 * 7 * 17 * 127 * 7607, 3**6 * 5),
    Fraction(-2**31 * 109 * 1428767, 3**7 * 5 * 7 * 23),
    Fraction(2**33 * 5 * 13 * 853, 3**10 * 23),
    Fraction(-2**31 * 47 * 2069, 3**12 * 5 * 7 * 23),
]
DIRICHLET = [ExactScalar(4, 27), ExactScalar(4, 243, 3), ExactScalar(8, 729), ExactScalar(4, 2187, 3)]


def _product(values):
    out = ExactScalar(1)
    for v in values:
        out = out * (v if isinstance(v, ExactScalar) else ExactScalar.from_fraction(v))
    return ProductResult(out, [])


V = _product(SYM2)
U = _product(CONV + DIRICHLET)


def test_preset_is_valid():
    assert (SEC9.disc, SEC9.n, SEC9.k, SEC9.m, SEC9.t, SEC9.T) == (-3, 5, 13, 2, -24, 1)
    assert SEC9.u == -6
    assert SEC9.bc_points() == [8, 7, 6, 5, 4]
    assert SEC9.conv_points() == [11, 10, 9, 8, 7]


@pytest.mark.parametrize("changes,fragment", [
    ({"t": -18}, "t = -18"),
    ({"t": -31}, "t = -31"),
    ({"t": -26}, "unit order"),
    ({"n": 27, "m": 13, "t": -200}, "exceeds 2k-1"),
    ({"precision_digits": 50}, "precision_digits"),
    ({"n": 6, "m": 3, "k": 20, "t": -30}, "n = 2 mod 4"),
    ({"n": 5, "m": 1}, "must be 2m or 2m+1"),
])
def test_config_invalid(changes, fragment):
    with pytest.raises(ConfigInvalid) as info:
        CertConfig(**changes)
    assert any(fragment in e for e in info.value.errors)


def test_config_collects_every_error():
    with pytest.raises(ConfigInvalid) as info:
        CertConfig(t=-31, precision_digits=10, prime_bound=1)
    assert len(info.value.errors) >= 3


def test_config_field_gate():
    with pytest.raises(UnsupportedField):
        CertConfig(disc=-5)


def test_eta_not_unit():
    # S_36(SL_2(Z)) has dimension 2
    config = CertConfig(k=18, n=5, m=2, t=-24, terms=100)
    with pytest.raises(EtaNotUnit):
        build_forms(config)


def test_even_n_unsupported():
    config = CertConfig(n=4, m=2, k=13, t=-24, terms=100)
    with pytest.raises(Unsupported):
        build_forms(config)


def test_terms_needed_is_reasonable():
    n = terms_needed(SEC9)
    assert 1000 < n <= 10_000


def test_valuations():
    assert val_p(V.value.rational, 31) == 1
    assert val_p(V.value.rational, 29) == -1
    assert all(U.val(ell) == 0 for ell in LIFT_SET)
    assert U.val(5) < 0


def test_candidates():
    assert candidate_primes(SEC9, V) == LIFT_SET


def test_certified_prime(phi):
    rep = check_hypotheses(31, SEC9, V, U, phi)
    assert rep.certified and rep.status == "Certified" and rep.depth_b == 1
    assert [c.name for c in rep.checks] == [
        "ell > 2k+2m", "ell does not divide 2 h_K D_K i(phi)", "t range",
        "val(T #(O_K/N O_K)^x) = 0", "val(U) = 0", "b = val(V) >= 1",
        "lift coefficient nonzero mod ell",
    ]
    assert "#(O_K/N)^x = 6" in rep.checks[3].detail


def test_rejections(phi):
    rep = check_hypotheses(29, SEC9, V, U, phi)
    assert rep.status == "Rejected(ell > 2k+2m)"
    rep = check_hypotheses(3, SEC9, V, U, phi)
    assert not rep.certified and not rep.checks[1].passed
    rep = check_hypotheses(37, SEC9, V, U, phi)
    assert rep.status == "Rejected(b = val(V) >= 1)" and rep.depth_b == 0
    rep = check_hypotheses(47, SEC9, V, U, phi)
    assert rep.status == "Rejected(val(U) = 0)"


def test_report_dict(phi):
    d = check_hypotheses(523, SEC9, V, U, phi).as_dict()
    assert d["depth"] == 1 and d["status"] == "Certified" and d["ell"] == 523
    assert any("A_3" in n for n in d["notes"])


def test_product_dict():
    d = V.as_dict()
    assert [p for p, _ in d["num_factors"]] == [2] + LIFT_SET
    assert dict(d["den_factors"])[29] == 1
