import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from holofloer.algebra import (
    ONE,
    Q,
    AffineBidegree,
    Bidegree,
    LaurentPoly,
    TruncatedSeries,
    gauss_binomial,
    laurent_product,
    series_from_rational,
    substitute_power,
)
from holofloer.errors import DomainError, FormatError

from oracles import binomial, from_dict, gauss_binomial_subsets, to_dict

polys = st.dictionaries(st.integers(-6, 6), st.integers(-5, 5), max_size=6).map(LaurentPoly)


def P(d):
    return LaurentPoly(d)


# laurent_product

def test_difference_of_squares():
    assert laurent_product(1 - Q, 1 + Q) == P({0: 1, 2: -1})


@given(polys)
def test_product_identity(p):
    assert laurent_product(p, ONE) == p


def test_product_square_oracle():
    p = P({-1: 1, 0: -1, 1: 1})
    expected = P({-2: 1, -1: -2, 0: 3, 1: -2, 2: 1})
    assert laurent_product(p, p) == expected
    assert to_dict(from_dict({-1: 1, 0: -1, 1: 1}) ** 2) == dict(expected.terms)


@given(polys, polys)
def test_product_matches_sympy(a, b):
    assert dict((a * b).terms) == to_dict(from_dict(dict(a.terms)) * from_dict(dict(b.terms)))


@given(polys, polys, polys)
@settings(max_examples=50)
def test_ring_axioms(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert a - a == 0


def test_zero_has_empty_terms():
    z = Q - Q
    assert z.is_zero() and dict(z.terms) == {}
    assert str(z) == "0"
    with pytest.raises(DomainError):
        z.min_exp


def test_formatting():
    assert str(P({-2: 1, -1: -2, 0: 3, 1: -2, 2: 1})) == "q^-2 - 2q^-1 + 3 - 2q + q^2"


def test_exact_divide():
    num = (LaurentPoly.monomial(6) - 1) * (Q - 1)
    den = (LaurentPoly.monomial(2) - 1) * (LaurentPoly.monomial(3) - 1)
    assert num.exact_divide(den) == P({0: 1, 1: -1, 2: 1})
    with pytest.raises(DomainError):
        (Q + 2).exact_divide(Q + 1)


def test_json_round_trip():
    p = P({-3: 2, 4: -1})
    assert p.to_json() == [[-3, 2], [4, -1]]
    assert LaurentPoly.from_json(p.to_json()) == p
    with pytest.raises(FormatError):
        LaurentPoly.from_json([["x", 1]])


# substitute_power

def test_substitute_power_example():
    assert substitute_power(P({0: 1, 1: -1, 2: 1}), 3) == P({0: 1, 3: -1, 6: 1})


@given(polys)
def test_substitute_identity(p):
    assert substitute_power(p, 1) == p


def test_substitute_doubling():
    assert substitute_power(P({-1: 1, 0: -1, 1: 1}), 2) == P({-2: 1, 0: -1, 2: 1})


@pytest.mark.parametrize("r", [0, -1])
def test_substitute_bad_power(r):
    with pytest.raises(DomainError):
        substitute_power(Q, r)


@given(polys, polys, st.integers(1, 5))
def test_substitute_multiplicative(a, b, r):
    assert substitute_power(a * b, r) == substitute_power(a, r) * substitute_power(b, r)


# series_from_rational

def test_unknot_series_r2():
    s = series_from_rational(1 - Q, [2], 7)
    assert s.poly == P({0: 1, 1: -1, 2: 1, 3: -1, 4: 1, 5: -1, 6: 1})


def test_empty_denominator():
    assert series_from_rational(ONE, [], 10).poly == ONE


def test_trefoil_colored_r2():
    num = P({0: 1, 2: -1, 4: 1}) * (1 - Q)
    s = series_from_rational(num, [2], 8)
    assert s.poly == P({0: 1, 1: -1, 4: 1, 5: -1, 6: 1, 7: -1})


@pytest.mark.parametrize("d", [0, -2])
def test_series_bad_denominator(d):
    with pytest.raises(DomainError):
        series_from_rational(ONE, [d], 5)


@given(st.dictionaries(st.integers(0, 8), st.integers(-4, 4), max_size=5).map(LaurentPoly), st.integers(1, 6))
def test_series_times_denominator(num, d):
    order = 24
    s = series_from_rational(num, [d], order)
    back = s * (1 - LaurentPoly.monomial(d))
    assert back == TruncatedSeries(num, order)


def test_series_multi_denominator_oracle():
    s = series_from_rational(ONE, [1, 2], 10)
    # partitions into parts 1 and 2: floor(n/2) + 1
    assert all(s.coeff(n) == n // 2 + 1 for n in range(10))


# TruncatedSeries

def test_truncation_drops_high_terms():
    s = TruncatedSeries(P({0: 1, 5: 1, 9: 2}), 6)
    assert s.poly == P({0: 1, 5: 1})
    with pytest.raises(DomainError):
        s.coeff(6)


def test_mixed_order_narrows():
    a = TruncatedSeries(P({0: 1}), 10)
    b = TruncatedSeries(P({0: 1}), 5)
    assert (a + b).order == 5
    assert (a * b).order == 5
    assert (a * LaurentPoly.monomial(-2)).order == 8


def test_series_equality_is_mod_order():
    assert TruncatedSeries(P({0: 1, 7: 1}), 10) == TruncatedSeries(P({0: 1}), 7)
    assert TruncatedSeries(P({0: 1, 3: 1}), 10) != TruncatedSeries(P({0: 1}), 7)
    assert TruncatedSeries(P({0: 1}), 4).first_difference(TruncatedSeries(P({0: 1, 2: 1}), 4)) == 2


def test_series_json():
    s = TruncatedSeries(P({0: 1, 2: -1}), 5)
    assert TruncatedSeries.from_json(s.to_json()) == s
    assert repr(s) == "TruncatedSeries(1 - q^2 + O(q^5))"


# gauss_binomial

def test_gauss_small():
    assert gauss_binomial(2, 1) == P({0: 1, 2: 1})
    assert gauss_binomial(7, 0) == ONE


def test_gauss_4_2():
    expected = P({0: 1, 2: 1, 4: 2, 6: 1, 8: 1})
    assert gauss_binomial(4, 2) == expected
    assert dict(expected.terms) == gauss_binomial_subsets(4, 2)


@pytest.mark.parametrize("n", range(0, 13))
def test_gauss_subset_oracle(n):
    for d in range(n + 1):
        g = gauss_binomial(n, d)
        assert dict(g.terms) == gauss_binomial_subsets(n, d)
        assert g.evaluate(1) == binomial(n, d)
        assert all(c > 0 for _, c in g.items())


@pytest.mark.parametrize("n,d", [(2, 3), (-1, 0), (3, -1)])
def test_gauss_bad_input(n, d):
    with pytest.raises(DomainError):
        gauss_binomial(n, d)


# bidegrees

def test_bidegree_group():
    a, b = Bidegree(2, -1), Bidegree(-3, 4)
    assert a + b == Bidegree(-1, 3)
    assert a - a == Bidegree()
    assert str(Bidegree(2, 1)) == "t^2 q"
    assert str(Bidegree()) == "1"


affines = st.builds(AffineBidegree, *[st.integers(-5, 5)] * 4)


@given(affines, affines, st.integers(1, 9))
def test_affine_instantiation_additive(a, b, r):
    assert (a + b).at(r) == a.at(r) + b.at(r)


@given(affines, st.integers(1, 9))
def test_affine_substitution(a, r):
    s = a.substitute(1)
    assert s.at(r) == a.at(r + 1)
    assert s.const == a.const + a.slope


def test_affine_text_and_json():
    u = AffineBidegree(2, -2, 1, 0)
    assert str(u) == "t^(2r-2) q^r"
    assert str(AffineBidegree(4, -2, 2, 0)) == "t^(4r-2) q^(2r)"
    assert u.at(3) == Bidegree(4, 3)
    assert AffineBidegree.from_json(u.to_json()) == u
    with pytest.raises(FormatError):
        AffineBidegree.from_json({"t": [1]})
