import threading

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from holofloer.algebra import ONE, LaurentPoly, TruncatedSeries
from holofloer.alexander import positive_form, symmetrize
from holofloer.colored import BUILTIN_KNOTS
from holofloer.errors import DomainError, FormatError, IndexRangeError
from holofloer.weyl import (
    L,
    M,
    SeriesSequence,
    WeylElement,
    apply_weyl,
    d_operator,
    format_d_product,
    knot_annihilator,
    reduced_sequence,
    unreduced_annihilator,
    unreduced_sequence,
    verify_annihilation,
    weyl_multiply,
)

P = LaurentPoly
q = LaurentPoly.monomial
ORDER = 40


def power_seq(c, order=ORDER):
    return SeriesSequence(lambda r: q(c * r), 1, order)


def const_seq(value=1, order=ORDER):
    return SeriesSequence(lambda r: P({0: value}), 1, order)


# multiplication

def test_reordering_rule():
    assert L * M == WeylElement.monomial(1, 1, q(-1))
    assert M * L == WeylElement.monomial(1, 1)
    assert L * L * M == WeylElement.monomial(1, 2, q(-2))
    assert WeylElement.monomial(0, 3) * WeylElement.monomial(2, 0) == WeylElement.monomial(2, 3, q(-6))


def test_relation_element_is_zero():
    assert q(1) * (L * M) - M * L == 0


weyl_monos = st.builds(
    lambda a, b, e, c: WeylElement.monomial(a, b, P({e: c})),
    st.integers(0, 3), st.integers(0, 3), st.integers(-3, 3), st.integers(-3, 3),
)
weyls = st.lists(weyl_monos, max_size=3).map(lambda xs: sum(xs, WeylElement()))


@given(weyls, weyls, weyls)
@settings(max_examples=40)
def test_associative_distributive(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c


@given(weyls, weyls, st.integers(1, 4))
@settings(max_examples=40)
def test_product_acts_as_composition(a, b, r):
    f = SeriesSequence(lambda n: P({0: 1, n: 2, 2 * n: -1}), 1, ORDER)
    composed = SeriesSequence(lambda n: apply_weyl(a, f, n), 1, ORDER)
    assert apply_weyl(weyl_multiply(a, b), f, r) == apply_weyl(b, composed, r)


def test_pretty_and_json():
    x = WeylElement.monomial(2, 1, P({-1: 1, 0: -1})) + M
    assert str(x) == "M + (q^-1 - 1)·M^2·L"
    assert str(WeylElement()) == "0"
    assert str(d_operator(q(-2))) == "1 - q^-2·L"
    assert str((M - 1) * (L - 1)) == "1 - M - L + M·L"
    assert WeylElement.from_json(x.to_json()) == x
    with pytest.raises(FormatError):
        WeylElement.from_json([[0, 1]])
    with pytest.raises(DomainError):
        WeylElement.monomial(-1, 0)


# action

def test_action_basics():
    one = const_seq()
    assert apply_weyl(M, one, 5).poly == q(5)
    assert apply_weyl(L, power_seq(1), 3).poly == q(4)


@given(st.integers(1, 8))
def test_relation_acts_as_zero(r):
    f = SeriesSequence(lambda n: P({0: 1, n: -1, n * n: 3}), 1, 80)
    rel = q(1) * (L * M) - M * L
    assert apply_weyl(rel, f, r).poly.is_zero()


def test_monomial_action_formula():
    # (f . c M^a L^b)(r) = c q^(a(r+b)) f(r+b)
    f = SeriesSequence(lambda n: P({n: 1, 0: 2}), 1, 60)
    op = WeylElement.monomial(2, 3, P({-1: 5}))
    for r in range(1, 5):
        assert apply_weyl(op, f, r).poly == f(r + 3).poly * P({2 * (r + 3) - 1: 5})


def test_index_underflow():
    with pytest.raises(IndexRangeError):
        apply_weyl(L, const_seq(), 0)
    seq = SeriesSequence(lambda r: ONE, 3, 10)
    with pytest.raises(IndexRangeError):
        seq(2)


def test_sequence_cache_thread_safe():
    calls = []

    def gen(r):
        calls.append(r)
        return q(r)

    seq = SeriesSequence(gen, 1, 50)
    threads = [threading.Thread(target=lambda: [seq(r) for r in range(1, 20)]) for _ in range(8)]
    for th in threads:
        th.start()
    for th in threads:
        th.join()
    assert sorted(calls) == list(range(1, 20))


# D-operators

def test_d_operator_examples():
    for r in range(1, 8):
        assert apply_weyl(d_operator(q(-2)), power_seq(2), r).poly.is_zero()
        assert apply_weyl(d_operator(1), const_seq(), r).poly.is_zero()
    assert d_operator(0) == WeylElement.scalar(1)


laurents = st.dictionaries(st.integers(-3, 3), st.integers(-4, 4), min_size=1, max_size=3).map(P)
poly_gens = st.lists(st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(-3, 3)), min_size=1, max_size=3)


def seq_from(spec, order=ORDER):
    # r -> sum c q^(a r + b)
    return SeriesSequence(lambda r: P([(a * r + b, c) for a, b, c in spec]), 1, order)


@given(laurents, laurents, poly_gens, st.integers(1, 6))
def test_d_linearity(x, y, spec, r):
    f = seq_from(spec)
    assert apply_weyl(d_operator(x), f * y, r) == apply_weyl(d_operator(x), f, r) * y


@given(laurents, poly_gens, poly_gens, st.integers(1, 6))
def test_d_additivity(x, s1, s2, r):
    f, g = seq_from(s1), seq_from(s2)
    assert apply_weyl(d_operator(x), f + g, r) == apply_weyl(d_operator(x), f, r) + apply_weyl(d_operator(x), g, r)


@given(laurents, poly_gens, poly_gens, st.integers(1, 6))
def test_d_derivation(x, s1, s2, r):
    f, g = seq_from(s1), seq_from(s2)
    lhs = apply_weyl(d_operator(x), f * g, r)
    rhs = apply_weyl(d_operator(x), f, r) * g(r) + f(r + 1) * x * apply_weyl(d_operator(1), g, r)
    assert lhs == rhs


@given(laurents, laurents, poly_gens, st.integers(1, 6))
def test_d_commutation(x, y, spec, r):
    f = seq_from(spec)
    assert d_operator(x) * d_operator(y) == d_operator(y) * d_operator(x)
    assert apply_weyl(d_operator(x) * d_operator(y), f, r) == apply_weyl(d_operator(y) * d_operator(x), f, r)


@given(laurents, st.integers(-4, 4), st.integers(1, 6))
def test_d_on_powers(x, c, r):
    f = SeriesSequence(lambda n: q(c * n), 1, 100)
    assert apply_weyl(d_operator(x), f, r).poly == q(c * r) * (ONE - x * q(c))


# annihilators

def test_knot_annihilator_shapes():
    d = d_operator
    assert knot_annihilator(P({0: 1, 1: -1, 2: 1})) == d(1) * d(q(-1)) * d(q(-2))
    assert knot_annihilator(ONE) == ONE - L
    assert knot_annihilator(P({0: 1, 1: -3, 2: 1})) == knot_annihilator(P({0: 1, 1: -1, 2: 1}))
    assert format_d_product(P({0: 1, 1: -1, 2: 1})) == "D_1·D_{q^-1}·D_{q^-2}"
    assert format_d_product(ONE, unreduced=True) == "(M - 1)·D_1"
    with pytest.raises(DomainError):
        knot_annihilator(P())
    with pytest.raises(DomainError):
        knot_annihilator(P({1: 1}))


def test_unreduced_annihilator_shapes():
    assert unreduced_annihilator(ONE) == (M - 1) * (ONE - L)
    assert unreduced_annihilator(ONE) == -((M - 1) * (L - 1))
    tref = P({0: 1, 1: -1, 2: 1})
    assert unreduced_annihilator(tref) == (M - 1) * knot_annihilator(tref)


@pytest.mark.parametrize("name", list(BUILTIN_KNOTS))
def test_builtin_annihilation(name):
    a = BUILTIN_KNOTS[name].alexander
    d1 = positive_form(a)
    rep = verify_annihilation(knot_annihilator(d1), reduced_sequence(a), range(1, 13), 64)
    assert rep.clean and rep.order == 64
    rep = verify_annihilation(unreduced_annihilator(d1), unreduced_sequence(a), range(1, 13), 64)
    assert rep.clean and rep.order == 64


def test_verification_reports_residual():
    u = unreduced_sequence(symmetrize(ONE), 32)
    rep = verify_annihilation(d_operator(q(-1)), u, range(1, 7), 32)
    assert not rep.clean
    assert rep.residual_index == 1 and rep.residual_exponent is not None
    # brute force the first instance: f(1) - q^-1 f(2)
    brute = u(1) - u(2) * q(-1)
    assert brute.valuation() == rep.residual_exponent
    assert "nonzero residual" in str(rep)
    assert rep.to_json()["residual"]["r"] == 1


def test_unknot_factored_operator_kills():
    u = unreduced_sequence(symmetrize(ONE), 64)
    assert verify_annihilation((M - 1) * (L - 1), u, range(1, 13), 64).clean


def test_empty_range_rejected():
    with pytest.raises(DomainError):
        verify_annihilation(L, const_seq(), range(0))
