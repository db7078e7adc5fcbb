import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from conftest import ring
from gradedhom.coeff import QQ, CoefficientRing
from gradedhom.errors import (
    AlreadyInverted,
    NegativeExponentOfNonInverted,
    NonMonomial,
    ProductRingUnsupported,
    TrivialParity,
    UnknownGenerator,
)
from gradedhom.gring import (
    AlgebraMap,
    GradingSpec,
    ProductRing,
    basic_open_contains,
    is_connected,
    localize,
    monomial_prime,
    normal_form,
    parity_pushforward,
    spec_monomial_primes,
    unit_ideal_combination,
)


def test_normal_form_examples(R, Qx):
    assert normal_form(R, "x*y").is_zero
    assert normal_form(R, "(x+y)^2") == normal_form(R, "x^2 + y^2")
    assert str(normal_form(Qx, "x^2 + 0*x")) == "x^2"


def test_normal_form_divisibility_oracle(R):
    # expand (x+y)^3 by hand and keep only monomials not divisible by xy
    raw = {(3, 0): 1, (2, 1): 3, (1, 2): 3, (0, 3): 1}
    kept = {m: c for m, c in raw.items() if not (m[0] >= 1 and m[1] >= 1)}
    assert normal_form(R, raw) == normal_form(R, kept)
    assert normal_form(R, "(x+y)^3") == normal_form(R, kept)


def test_normal_form_errors(R):
    with pytest.raises(UnknownGenerator):
        normal_form(R, "z")
    with pytest.raises(NegativeExponentOfNonInverted):
        normal_form(R, "x^-1")


def test_localize_examples(R, Qx):
    Rx = localize(R, "x")
    assert Rx.parse("y").is_zero
    assert Rx.is_unit(Rx.parse("x"))
    assert Rx.parse("x^-1*x") == Rx.one
    Qxx = localize(Qx, "x")
    assert Qxx.profile == "laurent"
    with pytest.raises(AlreadyInverted):
        localize(Qxx, "x")


def test_localize_strips_relation():
    B = ring("xyz", ["x*y*z"])
    Bz = localize(B, "z")
    assert Bz.parse("x*y").is_zero
    assert not Bz.parse("x").is_zero
    assert not Bz.parse("x^2*z^-3").is_zero
    # universal property: the localization map kills xy after inverting z
    phi = AlgebraMap.localization(B, ["z"])
    assert phi(B.parse("x*y")).is_zero


def test_is_connected(R, Qx):
    assert is_connected(R).connected
    assert is_connected(Qx).connected
    assert not is_connected(ProductRing((localize(R, "x"), localize(R, "y")))).connected


def test_spec_monomial_primes(R, Qx):
    primes = spec_monomial_primes(R)
    assert {p.names for p in primes} == {("x",), ("y",), ("x", "y")}
    assert {p.names for p in primes if p.minimal} == {("x",), ("y",)}
    assert {p.names for p in spec_monomial_primes(Qx)} == {(), ("x",)}
    assert [p.names for p in spec_monomial_primes(localize(Qx, "x"))] == [()]
    with pytest.raises(ProductRingUnsupported):
        spec_monomial_primes(ProductRing((R, R)))


def test_spec_oracle_by_divisibility(R):
    # every subset containing x or y kills the single relation xy
    subsets = [s for k in range(3) for s in itertools.combinations("xy", k)]
    expected = {tuple(sorted(s)) for s in subsets if "x" in s or "y" in s}
    assert {p.names for p in spec_monomial_primes(R)} == expected


def test_basic_open_contains(R):
    assert basic_open_contains(R.parse("x"), monomial_prime(R, ["y"]))
    assert not basic_open_contains(R.parse("x"), monomial_prime(R, ["x"]))
    B = ring("xy")
    assert not basic_open_contains(B.parse("x^2*y^3"), monomial_prime(B, ["y"]))
    with pytest.raises(NonMonomial):
        basic_open_contains(R.parse("x + y"), monomial_prime(R, ["y"]))


def test_parity_pushforward():
    assert parity_pushforward(GradingSpec("Z", "koszul"), [0, 3, 4]) == [0, 1, 0]
    assert parity_pushforward(GradingSpec("Z", "koszul"), []) == []
    assert parity_pushforward(GradingSpec("Z/2"), [1, 1]) == [1, 1]
    with pytest.raises(TrivialParity):
        parity_pushforward(GradingSpec("Z", "trivial"), [1])


def test_coefficient_rings():
    assert QQ.two_is_unit
    assert CoefficientRing.parse("Z[1/2]").two_is_unit
    assert CoefficientRing.parse("Z_(3)").two_is_unit
    assert not CoefficientRing.parse("Z_(2)").two_is_unit
    assert not CoefficientRing.parse("Z").two_is_unit


def test_element_round_trip(R):
    for text in ["x^2 + y^2", "3/2*x - y^4", "0", "1"]:
        e = R.parse(text)
        assert R.parse(str(e)) == e
    Rp = ProductRing((localize(R, "x"), localize(R, "y")))
    e = Rp.parse("(x^-1, 2*y)")
    assert Rp.parse(str(e)) == e


@given(st.integers(-6, 6), st.integers(-6, 6))
def test_parity_is_a_homomorphism(a, b):
    for g in (GradingSpec("Z", "koszul"), GradingSpec("Z", "trivial"), GradingSpec("Z/2")):
        assert g.eps(g.add(a, b)) == g.eps(a) * g.eps(b)


NAMES = "abcde"
RELS = ["a*b", "c^2", "b*d*e"]

polys = st.dictionaries(
    st.tuples(*[st.integers(0, 2) for _ in NAMES]).filter(lambda m: sum(m) <= 6),
    st.fractions(min_value=-3, max_value=3, max_denominator=3),
    max_size=4)


@settings(max_examples=60, deadline=None)
@given(polys, polys)
def test_normal_form_is_a_ring_map(p, q):
    B = ring(NAMES, RELS)
    prod = {}
    for (m, c), (n, d) in itertools.product(p.items(), q.items()):
        k = tuple(i + j for i, j in zip(m, n))
        prod[k] = prod.get(k, 0) + c * d
    total = dict(p)
    for m, c in q.items():
        total[m] = total.get(m, 0) + c
    assert normal_form(B, prod) == normal_form(B, p) * normal_form(B, q)
    assert normal_form(B, total) == normal_form(B, p) + normal_form(B, q)


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(list(itertools.permutations("xyz", 2))))
def test_localization_order_does_not_matter(pair):
    g, h = pair
    B = ring("xyz", ["x*y", "y*z^2"])
    one, two = localize(localize(B, g), h), localize(localize(B, h), g)
    box = itertools.product(range(-4, 5), repeat=3)
    for m in box:
        if sum(abs(e) for e in m) <= 8:
            assert one.is_normal(m) == two.is_normal(m)


def test_spec_covering():
    B = ring("xy", ["x*y"])
    Bx, By = localize(B, "x"), localize(B, "y")
    P = ProductRing((Bx, By))
    # after inverting, each factor's generator is a unit, so {x, y} generates the unit ideal of each factor
    assert unit_ideal_combination(Bx, [Bx.parse("x"), Bx.parse("y")]) is not None
    for p in spec_monomial_primes(B):
        if p.minimal:
            assert basic_open_contains(B.parse("x"), p) or basic_open_contains(B.parse("y"), p)
    assert P.is_product


@given(st.lists(st.integers(-5, 5), max_size=5), st.lists(st.integers(-5, 5), max_size=5))
def test_parity_pushforward_monoidal(a, b):
    g = GradingSpec("Z", "koszul")
    tensor = [x + y for x in a for y in b]
    pushed = sorted((x + y) % 2 for x in parity_pushforward(g, a) for y in parity_pushforward(g, b))
    assert sorted(parity_pushforward(g, tensor)) == pushed
