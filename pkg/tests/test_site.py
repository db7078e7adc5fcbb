import pytest

from gradedhom.complex import ChainComplex, ChainMap, cone, fiber, homology_module, induced_map, shift, shift_map
from gradedhom.errors import BoundExceeded, HypothesisFailed, NotAnEpi
from gradedhom.gmod import FreeGradedModule, GradedMatrix
from gradedhom import linalg
from gradedhom.site import (
    VIOLATION,
    Catalog,
    catalog_closure,
    classify_catalog,
    classify_dual,
    classify_epi,
    cofiber_closure_check,
    compare_theories,
    cover_pullback,
    exactness_of_cover,
    random_cover_pairs,
)


def concentrated(R, *shifts):
    return ChainComplex.concentrated(FreeGradedModule(R, tuple(shifts)))


def degree0_map(X, Y, entries):
    return ChainMap(X, Y, {0: GradedMatrix.from_strings(X.term(0), Y.term(0), entries)})


@pytest.fixture(scope="module")
def maps(example):
    return {k: f for k, (_, _, f) in example.catalog.maps.items()}


@pytest.fixture(scope="module")
def K(maps):
    return cone(maps["y"])


def test_theories_are_sane(example):
    for H in (example.A, example.Rprime, example.identity):
        assert H.sanity_check()


def test_classify_dual_examples(example, maps, K):
    a = classify_dual(example.A, K)
    assert a.verdict == "HDual"
    assert a.types() == {(0, 0): ((0, 0),), (1, 0): ((0, 1),)}
    r = classify_dual(example.Rprime, K)
    assert r.verdict == "HDual"
    # on R_x both H_0 and H_1 are rank one, on R_y the complex is acyclic
    assert r.types() == {(0, 0): ((0, 0),), (1, 0): ((0, 1),), (0, 1): (), (1, 1): ()}
    assert classify_dual(example.A, cone(maps["p"])).verdict == "NotHDual"


def test_classify_epi_examples(example, maps):
    assert classify_epi(example.Rprime, maps["p"]).verdict == "Epi"
    cert = classify_epi(example.A, maps["p"])
    assert cert.verdict == "NotEpi" and cert.exact
    # A (x) p = (x 0) misses the generator of A in weight 0
    assert (0, 0, (0, 0)) in cert.failures
    for H in (example.A, example.Rprime, example.identity):
        for X in example.catalog.objects.values():
            assert classify_epi(H, ChainMap.identity(X)).is_epi


def test_cofiber_closure_examples(example, maps):
    X = example.catalog.objects["R(1)"]
    for H in (example.A, example.Rprime):
        assert cofiber_closure_check(H, ChainMap.zero(X, X)).passed
        assert cofiber_closure_check(H, ChainMap.identity(X)).passed
    rep = cofiber_closure_check(example.Rprime, maps["y"])
    assert rep.passed and rep.retraction_found
    with pytest.raises(HypothesisFailed):
        cofiber_closure_check(example.A, maps["p"])


def test_cover_pullback_examples(example, R, maps):
    U = example.catalog.objects["R"]
    V2 = concentrated(R, (0, 0), (0, 0))
    ident = ChainMap.identity(U)
    for H in (example.A, example.Rprime):
        cp = cover_pullback(H, ident, maps["y"])
        assert cp.p_prime_epi.is_epi and cp.square_commutes
        split = degree0_map(V2, U, [["1", "0"]])
        cp = cover_pullback(H, split, maps["x"])
        assert cp.p_prime_epi.is_epi and cp.square_commutes
    cp = cover_pullback(example.Rprime, maps["p"], maps["x"])
    assert cp.p_prime_epi.is_epi and cp.square_commutes
    with pytest.raises(NotAnEpi):
        cover_pullback(example.A, maps["p"], maps["x"])


def test_exactness_of_cover_examples(example, R, maps):
    U = example.catalog.objects["R"]
    V2 = concentrated(R, (0, 0), (0, 0))
    for H in (example.A, example.Rprime):
        assert exactness_of_cover(H, ChainMap.identity(U)).exact
        assert exactness_of_cover(H, degree0_map(V2, U, [["1", "0"]])).exact
    assert exactness_of_cover(example.Rprime, maps["p"]).exact


def test_compare_theories_examples(example):
    same = compare_theories(example.A, example.A, example.catalog)
    assert not same.dual_discrepancies and not same.epi_discrepancies
    rep = compare_theories(example.A, example.Rprime, example.catalog)
    assert rep.verdict == VIOLATION
    assert ("p", "NotEpi", "Epi") in rep.epi_discrepancies
    cat = Catalog(dict(example.catalog.objects), dict(example.catalog.maps))
    cat.add_object("K(y)", cone(example.catalog.maps["y"][2]))
    rep = compare_theories(example.A, example.identity, cat)
    assert ("K(y)", "HDual", "NotHDual") in rep.dual_discrepancies
    assert rep.verdict == VIOLATION


def test_catalog_closure_examples(R, example):
    unit = concentrated(R, (0, 0))
    seeds = Catalog({"R": unit})
    c = catalog_closure(seeds, 1)
    assert set(c.objects) == {"R", "R[1]", "R[-1]"}
    y = degree0_map(concentrated(R, (0, 1)), unit, [["y"]])
    seeds = Catalog({"R": unit, "R(1)": y.source}, {"y": ("R(1)", "R", y)})
    c = catalog_closure(seeds, 1)
    assert "cone(y)" in c.objects
    big = catalog_closure(example.catalog, 2)
    assert len(big.objects) <= 64
    with pytest.raises(BoundExceeded):
        catalog_closure(example.catalog, 4)


def test_closed_catalog_size(closed):
    assert (len(closed.objects), len(closed.maps)) == (51, 72)


# -- properties ---------------------------------------------------------------

def test_self_comparison_is_neutral(example, closed):
    for H in (example.A, example.Rprime):
        rep = compare_theories(H, H, closed)
        assert rep.dual_discrepancies == () and rep.epi_discrepancies == ()


def test_every_map_between_duals_is_classified(example, closed):
    duals, epis = classify_catalog(example.Rprime, closed)
    for name, (s, t, _) in closed.maps.items():
        if duals[s].is_dual and duals[t].is_dual:
            assert epis[name].verdict in ("Epi", "NotEpi", "Unknown")


def test_shift_invariance(example, closed):
    for H in (example.A, example.Rprime):
        for name, X in list(closed.objects.items())[:12]:
            base = classify_dual(H, X)
            for k in (-1, 1):
                moved = classify_dual(H, shift(X, k))
                assert moved.verdict == base.verdict
                assert moved.types() == {(n + k, i): t for (n, i), t in base.types().items()}


def test_dual_closure(example, closed):
    H = example.Rprime
    duals, epis = classify_catalog(H, closed)
    checked = 0
    for name, (s, t, f) in closed.maps.items():
        if name not in epis:
            continue
        try:
            rep = cofiber_closure_check(H, f)
        except HypothesisFailed:
            continue
        assert rep.cone_verdict == "HDual" and rep.fiber_verdict == "HDual"
        checked += 1
    assert checked


def test_homological_middle_exactness(example, closed):
    """H_n(X) -> H_n(Y) -> H_n(cone f) composes to zero and is exact in the middle."""
    H = example.A
    for name, (s, t, f) in list(closed.maps.items())[:30]:
        g = H.apply_map(f)
        C = cone(g)
        incl = ChainMap(g.target, C, {n: GradedMatrix.from_strings(
            g.target.term(n), C.term(n),
            [["0"] * g.target.term(n).rank] * g.source.term(n - 1).rank
            + [["1" if i == j else "0" for j in range(g.target.term(n).rank)] for i in range(g.target.term(n).rank)])
            for n in g.target.terms})
        for n in g.target.terms:
            HX, HY, HC = (homology_module(Z, n) for Z in (g.source, g.target, C))
            for w in range(0, 6):
                for sl in g.target.term(n).slices_at(w):
                    dy = HY.dim(sl)
                    if not dy:
                        continue
                    a = induced_map(g, n, sl) if HX.dim(sl) else []
                    b = induced_map(incl, n, sl) if HC.dim(sl) else []
                    ra = linalg.rank(a, HX.dim(sl)) if a else 0
                    rb = linalg.rank(b, dy) if b else 0
                    assert ra + rb == dy, (name, n, sl)


def test_epi_stability_under_pullback(example, closed):
    for H in (example.A, example.Rprime):
        for p, f in random_cover_pairs(H, closed, 5, seed=3):
            cp = cover_pullback(H, closed.maps[p][2], closed.maps[f][2])
            assert cp.p_prime_epi.is_epi and cp.square_commutes


def test_exactness_of_every_cover(example, closed):
    H = example.Rprime
    duals, epis = classify_catalog(H, closed)
    for name, cert in epis.items():
        if cert.is_epi:
            assert exactness_of_cover(H, closed.maps[name][2]).exact, name
