"""Homology theories H = H_*(A (x) -) given by base change, and the site of H-duals.

An object is an H-dual when every H_n is finitely generated projective over A
(over a product ring: projective on every factor); a map is an H-epimorphism
when every H_n(f) is surjective.  All checks run slice by slice up to the
truncation W and inherit the freeness certificates' exactness flags.
"""

import random
from dataclasses import dataclass, field

from . import linalg
from .complex import (
    ChainComplex,
    ChainMap,
    base_change,
    base_change_map,
    complex_key,
    cone,
    direct_sum_complex,
    dual_complex,
    fiber,
    homology,
    homology_module,
    induced_map,
    shift,
    shift_map,
    validate,
)
from .errors import BoundExceeded, HypothesisFailed, InputError, NotAnEpi, RingMismatch
from .gmod import FreeGradedModule, GradedMatrix, Subquotient, direct_sum_matrix, free_rank_type
from .gring import AlgebraMap, Generator, GradedRing, ProductRing, localize

MAX_OBJECTS = 64
MAX_DEPTH = 3


@dataclass(frozen=True)
class HomologyTheory:
    name: str
    phi: AlgebraMap
    W: int = 10
    flat: str = "undeclared"

    @property
    def base(self):
        return self.phi.source

    @property
    def algebra(self):
        return self.phi.target

    def components(self):
        """Indices of the nonzero factors of the coefficient algebra."""
        A = self.algebra
        return [i for i, c in enumerate(A.components) if not c.is_zero_ring]

    def apply(self, X):
        return base_change(self.phi, X)

    def apply_map(self, f):
        return base_change_map(self.phi, f)

    def part(self, Y, i):
        return Y.component(i) if isinstance(self.algebra, ProductRing) else Y

    def sanity_check(self):
        """H of the unit complex is A in degree 0."""
        unit = ChainComplex.concentrated(FreeGradedModule.unit(self.base))
        e = homology(self.apply(unit), 0, self.W, actions=False)
        want = {}
        for i in self.components():
            A = self.algebra.components[i]
            for w in range(0, self.W + 1):
                k = len(A.weight_basis(w))
                if k:
                    want[w] = want.get(w, 0) + k
        return e.by_weight() == want


def _window(ring, lo, W):
    return list(range(lo, W + 1))


# -- duals -------------------------------------------------------------------

@dataclass(frozen=True)
class DualCertificate:
    complex_id: str
    verdict: str                     # "HDual", "NotHDual" or "Unknown"
    certificates: tuple = ()         # (degree, component, FreenessCertificate)
    reason: str = ""
    truncation: int = 0

    @property
    def is_dual(self):
        return self.verdict == "HDual"

    def types(self):
        return {(n, i): c.type for n, i, c in self.certificates if c.is_free}

    def to_json(self):
        return {"complex": self.complex_id, "verdict": self.verdict, "reason": self.reason,
                "truncation": self.truncation,
                "degrees": [{"degree": n, "component": i, **c.to_json()} for n, i, c in self.certificates]}


def classify_dual(H, X, W=None, name="X"):
    W = H.W if W is None else W
    validate(X)
    Y = H.apply(X)
    certs = []
    verdict, reason = "HDual", ""
    for n in X.degrees():
        for i in H.components():
            Yi = H.part(Y, i)
            if not Yi.term(n).rank:
                continue
            cert = free_rank_type(homology_module(Yi, n), W)
            certs.append((n, i, cert))
            if cert.verdict == "NotProjective" and verdict != "NotHDual":
                verdict = "NotHDual"
                reason = f"H_{n} on factor {i} is not projective (kernel at bidegree {cert.witness})"
            elif cert.verdict == "UnknownUpTo" and verdict == "HDual":
                verdict = "Unknown"
                reason = f"H_{n} on factor {i} undecided up to W={W}"
    return DualCertificate(name, verdict, tuple(certs), reason, W)


# -- epimorphisms ------------------------------------------------------------

@dataclass(frozen=True)
class EpiCertificate:
    map_id: str
    verdict: str                     # "Epi", "NotEpi" or "Unknown"
    failures: tuple = ()             # (degree, component, bidegree)
    exact: bool = True
    truncation: int = 0

    @property
    def is_epi(self):
        return self.verdict == "Epi"

    def to_json(self):
        return {"map": self.map_id, "verdict": self.verdict, "exact": self.exact,
                "truncation": self.truncation, "failures": [list(f[:2]) + [list(f[2])] for f in self.failures]}


def _slice_window(module, ring, W):
    """Bidegrees to check for a statement about all slices of a subquotient of ``module``."""
    lo = module.min_weight
    if ring.profile == "laurent":
        weights = range(lo, lo + ring.period)
        exact = True
    elif ring.profile == "finite":
        top = module.max_weight + ring.top_weight
        weights = range(lo, min(W, top) + 1)
        exact = W >= top
    else:
        weights = range(lo, W + 1)
        exact = False
    return [s for w in weights for s in module.slices_at(w)], exact


def _surjective_on(f, n, W):
    """(failing bidegrees, exact) for H_n(f) over a single-component ring."""
    HY = homology_module(f.target, n)
    slices, exact = _slice_window(f.target.term(n), f.target.ring, W)
    bad = []
    for s in slices:
        dy = HY.dim(s)
        if not dy:
            continue
        m = induced_map(f, n, s)
        ncols = len(m[0]) if m else 0
        if not ncols or linalg.rank(m, ncols) < dy:
            bad.append(s)
    return bad, exact


def classify_epi(H, f, W=None, name="f"):
    W = H.W if W is None else W
    g = H.apply_map(f)
    failures = []
    exact = True
    for n in sorted(set(f.source.terms) | set(f.target.terms)):
        for i in H.components():
            gi = g.component(i) if isinstance(H.algebra, ProductRing) else g
            if not gi.target.term(n).rank:
                continue
            bad, ex = _surjective_on(gi, n, W)
            exact = exact and ex
            failures.extend((n, i, s) for s in bad)
    if failures:
        return EpiCertificate(name, "NotEpi", tuple(failures), True, W)
    return EpiCertificate(name, "Epi", (), exact, W)


# -- cofibers ----------------------------------------------------------------

def _cokernel_of_induced(f, n):
    """coker(H_n f) as a subquotient of the target's degree-n term."""
    HY = homology_module(f.target, n)
    HX = homology_module(f.source, n)
    fn = f.at(n)

    def boundaries(s):
        out = list(HY.boundaries(s))
        if fn.source.rank and fn.target.rank and HX.n(s):
            m = fn.slice_matrix(s)
            for z in HX.cycles(s):
                out.append(linalg.matvec(m, z))
        return out

    return Subquotient(f.target.term(n), HY.cycles, boundaries, hi=HY.hi)


def _inclusion_into_cone(f):
    """The chain map Y -> cone(f) onto the second summand."""
    C = cone(f)
    X, Y = f.source, f.target
    comps = {}
    for n in Y.terms:
        ring = Y.ring
        top = GradedMatrix.zero(Y.term(n), X.term(n - 1))
        comps[n] = direct_sum_matrix([[top], [GradedMatrix.identity(Y.term(n))]], [Y.term(n)],
                                     [X.term(n - 1), Y.term(n)])
    return C, ChainMap(Y, C, comps)


def _find_retraction(Ck, K, incl, slices):
    """Solve for slice maps r_s: K_s -> Ck_s with r o i = id, natural for the ring generators."""
    ring = K.ring
    var = {}
    count = 0
    dims = {}
    for s in slices:
        c, k = Ck.dim(s), K.dim(s)
        dims[s] = (c, k)
        var[s] = count
        count += c * k
    eqs, rhs = [], []

    def vidx(s, a, b):
        return var[s] + a * dims[s][1] + b

    for s in slices:
        c, k = dims[s]
        if not c:
            continue
        # i_s in quotient coordinates: columns = images of Ck reps
        qk = K.quotient(s)
        m = incl.slice_matrix(s) if incl.source.rank and incl.target.rank else None
        icols = [qk.coords(linalg.matvec(m, rep)) for rep in Ck.quotient(s).reps]
        for a in range(c):
            for b in range(c):
                row = [linalg.ZERO] * count
                for t in range(k):
                    if icols[b][t] != 0:
                        row[vidx(s, a, t)] += icols[b][t]
                eqs.append(row)
                rhs.append(linalg.ONE if a == b else linalg.ZERO)
    sset = set(slices)
    for i in ring.surviving():
        gen = ring.generators[i]
        key = [0] * ring.nvars
        key[i] = 1
        key = tuple(key)
        for s in slices:
            t = (ring.grading.add(s[0], gen.degree), s[1] + gen.weight)
            if t not in sset:
                continue
            cs, ks = dims[s]
            ct, kt = dims[t]
            if not ct or not ks:
                continue
            gk, _ = K.act(key, s)       # kt x ks
            gc, _ = Ck.act(key, s)      # ct x cs
            # r_t gk = gc r_s
            for a in range(ct):
                for b in range(ks):
                    row = [linalg.ZERO] * count
                    for t2 in range(kt):
                        if gk[t2][b] != 0:
                            row[vidx(t, a, t2)] += gk[t2][b]
                    for c2 in range(cs):
                        if gc[a][c2] != 0:
                            row[vidx(s, c2, b)] -= gc[a][c2]
                    eqs.append(row)
                    rhs.append(linalg.ZERO)
    if not eqs:
        return {}
    x = linalg.solve(eqs, count, rhs)
    if x is None:
        return None
    return {s: [[x[vidx(s, a, b)] for b in range(dims[s][1])] for a in range(dims[s][0])] for s in slices}


@dataclass(frozen=True)
class CofiberReport:
    cone_verdict: str
    fiber_verdict: str
    retraction_found: bool
    cokernel_types: tuple
    truncation: int

    @property
    def passed(self):
        return self.cone_verdict == "HDual" and self.fiber_verdict == "HDual" and self.retraction_found

    def to_json(self):
        return {"cone": self.cone_verdict, "fiber": self.fiber_verdict, "retraction_found": self.retraction_found,
                "cokernel_types": [[n, i, [list(s) for s in t]] for n, i, t in self.cokernel_types],
                "passed": self.passed, "truncation": self.truncation}


def cofiber_closure_check(H, f, W=None):
    W = H.W if W is None else W
    for label, X in (("source", f.source), ("target", f.target)):
        if not classify_dual(H, X, W).is_dual:
            raise HypothesisFailed(f"the {label} is not an H-dual")
    g = H.apply_map(f)
    types = []
    found = True
    C, incl = _inclusion_into_cone(f)
    gC = H.apply(C)
    gincl = H.apply_map(incl)
    for n in sorted(f.target.terms):
        for i in H.components():
            gi = g.component(i) if isinstance(H.algebra, ProductRing) else g
            if not gi.target.term(n).rank:
                continue
            Ck = _cokernel_of_induced(gi, n)
            cert = free_rank_type(Ck, W)
            if not cert.is_free:
                raise HypothesisFailed(f"coker H_{n}(f) on factor {i} is not certified projective ({cert.verdict})")
            types.append((n, i, cert.type))
            Ci = H.part(gC, i)
            inc = gincl.component(i) if isinstance(H.algebra, ProductRing) else gincl
            K = homology_module(Ci, n)
            slices, _ = _slice_window(Ck.ambient, Ck.ring, W)
            slices = [s for s in slices if s in set(Ci.term(n).slices_at(s[1]))]
            r = _find_retraction(Ck, K, inc.at(n), slices)
            found = found and r is not None
    return CofiberReport(classify_dual(H, C, W).verdict, classify_dual(H, fiber(f), W).verdict,
                         found, tuple(types), W)


# -- covers ------------------------------------------------------------------

@dataclass(frozen=True)
class CoverPullback:
    fiber: ChainComplex
    p_prime: ChainMap
    f_prime: ChainMap
    p_prime_epi: EpiCertificate
    square_commutes: bool

    def to_json(self):
        return {"p_prime": self.p_prime_epi.to_json(), "square_commutes": self.square_commutes,
                "fiber_terms": {str(n): [list(s) for s in m.shifts] for n, m in sorted(self.fiber.terms.items())}}


def _pair_map(p, f):
    """(p  -f): X + B' -> B."""
    X, Bp, B = p.source, f.source, p.target
    src = direct_sum_complex(X, Bp)
    comps = {}
    for n in src.terms:
        comps[n] = direct_sum_matrix([[p.at(n), f.at(n).scale(-1)]], [X.term(n), Bp.term(n)], [B.term(n)])
    return ChainMap(src, B, comps)


def _projection_from_fiber(F, X, Bp, B, which):
    """Projection of fiber((p -f))_n = X_n + B'_n + B_{n+1} onto X (which=0) or B' (which=1)."""
    comps = {}
    for n in F.terms:
        parts = [X.term(n), Bp.term(n), B.term(n + 1)]
        target = parts[which]
        blocks = [[GradedMatrix.identity(target) if k == which else GradedMatrix.zero(parts[k], target)
                   for k in range(3)]]
        comps[n] = direct_sum_matrix(blocks, parts, [target])
    return ChainMap(F, X if which == 0 else Bp, comps)


def _same_on_homology(H, a, b, W):
    ga, gb = H.apply_map(a), H.apply_map(b)
    for n in sorted(a.source.terms):
        for i in H.components():
            ai = ga.component(i) if isinstance(H.algebra, ProductRing) else ga
            bi = gb.component(i) if isinstance(H.algebra, ProductRing) else gb
            if not ai.source.term(n).rank:
                continue
            slices, _ = _slice_window(ai.source.term(n), ai.source.ring, W)
            for s in slices:
                if induced_map(ai, n, s) != induced_map(bi, n, s):
                    return False
    return True


def cover_pullback(H, p, f, W=None):
    W = H.W if W is None else W
    if p.target != f.target:
        raise InputError("p and f must have a common target")
    if not classify_epi(H, p, W).is_epi:
        raise NotAnEpi("p is not an H-epimorphism")
    g = _pair_map(p, f)
    F = fiber(g)
    p_prime = _projection_from_fiber(F, p.source, f.source, p.target, 1)
    f_prime = _projection_from_fiber(F, p.source, f.source, p.target, 0)
    p_prime.check()
    f_prime.check()
    epi = classify_epi(H, p_prime, W, "p'")
    square = _same_on_homology(H, p.compose(f_prime), f.compose(p_prime), W)
    return CoverPullback(F, p_prime, f_prime, epi, square)


@dataclass(frozen=True)
class CoverExactness:
    exact: bool
    failures: tuple
    truncation: int

    def to_json(self):
        return {"exact": self.exact, "failures": [list(x) for x in self.failures], "truncation": self.truncation}


def exactness_of_cover(H, p, W=None):
    """0 -> H_n(fiber p) -> H_n(source) -> H_n(target) -> 0 on every slice <= W."""
    W = H.W if W is None else W
    X, B = p.source, p.target
    F = fiber(p)
    proj = {}
    for n in F.terms:
        parts = [X.term(n), B.term(n + 1)]
        proj[n] = direct_sum_matrix([[GradedMatrix.identity(X.term(n)), GradedMatrix.zero(B.term(n + 1), X.term(n))]],
                                    parts, [X.term(n)])
    q = ChainMap(F, X, proj)
    gq, gp = H.apply_map(q), H.apply_map(p)
    failures = []
    degrees = sorted(set(F.terms) | set(X.terms) | set(B.terms))
    for n in degrees:
        for i in H.components():
            qi = gq.component(i) if isinstance(H.algebra, ProductRing) else gq
            pi = gp.component(i) if isinstance(H.algebra, ProductRing) else gp
            HF, HX, HB = (homology_module(c, n) for c in (qi.source, pi.source, pi.target))
            lo = min([m.min_weight for m in (qi.source.term(n), pi.source.term(n), pi.target.term(n)) if m.rank],
                     default=0)
            for w in range(lo, W + 1):
                for s in set(qi.source.term(n).slices_at(w)) | set(pi.source.term(n).slices_at(w)) | set(
                        pi.target.term(n).slices_at(w)):
                    dF, dX, dB = HF.dim(s), HX.dim(s), HB.dim(s)
                    rq = _rank(induced_map(qi, n, s), dF) if dF and dX else 0
                    rp = _rank(induced_map(pi, n, s), dX) if dX and dB else 0
                    if rq != dF or rp != dB or rq != dX - rp:
                        failures.append((n, i, s[0], s[1]))
    return CoverExactness(not failures, tuple(failures), W)


def _rank(m, ncols):
    return linalg.rank(m, ncols) if m else 0


# -- comparing theories ------------------------------------------------------

@dataclass
class Catalog:
    objects: dict = field(default_factory=dict)     # name -> ChainComplex
    maps: dict = field(default_factory=dict)        # name -> (source name, target name, ChainMap)

    def add_object(self, name, X):
        self.objects[name] = X

    def add_map(self, name, src, tgt, f):
        self.maps[name] = (src, tgt, f)


@dataclass(frozen=True)
class SiteReport:
    theories: tuple
    duals: dict                   # theory -> {object: DualCertificate}
    epis: dict                    # theory -> {map: EpiCertificate}
    dual_discrepancies: tuple = ()
    epi_discrepancies: tuple = ()
    verdict: str = ""

    def to_json(self):
        out = {"theories": list(self.theories), "verdict": self.verdict,
               "dual_discrepancies": [list(d) for d in self.dual_discrepancies],
               "epi_discrepancies": [list(d) for d in self.epi_discrepancies], "objects": {}, "maps": {}}
        for t in self.theories:
            out["objects"][t] = {k: v.verdict for k, v in self.duals[t].items()}
            out["maps"][t] = {k: v.verdict for k, v in self.epis[t].items()}
        return out


def classify_catalog(H, catalog, W=None):
    duals = {name: classify_dual(H, X, W, name) for name, X in catalog.objects.items()}
    epis = {}
    for name, (s, t, f) in catalog.maps.items():
        if duals[s].is_dual and duals[t].is_dual:
            epis[name] = classify_epi(H, f, W, name)
    return duals, epis


def site_report(H, catalog, W=None):
    duals, epis = classify_catalog(H, catalog, W)
    return SiteReport((H.name,), {H.name: duals}, {H.name: epis}, verdict="classified")


VIOLATION = "flat-replacement condition (i) violated"


def compare_theories(H1, H2, catalog, W=None):
    if H1.base != H2.base:
        raise RingMismatch("theories over different base rings")
    d1, e1 = classify_catalog(H1, catalog, W)
    d2, e2 = classify_catalog(H2, catalog, W)
    dual_disc = []
    for name in catalog.objects:
        a, b = d1[name].verdict, d2[name].verdict
        if a != b:
            dual_disc.append((name, a, b))
    epi_disc = []
    for name in catalog.maps:
        if name in e1 and name in e2 and e1[name].verdict != e2[name].verdict:
            epi_disc.append((name, e1[name].verdict, e2[name].verdict))
    lost_dual = any(a == "HDual" and b == "NotHDual" for _, a, b in dual_disc)
    verdict = VIOLATION if epi_disc or lost_dual else "no violation found"
    return SiteReport((H1.name, H2.name), {H1.name: d1, H2.name: d2}, {H1.name: e1, H2.name: e2},
                      tuple(dual_disc), tuple(epi_disc), verdict)


# -- catalogs ----------------------------------------------------------------

def catalog_closure(seeds, depth=1, max_objects=MAX_OBJECTS):
    """Close a seed catalog under shifts, duals, sums of seed objects and cones of listed maps.

    Maps carried along are the seed maps, their shifts, and identities of all
    objects.  Complexes are deduplicated by their normalized presentation.
    """
    if depth > MAX_DEPTH:
        raise BoundExceeded(f"depth {depth} exceeds the bound {MAX_DEPTH}")
    out = Catalog()
    keys = {}

    def add(name, X):
        k = complex_key(X)
        if k in keys:
            return keys[k], False
        if len(out.objects) >= max_objects:
            raise BoundExceeded(f"catalog exceeds {max_objects} objects")
        out.add_object(name, X)
        keys[k] = name
        return name, True

    for name, X in seeds.objects.items():
        add(name, X)
    seed_maps = dict(seeds.maps)
    for name, (s, t, f) in seed_maps.items():
        out.add_map(name, keys[complex_key(f.source)], keys[complex_key(f.target)], f)
    frontier = list(out.objects)
    current_maps = dict(out.maps)
    seed_names = list(out.objects)
    for level in range(depth):
        new = []
        for name in frontier:
            X = out.objects[name]
            for label, Y in ((f"{name}[1]", shift(X, 1)), (f"{name}[-1]", shift(X, -1)), (f"{name}^v", dual_complex(X))):
                nm, fresh = add(label, Y)
                if fresh:
                    new.append(nm)
        for name, (s, t, f) in list(current_maps.items()):
            nm, fresh = add(f"cone({name})", cone(f))
            if fresh:
                new.append(nm)
        if level == 0:
            for a in range(len(seed_names)):
                for b in range(a + 1, len(seed_names)):
                    x, y = seed_names[a], seed_names[b]
                    nm, fresh = add(f"{x}+{y}", direct_sum_complex(out.objects[x], out.objects[y]))
                    if fresh:
                        new.append(nm)
        next_maps = {}
        for name, (s, t, f) in current_maps.items():
            for k in (1, -1):
                g = shift_map(f, k)
                ks, kt = complex_key(g.source), complex_key(g.target)
                label = f"{name}[{k}]"
                if ks in keys and kt in keys and label not in out.maps:
                    out.add_map(label, keys[ks], keys[kt], g)
                    next_maps[label] = out.maps[label]
        current_maps = next_maps
        frontier = new
    for name, X in list(out.objects.items()):
        out.add_map(f"id({name})", name, name, ChainMap.identity(X))
    return out


@dataclass(frozen=True)
class WorkedExample:
    ring: GradedRing
    A: HomologyTheory
    Rprime: HomologyTheory
    identity: HomologyTheory
    catalog: Catalog


def worked_example(W=10):
    """R = Q[x,y]/(xy) with A = R/y, R' = R_x x R_y and the catalog of R, R(1), R(1)^2 with maps y, x, (x y)."""
    R = GradedRing.build([Generator("x"), Generator("y")], ["x*y"])
    A = AlgebraMap.quotient(R, [(0, 1)])
    Rp = ProductRing((localize(R, "x"), localize(R, "y")))
    phi = AlgebraMap.from_strings(R, Rp, {"x": "(x, 0)", "y": "(0, y)"})
    U = FreeGradedModule.unit(R)
    V = FreeGradedModule(R, ((0, 1),))
    V2 = FreeGradedModule(R, ((0, 1), (0, 1)))
    cat = Catalog()
    objs = {"R": ChainComplex.concentrated(U), "R(1)": ChainComplex.concentrated(V),
            "R(1)^2": ChainComplex.concentrated(V2)}
    for k, v in objs.items():
        cat.add_object(k, v)
    for name, src, ent in (("y", "R(1)", [["y"]]), ("x", "R(1)", [["x"]]), ("p", "R(1)^2", [["x", "y"]])):
        m = GradedMatrix.from_strings(objs[src].term(0), U, ent)
        cat.add_map(name, src, "R", ChainMap(objs[src], objs["R"], {0: m}))
    return WorkedExample(R, HomologyTheory("A", A, W, "declared flat? no (quotient)"),
                        HomologyTheory("R'", phi, W, "flat (product of localizations)"),
                        HomologyTheory("R", AlgebraMap.identity(R), W, "flat"), cat)


def random_cover_pairs(H, catalog, count=10, seed=0, W=None):
    """Random (p, f) with p an H-epi of the catalog and f a catalog map into its target."""
    rng = random.Random(seed)
    duals, epis = classify_catalog(H, catalog, W)
    ps = sorted(n for n, c in epis.items() if c.is_epi)
    proper = [n for n in ps if not n.startswith("id(")]
    ps = proper or ps
    pairs = []
    for _ in range(count * 20):
        if len(pairs) == count or not ps:
            break
        p = rng.choice(ps)
        t = catalog.maps[p][1]
        fs = sorted(n for n, (s, tt, _) in catalog.maps.items() if tt == t)
        proper = [n for n in fs if not n.startswith("id(")]
        pairs.append((p, rng.choice(proper or fs)))
    return pairs
