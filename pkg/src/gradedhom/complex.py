"""Bounded chain complexes of free graded modules and their slice homology.

Differentials d_n: X_n -> X_{n-1} are degree-zero matrices; the homological
degree carries the sign (-1)^n in the Koszul rule.  Homology is computed one
bidegree slice at a time and reported per weight.
"""

import itertools
from dataclasses import dataclass, field

from . import linalg
from .errors import (
    DSquaredNonzero,
    ExactnessAuditFailed,
    InputError,
    RingMismatch,
    TruncationTooSmall,
)
from .gmod import FreeGradedModule, GradedMatrix, Subquotient, direct_sum_matrix, tensor_map
from .gring import AlgebraMap, GradedRing, ProductRing, format_monomial


def _zero_module(ring):
    return FreeGradedModule(ring, ())


@dataclass(frozen=True)
class ChainComplex:
    ring: object
    terms: dict
    differentials: dict = field(default_factory=dict)

    def __post_init__(self):
        terms = {int(n): m for n, m in self.terms.items() if m.rank}
        diffs = {}
        for n, d in self.differentials.items():
            n = int(n)
            if d.ring != self.ring:
                raise RingMismatch(f"d_{n} is over a different ring")
            if d.degree != (0, 0):
                raise InputError(f"d_{n} must have degree zero")
            if d.source.rank and d.target.rank and not d.is_zero:
                diffs[n] = d
        for n, d in diffs.items():
            if d.source != terms.get(n, _zero_module(self.ring)) or d.target != terms.get(n - 1, _zero_module(self.ring)):
                raise InputError(f"d_{n} does not map X_{n} to X_{n - 1}")
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "differentials", diffs)

    @classmethod
    def concentrated(cls, module, n=0):
        return cls(module.ring, {n: module})

    @classmethod
    def from_maps(cls, ring, terms, maps):
        """``maps[n]`` may be a GradedMatrix or rows of entry strings."""
        terms = {int(n): (m if isinstance(m, FreeGradedModule) else FreeGradedModule(ring, tuple(tuple(s) for s in m)))
                 for n, m in terms.items()}
        diffs = {}
        for n, d in maps.items():
            n = int(n)
            if not isinstance(d, GradedMatrix):
                d = GradedMatrix.from_strings(terms.get(n, _zero_module(ring)), terms.get(n - 1, _zero_module(ring)), d)
            diffs[n] = d
        return cls(ring, terms, diffs)

    def term(self, n):
        return self.terms.get(n, _zero_module(self.ring))

    def d(self, n):
        d = self.differentials.get(n)
        if d is None:
            return GradedMatrix.zero(self.term(n), self.term(n - 1))
        return d

    @property
    def support(self):
        if not self.terms:
            return (0, -1)
        return (min(self.terms), max(self.terms))

    def degrees(self):
        lo, hi = self.support
        return range(lo, hi + 1)

    def component(self, i):
        ring = self.ring.components[i]
        return ChainComplex(ring, {n: m.component(i) for n, m in self.terms.items()},
                            {n: d.component(i) for n, d in self.differentials.items()})

    def __str__(self):
        parts = []
        for n in sorted(self.terms, reverse=True):
            parts.append(f"X_{n}={list(self.terms[n].shifts)}")
            if n - 1 in self.terms and n in self.differentials:
                parts.append(f"--{self.differentials[n]}-->")
        return " ".join(parts)


def validate(X):
    """Raise DSquaredNonzero at the first failing degree; return True otherwise."""
    for n in sorted(X.differentials):
        if n - 1 in X.differentials:
            if not X.d(n - 1).compose(X.d(n)).is_zero:
                raise DSquaredNonzero(n)
    return True


@dataclass(frozen=True)
class ChainMap:
    source: ChainComplex
    target: ChainComplex
    components: dict

    def __post_init__(self):
        comps = {}
        for n in set(self.source.terms) | set(self.target.terms):
            f = self.components.get(n)
            if f is None:
                f = GradedMatrix.zero(self.source.term(n), self.target.term(n))
            if f.source != self.source.term(n) or f.target != self.target.term(n):
                raise InputError(f"component {n} has the wrong source or target")
            comps[n] = f
        object.__setattr__(self, "components", comps)

    def at(self, n):
        return self.components.get(n) or GradedMatrix.zero(self.source.term(n), self.target.term(n))

    def check(self):
        for n in self.source.degrees():
            lhs = self.target.d(n).compose(self.at(n))
            rhs = self.at(n - 1).compose(self.source.d(n))
            if lhs != rhs:
                raise InputError(f"chain map does not commute with differentials in degree {n}")
        return True

    @classmethod
    def identity(cls, X):
        return cls(X, X, {n: GradedMatrix.identity(m) for n, m in X.terms.items()})

    def component(self, i):
        return ChainMap(self.source.component(i), self.target.component(i),
                        {n: f.component(i) for n, f in self.components.items()})

    def compose(self, other):
        """self o other."""
        if other.target != self.source:
            raise InputError("composition of incompatible chain maps")
        return ChainMap(other.source, self.target,
                        {n: self.at(n).compose(other.at(n)) for n in other.source.terms})

    def scale(self, c):
        return ChainMap(self.source, self.target, {n: f.scale(c) for n, f in self.components.items()})

    @classmethod
    def zero(cls, X, Y):
        return cls(X, Y, {})


def shift_map(f, k):
    return ChainMap(shift(f.source, k), shift(f.target, k), {n + k: c for n, c in f.components.items()})


def complex_key(X):
    """A hashable normal form of the presentation, used to deduplicate catalogs."""
    return (tuple((n, X.terms[n].shifts) for n in sorted(X.terms)),
            tuple((n, tuple(tuple(str(a) for a in row) for row in X.differentials[n].entries))
                  for n in sorted(X.differentials)))


def direct_sum_complex(X, Y):
    if X.ring != Y.ring:
        raise RingMismatch("complexes over different rings")
    degs = set(X.terms) | set(Y.terms)
    terms = {n: X.term(n).direct_sum(Y.term(n)) for n in degs}
    diffs = {}
    for n in degs:
        if n - 1 in degs:
            diffs[n] = direct_sum_matrix([[X.d(n), None], [None, Y.d(n)]],
                                         [X.term(n), Y.term(n)], [X.term(n - 1), Y.term(n - 1)])
    return ChainComplex(X.ring, terms, diffs)


# -- structural operations ---------------------------------------------------

def shift(X, k):
    """X[k]_n = X_{n-k} with differential (-1)^k d."""
    sgn = -1 if k % 2 else 1
    return ChainComplex(X.ring, {n + k: m for n, m in X.terms.items()},
                        {n + k: d.scale(sgn) for n, d in X.differentials.items()})


def dual_complex(X):
    """(X^v)_{-n} = (X_n)^v with differential (-1)^{n+1} (d_n)^v from degree -n+1 to -n."""
    terms = {-n: m.dual() for n, m in X.terms.items()}
    diffs = {}
    for n, d in X.differentials.items():
        sgn = -1 if (n + 1) % 2 else 1
        diffs[-n + 1] = d.dual().scale(sgn)
    return ChainComplex(X.ring, terms, diffs)


def cone(f):
    """cone_n = X_{n-1} + Y_n with d = [[-d_X, 0], [f, d_Y]]."""
    X, Y = f.source, f.target
    lo = min(X.support[0] + 1, Y.support[0])
    hi = max(X.support[1] + 1, Y.support[1])
    terms = {n: X.term(n - 1).direct_sum(Y.term(n)) for n in range(lo, hi + 1)}
    diffs = {}
    for n in range(lo + 1, hi + 1):
        diffs[n] = direct_sum_matrix(
            [[-X.d(n - 1), None], [f.at(n - 1), Y.d(n)]],
            [X.term(n - 1), Y.term(n)], [X.term(n - 2), Y.term(n - 1)])
    return ChainComplex(X.ring, terms, diffs)


def fiber(f):
    return shift(cone(f), -1)


def tensor_complex(X, Y):
    if X.ring != Y.ring:
        raise RingMismatch("complexes over different rings")
    ring = X.ring
    xs, ys = sorted(X.terms), sorted(Y.terms)
    if not xs or not ys:
        return ChainComplex(ring, {})
    parts = {}
    for i in xs:
        for j in ys:
            parts.setdefault(i + j, []).append((i, j))
    terms = {}
    for n, pairs in parts.items():
        m = FreeGradedModule(ring, ())
        for i, j in pairs:
            m = m.direct_sum(X.term(i).tensor(Y.term(j)))
        terms[n] = m
    diffs = {}
    for n in parts:
        if n - 1 not in parts:
            continue
        src_pairs, tgt_pairs = parts[n], parts[n - 1]
        blocks = [[None] * len(src_pairs) for _ in tgt_pairs]
        for b, (i, j) in enumerate(src_pairs):
            for a, (i2, j2) in enumerate(tgt_pairs):
                if (i2, j2) == (i - 1, j) and (i in X.differentials):
                    blocks[a][b] = tensor_map(X.d(i), GradedMatrix.identity(Y.term(j)))
                elif (i2, j2) == (i, j - 1) and (j in Y.differentials):
                    m = tensor_map(GradedMatrix.identity(X.term(i)), Y.d(j))
                    blocks[a][b] = m.scale(-1) if i % 2 else m
        diffs[n] = direct_sum_matrix(blocks, [X.term(i).tensor(Y.term(j)) for i, j in src_pairs],
                                     [X.term(i).tensor(Y.term(j)) for i, j in tgt_pairs])
    return ChainComplex(ring, terms, diffs)


def base_change(phi, X):
    """Apply an algebra map entrywise (terms are free, so this is the derived tensor)."""
    if phi.source != X.ring:
        raise RingMismatch("algebra map does not start at the ring of the complex")
    return ChainComplex(phi.target, {n: m.base_change(phi) for n, m in X.terms.items()},
                        {n: d.base_change(phi) for n, d in X.differentials.items()})


def base_change_map(phi, f):
    return ChainMap(base_change(phi, f.source), base_change(phi, f.target),
                    {n: c.base_change(phi) for n, c in f.components.items()})


# -- homology ----------------------------------------------------------------

def _columns(matrix, ncols):
    return linalg.transpose(matrix, ncols) if matrix else []


def homology_module(X, n):
    """H_n(X) as a Subquotient of X_n (single-component rings)."""
    if isinstance(X.ring, ProductRing):
        raise InputError("take homology of a product-ring complex factor by factor")
    Xn = X.term(n)
    dn, dn1 = X.d(n), X.d(n + 1)

    def cycles(s):
        ncols = len(Xn.slice_basis(s))
        if n not in X.differentials:
            return [linalg.unit_vector(ncols, i) for i in range(ncols)]
        return linalg.nullspace(dn.slice_matrix(s), ncols)

    def boundaries(s):
        if n + 1 not in X.differentials:
            return []
        return _columns(dn1.slice_matrix(s), len(X.term(n + 1).slice_basis(s)))

    hi = max(X.term(k).max_weight for k in (n - 1, n, n + 1) if X.term(k).rank) if any(
        X.term(k).rank for k in (n - 1, n, n + 1)) else 0
    return Subquotient(Xn, cycles, boundaries, hi=hi)


@dataclass(frozen=True)
class HomologyEntry:
    """Slice dimensions of H_n for weights start, start+1, ..., truncation."""

    degree: int
    start: int
    dims: tuple
    truncation: int
    actions: dict = field(default_factory=dict, compare=False)

    def by_weight(self):
        return {self.start + i: d for i, d in enumerate(self.dims) if d}

    @property
    def is_zero(self):
        return not any(self.dims)

    def to_json(self):
        return {"degree": self.degree, "start": self.start, "dims": list(self.dims),
                "truncation": self.truncation,
                "actions": {k: list(v) for k, v in sorted(self.actions.items())}}


def _action_ranks(H, W, start):
    """Rank of multiplication by each generator from weight w to w + weight(g)."""
    ring = H.ring
    out = {}
    for i in ring.surviving():
        g = ring.generators[i]
        key = [0] * ring.nvars
        key[i] = 1
        key = tuple(key)
        ranks = []
        for w in range(start, W - g.weight + 1):
            r = 0
            for s in H.ambient.slices_at(w):
                if H.dim(s):
                    m, t = H.act(key, s)
                    r += linalg.rank(m, H.dim(s)) if m else 0
            ranks.append(r)
        out[g.name] = tuple(ranks)
    return out


def homology(X, n, W=10, actions=True):
    """H_n(X) slice by slice for weights up to W."""
    Xn = X.term(n)
    if Xn.rank and Xn.min_weight > W:
        raise TruncationTooSmall(f"X_{n} has generators in weight {Xn.min_weight} > W={W}")
    start = Xn.min_weight if Xn.rank else 0
    if isinstance(X.ring, ProductRing):
        dims = [0] * max(0, W - start + 1)
        acts = {}
        for i in range(len(X.ring.factors)):
            e = homology(X.component(i), n, W, actions)
            for w, d in e.by_weight().items():
                dims[w - start] += d
            acts.update({f"{i}:{k}": v for k, v in e.actions.items()})
        return HomologyEntry(n, start, tuple(dims), W, acts)
    if not Xn.rank:
        return HomologyEntry(n, start, tuple([0] * (W - start + 1)), W)
    H = homology_module(X, n)
    dims = tuple(H.weight_dim(w) for w in range(start, W + 1))
    acts = _action_ranks(H, W, start) if actions else {}
    return HomologyEntry(n, start, dims, W, acts)


@dataclass(frozen=True)
class HomologyReport:
    entries: tuple
    truncation: int
    euler: dict

    def entry(self, n):
        return next(e for e in self.entries if e.degree == n)

    def to_json(self):
        return {"truncation": self.truncation, "homology": [e.to_json() for e in self.entries],
                "euler": {str(w): v for w, v in sorted(self.euler.items())}}


def term_weight_dim(X, n, w):
    m = X.term(n)
    if isinstance(X.ring, ProductRing):
        return sum(term_weight_dim(X.component(i), n, w) for i in range(len(X.ring.factors)))
    return sum(len(m.slice_basis(s)) for s in m.slices_at(w))


def euler_characteristic(X, w):
    return sum((-1) ** n * term_weight_dim(X, n, w) for n in X.degrees())


def homology_report(X, W=10, degrees=None):
    validate(X)
    degrees = list(X.degrees()) if degrees is None else list(degrees)
    entries = tuple(homology(X, n, W) for n in degrees if not (X.term(n).rank and X.term(n).min_weight > W))
    lo = min((X.term(n).min_weight for n in X.degrees() if X.term(n).rank), default=0)
    euler = {w: euler_characteristic(X, w) for w in range(lo, W + 1)}
    return HomologyReport(entries, W, euler)


def induced_map(f, n, s):
    """Matrix of H_n(f) on the bidegree-s slice (single-component rings)."""
    HX, HY = homology_module(f.source, n), homology_module(f.target, n)
    qx, qy = HX.quotient(s), HY.quotient(s)
    m = f.at(n).slice_matrix(s) if f.at(n).source.rank and f.at(n).target.rank else None
    cols = []
    for rep in qx.reps:
        v = linalg.matvec(m, rep) if m else [linalg.ZERO] * HY.n(s)
        cols.append(qy.coords(v))
    return linalg.transpose(cols, qy.dim) if cols else [[] for _ in range(qy.dim)]


# -- resolutions of cyclic monomial modules -----------------------------------

@dataclass(frozen=True)
class Resolution:
    ring: object
    monomials: tuple
    complex: ChainComplex
    length: int
    truncation: int
    multidegrees: dict = field(default_factory=dict, compare=False)

    @property
    def module_label(self):
        return "R/(" + ",".join(format_monomial(m, self.ring.names) for m in self.monomials) + ")"


def _multidegrees_upto(ring, W):
    weights = [g.weight for g in ring.generators]
    out = []

    def rec(i, left, cur):
        if i == len(weights):
            out.append(tuple(cur))
            return
        for e in range(left // weights[i] + 1):
            rec(i + 1, left - e * weights[i], cur + [e])

    rec(0, W, [])
    out.sort(key=lambda d: (sum(a * w for a, w in zip(d, weights)), d))
    return out


def _leq(a, b):
    return all(x <= y for x, y in zip(a, b))


def _sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _multi_basis(ring, gens, delta):
    """Basis of the multidegree-delta part of the free module with generator multidegrees ``gens``."""
    out = []
    for j, D in enumerate(gens):
        if _leq(D, delta):
            m = _sub(delta, D)
            if ring.is_normal(m):
                out.append((j, m))
    return out


def _multi_matrix(ring, columns, src_gens, tgt_gens, delta):
    """The differential restricted to multidegree delta.

    ``columns[j]`` is a dict target index -> coefficient, meaning
    e_j -> sum c * x^(D_j - D'_i) f_i.
    """
    src = _multi_basis(ring, src_gens, delta)
    tgt = _multi_basis(ring, tgt_gens, delta)
    tidx = {b: k for k, b in enumerate(tgt)}
    rows = [[linalg.ZERO] * len(src) for _ in tgt]
    for col, (j, _) in enumerate(src):
        for i, c in columns[j].items():
            m = _sub(delta, tgt_gens[i])
            if (i, m) in tidx:
                rows[tidx[(i, m)]][col] += c
    return src, rows


def _monomial_keys(ring, monomials):
    """Exponent vectors of the nonzero monomials among strings or tuples."""
    out = []
    for m in monomials:
        if isinstance(m, str):
            e = ring.parse(m)
            if e.is_zero:
                continue
            m = ring.key_of(e)
        m = tuple(m)
        if ring.is_normal(m):
            out.append(m)
    return out


def cyclic_resolution(ring, monomials, L=4, W=10):
    """Free resolution of R/(monomials) up to homological length L, exact on weights <= W.

    Kernel generators are found multidegree by multidegree in increasing
    weight: at each multidegree, kernel vectors not already generated by
    earlier generators become new generators.  The result is audited.
    """
    if isinstance(ring, ProductRing):
        raise InputError("resolutions are built over single-component rings")
    if ring.inverted or any(ring.grading.odd(g.degree) for g in ring.generators):
        raise InputError("cyclic_resolution needs a ring without inverted or odd generators")
    if L < 1:
        raise InputError("L must be at least 1")
    mons = _monomial_keys(ring, monomials)
    deltas = _multidegrees_upto(ring, W)
    gens = [[(0,) * ring.nvars]]
    cols = [[]]
    gens.append(sorted(set(mons), key=ring.key_sort))
    cols.append([{0: linalg.ONE} for _ in gens[1]])
    for n in range(2, L + 1):
        src_gens, src_cols, tgt_gens = gens[n - 1], cols[n - 1], gens[n - 2]
        new_gens, new_cols = [], []
        for delta in deltas:
            basis, rows = _multi_matrix(ring, src_cols, src_gens, tgt_gens, delta)
            if not basis:
                continue
            ker = linalg.nullspace(rows, len(basis)) if rows else [linalg.unit_vector(len(basis), i) for i in range(len(basis))]
            if not ker:
                continue
            bidx = {b: k for k, b in enumerate(basis)}
            span = []
            for g, col in zip(new_gens, new_cols):
                if _leq(g, delta) and ring.is_normal(_sub(delta, g)):
                    v = [linalg.ZERO] * len(basis)
                    for j, c in col.items():
                        key = (j, _sub(delta, src_gens[j]))
                        if key in bidx:
                            v[bidx[key]] += c
                    span.append(v)
            for k in linalg.QuotientBasis(ker, span, len(basis)).reps:
                new_gens.append(delta)
                new_cols.append({basis[i][0]: c for i, c in enumerate(k) if c != 0})
        if not new_gens:
            break
        gens.append(new_gens)
        cols.append(new_cols)
    X = _assemble(ring, gens, cols)
    res = Resolution(ring, tuple(mons), X, len(gens) - 1, W, {n: tuple(g) for n, g in enumerate(gens)})
    audit_resolution(res)
    return res


def _assemble(ring, gens, cols):
    g = ring.grading

    def shift_of(D):
        return (g.norm(sum(a * gen.degree for a, gen in zip(D, ring.generators))),
                sum(a * gen.weight for a, gen in zip(D, ring.generators)))

    terms = {n: FreeGradedModule(ring, tuple(shift_of(D) for D in gl)) for n, gl in enumerate(gens)}
    diffs = {}
    for n in range(1, len(gens)):
        rows = [[ring.zero] * len(gens[n]) for _ in gens[n - 1]]
        for j, col in enumerate(cols[n]):
            for i, c in col.items():
                rows[i][j] = ring.monomial(_sub(gens[n][j], gens[n - 1][i]), c)
        diffs[n] = GradedMatrix(terms[n], terms[n - 1], tuple(tuple(r) for r in rows))
    return ChainComplex(ring, terms, diffs)


def audit_resolution(res):
    """H_0 must be R/I and H_1..H_{L-1} must vanish on weights <= W."""
    X, W = res.complex, res.truncation
    try:
        validate(X)
    except DSquaredNonzero as e:
        raise ExactnessAuditFailed(f"resolution is not a complex: {e}") from None
    for n in range(1, res.length):
        e = homology(X, n, W, actions=False)
        if not e.is_zero:
            raise ExactnessAuditFailed(f"H_{n} of the resolution is nonzero at weights {e.by_weight()}")
    quotient = res.ring.with_relations(res.monomials)
    h0 = homology(X, 0, W, actions=False)
    for w in range(0, W + 1):
        if h0.by_weight().get(w, 0) != len(quotient.weight_basis(w)):
            raise ExactnessAuditFailed(f"H_0 of the resolution differs from R/I at weight {w}")
    return True


def tor(ring, I, J, n, W=10):
    """Tor_n(R/I, R/J) slice dimensions, through a resolution of R/I."""
    res = cyclic_resolution(ring, I, L=n + 1, W=W)
    phi = AlgebraMap.quotient(ring, _monomial_keys(ring, J))
    return homology(base_change(phi, res.complex), n, W)


def koszul_complex(ring, element, weight=None):
    """The two-term complex R(w) --f--> R in degrees 1 and 0."""
    f = ring.parse(element) if isinstance(element, str) else element
    w = f.weight if weight is None else weight
    d = f.degree if f.degree is not None else 0
    src = FreeGradedModule(ring, ((d, w),))
    tgt = FreeGradedModule.unit(ring)
    return ChainComplex(ring, {1: src, 0: tgt}, {1: GradedMatrix(src, tgt, ((f,),))})
