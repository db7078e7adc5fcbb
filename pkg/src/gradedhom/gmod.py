"""Finitely generated graded modules over presented rings.

Free modules carry a list of shifts (G-degree, weight): basis element j lives
in that bidegree.  A homogeneous matrix of degree (delta, omega) sends e_j to
sum_i a_ij f_i with deg(a_ij) = deg(e_j) + (delta, omega) - deg(f_i).

Everything finite happens in bidegree slices (d, w): over a ring with finite
slices the bidegree-(d, w) part of a free module is a finitely generated free
coefficient module with basis {(j, m)} for normal monomials m.  Modules that
are not free are handled as subquotients Z / B of a free ambient module.
"""

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg
from .errors import (
    GradingMismatch,
    HypothesisFailed,
    InputError,
    NonHomogeneousPresentation,
    NotConnected,
    NotLocal,
    NotLocallyFreeAtP,
    NotProjectiveSomewhere,
    RingMismatch,
    UnsupportedCoefficients,
)
from .gring import (
    AlgebraMap,
    GradedRing,
    ProductRing,
    RingElement,
    format_monomial,
    is_connected,
    localize,
    parity_pushforward,
    spec_monomial_primes,
    unit_ideal_combination,
)


def _ring_of(obj):
    return obj.ring


@dataclass(frozen=True)
class FreeGradedModule:
    ring: object
    shifts: tuple = ()
    _cache: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    def __post_init__(self):
        g = self.ring.grading
        object.__setattr__(self, "shifts", tuple((g.norm(int(d)), int(w)) for d, w in self.shifts))

    @classmethod
    def unit(cls, ring):
        return cls(ring, ((0, 0),))

    @property
    def rank(self):
        return len(self.shifts)

    def dual(self):
        g = self.ring.grading
        return FreeGradedModule(self.ring, tuple((g.neg(d), -w) for d, w in self.shifts))

    def tensor(self, other):
        self._check(other)
        g = self.ring.grading
        return FreeGradedModule(self.ring, tuple(
            (g.add(d1, d2), w1 + w2) for d1, w1 in self.shifts for d2, w2 in other.shifts))

    def direct_sum(self, other):
        self._check(other)
        return FreeGradedModule(self.ring, self.shifts + other.shifts)

    def shifted(self, degree=0, weight=0):
        g = self.ring.grading
        return FreeGradedModule(self.ring, tuple((g.add(d, degree), w + weight) for d, w in self.shifts))

    def _check(self, other):
        if other.ring != self.ring:
            raise RingMismatch("modules over different rings")

    def component(self, i):
        return FreeGradedModule(self.ring.components[i], self.shifts)

    def base_change(self, phi):
        return FreeGradedModule(phi.target, self.shifts)

    @property
    def min_weight(self):
        return min((w for _, w in self.shifts), default=0)

    @property
    def max_weight(self):
        return max((w for _, w in self.shifts), default=0)

    # -- slices (single-component rings) ------------------------------------
    def slice_basis(self, s):
        """Basis [(j, monomial)] of the bidegree-s slice."""
        if s in self._cache:
            return self._cache[s]
        d, w = s
        ring = self.ring
        out = []
        for j, (dj, wj) in enumerate(self.shifts):
            for m in ring.weight_basis(w - wj):
                if ring.grading.add(ring.key_degree(m), dj) == d:
                    out.append((j, m))
        out = tuple(out)
        self._cache[s] = out
        return out

    def slice_index(self, s):
        key = ("idx", s)
        if key not in self._cache:
            self._cache[key] = {b: i for i, b in enumerate(self.slice_basis(s))}
        return self._cache[key]

    def degrees_at(self, w):
        key = ("deg", w)
        if key in self._cache:
            return self._cache[key]
        ring = self.ring
        out = set()
        for dj, wj in self.shifts:
            for m in ring.weight_basis(w - wj):
                out.add(ring.grading.add(ring.key_degree(m), dj))
        out = tuple(sorted(out))
        self._cache[key] = out
        return out

    def slices_at(self, w):
        return [(d, w) for d in self.degrees_at(w)]

    def label(self, b):
        j, m = b
        mono = format_monomial(m, self.ring.names)
        return mono if self.rank == 1 else f"{mono}*e{j}"

    def multiply_vector(self, key, v, s):
        """key * v for a ring monomial key and a vector v in slice s."""
        ring = self.ring
        t = (ring.grading.add(s[0], ring.key_degree(key)), s[1] + ring.key_weight(key))
        idx = self.slice_index(t)
        out = [linalg.ZERO] * len(idx)
        for c, (j, m) in zip(v, self.slice_basis(s)):
            if c == 0:
                continue
            prod = ring.mul_keys(key, m)
            if prod is None:
                continue
            sign, m2 = prod
            out[idx[(j, m2)]] += sign * c
        return out, t


@dataclass(frozen=True)
class GradedMatrix:
    """A homogeneous map of free modules; ``entries`` has one row per target basis element."""

    source: FreeGradedModule
    target: FreeGradedModule
    entries: tuple
    degree: tuple = (0, 0)

    def __post_init__(self):
        ring = self.source.ring
        if self.target.ring != ring:
            raise RingMismatch("source and target over different rings")
        rows = tuple(tuple(r) for r in self.entries)
        if len(rows) != self.target.rank or any(len(r) != self.source.rank for r in rows):
            raise InputError(f"matrix shape does not match {self.target.rank}x{self.source.rank}")
        g = ring.grading
        delta, omega = self.degree
        object.__setattr__(self, "degree", (g.norm(delta), omega))
        for i, row in enumerate(rows):
            for j, a in enumerate(row):
                if not isinstance(a, RingElement) or a.ring != ring:
                    raise InputError("matrix entries must be elements of the ring")
                if a.is_zero:
                    continue
                dj, wj = self.source.shifts[j]
                di, wi = self.target.shifts[i]
                want = (g.norm(dj + delta - di), wj + omega - wi)
                for k in a.terms:
                    if (ring.key_degree(k), ring.key_weight(k)) != want:
                        raise NonHomogeneousPresentation(
                            f"entry ({i},{j}) = {a} is not homogeneous of bidegree {want}")
        object.__setattr__(self, "entries", rows)

    @property
    def ring(self):
        return self.source.ring

    @classmethod
    def from_strings(cls, source, target, rows, degree=(0, 0)):
        ring = source.ring
        parsed = [[e if isinstance(e, RingElement) else ring.parse(e) if isinstance(e, (str, list)) else ring.scalar(e)
                   for e in row] for row in rows]
        return cls(source, target, tuple(tuple(r) for r in parsed), degree)

    @classmethod
    def identity(cls, module):
        ring = module.ring
        n = module.rank
        return cls(module, module, tuple(tuple(ring.one if i == j else ring.zero for j in range(n)) for i in range(n)))

    @classmethod
    def zero(cls, source, target, degree=(0, 0)):
        ring = source.ring
        return cls(source, target, tuple(tuple(ring.zero for _ in range(source.rank)) for _ in range(target.rank)), degree)

    @property
    def is_zero(self):
        return all(a.is_zero for row in self.entries for a in row)

    @property
    def parity(self):
        return 1 if self.ring.grading.odd(self.degree[0]) else 0

    def _elt_parity(self, a):
        d = a.degree
        return 1 if d is not None and self.ring.grading.odd(d) else 0

    def compose(self, other):
        """self o other."""
        if other.target != self.source:
            raise InputError("composition of incompatible matrices")
        ring = self.ring
        g = ring.grading
        rows = []
        pf = self.parity
        for i in range(self.target.rank):
            row = []
            for j in range(other.source.rank):
                acc = ring.zero
                for k in range(self.source.rank):
                    a, b = self.entries[i][k], other.entries[k][j]
                    if a.is_zero or b.is_zero:
                        continue
                    term = b * a
                    if pf and self._elt_parity(b):
                        term = -term
                    acc = acc + term
                row.append(acc)
            rows.append(tuple(row))
        return GradedMatrix(other.source, self.target, tuple(rows),
                            (g.add(self.degree[0], other.degree[0]), self.degree[1] + other.degree[1]))

    __matmul__ = compose

    def __add__(self, other):
        if (other.source, other.target, other.degree) != (self.source, self.target, self.degree):
            raise InputError("sum of incompatible matrices")
        return GradedMatrix(self.source, self.target, tuple(
            tuple(a + b for a, b in zip(r1, r2)) for r1, r2 in zip(self.entries, other.entries)), self.degree)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        return GradedMatrix(self.source, self.target, tuple(tuple(a * c for a in r) for r in self.entries), self.degree)

    def dual(self):
        """Transpose with the Koszul sign (-1)^{|a_ij| |f_i|}."""
        g = self.ring.grading
        rows = []
        for j in range(self.source.rank):
            row = []
            for i in range(self.target.rank):
                a = self.entries[i][j]
                if self._elt_parity(a) and g.odd(self.target.shifts[i][0]):
                    a = -a
                row.append(a)
            rows.append(tuple(row))
        return GradedMatrix(self.target.dual(), self.source.dual(), tuple(rows), self.degree)

    def component(self, i):
        ring = self.ring
        return GradedMatrix(self.source.component(i), self.target.component(i), tuple(
            tuple(ring.project(a, i) for a in row) for row in self.entries), self.degree)

    def base_change(self, phi):
        return GradedMatrix(self.source.base_change(phi), self.target.base_change(phi), tuple(
            tuple(phi(a) for a in row) for row in self.entries), self.degree)

    def __str__(self):
        return "[" + "; ".join(", ".join(str(a) for a in row) for row in self.entries) + "]"

    # -- slices ---------------------------------------------------------------
    def target_slice(self, s):
        g = self.ring.grading
        return (g.add(s[0], self.degree[0]), s[1] + self.degree[1])

    def slice_matrix(self, s):
        """Dense matrix of the map from source slice s to the matching target slice."""
        ring = self.ring
        t = self.target_slice(s)
        src = self.source.slice_basis(s)
        tidx = self.target.slice_index(t)
        rows = [[linalg.ZERO] * len(src) for _ in range(len(tidx))]
        odd_map = self.parity
        for col, (j, key) in enumerate(src):
            flip = odd_map and ring.grading.odd(ring.key_degree(key))
            for i in range(self.target.rank):
                a = self.entries[i][j]
                for m, c in a.terms.items():
                    prod = ring.mul_keys(key, m)
                    if prod is None:
                        continue
                    sign, m2 = prod
                    if flip:
                        sign = -sign
                    rows[tidx[(i, m2)]][col] += sign * c
        return rows

    def apply_vector(self, v, s):
        """Image of a slice-s vector, as a vector in the target slice."""
        t = self.target_slice(s)
        m = self.slice_matrix(s)
        return linalg.matvec(m, v) if m else [], t


def direct_sum_matrix(blocks_rows, sources, targets):
    """Assemble a block matrix; ``blocks_rows[a][b]`` maps sources[b] -> targets[a] (None = 0)."""
    ring = sources[0].ring if sources else targets[0].ring
    src = FreeGradedModule(ring, tuple(s for m in sources for s in m.shifts))
    tgt = FreeGradedModule(ring, tuple(s for m in targets for s in m.shifts))
    rows = []
    degree = None
    for a, tmod in enumerate(targets):
        for i in range(tmod.rank):
            row = []
            for b, smod in enumerate(sources):
                blk = blocks_rows[a][b]
                if blk is None:
                    row.extend(ring.zero for _ in range(smod.rank))
                else:
                    degree = degree or blk.degree
                    row.extend(blk.entries[i])
            rows.append(tuple(row))
    return GradedMatrix(src, tgt, tuple(rows), degree or (0, 0))


def symmetry(M, N):
    """The Koszul swap M (x) N -> N (x) M."""
    if M.ring != N.ring:
        raise RingMismatch("modules over different rings")
    ring = M.ring
    g = ring.grading
    src = M.tensor(N)
    tgt = N.tensor(M)
    rows = [[ring.zero] * src.rank for _ in range(tgt.rank)]
    for j, (dj, _) in enumerate(M.shifts):
        for k, (dk, _) in enumerate(N.shifts):
            sign = -1 if g.odd(dj) and g.odd(dk) else 1
            rows[k * M.rank + j][j * N.rank + k] = ring.one * sign
    return GradedMatrix(src, tgt, tuple(tuple(r) for r in rows))


def tensor_map(f, g):
    """f (x) g with the Koszul sign rule, so that the signed interchange law holds."""
    if f.ring != g.ring:
        raise GradingMismatch("matrices over different rings")
    ring = f.ring
    gr = ring.grading
    src = f.source.tensor(g.source)
    tgt = f.target.tensor(g.target)
    gpar = g.parity
    rows = []
    for i in range(f.target.rank):
        fi_odd = gr.odd(f.target.shifts[i][0])
        for i2 in range(g.target.rank):
            row = []
            for j in range(f.source.rank):
                ej_odd = gr.odd(f.source.shifts[j][0])
                a = f.entries[i][j]
                for j2 in range(g.source.rank):
                    b = g.entries[i2][j2]
                    if a.is_zero or b.is_zero:
                        row.append(ring.zero)
                        continue
                    sign = 1
                    if gpar and ej_odd:
                        sign = -sign
                    if fi_odd and g._elt_parity(b):
                        sign = -sign
                    row.append(a * b * sign)
            rows.append(tuple(row))
    return GradedMatrix(src, tgt, tuple(rows), (gr.add(f.degree[0], g.degree[0]), f.degree[1] + g.degree[1]))


@dataclass(frozen=True)
class PresentedModule:
    """The cokernel of a homogeneous presentation matrix."""

    presentation: GradedMatrix

    @classmethod
    def free(cls, module):
        return cls(GradedMatrix.zero(FreeGradedModule(module.ring, ()), module))

    @classmethod
    def from_strings(cls, ring, rows, cols, entries):
        src = FreeGradedModule(ring, tuple(tuple(c) for c in cols))
        tgt = FreeGradedModule(ring, tuple(tuple(r) for r in rows))
        return cls(GradedMatrix.from_strings(src, tgt, entries))

    @property
    def ring(self):
        return self.presentation.ring

    @property
    def ambient(self):
        return self.presentation.target

    def base_change(self, phi):
        return PresentedModule(self.presentation.base_change(phi))

    def component(self, i):
        return PresentedModule(self.presentation.component(i))

    def subquotient(self):
        P = self.presentation

        def boundaries(s):
            src = (P.ring.grading.add(s[0], -P.degree[0]), s[1] - P.degree[1])
            if not P.source.rank:
                return []
            m = P.slice_matrix(src)
            return linalg.transpose(m, len(P.source.slice_basis(src))) if m else []

        hi = max([P.target.max_weight] + [w for _, w in P.source.shifts])
        return Subquotient(P.target, None, boundaries, hi=hi, generators_known=True)


class Subquotient:
    """M = Z / B inside a free module F, computed one bidegree slice at a time.

    ``cycles(s)`` spans Z_s (``None`` means all of F_s) and ``boundaries(s)``
    spans B_s.  ``generators_known`` says the images of the ambient basis
    generate M, which is true for cokernels.
    """

    def __init__(self, ambient, cycles, boundaries, hi=None, generators_known=False):
        if isinstance(ambient.ring, ProductRing):
            raise InputError("subquotients are computed per factor of a product ring")
        self.ambient = ambient
        self._cycles = cycles
        self._boundaries = boundaries
        self.hi = ambient.max_weight if hi is None else hi
        self.generators_known = generators_known
        self._cache = {}

    @property
    def ring(self):
        return self.ambient.ring

    @property
    def lo(self):
        return self.ambient.min_weight

    def n(self, s):
        return len(self.ambient.slice_basis(s))

    def cycles(self, s):
        key = ("Z", s)
        if key not in self._cache:
            n = self.n(s)
            if self._cycles is None:
                z = [linalg.unit_vector(n, i) for i in range(n)]
            else:
                z = linalg.row_basis(self._cycles(s), n) if n else []
            self._cache[key] = z
        return self._cache[key]

    def boundaries(self, s):
        key = ("B", s)
        if key not in self._cache:
            n = self.n(s)
            self._cache[key] = linalg.row_basis(self._boundaries(s), n) if n else []
        return self._cache[key]

    def quotient(self, s):
        key = ("Q", s)
        if key not in self._cache:
            self._cache[key] = linalg.QuotientBasis(self.cycles(s), self.boundaries(s), self.n(s))
        return self._cache[key]

    def dim(self, s):
        return len(self.cycles(s)) - len(self.boundaries(s))

    def weight_dim(self, w):
        return sum(self.dim(s) for s in self.ambient.slices_at(w))

    def act(self, key, s):
        """Matrix of multiplication by the monomial ``key`` from M_s to M_t; returns (matrix, t)."""
        q = self.quotient(s)
        cols = []
        t = None
        for rep in q.reps:
            v, t = self.ambient.multiply_vector(key, rep, s)
            cols.append(v)
        if t is None:
            ring = self.ring
            t = (ring.grading.add(s[0], ring.key_degree(key)), s[1] + ring.key_weight(key))
        qt = self.quotient(t)
        return linalg.transpose([qt.coords(v) for v in cols], qt.dim) if cols else [[] for _ in range(qt.dim)], t

    def decomposables(self, s):
        """Spanning vectors of (B + m Z)_s with m the homogeneous maximal ideal (coefficient part excluded)."""
        ring = self.ring
        vecs = list(self.boundaries(s))
        for i in ring.maximal_ideal_generators():
            key = [0] * ring.nvars
            key[i] = 1
            key = tuple(key)
            g = ring.generators[i]
            src = (ring.grading.add(s[0], -g.degree), s[1] - g.weight)
            if src[1] < self.lo:
                continue
            if not self.ambient.slice_basis(src):
                continue
            for z in self.cycles(src):
                v, _ = self.ambient.multiply_vector(key, z, src)
                vecs.append(v)
        return vecs

    def indecomposables(self, s):
        """Representatives of a basis of (M / mM)_s over a residue field of characteristic 0."""
        return linalg.QuotientBasis(self.cycles(s), self.decomposables(s), self.n(s)).reps


# -- certificates ------------------------------------------------------------

@dataclass(frozen=True)
class FreenessCertificate:
    verdict: str                 # "Free", "NotProjective" or "UnknownUpTo"
    truncation: int
    type: tuple = ()             # shifts of the free module, for Free
    witness: tuple = None        # bidegree of a nonzero kernel slice, for NotProjective
    exact: bool = False
    lift: GradedMatrix = None    # free module -> ambient, for Free
    checked: tuple = ()          # weights whose kernel slices were checked

    @property
    def is_free(self):
        return self.verdict == "Free"

    def to_json(self):
        out = {"verdict": self.verdict, "truncation": self.truncation, "exact": self.exact}
        if self.verdict == "Free":
            out["type"] = [list(s) for s in self.type]
            if self.lift is not None:
                out["lift"] = [[str(a) for a in row] for row in self.lift.entries]
        if self.witness is not None:
            out["witness"] = list(self.witness)
        return out


def _require_local(ring):
    if isinstance(ring, ProductRing):
        raise NotLocal("product rings are not local; work factor by factor")
    if ring.profile == "zero":
        return
    if ring.profile == "infinite":
        raise NotLocal(f"{ring} has infinite weight slices and is not graded-local")
    if not ring.coeff.is_local:
        raise NotLocal(f"coefficient ring {ring.coeff} is not local")


def _margin(ring):
    ws = [ring.generators[i].weight for i in ring.maximal_ideal_generators()]
    return 2 * max(ws, default=0)


def _windows(M, W):
    """(generator weights, kernel weights, exact) for certification up to W."""
    ring = M.ring
    lo = M.lo
    prof = ring.profile
    if prof == "laurent":
        win = list(range(lo, lo + ring.period))
        return win, win, True
    if prof == "finite":
        top = M.hi + ring.top_weight
        ker = list(range(lo, min(W, top) + 1))
        gens = ker if not M.generators_known else sorted({w for _, w in M.ambient.shifts})
        return gens, ker, W >= top
    ker = list(range(lo, W + 1))
    gens = ker if not M.generators_known else sorted({w for _, w in M.ambient.shifts if w <= W})
    return gens, ker, False


def _lift_matrix(M, lifts):
    """Free module on the lifts and the matrix sending its basis to the lift vectors."""
    ring = M.ring
    F = FreeGradedModule(ring, tuple(s for s, _ in lifts))
    rows = [[ring.zero] * len(lifts) for _ in range(M.ambient.rank)]
    for col, (s, v) in enumerate(lifts):
        for c, (j, m) in zip(v, M.ambient.slice_basis(s)):
            if c != 0:
                rows[j][col] = rows[j][col] + ring.monomial(m, c)
    return F, GradedMatrix(F, M.ambient, tuple(tuple(r) for r in rows))


def _indecomposables_mod_p(M, s, p):
    """Unit-vector representatives of (M/mM)_s for a presented module over Z_(p)."""
    n = M.n(s)
    span = M.decomposables(s)
    r = linalg.rank_mod_p(span, n, p)
    reps = []
    for i in range(n):
        e = linalg.unit_vector(n, i)
        r2 = linalg.rank_mod_p(span + [e], n, p)
        if r2 > r:
            span = span + [e]
            r = r2
            reps.append(e)
    return reps


def _collect_lifts(M, gen_weights):
    ring = M.ring
    p = ring.coeff.residue_characteristic
    lifts = []
    for w in gen_weights:
        for s in M.ambient.slices_at(w):
            reps = _indecomposables_mod_p(M, s, p) if p else M.indecomposables(s)
            lifts.extend((s, v) for v in reps)
    return lifts


def free_rank_type(M, W=10, hi=None):
    """Certify freeness of a module over a weight-graded local ring.

    ``M`` is a PresentedModule or a Subquotient.  Returns a FreenessCertificate
    with verdict Free (with the lift as witness), NotProjective (with the first
    nonzero kernel slice) or UnknownUpTo(W).
    """
    if isinstance(M, PresentedModule):
        P = M.presentation
        _require_local(P.ring)
        if P.ring.profile == "zero":
            return FreenessCertificate("Free", W, (), exact=True)
        if P.is_zero:
            F = P.target
            return FreenessCertificate("Free", W, tuple(F.shifts), exact=True,
                                       lift=GradedMatrix.identity(F))
        M = M.subquotient()
    else:
        _require_local(M.ring)
        if M.ring.profile == "zero":
            return FreenessCertificate("Free", W, (), exact=True)
    ring = M.ring
    if ring.coeff.residue_characteristic and not M.generators_known:
        raise UnsupportedCoefficients("subquotients over Z_(p) are not supported; present the module")
    if hi is not None:
        M.hi = max(M.hi, hi)
    gen_weights, ker_weights, exact = _windows(M, W)
    lifts = _collect_lifts(M, gen_weights)
    F, L = _lift_matrix(M, lifts)
    for w in ker_weights:
        for s in M.ambient.slices_at(w):
            nf = len(F.slice_basis(s))
            if not nf:
                continue
            img = linalg.transpose(L.slice_matrix(s), nf) if M.n(s) else []
            bnd = M.boundaries(s)
            r_img = linalg.rank(bnd + img, M.n(s)) - len(bnd) if M.n(s) else 0
            if nf - r_img > 0:
                return FreenessCertificate("NotProjective", W, witness=s, exact=True, checked=tuple(ker_weights))
    if ring.profile == "polynomial":
        exact = False
        if W < M.hi + _margin(ring):
            return FreenessCertificate("UnknownUpTo", W, checked=tuple(ker_weights))
    elif not exact:
        return FreenessCertificate("UnknownUpTo", W, checked=tuple(ker_weights))
    return FreenessCertificate("Free", W, tuple(F.shifts), exact=exact, lift=L, checked=tuple(ker_weights))


def nakayama_is_zero(M):
    """Decide M = 0 through M / mM = 0 (graded Nakayama)."""
    if not isinstance(M, PresentedModule):
        raise InputError("nakayama_is_zero takes a presented module")
    ring = M.ring
    _require_local(ring)
    if ring.profile == "zero":
        return True
    S = M.subquotient()
    if ring.profile == "laurent":
        weights = range(S.lo, S.lo + ring.period)
    else:
        weights = sorted({w for _, w in S.ambient.shifts})
    return not _collect_lifts(S, weights)


@dataclass(frozen=True)
class SliceData:
    weight: int
    degree: int
    generators: tuple      # labels of the slice basis of the ambient free module
    relations: tuple       # columns spanning the image, as coefficient vectors
    basis: tuple           # labels of a quotient basis
    dim: int


def slice(M, w):
    """The weight-w slice of M as finite presentations over the coefficient ring, one per G-degree."""
    if isinstance(M, PresentedModule):
        if isinstance(M.ring, ProductRing):
            raise InputError("slice a product-ring module factor by factor")
        M = M.subquotient()
    out = []
    for s in M.ambient.slices_at(w):
        basis = M.ambient.slice_basis(s)
        q = M.quotient(s)
        labels = []
        for rep in q.reps:
            nz = [i for i, c in enumerate(rep) if c != 0]
            if len(nz) == 1 and rep[nz[0]] == 1:
                labels.append(M.ambient.label(basis[nz[0]]))
            else:
                labels.append(" + ".join(f"{rep[i]}*{M.ambient.label(basis[i])}" for i in nz))
        out.append(SliceData(w, s[0], tuple(M.ambient.label(b) for b in basis),
                             tuple(tuple(v) for v in M.boundaries(s)), tuple(labels), q.dim))
    return out


# -- local-to-global ---------------------------------------------------------

@dataclass(frozen=True)
class SpreadOut:
    f: RingElement
    inverted: tuple
    certificate: FreenessCertificate


def spread_out(M, p, W=10):
    """A monomial f outside p with M free over B_f, trying the fewest inversions first."""
    ring = M.ring
    outside = [i for i in ring.surviving() if i not in p.variables]
    tried = []
    for k in range(len(outside) + 1):
        for sub in itertools.combinations(outside, k):
            names = [ring.names[i] for i in sub]
            phi = AlgebraMap.localization(ring, names)
            loc = phi.target
            try:
                cert = free_rank_type(M.base_change(phi), W)
            except NotLocal:
                tried.append(names)
                continue
            if cert.is_free:
                f = ring.one
                for n in names:
                    f = f * ring.gen(n)
                return SpreadOut(f, tuple(names), cert)
            tried.append(names)
    raise NotLocallyFreeAtP(f"no localization away from {p} makes the module free (tried {tried})")


@dataclass(frozen=True)
class LocalWitness:
    cover: tuple              # monomials f_i
    combination: tuple        # b_i with 1 = sum b_i f_i
    local_types: tuple        # (prime, f, type) for each minimal prime
    parity_type: tuple        # (even count, odd count)
    certificate: FreenessCertificate
    collapse_algebra: str = "parity collapse (Z/2, alpha); reported symbolically"


def _parity_counts(grading, shifts):
    degs = [d for d, _ in shifts]
    if not grading.nontrivial:
        return (len(degs), 0)
    par = parity_pushforward(grading, degs)
    return (par.count(0), par.count(1))


def locally_free_witness(M, W=10):
    ring = M.ring
    conn = is_connected(ring)
    if not conn.connected:
        raise NotConnected(conn.reason)
    _require_local(ring)
    cert = free_rank_type(M, W)
    maximal = "(" + ",".join(ring.names[i] for i in ring.surviving()) + ")"
    if cert.verdict == "NotProjective":
        raise NotProjectiveSomewhere(
            f"not free at the homogeneous maximal ideal {maximal}: kernel at bidegree {cert.witness}",
            prime=maximal, witness=cert.witness)
    local = []
    types = set()
    for prime in spec_monomial_primes(ring):
        if not prime.minimal:
            continue
        so = spread_out(M, prime, W)
        local.append((str(prime), str(so.f), so.certificate.type))
        types.add(_parity_counts(ring.grading, so.certificate.type))
    if cert.is_free:
        types.add(_parity_counts(ring.grading, cert.type))
    if len(types) > 1:
        raise NotProjectiveSomewhere(f"local parity types differ: {sorted(types)}", prime=None)
    cover = (ring.one,)
    comb = tuple(unit_ideal_combination(ring, list(cover)))
    return LocalWitness(cover, comb, tuple(local), types.pop() if types else (0, 0), cert)


def adams_stage_check(A, eta):
    """Whether the dual of the unit stage eta: B -> A is an epimorphism."""
    ring = A.ring
    if eta.target != A or eta.source != FreeGradedModule.unit(ring):
        raise InputError("eta must map the unit module to A")
    dual = eta.dual()
    s = (0, 0)
    src = dual.source
    if isinstance(ring, ProductRing):
        return all(adams_stage_check(A.component(i), eta.component(i)) for i in range(len(ring.factors)))
    if not src.slice_basis(s):
        return False
    m = dual.slice_matrix(s)
    tbasis = dual.target.slice_basis(s)
    one = (0, (0,) * ring.nvars)
    if one not in tbasis:
        return False
    k = tbasis.index(one)
    return ring.coeff.ideal_contains_one(m[k])
