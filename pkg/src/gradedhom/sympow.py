"""Super linear algebra on tensor powers.

A permutation is a tuple ``p`` with ``p[i]`` the position the factor at
position ``i`` moves to.  Acting on a word of basis indices it produces the
permuted word and a Koszul sign: -1 for every pair of odd factors whose order
is reversed.  Operators are never materialized densely; they are applied word
by word.
"""

import itertools
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from fractions import Fraction

from .coeff import QQ
from .errors import BoundExceeded, InputError, LengthMismatch, MalformedWord, TwoNotInvertible

MAX_POWER = 6
MAX_LENGTH = 8
MAX_WORDS = 10 ** 6


@dataclass(frozen=True)
class SuperSpace:
    """Q^{p|q} with named basis lines; ``basis`` is a tuple of (label, parity) with parity 0 or 1."""

    basis: tuple
    degrees: tuple = None

    def __post_init__(self):
        basis = tuple((str(l), int(p)) for l, p in self.basis)
        labels = [l for l, _ in basis]
        if len(set(labels)) != len(labels):
            raise InputError("basis labels must be distinct")
        if any(p not in (0, 1) for _, p in basis):
            raise InputError("parities are 0 (even) or 1 (odd)")
        object.__setattr__(self, "basis", basis)
        if self.degrees is not None:
            degs = tuple(int(d) for d in self.degrees)
            if len(degs) != len(basis):
                raise LengthMismatch("one degree per basis element")
            if any(d % 2 != p for d, (_, p) in zip(degs, basis)):
                raise InputError("degrees do not push forward to the stored parities")
            object.__setattr__(self, "degrees", degs)

    @classmethod
    def standard(cls, p, q):
        return cls(tuple((f"e{i + 1}", 0) for i in range(p)) + tuple((f"o{i + 1}", 1) for i in range(q)))

    @classmethod
    def parse(cls, text, extra=()):
        """'p|q' plus optional (label, parity) summands."""
        try:
            p, q = (int(t) for t in text.replace(" ", "").split("|"))
        except ValueError:
            raise InputError(f"super dimension must look like 'p|q', got {text!r}") from None
        if p < 0 or q < 0:
            raise InputError("dimensions are non-negative")
        base = cls.standard(p, q).basis
        return cls(base + tuple((l, 1 if par in (1, "odd") else 0) for l, par in extra))

    @property
    def dim(self):
        return len(self.basis)

    @property
    def even_dim(self):
        return sum(1 for _, p in self.basis if p == 0)

    @property
    def odd_dim(self):
        return self.dim - self.even_dim

    @property
    def parities(self):
        return tuple(p for _, p in self.basis)

    @property
    def labels(self):
        return tuple(l for l, _ in self.basis)

    def index(self, label):
        try:
            return self.labels.index(label)
        except ValueError:
            raise MalformedWord(f"unknown basis label {label!r}") from None

    def word(self, labels):
        return tuple(self.index(l) for l in labels)

    def format_word(self, word):
        return "(x)".join(self.labels[i] for i in word)


@dataclass(frozen=True)
class TensorWord:
    factors: tuple
    coefficient: Fraction = Fraction(1)


def koszul_sign(sigma, parities):
    """Sign of moving the factor at i to sigma[i], given the factors' parities."""
    sigma = tuple(sigma)
    if len(sigma) != len(parities):
        raise LengthMismatch(f"permutation of length {len(sigma)} on a word of length {len(parities)}")
    odd = [i for i, p in enumerate(parities) if p]
    inv = 0
    for a in range(len(odd)):
        for b in range(a + 1, len(odd)):
            if sigma[odd[a]] > sigma[odd[b]]:
                inv += 1
    return -1 if inv % 2 else 1


def sign(sigma):
    inv = sum(1 for i in range(len(sigma)) for j in range(i + 1, len(sigma)) if sigma[i] > sigma[j])
    return -1 if inv % 2 else 1


def compose(sigma, tau):
    """sigma after tau."""
    return tuple(sigma[t] for t in tau)


def act(sigma, word, parities):
    """(sign, permuted word) for a word of basis indices."""
    out = [None] * len(word)
    for i, x in enumerate(word):
        out[sigma[i]] = x
    return koszul_sign(sigma, [parities[x] for x in word]), tuple(out)


@dataclass(frozen=True)
class SignedPermutationOperator:
    """A formal combination sum c_sigma * sigma acting on X^{(x) length}."""

    length: int
    terms: dict = field(default_factory=dict, hash=False)

    def __post_init__(self):
        clean = {}
        for p, c in self.terms.items():
            p = tuple(p)
            if sorted(p) != list(range(self.length)):
                raise LengthMismatch(f"{p} is not a permutation of {self.length} positions")
            if c:
                clean[p] = clean.get(p, 0) + c
        object.__setattr__(self, "terms", {p: c for p, c in clean.items() if c})

    @classmethod
    def identity(cls, n):
        return cls(n, {tuple(range(n)): 1})

    @classmethod
    def zero(cls, n):
        return cls(n, {})

    def compose(self, other):
        """self after other."""
        if other.length != self.length:
            raise LengthMismatch("operators on different tensor powers")
        out = defaultdict(int)
        for s, a in self.terms.items():
            for t, b in other.terms.items():
                out[compose(s, t)] += a * b
        return SignedPermutationOperator(self.length, dict(out))

    def __add__(self, other):
        out = Counter(self.terms)
        for p, c in other.terms.items():
            out[p] = out.get(p, 0) + c
        return SignedPermutationOperator(self.length, dict(out))

    def scale(self, c):
        return SignedPermutationOperator(self.length, {p: c * v for p, v in self.terms.items()})

    def apply(self, X, word, coefficient=1):
        """The image of a basis word, as a dict word -> coefficient."""
        if len(word) != self.length:
            raise LengthMismatch(f"word of length {len(word)} for an operator on {self.length} factors")
        par = X.parities
        out = defaultdict(Fraction)
        for p, c in self.terms.items():
            s, w = act(p, word, par)
            out[w] += s * c * coefficient
        return {w: c for w, c in out.items() if c}

    def apply_vector(self, X, vec):
        out = defaultdict(Fraction)
        for w, c in vec.items():
            for w2, c2 in self.apply(X, w, c).items():
                out[w2] += c2
        return {w: c for w, c in out.items() if c}


def _check_words(X, n, max_words):
    if X.dim ** n > max_words:
        raise BoundExceeded(f"{X.dim}^{n} basis words exceed the bound {max_words}")


def symmetrizer(X, n, bound=MAX_POWER):
    if n < 1:
        raise InputError("n must be at least 1")
    if n > bound:
        raise BoundExceeded(f"tensor power {n} exceeds the bound {bound}")
    return SignedPermutationOperator(n, {p: 1 for p in itertools.permutations(range(n))})


def antisymmetrizer(X, n, bound=MAX_POWER):
    if n < 1:
        raise InputError("n must be at least 1")
    if n > bound:
        raise BoundExceeded(f"tensor power {n} exceeds the bound {bound}")
    return SignedPermutationOperator(n, {p: sign(p) for p in itertools.permutations(range(n))})


# -- rectangular Young tableaux ----------------------------------------------

@dataclass(frozen=True)
class YoungShape:
    """n rows, m columns; box (r, c) is position r*m + c."""

    columns: int
    rows: int

    @property
    def size(self):
        return self.columns * self.rows

    def row_positions(self):
        return [[r * self.columns + c for c in range(self.columns)] for r in range(self.rows)]

    def column_positions(self):
        return [[r * self.columns + c for r in range(self.rows)] for c in range(self.columns)]

    def _group(self, blocks):
        n = self.size
        for choice in itertools.product(*(itertools.permutations(b) for b in blocks)):
            p = list(range(n))
            for block, image in zip(blocks, choice):
                for a, b in zip(block, image):
                    p[a] = b
            yield tuple(p)

    def row_group(self):
        return list(self._group(self.row_positions()))

    def column_group(self):
        return list(self._group(self.column_positions()))

    def hook_product(self):
        """Product of hook lengths; the Young symmetrizer squares to this multiple of itself."""
        out = 1
        for r in range(self.rows):
            for c in range(self.columns):
                out *= (self.columns - 1 - c) + (self.rows - 1 - r) + 1
        return out


def parse_shape(text):
    """'m x n' (columns x rows)."""
    try:
        m, n = (int(t) for t in text.lower().replace(" ", "").split("x"))
    except ValueError:
        raise InputError(f"shape must look like 'm x n', got {text!r}") from None
    if m < 0 or n < 0:
        raise InputError("shape dimensions are non-negative")
    return m, n


def _check_shape(X, m, n, max_length, max_words):
    if m * n > max_length:
        raise BoundExceeded(f"tensor length {m * n} exceeds the bound {max_length}")
    _check_words(X, m * n, max_words)


def young_symmetrizer(X, m, n, max_length=MAX_LENGTH, max_words=MAX_WORDS):
    """(sum over column group of sgn(tau) tau) after (sum over row group of sigma)."""
    _check_shape(X, m, n, max_length, max_words)
    shape = YoungShape(m, n)
    R = shape.row_group()
    C = shape.column_group()
    terms = {}
    for t in C:
        st = sign(t)
        for s in R:
            terms[compose(t, s)] = st
    return SignedPermutationOperator(shape.size, terms)


def operator_is_zero(op, X, max_words=MAX_WORDS):
    """Brute force: does op kill every basis word?"""
    _check_words(X, op.length, max_words)
    if not op.terms:
        return True
    for word in itertools.product(range(X.dim), repeat=op.length):
        if op.apply(X, word):
            return False
    return True


class YoungAction:
    """Fast evaluation of a rectangular Young symmetrizer on basis words.

    Uses that S(r.w) = S(w) for row permutations r, and that the column
    antisymmetrizer sends tau.u to sgn(tau) times its value on u.  Images are
    recorded as combinations of column-canonical words u, standing for A_C(u).
    """

    def __init__(self, X, m, n):
        self.X = X
        self.shape = YoungShape(m, n)
        self.m, self.n = m, n
        self.par = X.parities
        self._row_perms = list(itertools.permutations(range(m)))
        self._cols = self.shape.column_positions()
        self._cache = {}

    def _row_sym(self, word):
        """sum over the row group of sigma.word, as dict word -> coefficient."""
        m, par = self.m, self.par
        pieces = []
        for r in range(self.n):
            sub = word[r * m:(r + 1) * m]
            acc = defaultdict(int)
            for p in self._row_perms:
                s, w = act(p, sub, par)
                acc[w] += s
            pieces.append([(w, c) for w, c in acc.items() if c])
        out = {}
        for combo in itertools.product(*pieces):
            w = tuple(x for piece, _ in combo for x in piece)
            c = 1
            for _, ci in combo:
                c *= ci
            out[w] = out.get(w, 0) + c
        return out

    def canonical(self, word):
        """(factor, u) with A_C(word) = factor * A_C(u), u column-sorted; factor 0 if A_C(word) = 0."""
        n = len(word)
        perm = list(range(n))
        out = list(word)
        for col in self._cols:
            entries = sorted(((word[p], k) for k, p in enumerate(col)))
            for (x, k), target in zip(entries, col):
                perm[col[k]] = target
                out[target] = x
            evens = [x for x, _ in entries if self.par[x] == 0]
            if len(evens) != len(set(evens)):
                return 0, None
        perm = tuple(perm)
        eps = koszul_sign(perm, [self.par[x] for x in word])
        return eps * sign(perm), tuple(out)

    def image(self, word):
        """S(word) as dict canonical word u -> coefficient of A_C(u)."""
        word = tuple(word)
        if word in self._cache:
            return self._cache[word]
        out = defaultdict(int)
        for w, c in self._row_sym(word).items():
            f, u = self.canonical(w)
            if f:
                out[u] += f * c
        res = {u: c for u, c in out.items() if c}
        self._cache[word] = res
        return res

    def expand(self, image):
        """Turn a canonical combination into an honest vector of words."""
        out = defaultdict(Fraction)
        C = self.shape.column_group()
        for u, c in image.items():
            for t in C:
                s, w = act(t, u, self.par)
                out[w] += c * s * sign(t)
        return {w: c for w, c in out.items() if c}

    def apply_vector(self, vec):
        out = defaultdict(Fraction)
        for w, c in vec.items():
            for w2, c2 in self.expand(self.image(w)).items():
                out[w2] += c * c2
        return {w: c for w, c in out.items() if c}

    def row_representatives(self):
        """Row-sorted words, skipping rows that repeat an odd line (those die under row symmetrization)."""
        d = self.X.dim
        row_words = [w for w in itertools.combinations_with_replacement(range(d), self.m)
                     if all(w.count(x) <= 1 for x in set(w) if self.par[x])]
        for rows in itertools.product(row_words, repeat=self.n):
            yield tuple(x for r in rows for x in r)

    def is_zero(self):
        if self.m * self.n == 0:
            return False
        return not any(self.image(w) for w in self.row_representatives())

    def nonzero_witness(self):
        if self.m * self.n == 0:
            return ()
        return next((w for w in self.row_representatives() if self.image(w)), None)


def young_is_zero(X, m, n, max_length=MAX_LENGTH, max_words=MAX_WORDS):
    """Whether S_X^{m,n} vanishes, via orbit representatives.

    A shape with no boxes is the identity of the unit object, which is nonzero.
    """
    _check_shape(X, m, n, max_length, max_words)
    return YoungAction(X, m, n).is_zero()


@dataclass(frozen=True)
class YoungReport:
    zero: bool
    scalar_c: Fraction = None
    checked_words: int = 0

    def to_json(self):
        out = {"zero": self.zero, "checked_words": self.checked_words}
        if self.scalar_c is not None:
            out["scalar_c"] = str(self.scalar_c)
        return out


def quasi_idempotence(X, m, n, max_length=MAX_LENGTH, max_words=MAX_WORDS, verify_all=True):
    """Find c with S o S = c S and verify it on every basis word (or every row representative)."""
    _check_shape(X, m, n, max_length, max_words)
    ya = YoungAction(X, m, n)
    words = (itertools.product(range(X.dim), repeat=m * n) if verify_all else ya.row_representatives())
    c = None
    checked = 0
    for w in words:
        checked += 1
        v = ya.expand(ya.image(w))
        if not v:
            continue
        vv = ya.apply_vector(v)
        k = next(iter(v))
        ratio = Fraction(vv.get(k, 0)) / v[k]
        if c is None:
            c = ratio
        if c != ratio or any(vv.get(x, 0) != c * y for x, y in v.items()) or set(vv) - set(v):
            raise AssertionError(f"S o S is not a multiple of S on {X.format_word(w)}")
    return YoungReport(c is None, c, checked)


def identity_factorization(X, op, word):
    """Whether proj o op o incl is the identity on the line spanned by ``word`` (a list of labels)."""
    if isinstance(word, str):
        raise MalformedWord("word must be a list of basis labels")
    if len(word) != op.length:
        raise MalformedWord(f"word has {len(word)} factors, operator acts on {op.length}")
    w = X.word(word)
    return op.apply(X, w).get(w, 0) == 1


def detection_word(p, q, X=None):
    """The labelled rectangle of the non-zero detection argument.

    Lines L1..Lp are even, L(p+1)..L(p+q) odd, Y an extra even line.  Row r
    (r = 1..p) holds L_r..L_{r+q}; the last row holds L_{p+1}..L_{p+q}, Y.
    """
    rows = [[f"L{r + k}" for k in range(q + 1)] for r in range(1, p + 1)]
    rows.append([f"L{p + k}" for k in range(1, q + 1)] + ["Y"])
    space = SuperSpace(tuple((f"L{k}", 0 if k <= p else 1) for k in range(1, p + q + 1)) + (("Y", 0),))
    return space, [l for r in rows for l in r]


# -- types of symmetric powers -----------------------------------------------

def _normalize_type(t):
    out = []
    for e in t:
        if isinstance(e, (tuple, list)):
            d, p = int(e[0]), int(e[1]) % 2
        else:
            d = int(e)
            p = d % 2
        out.append((d, p))
    return out


def sym_type(t, n, coeff=QQ):
    """Degree multiset of Sym^n of a free module of the given type.

    ``t`` lists (G-degree, parity) pairs, or bare integer degrees with the
    Koszul parity.  Even lines may appear to any power, odd lines at most once.
    The empty tuple means the zero module.
    """
    if not coeff.two_is_unit:
        raise TwoNotInvertible(f"2 is not invertible in {coeff}")
    if n < 0:
        raise InputError("n must be non-negative")
    lines = _normalize_type(t)
    out = []

    def rec(i, left, deg, par):
        if i == len(lines):
            if left == 0:
                out.append((deg, par))
            return
        d, p = lines[i]
        top = left if p == 0 else min(1, left)
        for e in range(top + 1):
            rec(i + 1, left - e, deg + e * d, (par + e * p) % 2)

    rec(0, n, 0, 0)
    return tuple(sorted(out))


def dual_type(t):
    return tuple((-d, p) for d, p in _normalize_type(t))


def twist_type(t, i, parity=None):
    """L_i^{-1} (x) M."""
    pi = i % 2 if parity is None else parity
    return tuple((d - i, (p - pi) % 2) for d, p in _normalize_type(t))


def adams_stage_types(t, i, J, coeff=QQ):
    """Types of Sym^j(L_i^{-1} (x) M) and of Sym^j of its dual for j = 1..J."""
    base = twist_type(t, i)
    out = []
    for j in range(1, J + 1):
        for label, src in (("sym", base), ("sym_dual", dual_type(base))):
            ty = sym_type(src, j, coeff)
            out.append({"j": j, "kind": label, "type": ty, "zero": not ty})
    return out
