"""Presented graded commutative rings.

A ring here is a quotient of a polynomial algebra over an exact coefficient
ring by a monomial ideal, possibly with some generators inverted, or a finite
product of such rings.  Every generator carries a G-degree (for the sign
rule) and a positive weight (for finite slice computations).

Relations are kept in localization normal form: factors of inverted
generators are stripped, so a monomial is zero iff some relation divides its
non-inverted part.  Odd generators square to zero (2 must be a unit).
"""

import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

from .coeff import QQ, CoefficientRing
from .errors import (
    AlreadyInverted,
    IllFormedAlgebraMap,
    InfiniteSlices,
    InputError,
    NegativeExponentOfNonInverted,
    NonMonomial,
    ParseError,
    ProductRingUnsupported,
    TrivialParity,
    UnknownGenerator,
)


@dataclass(frozen=True)
class GradingSpec:
    """A grading group G in {Z, Z/2} with a parity homomorphism to {+1, -1}."""

    group: str = "Z"
    parity: str = "koszul"

    def __post_init__(self):
        if self.group == "Z":
            if self.parity not in ("koszul", "trivial"):
                raise InputError(f"parity for Z must be 'koszul' or 'trivial', not {self.parity!r}")
        elif self.group == "Z/2":
            if self.parity not in ("alpha", "koszul"):
                raise InputError("Z/2 only carries the canonical parity")
            object.__setattr__(self, "parity", "alpha")
        else:
            raise InputError(f"unknown grading group {self.group!r}")

    def norm(self, d):
        return d % 2 if self.group == "Z/2" else d

    def add(self, a, b):
        return self.norm(a + b)

    def neg(self, a):
        return self.norm(-a)

    def odd(self, d):
        return self.parity != "trivial" and d % 2 == 1

    def eps(self, d):
        return -1 if self.odd(d) else 1

    @property
    def nontrivial(self):
        return self.parity != "trivial"


KOSZUL_Z = GradingSpec("Z", "koszul")


@dataclass(frozen=True)
class Generator:
    name: str
    degree: int = 0
    weight: int = 1


_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_']*")


class RingElement:
    """An element in normal form: a finite map from basis keys to nonzero rationals.

    Keys are exponent tuples for a single ring and ``(component, tuple)``
    pairs for a product ring.  Treat instances as immutable.
    """

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring, terms):
        self.ring = ring
        self.terms = {k: Fraction(c) for k, c in terms.items() if c != 0}
        self._hash = None

    # arithmetic
    def _coerce(self, other):
        if isinstance(other, RingElement):
            if other.ring != self.ring:
                raise InputError("elements of different rings")
            return other
        return self.ring.scalar(other)

    def __add__(self, other):
        other = self._coerce(other)
        terms = dict(self.terms)
        for k, c in other.terms.items():
            terms[k] = terms.get(k, 0) + c
        return RingElement(self.ring, terms)

    __radd__ = __add__

    def __neg__(self):
        return RingElement(self.ring, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, RingElement):
            c = Fraction(other)
            return RingElement(self.ring, {k: v * c for k, v in self.terms.items()})
        other = self._coerce(other)
        ring = self.ring
        terms = {}
        for a, ca in self.terms.items():
            for b, cb in other.terms.items():
                prod = ring.mul_keys(a, b)
                if prod is None:
                    continue
                sign, key = prod
                terms[key] = terms.get(key, 0) + sign * ca * cb
        return RingElement(ring, terms)

    def __rmul__(self, other):
        c = Fraction(other)
        return RingElement(self.ring, {k: v * c for k, v in self.terms.items()})

    def __pow__(self, n):
        if n < 0:
            return self.ring.inverse(self) ** (-n)
        out = self.ring.one
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, RingElement):
            return self.ring == other.ring and self.terms == other.terms
        try:
            c = Fraction(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self == self.ring.scalar(c)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    @property
    def is_zero(self):
        return not self.terms

    @property
    def is_monomial(self):
        return len(self.terms) == 1

    def _homog(self, f):
        vals = {f(k) for k in self.terms}
        return vals.pop() if len(vals) == 1 else None

    @property
    def weight(self):
        """Weight if weight-homogeneous and nonzero, else None."""
        return self._homog(self.ring.key_weight)

    @property
    def degree(self):
        """G-degree if homogeneous and nonzero, else None."""
        return self._homog(self.ring.key_degree)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kc: self.ring.key_sort(kc[0]))

    def __str__(self):
        return self.ring.format_element(self)

    def __repr__(self):
        return f"RingElement({self})"


def format_coeff_term(c, mono):
    if mono == "1":
        return str(c)
    if c == 1:
        return mono
    if c == -1:
        return "-" + mono
    return f"{c}*{mono}"


def join_terms(parts):
    if not parts:
        return "0"
    out = parts[0]
    for p in parts[1:]:
        out += " - " + p[1:] if p.startswith("-") else " + " + p
    return out


class _RingBase:
    """Element plumbing shared by single and product rings."""

    @property
    def zero(self):
        return RingElement(self, {})

    def scalar(self, c):
        c = Fraction(c)
        if not self.coeff.contains(c):
            raise InputError(f"{c} is not in {self.coeff}")
        return self.one * c if c != 1 else self.one

    def format_element(self, e):
        return join_terms([format_coeff_term(c, self.format_key(k)) for k, c in e.sorted_terms()])


@dataclass(frozen=True)
class GradedRing(_RingBase):
    """A monomial quotient of a polynomial algebra, with inverted generators."""

    generators: tuple
    relations: tuple = ()
    inverted: frozenset = frozenset()
    coeff: CoefficientRing = QQ
    grading: GradingSpec = KOSZUL_Z
    _cache: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    def __post_init__(self):
        gens = tuple(g if isinstance(g, Generator) else Generator(*g) for g in self.generators)
        names = [g.name for g in gens]
        if len(set(names)) != len(names):
            raise InputError("duplicate generator names")
        for g in gens:
            if not _NAME.fullmatch(g.name):
                raise InputError(f"bad generator name {g.name!r}")
            if g.weight < 1:
                raise InputError(f"generator {g.name} needs weight >= 1")
        object.__setattr__(self, "generators", tuple(
            Generator(g.name, self.grading.norm(g.degree), g.weight) for g in gens))
        inv = frozenset(names.index(i) if isinstance(i, str) else i for i in self.inverted)
        object.__setattr__(self, "inverted", inv)
        odd = [i for i, g in enumerate(self.generators) if self.grading.odd(g.degree)]
        if odd and not self.coeff.two_is_unit:
            raise InputError("odd generators need 2 to be a unit")
        n = len(self.generators)
        rels = set()
        for r in self.relations:
            r = tuple(r)
            if len(r) != n or any(e < 0 for e in r):
                raise InputError(f"bad relation exponent vector {r}")
            rels.add(tuple(0 if i in inv else e for i, e in enumerate(r)))
        if any(i in inv for i in odd):
            # an inverted nilpotent forces 1 = 0
            rels.add((0,) * n)
        object.__setattr__(self, "relations", _minimalize(rels))

    # -- construction helpers ------------------------------------------------
    @classmethod
    def build(cls, generators, relations=(), inverted=(), coeff=QQ, grading=KOSZUL_Z):
        """Build from generator specs and relation strings such as ``"x*y"``."""
        gens = []
        for g in generators:
            if isinstance(g, str):
                gens.append(Generator(g))
            elif isinstance(g, Generator):
                gens.append(g)
            else:
                gens.append(Generator(*g))
        names = [g.name for g in gens]
        rels = [parse_monomial(r, names) if isinstance(r, str) else tuple(r) for r in relations]
        return cls(tuple(gens), tuple(rels), frozenset(inverted), coeff, grading)

    @property
    def names(self):
        return tuple(g.name for g in self.generators)

    @property
    def nvars(self):
        return len(self.generators)

    def index(self, name):
        try:
            return self.names.index(name)
        except ValueError:
            raise UnknownGenerator(f"unknown generator {name!r}") from None

    @property
    def components(self):
        return (self,)

    @property
    def is_product(self):
        return False

    @property
    def is_zero_ring(self):
        return (0,) * self.nvars in self.relations

    def _odd(self, i):
        return self.grading.odd(self.generators[i].degree)

    # -- monomials -----------------------------------------------------------
    def killed(self, m):
        for r in self.relations:
            if all(m[i] >= e for i, e in enumerate(r) if e):
                return True
        return False

    def is_normal(self, m):
        for i, e in enumerate(m):
            if e < 0 and i not in self.inverted:
                return False
            if e > 1 and self._odd(i):
                return False
        return not self.killed(m)

    def mul_keys(self, a, b):
        c = tuple(x + y for x, y in zip(a, b))
        sign = 1
        if self.grading.nontrivial:
            odd_a = [i for i, e in enumerate(a) if e % 2 and self._odd(i)]
            odd_b = [i for i, e in enumerate(b) if e % 2 and self._odd(i)]
            for j in odd_b:
                if j in odd_a:
                    return None
                sign *= (-1) ** sum(1 for i in odd_a if i > j)
        if not self.is_normal(c):
            return None
        return sign, c

    def key_weight(self, m):
        return sum(e * g.weight for e, g in zip(m, self.generators))

    def key_degree(self, m):
        return self.grading.norm(sum(e * g.degree for e, g in zip(m, self.generators)))

    def key_sort(self, m):
        return (self.key_weight(m), tuple(-e for e in m))

    def format_key(self, m):
        return format_monomial(m, self.names)

    @property
    def one(self):
        unit = (0,) * self.nvars
        return RingElement(self, {} if self.is_zero_ring else {unit: 1})

    def monomial(self, m, c=1):
        m = tuple(m)
        if len(m) != self.nvars:
            raise InputError("monomial length mismatch")
        for i, e in enumerate(m):
            if e < 0 and i not in self.inverted:
                raise NegativeExponentOfNonInverted(f"{self.names[i]}^{e}")
        if not self.coeff.contains(c):
            raise InputError(f"{c} is not in {self.coeff}")
        if not self.is_normal(m):
            return self.zero
        return RingElement(self, {m: c})

    def gen(self, name):
        m = [0] * self.nvars
        m[self.index(name)] = 1
        return self.monomial(m)

    def parse(self, text):
        return parse_element(self, text)

    def element(self, raw):
        return normal_form(self, raw)

    def key_of(self, e):
        if not e.is_monomial:
            raise NonMonomial(f"{e} is not a monomial")
        return next(iter(e.terms))

    def is_unit(self, e):
        if self.is_zero_ring:
            return True
        if not e.is_monomial:
            return False
        (m, c), = e.terms.items()
        return self.coeff.is_unit(c) and all(e_ == 0 or i in self.inverted for i, e_ in enumerate(m))

    def inverse(self, e):
        if not self.is_unit(e):
            raise InputError(f"{e} is not a unit")
        if self.is_zero_ring:
            return self.zero
        (m, c), = e.terms.items()
        return RingElement(self, {tuple(-x for x in m): 1 / c})

    # -- structure -----------------------------------------------------------
    def surviving(self):
        """Non-inverted generators that are nonzero in the ring."""
        out = []
        for i in range(self.nvars):
            if i in self.inverted:
                continue
            m = [0] * self.nvars
            m[i] = 1
            if self.is_normal(tuple(m)):
                out.append(i)
        return tuple(out)

    def is_nilpotent_generator(self, i):
        if self._odd(i):
            return True
        return any(r[i] > 0 and sum(1 for e in r if e) == 1 for r in self.relations)

    @property
    def profile(self):
        """How weight slices behave: zero, finite, polynomial, laurent or infinite."""
        if self.is_zero_ring:
            return "zero"
        nonnil = [i for i in self.surviving() if not self.is_nilpotent_generator(i)]
        if not self.inverted:
            return "polynomial" if nonnil else "finite"
        if len(self.inverted) == 1 and not nonnil:
            return "laurent"
        return "infinite"

    @property
    def unit_generator(self):
        """The inverted generator of a Laurent-profile ring."""
        return next(iter(self.inverted)) if self.profile == "laurent" else None

    @property
    def period(self):
        u = self.unit_generator
        return None if u is None else self.generators[u].weight

    def nilpotent_monomials(self):
        """All nonzero monomials in the surviving non-inverted generators (finite case)."""
        key = "nilmonos"
        if key not in self._cache:
            surv = self.surviving()
            if any(not self.is_nilpotent_generator(i) for i in surv):
                raise InfiniteSlices("ring has a non-nilpotent generator")
            seen = {(0,) * self.nvars} if not self.is_zero_ring else set()
            frontier = list(seen)
            while frontier:
                nxt = []
                for m in frontier:
                    for i in surv:
                        c = list(m)
                        c[i] += 1
                        c = tuple(c)
                        if c not in seen and self.is_normal(c):
                            seen.add(c)
                            nxt.append(c)
                frontier = nxt
            self._cache[key] = tuple(sorted(seen, key=self.key_sort))
        return self._cache[key]

    @property
    def top_weight(self):
        """Largest weight of a nonzero monomial for a finite-profile ring."""
        return max((self.key_weight(m) for m in self.nilpotent_monomials()), default=0)

    def weight_basis(self, w):
        """Normal monomials of weight ``w`` (a basis of the weight-w slice)."""
        key = ("wb", w)
        if key in self._cache:
            return self._cache[key]
        prof = self.profile
        if prof == "zero":
            out = ()
        elif prof == "infinite":
            raise InfiniteSlices("weight slices of this ring are not finitely generated")
        elif prof == "laurent":
            u = self.unit_generator
            wu = self.generators[u].weight
            out = []
            for n in self.nilpotent_monomials():
                rem = w - self.key_weight(n)
                if rem % wu == 0:
                    m = list(n)
                    m[u] = rem // wu
                    out.append(tuple(m))
            out = tuple(sorted(out, key=self.key_sort))
        else:
            out = []
            surv = self.surviving()
            for exps in _weight_compositions([self.generators[i].weight for i in surv], w):
                m = [0] * self.nvars
                for i, e in zip(surv, exps):
                    m[i] = e
                m = tuple(m)
                if self.is_normal(m):
                    out.append(m)
            out = tuple(sorted(out, key=self.key_sort))
        self._cache[key] = out
        return out

    def box_basis(self, size):
        """Normal monomials with sum |e_i| * weight_i <= size."""
        out = []
        ranges = []
        for i, g in enumerate(self.generators):
            top = size // g.weight
            lo = -top if i in self.inverted else 0
            ranges.append(range(lo, top + 1))
        for m in itertools.product(*ranges):
            if sum(abs(e) * g.weight for e, g in zip(m, self.generators)) <= size and self.is_normal(m):
                out.append(m)
        return tuple(sorted(out, key=self.key_sort))

    @property
    def is_local(self):
        """Weight-graded local: finite slices and a local coefficient ring."""
        return self.profile in ("finite", "polynomial", "laurent") and self.coeff.is_local

    def maximal_ideal_generators(self):
        """Generators of the homogeneous maximal ideal besides the coefficient prime."""
        return self.surviving()

    def with_relations(self, monomials):
        rels = list(self.relations) + [tuple(m) for m in monomials]
        return GradedRing(self.generators, tuple(rels), self.inverted, self.coeff, self.grading)

    def __str__(self):
        gens = []
        for i, g in enumerate(self.generators):
            gens.append(f"{g.name},{g.name}^-1" if i in self.inverted else g.name)
        base = f"{self.coeff}[{','.join(gens)}]"
        if self.relations:
            base += "/(" + ",".join(format_monomial(r, self.names) for r in self.relations) + ")"
        return base


@dataclass(frozen=True)
class ProductRing(_RingBase):
    """A finite product of presented rings sharing grading and coefficients."""

    factors: tuple

    def __post_init__(self):
        if not self.factors:
            raise InputError("empty product")
        first = self.factors[0]
        for f in self.factors:
            if not isinstance(f, GradedRing):
                raise InputError("product factors must be presented rings")
            if f.grading != first.grading or f.coeff != first.coeff:
                raise InputError("product factors must share grading and coefficients")

    @property
    def components(self):
        return self.factors

    @property
    def is_product(self):
        return True

    @property
    def coeff(self):
        return self.factors[0].coeff

    @property
    def grading(self):
        return self.factors[0].grading

    @property
    def is_zero_ring(self):
        return all(f.is_zero_ring for f in self.factors)

    def mul_keys(self, a, b):
        if a[0] != b[0]:
            return None
        prod = self.factors[a[0]].mul_keys(a[1], b[1])
        if prod is None:
            return None
        return prod[0], (a[0], prod[1])

    def key_weight(self, k):
        return self.factors[k[0]].key_weight(k[1])

    def key_degree(self, k):
        return self.factors[k[0]].key_degree(k[1])

    def key_sort(self, k):
        return (k[0],) + self.factors[k[0]].key_sort(k[1])

    def format_key(self, k):
        return f"e{k[0]}*" + self.factors[k[0]].format_key(k[1])

    def format_element(self, e):
        return "(" + ", ".join(str(p) for p in self.split(e)) + ")"

    @property
    def one(self):
        return self.pack([f.one for f in self.factors])

    def pack(self, parts):
        if len(parts) != len(self.factors):
            raise InputError("wrong number of components")
        terms = {}
        for i, (f, p) in enumerate(zip(self.factors, parts)):
            if not isinstance(p, RingElement):
                p = f.parse(p) if isinstance(p, str) else f.scalar(p)
            if p.ring != f:
                raise InputError("component element lives in the wrong ring")
            for k, c in p.terms.items():
                terms[(i, k)] = c
        return RingElement(self, terms)

    def split(self, e):
        parts = [dict() for _ in self.factors]
        for (i, k), c in e.terms.items():
            parts[i][k] = c
        return [RingElement(f, p) for f, p in zip(self.factors, parts)]

    def project(self, e, i):
        return self.split(e)[i]

    def parse(self, text):
        if isinstance(text, (list, tuple)):
            return self.pack(list(text))
        text = text.strip()
        if text.startswith("(") and text.endswith(")"):
            return self.pack([t.strip() for t in _split_top(text[1:-1])])
        if text == "0":
            return self.zero
        if text == "1":
            return self.one
        raise ParseError(f"product ring elements are written as tuples, got {text!r}")

    def is_unit(self, e):
        return all(f.is_unit(p) for f, p in zip(self.factors, self.split(e)))

    def inverse(self, e):
        return self.pack([f.inverse(p) for f, p in zip(self.factors, self.split(e))])

    def __str__(self):
        return " x ".join(str(f) for f in self.factors)


def _split_top(text):
    depth = 0
    out, cur = [], ""
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            out.append(cur)
            cur = ""
        else:
            cur += ch
    out.append(cur)
    return out


def _minimalize(monos):
    monos = sorted(set(monos), key=lambda m: (sum(m), m))
    keep = []
    for m in monos:
        if not any(all(k[i] <= m[i] for i in range(len(m))) for k in keep):
            keep.append(m)
    return tuple(sorted(keep))


def _weight_compositions(weights, w):
    if w < 0:
        return
    if not weights:
        if w == 0:
            yield ()
        return
    first, rest = weights[0], weights[1:]
    for e in range(w // first + 1):
        for tail in _weight_compositions(rest, w - e * first):
            yield (e,) + tail


def format_monomial(m, names):
    parts = []
    for e, n in zip(m, names):
        if e == 1:
            parts.append(n)
        elif e:
            parts.append(f"{n}^{e}")
    return "*".join(parts) if parts else "1"


def parse_monomial(text, names):
    text = text.replace(" ", "")
    m = [0] * len(names)
    if text == "1":
        return tuple(m)
    for factor in text.split("*"):
        name, _, exp = factor.partition("^")
        exp = exp.strip("()")
        if name not in names:
            raise UnknownGenerator(f"unknown generator {name!r}")
        m[names.index(name)] += int(exp) if exp else 1
    return tuple(m)


# -- expression parsing ------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_']*)|(\S))")


def _tokenize(text):
    pos = 0
    out = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"cannot tokenize {text!r}", 1, pos + 1)
        num, name, op = m.groups()
        col = m.start() + 1 + (len(m.group(0)) - len(m.group(0).lstrip()))
        if num is not None:
            out.append(("num", int(num), col))
        elif name is not None:
            out.append(("name", name, col))
        else:
            out.append(("op", op, col))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, ring, text):
        self.ring = ring
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None, len(self.text) + 1)

    def take(self, kind=None, value=None):
        tok = self.peek()
        if tok[0] is None or (kind and tok[0] != kind) or (value and tok[1] != value):
            raise ParseError(f"unexpected token in {self.text!r}", 1, tok[2])
        self.i += 1
        return tok

    def parse(self):
        e = self.expr()
        if self.i != len(self.toks):
            raise ParseError(f"trailing input in {self.text!r}", 1, self.peek()[2])
        return e

    def expr(self):
        e = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            t = self.term()
            e = e + t if op == "+" else e - t
        return e

    def term(self):
        e = self.factor()
        while self.peek()[0] == "op" and self.peek()[1] in ("*", "/"):
            op = self.take()[1]
            if op == "*":
                e = e * self.factor()
            else:
                n = self.take("num")[1]
                if n == 0:
                    raise ParseError("division by zero", 1, self.peek()[2])
                e = e * Fraction(1, n)
        return e

    def exponent(self):
        if self.peek()[1] == "(":
            self.take()
            e = self.exponent()
            self.take("op", ")")
            return e
        sign = 1
        if self.peek()[1] == "-":
            self.take()
            sign = -1
        return sign * self.take("num")[1]

    def factor(self):
        kind, val, col = self.peek()
        if kind == "op" and val == "-":
            self.take()
            return -self.factor()
        if kind == "op" and val == "+":
            self.take()
            return self.factor()
        if kind == "num":
            self.take()
            base = self.ring.scalar(val)
            if self.peek()[1] == "^":
                self.take()
                return self.ring.scalar(Fraction(val) ** self.exponent())
            return base
        if kind == "name":
            self.take()
            i = self.ring.index(val)
            e = 1
            if self.peek()[1] == "^":
                self.take()
                e = self.exponent()
            if e < 0 and i not in self.ring.inverted:
                raise NegativeExponentOfNonInverted(f"{val}^{e}: {val} is not inverted")
            m = [0] * self.ring.nvars
            m[i] = e
            return self.ring.monomial(m)
        if kind == "op" and val == "(":
            self.take()
            e = self.expr()
            self.take("op", ")")
            if self.peek()[1] == "^":
                self.take()
                n = self.exponent()
                if n < 0:
                    raise ParseError("negative powers of sums are not supported", 1, col)
                return e ** n
            return e
        raise ParseError(f"unexpected token in {self.text!r}", 1, col)


def parse_element(ring, text):
    if isinstance(ring, ProductRing):
        return ring.parse(text)
    return _Parser(ring, str(text)).parse()


def normal_form(ring, raw):
    """Reduce a formal polynomial to normal form.

    ``raw`` is a string, a RingElement, or a dict mapping exponent tuples (or
    ``{name: exponent}`` dicts given as tuples of pairs) to coefficients.
    """
    if isinstance(raw, RingElement):
        if raw.ring != ring:
            raise InputError("element of a different ring")
        return raw
    if isinstance(raw, (str, list)):
        return parse_element(ring, raw)
    if isinstance(ring, ProductRing):
        raise InputError("product ring elements are given per component")
    out = ring.zero
    for mono, c in raw.items():
        if mono and isinstance(mono[0], tuple):
            m = [0] * ring.nvars
            for name, e in mono:
                m[ring.index(name)] += e
            mono = tuple(m)
        if len(mono) != ring.nvars:
            raise InputError("monomial length mismatch")
        out = out + ring.monomial(mono, c)
    return out


# -- ring operations ---------------------------------------------------------

def localize(ring, g):
    """Invert the generator ``g``; relations through ``g`` are stripped."""
    if isinstance(ring, ProductRing):
        return ProductRing(tuple(localize(f, g) for f in ring.factors))
    i = ring.index(g) if isinstance(g, str) else g
    if i in ring.inverted:
        raise AlreadyInverted(f"{ring.names[i]} is already inverted")
    return GradedRing(ring.generators, ring.relations, ring.inverted | {i}, ring.coeff, ring.grading)


class Connectedness(NamedTuple):
    connected: bool
    reason: str


def is_connected(ring):
    if isinstance(ring, ProductRing):
        nonzero = [f for f in ring.factors if not f.is_zero_ring]
        if len(nonzero) >= 2:
            return Connectedness(False, f"{len(nonzero)} nonzero factors; (1,0,...) is a non-trivial idempotent")
        if not nonzero:
            return Connectedness(False, "zero ring has empty spectrum")
        inner = is_connected(nonzero[0])
        return Connectedness(inner.connected, "single nonzero factor: " + inner.reason)
    if ring.is_zero_ring:
        return Connectedness(False, "zero ring has empty spectrum")
    return Connectedness(True, (
        f"coefficient ring {ring.coeff} is a domain; every idempotent has weight-0 part in "
        "{0,1} and no positive-weight part, and every monomial prime lies in the prime "
        "generated by all non-inverted generators"))


@dataclass(frozen=True)
class MonomialPrime:
    ring: GradedRing
    variables: frozenset
    minimal: bool = field(default=False, compare=False)

    @property
    def names(self):
        return tuple(sorted(self.ring.names[i] for i in self.variables))

    def __str__(self):
        return "(" + ",".join(self.names) + ")" if self.variables else "(0)"


def _effective_relations(ring):
    rels = list(ring.relations)
    for i in range(ring.nvars):
        if i not in ring.inverted and ring._odd(i):
            m = [0] * ring.nvars
            m[i] = 2
            rels.append(tuple(m))
    return rels


def monomial_prime(ring, names):
    vs = frozenset(ring.index(n) for n in names)
    if any(i in ring.inverted for i in vs):
        raise InputError("primes cannot contain inverted generators")
    for r in _effective_relations(ring):
        if not any(r[i] > 0 for i in vs):
            raise InputError(f"{names} does not contain the relation {format_monomial(r, ring.names)}")
    return MonomialPrime(ring, vs)


def spec_monomial_primes(ring):
    """All monomial primes, minimal ones flagged, ordered by size then names."""
    if isinstance(ring, ProductRing):
        raise ProductRingUnsupported("spectrum of a product ring: use its factors")
    if ring.is_zero_ring:
        return []
    cands = [i for i in range(ring.nvars) if i not in ring.inverted]
    rels = _effective_relations(ring)
    good = []
    for k in range(len(cands) + 1):
        for sub in itertools.combinations(cands, k):
            s = set(sub)
            if all(any(r[i] > 0 for i in s) for r in rels):
                good.append(frozenset(s))
    out = []
    for s in good:
        minimal = not any(t < s for t in good)
        out.append(MonomialPrime(ring, s, minimal))
    return sorted(out, key=lambda p: (len(p.variables), p.names))


def basic_open_contains(f, p):
    """Whether p lies in D(f) for a monomial f."""
    if not f.is_monomial:
        raise NonMonomial(f"{f} is not a monomial")
    m = next(iter(f.terms))
    return not any(m[i] > 0 for i in p.variables)


def unit_ideal_combination(ring, fs):
    """Coefficients b with 1 = sum b_i f_i for monomials f_i, or None."""
    for k, f in enumerate(fs):
        if ring.is_unit(f):
            bs = [ring.zero] * len(fs)
            bs[k] = ring.inverse(f)
            return bs
    return None


def parity_pushforward(grading, degrees):
    """Send G-degrees to Z/2 through the parity homomorphism, keeping order."""
    if not grading.nontrivial:
        raise TrivialParity("parity homomorphism is trivial")
    return [1 if grading.odd(d) else 0 for d in degrees]


# -- algebra maps ------------------------------------------------------------

@dataclass(frozen=True)
class AlgebraMap:
    """A graded ring map determined by generator images."""

    source: GradedRing
    target: object
    images: tuple

    def __post_init__(self):
        src, tgt = self.source, self.target
        if isinstance(src, ProductRing):
            raise IllFormedAlgebraMap("algebra maps out of product rings are not supported")
        if len(self.images) != src.nvars:
            raise IllFormedAlgebraMap("one image per generator required")
        if tgt.grading != src.grading:
            raise IllFormedAlgebraMap("source and target gradings differ")
        for g, img in zip(src.generators, self.images):
            if img.ring != tgt:
                raise IllFormedAlgebraMap(f"image of {g.name} is not in the target")
            if img.is_zero:
                continue
            if img.weight != g.weight or img.degree != src.grading.norm(g.degree):
                raise IllFormedAlgebraMap(
                    f"image of {g.name} must be homogeneous of weight {g.weight} and degree {g.degree}")
        for i in src.inverted:
            if not tgt.is_unit(self.images[i]):
                raise IllFormedAlgebraMap(f"inverted generator {src.names[i]} must map to a unit")
        for r in src.relations:
            if not self._apply_monomial(r).is_zero:
                raise IllFormedAlgebraMap(f"relation {format_monomial(r, src.names)} does not map to 0")

    @classmethod
    def from_strings(cls, source, target, mapping):
        images = []
        for name in source.names:
            if name not in mapping:
                raise IllFormedAlgebraMap(f"no image for {name}")
            images.append(parse_element(target, mapping[name]))
        extra = set(mapping) - set(source.names)
        if extra:
            raise UnknownGenerator(f"unknown generators in map: {sorted(extra)}")
        return cls(source, target, tuple(images))

    @classmethod
    def identity(cls, ring):
        return cls(ring, ring, tuple(ring.gen(n) for n in ring.names))

    @classmethod
    def quotient(cls, ring, monomials):
        """The projection onto ring / (monomials)."""
        q = ring.with_relations(monomials)
        return cls(ring, q, tuple(q.gen(n) for n in ring.names))

    @classmethod
    def localization(cls, ring, names):
        loc = ring
        for n in names:
            loc = localize(loc, n)
        return cls(ring, loc, tuple(loc.gen(n) for n in ring.names))

    def _apply_monomial(self, m):
        out = self.target.one
        for i, e in enumerate(m):
            if e:
                out = out * (self.images[i] ** e)
        return out

    def __call__(self, e):
        if e.ring != self.source:
            raise IllFormedAlgebraMap("element not in the source ring")
        out = self.target.zero
        for m, c in e.terms.items():
            out = out + self._apply_monomial(m) * c
        return out

    def compose(self, first):
        """self o first."""
        return AlgebraMap(first.source, self.target, tuple(self(img) for img in first.images))
