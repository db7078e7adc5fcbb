"""Exact coefficient rings: Q, Z[S^-1] for a finite set of primes S, and Z_(p)."""

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .errors import InputError


def _strip(n, primes):
    n = abs(n)
    for p in primes:
        while n and n % p == 0:
            n //= p
    return n


def _is_prime(n):
    if n < 2:
        return False
    k = 2
    while k * k <= n:
        if n % k == 0:
            return False
        k += 1
    return True


@dataclass(frozen=True)
class CoefficientRing:
    """A subring of Q.

    ``kind`` is ``"Q"``, ``"Zinv"`` (integers with the primes in ``primes``
    inverted) or ``"Zloc"`` (integers localized at the prime ideal ``(p)``,
    with ``primes == (p,)``).
    """

    kind: str = "Q"
    primes: tuple = ()

    def __post_init__(self):
        if self.kind not in ("Q", "Zinv", "Zloc"):
            raise InputError(f"unknown coefficient ring kind {self.kind!r}")
        if self.kind == "Q" and self.primes:
            raise InputError("Q takes no primes")
        if self.kind == "Zloc" and len(self.primes) != 1:
            raise InputError("Z_(p) needs exactly one prime")
        for p in self.primes:
            if not _is_prime(p):
                raise InputError(f"{p} is not prime")
        object.__setattr__(self, "primes", tuple(sorted(set(self.primes))))

    @classmethod
    def parse(cls, text):
        text = text.replace(" ", "")
        if text in ("Q", "QQ"):
            return cls("Q")
        if text in ("Z", "ZZ"):
            return cls("Zinv", ())
        if text.startswith("Z_(") and text.endswith(")"):
            return cls("Zloc", (int(text[3:-1]),))
        if text.startswith("Z[") and text.endswith("]"):
            primes = []
            for part in text[2:-1].split(","):
                if not part.startswith("1/"):
                    raise InputError(f"cannot parse coefficient ring {text!r}")
                primes.append(int(part[2:]))
            return cls("Zinv", tuple(primes))
        raise InputError(f"cannot parse coefficient ring {text!r}")

    def __str__(self):
        if self.kind == "Q":
            return "Q"
        if self.kind == "Zloc":
            return f"Z_({self.primes[0]})"
        if not self.primes:
            return "Z"
        return "Z[" + ",".join(f"1/{p}" for p in self.primes) + "]"

    @property
    def is_field(self):
        return self.kind == "Q"

    @property
    def is_local(self):
        return self.kind in ("Q", "Zloc")

    @property
    def residue_characteristic(self):
        """Characteristic of the residue field of a local coefficient ring."""
        if self.kind == "Q":
            return 0
        if self.kind == "Zloc":
            return self.primes[0]
        return None

    def contains(self, c):
        c = Fraction(c)
        if self.kind == "Q":
            return True
        if self.kind == "Zloc":
            return c.denominator % self.primes[0] != 0
        return _strip(c.denominator, self.primes) == 1

    def is_unit(self, c):
        c = Fraction(c)
        if c == 0 or not self.contains(c):
            return False
        if self.kind == "Q":
            return True
        if self.kind == "Zloc":
            return c.numerator % self.primes[0] != 0
        return _strip(c.numerator, self.primes) == 1

    @property
    def two_is_unit(self):
        return self.is_unit(2)

    def ideal_contains_one(self, values):
        """Whether the ideal generated by ``values`` is the whole ring."""
        values = [Fraction(v) for v in values if v != 0]
        if self.kind == "Q":
            return bool(values)
        if self.kind == "Zloc":
            return any(self.is_unit(v) for v in values)
        g = 0
        for v in values:
            g = gcd(g, v.numerator)
        return g != 0 and _strip(g, self.primes) == 1


QQ = CoefficientRing("Q")
