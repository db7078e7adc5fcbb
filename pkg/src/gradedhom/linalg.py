"""Dense exact linear algebra over Q (and F_p for residue computations).

Vectors are lists of ``Fraction``; a matrix is a list of rows.  Slice
computations stay small (tens to a few hundred columns), so plain Gaussian
elimination is adequate.
"""

from fractions import Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


def zeros(n):
    return [ZERO] * n


def unit_vector(n, i):
    v = [ZERO] * n
    v[i] = ONE
    return v


def rref(rows, ncols):
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    m = [list(r) for r in rows if any(r)]
    pivots = []
    r = 0
    for c in range(ncols):
        if r == len(m):
            break
        k = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if k is None:
            continue
        m[r], m[k] = m[k], m[r]
        pr = m[r]
        inv = 1 / pr[c]
        if inv != 1:
            pr = m[r] = [x * inv for x in pr]
        for i in range(len(m)):
            if i != r:
                f = m[i][c]
                if f != 0:
                    row = m[i]
                    m[i] = [a - f * b for a, b in zip(row, pr)]
        pivots.append(c)
        r += 1
    return m[:r], pivots


def rank(rows, ncols=None):
    rows = [r for r in rows if any(r)]
    if not rows:
        return 0
    if ncols is None:
        ncols = len(rows[0])
    return len(rref(rows, ncols)[1])


def transpose(rows, ncols):
    return [[row[j] for row in rows] for j in range(ncols)]


def matvec(rows, v):
    return [sum((a * b for a, b in zip(row, v) if a != 0 and b != 0), ZERO) for row in rows]


def matmul(a, b, inner, ncols):
    """Product of an (m x inner) and an (inner x ncols) matrix."""
    out = []
    for row in a:
        acc = [ZERO] * ncols
        for k in range(inner):
            x = row[k]
            if x != 0:
                bk = b[k]
                for j in range(ncols):
                    if bk[j] != 0:
                        acc[j] += x * bk[j]
        out.append(acc)
    return out


def nullspace(rows, ncols):
    """Basis of {v : A v = 0} for A given by ``rows`` with ``ncols`` columns."""
    red, pivots = rref(rows, ncols)
    pivset = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivset:
            continue
        v = [ZERO] * ncols
        v[free] = ONE
        for row, p in zip(red, pivots):
            if row[free] != 0:
                v[p] = -row[free]
        basis.append(v)
    return basis


def row_basis(vectors, n):
    """An echelon basis of the span of ``vectors``."""
    return rref(vectors, n)[0]


def solve(rows, ncols, b):
    """Some x with A x = b, or None when the system is inconsistent."""
    aug = [list(r) + [bi] for r, bi in zip(rows, b)]
    red, pivots = rref(aug, ncols + 1)
    if pivots and pivots[-1] == ncols:
        return None
    x = [ZERO] * ncols
    for row, p in zip(red, pivots):
        x[p] = row[ncols]
    return x


def invert(square):
    n = len(square)
    aug = [list(r) + unit_vector(n, i) for i, r in enumerate(square)]
    red, pivots = rref(aug, 2 * n)
    if pivots[:n] != list(range(n)) or len(red) < n:
        raise ZeroDivisionError("matrix is singular")
    return [row[n:] for row in red]


class Coordinates:
    """Coordinates with respect to a list of linearly independent vectors.

    ``coords(v)`` returns c with v = sum c_i * vectors[i]; v must lie in the
    span (not re-checked).
    """

    def __init__(self, vectors, n):
        self.vectors = [list(v) for v in vectors]
        self.n = n
        k = len(self.vectors)
        if k == 0:
            self.cols = []
            self.inv = []
            return
        red, pivots = rref(self.vectors, n)
        if len(pivots) != k:
            raise ValueError("vectors are not independent")
        self.cols = pivots
        self.inv = invert([[v[c] for c in pivots] for v in self.vectors])

    def coords(self, v):
        k = len(self.vectors)
        if k == 0:
            return []
        vp = [v[c] for c in self.cols]
        return [sum((vp[i] * self.inv[i][j] for i in range(k) if vp[i] != 0), ZERO) for j in range(k)]


class QuotientBasis:
    """Representatives for Z / B where B <= Z <= Q^n.

    ``reps`` are vectors of Z whose classes form a basis of the quotient;
    ``coords(z)`` gives the class of z in that basis.
    """

    def __init__(self, cycles, boundaries, n):
        self.n = n
        bbasis = row_basis(boundaries, n)
        self.boundary_basis = bbasis
        reps = []
        current = list(bbasis)
        r = len(current)
        for z in row_basis(cycles, n):
            trial = current + [z]
            if rank(trial, n) > r:
                current = trial
                r += 1
                reps.append(z)
        self.reps = reps
        self._coords = Coordinates(bbasis + reps, n)
        self._nb = len(bbasis)

    @property
    def dim(self):
        return len(self.reps)

    def coords(self, z):
        return self._coords.coords(z)[self._nb:]


def rank_mod_p(rows, ncols, p):
    """Rank of an integral-at-p rational matrix reduced mod p."""
    m = []
    for row in rows:
        red = []
        for x in row:
            x = Fraction(x)
            red.append((x.numerator * pow(x.denominator, -1, p)) % p)
        if any(red):
            m.append(red)
    r = 0
    for c in range(ncols):
        k = next((i for i in range(r, len(m)) if m[i][c] % p), None)
        if k is None:
            continue
        m[r], m[k] = m[k], m[r]
        inv = pow(m[r][c], -1, p)
        m[r] = [(x * inv) % p for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [(a - f * b) % p for a, b in zip(m[i], m[r])]
        r += 1
        if r == len(m):
            break
    return r
