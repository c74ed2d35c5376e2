"""Permutations, the rational group algebra QS_n and the Eulerian idempotents.

Permutations are 1-based one-line tuples: ``Permutation((2, 1, 3))`` sends
1 to 2, 2 to 1 and 3 to 3.  Composition is ``compose(p, q)(i) = p(q(i))``.

The idempotents are built spectrally: ``total_shuffle(n)`` is diagonalizable
with eigenvalues ``2**i - 2`` (i = 1..n), and ``eulerian_idempotent(n, i)``
is the Lagrange projector onto the ``2**i - 2`` eigenspace.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations
from math import factorial, lcm
from typing import Iterable, Mapping

from .exactq import as_scalar

# largest n for which a full multiplication table of S_n is kept
TABLE_MAX_N = 6


class Permutation(tuple):
    """A bijection of {1..n} in one-line notation."""

    __slots__ = ()

    def __new__(cls, images: Iterable[int]):
        images = tuple(images)
        if sorted(images) != list(range(1, len(images) + 1)):
            raise ValueError(f"{images} is not a permutation of 1..{len(images)}")
        return tuple.__new__(cls, images)

    @classmethod
    def _raw(cls, images):
        return tuple.__new__(cls, images)

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls._raw(range(1, n + 1))

    @property
    def n(self) -> int:
        return len(self)

    def __call__(self, i: int) -> int:
        return self[i - 1]

    def inverse(self) -> "Permutation":
        inv = [0] * len(self)
        for j, x in enumerate(self, 1):
            inv[x - 1] = j
        return Permutation._raw(inv)

    def __repr__(self):
        return f"Permutation({tuple(self)})"


def compose(p: Permutation, q: Permutation) -> Permutation:
    if len(p) != len(q):
        raise ValueError("permutations of different sizes")
    return Permutation._raw(p[x - 1] for x in q)


def sign(p: Permutation) -> int:
    """Parity by inversion count: +1 or -1."""
    s = 1
    n = len(p)
    for a in range(n):
        pa = p[a]
        for b in range(a + 1, n):
            if pa > p[b]:
                s = -s
    return s


def transposition(n: int, a: int, b: int) -> Permutation:
    img = list(range(1, n + 1))
    img[a - 1], img[b - 1] = img[b - 1], img[a - 1]
    return Permutation._raw(img)


@lru_cache(maxsize=None)
def _table(n: int):
    perms = [Permutation._raw(p) for p in permutations(range(1, n + 1))]
    index = {p: k for k, p in enumerate(perms)}
    table = [[index[compose(p, q)] for q in perms] for p in perms]
    return perms, index, table


class GroupAlgebraElement:
    """Sparse element of QS_n: a map ``Permutation -> Fraction``."""

    __slots__ = ("n", "coeffs")

    def __init__(self, n: int, coeffs: Mapping[Permutation, object] | None = None):
        if n < 0:
            raise ValueError("degree must be nonnegative")
        self.n = n
        clean = {}
        for p, x in (coeffs or {}).items():
            if not isinstance(p, Permutation):
                p = Permutation(p)
            if len(p) != n:
                raise ValueError(f"permutation {p} does not lie in S_{n}")
            x = as_scalar(x)
            if x:
                clean[p] = x
        self.coeffs = clean

    @classmethod
    def _trusted(cls, n, coeffs):
        obj = cls.__new__(cls)
        obj.n = n
        obj.coeffs = coeffs
        return obj

    @classmethod
    def one(cls, n: int) -> "GroupAlgebraElement":
        return cls._trusted(n, {Permutation.identity(n): Fraction(1)})

    @classmethod
    def zero(cls, n: int) -> "GroupAlgebraElement":
        return cls._trusted(n, {})

    def __bool__(self):
        return bool(self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, p) -> Fraction:
        return self.coeffs.get(Permutation(p), Fraction(0))

    def __eq__(self, other):
        if not isinstance(other, GroupAlgebraElement):
            return NotImplemented
        return self.n == other.n and self.coeffs == other.coeffs

    __hash__ = None

    def _check(self, other):
        if self.n != other.n:
            raise ValueError(f"degree mismatch: S_{self.n} vs S_{other.n}")

    def __add__(self, other):
        self._check(other)
        out = dict(self.coeffs)
        for p, x in other.coeffs.items():
            v = out.get(p, 0) + x
            if v:
                out[p] = v
            else:
                out.pop(p, None)
        return GroupAlgebraElement._trusted(self.n, out)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s) -> "GroupAlgebraElement":
        s = as_scalar(s)
        if not s:
            return GroupAlgebraElement.zero(self.n)
        return GroupAlgebraElement._trusted(self.n, {p: x * s for p, x in self.coeffs.items()})

    def __mul__(self, other):
        if isinstance(other, GroupAlgebraElement):
            return ga_mul(self, other)
        return self.scale(other)

    __rmul__ = scale

    def antipode(self) -> "GroupAlgebraElement":
        """Linear extension of ``p -> p.inverse()``; reverses products."""
        return GroupAlgebraElement._trusted(
            self.n, {p.inverse(): x for p, x in self.coeffs.items()}
        )

    def __repr__(self):
        terms = sorted(self.coeffs.items())
        body = " + ".join(f"{x}*{tuple(p)}" for p, x in terms) or "0"
        return f"GroupAlgebraElement(n={self.n}: {body})"


def _scaled_ints(coeffs: Mapping[Permutation, Fraction]):
    den = lcm(*(x.denominator for x in coeffs.values()))
    return den, [(p, int(x * den)) for p, x in coeffs.items()]


def ga_mul(a: GroupAlgebraElement, b: GroupAlgebraElement) -> GroupAlgebraElement:
    """Convolution product: the coefficient of r is the sum of a(p)b(q) over p∘q = r."""
    a._check(b)
    n = a.n
    if not a.coeffs or not b.coeffs:
        return GroupAlgebraElement.zero(n)
    da, ai = _scaled_ints(a.coeffs)
    db, bi = _scaled_ints(b.coeffs)
    den = da * db
    if n <= TABLE_MAX_N:
        perms, index, table = _table(n)
        bx = [(index[q], y) for q, y in bi]
        acc = [0] * len(perms)
        for p, x in ai:
            row = table[index[p]]
            for qi, y in bx:
                acc[row[qi]] += x * y
        out = {perms[r]: Fraction(v, den) for r, v in enumerate(acc) if v}
    else:
        acc = {}
        for p, x in ai:
            for q, y in bi:
                r = compose(p, q)
                acc[r] = acc.get(r, 0) + x * y
        out = {r: Fraction(v, den) for r, v in acc.items() if v}
    return GroupAlgebraElement._trusted(n, out)


def shuffles(p: int, q: int) -> list[Permutation]:
    """All (p,q)-shuffles: σ(1) < … < σ(p) and σ(p+1) < … < σ(p+q)."""
    n = p + q
    out = []
    for head in combinations(range(1, n + 1), p):
        tail = [x for x in range(1, n + 1) if x not in head]
        out.append(Permutation._raw(head + tuple(tail)))
    return out


def shuffle_sum(p: int, q: int) -> GroupAlgebraElement:
    """Signed sum of the (p,q)-shuffles."""
    if p < 1 or q < 1:
        raise ValueError("shuffle_sum needs p, q >= 1")
    coeffs = {s: Fraction(sign(s)) for s in shuffles(p, q)}
    return GroupAlgebraElement._trusted(p + q, coeffs)


@lru_cache(maxsize=None)
def total_shuffle(n: int) -> GroupAlgebraElement:
    if n < 1:
        raise ValueError("n must be >= 1")
    out = GroupAlgebraElement.zero(n)
    for p in range(1, n):
        out = out + shuffle_sum(p, n - p)
    return out


def eigenvalue(i: int) -> int:
    return 2**i - 2


@lru_cache(maxsize=None)
def eulerian_idempotent(n: int, i: int) -> GroupAlgebraElement:
    """The i-th Eulerian idempotent of QS_n (zero when i > n)."""
    if n < 1 or i < 1:
        raise ValueError("need n >= 1 and i >= 1")
    if i > n:
        return GroupAlgebraElement.zero(n)
    s = total_shuffle(n)
    one = GroupAlgebraElement.one(n)
    e = one
    for j in range(1, n + 1):
        if j == i:
            continue
        factor = (s - one.scale(eigenvalue(j))).scale(Fraction(1, eigenvalue(i) - eigenvalue(j)))
        e = ga_mul(e, factor)
    return e


@lru_cache(maxsize=None)
def antisymmetrizer(n: int) -> GroupAlgebraElement:
    if n < 1:
        raise ValueError("n must be >= 1")
    w = Fraction(1, factorial(n))
    coeffs = {Permutation._raw(p): w * sign(p) for p in permutations(range(1, n + 1))}
    return GroupAlgebraElement._trusted(n, coeffs)


def permute_legs(p: Permutation, legs: tuple) -> tuple:
    """Move leg j to position p(j)."""
    out = [None] * len(legs)
    for j, a in enumerate(legs):
        out[p[j] - 1] = a
    return tuple(out)


def act_on_terms(g: GroupAlgebraElement, terms: Mapping[tuple, object]) -> dict[tuple, Fraction]:
    """Act on ``{(slot, leg_1, …, leg_n): coeff}``; the slot is left alone."""
    out: dict[tuple, Fraction] = {}
    for chain, c in terms.items():
        if len(chain) - 1 != g.n:
            raise ValueError(f"chain has {len(chain) - 1} legs, group element acts on {g.n}")
        slot, legs = chain[0], chain[1:]
        for p, x in g.coeffs.items():
            key = (slot,) + permute_legs(p, legs)
            v = out.get(key, 0) + x * c
            if v:
                out[key] = v
            else:
                out.pop(key, None)
    return out


def act_on_chain(g: GroupAlgebraElement, c):
    """Left action of QS_n on the legs of a chain vector.

    Accepts either a :class:`~hodgeham.monomial.ChainVector` (returns one of
    the same shape) or a plain ``{chain tuple: coeff}`` mapping.
    """
    terms = getattr(c, "terms", None)
    if terms is None:
        return act_on_terms(g, c)
    if c.n != g.n:
        raise ValueError(f"chain has {c.n} legs, group element acts on {g.n}")
    return c.with_terms(act_on_terms(g, terms))
