"""Monomials of R_k = Q[z_1..z_k], symmetric coefficient modules, chain bases.

A monomial is a tuple of exponents.  A monomial chain ``m⊗a_1⊗…⊗a_n`` is
the flat tuple ``(m, a_1, …, a_n)``; the coefficient slot ``m`` lives in the
module, the legs in the algebra.  Tuples compare numerically, so sorting
chains gives the lexicographic basis order used for every block matrix.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import comb, prod
from typing import Iterator, Mapping

from .exactq import as_scalar

Monomial = tuple  # exponent tuple
MultiDegree = tuple
MonomialChain = tuple  # (slot, leg_1, ..., leg_n)


def unit(k: int) -> Monomial:
    return (0,) * k


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if len(a) != len(b):
        raise ValueError("monomials in different numbers of variables")
    return tuple(x + y for x, y in zip(a, b))


def degree_of(*monos: Monomial) -> MultiDegree:
    return tuple(map(sum, zip(*monos)))


def format_monomial(a: Monomial) -> str:
    return "z^[" + ",".join(map(str, a)) + "]"


_MONO_RE = re.compile(r"^z\^\[(-?\d+(?:,-?\d+)*)?\]$")


def parse_monomial(text: str) -> Monomial:
    m = _MONO_RE.match(text.strip())
    if not m:
        raise ValueError(f"not a monomial: {text!r}")
    body = m.group(1)
    return tuple(int(x) for x in body.split(",")) if body else ()


def format_chain(chain: MonomialChain) -> str:
    return "|".join(format_monomial(a) for a in chain)


def parse_chain(text: str) -> MonomialChain:
    return tuple(parse_monomial(part) for part in text.split("|"))


@dataclass(frozen=True)
class ModuleKind:
    """A symmetric, unit-linked coefficient module over R_k.

    ``regular``: M = R_k.  ``trunc``: R_k with every monomial having some
    exponent ``>= param`` sent to zero.  ``var``: M = R_{k_total} over the
    one-variable algebra Q[z], with z acting as z_param.
    """

    kind: str = "regular"
    param: int | None = None
    k_total: int | None = None

    def __post_init__(self):
        if self.kind == "regular":
            if self.param is not None:
                raise ValueError("regular module takes no parameter")
        elif self.kind == "trunc":
            if self.param is None or self.param < 1:
                raise ValueError("truncation level must be >= 1")
        elif self.kind == "var":
            if self.k_total is None or self.param is None or not 1 <= self.param <= self.k_total:
                raise ValueError("variable restriction needs 1 <= i <= k_total")
        else:
            raise ValueError(f"unknown module kind {self.kind!r}")

    @classmethod
    def regular(cls) -> "ModuleKind":
        return cls("regular")

    @classmethod
    def truncation(cls, m: int) -> "ModuleKind":
        return cls("trunc", m)

    @classmethod
    def variable(cls, i: int, k_total: int) -> "ModuleKind":
        return cls("var", i, k_total)

    @classmethod
    def parse(cls, text: str, k: int) -> "ModuleKind":
        """Parse ``regular``, ``trunc:M`` or ``var:I`` (with ``k_total = k``)."""
        text = text.strip()
        if text == "regular":
            return cls.regular()
        name, sep, arg = text.partition(":")
        if sep and arg.isdigit():
            if name == "trunc":
                return cls.truncation(int(arg))
            if name == "var":
                return cls.variable(int(arg), k)
        raise ValueError(f"bad module spec {text!r}")

    def __str__(self):
        if self.kind == "regular":
            return "regular"
        return f"{self.kind}:{self.param}"

    def algebra_vars(self, k: int) -> int:
        """Number of variables of the acting algebra when the module has k."""
        return 1 if self.kind == "var" else k

    def admissible(self, m: Monomial) -> bool:
        if self.kind == "trunc":
            return all(x < self.param for x in m)
        return True

    def lift(self, a: Monomial) -> Monomial:
        """Image of an algebra monomial in the module's multidegree space."""
        if self.kind != "var":
            return a
        out = [0] * self.k_total
        out[self.param - 1] = a[0]
        return tuple(out)

    def act(self, a: Monomial, m: Monomial) -> Monomial | None:
        """``a·m`` in the module, or ``None`` when the product is zero."""
        if self.kind == "var":
            if len(a) != 1 or len(m) != self.k_total:
                raise ValueError("variable-restricted module: incompatible monomials")
            i = self.param - 1
            return m[:i] + (m[i] + a[0],) + m[i + 1 :]
        r = mono_mul(a, m)
        if self.kind == "trunc" and any(x >= self.param for x in r):
            return None
        return r


REGULAR = ModuleKind.regular()


def module_action(a: Monomial, m: Monomial, module: ModuleKind = REGULAR) -> Monomial | None:
    return module.act(a, m)


def chain_degree(chain: MonomialChain, module: ModuleKind = REGULAR) -> MultiDegree:
    slot = chain[0]
    total = list(slot)
    for a in chain[1:]:
        for j, x in enumerate(module.lift(a)):
            total[j] += x
    return tuple(total)


def weak_compositions(total: int, parts: int) -> Iterator[tuple]:
    """Ordered tuples of ``parts`` nonnegative integers summing to ``total``."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in weak_compositions(total - first, parts - 1):
            yield (first,) + rest


def enumerate_chain_basis(n: int, N: MultiDegree, module: ModuleKind = REGULAR) -> list[MonomialChain]:
    """All admissible n-leg monomial chains of total degree N, sorted."""
    if n < 0:
        raise ValueError("number of legs must be nonnegative")
    N = tuple(N)
    if any(x < 0 for x in N):
        return []
    if module.kind == "var":
        if len(N) != module.k_total:
            raise ValueError("degree length must equal k_total")
        i = module.param - 1
        out = []
        for comp in weak_compositions(N[i], n + 1):
            slot = N[:i] + (comp[0],) + N[i + 1 :]
            out.append((slot,) + tuple((x,) for x in comp[1:]))
        out.sort()
        return out
    per_var = []
    for x in N:
        comps = weak_compositions(x, n + 1)
        if module.kind == "trunc":
            comps = (c for c in comps if c[0] < module.param)
        per_var.append(list(comps))
    out = [
        tuple(tuple(c[pos] for c in combo) for pos in range(n + 1)) for combo in product(*per_var)
    ]
    out.sort()
    return out


def block_dim(n: int, N: MultiDegree, module: ModuleKind = REGULAR) -> int:
    """Size of :func:`enumerate_chain_basis` without building it."""
    N = tuple(N)
    if n < 0:
        raise ValueError("number of legs must be nonnegative")
    if any(x < 0 for x in N):
        return 0
    if module.kind == "var":
        return comb(N[module.param - 1] + n, n)
    if module.kind == "regular":
        return prod(comb(x + n, n) for x in N)
    t = module.param

    def one(x):
        if n == 0:
            return 1 if x < t else 0
        return sum(comb(x - s + n - 1, n - 1) for s in range(min(t - 1, x) + 1))

    return prod(one(x) for x in N)


class ChainVector:
    """Sparse rational combination of n-leg monomial chains."""

    __slots__ = ("n", "k", "module", "terms")

    def __init__(self, n: int, k: int, module: ModuleKind = REGULAR, terms: Mapping | None = None):
        self.n = n
        self.k = k
        self.module = module
        clean = {}
        for chain, x in (terms or {}).items():
            chain = tuple(tuple(a) for a in chain)
            if len(chain) != n + 1:
                raise ValueError(f"chain {chain} does not have {n} legs")
            x = as_scalar(x)
            if x:
                clean[chain] = clean.get(chain, 0) + x
        self.terms = {c: x for c, x in clean.items() if x}

    @classmethod
    def basis(cls, chain: MonomialChain, module: ModuleKind = REGULAR) -> "ChainVector":
        return cls(len(chain) - 1, len(chain[0]), module, {chain: 1})

    def with_terms(self, terms: Mapping) -> "ChainVector":
        obj = ChainVector.__new__(ChainVector)
        obj.n, obj.k, obj.module = self.n, self.k, self.module
        obj.terms = {c: as_scalar(x) for c, x in terms.items() if x}
        return obj

    def _same(self, other):
        if (self.n, self.k, self.module) != (other.n, other.k, other.module):
            raise ValueError("chain vectors of different shapes")

    def __add__(self, other):
        self._same(other)
        out = dict(self.terms)
        for c, x in other.terms.items():
            out[c] = out.get(c, 0) + x
        return self.with_terms(out)

    def __sub__(self, other):
        return self + other.scale(-1)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, s) -> "ChainVector":
        s = as_scalar(s)
        return self.with_terms({c: x * s for c, x in self.terms.items()})

    __rmul__ = scale

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, ChainVector):
            return NotImplemented
        return (self.n, self.k, self.module, self.terms) == (other.n, other.k, other.module, other.terms)

    __hash__ = None

    def norm(self) -> Fraction:
        """Blockwise l1 norm: sum of absolute coefficients."""
        return sum((abs(x) for x in self.terms.values()), Fraction(0))

    def degrees(self) -> set:
        return {chain_degree(c, self.module) for c in self.terms}

    def __str__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"{x}*{format_chain(c)}" for c, x in sorted(self.terms.items()))

    __repr__ = __str__
