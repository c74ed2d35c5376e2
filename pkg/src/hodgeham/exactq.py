"""Exact rational linear algebra on sparse, labelled blocks.

Every homology dimension in this package reduces to ranks, kernels and
images of :class:`BlockMatrix` objects.  Scalars are :class:`fractions.Fraction`
throughout; there is no floating point anywhere.

Two elimination engines live here:

* a fraction-free, Markowitz-pivoted elimination on integer-scaled vectors,
  used for :func:`rank` and for :class:`LinearSolver` (many right-hand
  sides against one matrix);
* a reduced-row-echelon routine over ``Fraction``, used wherever the output
  is a basis that must be canonical (:func:`kernel_basis`,
  :func:`image_basis`, :func:`invert`).

Both are deterministic: ties are broken by index, and indices follow the
basis order fixed by the caller.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import Hashable, Iterable, Mapping, Sequence

ExactScalar = Fraction

SparseVector = dict  # index -> Fraction (or int), zero entries never stored


class DimensionMismatch(ValueError):
    pass


class SingularMatrixError(ArithmeticError):
    pass


def as_scalar(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    return Fraction(x)


def _clean(vec: Mapping[int, Fraction]) -> dict[int, Fraction]:
    return {k: v for k, v in vec.items() if v}


def _check_labels(labels: Sequence[Hashable], what: str) -> tuple:
    labels = tuple(labels)
    if len(set(labels)) != len(labels):
        raise ValueError(f"{what} labels are not unique")
    return labels


class BlockMatrix:
    """Exact sparse matrix between two labelled finite bases.

    Stored column-wise: ``cols[j]`` maps a row index to a nonzero
    :class:`Fraction`.  Immutable by convention once built.
    """

    __slots__ = ("row_basis", "col_basis", "cols")

    def __init__(self, row_basis, col_basis, cols=None, *, _trusted=False):
        if _trusted:
            self.row_basis = row_basis
            self.col_basis = col_basis
            self.cols = cols
            return
        self.row_basis = _check_labels(row_basis, "row")
        self.col_basis = _check_labels(col_basis, "column")
        nrows = len(self.row_basis)
        if cols is None:
            cols = [{} for _ in self.col_basis]
        if len(cols) != len(self.col_basis):
            raise DimensionMismatch("column count does not match column basis")
        clean = []
        for col in cols:
            c = {}
            for r, v in col.items():
                if not 0 <= r < nrows:
                    raise IndexError(f"row index {r} out of range")
                v = as_scalar(v)
                if v:
                    c[r] = v
            clean.append(c)
        self.cols = clean

    @classmethod
    def from_entries(cls, row_basis, col_basis, entries: Mapping[tuple[int, int], object]):
        cols: list[dict] = [{} for _ in col_basis]
        ncols = len(cols)
        for (r, c), v in entries.items():
            if not 0 <= c < ncols:
                raise IndexError(f"column index {c} out of range")
            cols[c][r] = v
        return cls(row_basis, col_basis, cols)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[object]], row_basis=None, col_basis=None):
        """Dense constructor, mostly for tests: ``rows[r][c]``."""
        nrows = len(rows)
        ncols = len(rows[0]) if rows else 0
        row_basis = tuple(range(nrows)) if row_basis is None else row_basis
        col_basis = tuple(range(ncols)) if col_basis is None else col_basis
        entries = {(r, c): v for r, row in enumerate(rows) for c, v in enumerate(row) if v}
        return cls.from_entries(row_basis, col_basis, entries)

    @classmethod
    def identity(cls, basis):
        basis = _check_labels(basis, "basis")
        return cls(basis, basis, [{j: Fraction(1)} for j in range(len(basis))], _trusted=True)

    @classmethod
    def zero(cls, row_basis, col_basis):
        return cls(row_basis, col_basis)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.row_basis), len(self.col_basis)

    @property
    def entries(self) -> dict[tuple[int, int], Fraction]:
        return {(r, c): v for c, col in enumerate(self.cols) for r, v in col.items()}

    def __getitem__(self, rc: tuple[int, int]) -> Fraction:
        r, c = rc
        return self.cols[c].get(r, Fraction(0))

    def column(self, j: int) -> dict[int, Fraction]:
        return dict(self.cols[j])

    def nnz(self) -> int:
        return sum(len(c) for c in self.cols)

    def is_zero(self) -> bool:
        return not any(self.cols)

    def to_rows(self) -> list[list[Fraction]]:
        out = [[Fraction(0)] * len(self.col_basis) for _ in self.row_basis]
        for c, col in enumerate(self.cols):
            for r, v in col.items():
                out[r][c] = v
        return out

    def rows(self) -> list[dict[int, Fraction]]:
        out: list[dict[int, Fraction]] = [{} for _ in self.row_basis]
        for c, col in enumerate(self.cols):
            for r, v in col.items():
                out[r][c] = v
        return out

    def transpose(self) -> "BlockMatrix":
        return BlockMatrix(self.col_basis, self.row_basis, self.rows(), _trusted=True)

    T = property(transpose)

    def apply(self, vec: Mapping[int, object]) -> dict[int, Fraction]:
        out: dict[int, Fraction] = {}
        for j, x in vec.items():
            if not x:
                continue
            for r, v in self.cols[j].items():
                out[r] = out.get(r, 0) + v * x
        return _clean(out)

    def __matmul__(self, other: "BlockMatrix") -> "BlockMatrix":
        if self.col_basis != other.row_basis:
            raise DimensionMismatch("inner bases differ")
        cols = [self.apply(col) for col in other.cols]
        return BlockMatrix(self.row_basis, other.col_basis, cols, _trusted=True)

    def _combine(self, other: "BlockMatrix", sign: int) -> "BlockMatrix":
        if self.row_basis != other.row_basis or self.col_basis != other.col_basis:
            raise DimensionMismatch("bases differ")
        cols = []
        for a, b in zip(self.cols, other.cols):
            c = dict(a)
            for r, v in b.items():
                c[r] = c.get(r, 0) + sign * v
            cols.append(_clean(c))
        return BlockMatrix(self.row_basis, self.col_basis, cols, _trusted=True)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, s) -> "BlockMatrix":
        s = as_scalar(s)
        if not s:
            return BlockMatrix.zero(self.row_basis, self.col_basis)
        cols = [{r: v * s for r, v in col.items()} for col in self.cols]
        return BlockMatrix(self.row_basis, self.col_basis, cols, _trusted=True)

    def column_norm(self) -> Fraction:
        """Operator norm for the l1 norm on both sides: max column abs-sum."""
        best = Fraction(0)
        for col in self.cols:
            s = sum((abs(v) for v in col.values()), Fraction(0))
            if s > best:
                best = s
        return best

    def __eq__(self, other):
        if not isinstance(other, BlockMatrix):
            return NotImplemented
        return (
            self.row_basis == other.row_basis
            and self.col_basis == other.col_basis
            and self.cols == other.cols
        )

    __hash__ = None

    def __repr__(self):
        r, c = self.shape
        return f"BlockMatrix({r}x{c}, nnz={self.nnz()})"


@dataclass
class SubspaceBasis:
    """Linearly independent sparse vectors inside a labelled ambient space."""

    ambient_basis: tuple
    vectors: list = field(default_factory=list)

    def __post_init__(self):
        self.ambient_basis = tuple(self.ambient_basis)
        n = len(self.ambient_basis)
        vecs = []
        for v in self.vectors:
            v = {k: as_scalar(x) for k, x in v.items() if x}
            if any(not 0 <= k < n for k in v):
                raise IndexError("vector index outside the ambient basis")
            vecs.append(v)
        self.vectors = vecs
        if rank_of_vectors(vecs) != len(vecs):
            raise ValueError("subspace vectors are linearly dependent")

    def __len__(self):
        return len(self.vectors)

    @property
    def dim(self) -> int:
        return len(self.vectors)

    def labelled(self) -> list[dict]:
        """Vectors keyed by ambient labels instead of indices."""
        return [{self.ambient_basis[k]: x for k, x in v.items()} for v in self.vectors]


# ---------------------------------------------------------------------------
# fraction-free sparse elimination


def primitive_integer_vector(vec: Mapping[int, object]) -> dict[int, int]:
    """Scale a rational vector by a positive factor to a primitive integer vector."""
    if all(type(v) is int for v in vec.values()):
        out = {k: v for k, v in vec.items() if v}
    else:
        vals = {k: as_scalar(v) for k, v in vec.items() if v}
        den = lcm(*(v.denominator for v in vals.values())) if vals else 1
        out = {k: v.numerator * (den // v.denominator) for k, v in vals.items()}
    g = 0
    for v in out.values():
        g = gcd(g, v)
        if g == 1:
            return out
    return {k: v // g for k, v in out.items()}


@dataclass
class _Elimination:
    pivots: list  # (pivot index, integer vector, combo or None, input position)
    null_combos: list  # combos of input vectors summing to zero (if tracked)


def _eliminate(vectors: Sequence[Mapping[int, object]], track: bool = False) -> _Elimination:
    """Markowitz-ordered fraction-free elimination of ``vectors``.

    Each vector is treated as a row.  The rank of the input equals the number
    of pivots.  With ``track`` the returned pivot rows carry the combination
    of input vectors that produced them, and vectors reduced to zero are
    reported as null combinations.
    """
    rows: dict[int, dict[int, int]] = {}
    combos: dict[int, dict[int, Fraction]] = {}
    colrows: dict[int, set[int]] = {}
    nulls = []
    for i, v in enumerate(vectors):
        iv = primitive_integer_vector(v)
        if track:
            # _integerize scaled v by some s > 0; remember it in the combo
            if iv:
                k0 = next(iter(iv))
                s = Fraction(iv[k0]) / as_scalar(v[k0])
                combos[i] = {i: s}
            else:
                nulls.append({i: Fraction(1)})
                continue
        if not iv:
            continue
        rows[i] = iv
        for c in iv:
            colrows.setdefault(c, set()).add(i)

    heap = [(len(r), i) for i, r in rows.items()]
    heapq.heapify(heap)
    pivots = []
    while heap:
        ln, i = heapq.heappop(heap)
        row = rows.get(i)
        if row is None or len(row) != ln:
            continue
        col = min(row, key=lambda c: (len(colrows[c]), c))
        p = row[col]
        del rows[i]
        for c in row:
            colrows[c].discard(i)
        pcombo = combos.pop(i, None) if track else None
        pivots.append((col, row, pcombo, i))
        for j in sorted(colrows.pop(col)):
            target = rows[j]
            f = target[col]
            g = gcd(p, f)
            a, b = p // g, f // g
            new = {c: a * v for c, v in target.items()}
            for c, v in row.items():
                nv = new.get(c, 0) - b * v
                if nv:
                    new[c] = nv
                else:
                    new.pop(c, None)
            g = 0
            for v in new.values():
                g = gcd(g, v)
                if g == 1:
                    break
            if g > 1:
                new = {c: v // g for c, v in new.items()}
            for c in target:
                if c not in new and c in colrows:
                    colrows[c].discard(j)
            for c in new:
                if c not in target:
                    colrows.setdefault(c, set()).add(j)
            if track:
                tc = combos[j]
                nc = {k: a * v for k, v in tc.items()}
                for k, v in pcombo.items():
                    nc[k] = nc.get(k, 0) - b * v
                gg = Fraction(g if g > 1 else 1)
                combos[j] = {k: v / gg for k, v in nc.items() if v}
            if new:
                rows[j] = new
                heapq.heappush(heap, (len(new), j))
            else:
                del rows[j]
                if track:
                    nulls.append(combos.pop(j))
    return _Elimination(pivots, nulls)


def rank_of_vectors(vectors: Iterable[Mapping[int, object]]) -> int:
    return len(_eliminate(list(vectors)).pivots)


def independent_subset(vectors: Sequence[Mapping[int, object]]) -> list[int]:
    """Positions of a maximal linearly independent subfamily, ascending."""
    return sorted(p[3] for p in _eliminate(vectors).pivots)


def rank(m: BlockMatrix) -> int:
    """Exact rank over the rationals."""
    return rank_of_vectors(m.cols)


class LinearSolver:
    """Reusable exact solver for ``m @ y = b``.

    Factors the columns of ``m`` once; each :meth:`solve` is then a sparse
    forward reduction of ``b`` followed by accumulation of column combos.
    """

    def __init__(self, m: BlockMatrix):
        self.matrix = m
        elim = _eliminate(m.cols, track=True)
        self.rank = len(elim.pivots)
        self._pivots = [
            (c, {k: Fraction(v) for k, v in row.items()}, combo) for c, row, combo, _ in elim.pivots
        ]
        self.null_combos = elim.null_combos

    def solve(self, b: Mapping[int, object]) -> dict[int, Fraction] | None:
        nrows = len(self.matrix.row_basis)
        b = {k: as_scalar(v) for k, v in b.items() if v}
        if any(not 0 <= k < nrows for k in b):
            raise DimensionMismatch("right-hand side index outside the row basis")
        y: dict[int, Fraction] = {}
        for c, row, combo in self._pivots:
            x = b.get(c)
            if not x:
                continue
            f = x / row[c]
            for k, v in row.items():
                nv = b.get(k, 0) - f * v
                if nv:
                    b[k] = nv
                else:
                    b.pop(k, None)
            for k, v in combo.items():
                nv = y.get(k, 0) + f * v
                if nv:
                    y[k] = nv
                else:
                    y.pop(k, None)
        if b:
            return None
        return y


def solve(m: BlockMatrix, b: Mapping[int, object]) -> dict[int, Fraction] | None:
    """Some exact ``v`` with ``m @ v = b``, or ``None`` when unsolvable."""
    return LinearSolver(m).solve(b)


# ---------------------------------------------------------------------------
# reduced row echelon form (canonical bases)


def rref(rows: Iterable[Mapping[int, object]]) -> list[tuple[int, dict[int, Fraction]]]:
    """Reduced row echelon form of sparse rational rows.

    Returns ``(pivot column, row)`` pairs sorted by pivot column; each row has
    a 1 at its pivot and zeros at every other pivot column.  The result is
    unique, hence independent of the input row order.
    """
    piv: dict[int, dict[int, Fraction]] = {}
    for r in rows:
        r = {k: as_scalar(v) for k, v in r.items() if v}
        hit = [c for c in r if c in piv]
        for c in hit:
            f = r.get(c)
            if not f:
                continue
            for k, v in piv[c].items():
                nv = r.get(k, 0) - f * v
                if nv:
                    r[k] = nv
                else:
                    r.pop(k, None)
        if not r:
            continue
        c0 = min(r)
        p = r[c0]
        if p != 1:
            r = {k: v / p for k, v in r.items()}
        for c, other in piv.items():
            f = other.get(c0)
            if f:
                for k, v in r.items():
                    nv = other.get(k, 0) - f * v
                    if nv:
                        other[k] = nv
                    else:
                        other.pop(k, None)
        piv[c0] = r
    return sorted(piv.items())


def kernel_basis(m: BlockMatrix) -> SubspaceBasis:
    ech = rref(m.rows())
    pivcols = {c for c, _ in ech}
    vectors = []
    for f in range(len(m.col_basis)):
        if f in pivcols:
            continue
        v = {f: Fraction(1)}
        for c, row in ech:
            x = row.get(f)
            if x:
                v[c] = -x
        vectors.append(v)
    return SubspaceBasis(m.col_basis, vectors)


def image_basis(m: BlockMatrix) -> SubspaceBasis:
    ech = rref(m.rows())
    return SubspaceBasis(m.row_basis, [dict(m.cols[c]) for c, _ in ech])


def subspace_sum(a: SubspaceBasis, b: SubspaceBasis) -> int:
    if a.ambient_basis != b.ambient_basis:
        raise DimensionMismatch("subspaces live in different ambient bases")
    return rank_of_vectors(a.vectors + b.vectors)


def subspace_contains(a: SubspaceBasis, b: SubspaceBasis) -> bool:
    """``span(b) ⊆ span(a)``."""
    return subspace_sum(a, b) == a.dim


def subspace_equal(a: SubspaceBasis, b: SubspaceBasis) -> bool:
    return subspace_contains(a, b) and subspace_contains(b, a)


def in_span(vectors: Sequence[Mapping[int, object]], v: Mapping[int, object]) -> bool:
    v = {k: x for k, x in v.items() if x}
    if not v:
        return True
    return rank_of_vectors(list(vectors) + [v]) == rank_of_vectors(vectors)


def invert(m: BlockMatrix) -> BlockMatrix:
    nr, nc = m.shape
    if nr != nc:
        raise DimensionMismatch(f"cannot invert a {nr}x{nc} matrix")
    aug = []
    for r, row in enumerate(m.rows()):
        row = dict(row)
        row[nc + r] = Fraction(1)
        aug.append(row)
    ech = rref(aug)
    if len(ech) < nr or ech[nr - 1][0] >= nc:
        raise SingularMatrixError("matrix is singular")
    # row c of the inverse sits in the augmented part of the pivot-c row
    cols: list[dict[int, Fraction]] = [{} for _ in range(nr)]
    for c, row in ech:
        for k, v in row.items():
            if k >= nc:
                cols[k - nc][c] = v
    return BlockMatrix(m.col_basis, m.row_basis, cols, _trusted=True)
