"""Hochschild chain blocks, boundaries, Hodge projections and cell dimensions.

Everything is computed one total-degree block at a time: the face maps
preserve total degree, so the chain complex is the direct sum of the finite
complexes ``C_*(N)`` spanned by monomial chains of degree ``N``.

Conventions: ``d_n`` maps (n+1)-leg chains to n-leg chains and equals
``sum_j (-1)**j * face_j``.  Cochains are handled by transposing blocks.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
import os
from concurrent.futures import ProcessPoolExecutor
from itertools import permutations, product

from .exactq import (
    BlockMatrix,
    LinearSolver,
    independent_subset,
    primitive_integer_vector,
    rank,
    rank_of_vectors,
)
from .monomial import (
    REGULAR,
    ChainVector,
    ModuleKind,
    MonomialChain,
    block_dim,
    chain_degree,
    enumerate_chain_basis,
    format_chain,
    mono_mul,
)
from .report import Check, HodgeReport
from .symgroup import act_on_chain, eulerian_idempotent, permute_legs

DEFAULT_CAP = 200_000


class ResourceCapExceeded(RuntimeError):
    def __init__(self, cell: str, size: int, cap: int):
        super().__init__(f"cell {cell} needs {size} basis chains, above the cap of {cap}")
        self.cell = cell
        self.size = size
        self.cap = cap


@dataclass(frozen=True)
class HodgeCell:
    n: int
    i: int | None  # None for the unresolved (total) cell
    N: tuple
    dim_chain: int
    dim_cycle: int
    dim_boundary: int

    @property
    def dim_homology(self) -> int:
        return self.dim_cycle - self.dim_boundary

    @property
    def cell_id(self) -> str:
        i = "total" if self.i is None else self.i
        return f"n={self.n},i={i},N={list(self.N)}"

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "i": self.i,
            "degree": list(self.N),
            "dim_chain": self.dim_chain,
            "dim_cycle": self.dim_cycle,
            "dim_boundary": self.dim_boundary,
            "dim_homology": self.dim_homology,
        }


# ---------------------------------------------------------------------------
# face maps and boundaries


def face_map(j: int, chain: MonomialChain, module: ModuleKind = REGULAR) -> MonomialChain | None:
    """The j-th face of an (n+1)-leg chain; ``None`` if the module kills it."""
    last = len(chain) - 1  # number of legs, n + 1
    if not 0 <= j <= last:
        raise IndexError(f"face index {j} out of range 0..{last}")
    if last == 0:
        raise ValueError("face maps need at least one leg")
    if j == 0:
        slot = module.act(chain[1], chain[0])
        return None if slot is None else (slot,) + chain[2:]
    if j == last:
        slot = module.act(chain[last], chain[0])
        return None if slot is None else (slot,) + chain[1:last]
    return chain[:j] + (mono_mul(chain[j], chain[j + 1]),) + chain[j + 2 :]


def boundary_terms(terms: dict, module: ModuleKind = REGULAR) -> dict:
    out: dict = {}
    for chain, x in terms.items():
        for j in range(len(chain)):
            f = face_map(j, chain, module)
            if f is None:
                continue
            v = out.get(f, 0) + (x if j % 2 == 0 else -x)
            if v:
                out[f] = v
            else:
                out.pop(f, None)
    return out


def boundary(c: ChainVector) -> ChainVector:
    if c.n < 1:
        raise ValueError("boundary needs chains with at least one leg")
    out = ChainVector(c.n - 1, c.k, c.module)
    return out.with_terms(boundary_terms(c.terms, c.module))


@lru_cache(maxsize=4096)
def chain_basis(n: int, N: tuple, module: ModuleKind = REGULAR) -> tuple:
    return tuple(enumerate_chain_basis(n, N, module))


@lru_cache(maxsize=4096)
def chain_index(n: int, N: tuple, module: ModuleKind = REGULAR) -> dict:
    return {c: r for r, c in enumerate(chain_basis(n, N, module))}


@lru_cache(maxsize=1024)
def boundary_block(n: int, N: tuple, module: ModuleKind = REGULAR) -> BlockMatrix:
    """Matrix of d_n on the degree-N block: (n+1)-leg basis to n-leg basis."""
    N = tuple(N)
    rows = chain_basis(n, N, module)
    cols = chain_basis(n + 1, N, module)
    idx = chain_index(n, N, module)
    out = []
    for c in cols:
        col: dict = {}
        for j in range(len(c)):
            f = face_map(j, c, module)
            if f is None:
                continue
            r = idx[f]
            v = col.get(r, 0) + (1 if j % 2 == 0 else -1)
            if v:
                col[r] = v
            else:
                del col[r]
        out.append({r: Fraction(v) for r, v in col.items()})
    return BlockMatrix(rows, cols, out, _trusted=True)


def coboundary_block(n: int, N: tuple, module: ModuleKind = REGULAR) -> BlockMatrix:
    """The coboundary from n-cochains to (n+1)-cochains: the transpose of d_n."""
    return boundary_block(n, N, module).transpose()


# ---------------------------------------------------------------------------
# Hodge projections


def bgs_project(i: int, c: ChainVector) -> ChainVector:
    if c.n < 1:
        raise ValueError("Hodge projections need at least one leg")
    return act_on_chain(eulerian_idempotent(c.n, i), c)


def degree_project(N: tuple, c: ChainVector) -> ChainVector:
    N = tuple(N)
    return c.with_terms({ch: x for ch, x in c.terms.items() if chain_degree(ch, c.module) == N})


def truncation_project(m: int, c: ChainVector) -> ChainVector:
    """Keep the terms of total degree |N| <= m."""
    if m < 0:
        raise ValueError("truncation level must be nonnegative")
    return c.with_terms({ch: x for ch, x in c.terms.items() if sum(chain_degree(ch, c.module)) <= m})


@lru_cache(maxsize=None)
def _orbit_words(mult: tuple) -> tuple:
    letters = [lab for lab, m in enumerate(mult) for _ in range(m)]
    return tuple(sorted(set(permutations(letters))))


@lru_cache(maxsize=None)
def _word_index(mult: tuple) -> dict:
    return {w: t for t, w in enumerate(_orbit_words(mult))}


@lru_cache(maxsize=None)
def orbit_projection(n: int, i: int, mult: tuple, dual: bool = False) -> tuple:
    """Matrix of e_n^(i) on one leg orbit.

    The orbit is the set of words with letter multiplicities ``mult``; words
    are sorted, so with sorted distinct legs they follow chain order.  Entry
    ``w`` is the sparse image ``{word index: coeff}`` of word ``w``.  With
    ``dual`` the antipode of the idempotent is used (the transpose action).
    """
    words = _orbit_words(mult)
    widx = _word_index(mult)
    e = eulerian_idempotent(n, i)
    if dual:
        e = e.antipode()
    items = list(e.coeffs.items())
    out = []
    for w in words:
        img: dict = {}
        for p, x in items:
            k = widx[permute_legs(p, w)]
            v = img.get(k, 0) + x
            if v:
                img[k] = v
            else:
                del img[k]
        out.append(img)
    return words, tuple(out)


@lru_cache(maxsize=None)
def _orbit_image(n: int, i: int, mult: tuple, dual: bool) -> tuple:
    """Word positions whose projections form a basis of the projected orbit."""
    _, proj = orbit_projection(n, i, mult, dual)
    return tuple(independent_subset(proj))


def _orbits(chains):
    """Group chain indices by (slot, multiset of legs), in first-seen order."""
    groups: dict = {}
    for r, c in enumerate(chains):
        groups.setdefault((c[0], tuple(sorted(c[1:]))), []).append(r)
    return groups


def project_terms(i: int, terms: dict, n: int, dual: bool = False) -> dict:
    """Apply e_n^(i) (or its antipode) to ``{chain: coeff}`` via orbit tables."""
    if i > n or n == 0:
        return {}
    out: dict = {}
    for chain, x in terms.items():
        slot, legs = chain[0], chain[1:]
        distinct = sorted(set(legs))
        pos = {a: lab for lab, a in enumerate(distinct)}
        word = tuple(pos[a] for a in legs)
        mult = tuple(legs.count(a) for a in distinct)
        words, proj = orbit_projection(n, i, mult, dual)
        k = _word_index(mult)[word]
        for t, y in proj[k].items():
            ch = (slot,) + tuple(distinct[lab] for lab in words[t])
            v = out.get(ch, 0) + x * y
            if v:
                out[ch] = v
            else:
                out.pop(ch, None)
    return out


def hodge_subspace(n: int, i: int, N: tuple, module: ModuleKind = REGULAR, dual: bool = False) -> list:
    """Basis of the image of e_n^(i) in the degree-N block, as sparse index vectors.

    Each basis vector is the projection of one basis chain.  Empty for
    ``i > n`` and for ``n = 0``.
    """
    N = tuple(N)
    if n == 0 or i > n:
        return []
    chains = chain_basis(n, N, module)
    idx = chain_index(n, N, module)
    out = []
    for (slot, legs), members in _orbits(chains).items():
        distinct = sorted(set(legs))
        mult = tuple(legs.count(a) for a in distinct)
        words, proj = orbit_projection(n, i, mult, dual)
        for w in _orbit_image(n, i, mult, dual):
            vec = {}
            for t, y in proj[w].items():
                vec[idx[(slot,) + tuple(distinct[lab] for lab in words[t])]] = y
            out.append(vec)
    return out


# ---------------------------------------------------------------------------
# cell dimensions


@lru_cache(maxsize=None)
def _orbit_image_int(n: int, i: int, mult: tuple, dual: bool) -> tuple:
    _, proj = orbit_projection(n, i, mult, dual)
    return tuple(tuple(primitive_integer_vector(proj[w]).items()) for w in _orbit_image(n, i, mult, dual))


def _hodge_int(n, i, N, module, dual):
    """Integer rescaling of :func:`hodge_subspace` (same spans, same order)."""
    if n == 0 or i > n:
        return []
    chains = chain_basis(n, N, module)
    idx = chain_index(n, N, module)
    out = []
    for slot, legs in _orbits(chains):
        distinct = sorted(set(legs))
        mult = tuple(legs.count(a) for a in distinct)
        words = _orbit_words(mult)
        for vec in _orbit_image_int(n, i, mult, dual):
            out.append([(idx[(slot,) + tuple(distinct[lab] for lab in words[t])], y) for t, y in vec])
    return out


@lru_cache(maxsize=64)
def _int_columns(n: int, N: tuple, module: ModuleKind, transposed: bool) -> tuple:
    m = boundary_block(n, N, module)
    cols = m.rows() if transposed else m.cols
    return tuple(tuple((r, int(x)) for r, x in col.items()) for col in cols)


def _restricted_rank(cols: tuple, vectors: list) -> int:
    images = []
    for v in vectors:
        out: dict = {}
        for r, x in v:
            for rr, s in cols[r]:
                out[rr] = out.get(rr, 0) + s * x
        images.append({r: x for r, x in out.items() if x})
    return rank_of_vectors(images)


def cell_size(n: int, N: tuple, module: ModuleKind = REGULAR) -> int:
    """Chains touched by a cell: dim C_{n-1} + dim C_n + dim C_{n+1}."""
    return sum(block_dim(m, N, module) for m in (n - 1, n, n + 1) if m >= 0)


def _check_cap(n, N, module, cap):
    if cap is not None:
        size = cell_size(n, N, module)
        if size > cap:
            raise ResourceCapExceeded(f"n={n},N={list(N)}", size, cap)


def _cell(n, N, module, i, cap, dual):
    N = tuple(N)
    if n < 0:
        raise ValueError("n must be nonnegative")
    if i is not None and (n == 0 or i < 1):
        raise ValueError("Hodge-resolved cells need n >= 1 and i >= 1")
    _check_cap(n, N, module, cap)
    # on chains: cycles are killed by d_{n-1}, boundaries come from d_n;
    # on cochains: cocycles are killed by d_n^T, coboundaries come from d_{n-1}^T
    if dual:
        kill, src = (n, n), (n - 1, n - 1)
    else:
        kill, src = (n - 1, n), (n, n + 1)
    if i is None:
        dim = block_dim(n, N, module)
        out = rank(_block(kill[0], N, module, dual)) if kill[0] >= 0 else 0
        inn = rank(_block(src[0], N, module, dual)) if src[0] >= 0 else 0
    else:
        here = _hodge_int(n, i, N, module, dual)
        dim = len(here)
        out = _restricted_rank(_int_columns(kill[0], N, module, dual), here) if kill[0] >= 0 else 0
        inn = (
            _restricted_rank(_int_columns(src[0], N, module, dual), _hodge_int(src[1], i, N, module, dual))
            if src[0] >= 0
            else 0
        )
    return HodgeCell(n, i, N, dim, dim - out, inn)


def _block(n, N, module, dual):
    return coboundary_block(n, N, module) if dual else boundary_block(n, N, module)


def homology_dims(n: int, N: tuple, module: ModuleKind = REGULAR, i: int | None = None,
                  cap: int | None = DEFAULT_CAP) -> HodgeCell:
    """Dimensions of the chain cell (n, i) at degree N; ``i=None`` is unresolved."""
    return _cell(n, N, module, i, cap, dual=False)


def cohomology_dims(n: int, N: tuple, module: ModuleKind = REGULAR, i: int | None = None,
                    cap: int | None = DEFAULT_CAP) -> HodgeCell:
    """Cochain cell computed from transposed blocks and the dual projections."""
    return _cell(n, N, module, i, cap, dual=True)


def degrees_up_to(k: int, deg_max: int) -> list[tuple]:
    """All multidegrees N in k variables with |N| <= deg_max, sorted."""
    return sorted(N for N in product(range(deg_max + 1), repeat=k) if sum(N) <= deg_max)


def lie_cell_expected(n: int, N: tuple) -> int:
    """Number of n-subsets S of the variables with N_j >= 1 for every j in S."""
    support = sum(1 for x in N if x >= 1)
    return comb(support, n)


def derivation_block_norm(p: int, N: int) -> Fraction:
    """Column l1 norm of the derivation D(z) = z^p on the degree-N block of Q[z].

    D(z^N) is expanded by the Leibniz rule, so the answer is not assumed.
    """
    if p < 0 or N < 0:
        raise ValueError("p and N must be nonnegative")
    image: dict = {}
    for t in range(N):
        e = t + p + (N - 1 - t)
        image[e] = image.get(e, 0) + 1
    return sum((Fraction(abs(x)) for x in image.values()), Fraction(0))


# ---------------------------------------------------------------------------
# block-level verification helpers


def d_squared_witness(n: int, N: tuple, module: ModuleKind = REGULAR) -> str | None:
    """First basis chain x with d(d(x)) != 0, serialized, or None."""
    if n < 1:
        return None
    dd = boundary_block(n - 1, N, module) @ boundary_block(n, N, module)
    for c, col in enumerate(dd.cols):
        if col:
            return format_chain(dd.col_basis[c])
    return None


def degree_preservation_witness(n: int, N: tuple, module: ModuleKind = REGULAR) -> str | None:
    N = tuple(N)
    for c in chain_basis(n + 1, N, module):
        for j in range(len(c)):
            f = face_map(j, c, module)
            if f is not None and chain_degree(f, module) != N:
                return format_chain(c)
    return None


def chain_map_witness(n: int, N: tuple, module: ModuleKind = REGULAR) -> str | None:
    """Check d_n e_{n+1}^(i) = e_n^(i) d_n on every basis chain, all i."""
    for c in chain_basis(n + 1, N, module):
        dc = boundary_terms({c: Fraction(1)}, module)
        for i in range(1, n + 3):
            lhs = boundary_terms(project_terms(i, {c: Fraction(1)}, n + 1), module)
            if lhs != project_terms(i, dc, n):
                return f"{format_chain(c)} (i={i})"
    return None


def hodge_basis_chain(n: int, i: int, N: tuple, module: ModuleKind = REGULAR) -> list[ChainVector]:
    """The Hodge subspace basis as chain vectors (for display and tests)."""
    chains = chain_basis(n, N, module)
    k = len(chains[0][0]) if chains else len(N)
    return [
        ChainVector(n, k, module, {chains[r]: x for r, x in v.items()})
        for v in hodge_subspace(n, i, N, module)
    ]


def homology_witness(n: int, i: int, N: tuple, module: ModuleKind = REGULAR) -> ChainVector | None:
    """A Hodge-restricted n-cycle that is not a boundary, or None."""
    N = tuple(N)
    here = hodge_subspace(n, i, N, module)
    d_out = boundary_block(n - 1, N, module)
    cycles = [
        {r: y for r, y in _combine(here, combo).items()}
        for combo in LinearSolver(_columns_matrix(d_out, here)).null_combos
    ]
    d_in = boundary_block(n, N, module)
    sources = hodge_subspace(n + 1, i, N, module)
    solver = LinearSolver(_columns_matrix(d_in, sources))
    chains = chain_basis(n, N, module)
    for z in cycles:
        if solver.solve(z) is None:
            return ChainVector(n, len(chains[0][0]), module, {chains[r]: x for r, x in z.items()})
    return None


def _combine(vectors, combo):
    out: dict = {}
    for j, c in combo.items():
        for r, x in vectors[j].items():
            out[r] = out.get(r, 0) + c * x
    return {r: x for r, x in out.items() if x}


def _columns_matrix(m: BlockMatrix, vectors: list) -> BlockMatrix:
    return BlockMatrix(m.row_basis, tuple(range(len(vectors))), [m.apply(v) for v in vectors], _trusted=True)


def _one_variable_algebra(k: int, module: ModuleKind) -> bool:
    return module.algebra_vars(k) == 1


def _degree_task(args):
    """All cells of one degree block plus the per-block verdicts."""
    k, n_max, N, module = args
    cells = []
    failures = {"d_squared_zero": None, "hodge_additivity": None, "hodge_vanishing": None, "lie_cell_count": None}
    for n in range(1, n_max + 1):
        w = d_squared_witness(n, N, module)
        if w and failures["d_squared_zero"] is None:
            failures["d_squared_zero"] = w
        total = homology_dims(n, N, module, cap=None)
        resolved = [homology_dims(n, N, module, i, cap=None) for i in range(1, n + 1)]
        cells.extend(c.as_dict() for c in resolved)
        sums = tuple(sum(getattr(c, f) for c in resolved) for f in ("dim_chain", "dim_cycle", "dim_boundary"))
        if sums != (total.dim_chain, total.dim_cycle, total.dim_boundary) and failures["hodge_additivity"] is None:
            failures["hodge_additivity"] = f"cell n={n},N={list(N)}: resolved sums {sums} vs total"
        vanishing_expected = module.kind == "regular" or _one_variable_algebra(k, module)
        for c in resolved:
            should_vanish = n >= 2 and (c.i < n or _one_variable_algebra(k, module))
            if vanishing_expected and should_vanish and c.dim_homology != 0:
                if failures["hodge_vanishing"] is None:
                    failures["hodge_vanishing"] = str(homology_witness(n, c.i, N, module))
        if module.kind == "regular":
            lie = resolved[-1].dim_homology
            oracle = total.dim_homology - sum(c.dim_homology for c in resolved[:-1])
            if not lie == oracle == lie_cell_expected(n, N) and failures["lie_cell_count"] is None:
                failures["lie_cell_count"] = f"cell n={n},i={n},N={list(N)}: {lie} vs oracle {oracle}"
    return cells, failures


def default_jobs() -> int:
    env = os.environ.get("HODGEHAM_JOBS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def hodge_table(k: int, n_max: int, deg_max: int, module: ModuleKind = REGULAR,
                cap: int | None = DEFAULT_CAP, jobs: int = 1) -> HodgeReport:
    """Every Hodge cell for 1 <= n <= n_max and |N| <= deg_max, with verdicts.

    ``k`` is the number of variables of the degree (for variable-restricted
    modules that is ``k_total``).  Raises :class:`ResourceCapExceeded` before
    any work if some cell is above ``cap``.
    """
    if k < 1 or n_max < 1 or deg_max < 0:
        raise ValueError("need k >= 1, n_max >= 1, deg_max >= 0")
    if module.kind == "var" and module.k_total != k:
        raise ValueError("variable-restricted module must have k_total = k")
    degrees = degrees_up_to(k, deg_max)
    for n in range(1, n_max + 1):
        for N in degrees:
            _check_cap(n, N, module, cap)
    tasks = [(k, n_max, N, module) for N in degrees]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_degree_task, tasks))
    else:
        results = [_degree_task(t) for t in tasks]
    report = HodgeReport(k, str(module))
    merged: dict = {}
    for cells, failures in results:
        report.cells.extend(cells)
        for name, w in failures.items():
            if name not in merged or (merged[name] is None and w is not None):
                merged[name] = w
    applicable = ["d_squared_zero", "hodge_additivity"]
    if module.kind == "regular" or _one_variable_algebra(k, module):
        applicable.append("hodge_vanishing")
    if module.kind == "regular":
        applicable.append("lie_cell_count")
    report.checks = [Check(name, merged.get(name) is None, merged.get(name)) for name in applicable]
    return report
