"""The Harrison summand: the q map, the B/S/H splitting maps, exactness checks,
explicit contracting homotopies and a Kunneth dimension cross-check.

One-variable chains use the flat tuple form ``((a,), (b,))`` for z^a⊗z^b.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .exactq import (
    BlockMatrix,
    LinearSolver,
    image_basis,
    independent_subset,
    in_span,
    invert,
    kernel_basis,
    rank,
    subspace_equal,
)
from .hochschild import (
    REGULAR,
    boundary_block,
    chain_basis,
    chain_index,
    cohomology_dims,
    degrees_up_to,
    homology_dims,
    homology_witness,
)
from .monomial import ChainVector, ModuleKind, format_chain, format_monomial
from .report import Check

TIES = ("low", "high")


def _z(e: int) -> tuple:
    return (e,)


def _as_terms(c) -> dict:
    return c.terms if isinstance(c, ChainVector) else dict(c)


def _one_var_chain(chain) -> tuple[int, ...]:
    if any(len(a) != 1 for a in chain):
        raise ValueError("expected one-variable monomials")
    return tuple(a[0] for a in chain)


# ---------------------------------------------------------------------------
# q, B, S, H


def q_map(c) -> dict[int, Fraction]:
    """q(z^k⊗z^l) = l/(k+l) z^(k+l) and q(1⊗1) = 0, extended linearly.

    Returns ``{degree: coeff}`` over the monomials z^N, N >= 1.
    """
    out: dict[int, Fraction] = {}
    for chain, x in _as_terms(c).items():
        if len(chain) != 2:
            raise ValueError("q is defined on one-leg chains")
        k, l = _one_var_chain(chain)
        if k + l == 0 or l == 0:
            continue
        v = out.get(k + l, 0) + x * Fraction(l, k + l)
        if v:
            out[k + l] = v
        else:
            out.pop(k + l, None)
    return out


def map_B(N: int) -> ChainVector:
    """B(z^N) = 1⊗z^N."""
    if N < 1:
        raise ValueError("B is defined on z^N for N >= 1")
    return ChainVector(1, 1, REGULAR, {(_z(0), _z(N)): 1})


def _low_branch(N: int, j: int, tie: str) -> bool:
    if tie not in TIES:
        raise ValueError(f"tie must be one of {TIES}")
    if 2 * j == N:
        return tie == "low"
    return 2 * j < N


def _s_basis(N: int, j: int, tie: str) -> dict:
    out: dict = {}

    def add(chain, x):
        v = out.get(chain, 0) + x
        if v:
            out[chain] = v
        else:
            out.pop(chain, None)

    add((_z(0), _z(j), _z(N - j)), 1)
    if _low_branch(N, j, tie):
        add((_z(j), _z(j), _z(N - 2 * j)), 1)
    else:
        add((_z(N - j), _z(2 * j - N), _z(N - j)), -1)
    return out


def _h_basis(N: int, j: int, tie: str) -> dict:
    out: dict = {(_z(N - j), _z(j)): 2}
    if _low_branch(N, j, tie):
        extra, sign = (_z(2 * j), _z(N - 2 * j)), 1
    else:
        extra, sign = (_z(2 * N - 2 * j), _z(2 * j - N)), -1
    v = out.get(extra, 0) + sign
    if v:
        out[extra] = v
    else:
        out.pop(extra)
    return out


def _extend(c, on_basis, n_out: int, tie: str) -> ChainVector:
    out: dict = {}
    for chain, x in _as_terms(c).items():
        if len(chain) != 2:
            raise ValueError("expected one-leg chains")
        a, j = _one_var_chain(chain)
        for ch, y in on_basis(a + j, j, tie).items():
            out[ch] = out.get(ch, 0) + x * y
    return ChainVector(n_out, 1, REGULAR, out)


def map_S(c, tie: str = "low") -> ChainVector:
    """The splitting map S from one-leg to two-leg chains."""
    return _extend(c, _s_basis, 2, tie)


def map_H(c, tie: str = "low") -> ChainVector:
    """The map H on one-leg chains (invertible on every degree block)."""
    return _extend(c, _h_basis, 1, tie)


def q_target(N: int) -> tuple:
    """Basis of the codomain of q in degree N: {z^N} for N >= 1, empty at 0."""
    return (_z(N),) if N >= 1 else ()


def q_block(N: int) -> BlockMatrix:
    cols = chain_basis(1, (N,))
    out = []
    for ch in cols:
        img = q_map({ch: Fraction(1)})
        out.append({0: img[N]} if N in img else {})
    return BlockMatrix(q_target(N), cols, out)


def b_block(N: int) -> BlockMatrix:
    idx = chain_index(1, (N,))
    return BlockMatrix(chain_basis(1, (N,)), q_target(N), [{idx[(_z(0), _z(N))]: Fraction(1)}])


def _block_of(fn, n_src: int, n_dst: int, N: int, tie: str) -> BlockMatrix:
    cols = chain_basis(n_src, (N,))
    idx = chain_index(n_dst, (N,))
    out = []
    for ch in cols:
        img = fn({ch: Fraction(1)}, tie)
        out.append({idx[c]: x for c, x in img.terms.items()})
    return BlockMatrix(chain_basis(n_dst, (N,)), cols, out)


def s_block(N: int, tie: str = "low") -> BlockMatrix:
    return _block_of(map_S, 1, 2, N, tie)


def h_block(N: int, tie: str = "low") -> BlockMatrix:
    return _block_of(map_H, 1, 1, N, tie)


# ---------------------------------------------------------------------------
# the splitting identities


@dataclass
class SplittingReport:
    N: int
    qB_identity: bool
    homotopy_identity: bool
    contraction_norm_bound: Fraction
    neumann_error_at: list = field(default_factory=list)  # error at M = 1, 2, ...
    inverse_exact: bool = False
    dsh_identity: bool = False
    witness: str | None = None

    @property
    def passed(self) -> bool:
        return (
            self.qB_identity
            and self.homotopy_identity
            and self.contraction_norm_bound <= 1
            and self.inverse_exact
            and self.dsh_identity
            and all(err <= Fraction(1, 2**m) for m, err in enumerate(self.neumann_error_at, 1))
        )

    def as_check(self, prefix: str = "appendix") -> Check:
        return Check(f"{prefix}_N{self.N}", self.passed, self.witness)


def _first_bad_column(m: BlockMatrix) -> str | None:
    for c, col in enumerate(m.cols):
        if col:
            return format_chain(m.col_basis[c])
    return None


def neumann_partial_inverse(h: BlockMatrix, order: int) -> BlockMatrix:
    """(1/2) Σ_{m<order} ((2id − H)/2)^m."""
    ident = BlockMatrix.identity(h.col_basis)
    step = (ident.scale(2) - h).scale(Fraction(1, 2))
    power = ident
    total = BlockMatrix.zero(h.row_basis, h.col_basis)
    for _ in range(order):
        total = total + power
        power = step @ power
    return total.scale(Fraction(1, 2))


def verify_appendix_splitting(N_max: int, tie: str = "low", orders: int = 10) -> list[SplittingReport]:
    """Check all splitting identities on each degree block 1 <= N <= N_max."""
    reports = []
    for N in range(1, N_max + 1):
        q, B, S, H = q_block(N), b_block(N), s_block(N, tie), h_block(N, tie)
        d1 = boundary_block(1, (N,))
        ident1 = BlockMatrix.identity(d1.row_basis)
        witness = None

        qb = q @ B
        qb_ok = qb == BlockMatrix.identity(q.row_basis)
        if not qb_ok:
            witness = format_monomial(_z(N))

        lhs = (ident1 - B @ q) @ H
        rhs = d1 @ S
        hom_ok = lhs == rhs
        if not hom_ok and witness is None:
            witness = _first_bad_column(lhs - rhs)

        bound = (ident1.scale(2) - H).column_norm()
        try:
            h_inv = invert(H)
            inv_ok = h_inv @ H == ident1 and H @ h_inv == ident1
        except ArithmeticError:
            h_inv, inv_ok = None, False
        errors = []
        dsh_ok = False
        if h_inv is not None:
            errors = [(h_inv - neumann_partial_inverse(H, M)).column_norm() for M in range(1, orders + 1)]
            dsh = d1 @ S @ h_inv
            dsh_ok = dsh == ident1 - B @ q
            if not dsh_ok and witness is None:
                witness = _first_bad_column(dsh - (ident1 - B @ q))
        rep = SplittingReport(N, qb_ok, hom_ok, bound, errors, inv_ok, dsh_ok, witness)
        if not rep.passed and rep.witness is None:
            rep.witness = format_chain((_z(0), _z(N)))
        reports.append(rep)
    return reports


def kernel_image_check(N: int) -> Check:
    """ker q = im d_1 on the degree-N block, and q is onto there."""
    q = q_block(N)
    d1 = boundary_block(1, (N,))
    ker = kernel_basis(q)
    img = image_basis(d1)
    same = subspace_equal(ker, img)
    onto = rank(q) == len(q.row_basis)
    witness = None
    if not same:
        for v in ker.vectors + img.vectors:
            if not (in_span(ker.vectors, v) and in_span(img.vectors, v)):
                witness = str(ChainVector(1, 1, REGULAR, {q.col_basis[r]: x for r, x in v.items()}))
                break
    elif not onto:
        witness = format_monomial(_z(N))
    return Check(f"q_kernel_N{N}", same and onto, witness)


# ---------------------------------------------------------------------------
# exactness and homotopies


def harrison_exactness_block(n_max: int, N: tuple, module: ModuleKind = REGULAR) -> list[Check]:
    """Harrison (i = 1) cells of one block vanish for 2 <= n <= n_max."""
    checks = []
    for n in range(2, n_max + 1):
        cell = homology_dims(n, N, module, i=1, cap=None)
        witness = None
        if cell.dim_homology != 0:
            witness = str(homology_witness(n, 1, N, module))
        checks.append(Check(f"harrison_exact_n{n}_N{list(N)}", witness is None, witness))
    return checks


def one_variable_vanishing(n_max: int, N: tuple, module: ModuleKind = REGULAR) -> Check:
    """One variable: every cell with n >= 2 vanishes and cohomology matches homology."""
    for n in range(1, n_max + 1):
        for i in [*range(1, n + 1), None]:
            hom = homology_dims(n, N, module, i=i, cap=None)
            coh = cohomology_dims(n, N, module, i=i, cap=None)
            tag = f"n={n},i={i}"
            if n >= 2 and hom.dim_homology != 0:
                return Check(f"only_harrison_{module}_N{list(N)}", False,
                             f"{tag}: {homology_witness(n, i, N, module) if i else hom.dim_homology}")
            if hom.dim_homology != coh.dim_homology:
                return Check(f"only_harrison_{module}_N{list(N)}", False,
                             f"{tag}: homology {hom.dim_homology} vs cohomology {coh.dim_homology}")
    return Check(f"only_harrison_{module}_N{list(N)}", True)


def harrison_block_exactness(k: int, n_max: int, deg_max: int, module: ModuleKind = REGULAR) -> list[Check]:
    checks = []
    for N in degrees_up_to(k, deg_max):
        checks.extend(harrison_exactness_block(n_max, N, module))
    return checks


@dataclass
class BlockHomotopy:
    """Contracting data for the chain complex of one degree block.

    ``rho[n]`` maps C_n to C_{n+1}, ``proj[n]`` is the projection of C_n
    onto chosen homology representatives, and for every n
    ``d_n rho_n + rho_{n-1} d_{n-1} = id - proj_n``.
    """

    N: tuple
    module: ModuleKind
    rho: list
    proj: list


def _complement_reps(cycles: list, boundaries: list) -> list:
    reps = []
    span = list(boundaries)
    for z in cycles:
        if not in_span(span, z):
            reps.append(z)
            span.append(z)
    return reps


def block_homotopy(N: tuple, n_max: int, module: ModuleKind = REGULAR) -> BlockHomotopy:
    """Explicit contracting homotopy of the degree-N block in degrees <= n_max.

    C_n splits as B_n ⊕ R_n ⊕ W_n: boundaries, homology representatives and
    basis chains mapped by d isomorphically onto B_{n-1}.  Then rho_n sends
    the B_n-component d(w) back to w ∈ W_{n+1} and kills R_n ⊕ W_n.
    """
    N = tuple(N)
    # W_n as basis-chain positions, for n = 0 .. n_max + 1
    lifts = [[]]
    for n in range(1, n_max + 2):
        d = boundary_block(n - 1, N, module)
        lifts.append(independent_subset(d.cols))
    rho, proj = [], []
    for n in range(n_max + 1):
        d_in = boundary_block(n, N, module)
        basis_n = d_in.row_basis
        bvecs = [d_in.cols[w] for w in lifts[n + 1]]
        if n >= 1:
            cycles = kernel_basis(boundary_block(n - 1, N, module)).vectors
        else:
            cycles = [{r: Fraction(1)} for r in range(len(basis_n))]
        reps = _complement_reps(cycles, bvecs)
        wvecs = [{w: Fraction(1)} for w in lifts[n]]
        frame = bvecs + reps + wvecs
        if len(frame) != len(basis_n):
            raise ArithmeticError(f"degree {list(N)}, n={n}: splitting frame has wrong size")
        solver = LinearSolver(BlockMatrix(basis_n, tuple(range(len(frame))), frame, _trusted=True))
        nb, nr = len(bvecs), len(reps)
        rho_cols, proj_cols = [], []
        for r in range(len(basis_n)):
            y = solver.solve({r: Fraction(1)})
            if y is None:
                raise ArithmeticError(f"degree {list(N)}, n={n}: splitting frame is singular")
            rho_cols.append({lifts[n + 1][t]: x for t, x in y.items() if t < nb})
            pc: dict = {}
            for t, x in y.items():
                if nb <= t < nb + nr:
                    for rr, v in reps[t - nb].items():
                        pc[rr] = pc.get(rr, 0) + x * v
            proj_cols.append({rr: v for rr, v in pc.items() if v})
        rho.append(BlockMatrix(d_in.col_basis, basis_n, rho_cols, _trusted=True))
        proj.append(BlockMatrix(basis_n, basis_n, proj_cols, _trusted=True))
    return BlockHomotopy(N, module, rho, proj)


def contracting_homotopy(n: int, N, k: int = 1, module: ModuleKind = REGULAR) -> BlockMatrix:
    """rho_n : C_n -> C_{n+1} on the degree-N block (N an int when k = 1)."""
    N = (N,) if isinstance(N, int) else tuple(N)
    if len(N) != k:
        raise ValueError("degree length must equal k")
    return block_homotopy(N, n, module).rho[n]


def verify_homotopy(h: BlockHomotopy) -> str | None:
    """Substitute back; return a witness chain where an identity fails."""
    for n, (rho, p) in enumerate(zip(h.rho, h.proj)):
        ident = BlockMatrix.identity(p.row_basis)
        lhs = boundary_block(n, h.N, h.module) @ rho
        if n >= 1:
            lhs = lhs + h.rho[n - 1] @ boundary_block(n - 1, h.N, h.module)
        bad = _first_bad_column(lhs - (ident - p))
        if bad is None:
            bad = _first_bad_column(p @ p - p)
        if bad is None:
            # representatives are cycles and the projection kills boundaries
            if n >= 1:
                bad = _first_bad_column(boundary_block(n - 1, h.N, h.module) @ p)
            if bad is None:
                bad = _first_bad_column(p @ boundary_block(n, h.N, h.module))
        if bad is not None:
            return f"{bad} (n={n})"
    return None


def homotopy_matches_splitting(N: int, tie: str = "low") -> bool:
    """At n = 1 the block projection is Bq, and S H^-1 is another valid rho."""
    h = block_homotopy((N,), 1)
    q, B = q_block(N), b_block(N)
    d1 = boundary_block(1, (N,))
    ident = BlockMatrix.identity(d1.row_basis)
    return h.proj[1] == B @ q and d1 @ s_block(N, tie) @ invert(h_block(N, tie)) == ident - B @ q


def harrison_kunneth_check(n: int, N: tuple, k: int = 2) -> Check:
    """Harrison cell of R_k versus the sum over variables of one-variable cells."""
    N = tuple(N)
    if len(N) != k:
        raise ValueError("degree length must equal k")
    lhs = homology_dims(n, N, REGULAR, i=1, cap=None).dim_homology
    rhs = sum(
        homology_dims(n, N, ModuleKind.variable(v, k), i=1, cap=None).dim_homology for v in range(1, k + 1)
    )
    witness = None if lhs == rhs else f"cell n={n},i=1,N={list(N)}: {lhs} vs {rhs}"
    return Check(f"harrison_kunneth_n{n}_N{list(N)}", lhs == rhs, witness)
