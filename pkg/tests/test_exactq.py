from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from hodgeham.exactq import (
    BlockMatrix,
    DimensionMismatch,
    LinearSolver,
    SingularMatrixError,
    SubspaceBasis,
    image_basis,
    in_span,
    independent_subset,
    invert,
    kernel_basis,
    rank,
    rank_of_vectors,
    rref,
    solve,
    subspace_contains,
    subspace_equal,
)
from hodgeham.hochschild import bgs_project, boundary_block
from hodgeham.monomial import ChainVector


def small_matrices(max_rows=5, max_cols=5):
    entry = st.integers(-3, 3)

    @st.composite
    def build(draw):
        r = draw(st.integers(1, max_rows))
        c = draw(st.integers(1, max_cols))
        # sparse-ish: many zeros so rank deficiency is common
        rows = [[draw(st.one_of(st.just(0), st.just(0), entry)) for _ in range(c)] for _ in range(r)]
        return rows

    return build()


def test_rank_trivial_cases():
    assert rank(BlockMatrix.identity(["a", "b"])) == 2
    assert rank(BlockMatrix.zero(range(3), range(5))) == 0


def test_d1_block_at_degree_one():
    # C_2 has three basis chains at degree 1, C_1 two; only z|1 is hit
    d1 = boundary_block(1, (1,))
    assert d1.shape == (2, 3)
    assert rank(d1) == 1
    img = image_basis(d1)
    assert [{d1.row_basis[r]: x for r, x in v.items()} for v in img.vectors] == [{((1,), (0,)): 1}]
    # three columns, rank one: two-dimensional kernel; the transpose has a
    # one-dimensional kernel
    assert kernel_basis(d1).dim == 2
    assert kernel_basis(d1.T).dim == 1


def test_kernel_examples():
    k = kernel_basis(BlockMatrix.from_rows([[1, 1]]))
    assert k.dim == 1
    v = k.vectors[0]
    assert v[0] == -v[1] != 0
    assert kernel_basis(BlockMatrix.identity(range(4))).dim == 0


def test_image_examples():
    assert image_basis(BlockMatrix.zero(range(2), range(3))).dim == 0
    img = image_basis(BlockMatrix.identity(range(3)))
    assert img.vectors == [{0: 1}, {1: 1}, {2: 1}]


def test_subspace_equal_examples():
    amb = ["x", "y"]
    assert subspace_equal(SubspaceBasis(amb, [{0: 1}]), SubspaceBasis(amb, [{0: 2}]))
    assert not subspace_equal(SubspaceBasis(amb, [{0: 1}]), SubspaceBasis(amb, [{1: 1}]))
    with pytest.raises(DimensionMismatch):
        subspace_equal(SubspaceBasis(amb, [{0: 1}]), SubspaceBasis(["x", "z"], [{0: 1}]))


def test_subspace_basis_rejects_dependent_vectors():
    with pytest.raises(ValueError):
        SubspaceBasis(["x", "y"], [{0: 1}, {0: 3}])


def test_solve_examples():
    ident = BlockMatrix.identity(range(3))
    assert solve(ident, {0: 2, 2: Fraction(1, 3)}) == {0: 2, 2: Fraction(1, 3)}
    assert solve(BlockMatrix.zero(range(2), range(2)), {1: 1}) is None
    with pytest.raises(DimensionMismatch):
        solve(ident, {5: 1})


def test_solve_harrison_two_cycle_preimage():
    N = (2,)
    d1 = boundary_block(1, N)
    d2 = boundary_block(2, N)
    chains = d1.col_basis
    found = 0
    for v in kernel_basis(d1).vectors:
        cycle = ChainVector(2, 1, terms={chains[r]: x for r, x in v.items()})
        harrison = bgs_project(1, cycle)
        if not harrison:
            continue
        b = {chains.index(c): x for c, x in harrison.terms.items()}
        assert not d1.apply(b)
        x = solve(d2, b)
        assert x is not None and d2.apply(x) == b
        found += 1
    assert found


def test_invert_examples():
    ident = BlockMatrix.identity(range(2))
    assert invert(ident) == ident
    diag = BlockMatrix.from_rows([[2, 0], [0, 3]])
    assert invert(diag).to_rows() == [[Fraction(1, 2), 0], [0, Fraction(1, 3)]]
    with pytest.raises(SingularMatrixError):
        invert(BlockMatrix.from_rows([[1, 2], [2, 4]]))
    with pytest.raises(DimensionMismatch):
        invert(BlockMatrix.from_rows([[1, 2]]))


def test_rref_is_reduced():
    rows = [{0: 2, 1: 4}, {0: 1, 2: 1}, {1: 2, 2: -1}]
    out = rref(rows)
    pivots = [p for p, _ in out]
    assert pivots == sorted(pivots)
    for p, row in out:
        assert row[p] == 1
        for q, other in out:
            if q != p:
                assert p not in other


def test_block_matrix_validation():
    with pytest.raises(ValueError):
        BlockMatrix(["a", "a"], ["b"])
    with pytest.raises(IndexError):
        BlockMatrix.from_entries(["a"], ["b"], {(1, 0): 1})
    m = BlockMatrix.from_entries(["a"], ["b"], {(0, 0): 0})
    assert m.nnz() == 0


@settings(max_examples=60, deadline=None)
@given(small_matrices())
def test_rank_matches_sympy_and_transpose(rows):
    m = BlockMatrix.from_rows(rows)
    expected = sympy.Matrix(rows).rank()
    assert rank(m) == expected == rank(m.T)


@settings(max_examples=60, deadline=None)
@given(small_matrices())
def test_rank_nullity_and_exact_kernel(rows):
    m = BlockMatrix.from_rows(rows)
    kb = kernel_basis(m)
    assert rank(m) + kb.dim == m.shape[1]
    for v in kb.vectors:
        assert not m.apply(v)


@settings(max_examples=40, deadline=None)
@given(small_matrices(), st.randoms(use_true_random=False))
def test_row_permutation_invariance(rows, rnd):
    m = BlockMatrix.from_rows(rows)
    perm = list(range(len(rows)))
    rnd.shuffle(perm)
    shuffled = BlockMatrix.from_rows([rows[p] for p in perm])
    assert rank(m) == rank(shuffled)
    # column spaces of m^T are row spaces: equal regardless of row order
    a = image_basis(m.T)
    b = image_basis(shuffled.T)
    assert subspace_equal(a, b)


@settings(max_examples=40, deadline=None)
@given(small_matrices(4, 4), st.lists(st.integers(-3, 3), min_size=4, max_size=4))
def test_solve_on_image(rows, xs):
    m = BlockMatrix.from_rows(rows)
    x = {j: xs[j] for j in range(m.shape[1]) if xs[j]}
    b = m.apply(x)
    sol = LinearSolver(m).solve(b)
    assert sol is not None and m.apply(sol) == b


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4).flatmap(lambda n: st.lists(st.lists(st.integers(-4, 4), min_size=n, max_size=n), min_size=n, max_size=n)))
def test_invert_two_sided(rows):
    m = BlockMatrix.from_rows(rows)
    if sympy.Matrix(rows).det() == 0:
        with pytest.raises(SingularMatrixError):
            invert(m)
        return
    inv = invert(m)
    ident = BlockMatrix.identity(m.row_basis)
    assert m @ inv == ident
    assert inv @ m == BlockMatrix.identity(m.col_basis)


@settings(max_examples=40, deadline=None)
@given(small_matrices())
def test_independent_subset_spans(rows):
    vecs = [{j: x for j, x in enumerate(r) if x} for r in rows]
    keep = independent_subset(vecs)
    assert len(keep) == rank_of_vectors(vecs)
    chosen = [vecs[i] for i in keep]
    for v in vecs:
        assert in_span(chosen, v)


def test_subspace_contains_direction():
    amb = range(3)
    big = SubspaceBasis(amb, [{0: 1}, {1: 1}])
    small = SubspaceBasis(amb, [{0: 1, 1: -1}])
    assert subspace_contains(big, small)
    assert not subspace_contains(small, big)
