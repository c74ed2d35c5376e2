import json
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hodgeham.exactq import rank
from hodgeham.hochschild import (
    ResourceCapExceeded,
    bgs_project,
    boundary,
    boundary_block,
    cell_size,
    chain_basis,
    chain_map_witness,
    coboundary_block,
    cohomology_dims,
    d_squared_witness,
    degree_preservation_witness,
    degree_project,
    degrees_up_to,
    derivation_block_norm,
    face_map,
    hodge_basis_chain,
    hodge_table,
    homology_dims,
    homology_witness,
    lie_cell_expected,
    truncation_project,
)
from hodgeham.monomial import REGULAR, ChainVector, ModuleKind
from oracles import boundary_matrix, brute_boundary, hodge_homology, total_homology

Z0, Z1, Z2, Z3 = (0,), (1,), (2,), (3,)

# Nonzero Hodge cells from the dense-projector oracle in tests/oracles.py,
# for k = 1 (N <= 4) and k = 2 (|N| <= 3), 1 <= i <= n <= 3.  Every other
# cell in those ranges is zero.
ORACLE_NONZERO = {
    (1, 1, (1,)): 1, (1, 1, (2,)): 1, (1, 1, (3,)): 1, (1, 1, (4,)): 1,
    (1, 1, (0, 1)): 1, (1, 1, (0, 2)): 1, (1, 1, (0, 3)): 1,
    (1, 1, (1, 0)): 1, (1, 1, (2, 0)): 1, (1, 1, (3, 0)): 1,
    (1, 1, (1, 1)): 2, (1, 1, (1, 2)): 2, (1, 1, (2, 1)): 2,
    (2, 2, (1, 1)): 1, (2, 2, (1, 2)): 1, (2, 2, (2, 1)): 1,
}


def oracle_cells():
    for k, deg_max in ((1, 4), (2, 3)):
        for N in degrees_up_to(k, deg_max):
            for n in range(1, 4):
                for i in range(1, n + 1):
                    yield n, i, N


def vec(terms, n=None, module=REGULAR):
    terms = {tuple(c): x for c, x in terms.items()}
    first = next(iter(terms))
    return ChainVector(len(first) - 1 if n is None else n, len(first[0]), module, terms)


def test_face_map_examples():
    c = (Z0, Z1, Z2)
    assert face_map(0, c) == (Z1, Z2)
    assert face_map(1, c) == (Z0, Z3)
    assert face_map(2, c) == (Z2, Z1)
    with pytest.raises(IndexError):
        face_map(3, c)
    assert face_map(0, (Z2, Z1), ModuleKind.truncation(3)) is None


def test_boundary_examples():
    assert not boundary(vec({(Z1, Z2): 1}))
    assert boundary(vec({(Z0, Z0, Z1): 1})) == vec({(Z1, Z0): 1})
    assert boundary(vec({(Z0, Z1, Z1): 1})) == vec({(Z1, Z1): 2, (Z0, Z2): -1})


def test_boundary_block_examples():
    d1 = boundary_block(1, (1,))
    assert d1.row_basis == ((Z0, Z1), (Z1, Z0))
    assert d1.col_basis == ((Z0, Z0, Z1), (Z0, Z1, Z0), (Z1, Z0, Z0))
    assert rank(d1) == 1
    assert d1.column(0) == {1: 1}
    truncated = boundary_block(1, (1,), ModuleKind.truncation(1))
    assert truncated.shape == (1, 2) and truncated.is_zero()
    assert coboundary_block(1, (1,)) == d1.T


@pytest.mark.parametrize("N", [(2,), (1, 1), (2, 1), (1, 1, 1)])
@pytest.mark.parametrize("n", [0, 1, 2])
def test_boundary_block_matches_oracle(n, N):
    m = boundary_block(n, N)
    dense = boundary_matrix(n, N)
    assert [[int(x) for x in row] for row in m.to_rows()] == dense.tolist()


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 3), st.integers(0, 3)), min_size=2, max_size=5))
def test_boundary_matches_oracle_on_chains(monos):
    chain = tuple(monos)
    assert boundary(vec({chain: 1})).terms == brute_boundary(chain)


def test_bgs_project_examples():
    c = vec({(Z0, Z1): 1})
    assert bgs_project(1, c) == c
    assert not bgs_project(2, c)
    assert not bgs_project(2, vec({(Z1, Z2, Z2): 1}))
    half = Fraction(1, 2)
    assert bgs_project(1, vec({(Z0, Z1, Z2): 1})) == vec({(Z0, Z1, Z2): half, (Z0, Z2, Z1): half})


def test_degree_and_truncation_projections():
    c = vec({(Z0, Z1): 1, (Z1, Z2): 3, (Z0, Z0): 2})
    assert degree_project((1,), c) == vec({(Z0, Z1): 1}, n=1)
    assert not degree_project((5,), c)
    assert truncation_project(3, c) == c
    assert truncation_project(0, c) == vec({(Z0, Z0): 2}, n=1)
    with pytest.raises(ValueError):
        truncation_project(-1, c)


chains2 = st.dictionaries(
    st.tuples(*[st.tuples(st.integers(0, 2), st.integers(0, 2))] * 4),
    st.integers(-3, 3).filter(bool),
    min_size=1,
    max_size=6,
)


@settings(max_examples=40, deadline=None)
@given(chains2, st.integers(0, 6))
def test_projections_commute_with_boundary_and_hodge(terms, m):
    x = ChainVector(3, 2, REGULAR, terms)
    dx = boundary(x)
    for N in {d for d in x.degrees()}:
        assert degree_project(N, dx) == boundary(degree_project(N, x))
    assert truncation_project(m, dx) == boundary(truncation_project(m, x))
    for i in range(1, 5):
        ex = bgs_project(i, x)
        assert boundary(ex) == bgs_project(i, dx)
        assert truncation_project(m, ex) == bgs_project(i, truncation_project(m, x))


def test_homology_examples():
    for N in range(1, 6):
        assert homology_dims(1, (N,)).dim_homology == 1
        assert homology_dims(2, (N,)).dim_homology == 0
    assert homology_dims(2, (2, 1), i=1).dim_homology == 0
    assert homology_dims(2, (2, 1), i=2).dim_homology == 1
    # n = 0 is the module block itself
    assert homology_dims(0, (2, 1)).dim_homology == 1
    with pytest.raises(ValueError):
        homology_dims(0, (1,), i=1)


def test_cohomology_examples():
    for N in range(7):
        assert cohomology_dims(2, (N,), ModuleKind.truncation(2)).dim_homology == 0
    assert cohomology_dims(2, (1, 1), i=1).dim_homology == 0


@pytest.mark.parametrize("n,i,N", list(oracle_cells()))
def test_cells_match_frozen_oracle(n, i, N):
    cell = homology_dims(n, N, i=i)
    assert cell.dim_homology == ORACLE_NONZERO.get((n, i, N), 0)
    assert cohomology_dims(n, N, i=i).dim_homology == cell.dim_homology


@pytest.mark.parametrize("n,i,N", [(1, 1, (2,)), (2, 2, (1, 1)), (2, 1, (1, 1)), (3, 2, (1, 2))])
def test_oracle_still_agrees(n, i, N):
    # keeps the frozen table honest: recompute a few cells from scratch
    assert hodge_homology(n, i, N) == ORACLE_NONZERO.get((n, i, N), 0)


def test_total_cells_match_oracle():
    for N in [(2,), (1, 1), (2, 1)]:
        for n in range(0, 3):
            assert homology_dims(n, N).dim_homology == total_homology(n, N)


def test_homology_witness():
    assert homology_witness(2, 1, (2, 1)) is None
    w = homology_witness(2, 2, (1, 1))
    assert w is not None and w
    assert not boundary(w)
    basis = hodge_basis_chain(2, 2, (1, 1))
    assert len(basis) == homology_dims(2, (1, 1), i=2).dim_chain


def test_cell_size_and_cap():
    assert cell_size(2, (2,)) == 3 + 6 + 10
    with pytest.raises(ResourceCapExceeded) as err:
        homology_dims(3, (2, 2), cap=10)
    assert "n=3" in str(err.value)


def test_hodge_table_one_variable():
    report = hodge_table(1, 3, 4)
    assert report.passed
    assert all(c["dim_homology"] == 0 for c in report.cells if c["n"] >= 2)
    names = [c.name for c in report.checks]
    assert names == ["d_squared_zero", "hodge_additivity", "hodge_vanishing", "lie_cell_count"]


def test_hodge_table_lie_pattern():
    report = hodge_table(2, 2, 4)
    assert report.passed
    for c in report.cells:
        if c["n"] == 2 and c["i"] == 2:
            N = tuple(c["degree"])
            assert c["dim_homology"] == (1 if min(N) >= 1 else 0) == lie_cell_expected(2, N)


def test_hodge_table_cap_refusal_names_cell():
    with pytest.raises(ResourceCapExceeded) as err:
        hodge_table(3, 5, 8)
    assert err.value.cell.startswith("n=")


def test_hodge_table_deterministic_across_jobs():
    a = hodge_table(2, 3, 3, jobs=1).to_json()
    b = hodge_table(2, 3, 3, jobs=2).to_json()
    assert a == b
    data = json.loads(a)
    keys = [(c["n"], c["i"], c["degree"]) for c in data["cells"]]
    assert keys == sorted(keys)


def test_hodge_table_truncated_module():
    report = hodge_table(1, 3, 6, ModuleKind.truncation(3))
    assert report.passed
    assert "hodge_vanishing" in [c.name for c in report.checks]
    assert "lie_cell_count" not in [c.name for c in report.checks]


def test_hodge_table_variable_module():
    report = hodge_table(2, 3, 3, ModuleKind.variable(1, 2))
    assert report.passed
    assert report.module == "var:1"
    assert all(c["dim_homology"] == 0 for c in report.cells if c["n"] >= 2)


def test_derivation_norms():
    assert derivation_block_norm(0, 5) == 5
    assert derivation_block_norm(2, 0) == 0
    seq = [derivation_block_norm(3, N) for N in range(1, 41)]
    assert seq == list(range(1, 41))


@pytest.mark.parametrize("k", [1, 2, 3])
def test_d_squared_and_degrees(k):
    for N in degrees_up_to(k, 6):
        for n in range(1, 6):
            assert d_squared_witness(n, N) is None
            assert degree_preservation_witness(n, N) is None


@pytest.mark.parametrize("N", [(3,), (1, 1), (2, 1), (0, 3)])
def test_chain_map_law(N):
    for n in range(0, 4):
        assert chain_map_witness(n, N) is None


def test_chain_basis_is_sorted():
    basis = chain_basis(2, (1, 2))
    assert list(basis) == sorted(basis)
