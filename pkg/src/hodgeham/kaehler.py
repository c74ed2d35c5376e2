"""Kähler differentials of monomial algebras, blockwise.

Elements of A⊗A are dictionaries keyed by monomial pairs ``(x, y)`` (the
same tuples as one-leg chains ``x⊗y``), A⊗A⊗A by triples.  For a tensor
product C = A⊗B presented as a variable split of R_{kA+kB}, a C-monomial is
the concatenation ``a + b`` of exponent tuples, and the target of preEx,
I_A⊗B ⊕ A⊗I_B, is keyed by ``(0, a1, a2, b)`` and ``(1, a, b1, b2)``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .exactq import (
    BlockMatrix,
    SubspaceBasis,
    image_basis,
    in_span,
    kernel_basis,
    rank,
    subspace_contains,
    subspace_equal,
)
from .hochschild import boundary_block, chain_basis, chain_index, degrees_up_to, homology_dims
from .monomial import format_chain, mono_mul, unit, weak_compositions
from .report import Check


def _add(out: dict, key, x) -> None:
    v = out.get(key, 0) + x
    if v:
        out[key] = v
    else:
        out.pop(key, None)


def _mul(*monos):
    r = monos[0]
    for m in monos[1:]:
        r = mono_mul(r, m)
    return r


# ---------------------------------------------------------------------------
# sigma and tau


def sigma(x, y) -> dict:
    """x⊗y − xy⊗1."""
    out: dict = {}
    _add(out, (x, y), 1)
    _add(out, (mono_mul(x, y), unit(len(x))), -1)
    return out


def tau(x, y, a) -> dict:
    """x⊗ya − xy⊗a − ax⊗y + axy⊗1."""
    out: dict = {}
    _add(out, (x, mono_mul(y, a)), 1)
    _add(out, (mono_mul(x, y), a), -1)
    _add(out, (mono_mul(a, x), y), -1)
    _add(out, (_mul(a, x, y), unit(len(x))), 1)
    return out


def _linear(fn, v: dict) -> dict:
    out: dict = {}
    for key, x in v.items():
        for k2, y in fn(*key).items():
            _add(out, k2, x * y)
    return out


def sigma_vector(v: dict) -> dict:
    return _linear(sigma, v)


def product_map(v: dict) -> dict:
    """A⊗A → A, x⊗y ↦ xy."""
    out: dict = {}
    for (x, y), c in v.items():
        _add(out, mono_mul(x, y), c)
    return out


# ---------------------------------------------------------------------------
# degree blocks


def _block(N, k, n_legs, fn) -> BlockMatrix:
    """Matrix of a map from the (n_legs)-leg chain basis to the one-leg basis."""
    N = _deg(N, k)
    cols = chain_basis(n_legs, N)
    idx = chain_index(1, N)
    return BlockMatrix(
        chain_basis(1, N), cols, [{idx[key]: Fraction(x) for key, x in fn(*c).items()} for c in cols]
    )


def _deg(N, k) -> tuple:
    N = (N,) if isinstance(N, int) else tuple(N)
    if len(N) != k:
        raise ValueError("degree length must equal k")
    return N


def product_block(N, k: int = 1) -> BlockMatrix:
    N = _deg(N, k)
    cols = chain_basis(1, N)
    return BlockMatrix((N,), cols, [{0: Fraction(1)} for _ in cols])


def sigma_block(N, k: int = 1) -> BlockMatrix:
    return _block(N, k, 1, sigma)


def tau_block(N, k: int = 1) -> BlockMatrix:
    return _block(N, k, 2, tau)


@dataclass
class IdealBlockBasis:
    N: tuple
    vectors: SubspaceBasis

    @property
    def dim(self) -> int:
        return self.vectors.dim


@dataclass
class OmegaBlock:
    N: tuple
    dim: int
    representatives: SubspaceBasis


def ideal_block_basis(N, k: int = 1) -> IdealBlockBasis:
    """Kernel of the product map on the degree-N block of A⊗A."""
    N = _deg(N, k)
    return IdealBlockBasis(N, kernel_basis(product_block(N, k)))


def omega_block(N, k: int = 1) -> OmegaBlock:
    N = _deg(N, k)
    ideal = ideal_block_basis(N, k).vectors
    t = tau_block(N, k)
    span = list(image_basis(t).vectors)
    reps = []
    for v in ideal.vectors:
        if not in_span(span, v):
            reps.append(v)
            span.append(v)
    dim = ideal.dim - rank(t)
    return OmegaBlock(N, dim, SubspaceBasis(ideal.ambient_basis, reps))


def verify_hh1_iso(N, k: int = 1) -> Check:
    """HH_1 block versus the Omega block through sigma and the inclusion J."""
    N = _deg(N, k)
    name = f"hh1_iso_N{list(N)}"
    basis = chain_basis(1, N)
    sig, t, d1 = sigma_block(N, k), tau_block(N, k), boundary_block(1, N)
    ideal = ideal_block_basis(N, k).vectors
    # sigma restricted to I is the identity (sigma J = id)
    for v in ideal.vectors:
        if sig.apply(v) != v:
            return Check(name, False, _vec_str(basis, v))
    # the image of sigma is exactly I
    if not subspace_equal(image_basis(sig), ideal):
        return Check(name, False, "image of sigma differs from the ideal")
    # (id - J sigma)(x⊗y) = d_1(xy⊗1⊗1)
    idx2 = chain_index(2, N)
    for c, x_y in enumerate(basis):
        x, y = x_y
        lhs = {r: -v for r, v in sig.cols[c].items()}
        _add(lhs, c, 1)
        one = unit(k)
        rhs = d1.cols[idx2[(mono_mul(x, y), one, one)]]
        if lhs != rhs:
            return Check(name, False, format_chain(x_y))
    # sigma d_1 = -tau
    bad = _first_bad(sig @ d1 + t)
    if bad is not None:
        return Check(name, False, format_chain(bad))
    # sigma descends (sigma(B_1) in Im tau) and J descends (Im tau in B_1)
    tau_img, bnd = image_basis(t), image_basis(d1)
    if not subspace_contains(ideal, tau_img):
        return Check(name, False, "Im tau is not inside the ideal")
    if not subspace_contains(tau_img, image_basis(sig @ d1)):
        return Check(name, False, "sigma does not descend to homology")
    if not subspace_contains(bnd, tau_img):
        return Check(name, False, "J does not descend to Omega")
    # both composites are identities modulo the respective images
    omega = omega_block(N, k)
    for r in omega.representatives.vectors:
        if not in_span(tau_img.vectors, _sub(sig.apply(r), r)):
            return Check(name, False, _vec_str(basis, r))
    for c in range(len(basis)):
        e = {c: Fraction(1)}
        if not in_span(bnd.vectors, _sub(sig.apply(e), e)):
            return Check(name, False, format_chain(basis[c]))
    hh1 = homology_dims(1, N, cap=None).dim_homology
    if hh1 != omega.dim:
        return Check(name, False, f"HH_1 dim {hh1} vs Omega dim {omega.dim}")
    return Check(name, True)


def _sub(a: dict, b: dict) -> dict:
    out = dict(a)
    for r, x in b.items():
        _add(out, r, -x)
    return out


def _first_bad(m: BlockMatrix):
    for c, col in enumerate(m.cols):
        if col:
            return m.col_basis[c]
    return None


def _vec_str(basis, v: dict) -> str:
    return " + ".join(f"{x}*{format_chain(basis[r])}" for r, x in sorted(v.items())) or "0"


def i_squared_check(N, k: int = 1) -> Check:
    """Im tau equals the span of products sigma(x1⊗x2)·sigma(y1⊗y2) in the block."""
    N = _deg(N, k)
    name = f"i_squared_N{list(N)}"
    idx = chain_index(1, N)
    quads = chain_basis(3, N)
    prod_cols = []
    for x1, x2, y1, y2 in quads:
        lhs: dict = {}
        for (p, q), s in sigma(x1, x2).items():
            for (r, t), u in sigma(y1, y2).items():
                _add(lhs, (mono_mul(p, r), mono_mul(q, t)), s * u)
        rhs = tau(mono_mul(x1, y1), x2, y2)
        if lhs != rhs:
            return Check(name, False, format_chain((x1, x2, y1, y2)))
        prod_cols.append({idx[key]: Fraction(x) for key, x in lhs.items()})
    products = BlockMatrix(chain_basis(1, N), quads, prod_cols)
    same = subspace_equal(image_basis(tau_block(N, k)), image_basis(products))
    return Check(name, same, None if same else f"degree {list(N)}")


def omega_kunneth_dims(k: int, N) -> Check:
    """dim Omega(R_k) at N against the sum of one-variable summand blocks."""
    N = _deg(N, k)
    direct = omega_block(N, k).dim
    summands = sum(omega_block((x,), 1).dim for x in N)
    count = sum(1 for x in N if x >= 1)
    ok = direct == summands == count
    return Check(f"omega_kunneth_N{list(N)}", ok, None if ok else f"{direct} vs {summands} vs {count}")


def omega_table(k: int, deg_max: int) -> str:
    """CSV of Omega block data keyed by degree."""
    lines = ["degree,dim_ideal,rank_tau,dim_omega,dim_hh1"]
    for N in degrees_up_to(k, deg_max):
        ideal = ideal_block_basis(N, k).dim
        r = rank(tau_block(N, k))
        hh1 = homology_dims(1, N, cap=None).dim_homology
        lines.append(f"{' '.join(map(str, N))},{ideal},{r},{ideal - r},{hh1}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# tensor products C = A⊗B


@dataclass(frozen=True)
class TensorSplit:
    """C = R_{kA+kB} seen as A⊗B with A on the first kA variables."""

    kA: int = 1
    kB: int = 1

    def join(self, a, b):
        return tuple(a) + tuple(b)

    def unit_a(self):
        return unit(self.kA)

    def unit_b(self):
        return unit(self.kB)


def sigma_c(split: TensorSplit, a, b, x, y) -> dict:
    """sigma_C((a⊗b)⊗(x⊗y)) over C⊗C."""
    return sigma(split.join(a, b), split.join(x, y))


def tau_c(split: TensorSplit, c1, c2, c3) -> dict:
    return tau(split.join(*c1), split.join(*c2), split.join(*c3))


def pre_ex(split: TensorSplit, a, b, x, y) -> dict:
    """preEx(sigma_C(a⊗b⊗x⊗y)) = (sigma_A(a⊗x)⊗by, ax⊗sigma_B(b⊗y))."""
    out: dict = {}
    by = mono_mul(b, y)
    for (p, q), s in sigma(a, x).items():
        _add(out, (0, p, q, by), s)
    ax = mono_mul(a, x)
    for (p, q), s in sigma(b, y).items():
        _add(out, (1, ax, p, q), s)
    return out


def _split_c(split, c):
    return c[: split.kA], c[split.kA :]


def pre_ex_vector(split: TensorSplit, v: dict) -> dict:
    """preEx∘sigma_C on a C⊗C vector; on I_C this is preEx itself."""
    out: dict = {}
    for (c1, c2), x in v.items():
        a, b = _split_c(split, c1)
        p, q = _split_c(split, c2)
        for key, y in pre_ex(split, a, b, p, q).items():
            _add(out, key, x * y)
    return out


def pre_ass_a(split: TensorSplit, u, x, b) -> dict:
    """preAss_A(sigma_A(u⊗x)⊗b) = sigma_C((u⊗b)⊗(x⊗1))."""
    return sigma_c(split, u, b, x, split.unit_b())


def pre_ass_b(split: TensorSplit, a, v, y) -> dict:
    """preAss_B(a⊗sigma_B(v⊗y)) = sigma_C((a⊗v)⊗(1⊗y))."""
    return sigma_c(split, a, v, split.unit_a(), y)


def pre_ass(split: TensorSplit, w: dict) -> dict:
    """preAss on a pair-space vector (through sigma on generator presentations)."""
    out: dict = {}
    for key, x in w.items():
        if key[0] == 0:
            img = pre_ass_a(split, key[1], key[2], key[3])
        else:
            img = pre_ass_b(split, key[1], key[2], key[3])
        for k2, y in img.items():
            _add(out, k2, x * y)
    return out


def theta(split: TensorSplit, x1, y1, x2, y2, a, b) -> dict:
    """((x1⊗x2⊗a)⊗b y1 y2, a x1 x2⊗(y1⊗y2⊗b)), keyed by summand tag."""
    out: dict = {}
    _add(out, (0, (x1, x2, a), _mul(b, y1, y2)), 1)
    _add(out, (1, _mul(a, x1, x2), (y1, y2, b)), 1)
    return out


def tau_pair(w: dict) -> dict:
    """(tau_A⊗id_B, id_A⊗tau_B) into the pair space."""
    out: dict = {}
    for key, x in w.items():
        if key[0] == 0:
            (p, q, r), b = key[1], key[2]
            for (s, t), y in tau(p, q, r).items():
                _add(out, (0, s, t, b), x * y)
        else:
            a, (p, q, r) = key[1], key[2]
            for (s, t), y in tau(p, q, r).items():
                _add(out, (1, a, s, t), x * y)
    return out


def gamma(split: TensorSplit, key) -> tuple:
    """gamma on one generator of A^⊗3⊗B ⊕ A⊗B^⊗3, as a C⊗C⊗C triple."""
    one_a, one_b = split.unit_a(), split.unit_b()
    if key[0] == 0:
        (x1, x2, u), b = key[1], key[2]
        return ((x1, b), (x2, one_b), (u, one_b))
    a, (y1, y2, v) = key[1], key[2]
    return ((a, y1), (one_a, y2), (one_a, v))


def rho(split: TensorSplit, a, b, x, y) -> tuple:
    """Coefficient and C⊗C⊗C triple of rho(a⊗b⊗x⊗y) = −(a⊗b)⊗(x⊗1)⊗(1⊗y)."""
    return -1, ((a, b), (x, split.unit_b()), (split.unit_a(), y))


def _random_tuples(split, kinds, total, count, seed):
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        parts = [0] * sum(kinds)
        for _ in range(total):
            parts[rng.randrange(len(parts))] += 1
        tup, pos = [], 0
        for k in kinds:
            tup.append(tuple(parts[pos : pos + k]))
            pos += k
        out.append(tuple(tup))
    return out


def _tuples(split, kinds, deg_max, sample):
    """Exhaustive tuples up to deg_max, plus an optional seeded random sample."""
    total_vars = sum(kinds)
    for total in range(deg_max + 1):
        for comp in weak_compositions(total, total_vars):
            tup, pos = [], 0
            for k in kinds:
                tup.append(tuple(comp[pos : pos + k]))
                pos += k
            yield tuple(tup)
    if sample:
        total, count, seed = sample
        yield from _random_tuples(split, kinds, total, count, seed)


def verify_claim1(split: TensorSplit = TensorSplit(), deg_max: int = 4, sample=None) -> Check:
    """preEx∘tau_C = (tau_A⊗id, id⊗tau_B)∘theta on monomial 6-tuples."""
    A, B = split.kA, split.kB
    for x1, y1, x2, y2, a, b in _tuples(split, (A, B, A, B, A, B), deg_max, sample):
        lhs = pre_ex_vector(split, tau_c(split, (x1, y1), (x2, y2), (a, b)))
        rhs = tau_pair(theta(split, x1, y1, x2, y2, a, b))
        if lhs != rhs:
            return Check("claim1_theta", False, format_chain((x1, y1, x2, y2, a, b)))
    return Check("claim1_theta", True)


def verify_claim2(split: TensorSplit = TensorSplit(), deg_max: int = 4, sample=None) -> Check:
    """preAss∘(tau_A⊗id, id⊗tau_B) = tau_C∘gamma on both generator families."""
    A, B = split.kA, split.kB
    families = [
        (lambda t: (0, (t[0], t[1], t[2]), t[3]), (A, A, A, B)),
        (lambda t: (1, t[0], (t[1], t[2], t[3])), (A, B, B, B)),
    ]
    for make, kinds in families:
        for t in _tuples(split, kinds, deg_max, sample):
            key = make(t)
            lhs = pre_ass(split, tau_pair({key: 1}))
            rhs = tau_c(split, *gamma(split, key))
            if lhs != rhs:
                return Check("claim2_gamma", False, format_chain(t))
    return Check("claim2_gamma", True)


def verify_step3(split: TensorSplit = TensorSplit(), deg_max: int = 4, sample=None) -> Check:
    """preAss∘preEx∘sigma_C − sigma_C = tau_C∘rho, and preEx∘preAss = id."""
    A, B = split.kA, split.kB
    for a, b, x, y in _tuples(split, (A, B, A, B), deg_max, sample):
        lhs = pre_ass(split, pre_ex(split, a, b, x, y))
        for key, v in sigma_c(split, a, b, x, y).items():
            _add(lhs, key, -v)
        coeff, triple = rho(split, a, b, x, y)
        rhs = {key: coeff * v for key, v in tau_c(split, *triple).items()}
        if lhs != rhs:
            return Check("step3_rho", False, format_chain((a, b, x, y)))
    # preEx∘preAss = id on generator pairs
    for u, x, b in _tuples(split, (A, A, B), deg_max, sample):
        gen = {(0, p, q, b): s for (p, q), s in sigma(u, x).items()}
        if pre_ex_vector(split, pre_ass(split, gen)) != gen:
            return Check("step3_rho", False, format_chain((u, x, b)))
    for a, v, y in _tuples(split, (A, B, B), deg_max, sample):
        gen = {(1, a, p, q): s for (p, q), s in sigma(v, y).items()}
        if pre_ex_vector(split, pre_ass(split, gen)) != gen:
            return Check("step3_rho", False, format_chain((a, v, y)))
    # blockwise dimension shadow: Omega(C) = Omega(A)⊗B ⊕ A⊗Omega(B)
    k = A + B
    for N in degrees_up_to(k, deg_max):
        lhs = omega_block(N, k).dim
        rhs = omega_block(N[:A], A).dim * _poly_dim(N[A:]) + _poly_dim(N[:A]) * omega_block(N[A:], B).dim
        if lhs != rhs:
            return Check("step3_rho", False, f"Omega dims at {list(N)}: {lhs} vs {rhs}")
    return Check("step3_rho", True)


def _poly_dim(N) -> int:
    """Dimension of a polynomial ring's degree-N block (always 1 for monomials)."""
    return 1 if all(x >= 0 for x in N) else 0
