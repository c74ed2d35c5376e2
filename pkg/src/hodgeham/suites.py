"""Named verification suites.  Each suite expands into independent tasks
(module-level callables returning lists of checks) so they can be farmed out
to worker processes and merged back in task order."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from . import harrison, hochschild, kaehler
from .monomial import REGULAR, ChainVector, ModuleKind, format_chain
from .report import Check, check_from_witness
from .symgroup import (
    GroupAlgebraElement,
    antisymmetrizer,
    eigenvalue,
    eulerian_idempotent,
    ga_mul,
    total_shuffle,
    transposition,
)


@dataclass
class SuiteConfig:
    k: int | None = None
    n_max: int | None = None
    deg_max: int | None = None
    module: str = "regular"
    p: int = 0
    jobs: int = 1


DEFAULTS = {
    "idempotents": dict(n_max=6),
    "chainmap": dict(k=2, n_max=5, deg_max=4),
    "appendix": dict(deg_max=40),
    "qkernel": dict(deg_max=40),
    "harrison-exact": dict(k=1, n_max=4, deg_max=8),
    "kunneth-omega": dict(k=2, deg_max=8),
    "kunneth-harrison": dict(k=2, n_max=2, deg_max=6),
    "hh1-iso": dict(k=2, deg_max=8),
    "i-squared": dict(k=2, deg_max=6),
    "deriv-growth": dict(n_max=40),
}

SUITES = tuple(DEFAULTS)


# ---------------------------------------------------------------------------
# task bodies (module level so worker processes can unpickle them)


def idempotent_checks(n: int) -> list[Check]:
    name = f"idempotents_n{n}"
    e = [None] + [eulerian_idempotent(n, i) for i in range(1, n + 2)]
    one = GroupAlgebraElement.one(n)
    s = total_shuffle(n)
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            prod = ga_mul(e[i], e[j])
            if prod != (e[i] if i == j else GroupAlgebraElement.zero(n)):
                return [Check(name, False, f"e_{n}^({i}) * e_{n}^({j})")]
        if ga_mul(s, e[i]) != e[i].scale(eigenvalue(i)):
            return [Check(name, False, f"s_{n} * e_{n}^({i})")]
    total = GroupAlgebraElement.zero(n)
    for i in range(1, n + 1):
        total = total + e[i]
    if total != one:
        return [Check(name, False, f"sum of e_{n}^(i)")]
    if e[n + 1]:
        return [Check(name, False, f"e_{n}^({n + 1})")]
    if e[n] != antisymmetrizer(n):
        return [Check(name, False, f"e_{n}^({n}) vs antisymmetrizer")]
    if n == 2:
        sym = (one + GroupAlgebraElement(2, {transposition(2, 1, 2): 1})).scale(Fraction(1, 2))
        if e[1] != sym:
            return [Check(name, False, "e_2^(1) vs symmetrizer")]
    return [Check(name, True)]


def chainmap_checks(k: int, n_max: int, N: tuple, module: ModuleKind) -> list[Check]:
    """Chain-map law, d∘d = 0 and degree preservation on one degree block."""
    tag = f"N{list(N)}"
    cm = dd = deg = None
    for n in range(0, n_max + 1):
        cm = cm or hochschild.chain_map_witness(n, N, module)
        dd = dd or hochschild.d_squared_witness(n + 1, N, module)
        deg = deg or hochschild.degree_preservation_witness(n, N, module)
    return [
        check_from_witness(f"chain_map_{tag}", cm),
        check_from_witness(f"d_squared_zero_{tag}", dd),
        check_from_witness(f"degree_preservation_{tag}", deg),
    ]


def mixed_chain(n: int, k: int, deg_max: int, module: ModuleKind = REGULAR) -> ChainVector:
    """A fixed chain mixing every block with |N| <= deg_max, distinct coefficients."""
    terms = {}
    c = 0
    for N in hochschild.degrees_up_to(k, deg_max):
        for ch in hochschild.chain_basis(n, N, module):
            c += 1
            terms[ch] = Fraction(c, 1 + c % 7)
    return ChainVector(n, k, module, terms)


def projection_checks(k: int, n_max: int, deg_max: int, module: ModuleKind) -> list[Check]:
    """pi^N and P^m commute with d and with every Hodge projection."""
    w_deg = w_trunc = None
    for n in range(1, n_max + 1):
        x = mixed_chain(n, k, deg_max, module)
        dx = hochschild.boundary(x)
        ex = {i: hochschild.bgs_project(i, x) for i in range(1, n + 2)}
        for N in hochschild.degrees_up_to(k, deg_max):
            px = hochschild.degree_project(N, x)
            if w_deg is None and hochschild.degree_project(N, dx) != hochschild.boundary(px):
                w_deg = f"{_head(x)} (n={n}, N={list(N)}, boundary)"
            for i, exi in ex.items():
                if w_deg is None and hochschild.degree_project(N, exi) != hochschild.bgs_project(i, px):
                    w_deg = f"{_head(x)} (n={n}, N={list(N)}, i={i})"
        for m in range(0, deg_max + 1):
            tx = hochschild.truncation_project(m, x)
            if w_trunc is None and hochschild.truncation_project(m, dx) != hochschild.boundary(tx):
                w_trunc = f"{_head(x)} (n={n}, m={m}, boundary)"
            for i, exi in ex.items():
                if w_trunc is None and hochschild.truncation_project(m, exi) != hochschild.bgs_project(i, tx):
                    w_trunc = f"{_head(x)} (n={n}, m={m}, i={i})"
    return [
        check_from_witness("degree_projection_commutes", w_deg),
        check_from_witness("truncation_projection_commutes", w_trunc),
    ]


def _head(x: ChainVector) -> str:
    return format_chain(min(x.terms)) if x.terms else "0"


def appendix_checks(deg_max: int) -> list[Check]:
    out = []
    for tie in harrison.TIES:
        prefix = "appendix" if tie == "low" else "appendix_high_tie"
        out.extend(r.as_check(prefix) for r in harrison.verify_appendix_splitting(deg_max, tie))
    return out


def qkernel_checks(N: int) -> list[Check]:
    return [harrison.kernel_image_check(N)]


def harrison_exact_checks(k: int, n_max: int, N: tuple, module: ModuleKind) -> list[Check]:
    out = harrison.harrison_exactness_block(n_max, N, module)
    if k == 1 and module.kind != "var":
        out.append(harrison.one_variable_vanishing(n_max, N, module))
    if k == 1 and module.kind == "regular":
        h = harrison.block_homotopy(N, n_max, module)
        out.append(check_from_witness(f"homotopy_N{list(N)}", harrison.verify_homotopy(h)))
    return out


def kunneth_omega_checks(k: int, N: tuple) -> list[Check]:
    return [kaehler.omega_kunneth_dims(k, N)]


def tensor_claim_checks(deg_max: int) -> list[Check]:
    split = kaehler.TensorSplit(1, 1)
    sample = (deg_max + 2, 40, 2024)
    return [
        kaehler.verify_claim1(split, deg_max, sample),
        kaehler.verify_claim2(split, deg_max, sample),
        kaehler.verify_step3(split, deg_max, sample),
    ]


def kunneth_harrison_checks(n: int, N: tuple, k: int) -> list[Check]:
    return [harrison.harrison_kunneth_check(n, N, k)]


def hh1_checks(k: int, N: tuple) -> list[Check]:
    return [kaehler.verify_hh1_iso(N, k)]


def i_squared_checks(k: int, N: tuple) -> list[Check]:
    return [kaehler.i_squared_check(N, k)]


def deriv_growth_checks(p: int, n_max: int) -> list[Check]:
    norms = [hochschild.derivation_block_norm(p, N) for N in range(1, n_max + 1)]
    bad = next((N for N, v in enumerate(norms, 1) if v != N), None)
    increasing = all(a < b for a, b in zip(norms, norms[1:]))
    detail = "norms: " + " ".join(str(v) for v in norms)
    witness = None
    if bad is not None:
        witness = f"z^[{bad}]"
    elif not increasing:
        witness = "sequence not strictly increasing"
    return [Check(f"deriv_growth_p{p}", witness is None, witness, detail)]


# ---------------------------------------------------------------------------


def resolved_config(name: str, cfg: SuiteConfig) -> SuiteConfig:
    d = DEFAULTS[name]
    return SuiteConfig(
        k=cfg.k if cfg.k is not None else d.get("k", 1),
        n_max=cfg.n_max if cfg.n_max is not None else d.get("n_max", 1),
        deg_max=cfg.deg_max if cfg.deg_max is not None else d.get("deg_max", 0),
        module=cfg.module,
        p=cfg.p,
        jobs=cfg.jobs,
    )


def suite_tasks(name: str, cfg: SuiteConfig) -> list[tuple]:
    """Expand a suite into ``(callable, args)`` tasks, in report order."""
    if name not in DEFAULTS:
        raise KeyError(name)
    c = resolved_config(name, cfg)
    k, n_max, deg_max = c.k, c.n_max, c.deg_max
    module = ModuleKind.parse(c.module, k)
    degrees = hochschild.degrees_up_to(k, deg_max)
    if name == "idempotents":
        return [(idempotent_checks, (n,)) for n in range(1, n_max + 1)]
    if name == "chainmap":
        return [(chainmap_checks, (k, n_max, N, module)) for N in degrees] + [
            (projection_checks, (k, n_max, deg_max, module))
        ]
    if name == "appendix":
        return [(appendix_checks, (deg_max,))]
    if name == "qkernel":
        return [(qkernel_checks, (N,)) for N in range(0, deg_max + 1)]
    if name == "harrison-exact":
        return [(harrison_exact_checks, (k, n_max, N, module)) for N in degrees]
    if name == "kunneth-omega":
        return [(kunneth_omega_checks, (k, N)) for N in degrees] + [(tensor_claim_checks, (min(deg_max, 4),))]
    if name == "kunneth-harrison":
        return [(kunneth_harrison_checks, (n, N, k)) for n in range(1, n_max + 1) for N in degrees]
    if name == "hh1-iso":
        return [(hh1_checks, (k, N)) for N in degrees]
    if name == "i-squared":
        return [(i_squared_checks, (k, N)) for N in degrees]
    if name == "deriv-growth":
        return [(deriv_growth_checks, (c.p, n_max))]
    raise AssertionError(name)


def _call(task):
    fn, args = task
    return fn(*args)


def run_tasks(tasks: list[tuple], jobs: int = 1) -> list[Check]:
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_call, tasks))
    else:
        results = [_call(t) for t in tasks]
    return [c for checks in results for c in checks]


def run_suite(name: str, cfg: SuiteConfig | None = None) -> list[Check]:
    cfg = cfg or SuiteConfig()
    return run_tasks(suite_tasks(name, cfg), cfg.jobs)


def suite_algebra(name: str, cfg: SuiteConfig) -> tuple[int, str]:
    c = resolved_config(name, cfg)
    return c.k, c.module
