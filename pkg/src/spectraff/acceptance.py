"""The acceptance grid: thirteen certified checks over the full desk-scale
parameter ranges, one pass/fail line each.

Two of the exact matrix identities are asserted in corrected form. The
common-neighbor case analysis forces the dependence term of the product
identity to carry the weight q^(d-2) (the unit-weight variant already fails
at q = 3, d = 3), and likewise q^(d-1) for the shared-coordinate term of
the sum-product identity; the matching squared-eigenvalue bounds become
2(q^(d-1) - q^(d-2)) and 2(q^d - q^(d-1)). At d = 2, resp. d = 1, these
reduce exactly to the classical displays. The run notes record this.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

import numpy as np

from .config import DEFAULT_SEED, SPECTRAL_TOL
from .counting import kt_color_coverage
from .experiments import (
    coverage_by_pattern_scan,
    double_counting_suite,
    mixing_grid,
    mixing_suite,
    pinned_experiment,
    sumproduct_experiment,
)
from .families import (
    FamilySpec,
    claimed_parameters,
    colored_family,
    euclidean_graph,
    noneuclidean_scheme,
    norm_graph,
    product_graph,
    sumproduct_graph,
)
from .fields import build_ext, field_from_order
from .forms import decode_vector, encode_vector
from .graphs import Graph, certify_ndl, check_square_identity, spectrum

NORM_GRID = [(3, 2), (3, 3), (5, 2), (9, 2)]
PRODUCT_GRID = [(q, d) for q in (3, 5, 7) for d in (2, 3)]
SUMPRODUCT_GRID = [(q, d) for q in (3, 5, 7) for d in (1, 2)]
EUCLIDEAN_GRID = [
    (q, d, form) for q in (3, 5, 7, 9, 11, 13) for d in (2, 3) for form in ("dot", "offdiag")
]
NONEUCLIDEAN_GRID = [(q, d) for q in (5, 7, 9) for d in (3, 4)]
SUMPRODUCT_INEQ_GRID = [(q, d) for q in (11, 101) for d in (2, 3)]

MIXING_PAIRS = 200
DOUBLE_COUNT_PAIRS = 50


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str
    rows: list = field(default_factory=list)
    notes: list = field(default_factory=list)
    elapsed: float = 0.0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"ACCEPTANCE {self.number:02d} {self.name}: {status} ({self.detail}; {self.elapsed:.1f}s)"


@dataclass
class AcceptanceResult:
    criteria: list

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.criteria)

    def summary(self) -> dict:
        return {
            "ok": self.ok,
            "criteria": [
                {
                    "number": c.number,
                    "name": c.name,
                    "passed": c.passed,
                    "detail": c.detail,
                    "notes": c.notes,
                    "elapsed_s": round(c.elapsed, 2),
                }
                for c in self.criteria
            ],
        }


def _map(fn: Callable, items, jobs: int):
    if jobs <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


def _timed(number: int, name: str, fn: Callable[[], CriterionResult]) -> CriterionResult:
    start = time.time()
    result = fn()
    result.number = number
    result.name = name
    result.elapsed = time.time() - start
    return result


# ---------------------------------------------------------------------------
# criterion bodies
# ---------------------------------------------------------------------------

def _crit_fiber_law() -> CriterionResult:
    rows = []
    ok = True
    for q, n in NORM_GRID:
        base = field_from_order(q)
        ext = build_ext(base.p, base.r, n)
        tab = ext.norm_enc_table()
        expected = (q ** n - 1) // (q - 1)
        counts = np.bincount(tab, minlength=q)
        good = counts[0] == 1 and (counts[1:] == expected).all()
        ok = ok and bool(good)
        rows.append({
            "check": "fiber-law", "q": q, "n": n,
            "expected": expected, "observed": int(counts[1:].max()),
            "satisfied": bool(good),
        })
    return CriterionResult(0, "", ok, f"{len(rows)} fields, fibers exact", rows)


def _norm_point(args):
    q, n, lam_enc, seed = args
    base = field_from_order(q)
    lam = base.decode(lam_enc)
    g = norm_graph(q, n, lam)
    spec = FamilySpec(family="norm", q=q, n=n, lam=lam.literal())
    claims = claimed_parameters(spec)
    cert = certify_ndl(g, claims.degree, claims.lambda_claim, claims.lambda_sq)
    mix = mixing_suite(g, cert, MIXING_PAIRS, seed) if cert.satisfied else None
    return {
        "q": q, "n": n, "lambda": lam.literal(),
        "cert": cert, "spectrum": np.sort(spectrum(g)),
        "mix_ok": mix.ok if mix else False,
        "mix_rows": mix.rows if mix else [],
    }


def _crit_norm_certificates(seed: int, jobs: int):
    points = [(q, n, lam_enc, seed) for q, n in NORM_GRID
              for lam_enc in range(1, q)]
    results = _map(_norm_point, points, jobs)

    cert_rows = [r["cert"].row() for r in results]
    certs_ok = all(r["cert"].satisfied for r in results)
    crit2 = CriterionResult(0, "", certs_ok,
                            f"{len(results)} norm graphs certified", cert_rows)

    spectra_ok = True
    for q, n in NORM_GRID:
        group = [r["spectrum"] for r in results if (r["q"], r["n"]) == (q, n)]
        for other in group[1:]:
            if not np.allclose(group[0], other, atol=SPECTRAL_TOL):
                spectra_ok = False
    crit3 = CriterionResult(0, "", spectra_ok,
                            "spectra agree across lambda (tol 1e-6)")

    mixing = [(r["mix_ok"], r["mix_rows"]) for r in results]
    return crit2, crit3, mixing


def _dependence_graph(q: int, d: int) -> Graph:
    """Distinct nonzero vectors that are scalar multiples of each other."""
    ctx = field_from_order(q)
    size = ctx.q ** d - 1
    adj = np.zeros((size, size), dtype=np.uint8)
    for i in range(size):
        v = decode_vector(ctx, d, i + 1)
        for a_enc in range(2, ctx.q):
            alpha = ctx.decode(a_enc)
            j = encode_vector(ctx, tuple(alpha * x for x in v)) - 1
            adj[i, j] = 1
    return Graph(adj)


def _squared_tail(g: Graph) -> np.ndarray:
    eig = spectrum(g)
    return eig[1:] ** 2


def _product_point(args):
    q, d, lam_enc, seed = args
    ctx = field_from_order(q)
    lam = ctx.decode(lam_enc)
    g = product_graph(q, d, None, lam)
    spec = FamilySpec(family="product", q=q, d=d, lam=lam.literal())
    claims = claimed_parameters(spec)
    cert = certify_ndl(g, claims.degree, claims.lambda_claim, claims.lambda_sq)
    tail_sq = _squared_tail(g)
    theta_bound = 2 * (q ** (d - 1) - q ** (d - 2))
    theta_ok = bool((tail_sq <= theta_bound + SPECTRAL_TOL).all())
    ident = check_square_identity(
        g, q ** (d - 2), q ** (d - 1) - q ** (d - 2), _dependence_graph(q, d),
        c_e=q ** (d - 2),
    )
    mix = mixing_suite(g, cert, MIXING_PAIRS, seed) if cert.satisfied else None
    return {
        "row": {
            "family": "product", "q": q, "d": d, "lambda": lam.literal(),
            "regular": cert.regular, "cert_ok": cert.satisfied,
            "theta_sq_max": float(tail_sq.max()), "theta_sq_bound": theta_bound,
            "theta_ok": theta_ok, "identity_ok": ident.holds,
            "satisfied": cert.satisfied and theta_ok and ident.holds,
        },
        "ok": cert.satisfied and theta_ok and ident.holds,
        "mix_ok": mix.ok if mix else False,
        "mix_rows": mix.rows if mix else [],
    }


def _crit_product(seed: int, jobs: int):
    points = [(q, d, lam_enc, seed) for q, d in PRODUCT_GRID for lam_enc in range(1, q)]
    results = _map(_product_point, points, jobs)
    ok = all(r["ok"] for r in results)
    crit = CriterionResult(
        0, "", ok, f"{len(results)} product graphs: certificates, "
        "squared-spectrum bound, exact A^2 identity",
        [r["row"] for r in results],
        notes=[
            "dependence term of the A^2 identity carries weight q^(d-2); "
            "the squared-spectrum bound asserted is 2(q^(d-1) - q^(d-2)), "
            "which equals the classical display at d = 2",
        ],
    )
    return crit, [(r["mix_ok"], r["mix_rows"]) for r in results]


def _same_bpart_graph(q: int, d: int) -> Graph:
    """Pairs sharing the vector coordinate but differing in the scalar."""
    nb = q ** d
    size = q * nb
    adj = np.zeros((size, size), dtype=np.uint8)
    for b in range(nb):
        blk = slice(b * q, (b + 1) * q)
        adj[blk, blk] = 1
    np.fill_diagonal(adj, 0)
    return Graph(adj)


def _sumproduct_point(args):
    q, d, lam_enc, seed = args
    ctx = field_from_order(q)
    lam = ctx.decode(lam_enc)
    g = sumproduct_graph(q, d, None, lam)
    spec = FamilySpec(family="sumproduct", q=q, d=d, lam=lam.literal())
    claims = claimed_parameters(spec)
    cert = certify_ndl(g, claims.degree, claims.lambda_claim, claims.lambda_sq)
    tail_sq = _squared_tail(g)
    theta_bound = 2 * (q ** d - q ** (d - 1))
    # strict inequality on integer-valued squares
    rounded = np.rint(tail_sq)
    near_int = bool((np.abs(tail_sq - rounded) <= 1e-5).all())
    theta_ok = near_int and bool((rounded < theta_bound).all())
    ident = check_square_identity(
        g, q ** (d - 1), q ** d - q ** (d - 1), _same_bpart_graph(q, d),
        c_e=q ** (d - 1),
    )
    mix = mixing_suite(g, cert, MIXING_PAIRS, seed) if cert.satisfied else None
    return {
        "row": {
            "family": "sumproduct", "q": q, "d": d, "lambda": lam.literal(),
            "regular": cert.regular, "cert_ok": cert.satisfied,
            "theta_sq_max": float(tail_sq.max()), "theta_sq_bound": theta_bound,
            "theta_ok": theta_ok, "identity_ok": ident.holds,
            "satisfied": cert.satisfied and theta_ok and ident.holds,
        },
        "ok": cert.satisfied and theta_ok and ident.holds,
        "mix_ok": mix.ok if mix else False,
        "mix_rows": mix.rows if mix else [],
    }


def _crit_sumproduct(seed: int, jobs: int):
    points = [(q, d, lam_enc, seed) for q, d in SUMPRODUCT_GRID for lam_enc in (0, 1)]
    results = _map(_sumproduct_point, points, jobs)
    ok = all(r["ok"] for r in results)
    crit = CriterionResult(
        0, "", ok, f"{len(results)} sum-product graphs: certificates, strict "
        "squared-spectrum bound, exact A^2 identity",
        [r["row"] for r in results],
        notes=[
            "shared-coordinate term of the A^2 identity carries weight "
            "q^(d-1); the strict bound asserted is theta^2 < 2(q^d - "
            "q^(d-1)), equal to the classical display at d = 1",
        ],
    )
    return crit, [(r["mix_ok"], r["mix_rows"]) for r in results]


def _euclidean_point(args):
    q, d, form, lam_enc, seed = args
    ctx = field_from_order(q)
    lam = ctx.decode(lam_enc)
    g = euclidean_graph(q, d, form, lam)
    spec = FamilySpec(family="euclidean", q=q, d=d, form=form, lam=lam.literal())
    claims = claimed_parameters(spec)
    cert = certify_ndl(g, claims.degree, claims.lambda_claim, claims.lambda_sq)
    mix = mixing_suite(g, cert, MIXING_PAIRS, seed) if cert.satisfied else None
    return {
        "row": cert.row(),
        "ok": cert.satisfied,
        "mix_ok": mix.ok if mix else False,
        "mix_rows": mix.rows if mix else [],
    }


def _crit_euclidean(seed: int, jobs: int):
    points = [
        (q, d, form, lam_enc, seed)
        for q, d, form in EUCLIDEAN_GRID
        for lam_enc in range(1, q)
    ]
    results = _map(_euclidean_point, points, jobs)
    ok = all(r["ok"] for r in results)
    # frozen hand-check instance
    inst = euclidean_graph(3, 2, "dot", 1)
    expected = np.array([-2.0] * 4 + [1.0] * 4 + [4.0])
    inst_ok = bool(np.allclose(np.sort(spectrum(inst)), expected, atol=SPECTRAL_TOL))
    crit = CriterionResult(
        0, "", ok and inst_ok,
        f"{len(results)} Euclidean graphs certified; hand-check spectrum "
        f"{'matches' if inst_ok else 'differs'}",
        [r["row"] for r in results],
    )
    return crit, [(r["mix_ok"], r["mix_rows"]) for r in results]


def _noneuclidean_point(args):
    q, d, seed = args
    cg = noneuclidean_scheme(q, d)
    bound = 2.5 * q ** ((d - 2) / 2)
    bound_sq = Fraction(25, 4) * q ** (d - 2)
    out = []
    for color in cg.colors():
        g = cg.color_class(color)
        degs = g.degrees()
        regular = bool((degs == degs[0]).all())
        cert = certify_ndl(g, int(degs[0]), bound, bound_sq)
        mix = mixing_suite(g, cert, MIXING_PAIRS, seed) if cert.satisfied else None
        out.append({
            "row": {
                "family": "noneuclidean", "q": q, "d": d, "relation": color,
                "n_omega": g.n_vertices, "valency": int(degs[0]),
                "regular": regular,
                "lambda_measured": cert.lambda_measured,
                "lambda_bound": float(bound),
                "satisfied": cert.satisfied,
            },
            "ok": cert.satisfied and regular,
            "mix_ok": mix.ok if mix else False,
            "mix_rows": mix.rows if mix else [],
        })
    return out


def _crit_noneuclidean(seed: int, jobs: int):
    grouped = _map(_noneuclidean_point, [(q, d, seed) for q, d in NONEUCLIDEAN_GRID], jobs)
    results = [r for group in grouped for r in group]
    ok = all(r["ok"] for r in results)
    crit = CriterionResult(
        0, "", ok,
        f"{len(results)} relation classes within 2.5 q^((d-2)/2)",
        [r["row"] for r in results],
        notes=["eigenvalue slack factor 2.5 in place of the asymptotic 2 + o(1)"],
    )
    return crit, [(r["mix_ok"], r["mix_rows"]) for r in results]


def _crit_mixing(mixing_bundles) -> CriterionResult:
    ok = True
    graphs = 0
    violations = 0
    summary_rows = []
    for mix_ok, rows in mixing_bundles:
        graphs += 1
        ok = ok and mix_ok
        bad = sum(
            1
            for row in rows
            if not (row["mixing_ok"] and row["variance_ok"] and row["path2_ok"])
        )
        violations += bad
        # one summary row per graph; the per-pair rows are bulky
        if rows:
            summary_rows.append({
                "family": rows[0]["family"],
                "params": rows[0]["params"],
                "pairs": len(rows),
                "violations": bad,
                "satisfied": bad == 0,
            })
    ok = ok and violations == 0
    return CriterionResult(
        0, "", ok,
        f"{graphs} certified graphs x {MIXING_PAIRS} subset pairs, "
        f"{violations} violations",
        summary_rows,
    )


def _representative_graphs():
    cg = noneuclidean_scheme(7, 3)
    return [
        norm_graph(5, 2, 1),
        product_graph(5, 2, None, 1),
        sumproduct_graph(5, 1, None, 1),
        euclidean_graph(5, 2, "dot", 1),
        cg.color_class(cg.colors()[0]),
    ]


def _crit_double_counting(seed: int, jobs: int) -> CriterionResult:
    reports = _map(
        lambda g: double_counting_suite(g, DOUBLE_COUNT_PAIRS, seed),
        _representative_graphs(), jobs,
    )
    ok = all(rep.ok for rep in reports)
    rows = [row for rep in reports for row in rep.rows]
    return CriterionResult(
        0, "", ok,
        f"{len(reports)} families x {DOUBLE_COUNT_PAIRS} pairs x 9 (s,t) combos",
        rows,
    )


def _crit_pinned(seed: int) -> CriterionResult:
    runs = [
        ("euclidean", dict(q=5, size=25, d=2)),
        ("euclidean", dict(q=7, size=20, d=2)),
        ("product", dict(q=5, size=15, d=2)),
        ("norm", dict(q=5, size=12, n=2, size_b=10)),
        ("sumproduct", dict(q=3, size=8, d=1)),
        ("noneuclidean", dict(q=7, size=10, d=3)),
    ]
    rows = []
    ok = True
    for family, kwargs in runs:
        rep = pinned_experiment(family, seed=seed, **kwargs)
        ok = ok and rep.ok and rep.summary["cauchy_schwarz_ok"]
        rows.extend(rep.rows)
    return CriterionResult(0, "", ok, f"{len(runs)} pinned runs, Cauchy-Schwarz exact", rows)


def _crit_coverage_oracle() -> CriterionResult:
    rows = []
    ok = True
    for family, kwargs in [("euclidean", dict(d=2)), ("product", dict(d=2))]:
        cg = colored_family(family, 5, **kwargs)
        universe = list(range(cg.n_vertices))
        direct = kt_color_coverage(cg, universe, 3)
        rescan = coverage_by_pattern_scan(cg, universe, 3)
        ok = ok and direct == rescan
        rows.append({
            "family": family, "q": 5, "t": 3,
            "observed": direct, "expected": rescan,
            "satisfied": direct == rescan,
        })
    return CriterionResult(0, "", ok, "two colored families, two loop orders agree", rows)


def _crit_sumproduct_inequality(seed: int, jobs: int) -> CriterionResult:
    reports = _map(
        lambda qd: sumproduct_experiment(qd[0], qd[1], trials=100, seed=seed),
        SUMPRODUCT_INEQ_GRID, jobs,
    )
    ok = all(rep.ok for rep in reports)
    rows = [row for rep in reports for row in rep.rows]
    return CriterionResult(
        0, "", ok, f"{len(rows)} random sets, inequality exact in integers", rows,
    )


def _crit_falsifiability(seed: int) -> CriterionResult:
    spec = FamilySpec(family="norm", q=3, n=2, lam="1")
    rep = mixing_grid([spec], pairs=5, seed=seed, lambda_scale=0.5)
    lib_ok = not rep.ok

    from .cli import main as cli_main

    code_bad = cli_main([
        "certify", "--family", "norm", "--q", "3", "--n", "2",
        "--lambda", "1", "--lambda-claim", "1.5", "--quiet",
    ])
    code_good = cli_main([
        "certify", "--family", "norm", "--q", "3", "--n", "2",
        "--lambda", "1", "--quiet",
    ])
    ok = lib_ok and code_bad == 1 and code_good == 0
    detail = (
        f"halved claim: grid {'fails' if lib_ok else 'passes!'}, "
        f"cli exit {code_bad}; honest claim exit {code_good}"
    )
    return CriterionResult(0, "", ok, detail)


# ---------------------------------------------------------------------------
# the runner
# ---------------------------------------------------------------------------

CRITERION_NAMES = {
    1: "norm fiber law",
    2: "norm graph certificates",
    3: "norm spectra coincide",
    4: "product graphs",
    5: "sum-product graphs",
    6: "euclidean graphs",
    7: "non-euclidean relation classes",
    8: "mixing suite",
    9: "double counting",
    10: "pinned Cauchy-Schwarz",
    11: "coverage oracle equivalence",
    12: "sum-product inequality",
    13: "falsifiability",
}


def run_acceptance(seed: int = DEFAULT_SEED, jobs: int = 1,
                   echo: Optional[Callable[[str], None]] = None) -> AcceptanceResult:
    emit = echo or (lambda line: None)
    criteria: list[CriterionResult] = []

    def push(number: int, result: CriterionResult):
        result.number = number
        result.name = CRITERION_NAMES[number]
        criteria.append(result)
        emit(result.line())

    start = time.time()
    c1 = _crit_fiber_law()
    c1.elapsed = time.time() - start
    push(1, c1)

    start = time.time()
    c2, c3, mix_norm = _crit_norm_certificates(seed, jobs)
    c2.elapsed = c3.elapsed = time.time() - start
    push(2, c2)
    push(3, c3)

    start = time.time()
    c4, mix_prod = _crit_product(seed, jobs)
    c4.elapsed = time.time() - start
    push(4, c4)

    start = time.time()
    c5, mix_sp = _crit_sumproduct(seed, jobs)
    c5.elapsed = time.time() - start
    push(5, c5)

    start = time.time()
    c6, mix_euc = _crit_euclidean(seed, jobs)
    c6.elapsed = time.time() - start
    push(6, c6)

    start = time.time()
    c7, mix_noneuc = _crit_noneuclidean(seed, jobs)
    c7.elapsed = time.time() - start
    push(7, c7)

    start = time.time()
    c8 = _crit_mixing(mix_norm + mix_prod + mix_sp + mix_euc + mix_noneuc)
    c8.elapsed = time.time() - start
    push(8, c8)

    start = time.time()
    c9 = _crit_double_counting(seed, jobs)
    c9.elapsed = time.time() - start
    push(9, c9)

    start = time.time()
    c10 = _crit_pinned(seed)
    c10.elapsed = time.time() - start
    push(10, c10)

    start = time.time()
    c11 = _crit_coverage_oracle()
    c11.elapsed = time.time() - start
    push(11, c11)

    start = time.time()
    c12 = _crit_sumproduct_inequality(seed, jobs)
    c12.elapsed = time.time() - start
    push(12, c12)

    start = time.time()
    c13 = _crit_falsifiability(seed)
    c13.elapsed = time.time() - start
    push(13, c13)

    return AcceptanceResult(criteria)


def write_outputs(result: AcceptanceResult, out_dir: str) -> None:
    import os

    from .report import write_json, write_rows

    os.makedirs(out_dir, exist_ok=True)
    write_json(os.path.join(out_dir, "acceptance-summary.json"), result.summary())
    for crit in result.criteria:
        if crit.rows:
            name = f"criterion-{crit.number:02d}.csv"
            write_rows(os.path.join(out_dir, name), crit.rows,
                       header_comment=f"criterion {crit.number}: {crit.name}")
