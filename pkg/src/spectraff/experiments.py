"""End-to-end experiments: brute-force solvability counts, coverage and
pinned-set sampling, the sum-product inequality, and the mixing grid.

Everything asymptotic is reported, never asserted; the hard assertions are
the exact ones (mixing bounds, Cauchy-Schwarz chains, the sum-product
inequality, integer identities). Every sampled row records the seed that
reproduces it.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .config import DEFAULT_SEED, TUPLE_BUDGET, CapExceeded
from .counting import (
    colored_star_indicator,
    kst_sum,
    kt_color_coverage,
    pinned_set,
)
from .families import (
    FamilySpec,
    _ext_for,
    _pairwise_bilinear_enc,
    _bilinear_for,
    _quadratic_for,
    build_colored,
    build_graph,
    claimed_parameters,
)
from .fields import enc_add, enc_sub, field_from_order, parse_fq_literal
from .graphs import ColoredGraph, certify_ndl


def derived_rng(seed: int, *key: int) -> np.random.Generator:
    """Per-trial generator: deterministic function of the run seed and key."""
    return np.random.default_rng(np.random.SeedSequence([int(seed), *map(int, key)]))


def sample_subset(rng: np.random.Generator, universe: int, size: int) -> np.ndarray:
    if size > universe:
        raise ValueError(f"subset of size {size} from a universe of {universe}")
    return np.sort(rng.choice(universe, size=size, replace=False))


@dataclass
class ExperimentReport:
    name: str
    rows: list = dc_field(default_factory=list)
    summary: dict = dc_field(default_factory=dict)
    hard_failures: list = dc_field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.hard_failures

    def fail(self, message: str):
        self.hard_failures.append(message)


# ---------------------------------------------------------------------------
# systems of equations, counted exhaustively
# ---------------------------------------------------------------------------

SYSTEM_KINDS = ("norm", "bilinear", "quadratic", "sumproduct")


@dataclass
class SystemSpec:
    """A system of pairwise equations over t variables from one set.

    lambdas maps 1-based pairs (i, j), i < j, to a field element, or to None
    for a free slot (coverage mode). Missing pairs are free too.
    """

    kind: str
    t: int
    q: int
    lambdas: dict
    n: Optional[int] = None
    d: Optional[int] = None
    form: object = None

    def __post_init__(self):
        if self.kind not in SYSTEM_KINDS:
            raise ValueError(f"unknown system kind {self.kind!r}")
        if not 2 <= self.t <= 4:
            raise ValueError("t must be between 2 and 4")
        if self.kind == "norm" and not self.n:
            raise ValueError("norm systems need the extension degree n")
        if self.kind != "norm" and not self.d:
            raise ValueError(f"{self.kind} systems need the dimension d")
        ctx = field_from_order(self.q)
        fixed = {}
        for (i, j), lam in self.lambdas.items():
            if not (1 <= i < j <= self.t):
                raise ValueError(f"bad equation slot ({i},{j})")
            if lam is None or lam == "free":
                fixed[(i, j)] = None
            else:
                fixed[(i, j)] = lam if hasattr(lam, "encoding") else parse_fq_literal(ctx, lam)
        self.lambdas = fixed

    @classmethod
    def from_json(cls, data: dict) -> "SystemSpec":
        lambdas = {}
        for key, value in data.get("lambdas", {}).items():
            i, j = (int(x) for x in str(key).split(","))
            lambdas[(i, j)] = None if value in (None, "free") else value
        return cls(
            kind=data["kind"],
            t=int(data["t"]),
            q=int(data["q"]),
            lambdas=lambdas,
            n=data.get("n"),
            d=data.get("d"),
            form=data.get("form"),
        )


def system_universe_size(spec: SystemSpec) -> int:
    if spec.kind == "norm":
        return spec.q ** spec.n
    if spec.kind == "sumproduct":
        return spec.q ** (spec.d + 1)
    return spec.q ** spec.d


def system_value_matrix(spec: SystemSpec, encs: Sequence[int]) -> np.ndarray:
    """Pairwise value encodings val(x, y) for the system's defining map."""
    encs = np.asarray(list(encs), dtype=np.int64)
    m = len(encs)
    ctx = field_from_order(spec.q)
    if spec.kind == "norm":
        ext = _ext_for(spec.q, spec.n)
        tab = ext.norm_enc_table()
        width = ctx.r * spec.n
        out = np.empty((m, m), dtype=np.int64)
        for i in range(m):
            out[i] = tab[enc_add(ctx.p, width, int(encs[i]), encs)]
        return out
    if spec.kind == "bilinear":
        b_form = _bilinear_for(spec.q, spec.d, spec.form)
        return _pairwise_bilinear_enc(b_form, encs)
    if spec.kind == "quadratic":
        q_form = _quadratic_for(spec.q, spec.d, spec.form)
        tab = q_form.value_table()
        width = ctx.r * spec.d
        out = np.empty((m, m), dtype=np.int64)
        for i in range(m):
            out[i] = tab[enc_sub(ctx.p, width, int(encs[i]), encs)]
        return out
    # sumproduct: val((a,b),(c,e)) = B(b,e) - a - c
    a_enc = encs % spec.q
    b_enc = encs // spec.q
    b_form = _bilinear_for(spec.q, spec.d, spec.form)
    bv = _pairwise_bilinear_enc(b_form, np.unique(b_enc))
    b_pos = {int(e): k for k, e in enumerate(np.unique(b_enc))}
    idx = np.array([b_pos[int(e)] for e in b_enc], dtype=np.int64)
    pair_b = bv[np.ix_(idx, idx)]
    asum = enc_add(ctx.p, ctx.r, a_enc[:, None], a_enc[None, :])
    return enc_sub(ctx.p, ctx.r, pair_b, asum)


def solve_count(spec: SystemSpec, e_set: Sequence[int]) -> int:
    """Exact number of ordered t-tuples from E satisfying every fixed
    equation (repeated vertices allowed, as in the tuple convention)."""
    encs = list(e_set)
    m = len(encs)
    if m == 0:
        return 0
    if m ** spec.t > TUPLE_BUDGET:
        raise CapExceeded("tuple budget exceeded in solve_count")
    values = system_value_matrix(spec, encs)
    names = "abcd"[: spec.t]
    operands = []
    subs = []
    for (i, j), lam in sorted(spec.lambdas.items()):
        if lam is None:
            continue
        operands.append((values == lam.encoding).astype(np.int64))
        subs.append(names[i - 1] + names[j - 1])
    if not operands:
        return m ** spec.t
    free = set(names) - set("".join(subs))
    expr = ",".join(subs) + "->"
    count = int(np.einsum(expr, *operands, optimize=True))
    return count * (m ** len(free))


# ---------------------------------------------------------------------------
# coverage experiments
# ---------------------------------------------------------------------------

def pattern_space_size(n_colors: int, t: int) -> int:
    """Colorings of K_t's edges with n_colors colors, up to vertex
    relabeling (Burnside over the induced action on edge slots)."""
    slots = list(itertools.combinations(range(t), 2))
    slot_index = {s: k for k, s in enumerate(slots)}
    total = 0
    for perm in itertools.permutations(range(t)):
        mapping = [slot_index[tuple(sorted((perm[i], perm[j])))] for i, j in slots]
        seen = [False] * len(slots)
        cycles = 0
        for start in range(len(slots)):
            if seen[start]:
                continue
            cycles += 1
            k = start
            while not seen[k]:
                seen[k] = True
                k = mapping[k]
        total += n_colors ** cycles
    return total // math.factorial(t)


_COVERAGE_THRESHOLD_EXP = {
    # |E| >> q^(exp/2) is each theorem's hypothesis, as (ambient + t + shift)/2
    "euclidean": -1,
    "product": -1,
    "bilinear": -1,
    "norm": 0,
    "sumproduct": 0,
    "sphere": -2,
}


def coverage_threshold(family: str, q: int, ambient: int, t: int,
                       sphere_mode: bool = False) -> float:
    shift = _COVERAGE_THRESHOLD_EXP["sphere" if sphere_mode else family]
    return q ** ((ambient + t + shift) / 2)


def coverage_experiment(family: str, q: int, t: int, sizes: Sequence[int],
                        trials: int, seed: int = DEFAULT_SEED,
                        n: Optional[int] = None, d: Optional[int] = None,
                        form=None, sphere_mode: bool = False) -> ExperimentReport:
    """Sample subsets of each size and count realized K_t color patterns.

    sphere_mode restricts sampling to the unit sphere (quadratic families
    only) and lowers the hypothesis threshold accordingly.
    """
    spec = FamilySpec(family=family, q=q, n=n, d=d, form=form, lam="all")
    cg = build_colored(spec)
    if sphere_mode:
        if family != "euclidean":
            raise ValueError("sphere mode only applies to the euclidean family")
        q_form = _quadratic_for(q, d, form)
        tab = q_form.value_table()
        universe = np.nonzero(tab == field_from_order(q).one().encoding)[0]
    else:
        universe = np.arange(cg.n_vertices)
    ambient = n if family == "norm" else d
    threshold = coverage_threshold(family, q, ambient, t, sphere_mode)
    predicted = pattern_space_size(len(cg.colors()), t)
    report = ExperimentReport(name=f"coverage[{family},q={q},t={t}]")
    for size in sizes:
        if size > len(universe):
            raise ValueError(f"requested size {size} exceeds universe {len(universe)}")
        for trial in range(trials):
            rng = derived_rng(seed, size, trial)
            chosen = universe[sample_subset(rng, len(universe), size)]
            observed = kt_color_coverage(cg, chosen, t)
            report.rows.append({
                "family": family,
                "q": q,
                "t": t,
                "size": size,
                "trial": trial,
                "seed": seed,
                "predicted": predicted,
                "observed": observed,
                "ratio": observed / predicted if predicted else 0.0,
                "hypothesis_met": bool(size >= threshold),
            })
    by_size = {}
    for row in report.rows:
        by_size.setdefault(row["size"], []).append(row["observed"])
    report.summary = {
        "mean_coverage": {s: float(np.mean(v)) for s, v in sorted(by_size.items())},
        "pattern_space": predicted,
        "threshold": threshold,
    }
    return report


def norm_solvability_report(q: int, n: int, sizes: Sequence[tuple],
                            seed: int = DEFAULT_SEED) -> ExperimentReport:
    """For sampled pairs A, B of the requested sizes, count solutions of
    N(X + Y) = lambda for every nonzero lambda.

    Solvability is hard-asserted only where the mixing bound forces it,
    i.e. strictly above the |A||B| = q^(n+2) threshold; at or below the
    threshold the rows are informative only.
    """
    report = ExperimentReport(name=f"norm-solvability[q={q},n={n}]")
    universe = q ** n
    ctx = field_from_order(q)
    fiber = (universe - 1) // (q - 1)
    threshold = q ** (n + 2)
    for k, (size_a, size_b) in enumerate(sizes):
        rng = derived_rng(seed, k)
        a_set = sample_subset(rng, universe, size_a)
        b_set = sample_subset(rng, universe, size_b)
        for lam_enc in range(1, q):
            spec = SystemSpec(kind="norm", t=2, q=q, n=n,
                              lambdas={(1, 2): ctx.decode(lam_enc)})
            observed = _cross_pair_count(spec, a_set, b_set)
            expected = Fraction(fiber * size_a * size_b, universe)
            must_solve = size_a * size_b > threshold
            row = {
                "q": q, "n": n, "lambda": ctx.decode(lam_enc).literal(),
                "size_a": size_a, "size_b": size_b, "seed": seed,
                "predicted": float(expected), "observed": observed,
                "ratio": observed / float(expected) if expected else 0.0,
                "hypothesis_met": bool(size_a * size_b >= threshold),
                "asserted": bool(must_solve),
            }
            report.rows.append(row)
            if must_solve and observed == 0:
                report.fail(
                    f"unsolvable despite |A||B| > q^(n+2): lambda={lam_enc} trial={k}"
                )
    return report


def _cross_pair_count(spec: SystemSpec, a_set, b_set) -> int:
    """Ordered pairs (x, y) in A x B with val(x, y) equal to the fixed
    lambda; the two-set variant of solve_count."""
    lam = spec.lambdas[(1, 2)]
    encs = sorted({int(e) for e in a_set} | {int(e) for e in b_set})
    pos = {e: i for i, e in enumerate(encs)}
    values = system_value_matrix(spec, encs)
    ai = [pos[int(e)] for e in a_set]
    bi = [pos[int(e)] for e in b_set]
    return int((values[np.ix_(ai, bi)] == lam.encoding).sum())


def coverage_by_pattern_scan(cg: ColoredGraph, u_set, t: int) -> int:
    """Independent recount of kt_color_coverage with the loop order flipped:
    iterate candidate edge-colorings of K_t and search U for a realizing
    vertex ordering, instead of iterating tuples and canonicalizing."""
    ui = [int(v) for v in u_set]
    slots = list(itertools.combinations(range(t), 2))
    slot_pos = {s: k for k, s in enumerate(slots)}
    perms = list(itertools.permutations(range(t)))
    # how each relabeling permutes the edge slots
    slot_maps = [
        [slot_pos[tuple(sorted((p[i], p[j])))] for i, j in slots] for p in perms
    ]
    ci = cg.color_index
    fully_colored = []
    for combo in itertools.combinations(ui, t):
        local = ci[np.ix_(combo, combo)]
        if all(local[i, j] >= 0 for i, j in slots):
            fully_colored.append(local)
    realized = 0
    seen = set()
    n_colors = len(cg.color_values)
    for pattern in itertools.product(range(n_colors), repeat=len(slots)):
        canon = min(tuple(pattern[m[k]] for k in range(len(slots))) for m in slot_maps)
        if canon in seen:
            continue
        seen.add(canon)
        hit = any(
            any(
                all(int(local[p[i], p[j]]) == pattern[slot_pos[(i, j)]] for i, j in slots)
                for p in perms
            )
            for local in fully_colored
        )
        realized += int(hit)
    return realized


# ---------------------------------------------------------------------------
# pinned-set experiments
# ---------------------------------------------------------------------------

def pinned_experiment(family: str, q: int, size: int,
                      n: Optional[int] = None, d: Optional[int] = None,
                      form=None, size_b: Optional[int] = None,
                      seed: int = DEFAULT_SEED, max_pins: int = 64) -> ExperimentReport:
    """Sample E (and optionally a separate target set B), measure the color
    set pinned at each point of E, and check the Cauchy-Schwarz chain behind
    the pinned-set lemma exactly on the same data."""
    spec = FamilySpec(family=family, q=q, n=n, d=d, form=form, lam="all")
    cg = build_colored(spec)
    rng = derived_rng(seed, 0)
    pins = sample_subset(rng, cg.n_vertices, min(size, cg.n_vertices))
    targets = pins
    if size_b is not None:
        targets = sample_subset(derived_rng(seed, 1), cg.n_vertices, size_b)
    report = ExperimentReport(name=f"pinned[{family},q={q}]")
    n_colors = len(cg.colors())
    sizes = []
    for k, pin in enumerate(pins[:max_pins]):
        got = len(pinned_set(cg, int(pin), targets))
        sizes.append(got)
        report.rows.append({
            "family": family,
            "q": q,
            "pin": int(pin),
            "seed": seed,
            "observed": got,
            "predicted": n_colors,
            "ratio": got / n_colors if n_colors else 0.0,
        })
    # exact Cauchy-Schwarz chain, one color at a time (t = 1 star types)
    cs_ok = True
    for color in cg.colors():
        rep = colored_star_indicator(cg, targets, pins[:max_pins], [color])
        cs_ok = cs_ok and rep.cauchy_schwarz_ok
    if not cs_ok:
        report.fail("Cauchy-Schwarz chain violated")
    hist: dict[int, int] = {}
    for s in sizes:
        hist[s] = hist.get(s, 0) + 1
    report.summary = {
        "histogram": dict(sorted(hist.items())),
        "cauchy_schwarz_ok": cs_ok,
        "fraction_90pct": float(np.mean([s >= 0.9 * q for s in sizes])) if sizes else 0.0,
        "fraction_75pct": float(np.mean([s >= 0.75 * q for s in sizes])) if sizes else 0.0,
    }
    return report


# ---------------------------------------------------------------------------
# sum-product inequality
# ---------------------------------------------------------------------------

def _field_pair_set(ctx, encs: Sequence[int], op) -> set:
    if ctx.r == 1:  # prime field: encodings are residues
        arr = np.asarray(list(encs), dtype=np.int64)
        if op == "mul":
            vals = np.unique(arr[:, None] * arr[None, :] % ctx.q)
        else:
            vals = np.unique((arr[:, None] + arr[None, :]) % ctx.q)
        return {int(v) for v in vals}
    els = [ctx.decode(int(e)) for e in encs]
    out = set()
    for x in els:
        for y in els:
            z = x * y if op == "mul" else x + y
            out.add(z.encoding)
    return out


def iterated_sumset(ctx, encs: Sequence[int], times: int) -> set:
    current = {int(e) for e in encs}
    for _ in range(times - 1):
        if ctx.r == 1:
            a = np.asarray(sorted(current), dtype=np.int64)
            b = np.asarray(list(encs), dtype=np.int64)
            current = {int(v) for v in np.unique((a[:, None] + b[None, :]) % ctx.q)}
        else:
            current = {
                (ctx.decode(a) + ctx.decode(b)).encoding
                for a in current
                for b in encs
            }
    return current


def sumproduct_check(a_set: Sequence[int], q: int, d: int) -> dict:
    """Exact integer verification of the sum-product inequality
    |A|^(2d-1) <= |A|^d |A.A|^(d-1) |dA| / q + sqrt(q^d |A|^d |A.A|^(d-1) |dA|).

    Rearranged once to remove the square root: with x^2 = |A.A|^(d-1)|dA|,
    check q |A|^(2d-1) - |A|^d x^2 <= q^(d/2+1) x by squaring the positive
    side. Also emits the d = 2 style quantities min(q|A|, |A|^4/q).
    """
    ctx = field_from_order(q)
    encs = sorted({int(e) for e in a_set})
    if 0 in encs:
        raise ValueError("0 must not lie in A")
    if d < 2:
        raise ValueError("d must be at least 2")
    size = len(encs)
    prod_set = _field_pair_set(ctx, encs, "mul")
    sum_set = _field_pair_set(ctx, encs, "add")
    d_fold = iterated_sumset(ctx, encs, d)
    aa, da = len(prod_set), len(d_fold)
    x_sq = aa ** (d - 1) * da
    lhs = q * size ** (2 * d - 1) - size ** d * x_sq
    holds = lhs <= 0 or lhs * lhs <= q ** (d + 2) * x_sq
    min_bound = min(Fraction(q * size), Fraction(size ** 4, q))
    return {
        "q": q,
        "d": d,
        "size_a": size,
        "size_aa": aa,
        "size_da": da,
        "size_a_plus_a": len(sum_set),
        "observed": x_sq,
        "min_bound": float(min_bound),
        "satisfied": bool(holds),
    }


def sumproduct_experiment(q: int, d: int, trials: int, size: Optional[int] = None,
                          seed: int = DEFAULT_SEED) -> ExperimentReport:
    """Seeded random subsets of F_q*, inequality asserted on every one."""
    report = ExperimentReport(name=f"sumproduct[q={q},d={d}]")
    for trial in range(trials):
        rng = derived_rng(seed, q, d, trial)
        k = int(size) if size else int(rng.integers(1, q - 1))
        chosen = 1 + sample_subset(rng, q - 1, k)  # avoid the zero encoding
        row = sumproduct_check(chosen.tolist(), q, d)
        row.update(trial=trial, seed=seed)
        report.rows.append(row)
        if not row["satisfied"]:
            report.fail(f"sum-product inequality failed at q={q} d={d} trial={trial}")
    return report


# ---------------------------------------------------------------------------
# the mixing grid
# ---------------------------------------------------------------------------

def _batched_column_degrees(g, subsets: list[np.ndarray]) -> np.ndarray:
    """d_U(v) for every v and every subset U, via one exact matmul."""
    x = np.zeros((g.n_vertices, len(subsets)), dtype=np.float64)
    for k, u in enumerate(subsets):
        x[u, k] = 1.0
    m = g.adjacency.astype(np.float64) @ x
    return np.rint(m).astype(np.int64)


def mixing_suite(g, cert, pairs: int, seed: int, max_side: int = 256) -> ExperimentReport:
    """Mixing, degree-variance and path-count bounds on seeded random
    subset pairs; counts come from one batched exact matmul."""
    report = ExperimentReport(name=f"mixing[{g.meta.get('family')},n={g.n_vertices}]")
    n = g.n_vertices
    lam_sq = cert.lambda_claim_sq
    if lam_sq is None:
        raise ValueError("mixing grid needs an exact lambda^2")
    rng = derived_rng(seed, n, cert.degree)
    cap = min(n, max_side)
    b_sets, c_sets = [], []
    for _ in range(pairs):
        b_sets.append(sample_subset(rng, n, int(rng.integers(1, cap + 1))))
        c_sets.append(sample_subset(rng, n, int(rng.integers(1, cap + 1))))
    deg_cols = _batched_column_degrees(g, c_sets)
    d_claim = cert.degree
    for k in range(pairs):
        b, c = b_sets[k], c_sets[k]
        nb, nc = len(b), len(c)
        col = deg_cols[:, k]
        observed = int(col[b].sum())
        dev = Fraction(observed * n - d_claim * nb * nc, n)
        mixing_ok = dev * dev <= lam_sq * nb * nc
        # variance bound for U = C, strict
        ssq = sum((int(v) * n - d_claim * nc) ** 2 for v in col)
        variance_ok = Fraction(ssq, n * n) < lam_sq * nc
        # paths of length two with midpoints in B, endpoints in C
        p2 = int(sum(int(col[v]) ** 2 for v in b))
        dev2 = abs(Fraction(p2) - Fraction(d_claim, n) ** 2 * nb * nc * nc)
        rest = dev2 - lam_sq * nc
        path2_ok = rest <= 0 or rest * rest <= Fraction(4 * d_claim ** 2, n ** 2) * lam_sq * nb * nc ** 3
        row = {
            "family": g.meta.get("family"),
            "params": _param_string(g.meta),
            "pair": k,
            "seed": seed,
            "size_b": nb,
            "size_c": nc,
            "e_bc": observed,
            "mixing_ok": bool(mixing_ok),
            "variance_ok": bool(variance_ok),
            "path2_ok": bool(path2_ok),
        }
        report.rows.append(row)
        if not (mixing_ok and variance_ok and path2_ok):
            report.fail(f"mixing-suite violation at pair {k} of {g.meta}")
    return report


def _param_string(meta: dict) -> str:
    keys = ("q", "n", "d", "form", "lambda", "loops", "color")
    return " ".join(f"{k}={meta[k]}" for k in keys if k in meta)


def double_counting_suite(g, pairs: int, seed: int, max_side: int = 12) -> ExperimentReport:
    """Both enumeration orders of the ordered-K_{s,t} sum must agree for all
    s, t in {1,2,3}; an exact combinatorial identity."""
    report = ExperimentReport(name=f"double-counting[{g.meta.get('family')}]")
    n = g.n_vertices
    rng = derived_rng(seed, n, 17)
    for k in range(pairs):
        u1 = sample_subset(rng, n, int(rng.integers(1, min(n, max_side) + 1)))
        u2 = sample_subset(rng, n, int(rng.integers(1, min(n, max_side) + 1)))
        for s in (1, 2, 3):
            for t in (1, 2, 3):
                lhs = kst_sum(g, u1, u2, s, t, side="u1").observed
                rhs = kst_sum(g, u1, u2, s, t, side="u2").observed
                if lhs != rhs:
                    report.fail(
                        f"double counting mismatch s={s} t={t} pair={k}: {lhs} != {rhs}"
                    )
        report.rows.append({
            "family": g.meta.get("family"),
            "params": _param_string(g.meta),
            "pair": k,
            "seed": seed,
            "sizes": f"{len(u1)}x{len(u2)}",
            "satisfied": report.ok,
        })
    return report


def mixing_grid(specs: Sequence[FamilySpec], pairs: int = 200,
                seed: int = DEFAULT_SEED, lambda_scale: float = 1.0) -> ExperimentReport:
    """Certify every requested family and run the full mixing suite on each.

    lambda_scale deliberately rescales the claimed bound (the falsifiability
    hook: 0.5 must make the run fail). Construction errors abort with the
    failing parameter point named.
    """
    report = ExperimentReport(name="mixing-grid")
    for spec in specs:
        try:
            g = build_graph(spec)
        except Exception as exc:
            raise type(exc)(f"construction failed at {spec}: {exc}") from exc
        claims = claimed_parameters(spec)
        lam = claims.lambda_claim * lambda_scale
        lam_sq = claims.lambda_sq * Fraction(lambda_scale).limit_denominator(10 ** 6) ** 2
        cert = certify_ndl(g, claims.degree, lam, lam_sq)
        report.rows.append(cert.row())
        if not cert.satisfied:
            report.fail(f"certificate failed at {spec}")
            continue
        sub = mixing_suite(g, cert, pairs, seed)
        report.rows.extend(sub.rows)
        report.hard_failures.extend(sub.hard_failures)
    return report
