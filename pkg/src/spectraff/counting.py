"""Edge-distribution checks and subgraph-counting sums over vertex subsets.

Counts are exact integers. Bounds are compared in exact rational arithmetic
whenever the certified lambda^2 is rational (true for every family here);
otherwise a 1e-9 slack is applied. Sums over tuples follow the convention
that tuples may repeat vertices; injective counts, where a check wants them,
are separate.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .config import FLOAT_SLACK, TUPLE_BUDGET, CapExceeded
from .graphs import ColoredGraph, Graph, SpectralCert

MAX_KST_EXPONENT = 4
MAX_STAR_COLORS = 3


def _as_index(g_n: int, subset: Sequence[int]) -> np.ndarray:
    idx = np.asarray(list(subset), dtype=np.int64)
    if idx.size and (idx.min() < 0 or idx.max() >= g_n):
        raise ValueError("subset index out of range")
    return idx


def _require_fresh_cert(g: Graph, cert: SpectralCert) -> Fraction:
    """Validate the certificate against this graph; return exact lambda^2."""
    if cert.graph_fingerprint != g.fingerprint():
        raise ValueError("stale certificate: graph does not match")
    if not cert.satisfied:
        raise ValueError("certificate is not satisfied; nothing to check against")
    if cert.lambda_claim_sq is not None:
        return Fraction(cert.lambda_claim_sq)
    return Fraction(cert.lambda_claim + FLOAT_SLACK).limit_denominator(10 ** 12) ** 2


def _le_plus_sqrt(a: Fraction, b: Fraction, c: Fraction, m: Fraction) -> bool:
    """Decide a <= b + c*sqrt(m) exactly (c, m nonnegative rationals)."""
    rest = a - b
    if rest <= 0:
        return True
    return rest * rest <= c * c * m


# ---------------------------------------------------------------------------
# edges between subsets
# ---------------------------------------------------------------------------

def edge_count(g: Graph, b_set: Sequence[int], c_set: Sequence[int]) -> int:
    """Ordered adjacent pairs (u, w), u in B, w in C; loops count when
    u = w lies in both."""
    bi = _as_index(g.n_vertices, b_set)
    ci = _as_index(g.n_vertices, c_set)
    if bi.size == 0 or ci.size == 0:
        return 0
    return int(g.adjacency[np.ix_(bi, ci)].sum(dtype=np.int64))


@dataclass
class MixingReport:
    observed: int
    expected: Fraction
    bound: float
    satisfied: bool
    size_b: int
    size_c: int

    def row(self) -> dict:
        return {
            "check": "mixing",
            "observed": self.observed,
            "expected": float(self.expected),
            "bound": self.bound,
            "satisfied": self.satisfied,
        }


def mixing_check(g: Graph, cert: SpectralCert, b_set, c_set) -> MixingReport:
    """|e(B,C) - d|B||C|/n| <= lambda sqrt(|B||C|), decided exactly."""
    lam_sq = _require_fresh_cert(g, cert)
    nb, nc = len(b_set), len(c_set)
    observed = edge_count(g, b_set, c_set)
    expected = Fraction(cert.degree * nb * nc, g.n_vertices)
    dev = Fraction(observed) - expected
    ok = dev * dev <= lam_sq * nb * nc
    bound = float(cert.lambda_claim) * float(np.sqrt(nb * nc))
    return MixingReport(observed, expected, bound, bool(ok), nb, nc)


@dataclass
class VarianceReport:
    observed: Fraction  # sum over all vertices of (d_U(v) - d|U|/n)^2
    bound: Fraction  # lambda^2 |U|
    satisfied: bool
    trivial: bool  # empty U is flagged, not failed

    def row(self) -> dict:
        return {
            "check": "degree-variance",
            "observed": float(self.observed),
            "bound": float(self.bound),
            "satisfied": self.satisfied,
        }


def degree_variance(g: Graph, cert: SpectralCert, u_set) -> VarianceReport:
    """Strict bound on the squared deviation of subset degrees."""
    lam_sq = _require_fresh_cert(g, cert)
    ui = _as_index(g.n_vertices, u_set)
    nu = int(ui.size)
    bound = lam_sq * nu
    if nu == 0:
        return VarianceReport(Fraction(0), bound, True, True)
    n = g.n_vertices
    d_u = g.adjacency[:, ui].sum(axis=1, dtype=np.int64)
    # compare  sum (n d_U(v) - d|U|)^2  <  n^2 lambda^2 |U|  in exact integers
    devs = [int(v) * n - cert.degree * nu for v in d_u]
    ssq = sum(v * v for v in devs)
    observed = Fraction(ssq, n * n)
    return VarianceReport(observed, bound, observed < bound, False)


def path2_count(g: Graph, b_set, c_set) -> int:
    """Ordered triples (c1, b, c2) with the midpoint in B and endpoints in C;
    equals the sum over b of d_C(b)^2."""
    bi = _as_index(g.n_vertices, b_set)
    ci = _as_index(g.n_vertices, c_set)
    if bi.size == 0 or ci.size == 0:
        return 0
    d_c = g.adjacency[np.ix_(bi, ci)].sum(axis=1, dtype=np.int64)
    return int(sum(int(v) ** 2 for v in d_c))


@dataclass
class Path2Report:
    observed: int
    expected: Fraction
    satisfied: bool

    def row(self) -> dict:
        return {
            "check": "path2",
            "observed": self.observed,
            "expected": float(self.expected),
            "satisfied": self.satisfied,
        }


def path2_check(g: Graph, cert: SpectralCert, b_set, c_set) -> Path2Report:
    """|p2 - (d/n)^2 |B||C|^2| <= 2 (lambda d / n) |B|^{1/2} |C|^{3/2}
    + lambda^2 |C|, decided exactly."""
    lam_sq = _require_fresh_cert(g, cert)
    nb, nc = len(b_set), len(c_set)
    observed = path2_count(g, b_set, c_set)
    n, d = g.n_vertices, cert.degree
    expected = Fraction(d, n) ** 2 * nb * nc * nc
    dev = abs(Fraction(observed) - expected)
    additive = lam_sq * nc
    coeff = Fraction(2 * d, n)
    radicand = lam_sq * nb * nc ** 3
    ok = _le_plus_sqrt(dev, additive, coeff, radicand)
    return Path2Report(observed, expected, bool(ok))


# ---------------------------------------------------------------------------
# star and complete-bipartite sums
# ---------------------------------------------------------------------------

def star_sum(g: Graph, u1, u2, t: int) -> int:
    """Sum over t-tuples y of U2 (repeats allowed) of the number of common
    neighbors of y inside U1; computed as sum_x d_{U2}(x)^t."""
    if t < 1:
        raise ValueError("t must be at least 1")
    i1 = _as_index(g.n_vertices, u1)
    i2 = _as_index(g.n_vertices, u2)
    if i1.size == 0 or i2.size == 0:
        return 0
    d2 = g.adjacency[np.ix_(i1, i2)].sum(axis=1, dtype=np.int64)
    return sum(int(v) ** t for v in d2)


def _tuple_power_sum(rows: np.ndarray, s: int, t: int) -> int:
    """Sum over s-tuples of rows (repeats allowed) of |AND of rows|^t."""
    nrows = rows.shape[0]
    if nrows == 0 or rows.shape[1] == 0:
        return 0
    rows_int = rows.astype(np.int64)
    if s == 1:
        return sum(int(v) ** t for v in rows_int.sum(axis=1))
    total = 0

    def descend(depth: int, mask: np.ndarray):
        nonlocal total
        if depth == s - 1:
            counts = rows_int @ mask
            total += sum(int(v) ** t for v in counts)
            return
        for i in range(nrows):
            descend(depth + 1, mask * rows_int[i])

    for i in range(nrows):
        descend(1, rows_int[i].copy())
    return total


@dataclass
class KstReport:
    observed: int
    expected: Optional[Fraction]
    s: int
    t: int

    def row(self) -> dict:
        return {
            "check": f"kst[s={self.s},t={self.t}]",
            "observed": self.observed,
            "expected": float(self.expected) if self.expected is not None else "",
        }


def kst_sum(g: Graph, u1, u2, s: int, t: int, side: str = "auto") -> KstReport:
    """Sum over t-tuples y of U2 of S_y(U1)^s: the number of ordered,
    possibly degenerate, complete bipartite K_{s,t} between U1 and U2.

    Both enumeration orders compute the same number (each counts the pairs
    of tuples with full adjacency); `side` picks one, "auto" the cheaper.
    """
    if not (1 <= s <= MAX_KST_EXPONENT and 1 <= t <= MAX_KST_EXPONENT):
        raise ValueError(f"cost guard: s and t must stay within {MAX_KST_EXPONENT}")
    i1 = _as_index(g.n_vertices, u1)
    i2 = _as_index(g.n_vertices, u2)
    rect = g.adjacency[np.ix_(i1, i2)]
    if side == "auto":
        side = "u1" if len(i1) ** s <= len(i2) ** t else "u2"
    if side == "u1":
        observed = _tuple_power_sum(rect, s, t)
    elif side == "u2":
        observed = _tuple_power_sum(rect.T, t, s)
    else:
        raise ValueError("side must be auto, u1 or u2")
    expected = None
    deg = g.degrees()
    if deg.size and (deg == deg[0]).all():
        expected = (
            Fraction(int(deg[0]), g.n_vertices) ** (s * t)
            * len(i1) ** s
            * len(i2) ** t
        )
    return KstReport(observed, expected, s, t)


@dataclass
class K2tReport:
    observed: int
    expected: Optional[Fraction]
    error_term: Optional[Fraction]
    t: int

    def row(self) -> dict:
        return {
            "check": f"k2t[t={self.t}]",
            "observed": self.observed,
            "expected": float(self.expected) if self.expected is not None else "",
            "bound": float(self.error_term) if self.error_term is not None else "",
        }


def k2t_sum(g: Graph, u1, u2, t: int, cert: Optional[SpectralCert] = None) -> K2tReport:
    """The s = 2 specialization, with its error-term magnitude
    lambda^4 (n/d)^2 |U2|^{t-2} reported alongside (not asserted)."""
    base = kst_sum(g, u1, u2, 2, t)
    error = None
    if cert is not None:
        lam_sq = _require_fresh_cert(g, cert)
        n2 = len(list(u2))
        error = lam_sq ** 2 * Fraction(g.n_vertices, cert.degree) ** 2
        error = error * Fraction(n2) ** (t - 2)
    return K2tReport(base.observed, base.expected, error, t)


# ---------------------------------------------------------------------------
# colored machinery
# ---------------------------------------------------------------------------

@dataclass
class ColoredStarReport:
    sum_s: int
    sum_i: int
    sum_s2: int
    t: int
    cauchy_schwarz_ok: bool

    def row(self) -> dict:
        return {
            "check": f"colored-star[t={self.t}]",
            "observed": self.sum_s,
            "expected": self.sum_i,
            "satisfied": self.cauchy_schwarz_ok,
        }


def colored_star_indicator(cg: ColoredGraph, u1, u2, colors) -> ColoredStarReport:
    """For every t-tuple y of U2, count roots x in U1 whose edge to y_i has
    color r_i for all i. Returns the total count, the number of extendable
    tuples, and the sum of squares, with (sum S)^2 <= (sum I)(sum S^2)
    checked exactly."""
    t = len(colors)
    if not 1 <= t <= MAX_STAR_COLORS:
        raise ValueError(f"cost guard: between 1 and {MAX_STAR_COLORS} colors")
    i1 = _as_index(cg.n_vertices, u1)
    i2 = _as_index(cg.n_vertices, u2)
    if len(i2) ** t > TUPLE_BUDGET:
        raise CapExceeded("tuple budget exceeded in colored_star_indicator")
    positions = [cg.color_position(c) for c in colors]
    rect = cg.color_index[np.ix_(i1, i2)]
    masks = [(rect == pos).astype(np.int64) for pos in positions]
    if i1.size == 0 or i2.size == 0:
        return ColoredStarReport(0, 0, 0, t, True)
    if t == 1:
        s_tensor = masks[0].sum(axis=0)
    elif t == 2:
        s_tensor = np.einsum("xa,xb->ab", masks[0], masks[1])
    else:
        s_tensor = np.einsum("xa,xb,xc->abc", masks[0], masks[1], masks[2])
    sum_s = int(s_tensor.sum(dtype=np.int64))
    sum_s2 = int((s_tensor.astype(np.int64) ** 2).sum(dtype=np.int64))
    sum_i = int((s_tensor > 0).sum(dtype=np.int64))
    ok = sum_s * sum_s <= sum_i * sum_s2
    return ColoredStarReport(sum_s, sum_i, sum_s2, t, bool(ok))


def _edge_slots(t: int) -> list[tuple[int, int]]:
    return list(itertools.combinations(range(t), 2))


def canonical_pattern(local: np.ndarray, t: int) -> tuple:
    """Minimum over the t! vertex relabelings of the edge-color string."""
    slots = _edge_slots(t)
    return min(
        tuple(int(local[p[i], p[j]]) for i, j in slots)
        for p in itertools.permutations(range(t))
    )


def kt_color_coverage(cg: ColoredGraph, u_set, t: int) -> int:
    """Number of distinct colorings of the complete graph K_t realized by
    injective t-tuples from U, identified up to vertex relabeling.

    Tuples with any uncolored pair realize nothing.
    """
    if t not in (2, 3, 4):
        raise ValueError("t must be 2, 3 or 4")
    ui = _as_index(cg.n_vertices, u_set)
    if len(ui) ** t > TUPLE_BUDGET:
        raise CapExceeded("tuple budget exceeded in kt_color_coverage")
    patterns = set()
    ci = cg.color_index
    for combo in itertools.combinations(ui.tolist(), t):
        local = ci[np.ix_(combo, combo)]
        if (local[np.triu_indices(t, k=1)] < 0).any():
            continue
        patterns.add(canonical_pattern(local, t))
    return len(patterns)


def pinned_set(cg: ColoredGraph, pin: int, u_set) -> set:
    """Colors appearing on edges between the pin and U. Uncolored incidences
    (value zero in the defining equation) are invisible here by design."""
    ui = _as_index(cg.n_vertices, u_set)
    if ui.size == 0:
        return set()
    idxs = np.unique(cg.color_index[pin, ui])
    return {cg.color_values[int(i)] for i in idxs if i >= 0}
