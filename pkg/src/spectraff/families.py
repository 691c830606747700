"""Deterministic builders for the pseudo-random graph families.

Five families, all on vertex sets ordered by integer encoding so adjacency
matrices are bit-reproducible:

* norm graphs: vertices F_{q^n}, X ~ Y iff N(X + Y) = lambda;
* product graphs: vertices F_q^d minus 0, a ~ b iff B(a, b) = lambda;
* sum-product graphs: vertices F_q x F_q^d, (a,b) ~ (c,e) iff
  a + c + lambda = B(b, e);
* finite Euclidean graphs: vertices F_q^d, x ~ y iff Q(x - y) = lambda != 0;
* the non-Euclidean scheme: vertices are antipode pairs on the unit
  Q-sphere, pairs colored by relation classes read off {Q(x+y), Q(x-y)}.

Loop convention: where the defining equation admits X = Y the loop is kept
(a loop adds 1 to the diagonal and 1 to the degree), which makes the exact
valency claims hold literally. Builders accept loops=False for the
simple-graph variant; reports carry the flag.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import sqrt
from typing import Optional, Union

import numpy as np

from .config import check_vertex_cap
from .fields import (
    FieldCtx,
    FqElement,
    build_ext,
    enc_add,
    enc_neg,
    enc_sub,
    field_from_order,
)
from .forms import (
    BilinearForm,
    QuadraticForm,
    Sphere,
    decode_vector,
    dot_form,
    encode_vector,
    make_form,
    offdiag_form,
)
from .graphs import ColoredGraph, Graph

FAMILIES = ("norm", "product", "sumproduct", "euclidean", "noneuclidean")


def _as_lambda(ctx: FieldCtx, lam) -> FqElement:
    if isinstance(lam, FqElement):
        return lam
    if isinstance(lam, int):
        return ctx.from_int(lam)
    from .fields import parse_fq_literal

    return parse_fq_literal(ctx, lam)


# ---------------------------------------------------------------------------
# norm graphs
# ---------------------------------------------------------------------------

def norm_graph(q: int, n: int, lam, loops: bool = True) -> Graph:
    """X ~ Y iff N(X + Y) = lambda on F_{q^n}; lambda must be nonzero."""
    ext = _ext_for(q, n)
    ctx = ext.base
    lam = _as_lambda(ctx, lam)
    if lam.is_zero():
        raise ValueError("lambda = 0 is rejected for norm graphs")
    size = ext.order
    check_vertex_cap(size, "norm graph")
    width = ctx.r * n
    norm_tab = ext.norm_enc_table()
    fiber = np.nonzero(norm_tab == lam.encoding)[0]
    all_enc = np.arange(size, dtype=np.int64)
    adj = np.zeros((size, size), dtype=np.uint8)
    for f in fiber:
        partner = enc_sub(ctx.p, width, int(f), all_enc)
        adj[all_enc, partner] = 1
    if not loops:
        np.fill_diagonal(adj, 0)
    labels = [ext.decode(e) for e in range(size)]
    meta = {
        "family": "norm",
        "q": q,
        "n": n,
        "lambda": lam.literal(),
        "loops": "kept" if loops else "stripped",
    }
    return Graph(adj, labels, meta)


def _ext_for(q: int, n: int):
    base = field_from_order(q)
    return build_ext(base.p, base.r, n)


# ---------------------------------------------------------------------------
# product graphs
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _named_form(q: int, d: int, tag: str, kind: str):
    # cached so value tables are shared across lambda values of one family
    ctx = field_from_order(q)
    if tag == "dot":
        return dot_form(ctx, d, kind=kind)
    if tag == "offdiag":
        return offdiag_form(ctx, d, kind=kind)
    raise ValueError(f"unknown form name {tag!r}")


def _bilinear_for(q: int, d: int, form) -> BilinearForm:
    if form is None or isinstance(form, str):
        return _named_form(q, d, form or "dot", "bilinear")
    if isinstance(form, BilinearForm):
        return form
    return make_form(field_from_order(q), form, "bilinear")


def _quadratic_for(q: int, d: int, form) -> QuadraticForm:
    if form is None or isinstance(form, str):
        return _named_form(q, d, form or "dot", "quadratic")
    if isinstance(form, QuadraticForm):
        return form
    return make_form(field_from_order(q), form, "quadratic")


def _form_tag(form) -> str:
    if form is None or form == "dot":
        return "dot"
    if isinstance(form, str):
        return form
    return "custom"


def _pairwise_bilinear_enc(b_form: BilinearForm, encs: np.ndarray) -> np.ndarray:
    """Value encodings B(v_i, v_j) for all pairs from a list of vector
    encodings. Prime fields go through one integer matmul; extension fields
    fall back to a per-pair loop (desk scale keeps this cheap)."""
    ctx = b_form.ctx
    d = b_form.dim
    n = len(encs)
    if ctx.r == 1:
        q = ctx.q
        coords = np.empty((n, d), dtype=np.int64)
        rest = encs.astype(np.int64)
        for k in range(d):
            coords[:, k] = rest % q
            rest = rest // q
        m_int = np.array([[c.encoding for c in row] for row in b_form.matrix], dtype=np.int64)
        return (coords @ m_int % q) @ coords.T % q
    vecs = [decode_vector(ctx, d, int(e)) for e in encs]
    transformed = []
    for v in vecs:
        transformed.append(tuple(
            sum((b_form.matrix[i][j] * v[i] for i in range(d)), ctx.zero())
            for j in range(d)
        ))
    out = np.empty((n, n), dtype=np.int64)
    for i, w in enumerate(transformed):
        for j, v in enumerate(vecs):
            acc = ctx.zero()
            for k in range(d):
                acc = acc + w[k] * v[k]
            out[i, j] = acc.encoding
    return out


def product_graph(q: int, d: int, form=None, lam=1, loops: bool = True) -> Graph:
    """a ~ b iff B(a, b) = lambda on the nonzero vectors of F_q^d."""
    b_form = _bilinear_for(q, d, form)
    ctx = b_form.ctx
    lam = _as_lambda(ctx, lam)
    if lam.is_zero():
        raise ValueError("lambda = 0 is rejected for product graphs")
    size = ctx.q ** d - 1
    check_vertex_cap(size, "product graph")
    encs = np.arange(1, size + 1, dtype=np.int64)  # encoding 0 is the zero vector
    values = _pairwise_bilinear_enc(b_form, encs)
    adj = (values == lam.encoding).astype(np.uint8)
    if not loops:
        np.fill_diagonal(adj, 0)
    labels = [decode_vector(ctx, d, int(e)) for e in encs]
    meta = {
        "family": "product",
        "q": q,
        "d": d,
        "form": _form_tag(form),
        "lambda": lam.literal(),
        "loops": "kept" if loops else "stripped",
    }
    return Graph(adj, labels, meta)


# ---------------------------------------------------------------------------
# sum-product graphs
# ---------------------------------------------------------------------------

def sumproduct_graph(q: int, d: int, form=None, lam=0, loops: bool = True) -> Graph:
    """(a, b) ~ (c, e) iff a + c + lambda = B(b, e) on F_q x F_q^d.

    Any lambda in F_q is allowed (zero included). Vertex index is the
    encoding of (a, b) read as a vector of d + 1 coordinates, a first.
    """
    b_form = _bilinear_for(q, d, form)
    ctx = b_form.ctx
    lam = _as_lambda(ctx, lam)
    nb = ctx.q ** d
    size = ctx.q * nb
    check_vertex_cap(size, "sum-product graph")
    b_encs = np.arange(nb, dtype=np.int64)
    bv = _pairwise_bilinear_enc(b_form, b_encs)  # B(b_i, b_j) encodings
    a_encs = np.arange(ctx.q, dtype=np.int64)
    # required value of B: a + c + lambda, as encodings
    asum = enc_add(ctx.p, ctx.r, a_encs[:, None], a_encs[None, :])
    asum = enc_add(ctx.p, ctx.r, asum, np.int64(lam.encoding))
    # vertex (a, b) has index a_enc + q * b_enc
    adj = np.zeros((size, size), dtype=np.uint8)
    for bi in range(nb):
        row_vals = bv[bi]  # (nb,)
        cond = asum[:, :, None] == row_vals[None, None, :]  # axes (a, c, b')
        # column index of vertex (c, b') is c + q * b', so b' must vary slowest
        block = cond.transpose(0, 2, 1).reshape(ctx.q, size)
        adj[bi * ctx.q:(bi + 1) * ctx.q, :] = block
    if not loops:
        np.fill_diagonal(adj, 0)
    labels = [
        (ctx.decode(e % ctx.q), decode_vector(ctx, d, e // ctx.q))
        for e in range(size)
    ]
    meta = {
        "family": "sumproduct",
        "q": q,
        "d": d,
        "form": _form_tag(form),
        "lambda": lam.literal(),
        "loops": "kept" if loops else "stripped",
    }
    return Graph(adj, labels, meta)


# ---------------------------------------------------------------------------
# finite Euclidean graphs
# ---------------------------------------------------------------------------

def euclidean_graph(q: int, d: int, form=None, lam=1) -> Graph:
    """x ~ y iff Q(x - y) = lambda != 0 on F_q^d; loop-free by definition."""
    q_form = _quadratic_for(q, d, form)
    ctx = q_form.ctx
    lam = _as_lambda(ctx, lam)
    if lam.is_zero():
        raise ValueError("lambda = 0 is rejected for Euclidean graphs")
    size = ctx.q ** d
    check_vertex_cap(size, "Euclidean graph")
    width = ctx.r * d
    tab = q_form.value_table()
    shell = np.nonzero(tab == lam.encoding)[0]  # never contains 0
    all_enc = np.arange(size, dtype=np.int64)
    adj = np.zeros((size, size), dtype=np.uint8)
    for z in shell:
        partner = enc_sub(ctx.p, width, all_enc, int(z))
        adj[all_enc, partner] = 1
    labels = [decode_vector(ctx, d, e) for e in range(size)]
    meta = {
        "family": "euclidean",
        "q": q,
        "d": d,
        "form": _form_tag(form),
        "lambda": lam.literal(),
        "loops": "none",
    }
    return Graph(adj, labels, meta)


# ---------------------------------------------------------------------------
# non-Euclidean scheme on the unit sphere
# ---------------------------------------------------------------------------

def _relation_of_value(ctx: FieldCtx, d: int) -> tuple[np.ndarray, int]:
    """Map value-encoding of Q(x+y) to its relation index.

    A vertex pair determines the unordered value pair {Q(x+y), Q(x-y)} =
    {2+gamma, 2-gamma}, i.e. the relation only depends on gamma^2. The
    gamma parametrization splits on the parity of d; indices 2..(q-1)/2 are
    the downstream colors either way.
    """
    q = ctx.q
    two = ctx.from_int(2)
    by_gamma_sq: dict[FqElement, int] = {ctx.zero(): (q + 1) // 2}
    if d % 2 == 1:
        by_gamma_sq[ctx.from_int(4)] = 1
        for i in range(2, (q - 1) // 2 + 1):
            gamma = two * ctx.pow(ctx.nu, -(i - 1))
            key = gamma * gamma
            if key in by_gamma_sq:
                raise ValueError(f"ambiguous relation assignment at index {i}")
            by_gamma_sq[key] = i
    else:
        half = two.inverse()
        for i in range(1, (q - 1) // 2 + 1):
            gamma = half * ctx.pow(ctx.nu, i)
            key = gamma * gamma
            if key in by_gamma_sq:
                raise ValueError(f"ambiguous relation assignment at index {i}")
            by_gamma_sq[key] = i
    rel_of_value = np.full(q, -1, dtype=np.int16)
    for enc in range(q):
        v = ctx.decode(enc)
        delta = v - two
        rel = by_gamma_sq.get(delta * delta)
        if rel is None:
            raise ValueError(f"no relation matches the value {v.literal()}")
        rel_of_value[enc] = rel
    return rel_of_value, (q + 1) // 2


def noneuclidean_scheme(q: int, d: int, form=None) -> ColoredGraph:
    """Colored graph on antipode pairs of the unit Q-sphere.

    Vertices are the canonical representatives (smaller encoding of x, -x);
    the downstream colors are the relation indices 2..(q-1)/2, giving
    (q-3)/2 colors. Pairs falling in the excluded relations stay uncolored;
    their counts are recorded in the meta for exhaustiveness checks.
    """
    q_form = _quadratic_for(q, d, form)
    ctx = q_form.ctx
    unit = Sphere(q_form, ctx.one())
    if unit.size == 0:
        raise ValueError("unit sphere is empty; no vertices")
    width = ctx.r * d
    sphere_enc = unit.encodings
    negs = enc_neg(ctx.p, width, sphere_enc)
    reps = np.unique(np.minimum(sphere_enc, negs))
    n = len(reps)
    check_vertex_cap(n, "non-Euclidean scheme")
    rel_of_value, n_relations = _relation_of_value(ctx, d)
    tab = q_form.value_table()
    rel = np.empty((n, n), dtype=np.int16)
    for i in range(n):
        sums = enc_add(ctx.p, width, int(reps[i]), reps)
        rel[i] = rel_of_value[tab[sums]]
    np.fill_diagonal(rel, 0)  # identity relation, not an edge
    kept = list(range(2, (q - 1) // 2 + 1))
    color_index = np.full((n, n), -1, dtype=np.int16)
    excluded = {}
    for r_idx in range(1, n_relations + 1):
        mask = rel == r_idx
        if r_idx in kept:
            color_index[mask] = kept.index(r_idx)
        else:
            excluded[r_idx] = int(mask.sum()) // 2
    labels = [decode_vector(ctx, d, int(e)) for e in reps]
    meta = {
        "family": "noneuclidean",
        "q": q,
        "d": d,
        "form": _form_tag(form),
        "n_omega": n,
        "excluded_relations": excluded,
    }
    return ColoredGraph(color_index, kept, labels, meta)


# ---------------------------------------------------------------------------
# colored versions of the translation-style families
# ---------------------------------------------------------------------------

def colored_family(family: str, q: int, n: Optional[int] = None,
                   d: Optional[int] = None, form=None) -> ColoredGraph:
    """One color per lambda: F_q* for norm/product/euclidean, all of F_q
    for sumproduct. The class of a color equals the single-lambda graph."""
    if family == "norm":
        return _colored_norm(q, n)
    if family == "product":
        return _colored_product(q, d, form)
    if family == "sumproduct":
        return _colored_sumproduct(q, d, form)
    if family == "euclidean":
        return _colored_euclidean(q, d, form)
    if family == "noneuclidean":
        return noneuclidean_scheme(q, d, form)
    raise ValueError(f"unknown family {family!r}")


def _nonzero_colors(ctx: FieldCtx) -> list[FqElement]:
    return [ctx.decode(e) for e in range(1, ctx.q)]


def _colored_norm(q: int, n: int) -> ColoredGraph:
    ext = _ext_for(q, n)
    ctx = ext.base
    size = ext.order
    check_vertex_cap(size, "colored norm graph")
    width = ctx.r * n
    norm_tab = ext.norm_enc_table().astype(np.int16)
    all_enc = np.arange(size, dtype=np.int64)
    color_index = np.empty((size, size), dtype=np.int16)
    for i in range(size):
        sums = enc_add(ctx.p, width, int(i), all_enc)
        color_index[i] = norm_tab[sums] - 1  # value 0 becomes "uncolored"
    labels = [ext.decode(e) for e in range(size)]
    meta = {"family": "norm", "q": q, "n": n, "lambda": "all"}
    return ColoredGraph(color_index, _nonzero_colors(ctx), labels, meta)


def _colored_product(q: int, d: int, form) -> ColoredGraph:
    b_form = _bilinear_for(q, d, form)
    ctx = b_form.ctx
    size = ctx.q ** d - 1
    check_vertex_cap(size, "colored product graph")
    encs = np.arange(1, size + 1, dtype=np.int64)
    values = _pairwise_bilinear_enc(b_form, encs)
    color_index = (values - 1).astype(np.int16)
    labels = [decode_vector(ctx, d, int(e)) for e in encs]
    meta = {"family": "product", "q": q, "d": d, "form": _form_tag(form), "lambda": "all"}
    return ColoredGraph(color_index, _nonzero_colors(ctx), labels, meta)


def _colored_sumproduct(q: int, d: int, form) -> ColoredGraph:
    b_form = _bilinear_for(q, d, form)
    ctx = b_form.ctx
    nb = ctx.q ** d
    size = ctx.q * nb
    check_vertex_cap(size, "colored sum-product graph")
    b_encs = np.arange(nb, dtype=np.int64)
    bv = _pairwise_bilinear_enc(b_form, b_encs)
    a_encs = np.arange(ctx.q, dtype=np.int64)
    asum = enc_add(ctx.p, ctx.r, a_encs[:, None], a_encs[None, :])
    color_index = np.empty((size, size), dtype=np.int16)
    # color of ((a,b),(c,e)) is lambda = B(b,e) - a - c
    for bi in range(nb):
        lam_block = enc_sub(ctx.p, ctx.r, bv[bi][None, None, :], asum[:, :, None])
        color_index[bi * ctx.q:(bi + 1) * ctx.q, :] = (
            lam_block.transpose(0, 2, 1).reshape(ctx.q, size)
        )
    labels = [
        (ctx.decode(e % ctx.q), decode_vector(ctx, d, e // ctx.q))
        for e in range(size)
    ]
    meta = {"family": "sumproduct", "q": q, "d": d, "form": _form_tag(form), "lambda": "all"}
    colors = [ctx.decode(e) for e in range(ctx.q)]
    return ColoredGraph(color_index, colors, labels, meta)


def _colored_euclidean(q: int, d: int, form) -> ColoredGraph:
    q_form = _quadratic_for(q, d, form)
    ctx = q_form.ctx
    size = ctx.q ** d
    check_vertex_cap(size, "colored Euclidean graph")
    width = ctx.r * d
    tab = q_form.value_table().astype(np.int16)
    all_enc = np.arange(size, dtype=np.int64)
    color_index = np.empty((size, size), dtype=np.int16)
    for i in range(size):
        diffs = enc_sub(ctx.p, width, int(i), all_enc)
        color_index[i] = tab[diffs] - 1
    labels = [decode_vector(ctx, d, e) for e in range(size)]
    meta = {"family": "euclidean", "q": q, "d": d, "form": _form_tag(form), "lambda": "all"}
    return ColoredGraph(color_index, _nonzero_colors(ctx), labels, meta)


# ---------------------------------------------------------------------------
# family specs and claimed certificates
# ---------------------------------------------------------------------------

@dataclass
class FamilySpec:
    """Parsed request for one family build; serializable as JSON."""

    family: str
    q: int
    n: Optional[int] = None
    d: Optional[int] = None
    form: Optional[Union[str, list]] = None
    lam: Union[str, int, None] = None  # literal, or "all" for the colored build
    loops: bool = True

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if self.family == "norm" and not self.n:
            raise ValueError("norm graphs need the extension degree n")
        if self.family != "norm" and not self.d:
            raise ValueError(f"{self.family} graphs need the dimension d")

    @classmethod
    def from_json(cls, data: dict) -> "FamilySpec":
        return cls(
            family=data["family"],
            q=int(data["q"]),
            n=data.get("n"),
            d=data.get("d"),
            form=data.get("form"),
            lam=data.get("lambda"),
            loops=bool(data.get("loops", True)),
        )

    def to_json(self) -> dict:
        out = {"family": self.family, "q": self.q, "loops": self.loops}
        if self.n is not None:
            out["n"] = self.n
        if self.d is not None:
            out["d"] = self.d
        if self.form is not None:
            out["form"] = self.form
        if self.lam is not None:
            out["lambda"] = str(self.lam)
        return out


def build_graph(spec: FamilySpec) -> Graph:
    if spec.lam in (None, "all"):
        raise ValueError("single-lambda build needs a lambda value")
    if spec.family == "norm":
        return norm_graph(spec.q, spec.n, spec.lam, loops=spec.loops)
    if spec.family == "product":
        return product_graph(spec.q, spec.d, spec.form, spec.lam, loops=spec.loops)
    if spec.family == "sumproduct":
        return sumproduct_graph(spec.q, spec.d, spec.form, spec.lam, loops=spec.loops)
    if spec.family == "euclidean":
        return euclidean_graph(spec.q, spec.d, spec.form, spec.lam)
    raise ValueError(f"{spec.family} has no single-lambda build")


def build_colored(spec: FamilySpec) -> ColoredGraph:
    return colored_family(spec.family, spec.q, n=spec.n, d=spec.d, form=spec.form)


@dataclass
class Claims:
    """Theory-side certificate values for one single-lambda family build."""

    degree: int
    lambda_claim: float
    lambda_sq: Fraction  # exact value of lambda_claim^2


def claimed_parameters(spec: FamilySpec) -> Claims:
    q = spec.q
    if spec.family == "norm":
        deg = (q ** spec.n - 1) // (q - 1)
        return Claims(deg, sqrt(q ** spec.n), Fraction(q ** spec.n))
    if spec.family == "product":
        deg = q ** (spec.d - 1)
        return Claims(deg, sqrt(2 * deg), Fraction(2 * deg))
    if spec.family == "sumproduct":
        deg = q ** spec.d
        return Claims(deg, sqrt(2 * deg), Fraction(2 * deg))
    if spec.family == "euclidean":
        q_form = _quadratic_for(q, spec.d, spec.form)
        lam = _as_lambda(q_form.ctx, spec.lam if spec.lam is not None else 1)
        deg = Sphere(q_form, lam).size
        return Claims(deg, 2.0 * sqrt(q ** (spec.d - 1)), Fraction(4 * q ** (spec.d - 1)))
    if spec.family == "noneuclidean":
        # valency is only claimed asymptotically; the eigenvalue bound carries
        # a desk-scale slack factor of 2.5 in place of (2 + o(1))
        bound_sq = Fraction(25, 4) * q ** (spec.d - 2)
        return Claims(-1, 2.5 * sqrt(q ** (spec.d - 2)), bound_sq)
    raise ValueError(f"unknown family {spec.family!r}")
