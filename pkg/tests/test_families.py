"""Family builder tests: small hand-derived instances plus structural laws."""

import numpy as np
import pytest

from spectraff.families import (
    FamilySpec,
    build_colored,
    build_graph,
    claimed_parameters,
    colored_family,
    euclidean_graph,
    noneuclidean_scheme,
    norm_graph,
    product_graph,
    sumproduct_graph,
)
from spectraff.fields import build_ext, field_from_order
from spectraff.forms import Sphere, dot_form
from spectraff.graphs import certify_ndl, spectrum


def encs(label):
    return tuple(c.encoding for c in label)


# ---------------------------------------------------------------------------
# norm graphs
# ---------------------------------------------------------------------------

def test_norm_graph_loops_and_degree():
    g = norm_graph(3, 2, 1)
    assert g.n_vertices == 9
    assert sorted(set(g.degrees().tolist())) == [4]
    ext = build_ext(3, 1, 2)
    two_inv = ext.base.from_int(2)  # 2^{-1} = 2 mod 3
    fiber = [ext.decode(e) for e in range(9) if ext.norm(ext.decode(e)) == ext.base.one()]
    expected_loops = sorted((ext.embed(two_inv) * f).encoding for f in fiber)
    got_loops = [i for i in range(9) if g.adjacency[i, i]]
    assert got_loops == expected_loops


def test_norm_graph_adjacency_is_norm_of_sum():
    g = norm_graph(3, 3, 2)
    ext = build_ext(3, 1, 3)
    lam = ext.base.from_int(2)
    for i in range(0, 27, 5):
        for j in range(0, 27, 3):
            expected = ext.norm(ext.decode(i) + ext.decode(j)) == lam
            assert bool(g.adjacency[i, j]) == expected


def test_norm_graph_rejects_zero_lambda():
    with pytest.raises(ValueError):
        norm_graph(3, 2, 0)


def test_norm_graph_nonprime_base():
    g = norm_graph(9, 2, 1)
    assert g.n_vertices == 81
    assert sorted(set(g.degrees().tolist())) == [10]


# ---------------------------------------------------------------------------
# product graphs
# ---------------------------------------------------------------------------

def test_product_graph_neighbors_example():
    g = product_graph(3, 2, None, 1)
    assert g.n_vertices == 8
    idx = next(i for i, l in enumerate(g.vertex_labels) if encs(l) == (1, 0))
    nbrs = {encs(g.vertex_labels[j]) for j in np.nonzero(g.adjacency[idx])[0]}
    assert nbrs == {(1, 0), (1, 1), (1, 2)}
    assert g.adjacency[idx, idx] == 1  # B((1,0),(1,0)) = 1


def test_product_graph_common_neighbors_case_analysis():
    # independent pairs share q^{d-2} neighbors, dependent pairs none
    q, d = 5, 2
    g = product_graph(q, d, None, 1)
    labels = [encs(l) for l in g.vertex_labels]
    a2 = (g.adjacency.astype(np.int64) @ g.adjacency.astype(np.int64))
    for i, a in enumerate(labels):
        for j, b in enumerate(labels):
            if i == j:
                continue
            dependent = any(
                all((al * x - y) % q == 0 for x, y in zip(a, b)) for al in range(1, q)
            )
            assert a2[i, j] == (0 if dependent else q ** (d - 2))


def test_product_graph_offdiag_form():
    g = product_graph(3, 2, "offdiag", 1)
    assert sorted(set(g.degrees().tolist())) == [3]


def test_product_graph_rejects_zero_lambda():
    with pytest.raises(ValueError):
        product_graph(3, 2, None, 0)


def test_product_graph_nonprime_base_matches_bruteforce():
    g = product_graph(9, 2, None, 1)
    ctx = field_from_order(9)
    form = dot_form(ctx, 2, kind="bilinear")
    assert g.n_vertices == 80
    lam = ctx.one()
    for i in range(0, 80, 11):
        for j in range(0, 80, 7):
            expected = form.eval(g.vertex_labels[i], g.vertex_labels[j]) == lam
            assert bool(g.adjacency[i, j]) == expected


# ---------------------------------------------------------------------------
# sum-product graphs
# ---------------------------------------------------------------------------

def test_sumproduct_neighbors_example():
    g = sumproduct_graph(3, 1, None, 0)
    assert g.n_vertices == 9
    a, b = g.vertex_labels[0]
    assert a.encoding == 0 and encs(b) == (0,)
    nbrs = {(g.vertex_labels[j][0].encoding, encs(g.vertex_labels[j][1]))
            for j in np.nonzero(g.adjacency[0])[0]}
    assert nbrs == {(0, (0,)), (0, (1,)), (0, (2,))}


def test_sumproduct_degree_and_triangle():
    # q^d-regular, and contains a triangle (so it is not bipartite)
    g = sumproduct_graph(5, 2, None, 1)
    assert sorted(set(g.degrees().tolist())) == [25]
    a3 = np.linalg.matrix_power(g.adjacency.astype(np.int64), 3)
    assert np.trace(a3) > 0


def test_sumproduct_adjacency_bruteforce():
    q, d = 5, 1
    g = sumproduct_graph(q, d, None, 2)
    for i in range(g.n_vertices):
        a, b = g.vertex_labels[i]
        for j in range(g.n_vertices):
            c, e = g.vertex_labels[j]
            lhs = (a.encoding + c.encoding + 2) % q
            rhs = b[0].encoding * e[0].encoding % q
            assert bool(g.adjacency[i, j]) == (lhs == rhs)


# ---------------------------------------------------------------------------
# Euclidean graphs
# ---------------------------------------------------------------------------

def test_euclidean_basic():
    g = euclidean_graph(3, 2, None, 1)
    assert g.n_vertices == 9
    assert g.loop_count() == 0
    assert sorted(set(g.degrees().tolist())) == [4]


def test_euclidean_degree_equals_sphere_size():
    for q, d, form in [(5, 2, "dot"), (5, 2, "offdiag"), (7, 3, "dot"), (9, 2, "dot")]:
        ctx = field_from_order(q)
        from spectraff.families import _quadratic_for

        qf = _quadratic_for(q, d, form)
        for lam_enc in (1, 2):
            lam = ctx.decode(lam_enc)
            g = euclidean_graph(q, d, form, lam)
            assert sorted(set(g.degrees().tolist())) == [Sphere(qf, lam).size]


def test_euclidean_rejects_zero_lambda():
    with pytest.raises(ValueError):
        euclidean_graph(3, 2, None, 0)


# ---------------------------------------------------------------------------
# the non-Euclidean scheme
# ---------------------------------------------------------------------------

def test_omega_vertex_count_q5_d3():
    # oracle: independent sphere scan over (Z_5)^3
    pts = [
        (x, y, z)
        for x in range(5)
        for y in range(5)
        for z in range(5)
        if (x * x + y * y + z * z) % 5 == 1
    ]
    assert len(pts) == 30  # q^2 + q
    cg = noneuclidean_scheme(5, 3)
    assert cg.n_vertices == len(pts) // 2


def test_omega_labels_are_canonical_antipodes():
    cg = noneuclidean_scheme(5, 3)

    def enc(pt):  # integer encoding: low coordinate is the least significant digit
        return sum(c * 5 ** k for k, c in enumerate(pt))

    seen = set()
    for label in cg.vertex_labels:
        pt = encs(label)
        anti = tuple((5 - c) % 5 for c in pt)
        assert enc(pt) <= enc(anti)
        assert pt not in seen
        seen.add(pt)
        assert (sum(c * c for c in pt)) % 5 == 1


def test_scheme_classes_partition_offrelation_pairs():
    for q, d in [(5, 3), (7, 4)]:
        cg = noneuclidean_scheme(q, d)
        n = cg.n_vertices
        colored = cg.colored_edge_total()
        excluded = sum(cg.meta["excluded_relations"].values())
        assert colored + excluded == n * (n - 1) // 2
        # no loops in the scheme
        assert all(cg.color_index[i, i] == -1 for i in range(n))


def test_scheme_classes_are_regular():
    for q, d in [(5, 3), (5, 4), (7, 3)]:
        cg = noneuclidean_scheme(q, d)
        for color in cg.colors():
            g = cg.color_class(color)
            assert g.is_regular(), (q, d, color)


def test_scheme_color_count():
    for q in (5, 7, 9):
        cg = noneuclidean_scheme(q, 3)
        assert len(cg.colors()) == (q - 3) // 2


# ---------------------------------------------------------------------------
# colored families
# ---------------------------------------------------------------------------

def test_colored_euclidean_classes_match_single_lambda():
    cg = colored_family("euclidean", 3, d=2)
    ctx = field_from_order(3)
    assert len(cg.colors()) == 2
    for lam_enc in (1, 2):
        lam = ctx.decode(lam_enc)
        cls = cg.color_class(lam)
        direct = euclidean_graph(3, 2, None, lam)
        assert np.array_equal(cls.adjacency, direct.adjacency)
        assert cls.edge_count_total() == 4 * 9 // 2


def test_colored_norm_classes():
    cg = colored_family("norm", 3, n=2)
    ctx = field_from_order(3)
    assert len(cg.colors()) == 2
    spectra = []
    for lam_enc in (1, 2):
        lam = ctx.decode(lam_enc)
        cls = cg.color_class(lam)
        direct = norm_graph(3, 2, lam)
        assert np.array_equal(cls.adjacency, direct.adjacency)
        spectra.append(np.sort(spectrum(cls)))
    # the single-color graphs are isomorphic, so equal spectra (necessary cond.)
    assert np.allclose(spectra[0], spectra[1], atol=1e-9)


def test_colored_product_and_sumproduct_consistency():
    cgp = colored_family("product", 5, d=2)
    assert np.array_equal(
        cgp.color_class(field_from_order(5).decode(2)).adjacency,
        product_graph(5, 2, None, 2).adjacency,
    )
    cgs = colored_family("sumproduct", 3, d=1)
    ctx = field_from_order(3)
    assert len(cgs.colors()) == 3  # zero included
    for lam_enc in range(3):
        assert np.array_equal(
            cgs.color_class(ctx.decode(lam_enc)).adjacency,
            sumproduct_graph(3, 1, None, lam_enc).adjacency,
        )


def test_colored_class_sizes_sum():
    cg = colored_family("euclidean", 5, d=2)
    sizes = cg.class_sizes()
    assert sum(sizes.values()) == cg.colored_edge_total()


# ---------------------------------------------------------------------------
# specs and claims
# ---------------------------------------------------------------------------

def test_family_spec_roundtrip():
    spec = FamilySpec(family="euclidean", q=5, d=2, form="dot", lam="1")
    again = FamilySpec.from_json(spec.to_json())
    assert again == spec
    g = build_graph(spec)
    assert g.n_vertices == 25


def test_family_spec_validation():
    with pytest.raises(ValueError):
        FamilySpec(family="nope", q=3, d=2)
    with pytest.raises(ValueError):
        FamilySpec(family="norm", q=3)  # n missing


def test_claims_certify_small_grid():
    for spec in [
        FamilySpec(family="norm", q=3, n=2, lam="1"),
        FamilySpec(family="norm", q=5, n=2, lam="2"),
        FamilySpec(family="product", q=5, d=2, lam="1"),
        FamilySpec(family="sumproduct", q=3, d=1, lam="0"),
        FamilySpec(family="euclidean", q=5, d=2, lam="1"),
    ]:
        g = build_graph(spec)
        claims = claimed_parameters(spec)
        cert = certify_ndl(g, claims.degree, claims.lambda_claim, claims.lambda_sq)
        assert cert.satisfied, (spec, cert)
        assert float(claims.lambda_sq) == pytest.approx(claims.lambda_claim ** 2)


def test_colored_build_via_spec():
    spec = FamilySpec(family="noneuclidean", q=5, d=3, lam="all")
    cg = build_colored(spec)
    assert cg.n_vertices == 15
