import math

import numpy as np
import pytest

from spectraff.config import CapExceeded
from spectraff.families import (
    euclidean_graph,
    norm_graph,
    product_graph,
    sumproduct_graph,
)
from spectraff.graphs import (
    Graph,
    certify_ndl,
    check_square_identity,
    is_bipartite,
    is_connected,
    multiplicity_of_top,
    second_eigenvalue,
    second_eigenvalue_power,
    spectrum,
)


def complete_graph(n):
    a = np.ones((n, n), dtype=np.uint8)
    np.fill_diagonal(a, 0)
    return Graph(a)


def test_asymmetric_adjacency_rejected():
    a = np.zeros((3, 3), dtype=np.uint8)
    a[0, 1] = 1
    with pytest.raises(ValueError):
        Graph(a)


def test_k4_spectrum():
    eig = spectrum(complete_graph(4))
    assert np.allclose(eig, [3, -1, -1, -1], atol=1e-9)


def test_empty_graph_spectrum():
    g = Graph(np.zeros((5, 5), dtype=np.uint8))
    assert np.allclose(spectrum(g), 0.0)


def test_euclidean_q3_spectrum_character_sums():
    # oracle: for the sum-of-squares form on F_3^2 the graph is a Cayley
    # graph of (Z_3)^2 with connection set {(0,+-1),(+-1,0)}, so the
    # eigenvalues are 2cos(2pi a/3) + 2cos(2pi b/3)
    expected = sorted(
        2 * math.cos(2 * math.pi * a / 3) + 2 * math.cos(2 * math.pi * b / 3)
        for a in range(3)
        for b in range(3)
    )
    g = euclidean_graph(3, 2, "dot", 1)
    assert np.allclose(sorted(spectrum(g)), expected, atol=1e-9)
    # the same multiset, written out
    assert np.allclose(sorted(spectrum(g)), [-2] * 4 + [1] * 4 + [4], atol=1e-9)


def test_spectrum_cap(monkeypatch):
    monkeypatch.setenv("SPECTRAFF_MAX_VERTICES", "3")
    g = Graph(np.zeros((5, 5), dtype=np.uint8))
    with pytest.raises(CapExceeded):
        spectrum(g)


def test_trace_equals_loop_count():
    g = norm_graph(3, 2, 1)
    assert g.loop_count() == 4
    assert abs(spectrum(g).sum() - 4) < 1e-8 * g.n_vertices


def test_certify_norm_graph():
    cert = certify_ndl(norm_graph(3, 2, 1), 4, 3.0)
    assert cert.satisfied and cert.regular
    assert cert.n == 9 and cert.degree == 4
    assert cert.lambda_measured <= 3.0


def test_certify_product_graph():
    cert = certify_ndl(product_graph(3, 2, None, 1), 3, math.sqrt(6))
    assert cert.satisfied
    assert cert.n == 8


def test_certify_k4_with_too_small_claim():
    cert = certify_ndl(complete_graph(4), 3, 0.5)
    assert not cert.satisfied
    assert cert.regular and cert.top_matches_degree
    assert abs(cert.lambda_measured - 1.0) < 1e-9


def test_certify_wrong_degree():
    cert = certify_ndl(complete_graph(4), 2, 10.0)
    assert not cert.satisfied and not cert.regular


def test_power_iteration_agrees_with_eigensolver():
    graphs = [
        norm_graph(3, 2, 1),
        product_graph(5, 2, None, 1),
        sumproduct_graph(3, 1, None, 1),
        euclidean_graph(5, 2, "dot", 1),
        complete_graph(6),
    ]
    for g in graphs:
        direct = second_eigenvalue(g)
        powered = second_eigenvalue_power(g, iters=500)
        assert abs(direct - powered) < 1e-6, g.meta


def test_square_identity_zero_graph():
    zero = Graph(np.zeros((4, 4), dtype=np.uint8))
    res = check_square_identity(zero, 0, 0, zero)
    assert res.holds


def test_square_identity_product_graph():
    # d = 2: A^2 = J + (q - 1) I - E with E the linear-dependence graph
    q = 3
    g = product_graph(q, 2, None, 1)
    labels = [tuple(c.encoding for c in v) for v in g.vertex_labels]
    n = len(labels)
    dep = np.zeros((n, n), dtype=np.uint8)
    for i, a in enumerate(labels):
        for j, b in enumerate(labels):
            if i != j and any(
                all((al * x - y) % q == 0 for x, y in zip(a, b)) for al in range(1, q)
            ):
                dep[i, j] = 1
    res = check_square_identity(g, 1, q - 1, Graph(dep))
    assert res.holds


def test_square_identity_reports_violation():
    g = complete_graph(3)
    zero = Graph(np.zeros((3, 3), dtype=np.uint8))
    res = check_square_identity(g, 0, 0, zero)
    assert not res.holds
    i, j, lhs, rhs = res.violation
    assert lhs != rhs


def test_square_identity_dimension_mismatch():
    with pytest.raises(ValueError):
        check_square_identity(complete_graph(3), 0, 0, complete_graph(4))


def test_top_multiplicity_on_connected_nonbipartite_families():
    for g in [
        norm_graph(3, 2, 1),
        product_graph(3, 2, None, 1),
        sumproduct_graph(3, 1, None, 1),
        euclidean_graph(3, 2, "dot", 1),
    ]:
        if is_connected(g) and not is_bipartite(g):
            assert multiplicity_of_top(g) == 1, g.meta


def test_without_loops():
    g = norm_graph(3, 2, 1)
    simple = g.without_loops()
    assert simple.loop_count() == 0
    assert simple.meta["loops"] == "stripped"
    degs = sorted(set(simple.degrees().tolist()))
    assert degs == [3, 4]  # the four looped vertices lose one


def test_edges_listing():
    g = euclidean_graph(3, 2, "dot", 1)
    edges = g.edges()
    assert len(edges) == 18
    assert all(u <= v for u, v in edges)
