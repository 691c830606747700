"""Experiment-layer tests: brute-force loop oracles against the counters."""

import itertools

import numpy as np
import pytest

from spectraff.config import CapExceeded
from spectraff.counting import edge_count, kt_color_coverage
from spectraff.experiments import (
    ExperimentReport,
    SystemSpec,
    coverage_by_pattern_scan,
    coverage_experiment,
    derived_rng,
    iterated_sumset,
    mixing_grid,
    mixing_suite,
    pattern_space_size,
    pinned_experiment,
    solve_count,
    sumproduct_check,
    sumproduct_experiment,
    system_value_matrix,
)
from spectraff.families import FamilySpec, build_graph, claimed_parameters, colored_family
from spectraff.fields import build_ext, field_from_order
from spectraff.graphs import certify_ndl


# ---------------------------------------------------------------------------
# solve_count
# ---------------------------------------------------------------------------

def test_solve_count_norm_full_field():
    spec = SystemSpec(kind="norm", t=2, q=3, n=2, lambdas={(1, 2): "1"})
    count = solve_count(spec, range(9))
    assert count == 9 * 4  # each X has exactly fiber-size partners


def test_solve_count_empty_set():
    spec = SystemSpec(kind="quadratic", t=3, q=3, d=2, lambdas={(1, 2): "1"})
    assert solve_count(spec, []) == 0


def test_solve_count_matches_brute_force_triples():
    spec = SystemSpec(
        kind="quadratic", t=3, q=3, d=2,
        lambdas={(1, 2): "1", (1, 3): "1", (2, 3): "1"},
    )
    e_set = list(range(9))
    values = system_value_matrix(spec, e_set)
    lam_enc = 1
    brute = sum(
        1
        for x in e_set
        for y in e_set
        for z in e_set
        if values[x, y] == lam_enc and values[x, z] == lam_enc and values[y, z] == lam_enc
    )
    assert solve_count(spec, e_set) == brute


def test_solve_count_t2_equals_colored_edge_count():
    # euclidean: vertex index equals vector encoding
    cg = colored_family("euclidean", 5, d=2)
    ctx = field_from_order(5)
    lam = ctx.decode(2)
    cls = cg.color_class(lam)
    rng = derived_rng(42, 1)
    e_set = sorted(rng.choice(25, size=12, replace=False).tolist())
    spec = SystemSpec(kind="quadratic", t=2, q=5, d=2, lambdas={(1, 2): lam})
    assert solve_count(spec, e_set) == edge_count(cls, e_set, e_set)


def test_solve_count_norm_t2_equals_colored_edge_count():
    cg = colored_family("norm", 3, n=2)
    ctx = field_from_order(3)
    lam = ctx.decode(2)
    cls = cg.color_class(lam)
    e_set = [0, 1, 3, 4, 7, 8]
    spec = SystemSpec(kind="norm", t=2, q=3, n=2, lambdas={(1, 2): lam})
    assert solve_count(spec, e_set) == edge_count(cls, e_set, e_set)


def test_solve_count_free_slots():
    spec = SystemSpec(kind="quadratic", t=3, q=3, d=2,
                      lambdas={(1, 2): "1", (1, 3): "free", (2, 3): "free"})
    e_set = list(range(9))
    pair_spec = SystemSpec(kind="quadratic", t=2, q=3, d=2, lambdas={(1, 2): "1"})
    assert solve_count(spec, e_set) == solve_count(pair_spec, e_set) * 9


def test_solve_count_summed_over_nonzero_matrices():
    # summing over all lambda matrices with entries in F_q* counts exactly
    # the ordered triples with no zero-valued pair (repeated vertices always
    # produce one)
    q = 3
    e_set = list(range(9))
    total = 0
    for lams in itertools.product(range(1, q), repeat=3):
        spec = SystemSpec(
            kind="quadratic", t=3, q=q, d=2,
            lambdas={(1, 2): str(lams[0]), (1, 3): str(lams[1]), (2, 3): str(lams[2])},
        )
        total += solve_count(spec, e_set)
    # oracle: direct triple enumeration
    probe = SystemSpec(kind="quadratic", t=2, q=q, d=2, lambdas={(1, 2): "0"})
    values = system_value_matrix(probe, e_set)
    expected = sum(
        1
        for x in e_set
        for y in e_set
        for z in e_set
        if values[x, y] != 0 and values[x, z] != 0 and values[y, z] != 0
    )
    assert total == expected
    m = len(e_set)
    assert total == m * (m - 1) * (m - 2)  # the form is anisotropic at q = 3


def test_solve_count_budget_guard():
    spec = SystemSpec(kind="quadratic", t=4, q=7, d=2, lambdas={(1, 2): "1"})
    with pytest.raises(CapExceeded):
        solve_count(spec, range(49 * 3))  # 147^4 > budget


def test_solve_count_t2_product_family_with_index_shift():
    # colored product graph vertices exclude the zero vector: index = enc - 1
    cg = colored_family("product", 5, d=2)
    ctx = field_from_order(5)
    lam = ctx.decode(3)
    cls = cg.color_class(lam)
    encs = [1, 2, 5, 7, 11, 13, 24]  # nonzero vector encodings
    spec = SystemSpec(kind="bilinear", t=2, q=5, d=2, lambdas={(1, 2): lam})
    idx = [e - 1 for e in encs]
    assert solve_count(spec, encs) == edge_count(cls, idx, idx)


def test_solve_count_t2_sumproduct_family():
    cg = colored_family("sumproduct", 3, d=1)
    ctx = field_from_order(3)
    lam = ctx.decode(1)
    cls = cg.color_class(lam)
    e_set = [0, 2, 3, 5, 8]
    spec = SystemSpec(kind="sumproduct", t=2, q=3, d=1, lambdas={(1, 2): lam})
    assert solve_count(spec, e_set) == edge_count(cls, e_set, e_set)


def test_norm_solvability_dense_sets_always_solvable():
    from spectraff.experiments import norm_solvability_report

    # above the q^(n+2) threshold the count must be positive for every lambda
    rep = norm_solvability_report(3, 3, sizes=[(16, 16), (20, 15), (27, 10)])
    assert rep.ok
    asserted = [r for r in rep.rows if r["asserted"]]
    assert asserted and all(r["observed"] > 0 for r in asserted)


def test_norm_solvability_below_threshold_reports_only():
    from spectraff.experiments import norm_solvability_report

    rep = norm_solvability_report(3, 2, sizes=[(4, 4)])
    assert rep.ok
    assert all(not r["asserted"] for r in rep.rows)


def test_system_spec_from_json():
    spec = SystemSpec.from_json({
        "kind": "quadratic", "t": 3, "q": 5, "d": 2,
        "lambdas": {"1,2": "1", "1,3": "free", "2,3": None},
    })
    assert spec.lambdas[(1, 2)].encoding == 1
    assert spec.lambdas[(1, 3)] is None and spec.lambdas[(2, 3)] is None
    with pytest.raises(ValueError):
        SystemSpec(kind="quadratic", t=5, q=3, d=2, lambdas={})
    with pytest.raises(ValueError):
        SystemSpec(kind="quadratic", t=3, q=3, d=2, lambdas={(2, 1): "1"})


def test_sumproduct_system_value_matrix():
    spec = SystemSpec(kind="sumproduct", t=2, q=3, d=1, lambdas={(1, 2): "0"})
    # vertex encoding e = a + q*b over F_3 x F_3
    values = system_value_matrix(spec, range(9))
    for e1 in range(9):
        a1, b1 = e1 % 3, e1 // 3
        for e2 in range(9):
            a2, b2 = e2 % 3, e2 // 3
            assert values[e1, e2] == (b1 * b2 - a1 - a2) % 3


# ---------------------------------------------------------------------------
# coverage
# ---------------------------------------------------------------------------

def test_pattern_space_size_triangle():
    # multisets of 3 colors out of c: c(c+1)(c+2)/6
    for c in (1, 2, 4, 6):
        assert pattern_space_size(c, 3) == c * (c + 1) * (c + 2) // 6


def test_pattern_space_size_t2():
    for c in (1, 3, 5):
        assert pattern_space_size(c, 2) == c


def test_coverage_oracle_equivalence_small():
    for family, kwargs in [("euclidean", {"d": 2}), ("product", {"d": 2})]:
        cg = colored_family(family, 5, **kwargs)
        u = list(range(cg.n_vertices))
        assert kt_color_coverage(cg, u, 3) == coverage_by_pattern_scan(cg, u, 3)


def test_coverage_experiment_full_universe_matches_scan():
    cg = colored_family("euclidean", 5, d=2)
    rep = coverage_experiment("euclidean", 5, 3, sizes=[25], trials=1, d=2)
    scan = coverage_by_pattern_scan(cg, range(25), 3)
    assert rep.rows[0]["observed"] == scan


def test_coverage_experiment_deterministic_and_monotone():
    rep = coverage_experiment("euclidean", 5, 3, sizes=[6, 12, 25], trials=20, d=2)
    again = coverage_experiment("euclidean", 5, 3, sizes=[6, 12, 25], trials=20, d=2)
    assert rep.rows == again.rows
    means = list(rep.summary["mean_coverage"].values())
    assert means == sorted(means)
    assert all(row["observed"] <= rep.summary["pattern_space"] for row in rep.rows)


def test_coverage_experiment_single_point_sets():
    rep = coverage_experiment("euclidean", 5, 3, sizes=[1, 2], trials=3, d=2)
    for row in rep.rows:
        if row["size"] == 1:
            assert row["observed"] == 0


def test_coverage_sphere_mode():
    rep = coverage_experiment("euclidean", 5, 2, sizes=[4], trials=4, d=2,
                              sphere_mode=True)
    assert rep.rows
    assert rep.summary["threshold"] == 5 ** ((2 + 2 - 2) / 2)


# ---------------------------------------------------------------------------
# pinned sets
# ---------------------------------------------------------------------------

def test_pinned_experiment_full_universe_euclidean():
    rep = pinned_experiment("euclidean", 5, size=25, d=2)
    assert rep.ok
    # every pin reaches every nonzero distance
    assert all(row["observed"] == 4 for row in rep.rows)
    assert rep.summary["cauchy_schwarz_ok"]


def test_pinned_experiment_singleton_target_norm():
    rep = pinned_experiment("norm", 3, size=6, n=2, size_b=1)
    assert rep.ok
    assert all(row["observed"] <= 1 for row in rep.rows)


def test_pinned_experiment_seed_recorded():
    rep = pinned_experiment("product", 5, size=10, d=2, seed=99)
    assert all(row["seed"] == 99 for row in rep.rows)


# ---------------------------------------------------------------------------
# sum-product inequality
# ---------------------------------------------------------------------------

def test_sumproduct_check_full_multiplicative_group():
    q = 11
    row = sumproduct_check(list(range(1, q)), q, 2)
    assert row["satisfied"]
    assert row["size_aa"] == q - 1
    assert row["size_da"] == q


def test_sumproduct_check_singleton():
    row = sumproduct_check([3], 11, 2)
    assert row["satisfied"]
    assert row["size_aa"] == 1 and row["size_da"] == 1


def test_sumproduct_check_rejects_zero():
    with pytest.raises(ValueError):
        sumproduct_check([0, 1], 11, 2)


def test_sumproduct_iterated_sumset():
    ctx = field_from_order(7)
    assert iterated_sumset(ctx, [1, 2], 2) == {2, 3, 4}
    assert iterated_sumset(ctx, [1], 3) == {3}


def test_sumproduct_experiment_batch():
    rep = sumproduct_experiment(11, 2, trials=25, seed=42)
    assert rep.ok and len(rep.rows) == 25
    rep3 = sumproduct_experiment(11, 3, trials=10, seed=42)
    assert rep3.ok


def test_sumproduct_nonprime_field():
    row = sumproduct_check([1, 3, 4], 9, 2)
    assert row["satisfied"]


# ---------------------------------------------------------------------------
# mixing grid
# ---------------------------------------------------------------------------

def test_mixing_suite_matches_single_pair_checks():
    from spectraff.counting import mixing_check as single_mixing

    spec = FamilySpec(family="norm", q=5, n=2, lam="1")
    g = build_graph(spec)
    claims = claimed_parameters(spec)
    cert = certify_ndl(g, claims.degree, claims.lambda_claim, claims.lambda_sq)
    rep = mixing_suite(g, cert, pairs=40, seed=42)
    assert rep.ok
    # recompute a few rows with the single-pair exact API
    rng = derived_rng(42, g.n_vertices, cert.degree)
    for k in range(40):
        b = np.sort(rng.choice(g.n_vertices, size=int(rng.integers(1, 26)), replace=False))
        c = np.sort(rng.choice(g.n_vertices, size=int(rng.integers(1, 26)), replace=False))
        if k < 5:
            row = rep.rows[k]
            assert row["e_bc"] == edge_count(g, b, c)
            assert row["mixing_ok"] == single_mixing(g, cert, b, c).satisfied


def test_mixing_grid_small():
    specs = [
        FamilySpec(family="norm", q=3, n=2, lam="1"),
        FamilySpec(family="product", q=3, d=2, lam="2"),
        FamilySpec(family="sumproduct", q=3, d=1, lam="0"),
        FamilySpec(family="euclidean", q=3, d=2, lam="1"),
    ]
    rep = mixing_grid(specs, pairs=25, seed=42)
    assert rep.ok
    assert len(rep.rows) > len(specs)


def test_mixing_grid_empty():
    rep = mixing_grid([], pairs=10)
    assert rep.ok and rep.rows == []


def test_mixing_grid_falsifiable():
    specs = [FamilySpec(family="norm", q=3, n=2, lam="1")]
    rep = mixing_grid(specs, pairs=5, lambda_scale=0.5)
    assert not rep.ok  # halved claim must fail certification
