"""Command-line entry point.

Subcommands: construct, certify, mix, count, coverage, pinned, sumprod,
acceptance. Outputs are deterministic for a fixed seed (default 42): byte-
identical CSV or JSON, written to --output or stdout.

Exit codes: 0 success, 1 failed hard assertion, 2 bad usage, 3 cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import acceptance as acceptance_mod
from .config import DEFAULT_SEED, ENV_MAX_VERTICES, CapExceeded
from .counting import k2t_sum, kst_sum, path2_check, star_sum
from .experiments import (
    coverage_experiment,
    derived_rng,
    mixing_grid,
    pinned_experiment,
    sample_subset,
    sumproduct_experiment,
)
from .families import FamilySpec, build_colored, build_graph, claimed_parameters
from .graphs import certify_ndl
from .report import (
    colored_edge_list_rows,
    edge_list_rows,
    rows_to_csv,
    to_json_text,
)

EXIT_OK = 0
EXIT_ASSERTION = 1
EXIT_USAGE = 2
EXIT_CAP = 3


def _add_family_flags(parser: argparse.ArgumentParser):
    parser.add_argument("--spec", help="path to a family spec JSON file")
    parser.add_argument("--family", choices=["norm", "product", "sumproduct",
                                             "euclidean", "noneuclidean"])
    parser.add_argument("--q", type=int, help="base field order (odd prime power)")
    parser.add_argument("--n", type=int, help="extension degree (norm family)")
    parser.add_argument("--d", type=int, help="dimension (vector families)")
    parser.add_argument("--form", default=None,
                        help="dot, offdiag, or a JSON matrix of integers")
    parser.add_argument("--lambda", dest="lam", default=None,
                        help="element literal (digits, low first) or 'all'")
    parser.add_argument("--simple", action="store_true",
                        help="strip loops (simple-graph variant)")


def _add_common_flags(parser: argparse.ArgumentParser):
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED)
    parser.add_argument("--output", "-o", default=None, help="file path; stdout if omitted")
    parser.add_argument("--format", choices=["csv", "json"], default="csv")
    parser.add_argument("--max-vertices", type=int, default=None,
                        help="shrink the vertex cap for this run")
    parser.add_argument("--quiet", action="store_true", help="suppress stdout echo")


def _parse_form(raw):
    if raw is None or raw in ("dot", "offdiag"):
        return raw
    return json.loads(raw)


def _family_spec(args) -> FamilySpec:
    if args.spec:
        with open(args.spec, "r", encoding="utf-8") as fh:
            return FamilySpec.from_json(json.load(fh))
    if not args.family or not args.q:
        raise ValueError("need --family and --q (or --spec FILE)")
    return FamilySpec(
        family=args.family,
        q=args.q,
        n=args.n,
        d=args.d,
        form=_parse_form(args.form),
        lam=args.lam,
        loops=not args.simple,
    )


def _emit(args, text: str):
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        if not args.quiet:
            print(f"wrote {args.output}")
    elif not args.quiet:
        sys.stdout.write(text)


def _emit_rows(args, rows, header: str):
    if args.format == "json":
        _emit(args, to_json_text({"header": header, "rows": rows}))
    else:
        _emit(args, rows_to_csv(rows, header_comment=header))


def _param_header(spec: FamilySpec) -> str:
    parts = [f"family={spec.family}", f"q={spec.q}"]
    if spec.n:
        parts.append(f"n={spec.n}")
    if spec.d:
        parts.append(f"d={spec.d}")
    if spec.form:
        parts.append(f"form={spec.form}")
    if spec.lam is not None:
        parts.append(f"lambda={spec.lam}")
    parts.append(f"loops={'kept' if spec.loops else 'stripped'}")
    return " ".join(parts)


# ---------------------------------------------------------------------------
# handlers
# ---------------------------------------------------------------------------

def cmd_construct(args) -> int:
    spec = _family_spec(args)
    header = _param_header(spec)
    if spec.lam == "all" or spec.family == "noneuclidean":
        cg = build_colored(spec)
        rows = list(colored_edge_list_rows(cg))
    else:
        g = build_graph(spec)
        rows = list(edge_list_rows(g))
    _emit_rows(args, rows, header)
    return EXIT_OK


def cmd_certify(args) -> int:
    spec = _family_spec(args)
    if spec.family == "noneuclidean":
        if args.relation is None:
            raise ValueError("pick a relation class with --relation (2 <= i <= (q-1)/2)")
        cg = build_colored(spec)
        if args.relation not in cg.colors():
            raise ValueError(f"relation {args.relation} not in {cg.colors()}")
        g = cg.color_class(args.relation)
        claims = claimed_parameters(spec)
        degs = g.degrees()
        d_claim = args.d_claim if args.d_claim is not None else int(degs[0])
    else:
        g = build_graph(spec)
        claims = claimed_parameters(spec)
        d_claim = args.d_claim if args.d_claim is not None else claims.degree
    if args.lambda_claim is not None:
        lam_claim = args.lambda_claim
        lam_sq = Fraction(args.lambda_claim).limit_denominator(10 ** 9) ** 2
    else:
        lam_claim = claims.lambda_claim
        lam_sq = claims.lambda_sq
    cert = certify_ndl(g, d_claim, lam_claim, lam_sq)
    _emit(args, to_json_text(cert.row()))
    return EXIT_OK if cert.satisfied else EXIT_ASSERTION


def cmd_mix(args) -> int:
    spec = _family_spec(args)
    report = mixing_grid([spec], pairs=args.pairs, seed=args.seed,
                         lambda_scale=args.lambda_scale)
    _emit_rows(args, report.rows, f"mixing {_param_header(spec)} pairs={args.pairs}")
    if not report.ok and not args.quiet:
        for line in report.hard_failures:
            print(f"FAIL: {line}", file=sys.stderr)
    return EXIT_OK if report.ok else EXIT_ASSERTION


def cmd_count(args) -> int:
    spec = _family_spec(args)
    g = build_graph(spec)
    claims = claimed_parameters(spec)
    cert = certify_ndl(g, claims.degree, claims.lambda_claim, claims.lambda_sq)
    if not cert.satisfied:
        print("certificate failed; cannot run bounded counts", file=sys.stderr)
        return EXIT_ASSERTION
    rng = derived_rng(args.seed, g.n_vertices)
    rows = []
    ok = True
    params = _param_header(spec)
    for k in range(args.pairs):
        u1 = sample_subset(rng, g.n_vertices, int(rng.integers(1, args.max_side + 1)))
        u2 = sample_subset(rng, g.n_vertices, int(rng.integers(1, args.max_side + 1)))
        if args.op == "star":
            observed = star_sum(g, u1, u2, args.t)
            expected = (Fraction(cert.degree, g.n_vertices) ** args.t
                        * len(u1) * len(u2) ** args.t)
            row = {"check": f"star[t={args.t}]", "observed": observed,
                   "expected": float(expected), "bound": "", "satisfied": ""}
        elif args.op == "path2":
            rep = path2_check(g, cert, u1, u2)
            ok = ok and rep.satisfied
            row = rep.row()
            row["bound"] = ""
        elif args.op == "kst":
            rep = kst_sum(g, u1, u2, args.s, args.t)
            other = kst_sum(g, u1, u2, args.s, args.t,
                            side="u2" if len(u1) ** args.s <= len(u2) ** args.t else "u1")
            agree = rep.observed == other.observed
            ok = ok and agree
            row = rep.row()
            row.update(bound="", satisfied=agree)
        else:  # k2t
            rep = k2t_sum(g, u1, u2, args.t, cert)
            row = rep.row()
            row["satisfied"] = ""
        row.update(family=spec.family, params=params, seed=args.seed, pair=k)
        rows.append(row)
    fields = ["family", "params", "pair", "check", "observed", "expected",
              "bound", "satisfied", "seed"]
    if args.format == "json":
        _emit(args, to_json_text({"rows": rows}))
    else:
        _emit(args, rows_to_csv(rows, fieldnames=fields, header_comment=params))
    return EXIT_OK if ok else EXIT_ASSERTION


def cmd_coverage(args) -> int:
    spec = _family_spec(args)
    sizes = [int(s) for s in args.sizes.split(",")]
    report = coverage_experiment(
        spec.family, spec.q, args.t, sizes=sizes, trials=args.trials,
        seed=args.seed, n=spec.n, d=spec.d, form=spec.form,
        sphere_mode=args.sphere,
    )
    if args.format == "json":
        _emit(args, to_json_text({"rows": report.rows, "summary": report.summary}))
    else:
        _emit_rows(args, report.rows, f"coverage {_param_header(spec)} t={args.t}")
    return EXIT_OK if report.ok else EXIT_ASSERTION


def cmd_pinned(args) -> int:
    spec = _family_spec(args)
    report = pinned_experiment(
        spec.family, spec.q, size=args.size, n=spec.n, d=spec.d,
        form=spec.form, size_b=args.size_b, seed=args.seed,
    )
    if args.format == "json":
        _emit(args, to_json_text({"rows": report.rows, "summary": report.summary}))
    else:
        _emit_rows(args, report.rows, f"pinned {_param_header(spec)}")
    return EXIT_OK if report.ok else EXIT_ASSERTION


def cmd_sumprod(args) -> int:
    report = sumproduct_experiment(args.q, args.d, trials=args.trials,
                                   size=args.size, seed=args.seed)
    _emit_rows(args, report.rows, f"sumproduct q={args.q} d={args.d}")
    return EXIT_OK if report.ok else EXIT_ASSERTION


def cmd_acceptance(args) -> int:
    echo = None if args.quiet else print
    result = acceptance_mod.run_acceptance(seed=args.seed, jobs=args.jobs, echo=echo)
    if args.out_dir:
        acceptance_mod.write_outputs(result, args.out_dir)
        if not args.quiet:
            print(f"artifacts in {args.out_dir}")
    return EXIT_OK if result.ok else EXIT_ASSERTION


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spectraff",
        description="pseudo-random graph families over finite fields: "
                    "constructions, spectral certificates, counting experiments",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="emit an edge list")
    _add_family_flags(p)
    _add_common_flags(p)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("certify", help="certify the (n, d, lambda) triple")
    _add_family_flags(p)
    _add_common_flags(p)
    p.add_argument("--d-claim", type=int, default=None)
    p.add_argument("--lambda-claim", type=float, default=None)
    p.add_argument("--relation", type=int, default=None,
                   help="relation class index (noneuclidean family)")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("mix", help="mixing / variance / path bounds on random pairs")
    _add_family_flags(p)
    _add_common_flags(p)
    p.add_argument("--pairs", type=int, default=200)
    p.add_argument("--lambda-scale", type=float, default=1.0,
                   help="rescale the claimed bound (0.5 must fail)")
    p.set_defaults(func=cmd_mix)

    p = sub.add_parser("count", help="star / path / complete-bipartite counts")
    _add_family_flags(p)
    _add_common_flags(p)
    p.add_argument("--op", choices=["star", "path2", "kst", "k2t"], default="kst")
    p.add_argument("--s", type=int, default=2)
    p.add_argument("--t", type=int, default=2)
    p.add_argument("--pairs", type=int, default=20)
    p.add_argument("--max-side", type=int, default=12)
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("coverage", help="realized color patterns of K_t in samples")
    _add_family_flags(p)
    _add_common_flags(p)
    p.add_argument("--t", type=int, default=3)
    p.add_argument("--sizes", default="8,16,32")
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--sphere", action="store_true",
                   help="sample from the unit sphere (euclidean family)")
    p.set_defaults(func=cmd_coverage)

    p = sub.add_parser("pinned", help="pinned color-set sizes per sampled point")
    _add_family_flags(p)
    _add_common_flags(p)
    p.add_argument("--size", type=int, default=16)
    p.add_argument("--size-b", type=int, default=None)
    p.set_defaults(func=cmd_pinned)

    p = sub.add_parser("sumprod", help="sum-product inequality on random sets")
    _add_common_flags(p)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--size", type=int, default=None)
    p.set_defaults(func=cmd_sumprod)

    p = sub.add_parser("acceptance", help="run the full acceptance grid")
    _add_common_flags(p)
    p.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    p.add_argument("--out-dir", default=None)
    p.set_defaults(func=cmd_acceptance)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else EXIT_OK
    if getattr(args, "max_vertices", None):
        os.environ[ENV_MAX_VERTICES] = str(args.max_vertices)
    try:
        return args.func(args)
    except CapExceeded as exc:
        print(f"cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (ValueError, OSError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
