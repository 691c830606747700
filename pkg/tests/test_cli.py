import json
import subprocess
import sys

import pytest

from spectraff.cli import main


def run_cli(args, capsys):
    code = main(args)
    out = capsys.readouterr().out
    return code, out


def test_certify_norm_example(capsys):
    code, out = run_cli(
        ["certify", "--family", "norm", "--q", "3", "--n", "2", "--lambda", "1"],
        capsys,
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["d_claim"] == 4
    assert payload["lambda_claim"] == 3.0
    assert payload["satisfied"] is True


def test_certify_halved_claim_fails(capsys):
    code, _ = run_cli(
        ["certify", "--family", "norm", "--q", "3", "--n", "2", "--lambda", "1",
         "--lambda-claim", "1.5"],
        capsys,
    )
    assert code == 1


def test_construct_euclidean_edge_list(capsys):
    code, out = run_cli(
        ["construct", "--family", "euclidean", "--q", "3", "--d", "2",
         "--lambda", "1"],
        capsys,
    )
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0].startswith("# family=euclidean")
    assert lines[1] == "u,v"
    assert len(lines) - 2 == 18  # 9 vertices, 4-regular, loop-free


def test_construct_colored(capsys):
    code, out = run_cli(
        ["construct", "--family", "euclidean", "--q", "3", "--d", "2",
         "--lambda", "all"],
        capsys,
    )
    assert code == 0
    assert "u,v,color" in out.splitlines()[1]


def test_construct_simple_variant(capsys):
    code_full, out_full = run_cli(
        ["construct", "--family", "norm", "--q", "3", "--n", "2", "--lambda", "1"],
        capsys,
    )
    code_simple, out_simple = run_cli(
        ["construct", "--family", "norm", "--q", "3", "--n", "2", "--lambda", "1",
         "--simple"],
        capsys,
    )
    assert code_full == code_simple == 0
    full_edges = len(out_full.strip().splitlines()) - 2
    simple_edges = len(out_simple.strip().splitlines()) - 2
    assert full_edges - simple_edges == 4  # the four loops


def test_output_files_byte_identical(tmp_path, capsys):
    args = ["mix", "--family", "product", "--q", "3", "--d", "2", "--lambda", "1",
            "--pairs", "10", "--quiet"]
    f1, f2 = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(args + ["--output", str(f1)]) == 0
    assert main(args + ["--output", str(f2)]) == 0
    capsys.readouterr()
    assert f1.read_bytes() == f2.read_bytes()


def test_mix_falsifiability(capsys):
    code, _ = run_cli(
        ["mix", "--family", "norm", "--q", "3", "--n", "2", "--lambda", "1",
         "--pairs", "5", "--lambda-scale", "0.5", "--quiet"],
        capsys,
    )
    assert code == 1


def test_count_ops(capsys):
    for op in ("star", "path2", "kst", "k2t"):
        code, out = run_cli(
            ["count", "--family", "euclidean", "--q", "5", "--d", "2",
             "--lambda", "1", "--op", op, "--pairs", "4"],
            capsys,
        )
        assert code == 0, op
        header = out.strip().splitlines()[1]
        assert header == "family,params,pair,check,observed,expected,bound,satisfied,seed"


def test_coverage_command(capsys):
    code, out = run_cli(
        ["coverage", "--family", "euclidean", "--q", "5", "--d", "2",
         "--t", "3", "--sizes", "5,10", "--trials", "3"],
        capsys,
    )
    assert code == 0
    assert "hypothesis_met" in out.splitlines()[1]


def test_pinned_command_json(capsys):
    code, out = run_cli(
        ["pinned", "--family", "euclidean", "--q", "5", "--d", "2",
         "--size", "12", "--format", "json"],
        capsys,
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["summary"]["cauchy_schwarz_ok"] is True


def test_sumprod_command(capsys):
    code, out = run_cli(["sumprod", "--q", "11", "--d", "2", "--trials", "5"], capsys)
    assert code == 0
    assert out.count("true") == 5


def test_cap_exit_code(capsys):
    code = main(["certify", "--family", "norm", "--q", "3", "--n", "8",
                 "--lambda", "1"])
    capsys.readouterr()
    assert code == 3


def test_usage_exit_code():
    assert main(["certify", "--family", "norm", "--q", "3"]) == 2  # n missing


def test_spec_file_input(tmp_path, capsys):
    spec = {"family": "product", "q": 3, "d": 2, "lambda": "1"}
    path = tmp_path / "spec.json"
    path.write_text(json.dumps(spec))
    code, out = run_cli(["certify", "--spec", str(path)], capsys)
    assert code == 0
    assert json.loads(out)["satisfied"] is True


def test_acceptance_wrapper_exit_codes(monkeypatch, capsys):
    from spectraff import acceptance as acc
    from spectraff.acceptance import AcceptanceResult, CriterionResult

    good = AcceptanceResult([CriterionResult(1, "x", True, "ok")])
    bad = AcceptanceResult([CriterionResult(1, "x", False, "no")])
    monkeypatch.setattr(acc, "run_acceptance", lambda **kw: good)
    assert main(["acceptance", "--quiet"]) == 0
    monkeypatch.setattr(acc, "run_acceptance", lambda **kw: bad)
    assert main(["acceptance", "--quiet"]) == 1
    capsys.readouterr()


def test_module_invocation_subprocess():
    proc = subprocess.run(
        [sys.executable, "-m", "spectraff.cli", "certify", "--family", "norm",
         "--q", "5", "--n", "2", "--lambda", "2"],
        capture_output=True, text=True, timeout=120,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["satisfied"] is True
