import json
import os

import pytest

from koszulrank.cli import (
    EXIT_FALSIFICATION,
    EXIT_OK,
    EXIT_USAGE,
    main,
)


def _run(tmp_path, *argv):
    out = tmp_path / "out.jsonl"
    code = main(list(argv) + ["--out", str(out)])
    lines = [json.loads(line) for line in out.read_text().splitlines()]
    return code, lines


def test_verify_complex_passes(tmp_path):
    code, lines = _run(tmp_path, "verify-complex", "--n", "3", "--m", "1", "--char", "0",
                       "--trials", "10")
    assert code == EXIT_OK
    (report,) = lines
    assert report["passed"]
    assert report["homology_total"] == 8


def test_verify_complex_char2(tmp_path):
    code, lines = _run(tmp_path, "verify-complex", "--n", "2", "--m", "0", "--char", "2",
                       "--trials", "5")
    assert code == EXIT_OK
    assert lines[0]["homology_total"] == 1


def test_usage_errors():
    with pytest.raises(SystemExit) as info:
        main(["verify-complex", "--n", "0"])
    assert info.value.code == EXIT_USAGE
    with pytest.raises(SystemExit) as info:
        main(["cancellation", "--n", "2"])
    assert info.value.code == EXIT_USAGE
    with pytest.raises(SystemExit) as info:
        main(["certify", "--n", "3", "--char", "5"])
    assert info.value.code == EXIT_USAGE


def test_certify_run(tmp_path):
    code, lines = _run(tmp_path, "certify", "--n", "3", "--m", "1", "--char", "0",
                       "--grading", "full", "--trials", "5", "--seed", "3")
    assert code == EXIT_OK
    summary = lines[-1]
    assert summary["summary"] and summary["command"] == "certify"
    assert summary["trials_run"] == 5
    assert summary["falsifications"] == 0
    assert summary["min_rank"] >= summary["theorem_A"] == 8
    for line in lines[:-1]:
        assert line["satisfies_A"]
        assert line["certificates"]["mixed-full"]["injective"]
        assert set(line) >= {"n", "m", "char", "rank", "theorem_A", "eqn07", "satisfies_A", "grading"}


def test_certify_char2(tmp_path):
    code, lines = _run(tmp_path, "certify", "--n", "4", "--m", "1", "--char", "2",
                       "--trials", "5", "--seed", "5")
    assert code == EXIT_OK
    for line in lines[:-1]:
        assert line["certificates"]["mixed-base"]["injective"]
        assert line["certificates"]["block-diffs-4"]["injective"]
        assert "mixed-full" not in line["certificates"]


def test_cancellation_run(tmp_path):
    code, lines = _run(tmp_path, "cancellation", "--n", "6", "--m", "1", "--char", "0",
                       "--trials", "5", "--seed", "11")
    assert code == EXIT_OK
    summary = lines[-1]
    assert summary["falsifications"] == 0
    for line in lines[:-1]:
        assert line["nonzero"] and line["acyclic3"] and line["sink_valid"]


def test_cancellation_single_triple(tmp_path):
    code, lines = _run(tmp_path, "cancellation", "--n", "3", "--m", "1", "--char", "0",
                       "--trials", "3", "--seed", "2")
    assert code == EXIT_OK
    for line in lines[:-1]:
        assert line["vertices"] == 1
        assert line["acyclic3"]


def test_seed_determinism(tmp_path):
    out_a = tmp_path / "a.jsonl"
    out_b = tmp_path / "b.jsonl"
    argv = ["certify", "--n", "3", "--m", "1", "--char", "2", "--trials", "4", "--seed", "21"]
    assert main(argv + ["--out", str(out_a)]) == EXIT_OK
    assert main(argv + ["--out", str(out_b)]) == EXIT_OK
    assert out_a.read_bytes() == out_b.read_bytes()


def test_prime_bits_env(tmp_path, monkeypatch):
    monkeypatch.setenv("KOSZUL_PRIME_BITS", "33")
    code, lines = _run(tmp_path, "certify", "--n", "2", "--m", "1", "--char", "0",
                       "--trials", "2", "--seed", "1")
    assert code == EXIT_OK
    assert lines[-1]["min_rank"] == 4


def test_stdout_output(capsys):
    code = main(["verify-complex", "--n", "2", "--m", "1", "--char", "0", "--trials", "3"])
    assert code == EXIT_OK
    captured = capsys.readouterr().out
    assert json.loads(captured.splitlines()[0])["passed"]
