import json

from flab.cli import main


def test_analyze_s4(capsys):
    code = main(["analyze", "--group", "S4", "--formation", "N"])
    out = capsys.readouterr().out
    assert code == 0
    assert "order 24" in out
    assert "hypercenter" in out and "normalizer-intersection" in out


def test_analyze_sigma_choice(capsys):
    code = main(["analyze", "--group", "SL(2,3)", "--formation", "N", "--sigma", "cyclic"])
    out = capsys.readouterr().out
    assert code == 0
    assert "subnormalizer-intersection[cyclic]" in out


def test_lattice_command(capsys):
    code = main(["lattice", "--group", "D12"])
    out = capsys.readouterr().out
    assert code == 0
    assert "subgroups: 16" in out


def test_verify_single_check_table(capsys):
    code = main(["verify", "--check", "baer-a1", "--max-order", "24"])
    out = capsys.readouterr().out
    assert code == 0
    assert out.startswith("check baer-a1")
    assert "summary: pass=" in out


def test_verify_single_check_json(capsys):
    code = main([
        "verify", "--check", "prop1", "--formation", "Gpi{2,3}",
        "--max-order", "20", "--format", "json",
    ])
    out = capsys.readouterr().out
    assert code == 0
    payload = json.loads(out)
    assert payload["check"] == "prop1"
    assert payload["summary"]["fail"] == 0


def test_verify_partition_option(capsys):
    code = main([
        "verify", "--check", "theorem-a", "--partition", "{2,3},{5}",
        "--max-order", "30",
    ])
    assert code == 0
    out = capsys.readouterr().out
    assert "theorem-a" in out


def test_verify_corpus_file(tmp_path, capsys):
    path = tmp_path / "corpus.txt"
    path.write_text("S3\nQ8\nC12\n")
    code = main(["verify", "--check", "cor-a4", "--corpus", str(path)])
    out = capsys.readouterr().out
    assert code == 0
    assert "S3" in out and "Q8" in out


def test_verify_unknown_check_usage_error(capsys):
    code = main(["verify", "--check", "bogus", "--max-order", "6"])
    assert code == 2


def test_bad_group_spec_usage_error(capsys):
    code = main(["analyze", "--group", "Zorro", "--formation", "N"])
    assert code == 2


def test_env_var_max_order(monkeypatch, capsys):
    monkeypatch.setenv("FLAB_MAX_ORDER", "12")
    code = main(["verify", "--check", "baer-a1", "--format", "json"])
    out = capsys.readouterr().out
    payload = json.loads(out)
    assert code == 0
    assert max(row["order"] for row in payload["rows"]) <= 12


def test_probe_checks_do_not_flip_exit_code(capsys):
    # the supersoluble subnormalizer probe fails rows on the module product
    # corpus but the exit code stays 0
    code = main([
        "verify", "--check", "theorem-b", "--formation", "U", "--max-order", "40",
    ])
    assert code == 0


def test_reports_byte_identical_across_processes():
    # fresh interpreters (fresh hash seeds) must produce identical reports
    import subprocess
    import sys

    cmd = [
        sys.executable, "-m", "flab.cli",
        "verify", "--check", "theorem-a", "--partition", "{2,3},{5}",
        "--max-order", "30",
    ]
    runs = [
        subprocess.run(cmd, capture_output=True, text=True, env={"PATH": "/usr/bin:/bin", "PYTHONHASHSEED": seed})
        for seed in ("1", "77")
    ]
    assert runs[0].returncode == runs[1].returncode == 0
    assert runs[0].stdout == runs[1].stdout
    assert runs[0].stdout.strip()
