"""CLI behaviour: exit codes, report shape, golden reproduce scenarios."""

import io
import pathlib
import subprocess
import sys

import pytest

from nilcantor.cli import main

GOLDEN = pathlib.Path(__file__).parent / "golden"


def run_cli(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_spectrum_ex41(capsys):
    code, out, err = run_cli(["spectrum", "ex41", "--p", "2", "--depth", "4"], capsys)
    assert code == 0 and err == ""
    assert "steinitz_order_limit: 2^inf" in out
    assert "pi_inf: {2}" in out
    assert "pi_f: {}" in out


def test_spectrum_ex42(capsys):
    code, out, _ = run_cli(
        ["spectrum", "ex42", "--p", "2", "--q", "3", "--depth", "3"], capsys
    )
    assert code == 0
    assert "steinitz_order_limit: 2^inf * 3^inf" in out
    assert "pi_inf: {2,3}" in out


def test_spectrum_wild_truncated(capsys):
    code, out, _ = run_cli(
        ["spectrum", "wild", "--n", "2", "--r", "1", "--depth", "4", "--bound", "7"],
        capsys,
    )
    assert code == 0
    assert "pi_f: {2,3,5,7} (truncated)" in out
    assert "pi_inf: {}" in out


def test_discriminant_commands(capsys):
    code, out, _ = run_cli(
        ["discriminant", "ex41", "--p", "2", "--level", "1", "--depth", "4"], capsys
    )
    assert code == 0
    assert "orders: 4 1 1 1" in out and "stabilized: yes" in out and "limit_order: 1" in out

    code, out, _ = run_cli(
        ["discriminant", "ex42", "--p", "2", "--q", "3", "--level", "1", "--depth", "4"],
        capsys,
    )
    assert code == 0
    assert "orders: 6 6 6 6" in out and "limit_order: 6" in out

    code, out, _ = run_cli(
        [
            "discriminant", "stable",
            "--pi_f", "2,3", "--r", "1,1", "--n", "2,2", "--pi_inf", "5",
            "--level", "1", "--depth", "3",
        ],
        capsys,
    )
    assert code == 0
    assert "stabilized: yes" in out and "limit_order: 6" in out


def test_wildness_command(capsys):
    code, out, _ = run_cli(
        ["wildness", "wild", "--n", "2", "--r", "1", "--lmax", "3", "--dmax", "5"],
        capsys,
    )
    assert code == 0
    assert "verdict: WildEvidence" in out
    assert "order=3" in out and "order=15" in out and "order=5" in out


def test_freeness_command(capsys):
    code, out, _ = run_cli(
        [
            "freeness", "wild", "--n", "2", "--r", "1",
            "--level", "1", "--radius", "100", "--dmax", "6",
        ],
        capsys,
    )
    assert code == 0
    assert "verdict: FreeCertified" in out


def test_oracle_commands(capsys):
    code, out, _ = run_cli(["oracle", "core", "--box", "Box(2,2,4)"], capsys)
    assert code == 0 and "agree: yes" in out
    code, out, _ = run_cli(
        ["oracle", "relative-core", "--outer", "Box(2,3,6)", "--box", "Box(4,9,36)"],
        capsys,
    )
    assert code == 0 and "Box(12,18,36)" in out and "agree: yes" in out
    code, out, _ = run_cli(
        ["oracle", "canonical", "--box", "Box(2,2,4)", "--element", "(3,5,7)"], capsys
    )
    assert code == 0 and "(1,1,3)" in out
    code, out, _ = run_cli(["oracle", "partition", "--box", "Box(2,2,4)"], capsys)
    assert code == 0 and "classes: 16" in out
    code, out, _ = run_cli(
        ["oracle", "fixing", "wild", "--n", "2", "--r", "1", "--cylinder", "2", "--depth", "2"],
        capsys,
    )
    assert code == 0 and "scanned_size: 6" in out and "agree: yes" in out


def test_contract_violation_exits_2(capsys):
    code, _, err = run_cli(["spectrum", "nonsense", "--depth", "3"], capsys)
    assert code == 2 and "unknown chain reference" in err
    code, _, err = run_cli(["spectrum", "ex41", "--depth", "3"], capsys)
    assert code == 2 and "--p" in err
    code, _, err = run_cli(
        ["wildness", "ex41", "--p", "2", "--lmax", "1", "--dmax", "3"], capsys
    )
    assert code == 2


def test_resource_exhaustion_exits_3(capsys):
    code, _, err = run_cli(
        [
            "oracle", "fixing", "wild", "--n", "2", "--r", "1",
            "--cylinder", "1", "--depth", "3", "--max-group-order", "100",
        ],
        capsys,
    )
    assert code == 3 and "exceeds budget" in err


def test_config_file_chain(tmp_path, capsys):
    cfg = tmp_path / "chain.cfg"
    cfg.write_text(
        "label=by-hand\n"
        "prime=2 coord=a start=1 base=0 slope=1\n"
        "prime=2 coord=b start=1 base=0 slope=1\n"
        "prime=2 coord=c start=1 base=0 slope=2\n"
    )
    code, out, _ = run_cli(["spectrum", str(cfg), "--depth", "4"], capsys)
    assert code == 0
    assert "chain: by-hand" in out
    assert "steinitz_order_limit: 2^inf" in out


def test_config_parse_error_exits_2(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("prime=2 coord=z start=1 base=0 slope=1\n")
    code, _, err = run_cli(["spectrum", str(cfg), "--depth", "3"], capsys)
    assert code == 2 and "line 1" in err


@pytest.mark.parametrize(
    "name,argv",
    [
        ("reproduce_ex41", ["reproduce", "ex41"]),
        ("reproduce_ex42", ["reproduce", "ex42"]),
        ("reproduce_thm13", ["reproduce", "thm13"]),
        ("reproduce_thm15", ["reproduce", "thm15"]),
        ("reproduce_cor16", ["reproduce", "cor16", "--count", "5", "--bound", "200"]),
        ("spectrum_wild", ["spectrum", "wild", "--n", "2", "--r", "1", "--depth", "4", "--bound", "7"]),
    ],
)
def test_golden_reports(name, argv, capsys):
    code, out, _ = run_cli(argv, capsys)
    assert code == 0
    expected = (GOLDEN / f"{name}.txt").read_text()
    assert out == expected


def test_reports_are_deterministic(capsys):
    argv = ["reproduce", "cor16", "--count", "3", "--bound", "100"]
    _, first, _ = run_cli(argv, capsys)
    _, second, _ = run_cli(argv, capsys)
    assert first == second


def test_seed_is_echoed(capsys):
    code, out, _ = run_cli(["--seed", "7", "reproduce", "ex41"], capsys)
    assert code == 0
    assert out.rstrip().endswith("seed: 7")


def test_budget_env_var_applies(monkeypatch, capsys):
    monkeypatch.setenv("NILCANTOR_MAX_GROUP_ORDER", "100")
    code, _, err = run_cli(
        ["oracle", "fixing", "wild", "--n", "2", "--r", "1", "--cylinder", "1", "--depth", "3"],
        capsys,
    )
    assert code == 3 and "exceeds budget" in err
    monkeypatch.setenv("NILCANTOR_MAX_GROUP_ORDER", "2000000")
    code, out, _ = run_cli(
        ["oracle", "fixing", "wild", "--n", "2", "--r", "1", "--cylinder", "2", "--depth", "2"],
        capsys,
    )
    assert code == 0 and "agree: yes" in out


def test_console_entry_point():
    # one subprocess smoke test through the installed script machinery
    proc = subprocess.run(
        [sys.executable, "-m", "nilcantor.cli", "reproduce", "ex41"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "stable_image_l1_d2_order: 1" in proc.stdout
