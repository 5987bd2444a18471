import pytest

from haarmagic.cli import build_parser, main, parse_int_list


def run_cli(*argv):
    return main(list(argv))


def test_parse_int_list_forms():
    assert parse_int_list("6") == [6]
    assert parse_int_list("2,5,7") == [2, 5, 7]
    assert parse_int_list("4..7") == [4, 5, 6, 7]
    assert parse_int_list("1,3..5") == [1, 3, 4, 5]


def test_sample_writes_records(tmp_path, capsys):
    out = tmp_path / "run"
    code = run_cli("sample", "--n", "2", "--samples", "100", "--seed", "1",
                   "--out", str(out))
    assert code == 0
    rows = (out / "records.csv").read_text().strip().split("\n")
    assert len(rows) == 101
    printed = capsys.readouterr().out
    assert "N=2" in printed and "mean_m2=" in printed
    # nothing written outside --out
    assert {p.name for p in tmp_path.iterdir()} == {"run"}
    assert {p.name for p in out.iterdir()} == {"records.csv", "summary.json"}


def test_sample_rerun_is_byte_identical(tmp_path):
    args = ("sample", "--n", "2", "--samples", "60", "--seed", "5")
    run_cli(*args, "--out", str(tmp_path / "a"))
    run_cli(*args, "--out", str(tmp_path / "b"))
    assert ((tmp_path / "a" / "records.csv").read_bytes()
            == (tmp_path / "b" / "records.csv").read_bytes())
    assert ((tmp_path / "a" / "summary.json").read_bytes()
            == (tmp_path / "b" / "summary.json").read_bytes())


def test_capability_limit_exit_code(tmp_path, capsys):
    code = run_cli("sample", "--n", "15", "--samples", "5", "--out", str(tmp_path / "x"))
    assert code == 3
    assert "14" in capsys.readouterr().err


def test_negative_depth_exit_code(tmp_path, capsys):
    code = run_cli("convergence", "--n", "2", "--depth", "-1", "--samples", "5",
                   "--out", str(tmp_path / "x"))
    assert code == 2
    assert "depth" in capsys.readouterr().err


def test_missing_qubit_counts_exit_code(capsys):
    assert run_cli("sample", "--samples", "5") == 2
    assert "--n" in capsys.readouterr().err


def test_unknown_flag_is_parse_error(capsys):
    with pytest.raises(SystemExit) as exc:
        run_cli("sample", "--n", "2", "--frobnicate", "1")
    assert exc.value.code == 2
    assert "--frobnicate" in capsys.readouterr().err


def test_help_lists_every_flag(capsys):
    with pytest.raises(SystemExit) as exc:
        run_cli("sample", "--help")
    assert exc.value.code == 0
    text = capsys.readouterr().out
    for flag in ("--config", "--n", "--depth", "--mode", "--samples", "--seed",
                 "--cut", "--workers", "--out"):
        assert flag in text


def test_convergence_prints_ks_table(tmp_path, capsys):
    code = run_cli("convergence", "--n", "2", "--depth", "0..1", "--samples", "400",
                   "--seed", "2", "--out", str(tmp_path / "c"))
    assert code == 0
    out = capsys.readouterr().out
    assert "ks_distance_to_haar" in out
    assert out.count("(N=2)") == 2


def test_scaling_warns_on_few_points_but_succeeds(tmp_path, capsys):
    code = run_cli("scaling", "--n", "4..5", "--samples", "80", "--seed", "3",
                   "--out", str(tmp_path / "s"))
    assert code == 0
    captured = capsys.readouterr()
    assert "unstable" in captured.err
    assert "slope" in captured.out or "too few" in captured.out


def test_config_file_with_flag_override(tmp_path, capsys):
    cfg = tmp_path / "campaign.cfg"
    cfg.write_text("# demo campaign\nn = 2\nsamples = 60\nseed = 9\n")
    out = tmp_path / "cfgrun"
    code = run_cli("sample", "--config", str(cfg), "--samples", "40",
                   "--out", str(out))
    assert code == 0
    rows = (out / "records.csv").read_text().strip().split("\n")
    assert len(rows) == 41  # flag wins over file


def test_config_file_unknown_key(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("qubits = 3\n")
    assert run_cli("sample", "--config", str(cfg)) == 2
    assert "qubits" in capsys.readouterr().err


def test_verify_passes_on_healthy_build(capsys):
    assert run_cli("verify", "--trials", "5") == 0
    out = capsys.readouterr().out
    assert "[PASS] oracle_equivalence" in out
    assert "[FAIL]" not in out


def test_verify_detects_injected_qr_fault(capsys):
    assert run_cli("verify", "--trials", "3", "--inject-fault", "qr-phase") != 0
    out = capsys.readouterr().out
    assert "[FAIL] haar_unitary_phases" in out


def test_parser_requires_subcommand():
    with pytest.raises(SystemExit) as exc:
        build_parser().parse_args([])
    assert exc.value.code == 2
