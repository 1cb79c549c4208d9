"""CLI runner: config parsing, validation, presets, determinism."""

import json

import pytest

from ctrlcost.cli import parse_config, validate, run, PRESETS, main


# ---------------------------------------------------------------------------
# config parsing

def test_unknown_top_level_keys_rejected():
    with pytest.raises(ValueError, match="unknown config keys"):
        parse_config({"model": "lz", "bogus": 1})


def test_unknown_model_and_params_rejected():
    with pytest.raises(ValueError, match="unknown model"):
        parse_config({"model": "ising"})
    with pytest.raises(ValueError, match="unknown params"):
        parse_config({"model": "lz", "params": {"omega0": 1.0}})


def test_tau_grid_expansion():
    cfg = parse_config({"model": "lz", "tau": {"min": 1.0, "max": 4.0, "num": 3,
                                               "log": False}})
    assert cfg.tau == [1.0, 2.5, 4.0]
    cfg = parse_config({"model": "lz", "tau": {"min": 1.0, "max": 100.0, "num": 3}})
    assert cfg.tau == pytest.approx([1.0, 10.0, 100.0])


def test_preset_resolution_and_param_merge():
    cfg = parse_config({"preset": "fig5", "params": {"n_cut": 50}})
    assert cfg.model == "jc"
    assert cfg.params["alpha"] == 2.0     # kept from preset
    assert cfg.params["n_cut"] == 50      # user override
    with pytest.raises(ValueError, match="unknown preset"):
        parse_config({"preset": "fig9"})


def test_digest_stable_and_out_independent():
    a = parse_config({"model": "lz", "tau": [1.0], "out": "x"})
    b = parse_config({"model": "lz", "tau": [1.0], "out": "y"})
    assert a.digest() == b.digest()


# ---------------------------------------------------------------------------
# validation

def test_fig_presets_validate_cleanly():
    for name in ("fig1", "fig3", "fig3-oc", "fig4", "fig5"):
        cfg = parse_config({"preset": name})
        report = validate(cfg)
        assert report["valid"], (name, report)


def test_oscillator_cd_below_edge_flagged():
    cfg = parse_config({"model": "oscillator", "tau": [1.0]})
    report = validate(cfg)
    assert not report["valid"]
    checks = {c["check"]: c["ok"] for c in report["checks"]}
    assert checks["cd_validity tau=1"] is False


def test_jc_large_alpha_tail_flagged():
    cfg = parse_config({"model": "jc", "params": {"alpha": 5.0, "n_cut": 40}})
    report = validate(cfg)
    assert not report["valid"]


def test_oc_below_qsl_flagged():
    cfg = parse_config({"model": "oc", "tau": [10.0]})
    report = validate(cfg)
    assert not report["valid"]


# ---------------------------------------------------------------------------
# runs

def test_smoke_run_outputs(tmp_path):
    cfg = parse_config({"preset": "smoke", "out": str(tmp_path / "a")})
    outdir = run(cfg)
    scan = (outdir / "cost_scan.csv").read_text().splitlines()
    assert scan[0].startswith(f"# config_hash={cfg.digest()}")
    assert scan[1] == "tau,C_cd,C_lcd"
    assert len(scan) == 2 + 2
    summary = json.loads((outdir / "summary.json").read_text())
    assert summary["tau_qsl"] == pytest.approx(22.142974355881808)
    assert "bob" in summary


def test_rerun_is_byte_identical(tmp_path):
    out1 = run(parse_config({"preset": "smoke", "out": str(tmp_path / "a")}))
    out2 = run(parse_config({"preset": "smoke", "out": str(tmp_path / "b")}))
    for name in ("cost_scan.csv", "summary.json"):
        assert (out1 / name).read_bytes() == (out2 / name).read_bytes()


def test_oscillator_invalid_cell_recorded_not_fatal(tmp_path):
    # CD is impossible at tau = 1.0 (trap inversion): the cell is skipped and
    # recorded, the run still succeeds
    cfg = parse_config({"model": "oscillator", "protocols": ["cd", "ie"],
                        "tau": [1.0, 2.5], "out": str(tmp_path / "o")})
    outdir = run(cfg)
    rows = (outdir / "cost_scan.csv").read_text().splitlines()[2:]
    first = rows[0].split(",")
    assert first[0] == "1"
    assert first[1] == "nan"          # CD cell invalid
    assert float(first[2]) > 0        # IE fine
    summary = json.loads((outdir / "summary.json").read_text())
    assert any(e["protocol"] == "cd" for e in summary.get("invalid", []))


def test_threads_do_not_change_output(tmp_path):
    out1 = run(parse_config({"preset": "smoke", "out": str(tmp_path / "a")}), threads=1)
    out2 = run(parse_config({"preset": "smoke", "out": str(tmp_path / "b")}), threads=4)
    assert (out1 / "cost_scan.csv").read_bytes() == (out2 / "cost_scan.csv").read_bytes()


# ---------------------------------------------------------------------------
# entry point

def test_list_presets(capsys):
    assert main(["list-presets"]) == 0
    out = capsys.readouterr().out
    for name in PRESETS:
        assert name in out


def test_validate_subcommand(capsys):
    assert main(["validate", "fig4"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["valid"]


def test_main_errors_on_missing_input(capsys):
    assert main(["run"]) == 2
    assert "preset" in capsys.readouterr().err


def test_main_errors_on_unknown_preset(capsys):
    assert main(["run", "fig9"]) == 2


def test_main_run_smoke(tmp_path, capsys):
    rc = main(["run", "smoke", "--out", str(tmp_path / "o"), "--seed", "3"])
    assert rc == 0
    assert (tmp_path / "o" / "summary.json").exists()


def test_config_file_run(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"model": "lz", "protocols": ["cd"],
                                "tau": [2.0], "out": str(tmp_path / "o")}))
    assert main(["run", "--config", str(path)]) == 0
    lines = (tmp_path / "o" / "cost_scan.csv").read_text().splitlines()
    assert lines[1] == "tau,C_cd"


def test_custom_ramp_trajectory_run(tmp_path):
    ramp = {"kind": "fourier", "parameters": {"g0": -0.2, "tau": 2.0,
                                              "coeffs": [[0.05, 0.0]]}}
    cfg = parse_config({"model": "lz", "mode": "trajectory", "protocols": ["cd"],
                        "tau": [2.0], "ramp": ramp, "out": str(tmp_path / "o"),
                        "trajectory_steps": 2000})
    outdir = run(cfg)
    assert (outdir / "fidelity.csv").exists()


def test_custom_ramp_guards():
    ramp = {"kind": "polynomial", "parameters": {"g0": -0.2, "g_d": 0.4, "tau": 2.0}}
    with pytest.raises(ValueError, match="only supported for the lz"):
        parse_config({"model": "jc", "ramp": ramp})
    cfg = parse_config({"model": "lz", "mode": "scan", "protocols": ["cd"],
                        "tau": [2.0], "ramp": ramp})
    with pytest.raises(ValueError, match="mode='trajectory'"):
        run(cfg)
    cfg = parse_config({"model": "lz", "mode": "trajectory", "protocols": ["cd"],
                        "tau": [3.0], "ramp": ramp})
    with pytest.raises(ValueError, match="differs from tau"):
        run(cfg)
