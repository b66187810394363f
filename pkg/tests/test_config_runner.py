import json
from dataclasses import replace

import numpy as np
import pytest

from wavelab import cli, runner
from wavelab.config import ConfigError, config_from_json, load_config
from wavelab.runner import CSV_COLUMNS, preset, report_json, sweep, write_csv


def oracle_json(**edits):
    raw = preset("oracle").to_dict()
    raw.update(edits)
    return json.dumps(raw, indent=2)


def test_config_roundtrip():
    cfg = preset("oracle")
    again = config_from_json(cfg.to_json())
    assert again == cfg


def test_unknown_top_key_rejected_with_line():
    text = oracle_json(mystery=1)
    with pytest.raises(ConfigError) as err:
        config_from_json(text)
    assert "mystery" in str(err.value)
    assert "line" in str(err.value)


def test_unknown_nested_key_rejected():
    raw = preset("oracle").to_dict()
    raw["damping"]["alpa"] = 2.0  # typo must be fatal
    with pytest.raises(ConfigError) as err:
        config_from_json(json.dumps(raw))
    assert "alpa" in str(err.value)


def test_missing_required_key():
    raw = preset("oracle").to_dict()
    del raw["dt"]
    with pytest.raises(ConfigError):
        config_from_json(json.dumps(raw))


def test_json_syntax_error_has_line_number():
    with pytest.raises(ConfigError) as err:
        config_from_json('{\n "grid": [,\n}')
    assert err.value.line == 2


def test_unknown_data_family():
    raw = preset("oracle").to_dict()
    raw["data"]["u0"] = {"family": "wavelet"}
    with pytest.raises(ConfigError) as err:
        config_from_json(json.dumps(raw))
    assert "wavelet" in str(err.value)


def test_cfl_violation_is_config_error():
    cfg = replace(preset("oracle"), dt=0.1)
    with pytest.raises(ConfigError) as err:
        runner.prepare(cfg)
    assert "CFL" in str(err.value)


def test_every_preset_is_self_validating():
    for name in runner.PRESETS:
        cfg = preset(name)
        runner.prepare(cfg)  # must not raise


def test_unknown_preset():
    with pytest.raises(ConfigError):
        preset("nope")


def test_run_writes_csv_schema(tmp_path):
    cfg = replace(preset("oracle"), T=0.1,
                  output_path=str(tmp_path / "run.csv"))
    result = runner.run(cfg)
    header = open(result.csv_path).readline().strip()
    assert header == ",".join(CSV_COLUMNS)
    data = np.genfromtxt(result.csv_path, delimiter=",", names=True)
    assert data["t"].shape[0] == 101


def test_t_zero_single_row(tmp_path):
    cfg = replace(preset("oracle"), T=0.0,
                  output_path=str(tmp_path / "t0.csv"))
    runner.run(cfg)
    rows = open(cfg.output_path).read().strip().splitlines()
    assert len(rows) == 2  # header + one record


def test_zero_data_zero_columns(tmp_path):
    from wavelab.config import DataSpec
    cfg = replace(preset("oracle"), T=0.2, u0=DataSpec("zero"),
                  u1=DataSpec("zero"), output_path=str(tmp_path / "z.csv"))
    runner.run(cfg)
    data = np.genfromtxt(cfg.output_path, delimiter=",", names=True)
    for name in data.dtype.names:
        if name != "t":
            assert np.all(data[name] == 0.0), name


def test_determinism_byte_identical(tmp_path):
    cfg = replace(preset("oracle"), T=0.5,
                  output_path=str(tmp_path / "a.csv"))
    r1 = runner.run(cfg)
    csv1 = open(cfg.output_path, "rb").read()
    rep1 = dict(r1.report)
    cfg2 = replace(cfg, output_path=str(tmp_path / "b.csv"))
    r2 = runner.run(cfg2)
    csv2 = open(cfg2.output_path, "rb").read()
    rep2 = dict(r2.report)
    assert csv1 == csv2
    rep1.pop("wall_time")
    rep2.pop("wall_time")
    rep1["config"].pop("output_path")
    rep2["config"].pop("output_path")
    assert report_json(rep1) == report_json(rep2)


def test_sweep_single_value_matches_run(tmp_path):
    cfg = replace(preset("oracle"), T=0.2, output_path=None)
    single = sweep(cfg, "dt", [1e-3])
    direct = runner.run(cfg)
    assert len(single) == 1
    np.testing.assert_allclose(single[0].history.column("energy"),
                               direct.history.column("energy"), rtol=0)


def test_sweep_ordering_and_paths(tmp_path):
    cfg = replace(preset("oracle"), T=0.1,
                  output_path=str(tmp_path / "s.csv"))
    results = sweep(cfg, "dt", [1e-3, 5e-4])
    assert [r.config.dt for r in results] == [1e-3, 5e-4]
    assert results[0].csv_path.endswith("s__dt=0.001.csv")


def test_sweep_rejects_unknown_key():
    with pytest.raises(ConfigError):
        preset("oracle").override("V0", 3.0)


def test_cli_preset_emit(capsys):
    code = cli.main(["preset", "oracle", "--emit"])
    assert code == 0
    out = capsys.readouterr().out
    assert json.loads(out)["T"] == 5.0


def test_cli_config_error_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(oracle_json(mystery=2))
    assert cli.main(["run", "--config", str(bad)]) == 2


def test_cli_run_and_decay_fit(tmp_path, capsys):
    cfgp = tmp_path / "cfg.json"
    cfg = replace(preset("expdamp"), T=20.0,
                  output_path=str(tmp_path / "e.csv"))
    cfgp.write_text(cfg.to_json())
    assert cli.main(["run", "--config", str(cfgp)]) == 0
    capsys.readouterr()
    assert cli.main(["decay-fit", "--csv", str(tmp_path / "e.csv"),
                     "--window", "2,20", "--quantity", "energy"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["slope"] < -1.0
    assert 0.9 <= out["r2"] <= 1.0


def test_cli_prop21_csv(tmp_path, capsys):
    csv = tmp_path / "p.csv"
    code = cli.main(["prop21", "--n", "2", "--theta", "0.8", "--part", "1",
                     "--count", "3", "--N", "64", "--csv", str(csv)])
    assert code == 0
    data = np.genfromtxt(csv, delimiter=",", names=True)
    assert set(data.dtype.names) == {"sample_id", "lhs", "rhs", "ratio",
                                     "resolution", "L"}
    out = json.loads(capsys.readouterr().out)
    assert out["C_emp"] > 0


def test_cli_mconv(tmp_path, capsys):
    cfgp = tmp_path / "cfg.json"
    cfg = preset("expdamp")
    cfg = replace(cfg, grid=replace(cfg.grid, N=241),
                  dt=0.05 / np.sqrt(3.0), T=3.0, record_every=3,
                  output_path=None)
    cfgp.write_text(cfg.to_json())
    csv = tmp_path / "m.csv"
    assert cli.main(["mconv", "--config", str(cfgp), "--ms", "2,6,12",
                     "--csv", str(csv)]) == 0
    data = np.genfromtxt(csv, delimiter=",", names=True)
    assert list(data["m"]) == [2.0, 6.0, 12.0]
    assert data["sup_error"][-1] == 0.0


def test_report_excludes_nothing_but_timing(tmp_path):
    cfg = replace(preset("oracle"), T=0.1, output_path=None)
    res = runner.run(cfg)
    assert "wall_time" in res.report
    assert res.report["passed"] is True
    assert set(res.report["residual_max"]) == {"residual_2_5",
                                               "residual_2_13",
                                               "residual_2_16"}
