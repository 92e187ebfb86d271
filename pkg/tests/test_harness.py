import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from siclab.harness import (
    ConfigError,
    ExperimentConfig,
    UnsupportedRegime,
    compare,
    dump_config,
    first_crossing,
    load_config,
    parse_config,
    predict,
    realization_seed,
    run,
    with_override,
)
from siclab.harness.cli import main
from siclab.series import SICSeries

CLIFFORD = {
    "backend": "clifford",
    "model": {"L": 16},
    "schedule": {"l_a": [4, 8, 12], "t_max": 12},
    "sampling": {"n_realizations": 4, "master_seed": 5},
}
GAUSS = {
    "backend": "gaussian",
    "model": {"L": 20, "name": "aa", "w": 0.0},
    "schedule": {"l_a": [5, 10], "t_max": 10.0},
    "sampling": {"n_realizations": 2},
}


def _write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return p


def test_defaults():
    cfg = parse_config(CLIFFORD)
    assert cfg.model.name == "brickwall"
    assert parse_config({**CLIFFORD, "sampling": {}}).n_realizations == 200
    assert parse_config({**GAUSS, "sampling": {}}).n_realizations == 50
    g = parse_config(GAUSS)
    assert np.allclose(np.diff(g.sample_times()), 0.5)
    assert parse_config({"backend": "gaussian", "model": {"L": 20}, "schedule": {"l_a": [4]}}).sample_times()[-1] == 40


@pytest.mark.parametrize("patch", [
    {"model": {"L": 16, "bogus": 1}},
    {"backend": "gaussian", "model": {"L": 16, "U": 0.2}},
    {"backend": "gaussian", "model": {"L": 16}, "encoding": {"scheme": "one_to_all"}},
    {"backend": "dense", "model": {"L": 18}},
    {"model": {"L": 16, "p_m": 0.1, "floquet": True}},
    {"model": {"L": 15}},
    {"schedule": {"l_a": []}},
    {"schedule": {"l_a": [40]}},
    {"schedule": {"l_a": [4], "times": [0, 1], "t_max": 3}},
    {"unknown_top": 1},
    {"backend": "quantum"},
    {"encoding": {"scheme": "many_to_many"}, "schedule": {"l_a": [4]}},
])
def test_invalid_configs_rejected(patch):
    data = {**CLIFFORD, **patch}
    with pytest.raises(ConfigError):
        parse_config(data)


def test_fractional_clifford_times_rejected():
    cfg = parse_config({**CLIFFORD, "schedule": {"l_a": [4], "times": [0, 0.5]}})
    with pytest.raises(ConfigError):
        cfg.sample_times()


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 40).map(lambda k: 2 * k), st.floats(0, 0.5), st.booleans(), st.integers(0, 2**32))
def test_toml_roundtrip(L, p_m, periodic, seed):
    data = {
        "backend": "clifford",
        "model": {"L": L, "p_m": p_m, "boundary": "periodic" if periodic else "open"},
        "schedule": {"l_a": [1, L]},
        "sampling": {"master_seed": seed},
    }
    cfg = parse_config(data)
    import tomli

    again = parse_config(tomli.loads(dump_config(cfg)))
    assert again == cfg


def test_seed_streams_are_distinct():
    a = np.random.default_rng(realization_seed(1, 0)).integers(1 << 62)
    b = np.random.default_rng(realization_seed(1, 1)).integers(1 << 62)
    c = np.random.default_rng(realization_seed(1, 0, sweep_index=0)).integers(1 << 62)
    assert len({a, b, c}) == 3


def test_run_independent_of_jobs():
    cfg = parse_config(CLIFFORD)
    one = run(cfg, jobs=1).series.to_csv()
    two = run(cfg, jobs=2).series.to_csv()
    assert one == two


def test_steady_run_has_one_row():
    cfg = parse_config({**CLIFFORD, "schedule": {"kind": "steady", "l_a": [4, 8]}})
    s = run(cfg).series
    assert s.times.tolist() == [16.0]
    assert s.mean.shape == (1, 2)


def test_level_spacing_run():
    cfg = parse_config({"backend": "dense", "model": {"L": 8, "w": 1.0, "U": 0.2},
                        "schedule": {"kind": "level_spacing"}, "sampling": {"n_realizations": 3}})
    res = run(cfg)
    assert res.manifest["observable"] == "level_spacing_ratio"
    assert 0 < res.series.mean[0, 0] < 1


def test_predict_axes_and_regimes():
    cfg = parse_config(GAUSS)
    sim = run(cfg).series
    thy = predict(cfg)
    assert sim.same_axes(thy)
    report = compare(sim, thy)
    assert set(report["per_l_a"]) == {5, 10}
    with pytest.raises(UnsupportedRegime):
        predict(parse_config({**GAUSS, "model": {"L": 20, "w": 2.0}}))
    with pytest.raises(UnsupportedRegime):
        predict(parse_config({**CLIFFORD, "model": {"L": 16, "p_m": 0.1}}))
    with pytest.raises(UnsupportedRegime):
        predict(parse_config({"backend": "dense", "model": {"L": 8}, "schedule": {"l_a": [4]}}))


def test_first_crossing_interpolates():
    assert first_crossing([0, 1, 2], [2.0, 2.0, 1.0], 1.5) == pytest.approx(1.5)
    assert first_crossing([0, 1], [2.0, 2.0], 1.0) is None


def test_with_override():
    cfg = parse_config(GAUSS)
    assert with_override(cfg, "w", 1.5).model.w == 1.5
    assert with_override(cfg, "model.L", 30).model.L == 30
    with pytest.raises(ConfigError):
        with_override(cfg, "model.nope", 1)
    with pytest.raises(ConfigError):
        with_override(cfg, "L", 3)


def test_series_csv_roundtrip():
    s = SICSeries([0.0, 1.5], [2, 4], np.array([[1.0, 2.0], [0.5, 1.0 / 3]]), np.full((2, 2), 0.01), 7)
    back = SICSeries.from_csv(s.to_csv())
    assert back.to_csv() == s.to_csv()
    assert back.n_real == 7
    with pytest.raises(ValueError):
        SICSeries.from_csv("a,b\n1,2\n")


# -- CLI ------------------------------------------------------------------------

CLI_TOML = """
backend = "clifford"
[model]
L = 16
[schedule]
l_a = [4, 8]
t_max = 8
[sampling]
n_realizations = 3
"""


def test_cli_run_predict_compare(tmp_path, capsys):
    cfg = _write(tmp_path, "exp.toml", CLI_TOML)
    out = tmp_path / "out"
    assert main(["run", str(cfg), "--out", str(out), "--seed", "4"]) == 0
    manifest = json.loads((out / "exp.json").read_text())
    assert manifest["master_seed"] == 4 and "git_hash" in manifest
    assert main(["--out", str(out), "predict", str(cfg)]) == 0
    assert main(["compare", str(out / "exp.csv"), str(out / "exp_theory.csv"), "--tolerance", "2.5"]) == 0
    assert main(["compare", str(out / "exp.csv"), str(out / "exp_theory.csv"), "--tolerance", "0.0"]) == 4


def test_cli_exit_codes(tmp_path):
    bad = _write(tmp_path, "bad.toml", CLI_TOML + "\nextra = 1\n")
    assert main(["run", str(bad), "--out", str(tmp_path)]) == 2
    broken = _write(tmp_path, "broken.toml", "backend = [")
    assert main(["run", str(broken)]) == 2
    assert main(["run", str(tmp_path / "missing.toml")]) == 2
    dense = _write(tmp_path, "d.toml", 'backend = "dense"\n[model]\nL = 8\n[schedule]\nl_a = [4]\n')
    assert main(["predict", str(dense), "--out", str(tmp_path)]) == 2
    junk = _write(tmp_path, "junk.csv", "nope\n")
    assert main(["compare", str(junk), str(junk)]) == 2
    frac = _write(tmp_path, "f.toml", CLI_TOML.replace("t_max = 8", "times = [0.5]"))
    assert main(["run", str(frac), "--out", str(tmp_path)]) == 2


def test_cli_sweep(tmp_path):
    cfg = _write(tmp_path, "sw.toml", CLI_TOML)
    out = tmp_path / "sw"
    assert main(["sweep", str(cfg), "--axis", "model.p_m", "--values", "0,0.2", "--out", str(out)]) == 0
    summary = json.loads((out / "sw_sweep.json").read_text())
    assert [m["status"] for m in summary["members"]] == ["ok", "ok"]
    assert (out / "sw_001.csv").exists()
    assert main(["sweep", str(cfg), "--axis", "model.p_m", "--values", "0,7", "--out", str(out)]) == 2


def test_load_config_file(tmp_path):
    cfg = load_config(_write(tmp_path, "c.toml", CLI_TOML))
    assert isinstance(cfg, ExperimentConfig) and cfg.model.L == 16
