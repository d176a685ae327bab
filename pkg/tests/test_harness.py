from __future__ import annotations

import csv
import io

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rlab.harness import (
    ConfigError,
    ExperimentConfig,
    RunRecord,
    load_run,
    parse_config_text,
    report,
    rows_to_csv,
    run_experiment,
    summarize,
    write_run,
)

SPECTRAL = """
# two degrees, two samples each
kind = spectral
seed = 11
samples = 2

[generator]
model = regular
n = 60

[sweep]
d = 3, 4   # inline comment
"""


def test_parse_ini_grammar():
    data = parse_config_text(SPECTRAL)
    assert data["kind"] == "spectral" and data["seed"] == 11 and data["samples"] == 2
    assert data["generator"] == {"model": "regular", "n": 60}
    assert data["sweep"] == {"d": [3, 4]}
    assert parse_config_text("x = 0.5\ny = true\nz = a, b")["z"] == ["a", "b"]


def test_parse_json_equivalent():
    js = '{"kind": "spectral", "seed": 11, "samples": 2, "generator": {"model": "regular", "n": 60}, "sweep": {"d": [3, 4]}}'
    assert ExperimentConfig.from_text(js).hash == ExperimentConfig.from_text(SPECTRAL).hash


@pytest.mark.parametrize("text", [
    "kind = spectral\nseed = 1\n[generator]\nmodel = regular\nn = 10\n",  # no sweep
    "kind = nope\nseed = 1\n[sweep]\nd = 3\n",
    "kind = spectral\n[generator]\nmodel = regular\nn = 10\n[sweep]\nd = 3\n",  # no seed
    "kind = spectral\nseed = 1\nsamples = 0\n[generator]\nmodel = regular\nn = 10\n[sweep]\nd = 3\n",
    "kind = spectral\nseed = 1\n[generator]\nmodel = regular\nn = 9\n[sweep]\nd = 3\n",  # odd n*d
    "kind = spectral\nseed = 1\nbogus = 2\n[sweep]\nd = 3\n",
    "{not json",
    "[oops\n",
])
def test_invalid_configs(text):
    with pytest.raises(ConfigError):
        ExperimentConfig.from_text(text)


def test_empty_sweep_list():
    with pytest.raises(ConfigError):
        ExperimentConfig.from_dict({"kind": "spectral", "seed": 1, "generator": {"model": "regular", "n": 10},
                                    "sweep": {"d": []}})


def test_single_row():
    cfg = ExperimentConfig.from_text("kind = spectral\nseed = 3\n[generator]\nmodel = regular\nn = 20\n[sweep]\nd = 3\n")
    run = run_experiment(cfg)
    assert len(run.rows) == 1 and not run.rows[0]["error"]


def test_deterministic_csv(tmp_path):
    cfg = ExperimentConfig.from_text(SPECTRAL)
    a, b = run_experiment(cfg), run_experiment(cfg)
    pa, _ = write_run(a, tmp_path / "a")
    pb, _ = write_run(b, tmp_path / "b")
    assert pa.read_bytes() == pb.read_bytes()
    assert [r["point"] for r in a.rows] == [0, 0, 1, 1]
    assert len({r["seed"] for r in a.rows}) == 4


def test_seed_changes_output():
    cfg = ExperimentConfig.from_text(SPECTRAL)
    other = ExperimentConfig.from_text(SPECTRAL.replace("seed = 11", "seed = 12"))
    assert cfg.hash != other.hash
    assert rows_to_csv(run_experiment(cfg).rows) != rows_to_csv(run_experiment(other).rows)


def test_workers_match_serial():
    cfg = ExperimentConfig.from_text(SPECTRAL)
    serial = run_experiment(cfg)
    cfg.workers = 2
    par = run_experiment(cfg)
    assert rows_to_csv(serial.rows) == rows_to_csv(par.rows)


def test_crash_isolation(monkeypatch):
    import rlab.harness as harness

    cfg = ExperimentConfig.from_text(SPECTRAL)
    real = harness.RUNNERS["spectral"]
    target = run_experiment(cfg).rows[2]["seed"]

    def flaky(spec, point, opts, seed):
        if seed == target:
            raise RuntimeError("boom")
        return real(spec, point, opts, seed)

    monkeypatch.setitem(harness.RUNNERS, "spectral", flaky)
    run = run_experiment(cfg)
    assert len(run.rows) == 4
    bad = [r for r in run.rows if r["error"]]
    assert [(r["point"], r["sample"]) for r in bad] == [(1, 0)]
    assert "boom" in bad[0]["error"]
    cols, table = summarize(run)
    assert [t["samples"] for t in table] == [2, 1]


def test_attack_runner():
    cfg = ExperimentConfig.from_dict({"kind": "attack", "seed": 2, "generator": {"model": "regular", "n": 20},
                                      "sweep": {"d": [3]}, "options": {"attack": "matching"}})
    run = run_experiment(cfg)
    assert len(run.rows) == 1
    row = run.rows[0]
    assert row["error"] or row["delta_h"] >= 0


def test_report_schemas(tmp_path):
    rows = [{"point": 0, "sample": i, "seed": i, "param_d": 6, "attack_upper": 3 + i, "attack_upper_presumed": None,
             "empirical_lower": 1, "certified_lower": None, "sandwich": True, "swept_to": 2, "error": ""}
            for i in range(3)]
    run = RunRecord("h", "0", "resilience", {"generator": {"n": 30}}, rows, 0.0)
    cols, table = summarize(run)
    assert cols[:1] == ["d"] and {"attack_upper_mean", "empirical_lower", "certified_lower"} <= set(cols)
    assert table[0]["attack_upper_mean"] == 4.0 and table[0]["d"] == 6
    games = [{"point": 0, "sample": i, "maker": "thm6", "breaker": b, "winner": "maker" if i else "breaker", "error": ""}
             for i, b in enumerate(["random", "random", "cut-builder"])]
    cols, table = summarize(RunRecord("h", "0", "game", {}, games, 0.0))
    assert cols == ["maker", "breaker", "games", "maker_wins", "win_rate"]
    assert {(t["breaker"], t["win_rate"]) for t in table} == {("random", 0.5), ("cut-builder", 1.0)}
    empty = RunRecord("h", "0", "resilience", {"generator": {}}, [], 0.0)
    (p,) = report(empty, tmp_path)
    assert p.read_text().count("\n") == 1
    assert next(csv.reader(io.StringIO(p.read_text())))[0] == "d"


def test_run_roundtrip(tmp_path):
    run = run_experiment(ExperimentConfig.from_text(SPECTRAL))
    _, js = write_run(run, tmp_path)
    back = load_run(js)
    assert back.config_hash == run.config_hash and rows_to_csv(back.rows) == rows_to_csv(run.rows)
    paths = report(back, tmp_path, "both")
    assert {p.name for p in paths} == {"summary.csv", "summary.json"}


@given(st.dictionaries(st.from_regex(r"[a-z][a-z_]{0,6}", fullmatch=True),
                       st.one_of(st.integers(-10**6, 10**6), st.from_regex(r"[a-z][a-z\-]{0,8}", fullmatch=True)),
                       max_size=6))
@settings(max_examples=100, deadline=None)
def test_ini_scalar_roundtrip(d):
    text = "".join(f"{k} = {v}\n" for k, v in d.items())
    parsed = parse_config_text(text)
    for k, v in d.items():
        if isinstance(v, str) and v in ("true", "yes", "on", "false", "no", "off"):
            continue
        assert parsed[k] == v
