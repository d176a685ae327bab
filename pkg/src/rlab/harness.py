"""Experiment configs, deterministic sweeps and flat-file reports."""

from __future__ import annotations

import configparser
import csv
import hashlib
import io
import itertools
import json
import math
import time
import traceback
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from rlab import __version__
from rlab.graph import GraphError
from rlab.models import GenSpec
from rlab.rng import child_seed

KINDS = ("spectral", "resilience", "game", "attack", "quasirandom")
GEN_KEYS = ("model", "n", "d", "d1", "d2", "p", "degrees", "method")


class ConfigError(GraphError):
    """Invalid experiment configuration."""


# ---------------------------------------------------------------------------
# Config


def _scalar(text: str):
    t = text.strip()
    low = t.lower()
    if low in ("true", "yes", "on"):
        return True
    if low in ("false", "no", "off"):
        return False
    for cast in (int, float):
        try:
            return cast(t)
        except ValueError:
            pass
    return t


def _value(text: str):
    parts = [p for p in text.split(",")]
    if len(parts) == 1:
        return _scalar(parts[0])
    return [_scalar(p) for p in parts if p.strip()]


def parse_config_text(text: str) -> dict:
    """JSON object, or ``key = value`` lines with ``[section]`` headers.

    Top-level keys go before any header (or under ``[experiment]``).
    Comma-separated values become lists.  Sections become nested dicts.
    """
    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON config: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError("JSON config must be an object")
        return data
    cp = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    cp.optionxform = str
    try:
        cp.read_string("[experiment]\n" + text)
    except configparser.Error as exc:
        raise ConfigError(f"invalid config: {exc}") from exc
    out: dict = {}
    for sec in cp.sections():
        body = {k: _value(v) for k, v in cp.items(sec)}
        if sec == "experiment":
            out.update(body)
        else:
            out[sec] = body
    return out


def _as_list(v) -> list:
    return v if isinstance(v, list) else [v]


@dataclass
class ExperimentConfig:
    kind: str
    generator: dict
    sweep: dict
    samples: int = 1
    seed: int | None = None
    out: str | None = None
    workers: int = 1
    options: dict = field(default_factory=dict)

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        data = dict(data)
        kind = data.pop("kind", None)
        gen = dict(data.pop("generator", {}))
        sweep = {k: _as_list(v) for k, v in dict(data.pop("sweep", {})).items()}
        opts = dict(data.pop("options", {}))
        cfg = cls(kind=kind, generator=gen, sweep=sweep, samples=data.pop("samples", 1), seed=data.pop("seed", None),
                  out=data.pop("out", None), workers=data.pop("workers", 1), options=opts)
        if data:
            raise ConfigError(f"unknown config keys: {', '.join(sorted(data))}")
        cfg.validate()
        return cfg

    @classmethod
    def from_text(cls, text: str) -> "ExperimentConfig":
        return cls.from_dict(parse_config_text(text))

    def validate(self) -> None:
        if self.kind not in KINDS:
            raise ConfigError(f"unknown experiment kind {self.kind!r}; expected one of {', '.join(KINDS)}")
        if self.seed is None or not isinstance(self.seed, int) or self.seed < 0:
            raise ConfigError("a nonnegative integer seed is required")
        if not isinstance(self.samples, int) or self.samples < 1:
            raise ConfigError("samples must be a positive integer")
        if not isinstance(self.workers, int) or self.workers < 1:
            raise ConfigError("workers must be a positive integer")
        if not self.sweep:
            raise ConfigError("sweep must name at least one parameter")
        for k, v in self.sweep.items():
            if not v:
                raise ConfigError(f"sweep list {k!r} is empty")
        bad = [k for k in self.generator if k not in GEN_KEYS]
        if bad:
            raise ConfigError(f"unknown generator keys: {', '.join(bad)}")
        if self.kind != "game":
            # every sweep point must give a valid generator spec
            for point in self.points():
                try:
                    self.gen_spec(point, 0)
                except ConfigError:
                    raise
                except (GraphError, TypeError) as exc:
                    raise ConfigError(f"sweep point {point}: {exc}") from exc

    def points(self) -> list[dict]:
        names = sorted(self.sweep)
        return [dict(zip(names, combo)) for combo in itertools.product(*(self.sweep[k] for k in names))]

    def gen_spec(self, point: dict, seed: int) -> GenSpec:
        kw = {k: v for k, v in self.generator.items()}
        kw.update({k: v for k, v in point.items() if k in GEN_KEYS})
        if "model" not in kw or "n" not in kw:
            raise ConfigError("generator needs model and n")
        if "degrees" in kw:
            kw["degrees"] = tuple(_as_list(kw["degrees"]))
        return GenSpec(seed=seed, **kw)

    def canonical(self) -> dict:
        d = asdict(self)
        d.pop("out")
        d.pop("workers")
        return d

    @property
    def hash(self) -> str:
        blob = json.dumps(self.canonical(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()[:16]


def load_config(path) -> ExperimentConfig:
    return ExperimentConfig.from_text(Path(path).read_text())


# ---------------------------------------------------------------------------
# Sample runners (module level so worker processes can import them)


def _opt(point: dict, cfg_opts: dict, key: str, default):
    return point.get(key, cfg_opts.get(key, default))


def _run_spectral(spec: GenSpec, point: dict, opts: dict, seed: int) -> dict:
    from rlab.spectral import lambda_report

    g = spec.generate(seed)
    rep = lambda_report(g)
    d = g.max_degree
    return {"lambda": rep.lam, "lambda2": rep.lambda2, "lambdan": rep.lambdan, "method": rep.method,
            "ramanujan_gap": rep.lam - 2 * math.sqrt(max(d - 1, 0))}


def _run_resilience(spec: GenSpec, point: dict, opts: dict, seed: int) -> dict:
    from rlab.hamres import ResilienceParams, resilience_of_graph

    params = ResilienceParams(float(_opt(point, opts, "epsilon", 0.5)))
    g = spec.generate(seed)
    rec = resilience_of_graph(g, params, seed, restarts=int(_opt(point, opts, "restarts", 200)))
    return {k: rec[k] for k in ("attack_upper", "attack_upper_presumed", "empirical_lower", "certified_lower",
                                "sandwich", "swept_to")}


def _run_attack(spec: GenSpec, point: dict, opts: dict, seed: int) -> dict:
    from rlab.classic import matching_attack, partition_attack

    g = spec.generate(seed)
    which = _opt(point, opts, "attack", "partition")
    rep = partition_attack(g, seed) if which == "partition" else matching_attack(g, seed)
    return {"attack": which, "delta_h": rep.delta_h, "bound": rep.bound, "success": rep.success,
            "vacuous": rep.vacuous}


def _run_quasirandom(spec: GenSpec, point: dict, opts: dict, seed: int) -> dict:
    from rlab.hamres import min_degree_attack, quasirandom_check

    eps = float(_opt(point, opts, "epsilon", 0.5))
    g = spec.generate(seed)
    d = spec.degree
    r = int(math.floor((1 - eps) * d / 2))
    h = min_degree_attack(g, r) if r > 0 else None
    gh = g.difference(h) if h is not None else g
    v = quasirandom_check(gh, d, eps, "heuristic", seed=seed,
                          p1_samples=int(_opt(point, opts, "p1_samples", 10**4)),
                          p2_samples=int(_opt(point, opts, "p2_samples", 10**3)))
    return {"p0": v.p0.status, "p1": v.p1.status, "p2": v.p2.status, "refuted": v.refuted}


def _run_game(spec, point: dict, opts: dict, seed: int) -> dict:
    from rlab.game import build_board, play_thm6

    n = int(_opt(point, opts, "n", 60))
    d1 = int(_opt(point, opts, "d1", 12))
    d2 = int(_opt(point, opts, "d2", 12))
    breaker = str(_opt(point, opts, "breaker", "random"))
    dec = build_board(n, d1, d2, child_seed(seed, "board"))
    res = play_thm6(dec, breaker, seed)
    return {"maker": "thm6", "breaker": breaker, "winner": res.winner, "moves": len(res.moves),
            "conn_moves": res.counts["conn"], "degree_moves": res.counts["degree"],
            "booster_moves": res.counts["booster"]}


RUNNERS = {"spectral": _run_spectral, "resilience": _run_resilience, "attack": _run_attack,
           "quasirandom": _run_quasirandom, "game": _run_game}


def _run_one(job: tuple) -> dict:
    kind, cfg_dict, point, pi, si, seed = job
    row = {"point": pi, "sample": si, "seed": seed, **{f"param_{k}": v for k, v in point.items()}}
    try:
        cfg = ExperimentConfig.from_dict(cfg_dict)
        spec = None if kind == "game" else cfg.gen_spec(point, seed)
        row.update(RUNNERS[kind](spec, point, cfg.options, seed))
        row["error"] = ""
    except Exception as exc:  # crash isolation: the row records the failure
        row["error"] = f"{type(exc).__name__}: {exc}"
        row["traceback"] = traceback.format_exc(limit=3)
    return row


# ---------------------------------------------------------------------------
# Runs


@dataclass
class RunRecord:
    config_hash: str
    code_version: str
    kind: str
    config: dict
    rows: list[dict]
    wall_clock: float
    streams: str = "child_seed(master_seed, point_index, sample_index)"

    def as_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "RunRecord":
        return cls(**d)


def run_experiment(cfg: ExperimentConfig, *, runner_override=None) -> RunRecord:
    """Fan out over sweep points x samples; rows come back in (point, sample) order."""
    cfg.validate()
    t0 = time.perf_counter()
    cfg_dict = {k: v for k, v in asdict(cfg).items() if k not in ("out",)}
    jobs = []
    for pi, point in enumerate(cfg.points()):
        for si in range(cfg.samples):
            jobs.append((cfg.kind, cfg_dict, point, pi, si, child_seed(cfg.seed, pi, si)))
    run = runner_override or _run_one
    if cfg.workers > 1 and runner_override is None and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as ex:
            rows = list(ex.map(run, jobs))
    else:
        rows = [run(j) for j in jobs]
    rows.sort(key=lambda r: (r["point"], r["sample"]))
    return RunRecord(cfg.hash, __version__, cfg.kind, cfg.canonical(), rows, time.perf_counter() - t0)


def _jsonable(x):
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating,)):
        return float(x)
    if isinstance(x, float) and not math.isfinite(x):
        return str(x)
    return x


def rows_to_csv(rows: list[dict], columns: list[str] | None = None) -> str:
    if columns is None:
        columns = sorted({k for r in rows for k in r if k != "traceback"})
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow(["" if r.get(c) is None else _fmt(r.get(c)) for c in columns])
    return buf.getvalue()


def _fmt(v) -> str:
    v = _jsonable(v)
    if isinstance(v, float):
        return repr(round(v, 12))
    return str(v)


def write_run(run: RunRecord, out_dir) -> tuple[Path, Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    csv_path = out / "results.csv"
    json_path = out / "run.json"
    csv_path.write_text(rows_to_csv(run.rows))
    json_path.write_text(json.dumps(run.as_dict(), indent=2, sort_keys=True, default=_jsonable) + "\n")
    return csv_path, json_path


def load_run(path) -> RunRecord:
    return RunRecord.from_dict(json.loads(Path(path).read_text()))


# ---------------------------------------------------------------------------
# Reports


def _mean(vals):
    vals = [float(v) for v in vals if v is not None and v != ""]
    return sum(vals) / len(vals) if vals else None


def _quantile(vals, q):
    vals = [float(v) for v in vals if v is not None and v != ""]
    return float(np.quantile(vals, q)) if vals else None


def summarize(run: RunRecord) -> tuple[list[str], list[dict]]:
    """Plot-ready summary table for the run's kind."""
    rows = [r for r in run.rows if not r.get("error")]
    errors = len(run.rows) - len(rows)
    groups: dict = {}
    for r in rows:
        key = tuple(sorted((k, v) for k, v in r.items() if k.startswith("param_")))
        groups.setdefault(key, []).append(r)
    out = []
    if run.kind == "game":
        cols = ["maker", "breaker", "games", "maker_wins", "win_rate"]
        table: dict = {}
        for r in rows:
            t = table.setdefault((r["maker"], r["breaker"]), [0, 0])
            t[0] += 1
            t[1] += r["winner"] == "maker"
        for (m, b), (g, w) in sorted(table.items()):
            out.append({"maker": m, "breaker": b, "games": g, "maker_wins": w, "win_rate": w / g})
        return cols, out
    if run.kind == "resilience":
        cols = ["d", "n", "samples", "attack_upper_mean", "attack_upper_q90", "empirical_lower", "certified_lower",
                "sandwich_rate"]
        for key, rs in sorted(groups.items(), key=lambda t: str(t[0])):
            p = dict(key)
            el = [r["empirical_lower"] for r in rs]
            cl = [r["certified_lower"] for r in rs]
            out.append({"d": p.get("param_d", run.config["generator"].get("d")),
                        "n": p.get("param_n", run.config["generator"].get("n")), "samples": len(rs),
                        "attack_upper_mean": _mean(r["attack_upper"] for r in rs),
                        "attack_upper_q90": _quantile([r["attack_upper"] for r in rs], 0.9),
                        "empirical_lower": None if None in el else min(el),
                        "certified_lower": None if None in cl else min(cl),
                        "sandwich_rate": _mean(bool(r["sandwich"]) for r in rs)})
        return cols, out
    metric = {"spectral": "lambda", "attack": "delta_h", "quasirandom": "refuted"}[run.kind]
    pcols = sorted({k for k in (run.rows[0] if run.rows else {}) if k.startswith("param_")})
    cols = pcols + ["samples", f"{metric}_mean", f"{metric}_q10", f"{metric}_q50", f"{metric}_q90"]
    for key, rs in sorted(groups.items(), key=lambda t: str(t[0])):
        vals = [float(r[metric]) for r in rs]
        row = dict(key)
        row.update({"samples": len(rs), f"{metric}_mean": _mean(vals), f"{metric}_q10": _quantile(vals, 0.1),
                    f"{metric}_q50": _quantile(vals, 0.5), f"{metric}_q90": _quantile(vals, 0.9)})
        out.append(row)
    if errors:
        for r in out:
            r.setdefault("errors", errors)
    return cols, out


def report(run: RunRecord, out_dir, fmt: str = "csv") -> list[Path]:
    cols, table = summarize(run)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    if fmt in ("csv", "both"):
        p = out / "summary.csv"
        p.write_text(rows_to_csv(table, cols))
        paths.append(p)
    if fmt in ("json", "both"):
        p = out / "summary.json"
        p.write_text(json.dumps({"columns": cols, "rows": table, "config_hash": run.config_hash}, indent=2,
                                sort_keys=True, default=_jsonable) + "\n")
        paths.append(p)
    if fmt not in ("csv", "json", "both"):
        raise ConfigError(f"unknown report format {fmt!r}")
    return paths
