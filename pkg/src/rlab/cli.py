"""``rlab`` command line: generators, deciders, attacks, games and sweeps.

Exit status: 0 on success, 2 on invalid input, 3 when a computation fails.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from rlab import __version__
from rlab.graph import GraphError, read_edgelist, write_edgelist

EXIT_OK, EXIT_INVALID, EXIT_RUNTIME = 0, 2, 3


def _default(x):
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.floating):
        return float(x)
    if isinstance(x, (set, tuple)):
        return sorted(x) if isinstance(x, set) else list(x)
    raise TypeError(f"not serializable: {type(x).__name__}")


def _emit(obj, out) -> None:
    text = json.dumps(obj, indent=2, sort_keys=True, default=_default) + "\n"
    if out:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _read_degrees(path) -> tuple[int, ...]:
    try:
        return tuple(int(t) for t in Path(path).read_text().split())
    except ValueError as exc:
        raise GraphError(f"degree file must hold whitespace-separated integers: {exc}") from exc


# ---------------------------------------------------------------------------
# Subcommands


def cmd_generate(a) -> None:
    from rlab.models import GenSpec

    degrees = _read_degrees(a.degrees) if a.degrees else None
    n = a.n if a.n is not None else (len(degrees) if degrees else None)
    if n is None:
        raise GraphError("--n is required")
    spec = GenSpec(a.model, n, d=a.d, degrees=degrees, d1=a.d1, d2=a.d2, p=a.p, seed=a.seed, method=a.method)
    parts = spec.generate_parts()
    g = parts[-1]
    write_edgelist(g, a.out)
    files = [a.out]
    for i, part in enumerate(parts[:-1], 1):
        write_edgelist(part, f"{a.out}.part{i}")
        files.append(f"{a.out}.part{i}")
    _emit({"model": a.model, "n": g.n, "m": g.m, "seed": a.seed, "files": files}, None)


def cmd_spectral(a) -> None:
    from rlab.spectral import lambda_report

    rep = lambda_report(read_edgelist(a.input), tol=a.tol).as_dict()
    _emit({k: rep[k] for k in ("n", "d", "lambda", "lambda2", "lambdan", "method")}, a.out)


def cmd_attack(a) -> None:
    from rlab.classic import matching_attack, partition_attack, trivial_attack

    g = read_edgelist(a.input)
    if a.kind == "trivial":
        rep = trivial_attack(g, a.k)
    elif a.kind == "partition":
        rep = partition_attack(g, a.seed)
    else:
        rep = matching_attack(g, a.seed)
    if a.out_h:
        write_edgelist(rep.h, a.out_h)
    _emit(rep.as_dict(), a.out)


CERT_KINDS = {"econn": "edge", "vconn": "vertex", "pm": "matching", "edge": "edge", "vertex": "vertex",
              "matching": "matching"}


def cmd_certify(a) -> None:
    from rlab.classic import conn_certificate, matching_certificate
    from rlab.spectral import lam

    g = read_edgelist(a.input)
    if a.lam is None and not a.compute_lambda:
        raise GraphError("give --lambda X or --compute-lambda")
    value = lam(g) if a.compute_lambda else a.lam
    kind = CERT_KINDS[a.kind]
    if kind == "matching":
        cert = matching_certificate(g, value, lam_verified=a.compute_lambda)
    else:
        cert = conn_certificate(g, value, kind, a.epsilon, lam_verified=a.compute_lambda)
    _emit(cert.as_dict(), a.out)


def cmd_ham(a) -> None:
    from rlab.hamilton import decide_hamiltonian, is_hamiltonian_exact

    g = read_edgelist(a.input)
    if a.mode == "exact":
        dec = is_hamiltonian_exact(g)
    else:
        dec = decide_hamiltonian(g, restarts=a.restarts, seed=a.seed)
    _emit({"hamiltonian": dec.hamiltonian, "cycle": list(dec.cycle) if dec.cycle else None, "method": dec.method,
           "exact": dec.exact, "reason": dec.reason}, a.out)


def cmd_boosters(a) -> None:
    from rlab.posa import boosters

    g = read_edgelist(a.input)
    kw = {"seed": a.seed, "depth": a.depth} if a.mode == "witnessed" else {}
    bs = boosters(g, a.mode, **kw)
    _emit({"mode": bs.mode, "count": len(bs.pairs), "boosters": sorted(bs.pairs), "path_exact": bs.path_exact,
           "base_path": list(bs.base_path)}, a.out)


def cmd_resilience(a) -> None:
    from rlab.hamres import ResilienceParams, estimate_resilience
    from rlab.models import GenSpec

    if a.property != "ham":
        raise GraphError("only --property ham is supported")
    spec = GenSpec(a.model, a.n, d=a.d, d1=a.d1, d2=a.d2, p=a.p, seed=a.seed, method=a.method)
    est = estimate_resilience(spec, ResilienceParams(a.epsilon), a.samples, a.seed, restarts=a.restarts)
    _emit(est.as_dict(), a.out)


def cmd_game(a) -> None:
    from rlab.game import (
        BREAKERS,
        GreedyBoosterMaker,
        Thm6Maker,
        decomposition_from_parts,
        decomposition_from_union,
        make_breaker,
        play,
    )
    from rlab.rng import child_seed

    board = read_edgelist(a.board)
    parts = [read_edgelist(p) for p in a.decomp.split(",") if p]
    if len(parts) == 4:
        dec = decomposition_from_parts(parts)
    elif len(parts) == 2:
        dec = decomposition_from_union(parts[0], parts[1], child_seed(a.seed, "split"))
    else:
        raise GraphError("--decomp takes 2 files (union parts) or 4 files (C1, C2, G12, G2)")
    if set(dec.board.edge_keys.tolist()) != set(board.edge_keys.tolist()):
        raise GraphError("decomposition does not cover the board")
    if a.breaker not in BREAKERS:
        raise GraphError(f"unknown breaker {a.breaker!r}")
    maker = Thm6Maker(dec) if a.maker == "thm6" else GreedyBoosterMaker()
    res = play(board, maker, make_breaker(a.breaker, child_seed(a.seed, "breaker", a.breaker)))
    out = res.as_dict()
    out.update({"maker": a.maker, "breaker": a.breaker, "seed": a.seed,
                "scope": "evaluated against the implemented breaker suite only"})
    _emit(out, a.out)


def cmd_experiment(a) -> None:
    from rlab.harness import load_config, run_experiment, write_run

    cfg = load_config(a.config)
    if a.seed is not None:
        cfg.seed = a.seed
    if a.workers is not None:
        cfg.workers = a.workers
    out = a.out or cfg.out
    if not out:
        raise GraphError("no output directory: pass --out or set out in the config")
    cfg.validate()
    run = run_experiment(cfg)
    csv_path, json_path = write_run(run, out)
    errors = [(r["point"], r["sample"], r["error"]) for r in run.rows if r.get("error")]
    _emit({"config_hash": run.config_hash, "rows": len(run.rows), "errors": errors,
           "files": [str(csv_path), str(json_path)]}, None)


def cmd_report(a) -> None:
    from rlab.harness import load_run, report

    paths = report(load_run(a.run), a.out, a.format)
    _emit({"files": [str(p) for p in paths]}, None)


# ---------------------------------------------------------------------------
# Parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="rlab", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"rlab {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_, out_required=False):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--seed", type=int, default=0 if name != "experiment" else None)
        sp.add_argument("--out", required=out_required)
        sp.set_defaults(func=fn)
        return sp

    def gen_args(sp, models):
        sp.add_argument("--model", choices=models, required=True)
        sp.add_argument("--n", type=int)
        sp.add_argument("--d", type=int)
        sp.add_argument("--d1", type=int)
        sp.add_argument("--d2", type=int)
        sp.add_argument("--p", type=float)
        sp.add_argument("--method", default="auto", choices=("auto", "pairing", "switch"))

    sp = add("generate", cmd_generate, "sample a graph and write it as an edge list", out_required=True)
    gen_args(sp, ("regular", "degseq", "union", "two-ham", "gnp"))
    sp.add_argument("--degrees", help="file of whitespace-separated degrees")

    sp = add("spectral", cmd_spectral, "second eigenvalue report")
    sp.add_argument("--in", dest="input", required=True)
    sp.add_argument("--tol", type=float, default=1e-8)

    sp = add("attack", cmd_attack, "constructive edge-removal attacks")
    sp.add_argument("--kind", choices=("trivial", "partition", "matching"), required=True)
    sp.add_argument("--in", dest="input", required=True)
    sp.add_argument("--k", type=int, default=1, help="connectivity target for the trivial attack")
    sp.add_argument("--out-h", dest="out_h")

    sp = add("certify", cmd_certify, "deterministic tolerance certificates")
    sp.add_argument("--kind", choices=sorted(CERT_KINDS), required=True)
    sp.add_argument("--in", dest="input", required=True)
    sp.add_argument("--lambda", dest="lam", type=float)
    sp.add_argument("--compute-lambda", action="store_true")
    sp.add_argument("--epsilon", type=float, default=1.0)

    sp = add("ham", cmd_ham, "decide Hamiltonicity")
    sp.add_argument("--in", dest="input", required=True)
    sp.add_argument("--mode", choices=("exact", "heuristic"), default="heuristic")
    sp.add_argument("--restarts", type=int, default=200)

    sp = add("boosters", cmd_boosters, "list booster pairs")
    sp.add_argument("--in", dest="input", required=True)
    sp.add_argument("--mode", choices=("exact", "witnessed"), default="witnessed")
    sp.add_argument("--depth", type=int, default=1, choices=(1, 2))

    sp = add("resilience", cmd_resilience, "estimate local resilience of Hamiltonicity")
    gen_args(sp, ("regular", "union", "two-ham", "gnp"))
    sp.add_argument("--property", default="ham")
    sp.add_argument("--epsilon", type=float, default=0.5)
    sp.add_argument("--samples", type=int, default=1)
    sp.add_argument("--restarts", type=int, default=200)

    sp = add("game", cmd_game, "play a Maker-Breaker Hamiltonicity game")
    sp.add_argument("--board", required=True)
    sp.add_argument("--decomp", required=True, help="comma-separated part files")
    sp.add_argument("--maker", choices=("thm6", "greedy"), default="thm6")
    sp.add_argument("--breaker", default="random")

    sp = add("experiment", cmd_experiment, "run a configured sweep")
    sp.add_argument("--config", required=True)
    sp.add_argument("--workers", type=int)

    sp = add("report", cmd_report, "summary tables from a run record", out_required=True)
    sp.add_argument("--run", required=True, help="run.json written by experiment")
    sp.add_argument("--format", choices=("csv", "json", "both"), default="csv")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except (GraphError, ValueError, OSError, KeyError, json.JSONDecodeError) as exc:
        print(f"rlab: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except Exception as exc:
        print(f"rlab: failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
