"""usng: command-line front end for graph generation, distance sampling,
bound reports, scaling studies, the dense oracle suite, and degree-tail
fits.

Exit codes: 0 success, 2 parameter error, 3 I/O error, 4 internal
consistency failure. Every command writes a <out>.config.json with all
resolved parameters; feeding it back through --config reproduces the run
byte-for-byte (use --no-timestamp to suppress the only varying field).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import bounds, experiments, graph, models, plots
from .errors import ConsistencyError, GraphFileError, InputError, ParameterError
from .seeding import RngSeed


def _utcnow() -> str:
    return datetime.now(timezone.utc).isoformat()


def _json_default(o):
    if isinstance(o, (np.integer,)):
        return int(o)
    if isinstance(o, (np.floating,)):
        return float(o)
    if isinstance(o, (np.bool_,)):
        return bool(o)
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(f"not JSON serializable: {type(o)}")


def _write_json(path, obj) -> None:
    Path(path).write_text(json.dumps(obj, indent=2, sort_keys=True, default=_json_default) + "\n")


def _fmt(v) -> str:
    return repr(v) if isinstance(v, float) else str(v)


def _write_csv(path, header: list, rows: list) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(row[h]) for h in header))
    Path(path).write_text("\n".join(lines) + "\n")


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=None, help="master seed (default 0)")
    p.add_argument("--stream", type=int, default=None, help="substream id (default 0)")
    p.add_argument("--threads", type=int, default=None, help="worker cap (default 1)")
    p.add_argument("--out", type=str, default=None, help="output path prefix")
    p.add_argument("--trace", action="store_true", help="include construction arrays")
    p.add_argument("--no-timestamp", action="store_true", help="omit generated_at fields")
    p.add_argument("--config", type=str, default=None, help="JSON config with defaults for this run")


def _add_model_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--model", type=str, default=None,
                   choices=["pa_fixed", "pa_variable", "chung_lu", "norros_reittu", "config_model"])
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--m", type=int, default=None, help="pa_fixed outdegree")
    p.add_argument("--delta", type=float, default=None, help="pa_fixed attachment tilt")
    p.add_argument("--gamma", type=float, default=None, help="chung_lu weight exponent")
    p.add_argument("--scale", type=float, default=None, help="chung_lu weight scale")
    p.add_argument("--tau", type=float, default=None, help="power-law exponent in (2,3)")
    p.add_argument("--tail-const", type=float, default=None, help="tail constant c")
    p.add_argument("--f-slope", type=float, default=None, help="pa_variable affine slope")
    p.add_argument("--f-intercept", type=float, default=None, help="pa_variable affine intercept")
    p.add_argument("--f-table", type=str, default=None, help="pa_variable table values, comma separated")
    p.add_argument("--f-tail-slope", type=float, default=None, help="pa_variable table extension slope")


_DEFAULTS = {
    "seed": 0, "stream": 0, "threads": 1, "trace": False, "no_timestamp": False,
    "m": 2, "delta": -0.5, "gamma": 0.6, "scale": 1.0, "tau": 2.5, "tail_const": 1.0,
    "f_slope": 0.7, "f_intercept": 0.3, "f_table": None, "f_tail_slope": None,
    "kappa": 1.0, "epsilon": 0.05, "family": "pa", "rule": "both",
    "pairs": 1000, "replicas": 3, "cutoff": None, "k_top": None,
    "n": None, "model": None, "graph": None, "n_grid": None, "format": "binary",
    "v": None, "w": None, "out": "usng-out",
}


def _resolve(args: argparse.Namespace) -> dict:
    cfg = dict(_DEFAULTS)
    ns = vars(args)
    if ns.get("config"):
        with open(ns["config"]) as fh:
            loaded = json.load(fh)
        loaded.pop("command", None)
        cfg.update(loaded)
    for key, val in ns.items():
        if key in ("config", "func", "command"):
            continue
        if val is not None and val is not False:
            cfg[key] = val
    return cfg


def _spec_from_cfg(cfg: dict):
    model = cfg.get("model")
    if model is None:
        raise ParameterError("--model is required (or provide it via --config)")
    if model == "pa_fixed":
        return models.PaFixed(int(cfg["m"]), float(cfg["delta"]))
    if model == "pa_variable":
        if cfg.get("f_table"):
            table = cfg["f_table"]
            values = tuple(float(x) for x in (table.split(",") if isinstance(table, str) else table))
            tail = cfg.get("f_tail_slope")
            if tail is None:
                raise ParameterError("table rules need --f-tail-slope")
            rule = models.AttachmentRule("table", float(tail), values=values)
        else:
            rule = models.AttachmentRule("affine", float(cfg["f_slope"]), float(cfg["f_intercept"]))
        return models.PaVariable(rule)
    if model == "chung_lu":
        return models.ChungLu(float(cfg["gamma"]), float(cfg["scale"]),
                              min(1.0, float(cfg["scale"])), max(1.0, float(cfg["scale"])))
    if model == "norros_reittu":
        return models.NorrosReittu(float(cfg["tau"]), float(cfg["tail_const"]))
    if model == "config_model":
        return models.ConfigModel(float(cfg["tau"]), float(cfg["tail_const"]))
    raise ParameterError(f"unknown model {model!r}")


def _seed_from_cfg(cfg: dict) -> RngSeed:
    return RngSeed(int(cfg["seed"]), int(cfg["stream"]))


def _dump_config(cfg: dict, command: str) -> None:
    obj = {k: v for k, v in cfg.items() if k != "func"}
    obj["command"] = command
    _write_json(f"{cfg['out']}.config.json", obj)


def _load_any_graph(path: str) -> graph.CompactGraph:
    try:
        return graph.load_graph(path)
    except GraphFileError:
        return graph.load_edgelist_text(path)


def _graph_from_cfg(cfg: dict):
    """Graph from --graph file, or generated on the fly from the model flags."""
    if cfg.get("graph"):
        return _load_any_graph(cfg["graph"]), None
    if cfg.get("n") is None:
        raise ParameterError("need --graph FILE or --model ... --n N")
    spec = _spec_from_cfg(cfg)
    return models.generate(spec, int(cfg["n"]), _seed_from_cfg(cfg)), spec


# --- subcommands -------------------------------------------------------------


def cmd_generate(cfg: dict) -> int:
    spec = _spec_from_cfg(cfg)
    if cfg.get("n") is None:
        raise ParameterError("--n is required")
    seed = _seed_from_cfg(cfg)
    g = models.generate(spec, int(cfg["n"]), seed)
    out = cfg["out"]
    if cfg.get("format", "binary") == "text":
        graph_path = f"{out}.txt"
        graph.save_edgelist_text(g, graph_path)
    else:
        graph_path = f"{out}.usng"
        graph.save_graph(g, graph_path)
    comp = graph.components(g)
    meta = {
        "spec": models.spec_to_json(spec, seed),
        "n": g.n_vertices,
        "n_edges": g.n_edges,
        "giant_size": comp.giant_size,
        "n_components": comp.n_components,
        "graph_file": graph_path,
    }
    if isinstance(spec, (models.PaFixed, models.PaVariable)):
        meta["ultrasmall_regime"] = spec.ultrasmall
    if not cfg["no_timestamp"]:
        meta["generated_at"] = _utcnow()
    _write_json(f"{out}.meta.json", meta)
    _dump_config(cfg, "generate")
    print(f"wrote {graph_path}: n={g.n_vertices} edges={g.n_edges} giant={comp.giant_size}")
    return 0


def cmd_distances(cfg: dict) -> int:
    g, spec = _graph_from_cfg(cfg)
    seed = _seed_from_cfg(cfg)
    cutoff = cfg.get("cutoff")
    sample = experiments.sample_distances(
        g, int(cfg["pairs"]), seed, cutoff=None if cutoff is None else int(cutoff), model=spec
    )
    out = cfg["out"]
    rows = [
        {"v": int(v), "w": int(w), "distance": (int(d) if d >= 0 else "unreached")}
        for v, w, d in zip(sample.vs, sample.ws, sample.distances)
    ]
    _write_csv(f"{out}.csv", ["v", "w", "distance"], rows)
    summary = sample.summary()
    summary["n"] = g.n_vertices
    if not cfg["no_timestamp"]:
        summary["generated_at"] = _utcnow()
    _write_json(f"{out}.summary.json", summary)
    _dump_config(cfg, "distances")
    print(f"wrote {out}.csv: {summary['pairs']} pairs, mean={summary['mean']:.3f}")
    return 0


def cmd_bounds(cfg: dict) -> int:
    family = cfg["family"]
    if family not in (bounds.PA, bounds.CM):
        raise ParameterError("--family must be pa or cm")
    if cfg.get("n") is None:
        raise ParameterError("--n is required")
    state = bounds.build_state(family, int(cfg["n"]), float(cfg["gamma"]),
                               float(cfg["kappa"]), float(cfg["epsilon"]))
    report = bounds.assemble_bound(state)
    out = cfg["out"]
    obj = bounds.report_to_json(report, trace=bool(cfg["trace"]))
    if not cfg["no_timestamp"]:
        obj["generated_at"] = _utcnow()
    _write_json(f"{out}.json", obj)
    Path(f"{out}.csv").write_text(bounds.CSV_HEADER + "\n" + bounds.report_csv_row(report) + "\n")
    if cfg["trace"]:
        plots.save_trace_figure(obj, f"{out}_trace.png")
    _dump_config(cfg, "bounds")
    print(
        f"family={family} N={report.n} delta_steps={report.delta_steps} "
        f"total={report.total:.6g} valid={report.valid}"
    )
    return 0


def cmd_scaling(cfg: dict) -> int:
    if not cfg.get("n_grid"):
        raise ParameterError("--n-grid is required (comma-separated sizes)")
    grid_raw = cfg["n_grid"]
    grid = [int(x) for x in (grid_raw.split(",") if isinstance(grid_raw, str) else grid_raw)]
    spec = _spec_from_cfg(cfg)
    seed = _seed_from_cfg(cfg)
    fit = experiments.scaling_run(
        spec, grid, int(cfg["pairs"]), int(cfg["replicas"]), seed,
        cutoff=cfg.get("cutoff"), threads=int(cfg["threads"]),
    )
    out = cfg["out"]
    obj = {
        "model": models.spec_to_json(spec, seed),
        "slope": fit.slope,
        "intercept": fit.intercept,
        "slope_stderr": fit.slope_stderr,
        "points": fit.points,
    }
    if not cfg["no_timestamp"]:
        obj["generated_at"] = _utcnow()
    _write_json(f"{out}.json", obj)
    _write_csv(
        f"{out}_replicas.csv",
        ["model", "n", "replica", "pairs", "unreached", "giant_size", "mean", "median", "q05", "q95"],
        fit.replica_rows,
    )
    plot_lines = ["# x=loglog_n y=mean_distance"]
    plot_lines += [f"{p['loglog_n']!r} {p['mean']!r}" for p in fit.points]
    Path(f"{out}_plotdata.txt").write_text("\n".join(plot_lines) + "\n")
    plots.save_scaling_figure(fit, f"{out}.png")
    _dump_config(cfg, "scaling")
    print(f"slope={fit.slope:.4f} (stderr {fit.slope_stderr:.4f}) intercept={fit.intercept:.4f}")
    return 0


def cmd_oracle(cfg: dict) -> int:
    family = cfg["family"]
    if family not in (bounds.PA, bounds.CM):
        raise ParameterError("--family must be pa or cm")
    if cfg.get("n") is None:
        raise ParameterError("--n is required")
    rules = [cfg["rule"]] if cfg["rule"] in (bounds.BUDGET, bounds.DIAGNOSTIC) else [
        bounds.BUDGET, bounds.DIAGNOSTIC,
    ]
    runs = []
    worst = 0
    for rule in rules:
        rep = bounds.dominance_report(
            family, int(cfg["n"]), float(cfg["gamma"]), float(cfg["kappa"]),
            float(cfg["epsilon"]), rule=rule,
            v=cfg.get("v"), w=cfg.get("w"),
        )
        rep.pop("report")
        runs.append(rep)
        worst += rep["violations"] + (0 if rep["middle_dominated"] else 1)
        worst += 0 if rep["crossing_dominated"] else 1
    out = cfg["out"]
    obj = {"runs": runs, "violations": worst}
    if not cfg["no_timestamp"]:
        obj["generated_at"] = _utcnow()
    _write_json(f"{out}.json", obj)
    _dump_config(cfg, "oracle")
    for rep in runs:
        print(
            f"rule={rep['rule']} delta_steps={rep['delta_steps']} "
            f"{rep['violations']} violations, levels checked: {rep['levels_checked']}"
        )
    if worst:
        raise ConsistencyError(f"{worst} dominance violations")
    print("0 violations")
    return 0


def cmd_degrees(cfg: dict) -> int:
    g, spec = _graph_from_cfg(cfg)
    hist = models.degree_histogram(g)
    out = cfg["out"]
    rows = [{"degree": d, "count": c} for d, c in sorted(hist.items())]
    _write_csv(f"{out}_hist.csv", ["degree", "count"], rows)
    fit = None
    fit_obj: dict = {}
    try:
        k_top = cfg.get("k_top")
        fit = experiments.estimate_tail(hist, k_top=None if k_top is None else int(k_top))
        fit_obj = {
            "tau_hat": fit.tau_hat, "method": fit.method,
            "k_top": fit.k_top, "tau_ccdf": fit.tau_ccdf,
        }
    except ParameterError as exc:
        fit_obj = {"error": str(exc)}
    if spec is not None:
        fit_obj["model"] = models.spec_to_json(spec, _seed_from_cfg(cfg))
    if not cfg["no_timestamp"]:
        fit_obj["generated_at"] = _utcnow()
    _write_json(f"{out}_tail.json", fit_obj)
    plots.save_ccdf_figure(hist, fit, f"{out}_ccdf.png")
    _dump_config(cfg, "degrees")
    if fit is not None:
        print(f"tau_hat={fit.tau_hat:.4f} (k_top={fit.k_top}, ccdf cross-check={fit.tau_ccdf})")
    else:
        print(f"tail fit unavailable: {fit_obj.get('error')}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="usng",
        description="ultrasmall network generators, distance experiments, and bound reports",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="generate a graph file plus metadata")
    _add_model_flags(p)
    p.add_argument("--format", choices=["binary", "text"], default=None)
    _add_common(p)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("distances", help="sample giant-component pair distances")
    _add_model_flags(p)
    p.add_argument("--graph", type=str, default=None, help="existing graph file")
    p.add_argument("--pairs", type=int, default=None)
    p.add_argument("--cutoff", type=int, default=None)
    _add_common(p)
    p.set_defaults(func=cmd_distances)

    p = sub.add_parser("bounds", help="assemble a short-path probability bound")
    p.add_argument("--family", type=str, default=None, help="pa or cm")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--gamma", type=float, default=None)
    p.add_argument("--kappa", type=float, default=None)
    p.add_argument("--epsilon", type=float, default=None)
    _add_common(p)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("scaling", help="distance scaling study over an N grid")
    _add_model_flags(p)
    p.add_argument("--n-grid", type=str, default=None, help="comma-separated sizes")
    p.add_argument("--pairs", type=int, default=None)
    p.add_argument("--replicas", type=int, default=None)
    p.add_argument("--cutoff", type=int, default=None)
    _add_common(p)
    p.set_defaults(func=cmd_scaling)

    p = sub.add_parser("oracle", help="dense dominance suite at small N")
    p.add_argument("--family", type=str, default=None)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--gamma", type=float, default=None)
    p.add_argument("--kappa", type=float, default=None)
    p.add_argument("--epsilon", type=float, default=None)
    p.add_argument("--rule", type=str, default=None, choices=["budget", "diagnostic", "both"])
    p.add_argument("--v", type=int, default=None)
    p.add_argument("--w", type=int, default=None)
    _add_common(p)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("degrees", help="degree histogram and tail-exponent fit")
    _add_model_flags(p)
    p.add_argument("--graph", type=str, default=None)
    p.add_argument("--k-top", type=int, default=None)
    _add_common(p)
    p.set_defaults(func=cmd_degrees)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _resolve(args)
        return args.func(cfg)
    except (ParameterError, InputError) as exc:
        print(f"parameter error: {exc}", file=sys.stderr)
        return 2
    except (FileNotFoundError, IsADirectoryError, GraphFileError) as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3
    except ConsistencyError as exc:
        print(f"consistency failure: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
