"""Command-line entry point: ``hubsim fit | netgen | simulate | plot``.

Exit codes: 0 success, 1 usage or config error, 2 data error, 3 internal error.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__, contact_data
from .config import ConfigError, load_config
from .contact_data import DataError
from .epidemic import write_trajectory
from .experiment import read_band_csv, run_replications, write_band_csv, write_summary_csv
from .netgen import CLOSURE_TRIGGERS, generate_dc, generate_er
from .netmetrics import CSV_COLUMNS, compute_metrics
from .network import write_edgelist

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_INTERNAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


@contextlib.contextmanager
def atomic_path(path):
    """Yield a temporary sibling path that replaces ``path`` on success."""
    path = Path(path)
    tmp = path.with_name(f".{path.name}.tmp")
    try:
        yield tmp
        os.replace(tmp, path)
    finally:
        if tmp.exists():
            tmp.unlink()


def _write_text(path, text):
    with atomic_path(path) as tmp:
        tmp.write_text(text, encoding="utf-8")


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _degrees(source: str):
    return contact_data.bundled_diary() if source == "bundled" else contact_data.load_degree_file(source)


# --- commands -----------------------------------------------------------------

def cmd_fit(args) -> int:
    seq = _degrees(args.degree_file)
    if args.job_file:
        extras = (contact_data.bundled_job_extras() if args.job_file == "bundled"
                  else contact_data.load_job_file(args.job_file))
        if args.extras_only:
            seq = np.array([e for _, e in extras if e > 0], dtype=np.int64)
        else:
            seq = contact_data.combine_with_job_contacts(seq, extras, args.cap)
    fit = (contact_data.select_xmin(seq) if args.xmin is None
           else contact_data.fit_power_law_tail(seq, args.xmin))
    p_value = None
    if args.gof:
        p_value = contact_data.power_law_gof(seq, fit, replicates=args.gof, seed=args.seed)
    text = _json(fit.to_dict(p_value))
    if args.out:
        _write_text(args.out, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_netgen(args) -> int:
    if (args.degree_file is None) == (args.er is None):
        raise UsageError("netgen: give either a degree file or --er N AVG_DEGREE")
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    if args.er is not None:
        n, k = args.er
        n_int = int(n)
        if n_int != n:
            raise UsageError("netgen: --er N must be an integer")
        net = generate_er(n_int, k, args.seed)
        report = {"kind": "er", "n": n_int, "avg_degree": k, "deficit_total": 0}
    else:
        net, rep = generate_dc(_degrees(args.degree_file), args.p, args.seed,
                               closure_trigger=args.closure_trigger)
        report = {"kind": "dc", "p": args.p, "closure_trigger": args.closure_trigger, **rep.to_dict()}
    report["seed"] = args.seed
    metrics = compute_metrics(net)
    write_edgelist(net, f"{out}.edges")
    row = ",".join(f"{v:.10g}" if isinstance(v, float) else str(v) for v in metrics.csv_row())
    _write_text(f"{out}.metrics.csv", ",".join(CSV_COLUMNS) + "\n" + row + "\n")
    _write_text(f"{out}.report.json", _json(report))
    print(f"wrote {out}.edges, {out}.metrics.csv, {out}.report.json")
    return EXIT_OK


def cmd_simulate(args) -> int:
    # validate every config before producing any output
    loaded = [(Path(p), *load_config(p)) for p in args.configs]
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    started = time.perf_counter()
    summaries, outputs, runs_meta = [], [], []
    for path, cfg, workers, flat in loaded:
        workers = args.workers or workers
        name = path.stem
        print(f"[{name}] {cfg.replications} replications, workers={workers}", flush=True)
        summary = run_replications(cfg, workers=workers)
        summaries.append(summary)
        traj_dir = out / "trajectories" / name
        traj_dir.mkdir(parents=True, exist_ok=True)
        for k, run in enumerate(summary.runs):
            target = traj_dir / f"rep{k:04d}.csv"
            with atomic_path(target) as tmp:
                write_trajectory([tuple(r) for r in run.trajectory.tolist()], tmp)
            outputs.append(str(target))
        band = out / f"{name}.bands.csv"
        with atomic_path(band) as tmp:
            write_band_csv(summary, tmp)
        outputs.append(str(band))
        if not args.no_figures:
            from .plotting import plot_bands
            fig = out / f"{name}.png"
            plot_bands([summary], fig, title=name)
            outputs.append(str(fig))
        runs_meta.append({"config_file": str(path), "config": flat, "master_seed": cfg.master_seed,
                          "workers": workers, "peak_day_range": list(summary.peak_day_range)})
        print(f"[{name}] peak median {summary.peak[0]:g} on day {summary.peak_time:g}, "
              f"size median {summary.size[0]:g}", flush=True)
    summary_path = out / "summary.csv"
    with atomic_path(summary_path) as tmp:
        write_summary_csv(summaries, tmp)
    outputs.append(str(summary_path))
    manifest = out / "manifest.json"
    _write_text(manifest, _json({
        "versions": _versions(),
        "runs": runs_meta,
        "summary_rows": [m["config_file"] for m in runs_meta],
        "outputs": outputs + [str(manifest)],
        "wall_clock_seconds": round(time.perf_counter() - started, 3),
    }))
    return EXIT_OK


def cmd_plot(args) -> int:
    from types import SimpleNamespace

    from .plotting import plot_bands
    bands = []
    for p in args.bands:
        d = read_band_csv(p)
        bands.append(SimpleNamespace(days=d["day"], i_median=d["i_median"], i_p5=d["i_p5"], i_p95=d["i_p95"]))
    labels = args.labels.split(",") if args.labels else [Path(p).name.split(".")[0] for p in args.bands]
    if len(labels) != len(bands):
        raise UsageError("plot: number of labels does not match number of band files")
    plot_bands(bands, args.out, labels=labels, title=args.title)
    print(f"wrote {args.out}")
    return EXIT_OK


def _versions():
    import matplotlib
    import scipy
    return {"hubsim": __version__, "numpy": np.__version__, "scipy": scipy.__version__,
            "matplotlib": matplotlib.__version__, "python": sys.version.split()[0]}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hubsim", description="Contact-network epidemic simulation with targeted interventions.")
    parser.add_argument("--version", action="version", version=f"hubsim {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    f = sub.add_parser("fit", help="discrete power-law fit of a degree file")
    f.add_argument("degree_file", help="one degree per line, or 'bundled'")
    f.add_argument("--xmin", type=int, help="tail cutoff (default: chosen by minimum KS)")
    f.add_argument("--gof", type=int, metavar="REPLICATES", help="bootstrap p-value replicates (>= 100)")
    f.add_argument("--job-file", help="job-contact extras ('<index> <extra>' lines, or 'bundled')")
    f.add_argument("--extras-only", action="store_true", help="fit the job extras instead of the combined sequence")
    f.add_argument("--cap", type=int, default=134, help="degree cap when combining (default 134)")
    f.add_argument("--seed", type=int, default=0)
    f.add_argument("--out", help="write JSON here instead of stdout")
    f.set_defaults(func=cmd_fit)

    g = sub.add_parser("netgen", help="generate a network, its metrics and a generation report")
    g.add_argument("degree_file", nargs="?", help="target degrees, or 'bundled'")
    g.add_argument("--er", nargs=2, type=float, metavar=("N", "AVG_DEGREE"), help="Erdős–Rényi instead")
    g.add_argument("--p", type=float, default=0.0, help="triadic closure probability")
    g.add_argument("--closure-trigger", choices=CLOSURE_TRIGGERS, default="source")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", default="network", help="output prefix (default: network)")
    g.set_defaults(func=cmd_netgen)

    s = sub.add_parser("simulate", help="run replications for one or more config files")
    s.add_argument("configs", nargs="+", help="INI config file(s)")
    s.add_argument("--out", default="results", help="output directory (default: results)")
    s.add_argument("--workers", type=int, help="override experiment.workers")
    s.add_argument("--no-figures", action="store_true", help="skip PNG band figures")
    s.set_defaults(func=cmd_simulate)

    p = sub.add_parser("plot", help="render band CSVs into one PNG")
    p.add_argument("bands", nargs="+", help="band CSV file(s)")
    p.add_argument("--out", required=True)
    p.add_argument("--labels", help="comma-separated legend labels")
    p.add_argument("--title")
    p.set_defaults(func=cmd_plot)
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if getattr(args, "workers", None) is not None and args.workers < 1:
            raise UsageError("--workers must be >= 1")
        return args.func(args)
    except (UsageError, ConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DataError, OSError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # pragma: no cover - last resort
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
