"""Command-line front end.

Exit codes: 0 success, 1 configuration or usage error, 2 unphysical or
failed synthesis, 3 I/O error, 4 Monte Carlo run without heralds.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

from . import pipeline
from .config import as_dict, load
from .errors import (
    ConfigError,
    DomainError,
    FbarLinkError,
    InsufficientStatisticsError,
    UnphysicalCapacitanceError,
)
from .matching import MatchingObjective
from .optomech import Topology

EXIT_OK, EXIT_CONFIG, EXIT_UNPHYSICAL, EXIT_IO, EXIT_STATS = 0, 1, 2, 3, 4

OBJECTIVES = {
    "max-eff": [MatchingObjective.MAXIMIZE_EFFICIENCY],
    "min-noise": [MatchingObjective.MINIMIZE_NOISE],
    "both": [MatchingObjective.MAXIMIZE_EFFICIENCY, MatchingObjective.MINIMIZE_NOISE],
}
TOPOLOGIES = {
    "one-ring": [Topology.ONE_RING],
    "two-ring": [Topology.TWO_RING],
    "both": [Topology.ONE_RING, Topology.TWO_RING],
}


class _Parser(argparse.ArgumentParser):
    # usage errors share the configuration-error exit code
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def fmt(v):
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return "nan" if math.isnan(v) else f"{v:.6g}"
    return str(v)


def _label(row):
    keys = ("topology", "objective", "protocol")
    return "/".join(str(row[k]) for k in keys if k in row)


def render_table(rows, transpose):
    if not rows:
        return ""
    if transpose:
        # one column per design point, one line per quantity
        names = [k for k in rows[0] if k not in ("topology", "objective", "protocol")]
        head = ["quantity"] + [_label(r) for r in rows]
        body = [[n] + [fmt(r.get(n)) for r in rows] for n in names]
    else:
        head = list(rows[0])
        body = [[fmt(r.get(k)) for k in head] for r in rows]
    table = [head] + body
    widths = [max(len(line[i]) for line in table) for i in range(len(head))]
    out = []
    for i, line in enumerate(table):
        out.append("  ".join(c.ljust(w) if j == 0 else c.rjust(w)
                             for j, (c, w) in enumerate(zip(line, widths))).rstrip())
        if i == 0:
            out.append("  ".join("-" * w for w in widths))
    return "\n".join(out) + "\n"


def render_csv(rows, header=None):
    buf = io.StringIO()
    header = header or (list(rows[0]) if rows else [])
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([fmt(r.get(k)) for k in header])
    return buf.getvalue()


def _jsonable(v):
    if isinstance(v, float) and not math.isfinite(v):
        return None
    return v


def render_structured(cfg, rows, notices):
    doc = {
        "config": as_dict(cfg),
        "rows": [{k: _jsonable(v) for k, v in r.items()} for r in rows],
        "warnings": [{"code": n.code, "message": n.message} for n in notices],
    }
    return json.dumps(doc, indent=2) + "\n"


def render(args, cfg, rows, notices, transpose=True, header=None, format=None):
    format = format or args.format
    if format == "csv":
        return render_csv(rows, header)
    if format == "structured":
        return render_structured(cfg, rows, notices)
    return render_table(rows, transpose)


def emit(args, text):
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _warn(args, notices):
    if args.format != "structured":
        for n in notices:
            print(f"warning [{n.code}]: {n.message}", file=sys.stderr)


def _selection(args, cfg, all_topologies=False):
    # design tables cover both topologies; link-level commands use the config's
    if args.topology:
        topologies = TOPOLOGIES[args.topology]
    elif all_topologies:
        topologies = TOPOLOGIES["both"]
    else:
        topologies = [Topology(cfg.topology)]
    return topologies, OBJECTIVES[args.objective]


def cmd_synth(args, cfg):
    topologies, objectives = _selection(args, cfg, all_topologies=True)
    report = pipeline.run_synth(cfg, topologies, objectives)
    _warn(args, report.warnings)
    emit(args, render(args, cfg, report.rows, report.warnings))


def cmd_fom(args, cfg):
    topologies, objectives = _selection(args, cfg, all_topologies=True)
    report = pipeline.run_fom(cfg, topologies, objectives)
    _warn(args, report.warnings)
    emit(args, render(args, cfg, report.rows, report.warnings))


def cmd_herald(args, cfg):
    topologies, objectives = _selection(args, cfg)
    protocols = [args.protocol] if args.protocol else ["type1", "type2"]
    report = pipeline.run_herald(cfg, topologies, objectives, protocols)
    _warn(args, report.warnings)
    emit(args, render(args, cfg, report.rows, report.warnings))


def cmd_sweep(args, cfg):
    topologies, objectives = _selection(args, cfg)
    spec = pipeline.SweepSpec(args.var, args.start, args.stop, args.points, args.scale)
    report = pipeline.RunReport("")
    rows = pipeline.sweep_rows(cfg, spec, topologies, objectives, report)
    _warn(args, report.warnings)
    # a file target gets the machine-readable form unless asked otherwise
    format = "csv" if args.format == "table" and args.out else args.format
    emit(args, render(args, cfg, rows, report.warnings, transpose=False, header=spec.header,
                      format=format))


def cmd_mc(args, cfg):
    topologies, objectives = _selection(args, cfg)
    report = pipeline.RunReport("")
    rows = pipeline.mc_rows(cfg, topologies, objectives, args.protocol or "type1", args.trials,
                            args.seed, workers=args.workers, log_path=args.event_log,
                            report=report)
    _warn(args, report.warnings)
    emit(args, render(args, cfg, rows, report.warnings))


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default="table1",
                        help="config file, or a bundled name: table1, table1_two_ring")
    common.add_argument("--objective", choices=list(OBJECTIVES), default="both")
    common.add_argument("--topology", choices=list(TOPOLOGIES), default=None,
                        help="default: both for synth and fom, else the config's topology")
    common.add_argument("--protocol", choices=["type1", "type2", "blue"], default=None)
    common.add_argument("--format", choices=["table", "csv", "structured"], default="table")
    common.add_argument("--out", default=None, help="write output here instead of stdout")

    parser = _Parser(prog="fbarlink", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("synth", parents=[common], help="matching network synthesis")
    sub.add_parser("fom", parents=[common], help="figures of merit")
    sub.add_parser("herald", parents=[common], help="heralding fidelity and rates")

    sw = sub.add_parser("sweep", parents=[common], help="1-D parameter sweep to CSV")
    sw.add_argument("--var", required=True, choices=list(pipeline.SWEEP_UNITS))
    sw.add_argument("--start", type=float, required=True,
                    help="temperature in mK, g_om in MHz, others dimensionless")
    sw.add_argument("--stop", type=float, required=True)
    sw.add_argument("--points", type=int, default=50)
    sw.add_argument("--scale", choices=["linear", "log"], default="linear")

    mc = sub.add_parser("mc", parents=[common], help="Monte Carlo check of the analytic model")
    mc.add_argument("--trials", type=int, default=1_000_000)
    mc.add_argument("--seed", type=int, default=0)
    mc.add_argument("--workers", type=int, default=1)
    mc.add_argument("--event-log", default=None, help="write one JSON record per trial")
    return parser


COMMANDS = {"synth": cmd_synth, "fom": cmd_fom, "herald": cmd_herald,
            "sweep": cmd_sweep, "mc": cmd_mc}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load(args.config)
    except ConfigError as exc:
        print(f"config error in {args.config}: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"cannot read config: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        COMMANDS[args.command](args, cfg)
    except UnphysicalCapacitanceError as exc:
        topology = TOPOLOGIES[args.topology][0] if args.topology else cfg.topology
        print(f"error: {pipeline.unphysical_message(exc, cfg, topology)}", file=sys.stderr)
        return EXIT_UNPHYSICAL
    except InsufficientStatisticsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_STATS
    except (ConfigError, DomainError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except FbarLinkError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNPHYSICAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
