"""Command-line front end.

Subcommands:
  run        one scenario, emitting its CSV row
  sweep      a full model x nodes x speed x seed matrix
  figures    per-model summary tables from a sweep CSV
  gen-trace  mobility only, emitting the trace text format

Every scenario knob is a flag; --config loads the same knobs from an INI
file (sections [scenario], [radio], [routing], [traffic]) and explicit
flags win over the file. --print-config echoes the fully resolved
configuration and exits. Exit codes: 0 success, 1 invalid configuration,
2 runtime failure.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace

from .config import (
    MODELS,
    ConfigError,
    ScenarioConfig,
    SweepSpec,
    from_ini,
    to_ini,
)
from .eventlog import EventLog
from .mobility import TraceFormatError, write_trace
from .scenario import CSV_HEADER, Simulation, build_trace
from .sweep import (
    SweepError,
    figure_tables,
    records_to_csv,
    rows_from_csv,
    rows_from_records,
    run_sweep,
    summary_csv,
)
from .traffic import LedgerError, write_packet_ledger
from .kernel import Kernel

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_RUNTIME = 2


def _scenario_flags(parser: argparse.ArgumentParser) -> None:
    """Knobs shared by run, sweep, and gen-trace; None means unset."""
    parser.add_argument("--config", metavar="PATH", help="INI file with scenario knobs")
    parser.add_argument(
        "--print-config", action="store_true",
        help="echo the resolved configuration and exit",
    )
    scen = parser.add_argument_group("scenario")
    scen.add_argument("--model", choices=MODELS, help="mobility model")
    scen.add_argument("--nodes", type=int, help="number of nodes")
    scen.add_argument("--speed", type=float, help="node speed, m/s")
    scen.add_argument("--seed", type=int, help="run seed")
    scen.add_argument("--pause", type=float, help="pause time, s")
    scen.add_argument("--horizon", type=float, help="simulated duration, s")
    scen.add_argument(
        "--area", metavar="WxH", help="area size in meters, e.g. 1000x1000"
    )
    scen.add_argument("--walk-step", type=float, help="walk model step length, s")
    scen.add_argument(
        "--walk-matrix", metavar="ROWS",
        help="walk transition rows 'a,b,c;d,e,f;g,h,i'",
    )
    radio = parser.add_argument_group("radio")
    radio.add_argument("--range", type=float, dest="range_m", help="radio range, m")
    radio.add_argument("--bandwidth", type=float, help="link bandwidth, bit/s")
    radio.add_argument("--queue-capacity", type=int, help="interface queue slots")
    radio.add_argument("--jitter", type=float, help="max per-hop delivery jitter, s")
    radio.add_argument("--loss", type=float, help="per-reception loss probability")
    routing = parser.add_argument_group("routing")
    routing.add_argument("--k-replies", type=int, help="max replies per discovery")
    routing.add_argument("--max-paths", type=int, help="max stored paths per route")
    routing.add_argument("--route-lifetime", type=float, help="path lifetime, s")
    routing.add_argument(
        "--discovery-timeout", type=float, help="per-attempt discovery wait, s"
    )
    routing.add_argument("--rreq-retries", type=int, help="discovery retries")
    routing.add_argument("--ttl", type=int, help="flood hop budget")
    routing.add_argument(
        "--no-intermediate-rrep", action="store_true",
        help="only the destination answers discoveries",
    )
    traffic = parser.add_argument_group("traffic")
    traffic.add_argument("--flows", type=int, help="number of random flows")
    traffic.add_argument("--rate", type=float, help="packets per second per flow")
    traffic.add_argument("--pkt-size", type=int, help="data packet size, bytes")
    traffic.add_argument("--start", type=float, help="traffic start, s")
    traffic.add_argument("--stop", type=float, help="traffic stop, s")


def _parse_area(text: str) -> tuple[float, float]:
    for sep in ("x", "X", ","):
        if sep in text:
            w, _, h = text.partition(sep)
            try:
                return float(w), float(h)
            except ValueError:
                break
    raise ConfigError(f"area: expected WxH, got {text!r}")


def _parse_matrix(text: str) -> tuple[tuple[float, ...], ...]:
    try:
        return tuple(
            tuple(float(v) for v in chunk.split(",")) for chunk in text.split(";")
        )
    except ValueError:
        raise ConfigError(f"walk_matrix: expected 'a,b,c;d,e,f;g,h,i', got {text!r}") from None


def _effective_config(args, force_no_traffic: bool = False) -> ScenarioConfig:
    cfg = ScenarioConfig()
    if args.config is not None:
        with open(args.config, encoding="utf-8") as fh:
            cfg = from_ini(fh.read(), cfg)
    updates = {}
    if force_no_traffic:
        updates["n_flows"] = 0
        updates["flows"] = None
    if args.model is not None:
        updates["model"] = args.model
    if args.nodes is not None:
        updates["n_nodes"] = args.nodes
    if args.speed is not None:
        updates["speed"] = args.speed
    if args.seed is not None:
        updates["seed"] = args.seed
    if args.pause is not None:
        updates["pause"] = args.pause
    if args.horizon is not None:
        updates["horizon"] = args.horizon
    if args.area is not None:
        updates["area_width"], updates["area_height"] = _parse_area(args.area)
    if args.walk_step is not None:
        updates["walk_step"] = args.walk_step
    if args.walk_matrix is not None:
        updates["walk_matrix"] = _parse_matrix(args.walk_matrix)
    if args.flows is not None:
        updates["n_flows"] = args.flows
    if args.rate is not None:
        updates["rate_pps"] = args.rate
    if args.pkt_size is not None:
        updates["packet_size"] = args.pkt_size
    if args.start is not None:
        updates["traffic_start"] = args.start
    if args.stop is not None:
        updates["traffic_stop"] = args.stop
    radio = {}
    if args.range_m is not None:
        radio["range_m"] = args.range_m
    if args.bandwidth is not None:
        radio["bandwidth_bps"] = args.bandwidth
    if args.queue_capacity is not None:
        radio["queue_capacity"] = args.queue_capacity
    if args.jitter is not None:
        radio["jitter_max"] = args.jitter
    if args.loss is not None:
        radio["loss_prob"] = args.loss
    if radio:
        updates["radio"] = replace(cfg.radio, **radio)
    routing = {}
    if args.k_replies is not None:
        routing["k_replies"] = args.k_replies
    if args.max_paths is not None:
        routing["max_paths"] = args.max_paths
    if args.route_lifetime is not None:
        routing["route_lifetime"] = args.route_lifetime
    if args.discovery_timeout is not None:
        routing["discovery_timeout"] = args.discovery_timeout
    if args.rreq_retries is not None:
        routing["rreq_retries"] = args.rreq_retries
    if args.ttl is not None:
        routing["ttl"] = args.ttl
    if args.no_intermediate_rrep:
        routing["intermediate_rrep"] = False
    if routing:
        updates["routing"] = replace(cfg.routing, **routing)
    if getattr(args, "trace", None) is not None:
        updates["trace_path"] = args.trace
    return replace(cfg, **updates)


def _write_out(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _parse_float_list(text: str, flag: str) -> tuple[float, ...]:
    try:
        return tuple(float(v) for v in text.split(","))
    except ValueError:
        raise ConfigError(f"{flag}: expected comma-separated numbers, got {text!r}") from None


def _parse_int_list(text: str, flag: str) -> tuple[int, ...]:
    try:
        return tuple(int(v) for v in text.split(","))
    except ValueError:
        raise ConfigError(f"{flag}: expected comma-separated integers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="manetsim",
        description="Deterministic multipath-routing simulator for mobile ad hoc networks",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one scenario and emit its CSV row")
    _scenario_flags(p_run)
    p_run.add_argument("--trace", metavar="PATH", help="mobility trace file to replay")
    p_run.add_argument("--out", metavar="PATH", help="CSV destination (default stdout)")
    p_run.add_argument("--event-log", metavar="PATH", help="write the event log here")
    p_run.add_argument(
        "--packet-ledger", metavar="PATH", help="write the per-packet ledger here"
    )

    p_sweep = sub.add_parser("sweep", help="run the full experiment matrix")
    _scenario_flags(p_sweep)
    p_sweep.add_argument(
        "--models", metavar="LIST", help=f"comma list from {{{','.join(MODELS)}}}"
    )
    p_sweep.add_argument("--node-counts", metavar="LIST", help="comma list of node counts")
    p_sweep.add_argument("--speeds", metavar="LIST", help="comma list of speeds, m/s")
    p_sweep.add_argument("--seeds-per-point", type=int, help="replicates per point")
    p_sweep.add_argument("--master-seed", type=int, help="seed of replicate 0")
    p_sweep.add_argument("--jobs", type=int, default=1, help="worker processes")
    p_sweep.add_argument("--out", metavar="PATH", help="CSV destination (default stdout)")
    p_sweep.add_argument(
        "--summary-out", metavar="PATH", help="write per-point seed means here"
    )
    p_sweep.add_argument(
        "--quiet", action="store_true", help="suppress the progress line on stderr"
    )

    p_fig = sub.add_parser("figures", help="summary tables from a sweep CSV")
    p_fig.add_argument("csv", help="sweep CSV produced by the sweep subcommand")
    p_fig.add_argument("--out", metavar="PATH", help="table destination (default stdout)")

    p_gen = sub.add_parser("gen-trace", help="generate a mobility trace only")
    _scenario_flags(p_gen)
    p_gen.add_argument("--out", metavar="PATH", help="trace destination (default stdout)")

    return parser


def _cmd_run(args) -> int:
    cfg = _effective_config(args)
    if args.print_config:
        sys.stdout.write(to_ini(cfg))
        return EXIT_OK
    log = EventLog() if args.event_log is not None else None
    sim = Simulation(cfg, log=log)
    record = sim.run()
    _write_out(CSV_HEADER + "\n" + record.csv_row() + "\n", args.out)
    if args.event_log is not None:
        log.write(args.event_log)
    if args.packet_ledger is not None:
        with open(args.packet_ledger, "w", encoding="utf-8") as fh:
            fh.write(write_packet_ledger(sim.packet_records()))
    return EXIT_OK


def _cmd_sweep(args) -> int:
    base = _effective_config(args)
    spec_updates = {}
    if args.models is not None:
        spec_updates["models"] = tuple(args.models.split(","))
    if args.node_counts is not None:
        spec_updates["node_counts"] = _parse_int_list(args.node_counts, "node_counts")
    if args.speeds is not None:
        spec_updates["speeds"] = _parse_float_list(args.speeds, "speeds")
    if args.seeds_per_point is not None:
        spec_updates["seeds_per_point"] = args.seeds_per_point
    if args.master_seed is not None:
        spec_updates["master_seed"] = args.master_seed
    spec = SweepSpec(base=base, **spec_updates)
    if args.print_config:
        sys.stdout.write(to_ini(base))
        sys.stdout.write(
            f"; sweep: models={','.join(spec.models)}"
            f" node_counts={','.join(str(n) for n in spec.node_counts)}"
            f" speeds={','.join(f'{s:g}' for s in spec.speeds)}"
            f" seeds_per_point={spec.seeds_per_point}"
            f" master_seed={spec.master_seed} -> {spec.n_runs} runs\n"
        )
        return EXIT_OK

    def progress(done, total, record):
        sys.stderr.write(
            f"\r[{done}/{total}] {record.model} nodes={record.n_nodes}"
            f" speed={record.speed:g} seed={record.seed}   "
        )
        if done == total:
            sys.stderr.write("\n")
        sys.stderr.flush()

    records = run_sweep(spec, jobs=args.jobs, progress=None if args.quiet else progress)
    _write_out(records_to_csv(records), args.out)
    if args.summary_out is not None:
        _write_out(summary_csv(rows_from_records(records)), args.summary_out)
    return EXIT_OK


def _cmd_figures(args) -> int:
    with open(args.csv, encoding="utf-8") as fh:
        rows = rows_from_csv(fh.read())
    _write_out(figure_tables(rows), args.out)
    return EXIT_OK


def _cmd_gen_trace(args) -> int:
    # traffic plays no part in a trace, so its feasibility is not checked
    cfg = _effective_config(args, force_no_traffic=True)
    if args.print_config:
        sys.stdout.write(to_ini(cfg))
        return EXIT_OK
    trace = build_trace(cfg, Kernel(cfg.seed).stream("mobility"))
    _write_out(write_trace(trace), args.out)
    return EXIT_OK


_COMMANDS = {
    "run": _cmd_run,
    "sweep": _cmd_sweep,
    "figures": _cmd_figures,
    "gen-trace": _cmd_gen_trace,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ConfigError, TraceFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (SweepError, LedgerError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
