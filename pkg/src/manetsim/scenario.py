"""End-to-end wiring for a single run.

run_scenario builds the whole stack from one ScenarioConfig: mobility trace
(generated from the model, parsed from a file, or injected), shared radio,
one routing agent per node, the traffic sources, and the metrics collector;
then drives the kernel to the horizon and folds the outcome into a
RunRecord. Identical configs produce byte-identical CSV rows.
"""

from __future__ import annotations

from dataclasses import dataclass

from .aomdv import AomdvNode
from .config import ConfigError, ScenarioConfig
from .eventlog import EventLog
from .kernel import Kernel
from .mobility import (
    MobilityTrace,
    generate_prob_random_walk,
    generate_random_direction,
    generate_rwp,
    parse_trace,
)
from .radio import Radio
from .traffic import MetricsCollector, PacketRecord, RunMetrics, sample_flows

CSV_HEADER = (
    "model,nodes,speed,seed,sent,delivered,pdr,pdr_pct,avg_delay_s,"
    "drops_queue,drops_noroute,drops_loss,ctrl_pkts"
)


@dataclass(frozen=True)
class RunRecord:
    """One scenario's identity plus its aggregated metrics."""

    model: str
    n_nodes: int
    speed: float
    seed: int
    metrics: RunMetrics

    def csv_row(self) -> str:
        m = self.metrics
        pdr = "" if m.pdr is None else f"{m.pdr:.6f}"
        pdr_pct = "" if m.pdr is None else f"{m.pdr * 100.0:.6f}"
        delay = "" if m.avg_delay is None else f"{m.avg_delay:.6f}"
        return (
            f"{self.model},{self.n_nodes},{self.speed:g},{self.seed},"
            f"{m.sent},{m.delivered},{pdr},{pdr_pct},{delay},"
            f"{m.drops_queue},{m.drops_no_route},{m.drops_loss},{m.control_packets}"
        )


def build_trace(cfg: ScenarioConfig, rng) -> MobilityTrace:
    """Generate the configured model's trace from one RNG stream."""
    area = cfg.area()
    if cfg.model == "rwp":
        return generate_rwp(cfg.n_nodes, area, cfg.horizon, cfg.speed, cfg.pause, rng)
    if cfg.model == "rd":
        return generate_random_direction(
            cfg.n_nodes, area, cfg.horizon, cfg.speed, cfg.pause, rng
        )
    if cfg.model == "prw":
        return generate_prob_random_walk(
            cfg.n_nodes, area, cfg.horizon, cfg.speed, cfg.walk(), cfg.walk_step, rng
        )
    raise ConfigError(f"model: unknown {cfg.model!r}")  # pragma: no cover


def _load_trace(cfg: ScenarioConfig, kernel: Kernel, injected) -> MobilityTrace:
    if injected is not None:
        trace = injected
    elif cfg.trace_path is not None:
        with open(cfg.trace_path, encoding="utf-8") as fh:
            trace = parse_trace(fh.read())
    else:
        return build_trace(cfg, kernel.stream("mobility"))
    if trace.n_nodes != cfg.n_nodes:
        raise ConfigError(
            f"n_nodes: config says {cfg.n_nodes} but the trace has {trace.n_nodes}"
        )
    if trace.horizon < cfg.horizon:
        raise ConfigError(
            f"horizon: config says {cfg.horizon!r} but the trace ends at {trace.horizon!r}"
        )
    return trace


class Simulation:
    """A fully wired run, exposed piecewise so tests can poke the internals."""

    def __init__(
        self,
        cfg: ScenarioConfig,
        trace: MobilityTrace | None = None,
        log: EventLog | None = None,
    ):
        self.cfg = cfg
        self.kernel = Kernel(cfg.seed)
        self.trace = _load_trace(cfg, self.kernel, trace)
        self.metrics = MetricsCollector()
        self.log = log
        self.radio = Radio(self.kernel, self.trace, cfg.radio, self._deliver)
        self.nodes: dict[int, AomdvNode] = {
            nid: AomdvNode(
                nid, self.kernel, self.radio, cfg.routing, self.metrics,
                log=log, validate=cfg.validate,
            )
            for nid in self.trace.node_ids()
        }
        self.radio.bind_receivers({nid: node.receive for nid, node in self.nodes.items()})
        if cfg.flows is not None:
            self.flows = list(cfg.flows)
            ids = set(self.nodes)
            for flow in self.flows:
                if flow.src not in ids or flow.dst not in ids:
                    raise ConfigError(
                        f"flows: endpoints {flow.src}->{flow.dst} not in the node set"
                    )
        else:
            self.flows = sample_flows(
                cfg.n_flows,
                self.trace.node_ids(),
                cfg.rate_pps,
                cfg.packet_size,
                cfg.traffic_start,
                cfg.stop_time,
                self.kernel.stream("traffic"),
            )
        for flow in self.flows:
            self._schedule_flow(flow)

    def _deliver(self, receiver: int, packet, sender: int) -> None:
        self.nodes[receiver].receive(packet, sender)

    def _schedule_flow(self, flow) -> None:
        kernel = self.kernel

        def tick(i: int) -> None:
            # emission times recomputed from the index: no drift accumulation
            record = self.metrics.new_packet(flow, kernel.now)
            if self.log is not None:
                self.log.emit(
                    kernel.now, flow.src, "data_src", str(record.packet_id),
                    f"dest={flow.dst}",
                )
            self.nodes[flow.src].originate_data(record)
            nxt = flow.start + (i + 1) / flow.rate
            if nxt < flow.stop:
                kernel.schedule(nxt, lambda: tick(i + 1))

        if flow.start < flow.stop:
            kernel.schedule(flow.start, lambda: tick(0))

    def run(self) -> RunRecord:
        self.kernel.run_until(self.cfg.horizon)
        return RunRecord(
            model=self.cfg.model,
            n_nodes=self.cfg.n_nodes,
            speed=self.cfg.speed,
            seed=self.cfg.seed,
            metrics=self.metrics.finalize(),
        )

    def packet_records(self) -> list[PacketRecord]:
        return self.metrics.records


def run_scenario(
    cfg: ScenarioConfig,
    trace: MobilityTrace | None = None,
    log: EventLog | None = None,
) -> RunRecord:
    return Simulation(cfg, trace=trace, log=log).run()
