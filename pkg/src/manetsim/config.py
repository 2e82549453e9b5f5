"""Scenario and sweep configuration, with INI round-tripping.

A ScenarioConfig fully determines one run: mobility model and its knobs,
radio parameters, routing constants, and the traffic workload. Validation
happens at construction and reports every bad field at once, each message
prefixed with the field name. A SweepSpec is the cross product of models,
node counts, and speeds, with a fixed number of seeded replicates per
point; its configs() iterator defines the canonical row order of every
sweep output (model, then nodes, then speed, then seed).
"""

from __future__ import annotations

import configparser
import io
from dataclasses import dataclass, field, replace

from .aomdv import AomdvConfig
from .mobility import DEFAULT_WALK_MATRIX, Area, WalkMatrix
from .radio import RadioConfig
from .traffic import Flow

MODELS = ("rwp", "rd", "prw")

MODEL_NAMES = {
    "rwp": "random waypoint",
    "rd": "random direction",
    "prw": "probabilistic random walk",
}


class ConfigError(ValueError):
    """One or more invalid configuration fields; message lists all of them."""


@dataclass(frozen=True)
class ScenarioConfig:
    model: str = "rwp"
    n_nodes: int = 50
    speed: float = 10.0
    seed: int = 1
    area_width: float = 1000.0
    area_height: float = 1000.0
    horizon: float = 1000.0
    pause: float = 0.0
    walk_step: float = 1.0
    walk_matrix: tuple[tuple[float, float, float], ...] = DEFAULT_WALK_MATRIX.rows
    radio: RadioConfig = field(default_factory=RadioConfig)
    routing: AomdvConfig = field(default_factory=AomdvConfig)
    n_flows: int = 10
    rate_pps: float = 4.0
    packet_size: int = 512
    traffic_start: float = 10.0
    traffic_stop: float | None = None
    flows: tuple[Flow, ...] | None = None  # explicit workload, overrides n_flows
    trace_path: str | None = None  # pre-generated mobility, overrides the model
    validate: bool = True

    def __post_init__(self) -> None:
        problems = []
        if self.model not in MODELS:
            problems.append(f"model: must be one of {'/'.join(MODELS)}, got {self.model!r}")
        if self.n_nodes < 1:
            problems.append(f"n_nodes: must be >= 1, got {self.n_nodes}")
        if self.speed <= 0:
            problems.append(f"speed: must be positive, got {self.speed!r}")
        if self.area_width <= 0 or self.area_height <= 0:
            problems.append(
                f"area: sides must be positive, got {self.area_width!r} x {self.area_height!r}"
            )
        if self.horizon <= 0:
            problems.append(f"horizon: must be positive, got {self.horizon!r}")
        if self.pause < 0:
            problems.append(f"pause: must be >= 0, got {self.pause!r}")
        if self.walk_step <= 0:
            problems.append(f"walk_step: must be positive, got {self.walk_step!r}")
        try:
            WalkMatrix(self.walk_matrix)
        except ValueError as exc:
            problems.append(f"walk_matrix: {exc}")
        if self.n_flows < 0:
            problems.append(f"n_flows: must be >= 0, got {self.n_flows}")
        elif self.flows is None and self.n_flows > self.n_nodes * (self.n_nodes - 1):
            problems.append(
                f"n_flows: {self.n_flows} distinct pairs requested but "
                f"{self.n_nodes} nodes allow only {self.n_nodes * (self.n_nodes - 1)}"
            )
        if self.rate_pps <= 0:
            problems.append(f"rate_pps: must be positive, got {self.rate_pps!r}")
        if self.packet_size < 1:
            problems.append(f"packet_size: must be >= 1, got {self.packet_size}")
        if self.traffic_start < 0:
            problems.append(f"traffic_start: must be >= 0, got {self.traffic_start!r}")
        wants_traffic = self.flows is not None or self.n_flows > 0
        stop = self.traffic_stop if self.traffic_stop is not None else self.horizon - 10.0
        if wants_traffic and self.flows is None and stop <= self.traffic_start:
            problems.append(
                f"traffic_stop: send window is empty "
                f"([{self.traffic_start!r}, {stop!r}))"
            )
        if problems:
            raise ConfigError("; ".join(problems))

    @property
    def stop_time(self) -> float:
        """Traffic cutoff: explicit value, or 10 s before the horizon."""
        if self.traffic_stop is not None:
            return self.traffic_stop
        return self.horizon - 10.0

    def area(self) -> Area:
        return Area(self.area_width, self.area_height)

    def walk(self) -> WalkMatrix:
        return WalkMatrix(self.walk_matrix)


@dataclass(frozen=True)
class SweepSpec:
    base: ScenarioConfig = field(default_factory=ScenarioConfig)
    models: tuple[str, ...] = MODELS
    node_counts: tuple[int, ...] = (10, 20, 30, 40, 50, 60, 70, 80, 90, 100)
    speeds: tuple[float, ...] = (10.0, 20.0, 30.0, 40.0)
    seeds_per_point: int = 10
    master_seed: int = 1

    def __post_init__(self) -> None:
        problems = []
        if not self.models:
            problems.append("models: list is empty")
        else:
            bad = [m for m in self.models if m not in MODELS]
            if bad:
                problems.append(f"models: unknown {bad}")
        if not self.node_counts:
            problems.append("node_counts: list is empty")
        elif any(n < 1 for n in self.node_counts):
            problems.append(f"node_counts: must all be >= 1, got {self.node_counts}")
        if not self.speeds:
            problems.append("speeds: list is empty")
        elif any(s <= 0 for s in self.speeds):
            problems.append(f"speeds: must all be positive, got {self.speeds}")
        if self.seeds_per_point < 1:
            problems.append(f"seeds_per_point: must be >= 1, got {self.seeds_per_point}")
        if problems:
            raise ConfigError("; ".join(problems))

    @property
    def n_runs(self) -> int:
        return (
            len(self.models)
            * len(self.node_counts)
            * len(self.speeds)
            * self.seeds_per_point
        )

    def configs(self):
        """Every run of the sweep, in the canonical output order."""
        for model in self.models:
            for nodes in self.node_counts:
                for speed in self.speeds:
                    for i in range(self.seeds_per_point):
                        yield replace(
                            self.base,
                            model=model,
                            n_nodes=nodes,
                            speed=speed,
                            seed=self.master_seed + i,
                        )


# -- INI round trip ------------------------------------------------------------

_SCENARIO_KEYS = {
    "model", "nodes", "speed", "seed", "area_width", "area_height",
    "horizon", "pause", "walk_step", "walk_matrix",
}
_RADIO_KEYS = {"range_m", "bandwidth_bps", "queue_capacity", "jitter_max", "loss_prob"}
_ROUTING_KEYS = {
    "k_replies", "max_paths", "route_lifetime", "discovery_timeout",
    "rreq_retries", "seen_window", "ttl", "intermediate_rrep", "control_size_bytes",
}
_TRAFFIC_KEYS = {"flows", "rate_pps", "packet_size", "start", "stop"}


def _matrix_to_str(rows: tuple[tuple[float, float, float], ...]) -> str:
    return "; ".join(",".join(repr(v) for v in row) for row in rows)


def _matrix_from_str(text: str) -> tuple[tuple[float, ...], ...]:
    try:
        rows = tuple(
            tuple(float(v) for v in chunk.split(",")) for chunk in text.split(";")
        )
    except ValueError as exc:
        raise ConfigError(f"walk_matrix: {exc}") from None
    return rows


def to_ini(cfg: ScenarioConfig) -> str:
    """Serialize every scalar field; flows/trace injections are runtime-only."""
    parser = configparser.ConfigParser()
    parser["scenario"] = {
        "model": cfg.model,
        "nodes": str(cfg.n_nodes),
        "speed": repr(cfg.speed),
        "seed": str(cfg.seed),
        "area_width": repr(cfg.area_width),
        "area_height": repr(cfg.area_height),
        "horizon": repr(cfg.horizon),
        "pause": repr(cfg.pause),
        "walk_step": repr(cfg.walk_step),
        "walk_matrix": _matrix_to_str(cfg.walk_matrix),
    }
    parser["radio"] = {
        "range_m": repr(cfg.radio.range_m),
        "bandwidth_bps": repr(cfg.radio.bandwidth_bps),
        "queue_capacity": str(cfg.radio.queue_capacity),
        "jitter_max": repr(cfg.radio.jitter_max),
        "loss_prob": repr(cfg.radio.loss_prob),
    }
    parser["routing"] = {
        "k_replies": str(cfg.routing.k_replies),
        "max_paths": str(cfg.routing.max_paths),
        "route_lifetime": repr(cfg.routing.route_lifetime),
        "discovery_timeout": repr(cfg.routing.discovery_timeout),
        "rreq_retries": str(cfg.routing.rreq_retries),
        "seen_window": repr(cfg.routing.seen_window),
        "ttl": str(cfg.routing.ttl),
        "intermediate_rrep": str(cfg.routing.intermediate_rrep).lower(),
        "control_size_bytes": str(cfg.routing.control_size_bytes),
    }
    traffic = {
        "flows": str(cfg.n_flows),
        "rate_pps": repr(cfg.rate_pps),
        "packet_size": str(cfg.packet_size),
        "start": repr(cfg.traffic_start),
    }
    if cfg.traffic_stop is not None:
        traffic["stop"] = repr(cfg.traffic_stop)
    parser["traffic"] = traffic
    out = io.StringIO()
    parser.write(out)
    return out.getvalue()


def from_ini(text: str, base: ScenarioConfig | None = None) -> ScenarioConfig:
    """Parse INI text into a ScenarioConfig, overlaying base (or defaults).

    Unknown sections or keys are errors: a typoed knob must not silently
    fall back to its default.
    """
    parser = configparser.ConfigParser()
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"INI syntax: {exc}") from None
    known = {
        "scenario": _SCENARIO_KEYS,
        "radio": _RADIO_KEYS,
        "routing": _ROUTING_KEYS,
        "traffic": _TRAFFIC_KEYS,
    }
    problems = []
    for section in parser.sections():
        if section not in known:
            problems.append(f"unknown section [{section}]")
            continue
        for key in parser[section]:
            if key not in known[section]:
                problems.append(f"unknown key {key!r} in [{section}]")
    if problems:
        raise ConfigError("; ".join(problems))

    cfg = base if base is not None else ScenarioConfig()
    updates = {}
    radio_updates = {}
    routing_updates = {}

    def take(section, key, convert, store, name):
        if parser.has_option(section, key):
            raw = parser.get(section, key)
            try:
                store[name] = convert(raw)
            except ValueError as exc:
                problems.append(f"{key}: {exc}")

    def as_bool(raw: str) -> bool:
        low = raw.strip().lower()
        if low in ("1", "true", "yes", "on"):
            return True
        if low in ("0", "false", "no", "off"):
            return False
        raise ValueError(f"not a boolean: {raw!r}")

    take("scenario", "model", str, updates, "model")
    take("scenario", "nodes", int, updates, "n_nodes")
    take("scenario", "speed", float, updates, "speed")
    take("scenario", "seed", int, updates, "seed")
    take("scenario", "area_width", float, updates, "area_width")
    take("scenario", "area_height", float, updates, "area_height")
    take("scenario", "horizon", float, updates, "horizon")
    take("scenario", "pause", float, updates, "pause")
    take("scenario", "walk_step", float, updates, "walk_step")
    take("scenario", "walk_matrix", _matrix_from_str, updates, "walk_matrix")
    take("radio", "range_m", float, radio_updates, "range_m")
    take("radio", "bandwidth_bps", float, radio_updates, "bandwidth_bps")
    take("radio", "queue_capacity", int, radio_updates, "queue_capacity")
    take("radio", "jitter_max", float, radio_updates, "jitter_max")
    take("radio", "loss_prob", float, radio_updates, "loss_prob")
    take("routing", "k_replies", int, routing_updates, "k_replies")
    take("routing", "max_paths", int, routing_updates, "max_paths")
    take("routing", "route_lifetime", float, routing_updates, "route_lifetime")
    take("routing", "discovery_timeout", float, routing_updates, "discovery_timeout")
    take("routing", "rreq_retries", int, routing_updates, "rreq_retries")
    take("routing", "seen_window", float, routing_updates, "seen_window")
    take("routing", "ttl", int, routing_updates, "ttl")
    take("routing", "intermediate_rrep", as_bool, routing_updates, "intermediate_rrep")
    take("routing", "control_size_bytes", int, routing_updates, "control_size_bytes")
    take("traffic", "flows", int, updates, "n_flows")
    take("traffic", "rate_pps", float, updates, "rate_pps")
    take("traffic", "packet_size", int, updates, "packet_size")
    take("traffic", "start", float, updates, "traffic_start")
    take("traffic", "stop", float, updates, "traffic_stop")
    if problems:
        raise ConfigError("; ".join(problems))

    try:
        if radio_updates:
            updates["radio"] = replace(cfg.radio, **radio_updates)
        if routing_updates:
            updates["routing"] = replace(cfg.routing, **routing_updates)
        return replace(cfg, **updates)
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc)) from None


def load_config(path: str, base: ScenarioConfig | None = None) -> ScenarioConfig:
    with open(path, encoding="utf-8") as fh:
        return from_ini(fh.read(), base)
