"""Deterministic discrete-event simulator for mobile ad hoc networks.

Multipath on-demand routing over a unit-disk radio, three mobility models
(random waypoint, random direction, probabilistic random walk), seeded
constant-rate traffic, and a sweep driver that emits schema-stable CSV.
"""

from .aomdv import (
    AomdvConfig,
    AomdvNode,
    PathEntry,
    RerrMessage,
    RouteEntry,
    RouteTable,
    RrepMessage,
    RreqMessage,
    route_update,
)
from .config import (
    MODELS,
    ConfigError,
    ScenarioConfig,
    SweepSpec,
    from_ini,
    load_config,
    to_ini,
)
from .eventlog import EventLog, parse_log
from .kernel import (
    CompletionReport,
    EventHandle,
    Kernel,
    RngStream,
    SchedulingError,
    mix_seed,
)
from .mobility import (
    DEFAULT_WALK_MATRIX,
    Area,
    MobilityTrace,
    Track,
    TraceFormatError,
    WalkMatrix,
    generate_prob_random_walk,
    generate_random_direction,
    generate_rwp,
    parse_trace,
    walk_states,
    write_trace,
)
from .radio import LinkVerdict, Radio, RadioConfig, link_verdict, neighbors, sample_loss
from .scenario import CSV_HEADER, RunRecord, Simulation, build_trace, run_scenario
from .sweep import (
    SUMMARY_HEADER,
    SweepError,
    figure_tables,
    records_to_csv,
    rows_from_csv,
    rows_from_records,
    run_sweep,
    summary_csv,
)
from .traffic import (
    DROP_LOSS,
    DROP_NO_ROUTE,
    DROP_QUEUE,
    Flow,
    LedgerError,
    MetricsCollector,
    PacketRecord,
    RunMetrics,
    sample_flows,
    write_packet_ledger,
)

__version__ = "0.1.0"

__all__ = [
    "AomdvConfig",
    "AomdvNode",
    "Area",
    "CompletionReport",
    "ConfigError",
    "CSV_HEADER",
    "DEFAULT_WALK_MATRIX",
    "DROP_LOSS",
    "DROP_NO_ROUTE",
    "DROP_QUEUE",
    "EventHandle",
    "EventLog",
    "Flow",
    "Kernel",
    "LedgerError",
    "LinkVerdict",
    "MetricsCollector",
    "MobilityTrace",
    "MODELS",
    "PacketRecord",
    "PathEntry",
    "Radio",
    "RadioConfig",
    "RerrMessage",
    "RngStream",
    "RouteEntry",
    "RouteTable",
    "RrepMessage",
    "RreqMessage",
    "RunMetrics",
    "RunRecord",
    "ScenarioConfig",
    "SchedulingError",
    "Simulation",
    "SUMMARY_HEADER",
    "SweepError",
    "SweepSpec",
    "Track",
    "TraceFormatError",
    "WalkMatrix",
    "build_trace",
    "figure_tables",
    "from_ini",
    "generate_prob_random_walk",
    "generate_random_direction",
    "generate_rwp",
    "link_verdict",
    "load_config",
    "mix_seed",
    "neighbors",
    "parse_log",
    "parse_trace",
    "records_to_csv",
    "route_update",
    "rows_from_csv",
    "rows_from_records",
    "run_scenario",
    "run_sweep",
    "sample_flows",
    "sample_loss",
    "summary_csv",
    "to_ini",
    "walk_states",
    "write_packet_ledger",
    "write_trace",
]
