"""Constant-bit-rate traffic and per-run metrics.

Each flow emits fixed-size packets at a fixed rate on a closed interval
[start, stop): tick i fires at start + i/rate while that is < stop. Every
emitted packet gets a PacketRecord that follows it through the network;
finalize() cross-checks the event-driven counters against a scan of the
records, so the accounting identity

    sent == delivered + dropped(queue) + dropped(no_route) + dropped(loss)
                      + in_flight_at_horizon

is verified rather than assumed.
"""

from __future__ import annotations

from dataclasses import dataclass

from .kernel import RngStream

DROP_QUEUE = "queue"
DROP_NO_ROUTE = "no_route"
DROP_LOSS = "loss"
_DROP_CAUSES = (DROP_QUEUE, DROP_NO_ROUTE, DROP_LOSS)


@dataclass(frozen=True)
class Flow:
    src: int
    dst: int
    rate: float
    packet_size: int
    start: float
    stop: float

    def __post_init__(self) -> None:
        if self.src == self.dst:
            raise ValueError(f"flow source and destination must differ, got {self.src}")
        if self.rate <= 0:
            raise ValueError(f"flow rate must be positive, got {self.rate!r}")
        if self.packet_size < 1:
            raise ValueError(f"packet size must be >= 1 byte, got {self.packet_size!r}")
        if self.start < 0 or self.stop <= self.start:
            raise ValueError(
                f"flow window must satisfy 0 <= start < stop, got [{self.start!r}, {self.stop!r})"
            )

    def tick_times(self) -> list[float]:
        """Emission instants: start + i/rate for i = 0, 1, ... while < stop."""
        out = []
        i = 0
        while True:
            t = self.start + i / self.rate
            if t >= self.stop:
                return out
            out.append(t)
            i += 1


def sample_flows(
    n_flows: int,
    node_ids: list[int],
    rate: float,
    packet_size: int,
    start: float,
    stop: float,
    rng: RngStream,
) -> list[Flow]:
    """Draw n_flows distinct ordered (src, dst) pairs uniformly, src != dst."""
    n = len(node_ids)
    total = n * (n - 1)
    if n_flows < 0:
        raise ValueError(f"n_flows must be >= 0, got {n_flows}")
    if n_flows > total:
        raise ValueError(
            f"cannot draw {n_flows} distinct pairs from {n} nodes (only {total} exist)"
        )
    flows = []
    for index in rng.sample(range(total), n_flows):
        src_i, rest = divmod(index, n - 1)
        dst_i = rest if rest < src_i else rest + 1
        flows.append(
            Flow(node_ids[src_i], node_ids[dst_i], rate, packet_size, start, stop)
        )
    return flows


class PacketRecord:
    """One emitted data packet, mutated in place as it moves.

    hop_trace begins with the source and, for delivered packets, ends with
    the destination. origin_seq is the destination sequence number the source
    held when it first forwarded the packet.
    """

    __slots__ = (
        "packet_id",
        "flow",
        "src",
        "dst",
        "size_bytes",
        "sent_at",
        "delivered_at",
        "drop_cause",
        "hop_trace",
        "origin_seq",
    )

    def __init__(self, packet_id: int, flow: Flow, sent_at: float):
        self.packet_id = packet_id
        self.flow = flow
        self.src = flow.src
        self.dst = flow.dst
        self.size_bytes = flow.packet_size
        self.sent_at = sent_at
        self.delivered_at: float | None = None
        self.drop_cause: str | None = None
        self.hop_trace: list[int] = [flow.src]
        self.origin_seq: int | None = None

    @property
    def delay(self) -> float | None:
        if self.delivered_at is None:
            return None
        return self.delivered_at - self.sent_at

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        state = (
            f"delivered@{self.delivered_at}"
            if self.delivered_at is not None
            else (f"dropped:{self.drop_cause}" if self.drop_cause else "in flight")
        )
        return f"PacketRecord({self.packet_id}, {self.src}->{self.dst}, {state})"


@dataclass(frozen=True)
class RunMetrics:
    sent: int
    delivered: int
    pdr: float | None
    avg_delay: float | None
    drops_queue: int
    drops_no_route: int
    drops_loss: int
    control_packets: int
    in_flight: int
    loop_violations: int
    disjoint_violations: int


class LedgerError(AssertionError):
    """The event counters and the packet records disagree."""


class MetricsCollector:
    """Accumulates packet outcomes and routing-layer violation counts."""

    def __init__(self) -> None:
        self.records: list[PacketRecord] = []
        self.sent = 0
        self.delivered = 0
        self.drops = {cause: 0 for cause in _DROP_CAUSES}
        self.control_packets = 0
        self.delay_sum = 0.0
        self.loop_violations = 0
        self.disjoint_violations = 0
        self._next_id = 0

    def new_packet(self, flow: Flow, now: float) -> PacketRecord:
        record = PacketRecord(self._next_id, flow, now)
        self._next_id += 1
        self.records.append(record)
        self.sent += 1
        return record

    def on_delivered(self, record: PacketRecord, now: float) -> None:
        if record.delivered_at is not None or record.drop_cause is not None:
            raise LedgerError(f"packet {record.packet_id} finished twice")
        record.delivered_at = now
        self.delivered += 1
        self.delay_sum += now - record.sent_at

    def on_dropped(self, record: PacketRecord, cause: str) -> None:
        if record.delivered_at is not None or record.drop_cause is not None:
            raise LedgerError(f"packet {record.packet_id} finished twice")
        if cause not in self.drops:
            raise ValueError(f"unknown drop cause {cause!r}")
        record.drop_cause = cause
        self.drops[cause] += 1

    def on_control_tx(self) -> None:
        self.control_packets += 1

    def finalize(self) -> RunMetrics:
        """Compute the run's metrics and verify the accounting identity."""
        by_record = {cause: 0 for cause in _DROP_CAUSES}
        delivered = 0
        in_flight = 0
        for record in self.records:
            if record.delivered_at is not None:
                delivered += 1
            elif record.drop_cause is not None:
                by_record[record.drop_cause] += 1
            else:
                in_flight += 1
        if delivered != self.delivered or by_record != self.drops:
            raise LedgerError(
                f"counter/record mismatch: delivered {self.delivered} vs {delivered}, "
                f"drops {self.drops} vs {by_record}"
            )
        if self.sent != delivered + sum(by_record.values()) + in_flight:
            raise LedgerError(
                f"ledger does not close: sent {self.sent} != delivered {delivered} "
                f"+ drops {sum(by_record.values())} + in flight {in_flight}"
            )
        return RunMetrics(
            sent=self.sent,
            delivered=self.delivered,
            pdr=(self.delivered / self.sent) if self.sent else None,
            avg_delay=(self.delay_sum / self.delivered) if self.delivered else None,
            drops_queue=self.drops[DROP_QUEUE],
            drops_no_route=self.drops[DROP_NO_ROUTE],
            drops_loss=self.drops[DROP_LOSS],
            control_packets=self.control_packets,
            in_flight=in_flight,
            loop_violations=self.loop_violations,
            disjoint_violations=self.disjoint_violations,
        )


def write_packet_ledger(records: list[PacketRecord]) -> str:
    """One line per packet: id, endpoints, timing, outcome, hops."""
    lines = ["# packet_id src dst sent_at outcome detail hops"]
    for r in records:
        if r.delivered_at is not None:
            outcome, detail = "delivered", f"{r.delivered_at:.6f}"
        elif r.drop_cause is not None:
            outcome, detail = "dropped", r.drop_cause
        else:
            outcome, detail = "in_flight", "-"
        hops = ">".join(str(n) for n in r.hop_trace)
        lines.append(
            f"{r.packet_id} {r.src} {r.dst} {r.sent_at:.6f} {outcome} {detail} {hops}"
        )
    return "\n".join(lines) + "\n"
