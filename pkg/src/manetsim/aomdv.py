"""AOMDV: on-demand multipath distance-vector routing.

Each node keeps, per destination, one route entry holding a destination
sequence number, an advertised hop count, and up to max_paths link-disjoint
paths. Link-disjointness is enforced by requiring pairwise-distinct next
hops AND pairwise-distinct first hops, where a path's first hop is the node
adjacent to the far endpoint (stamped into control packets by the
originator's immediate neighbor and immutable afterwards).

Freshness and loop freedom come from the route update rule: a fresher
sequence number replaces the whole path set; at an equal sequence number a
new path is accepted only if its hop count does not exceed the entry's
advertised hop count and it is disjoint from every stored path. The
advertised hop count is pinned by the first path accepted for a sequence
number and never increases while that number holds.

Loop freedom additionally requires that a node always advertises its
pinned advertised hop count, never the hop count of an individual (possibly
shorter) alternate path: a stored path of hop count h was provided by a
neighbor advertising h - 1, so the provider's advertised count is strictly
below this node's pinned value, and advertised hop counts decrease strictly
along any same-sequence chain of routes, which rules out cycles. Replies
forwarded toward a discovery's origin therefore carry the forwarder's
advertised hop count, and a reply whose sequence number is stale against
the forwarder's entry is dropped rather than propagated.

Discovery floods a RREQ; every node forwards only the first copy and
examines duplicates solely for alternate reverse paths, while the
destination answers up to k copies that arrived via unique
(neighbor, first hop) pairs, all k replies sharing one sequence number so
they install as alternates. Link breaks are detected by unicast
transmission failures only (no hello beacons): the detector prunes every
path through the dead neighbor, retries the in-flight packet on a surviving
alternate if any, and broadcasts a RERR for destinations that lost their
last path; receivers cascade only if they themselves routed through the
sender. Expired paths are swept by a timer; entries emptied by expiry are
deleted silently, so later traffic simply triggers rediscovery.

The data plane keeps one extra hygiene rule: a packet is never forwarded to
a node already present in its hop trace, so a table that flips while the
packet is in flight cannot re-circulate it; when every live path leads to a
visited node the packet is treated as routeless.
"""

from __future__ import annotations

from dataclasses import dataclass

from .eventlog import EventLog
from .kernel import Kernel
from .radio import Radio
from .traffic import (
    DROP_NO_ROUTE,
    DROP_QUEUE,
    DROP_LOSS,
    MetricsCollector,
    PacketRecord,
)


@dataclass(frozen=True)
class AomdvConfig:
    k_replies: int = 3
    max_paths: int = 3
    route_lifetime: float = 10.0
    discovery_timeout: float = 2.8
    rreq_retries: int = 3
    seen_window: float = 30.0
    ttl: int = 30
    intermediate_rrep: bool = True
    control_size_bytes: int = 64
    sweep_period: float = 1.0

    def __post_init__(self) -> None:
        problems = []
        if self.k_replies < 1:
            problems.append(f"k_replies must be >= 1, got {self.k_replies}")
        if self.max_paths < 1:
            problems.append(f"max_paths must be >= 1, got {self.max_paths}")
        if self.route_lifetime <= 0:
            problems.append(f"route_lifetime must be positive, got {self.route_lifetime!r}")
        if self.discovery_timeout <= 0:
            problems.append(
                f"discovery_timeout must be positive, got {self.discovery_timeout!r}"
            )
        if self.rreq_retries < 0:
            problems.append(f"rreq_retries must be >= 0, got {self.rreq_retries}")
        if self.seen_window <= 0:
            problems.append(f"seen_window must be positive, got {self.seen_window!r}")
        if self.ttl < 1:
            problems.append(f"ttl must be >= 1, got {self.ttl}")
        if self.control_size_bytes < 1:
            problems.append(
                f"control_size_bytes must be >= 1, got {self.control_size_bytes}"
            )
        if self.sweep_period <= 0:
            problems.append(f"sweep_period must be positive, got {self.sweep_period!r}")
        if problems:
            raise ValueError("; ".join(problems))


# -- control messages (immutable; forwarding builds a new message) -----------


@dataclass(frozen=True, slots=True)
class RreqMessage:
    rreq_id: int
    source: int
    dest: int
    source_seq: int
    dest_seq_known: int | None
    hop_count: int
    first_hop: int | None  # None until the source's immediate neighbor stamps it
    ttl: int
    size_bytes: int


@dataclass(frozen=True, slots=True)
class RrepMessage:
    source: int  # the node the reply travels toward (the discovery's origin)
    dest: int  # the destination the reply advertises
    dest_seq: int
    hop_count: int
    first_hop: int  # node adjacent to dest on the advertised path
    lifetime: float
    size_bytes: int


@dataclass(frozen=True, slots=True)
class RerrMessage:
    unreachable: tuple[tuple[int, int], ...]  # (dest, seq) pairs
    size_bytes: int

    def __post_init__(self) -> None:
        if not self.unreachable:
            raise ValueError("RERR must name at least one destination")


# -- route table --------------------------------------------------------------


class PathEntry:
    __slots__ = ("next_hop", "first_hop", "hop_count", "expires_at")

    def __init__(self, next_hop: int, first_hop: int, hop_count: int, expires_at: float):
        self.next_hop = next_hop
        self.first_hop = first_hop
        self.hop_count = hop_count
        self.expires_at = expires_at

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return (
            f"PathEntry(next={self.next_hop}, first={self.first_hop}, "
            f"hops={self.hop_count}, expires={self.expires_at})"
        )


class RouteEntry:
    __slots__ = ("dest", "seq_num", "advertised_hop_count", "paths", "hold_until")

    def __init__(self, dest: int, seq_num: int, advertised_hop_count: int):
        self.dest = dest
        self.seq_num = seq_num
        self.advertised_hop_count = advertised_hop_count
        self.paths: list[PathEntry] = []
        # retention deadline for an invalidated (empty) entry; None = evict freely
        self.hold_until: float | None = None


def route_update(
    entry: RouteEntry,
    seq: int,
    hop_count: int,
    next_hop: int,
    first_hop: int,
    expires_at: float,
    max_paths: int,
) -> bool:
    """Apply one advertisement to a route entry; True when a path was stored.

    Stale sequence numbers are rejected. A fresher one (or any acceptable
    advertisement arriving at an entry with no paths left) replaces the path
    set and pins advertised_hop_count to the offered hop count. At an equal
    sequence number the path is added only if hop_count does not exceed the
    advertised hop count, both next_hop and first_hop differ from every
    stored path, and there is room. Equality is allowed because a candidate
    of hop_count h was advertised by a neighbor whose own advertised count
    is h - 1: acceptance of h <= advertised still forces the provider's
    advertised count strictly below this node's, which is the ordering loop
    freedom rests on, while equal-length link-disjoint alternates (the
    common case on symmetric topologies) remain storable.
    """
    if seq < entry.seq_num:
        return False
    if seq > entry.seq_num or not entry.paths:
        entry.seq_num = seq
        entry.advertised_hop_count = hop_count
        entry.paths = [PathEntry(next_hop, first_hop, hop_count, expires_at)]
        entry.hold_until = None
        return True
    if hop_count > entry.advertised_hop_count:
        return False
    if len(entry.paths) >= max_paths:
        return False
    for p in entry.paths:
        if p.next_hop == next_hop or p.first_hop == first_hop:
            return False
    entry.paths.append(PathEntry(next_hop, first_hop, hop_count, expires_at))
    return True


class RouteTable:
    __slots__ = ("entries",)

    def __init__(self) -> None:
        self.entries: dict[int, RouteEntry] = {}

    def entry(self, dest: int) -> RouteEntry | None:
        return self.entries.get(dest)

    def live_path(self, dest: int, now: float) -> PathEntry | None:
        """The primary unexpired path: first live one in insertion order."""
        entry = self.entries.get(dest)
        if entry is None:
            return None
        for p in entry.paths:
            if p.expires_at > now:
                return p
        return None

    def prune_neighbor(self, neighbor: int, now: float, hold: float) -> list[tuple[int, int]]:
        """Drop every path through neighbor; invalidate entries left empty.

        Returns (dest, bumped seq) for each entry that lost its last path.
        """
        lost = []
        for entry in self.entries.values():
            if not entry.paths:
                continue
            kept = [p for p in entry.paths if p.next_hop != neighbor]
            if len(kept) == len(entry.paths):
                continue
            entry.paths = kept
            if not kept:
                entry.seq_num += 1
                entry.hold_until = now + hold
                lost.append((entry.dest, entry.seq_num))
        return lost

    def sweep(self, now: float) -> None:
        """Prune expired paths; evict empty entries whose hold has lapsed."""
        dead = []
        for dest, entry in self.entries.items():
            if entry.paths:
                live = [p for p in entry.paths if p.expires_at > now]
                if len(live) != len(entry.paths):
                    entry.paths = live
            if not entry.paths:
                if entry.hold_until is not None and now < entry.hold_until:
                    continue
                dead.append(dest)
        for dest in dead:
            del self.entries[dest]


# -- per-node protocol state machine ------------------------------------------


class _SeenEntry:
    __slots__ = ("expires_at", "pairs", "replied", "reply_seq", "role_done")

    def __init__(self, expires_at: float):
        self.expires_at = expires_at
        self.pairs: set[tuple[int, int]] = set()
        self.replied = 0
        self.reply_seq: int | None = None
        self.role_done = False


class _Discovery:
    __slots__ = ("attempts", "timer", "buffer")

    def __init__(self, attempts, timer, buffer):
        self.attempts = attempts
        self.timer = timer
        self.buffer: list[PacketRecord] = buffer


class AomdvNode:
    """One node's routing agent; all packet handling enters via receive()."""

    __slots__ = (
        "node_id",
        "kernel",
        "radio",
        "cfg",
        "metrics",
        "log",
        "validate",
        "table",
        "own_seq",
        "next_rreq_id",
        "seen",
        "discoveries",
    )

    def __init__(
        self,
        node_id: int,
        kernel: Kernel,
        radio: Radio,
        cfg: AomdvConfig,
        metrics: MetricsCollector,
        log: EventLog | None = None,
        validate: bool = True,
    ):
        self.node_id = node_id
        self.kernel = kernel
        self.radio = radio
        self.cfg = cfg
        self.metrics = metrics
        self.log = log
        self.validate = validate
        self.table = RouteTable()
        self.own_seq = 0
        self.next_rreq_id = 0
        self.seen: dict[tuple[int, int], _SeenEntry] = {}
        self.discoveries: dict[int, _Discovery] = {}
        kernel.schedule(kernel.now + cfg.sweep_period, self._sweep)

    # -- data plane -----------------------------------------------------------

    def originate_data(self, record: PacketRecord) -> None:
        """Entry point for locally generated packets (hop_trace = [self])."""
        if self._try_forward(record):
            return
        disc = self.discoveries.get(record.dst)
        if disc is not None:
            disc.buffer.append(record)
        else:
            self._start_discovery(record.dst, [record])

    def _try_forward(self, record: PacketRecord) -> bool:
        """Forward along the first usable path; False when none exists.

        Usable means unexpired and not leading straight back to a node the
        packet has already visited.
        """
        now = self.kernel.now
        entry = self.table.entry(record.dst)
        if entry is None:
            return False
        visited = record.hop_trace
        path = None
        for p in entry.paths:
            if p.expires_at > now and p.next_hop not in visited:
                path = p
                break
        if path is None:
            return False
        if record.origin_seq is None:
            record.origin_seq = entry.seq_num
        path.expires_at = now + self.cfg.route_lifetime  # activity refresh
        ok = self.radio.unicast(
            self.node_id,
            path.next_hop,
            record,
            on_fail=self._on_tx_fail,
            on_lost=self._on_data_lost,
        )
        if ok:
            if self.log is not None:
                self.log.emit(
                    now,
                    self.node_id,
                    "data_fwd",
                    str(record.packet_id),
                    f"to={path.next_hop} dest={record.dst} seq={entry.seq_num} "
                    f"adv={entry.advertised_hop_count} hops={path.hop_count}",
                )
        else:
            self.metrics.on_dropped(record, DROP_QUEUE)
            if self.log is not None:
                self.log.emit(
                    now, self.node_id, "data_drop", str(record.packet_id), "cause=queue"
                )
        return True

    def _on_data(self, record: PacketRecord, prev_hop: int) -> None:
        nid = self.node_id
        if self.validate and nid in record.hop_trace:
            self.metrics.loop_violations += 1
        record.hop_trace.append(nid)
        if nid == record.dst:
            self.metrics.on_delivered(record, self.kernel.now)
            if self.log is not None:
                self.log.emit(
                    self.kernel.now, nid, "data_recv", str(record.packet_id),
                    f"from={prev_hop} delay={record.delay:.6f}",
                )
            return
        if self._try_forward(record):
            return
        # no usable route at a relay: drop, invalidate, warn upstream
        now = self.kernel.now
        self.metrics.on_dropped(record, DROP_NO_ROUTE)
        if self.log is not None:
            self.log.emit(now, nid, "data_drop", str(record.packet_id), "cause=no_route")
        entry = self.table.entry(record.dst)
        if entry is not None:
            entry.paths = []
            entry.seq_num += 1
            entry.hold_until = now + self.cfg.route_lifetime
            unreachable = ((record.dst, entry.seq_num),)
        else:
            unreachable = ((record.dst, record.origin_seq or 0),)
        self._send_rerr(unreachable)

    def _on_data_lost(self, neighbor: int, record: PacketRecord) -> None:
        self.metrics.on_dropped(record, DROP_LOSS)
        if self.log is not None:
            self.log.emit(
                self.kernel.now, self.node_id, "data_drop", str(record.packet_id),
                "cause=loss",
            )

    # -- discovery ------------------------------------------------------------

    def _start_discovery(self, dest: int, buffered: list[PacketRecord]) -> None:
        timer = self.kernel.schedule_in(
            self.cfg.discovery_timeout, lambda: self._discovery_timeout(dest)
        )
        self.discoveries[dest] = _Discovery(1, timer, buffered)
        self._flood_rreq(dest)

    def _flood_rreq(self, dest: int) -> None:
        self.own_seq += 1
        self.next_rreq_id += 1
        entry = self.table.entry(dest)
        rreq = RreqMessage(
            rreq_id=self.next_rreq_id,
            source=self.node_id,
            dest=dest,
            source_seq=self.own_seq,
            dest_seq_known=entry.seq_num if entry is not None else None,
            hop_count=0,
            first_hop=None,
            ttl=self.cfg.ttl,
            size_bytes=self.cfg.control_size_bytes,
        )
        sent = self.radio.broadcast(self.node_id, rreq)
        if sent:
            self.metrics.on_control_tx()
        if self.log is not None:
            self.log.emit(
                self.kernel.now, self.node_id, "rreq_tx",
                f"{self.node_id}:{rreq.rreq_id}", f"dest={dest} seq={rreq.source_seq}",
            )

    def _discovery_timeout(self, dest: int) -> None:
        disc = self.discoveries.get(dest)
        if disc is None:  # pragma: no cover - timer should have been cancelled
            return
        if disc.attempts > self.cfg.rreq_retries:
            del self.discoveries[dest]
            for record in disc.buffer:
                self.metrics.on_dropped(record, DROP_NO_ROUTE)
            if self.log is not None:
                self.log.emit(
                    self.kernel.now, self.node_id, "discovery_fail", "-",
                    f"dest={dest} dropped={len(disc.buffer)}",
                )
            return
        disc.attempts += 1
        disc.timer = self.kernel.schedule_in(
            self.cfg.discovery_timeout, lambda: self._discovery_timeout(dest)
        )
        self._flood_rreq(dest)

    # -- receive dispatch -------------------------------------------------------

    def receive(self, packet, prev_hop: int) -> None:
        kind = type(packet)
        if kind is PacketRecord:
            self._on_data(packet, prev_hop)
        elif kind is RreqMessage:
            self._on_rreq(packet, prev_hop)
        elif kind is RrepMessage:
            self._on_rrep(packet, prev_hop)
        elif kind is RerrMessage:
            self._on_rerr(packet, prev_hop)
        else:  # pragma: no cover - wiring error
            raise TypeError(f"unknown packet type {kind!r}")

    # -- RREQ -------------------------------------------------------------------

    def _on_rreq(self, r: RreqMessage, prev_hop: int) -> None:
        nid = self.node_id
        if r.source == nid:  # own flood came back
            return
        now = self.kernel.now
        first_hop = r.first_hop if r.first_hop is not None else nid
        key = (r.source, r.rreq_id)
        seen = self.seen.get(key)
        if seen is None:
            seen = _SeenEntry(now + self.cfg.seen_window)
            self.seen[key] = seen
        pair = (prev_hop, first_hop)
        if pair in seen.pairs:
            return  # same copy again: nothing new, never re-forwarded
        seen.pairs.add(pair)
        # reverse path toward the flood's origin
        self._table_update(
            dest=r.source,
            seq=r.source_seq,
            hop_count=r.hop_count + 1,
            next_hop=prev_hop,
            first_hop=first_hop,
            lifetime=self.cfg.route_lifetime,
        )
        if r.dest == nid:
            if seen.replied < self.cfg.k_replies:
                if seen.reply_seq is None:
                    # one fresh sequence number per discovery, shared by all
                    # k replies so they install as alternates, not upgrades
                    self.own_seq = max(self.own_seq + 1, r.dest_seq_known or 0)
                    seen.reply_seq = self.own_seq
                seen.replied += 1
                reply = RrepMessage(
                    source=r.source,
                    dest=nid,
                    dest_seq=seen.reply_seq,
                    hop_count=0,
                    first_hop=prev_hop,
                    lifetime=self.cfg.route_lifetime,
                    size_bytes=self.cfg.control_size_bytes,
                )
                self._send_control_unicast(prev_hop, reply, "rrep_tx")
            return
        if seen.role_done:
            return  # duplicates feed alternate reverse paths only
        seen.role_done = True
        if self.cfg.intermediate_rrep:
            entry = self.table.entry(r.dest)
            if entry is not None and (
                r.dest_seq_known is None or entry.seq_num >= r.dest_seq_known
            ):
                path = None
                for p in entry.paths:
                    if p.expires_at > now:
                        path = p
                        break
                if path is not None:
                    reply = RrepMessage(
                        source=r.source,
                        dest=r.dest,
                        # advertise the pinned hop count, not this path's
                        dest_seq=entry.seq_num,
                        hop_count=entry.advertised_hop_count,
                        first_hop=path.first_hop,
                        lifetime=path.expires_at - now,
                        size_bytes=self.cfg.control_size_bytes,
                    )
                    self._send_control_unicast(prev_hop, reply, "rrep_tx")
                    return
        if r.ttl <= 1:
            return  # hop budget exhausted
        forward = RreqMessage(
            rreq_id=r.rreq_id,
            source=r.source,
            dest=r.dest,
            source_seq=r.source_seq,
            dest_seq_known=r.dest_seq_known,
            hop_count=r.hop_count + 1,
            first_hop=first_hop,
            ttl=r.ttl - 1,
            size_bytes=r.size_bytes,
        )
        sent = self.radio.broadcast(nid, forward)
        if sent:
            self.metrics.on_control_tx()

    # -- RREP -------------------------------------------------------------------

    def _on_rrep(self, p: RrepMessage, prev_hop: int) -> None:
        nid = self.node_id
        now = self.kernel.now
        self._table_update(
            dest=p.dest,
            seq=p.dest_seq,
            hop_count=p.hop_count + 1,
            next_hop=prev_hop,
            first_hop=p.first_hop,
            lifetime=p.lifetime,
        )
        if p.source == nid:
            disc = self.discoveries.pop(p.dest, None)
            if disc is not None:
                self.kernel.cancel(disc.timer)
                for record in disc.buffer:
                    if not self._try_forward(record):
                        # reply raced an invalidation; run discovery again
                        self.originate_data(record)
            return
        entry = self.table.entry(p.dest)
        if entry is None or entry.seq_num > p.dest_seq:
            # stale against what this node already knows: propagating it
            # would advertise a sequence number this node cannot stand behind
            if self.log is not None:
                self.log.emit(now, nid, "rrep_drop", "-", f"stale seq for dest {p.dest}")
            return
        reverse = self.table.live_path(p.source, now)
        if reverse is None:
            if self.log is not None:
                self.log.emit(now, nid, "rrep_drop", "-", f"no reverse path to {p.source}")
            return
        forward = RrepMessage(
            source=p.source,
            dest=p.dest,
            dest_seq=p.dest_seq,
            # always advertise the pinned hop count for this sequence number
            hop_count=entry.advertised_hop_count,
            first_hop=p.first_hop,
            lifetime=p.lifetime,
            size_bytes=p.size_bytes,
        )
        self._send_control_unicast(reverse.next_hop, forward, "rrep_fwd")

    # -- RERR -------------------------------------------------------------------

    def _on_rerr(self, e: RerrMessage, prev_hop: int) -> None:
        now = self.kernel.now
        cascade = []
        for dest, seq in e.unreachable:
            entry = self.table.entry(dest)
            if entry is None or not entry.paths:
                continue
            kept = [p for p in entry.paths if p.next_hop != prev_hop]
            if len(kept) == len(entry.paths):
                continue  # this node never routed through the sender
            entry.paths = kept
            if not kept:
                if seq > entry.seq_num:
                    entry.seq_num = seq
                entry.hold_until = now + self.cfg.route_lifetime
                cascade.append((dest, entry.seq_num))
        if cascade:
            self._send_rerr(tuple(cascade))

    # -- link breaks --------------------------------------------------------------

    def _on_tx_fail(self, neighbor: int, packet) -> None:
        self.on_link_break(neighbor, packet)

    def on_link_break(self, neighbor: int, packet=None) -> None:
        """Unicast to neighbor failed: purge it, retry or salvage the packet."""
        now = self.kernel.now
        lost = self.table.prune_neighbor(neighbor, now, self.cfg.route_lifetime)
        if self.log is not None:
            self.log.emit(
                now, self.node_id, "link_break", "-",
                f"neighbor={neighbor} invalidated={len(lost)}",
            )
        if lost:
            self._send_rerr(tuple(lost))
        if packet is None:
            return
        kind = type(packet)
        if kind is PacketRecord:
            if not self._try_forward(packet):
                self.metrics.on_dropped(packet, DROP_NO_ROUTE)
                if self.log is not None:
                    self.log.emit(
                        now, self.node_id, "data_drop", str(packet.packet_id),
                        "cause=no_route",
                    )
        elif kind is RrepMessage:
            reverse = self.table.live_path(packet.source, now)
            if reverse is not None:
                self._send_control_unicast(reverse.next_hop, packet, "rrep_fwd")
            elif self.log is not None:
                self.log.emit(now, self.node_id, "rrep_drop", "-", "lost on link break")
        # RREQ/RERR travel by broadcast and cannot arrive here

    # -- shared helpers -------------------------------------------------------------

    def _send_rerr(self, unreachable: tuple[tuple[int, int], ...]) -> None:
        rerr = RerrMessage(unreachable, self.cfg.control_size_bytes)
        sent = self.radio.broadcast(self.node_id, rerr)
        if sent:
            self.metrics.on_control_tx()
        if self.log is not None:
            dests = ",".join(f"{d}:{s}" for d, s in unreachable)
            self.log.emit(self.kernel.now, self.node_id, "rerr_tx", "-", dests)

    def _send_control_unicast(self, next_hop: int, message, kind: str) -> None:
        sent = self.radio.unicast(
            self.node_id, next_hop, message, on_fail=self._on_tx_fail
        )
        if sent:
            self.metrics.on_control_tx()
        if self.log is not None and sent:
            self.log.emit(
                self.kernel.now, self.node_id, kind, "-",
                f"to={next_hop} dest={getattr(message, 'dest', '-')}",
            )

    def _table_update(
        self,
        dest: int,
        seq: int,
        hop_count: int,
        next_hop: int,
        first_hop: int,
        lifetime: float,
    ) -> bool:
        if dest == self.node_id:
            return False  # never store a route to self
        now = self.kernel.now
        entry = self.table.entry(dest)
        if entry is None:
            entry = RouteEntry(dest, seq, hop_count)
            self.table.entries[dest] = entry
            entry.paths.append(PathEntry(next_hop, first_hop, hop_count, now + lifetime))
            accepted = True
        else:
            accepted = route_update(
                entry, seq, hop_count, next_hop, first_hop, now + lifetime,
                self.cfg.max_paths,
            )
        if accepted:
            if self.validate:
                self._check_entry(entry)
            if self.log is not None:
                self.log.emit(
                    now, self.node_id, "route_add", "-",
                    f"dest={dest} seq={entry.seq_num} hops={hop_count} "
                    f"next={next_hop} first={first_hop} adv={entry.advertised_hop_count} "
                    f"paths={len(entry.paths)}",
                )
        return accepted

    def _check_entry(self, entry: RouteEntry) -> None:
        paths = entry.paths
        next_hops = {p.next_hop for p in paths}
        first_hops = {p.first_hop for p in paths}
        ok = (
            len(next_hops) == len(paths)
            and len(first_hops) == len(paths)
            and all(p.hop_count <= entry.advertised_hop_count for p in paths)
        )
        if not ok:
            self.metrics.disjoint_violations += 1

    def _sweep(self) -> None:
        now = self.kernel.now
        self.table.sweep(now)
        if self.seen:
            dead = [k for k, v in self.seen.items() if v.expires_at <= now]
            for k in dead:
                del self.seen[k]
        self.kernel.schedule(now + self.cfg.sweep_period, self._sweep)
