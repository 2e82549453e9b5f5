"""Unit-disk radio with a per-node FIFO interface queue.

Reception is geometric: a transmission reaches exactly the nodes within
range at the instant the frame starts serializing (inclusive boundary).
Each node owns one half-duplex interface that serializes frames at the
configured bandwidth; a frame enqueued while the interface is busy waits
FIFO, and a frame arriving to a full queue is dropped (drop tail).

Unicast to a node that is out of range when serialization starts fails
back to the sender via the on_fail callback; that callback is the only
link-break detection in the system (there are no hello beacons).
Broadcast has no failure feedback. An optional Bernoulli loss knob drops
deliveries silently; the draw order per transmission is loss first, then
jitter, receivers in ascending node id order for broadcast.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import partial
from heapq import heapify, heappop, heappush
from math import inf

import numpy as np

from .kernel import Kernel, RngStream
from .mobility import MobilityTrace


@dataclass(frozen=True)
class RadioConfig:
    range_m: float = 250.0
    bandwidth_bps: float = 2_000_000.0
    queue_capacity: int = 50
    jitter_max: float = 0.001
    loss_prob: float = 0.0

    def __post_init__(self) -> None:
        problems = []
        if self.range_m <= 0:
            problems.append(f"range_m must be positive, got {self.range_m!r}")
        if self.bandwidth_bps <= 0:
            problems.append(f"bandwidth_bps must be positive, got {self.bandwidth_bps!r}")
        if self.queue_capacity < 1:
            problems.append(f"queue_capacity must be >= 1, got {self.queue_capacity!r}")
        if self.jitter_max < 0:
            problems.append(f"jitter_max must be non-negative, got {self.jitter_max!r}")
        if not 0.0 <= self.loss_prob <= 1.0:
            problems.append(f"loss_prob must be in [0, 1], got {self.loss_prob!r}")
        if problems:
            raise ValueError("; ".join(problems))


@dataclass(frozen=True)
class LinkVerdict:
    reachable: bool
    distance: float


def link_verdict(trace: MobilityTrace, t: float, src: int, dst: int, cfg: RadioConfig) -> LinkVerdict:
    x1, y1 = trace.position_at(src, t)
    x2, y2 = trace.position_at(dst, t)
    distance = ((x2 - x1) ** 2 + (y2 - y1) ** 2) ** 0.5
    return LinkVerdict(distance <= cfg.range_m, distance)


def neighbors(trace: MobilityTrace, t: float, node: int, cfg: RadioConfig) -> set[int]:
    """Nodes within cfg.range_m of node at time t (inclusive boundary)."""
    px, py = trace.position_at(node, t)
    r2 = cfg.range_m * cfg.range_m
    out = set()
    for nid, track in trace.tracks.items():
        if nid == node:
            continue
        x, y = track.position_at(t)
        dx = x - px
        dy = y - py
        if dx * dx + dy * dy <= r2:
            out.add(nid)
    return out


def sample_loss(cfg: RadioConfig, rng: RngStream) -> bool:
    """True when the delivery should be dropped by the stochastic loss knob."""
    return cfg.loss_prob > 0.0 and rng.random() < cfg.loss_prob


class Radio:
    """Shared medium: owns every node's interface queue and delivery timing.

    deliver(receiver, packet, sender) is invoked as a scheduled kernel event
    for each successful reception.
    """

    def __init__(self, kernel: Kernel, trace: MobilityTrace, cfg: RadioConfig, deliver):
        self.kernel = kernel
        self.cfg = cfg
        self.deliver = deliver
        self._recv: dict[int, object] | None = None
        self._tracks = sorted(trace.tracks.items())
        self._range2 = cfg.range_m * cfg.range_m
        self._free_at: dict[int, float] = {}
        self._busy_ends: dict[int, deque[float]] = {}
        self._rng: dict[int, RngStream] = {}
        for nid, _ in self._tracks:
            self._free_at[nid] = 0.0
            self._busy_ends[nid] = deque()
            self._rng[nid] = kernel.stream(f"mac/{nid}")
        self._init_geometry()
        # aggregate counters, exposed for invariant checks
        self.queue_drops = 0
        self.unicasts = 0
        self.broadcasts = 0
        self.failures = 0
        self.losses = 0

    # -- position lookup ------------------------------------------------------

    def _init_geometry(self) -> None:
        """Column layout of every track's current waypoint segment.

        Simulation time never decreases, so each node walks its waypoint
        list once per run: a heap keyed on the time the node's current
        segment stops being the right one tells _positions when and which
        endpoints to reload. Segment choice and the interpolation formula
        match Track.position_at bit for bit.
        """
        n = len(self._tracks)
        self._ids = [nid for nid, _ in self._tracks]
        self._idx = {nid: k for k, nid in enumerate(self._ids)}
        self._wp_times = [tr.times for _, tr in self._tracks]
        self._wp_xs = [tr.xs for _, tr in self._tracks]
        self._wp_ys = [tr.ys for _, tr in self._tracks]
        self._seg = [0] * n
        self._T0 = np.zeros(n)
        self._T1 = np.ones(n)
        self._X0 = np.zeros(n)
        self._X1 = np.zeros(n)
        self._Y0 = np.zeros(n)
        self._Y1 = np.zeros(n)
        heap = []
        for k in range(n):
            times = self._wp_times[k]
            xs = self._wp_xs[k]
            ys = self._wp_ys[k]
            last = len(times) - 1
            self._T0[k] = times[0]
            self._X0[k] = xs[0]
            self._Y0[k] = ys[0]
            if last == 0:
                # single waypoint: constant position, frac * 0 stays exact
                self._T1[k] = times[0] + 1.0
                self._X1[k] = xs[0]
                self._Y1[k] = ys[0]
                heap.append((inf, k))
            else:
                self._T1[k] = times[1]
                self._X1[k] = xs[1]
                self._Y1[k] = ys[1]
                heap.append((times[1] if last >= 2 else inf, k))
        heapify(heap)
        self._seg_heap = heap

    def _advance(self, t: float) -> None:
        heap = self._seg_heap
        while heap[0][0] <= t:
            _, k = heappop(heap)
            times = self._wp_times[k]
            last = len(times) - 1
            i = self._seg[k] + 1
            while i < last - 1 and times[i + 1] <= t:
                i += 1
            self._seg[k] = i
            j = i + 1
            self._T0[k] = times[i]
            self._T1[k] = times[j]
            xs = self._wp_xs[k]
            self._X0[k] = xs[i]
            self._X1[k] = xs[j]
            ys = self._wp_ys[k]
            self._Y0[k] = ys[i]
            self._Y1[k] = ys[j]
            heappush(heap, (times[j] if i < last - 1 else inf, k))

    def _positions(self, t: float) -> tuple[np.ndarray, np.ndarray]:
        """Positions of every node at time t, in ascending node id order."""
        if self._seg_heap[0][0] <= t:
            self._advance(t)
        frac = (t - self._T0) / (self._T1 - self._T0)
        x = self._X0 + frac * (self._X1 - self._X0)
        y = self._Y0 + frac * (self._Y1 - self._Y0)
        return x, y

    def bind_receivers(self, receivers: dict[int, object]) -> None:
        """Route deliveries straight to per-node receive(packet, sender)
        methods, bypassing the deliver callback on the hot path."""
        self._recv = dict(receivers)

    # -- queue admission ----------------------------------------------------

    def _admit(self, src: int) -> float | None:
        """Reserve a serialization slot; returns the service start time, or
        None when the interface queue is full (the new frame is the one
        dropped)."""
        now = self.kernel.now
        ends = self._busy_ends[src]
        while ends and ends[0] <= now:
            ends.popleft()
        if len(ends) >= self.cfg.queue_capacity:
            self.queue_drops += 1
            return None
        start = self._free_at[src]
        if start < now:
            start = now
        return start

    def unicast(self, src: int, dst: int, packet, on_fail=None, on_lost=None) -> bool:
        """Queue a frame for dst. False means the interface queue was full.

        on_fail(dst, packet) fires at serialization start if dst is out of
        range at that instant; on_lost(dst, packet) fires when the Bernoulli
        loss knob eats the delivery.
        """
        start = self._admit(src)
        if start is None:
            return False
        ser = packet.size_bytes * 8.0 / self.cfg.bandwidth_bps
        self._free_at[src] = start + ser
        self._busy_ends[src].append(start + ser)
        self.unicasts += 1
        if start <= self.kernel.now:
            self._serve_unicast(src, dst, packet, ser, on_fail, on_lost)
        else:
            self.kernel.schedule(
                start, lambda: self._serve_unicast(src, dst, packet, ser, on_fail, on_lost)
            )
        return True

    def broadcast(self, src: int, packet, on_lost=None) -> bool:
        """Queue a frame for every neighbor of src. No failure feedback."""
        start = self._admit(src)
        if start is None:
            return False
        ser = packet.size_bytes * 8.0 / self.cfg.bandwidth_bps
        self._free_at[src] = start + ser
        self._busy_ends[src].append(start + ser)
        self.broadcasts += 1
        if start <= self.kernel.now:
            self._serve_broadcast(src, packet, ser, on_lost)
        else:
            self.kernel.schedule(start, lambda: self._serve_broadcast(src, packet, ser, on_lost))
        return True

    # -- serialization start ------------------------------------------------

    def _serve_unicast(self, src, dst, packet, ser, on_fail, on_lost) -> None:
        kernel = self.kernel
        now = kernel.now
        x, y = self._positions(now)
        si = self._idx[src]
        di = self._idx[dst]
        ddx = x[di] - x[si]
        ddy = y[di] - y[si]
        if ddx * ddx + ddy * ddy > self._range2:
            self.failures += 1
            if on_fail is not None:
                on_fail(dst, packet)
            return
        cfg = self.cfg
        rng = self._rng[src]
        if cfg.loss_prob > 0.0 and rng.random() < cfg.loss_prob:
            self.losses += 1
            if on_lost is not None:
                on_lost(dst, packet)
            return
        delay = ser
        if cfg.jitter_max > 0.0:
            delay += rng.random() * cfg.jitter_max
        recv = self._recv
        if recv is not None:
            kernel.schedule_call(now + delay, partial(recv[dst], packet, src))
        else:
            kernel.schedule_call(now + delay, partial(self.deliver, dst, packet, src))

    def _serve_broadcast(self, src, packet, ser, on_lost) -> None:
        kernel = self.kernel
        now = kernel.now
        x, y = self._positions(now)
        si = self._idx[src]
        dx = x - x[si]
        dy = y - y[si]
        mask = dx * dx + dy * dy <= self._range2
        mask[si] = False
        hits = np.nonzero(mask)[0]
        cfg = self.cfg
        rng = self._rng[src]
        rand = rng.random
        loss = cfg.loss_prob
        jitter = cfg.jitter_max
        recv = self._recv
        deliver = self.deliver
        ids = self._ids
        push = kernel.schedule_call
        base = now + ser
        # receivers in ascending node id order: loss draw, then jitter draw
        for k in hits.tolist():
            nid = ids[k]
            if loss > 0.0 and rand() < loss:
                self.losses += 1
                if on_lost is not None:
                    on_lost(nid, packet)
                continue
            at = base + rand() * jitter if jitter > 0.0 else base
            if recv is not None:
                push(at, partial(recv[nid], packet, src))
            else:
                push(at, partial(deliver, nid, packet, src))
