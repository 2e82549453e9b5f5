"""Discrete-event kernel: a clock, an ordered event queue, and seeded RNG streams.

Events fire in strict (fire_at, seq) order, where seq is the insertion
counter, so two events scheduled for the same instant run in FIFO order.
Identical (seed, stream label) pairs always produce identical random
sequences, which is what makes whole simulation runs reproducible.
"""

from __future__ import annotations

import hashlib
import heapq
import random
from dataclasses import dataclass
from typing import Callable


def mix_seed(seed: int, stream_id: str) -> int:
    """Stable mixing of a master seed and a stream label into a substream seed.

    sha256 keeps the mapping identical across platforms and Python builds;
    hash() would not.
    """
    digest = hashlib.sha256(f"{seed}:{stream_id}".encode()).digest()
    return int.from_bytes(digest[:16], "big")


class RngStream(random.Random):
    """A named, independently seeded random stream.

    Streams are labeled per consumer ("mobility/node3", "mac/7", "traffic")
    so adding draws in one module never perturbs another module's sequence.
    """

    def __new__(cls, seed: int, stream_id: str):
        # random.Random.__new__ accepts at most one argument
        return super().__new__(cls)

    def __init__(self, seed: int, stream_id: str):
        self.base_seed = seed
        self.stream_id = stream_id
        super().__init__(mix_seed(seed, stream_id))

    def child(self, label: str) -> "RngStream":
        return RngStream(self.base_seed, f"{self.stream_id}/{label}")


class SchedulingError(ValueError):
    """Raised when an event is scheduled before the current clock."""


class EventHandle:
    """Returned by schedule(); cancel through the kernel."""

    __slots__ = ("fire_at", "seq", "action", "cancelled", "fired")

    def __init__(self, fire_at: float, seq: int, action: Callable[[], None]):
        self.fire_at = fire_at
        self.seq = seq
        self.action = action
        self.cancelled = False
        self.fired = False

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        state = "fired" if self.fired else ("cancelled" if self.cancelled else "pending")
        return f"EventHandle(fire_at={self.fire_at}, seq={self.seq}, {state})"


@dataclass(frozen=True)
class CompletionReport:
    events_processed: int
    events_cancelled: int
    clock: float


class Kernel:
    """Event queue plus clock plus RNG stream factory."""

    def __init__(self, seed: int = 0):
        self.seed = seed
        self.now = 0.0
        self._heap: list[tuple[float, int, EventHandle]] = []
        self._seq = 0
        self._processed = 0
        self._skipped_cancelled = 0
        # test hook: called with (fire_at, seq) before each executed action
        self.trace_hook: Callable[[float, int], None] | None = None

    def stream(self, stream_id: str) -> RngStream:
        return RngStream(self.seed, stream_id)

    def schedule(self, fire_at: float, action: Callable[[], None]) -> EventHandle:
        """Schedule action at absolute time fire_at (>= current clock)."""
        if fire_at < self.now:
            raise SchedulingError(
                f"cannot schedule at t={fire_at!r}: clock already at t={self.now!r}"
            )
        handle = EventHandle(fire_at, self._seq, action)
        self._seq += 1
        heapq.heappush(self._heap, (fire_at, handle.seq, handle))
        return handle

    def schedule_in(self, delay: float, action: Callable[[], None]) -> EventHandle:
        return self.schedule(self.now + delay, action)

    def schedule_call(self, fire_at: float, action: Callable[[], None]) -> None:
        """Slim schedule for high-volume events that are never cancelled.

        Skips the EventHandle allocation; same ordering contract as
        schedule().
        """
        if fire_at < self.now:
            raise SchedulingError(
                f"cannot schedule at t={fire_at!r}: clock already at t={self.now!r}"
            )
        heapq.heappush(self._heap, (fire_at, self._seq, action))
        self._seq += 1

    def cancel(self, handle: EventHandle) -> bool:
        """True iff the event had not fired and was not already cancelled."""
        if handle.fired or handle.cancelled:
            return False
        handle.cancelled = True
        return True

    def run_until(self, t_end: float) -> CompletionReport:
        """Process every event with fire_at <= t_end in (fire_at, seq) order.

        On completion the clock reads t_end even if the queue drained early.
        May be called repeatedly with increasing horizons.
        """
        if t_end < self.now:
            raise SchedulingError(
                f"cannot run to t={t_end!r}: clock already at t={self.now!r}"
            )
        processed_before = self._processed
        cancelled_before = self._skipped_cancelled
        heap = self._heap
        pop = heapq.heappop
        hook = self.trace_hook
        while heap and heap[0][0] <= t_end:
            fire_at, seq, handle = pop(heap)
            if type(handle) is EventHandle:
                if handle.cancelled:
                    self._skipped_cancelled += 1
                    continue
                self.now = fire_at
                handle.fired = True
                if hook is not None:
                    hook(fire_at, seq)
                handle.action()
            else:  # bare callable from schedule_call
                self.now = fire_at
                if hook is not None:
                    hook(fire_at, seq)
                handle()
            self._processed += 1
        self.now = t_end
        return CompletionReport(
            self._processed - processed_before,
            self._skipped_cancelled - cancelled_before,
            self.now,
        )

    def pending(self) -> int:
        """Events still queued (cancelled ones included until popped)."""
        return len(self._heap)
