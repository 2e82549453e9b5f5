"""Structured per-run event log.

One record per line: time, node, event kind, packet id, free-form details.
The log exists so invariants (loop freedom, the advertised-hop-count chain,
route-table disjointness) can be re-checked offline from a single run's
output. Pass log=None to the routing layer to skip recording entirely;
sweeps do, single CLI runs can opt in with --event-log.
"""

from __future__ import annotations

import io


class EventLog:
    __slots__ = ("records",)

    def __init__(self) -> None:
        self.records: list[tuple[float, int, str, str, str]] = []

    def emit(self, t: float, node: int, kind: str, packet_id: str = "-", details: str = "") -> None:
        self.records.append((t, node, kind, packet_id, details))

    def dump(self) -> str:
        buf = io.StringIO()
        for t, node, kind, packet_id, details in self.records:
            buf.write(f"{t:.6f}\t{node}\t{kind}\t{packet_id}\t{details}\n")
        return buf.getvalue()

    def write(self, path: str) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.dump())

    def __len__(self) -> int:
        return len(self.records)


def parse_log(text: str) -> list[tuple[float, int, str, str, str]]:
    """Inverse of dump(); used by tests to replay a run's events."""
    out = []
    for line in text.splitlines():
        if not line:
            continue
        t, node, kind, packet_id, details = line.split("\t", 4)
        out.append((float(t), int(node), kind, packet_id, details))
    return out
