"""Sweep execution and result aggregation.

A sweep runs every config a SweepSpec yields and keeps the canonical row
order no matter how the work is scheduled. Aggregation reduces per-run rows
to per-point seed means: a compact summary CSV, and per-model tables (rows =
node counts, columns = speeds) for the delivery ratio and the average
delay, which is the layout the experiment plots use.
"""

from __future__ import annotations

import multiprocessing
from statistics import fmean

from .config import MODELS, SweepSpec
from .scenario import CSV_HEADER, RunRecord, run_scenario

SUMMARY_HEADER = "model,nodes,speed,runs,mean_pdr,mean_avg_delay_s"


class SweepError(RuntimeError):
    """A run inside a sweep failed; the message names its config."""


def _run_one(cfg):
    try:
        return True, run_scenario(cfg)
    except Exception as exc:  # noqa: BLE001 - reported, never swallowed
        ident = (
            f"model={cfg.model} nodes={cfg.n_nodes} speed={cfg.speed:g} seed={cfg.seed}"
        )
        return False, f"{ident}: {type(exc).__name__}: {exc}"


def run_sweep(spec: SweepSpec, jobs: int = 1, progress=None) -> list[RunRecord]:
    """Execute the whole matrix; output order is spec.configs() order.

    jobs > 1 runs scenarios in worker processes (each run is independent).
    The first failing run aborts the sweep with its config in the message.
    progress(done, total, record) is called after each completed run.
    """
    if jobs < 1:
        raise ValueError(f"jobs must be >= 1, got {jobs}")
    configs = list(spec.configs())
    total = len(configs)
    records: list[RunRecord] = []

    def consume(outcome) -> None:
        ok, payload = outcome
        if not ok:
            raise SweepError(payload)
        records.append(payload)
        if progress is not None:
            progress(len(records), total, payload)

    if jobs == 1 or total <= 1:
        for cfg in configs:
            consume(_run_one(cfg))
    else:
        with multiprocessing.Pool(processes=jobs) as pool:
            for outcome in pool.imap(_run_one, configs, chunksize=1):
                consume(outcome)
    return records


# -- aggregation ---------------------------------------------------------------

# one per-run row reduced to what aggregation needs
# (model, nodes, speed, pdr or None, avg_delay or None)
Row = tuple[str, int, float, float | None, float | None]


def rows_from_records(records: list[RunRecord]) -> list[Row]:
    return [
        (r.model, r.n_nodes, r.speed, r.metrics.pdr, r.metrics.avg_delay)
        for r in records
    ]


def rows_from_csv(text: str) -> list[Row]:
    """Read back the per-run CSV this package writes."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty CSV")
    if lines[0] != CSV_HEADER:
        raise ValueError(f"unexpected CSV header: {lines[0]!r}")
    names = CSV_HEADER.split(",")
    rows: list[Row] = []
    for no, line in enumerate(lines[1:], start=2):
        parts = line.split(",")
        if len(parts) != len(names):
            raise ValueError(f"line {no}: expected {len(names)} fields, got {len(parts)}")
        vals = dict(zip(names, parts))
        try:
            rows.append(
                (
                    vals["model"],
                    int(vals["nodes"]),
                    float(vals["speed"]),
                    float(vals["pdr"]) if vals["pdr"] else None,
                    float(vals["avg_delay_s"]) if vals["avg_delay_s"] else None,
                )
            )
        except ValueError as exc:
            raise ValueError(f"line {no}: {exc}") from None
    return rows


def records_to_csv(records: list[RunRecord]) -> str:
    lines = [CSV_HEADER]
    lines.extend(r.csv_row() for r in records)
    return "\n".join(lines) + "\n"


def _grouped(rows: list[Row]) -> dict[tuple[str, int, float], list[Row]]:
    groups: dict[tuple[str, int, float], list[Row]] = {}
    for row in rows:
        groups.setdefault((row[0], row[1], row[2]), []).append(row)
    return groups


def _model_order(rows: list[Row]) -> list[str]:
    present = {row[0] for row in rows}
    ordered = [m for m in MODELS if m in present]
    ordered.extend(sorted(present - set(MODELS)))
    return ordered


def summary_csv(rows: list[Row]) -> str:
    """Seed means per (model, nodes, speed) point, canonical order."""
    groups = _grouped(rows)
    lines = [SUMMARY_HEADER]
    for model in _model_order(rows):
        points = sorted(k for k in groups if k[0] == model)
        for key in points:
            bunch = groups[key]
            pdrs = [r[3] for r in bunch if r[3] is not None]
            delays = [r[4] for r in bunch if r[4] is not None]
            mean_pdr = f"{fmean(pdrs):.6f}" if pdrs else ""
            mean_delay = f"{fmean(delays):.6f}" if delays else ""
            lines.append(
                f"{key[0]},{key[1]},{key[2]:g},{len(bunch)},{mean_pdr},{mean_delay}"
            )
    return "\n".join(lines) + "\n"


def figure_tables(rows: list[Row]) -> str:
    """Two tables per model (delivery ratio, then average delay).

    Rows are node counts, columns are speeds, cells are seed means; a cell
    with no defined value prints "-". Tables are blank-line separated, each
    introduced by a "# <metric> model=<name>" line.
    """
    groups = _grouped(rows)
    node_counts = sorted({row[1] for row in rows})
    speeds = sorted({row[2] for row in rows})
    blocks = []
    for model in _model_order(rows):
        for title, pick in (("pdr", 3), ("avg_delay_s", 4)):
            lines = [f"# {title} model={model}"]
            lines.append("nodes," + ",".join(f"{s:g}" for s in speeds))
            for nodes in node_counts:
                cells = [str(nodes)]
                for speed in speeds:
                    bunch = groups.get((model, nodes, speed), ())
                    vals = [r[pick] for r in bunch if r[pick] is not None]
                    cells.append(f"{fmean(vals):.6f}" if vals else "-")
                lines.append(",".join(cells))
            blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + "\n"
