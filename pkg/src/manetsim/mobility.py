"""Node mobility: waypoint traces, three movement models, and a text trace format.

A trace stores, per node, an ordered list of (time, x, y) waypoints; position
between waypoints is linear interpolation, so a constant-speed leg is exactly
two waypoints. The three generators are:

* random waypoint: travel straight to a uniform destination, pause, repeat;
* random direction: travel straight to the boundary, pause there, leave at a
  uniform inward angle (0-180 degrees measured against the wall);
* probabilistic random walk: per-axis three-state Markov chain (stay, move
  backward, move forward) stepped on a fixed time grid, reflecting at walls.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from typing import Iterable, Sequence

from .kernel import RngStream

# Legs shorter than this are redrawn: the trace file format keeps 6 decimals,
# and two waypoints closer in time than the format resolution would collapse.
_MIN_LEG_SECONDS = 1e-5


@dataclass(frozen=True)
class Area:
    """Rectangular simulation area with the origin at a corner."""

    width: float = 1000.0
    height: float = 1000.0

    def __post_init__(self) -> None:
        if self.width <= 0 or self.height <= 0:
            raise ValueError(f"area sides must be positive, got {self.width} x {self.height}")

    def contains(self, x: float, y: float) -> bool:
        return 0.0 <= x <= self.width and 0.0 <= y <= self.height


class Track:
    """One node's waypoint list, with amortized O(1) interpolation.

    Waypoint times are strictly increasing. The cursor caches the segment of
    the previous query; simulation queries arrive in non-decreasing time
    order, so the bisect fallback is rare.
    """

    __slots__ = ("times", "xs", "ys", "_cursor")

    def __init__(self, waypoints: Iterable[tuple[float, float, float]]):
        times: list[float] = []
        xs: list[float] = []
        ys: list[float] = []
        for t, x, y in waypoints:
            times.append(t)
            xs.append(x)
            ys.append(y)
        if not times:
            raise ValueError("a track needs at least one waypoint")
        for i in range(1, len(times)):
            if times[i] <= times[i - 1]:
                raise ValueError(
                    f"waypoint times must be strictly increasing, got {times[i - 1]!r} then {times[i]!r}"
                )
        self.times = times
        self.xs = xs
        self.ys = ys
        self._cursor = 0

    def position_at(self, t: float) -> tuple[float, float]:
        # strict right edge on the cursor hit keeps warm and cold lookups
        # on the same segment at exact waypoint instants
        times = self.times
        i = self._cursor
        j = i + 1
        if not (j < len(times) and times[i] <= t < times[j]):
            if len(times) == 1:
                return self.xs[0], self.ys[0]
            i = bisect_right(times, t) - 1
            if i < 0:
                i = 0
            elif i >= len(times) - 1:
                i = len(times) - 2
            self._cursor = i
            j = i + 1
        t0 = times[i]
        frac = (t - t0) / (times[j] - t0)
        xs = self.xs
        ys = self.ys
        x0 = xs[i]
        y0 = ys[i]
        return x0 + frac * (xs[j] - x0), y0 + frac * (ys[j] - y0)

    def waypoints(self) -> list[tuple[float, float, float]]:
        return list(zip(self.times, self.xs, self.ys))

    def __len__(self) -> int:
        return len(self.times)


class MobilityTrace:
    """Per-node tracks over a shared area and horizon.

    Immutable after construction (the interpolation cursor aside) and safe to
    share read-only across scenario runs in one process.
    """

    def __init__(self, area: Area, horizon: float, tracks: dict[int, Track]):
        if horizon < 0:
            raise ValueError(f"horizon must be non-negative, got {horizon!r}")
        self.area = area
        self.horizon = horizon
        self.tracks = dict(sorted(tracks.items()))
        for nid, track in self.tracks.items():
            self._validate_track(nid, track)

    def _validate_track(self, nid: int, track: Track) -> None:
        if track.times[0] != 0.0:
            raise ValueError(f"node {nid}: track must start at t=0, got t={track.times[0]!r}")
        if track.times[-1] < self.horizon:
            raise ValueError(
                f"node {nid}: last waypoint at t={track.times[-1]!r} is before horizon {self.horizon!r}"
            )
        for t, x, y in zip(track.times, track.xs, track.ys):
            if not self.area.contains(x, y):
                raise ValueError(
                    f"node {nid}: waypoint ({x!r}, {y!r}) at t={t!r} outside "
                    f"{self.area.width!r} x {self.area.height!r} area"
                )

    def node_ids(self) -> list[int]:
        return list(self.tracks)

    @property
    def n_nodes(self) -> int:
        return len(self.tracks)

    def position_at(self, node: int, t: float) -> tuple[float, float]:
        """Interpolated position; querying outside [0, horizon] is an error."""
        if not 0.0 <= t <= self.horizon:
            raise ValueError(f"t={t!r} outside trace horizon [0, {self.horizon!r}]")
        return self.tracks[node].position_at(t)


class WalkMatrix:
    """Row-stochastic 3x3 transition matrix over {0 stay, 1 backward, 2 forward}."""

    __slots__ = ("rows", "_cum")

    def __init__(self, rows: Sequence[Sequence[float]]):
        if len(rows) != 3 or any(len(r) != 3 for r in rows):
            raise ValueError("walk matrix must be 3x3")
        frozen = tuple(tuple(float(p) for p in r) for r in rows)
        for i, row in enumerate(frozen):
            if any(p < 0.0 or p > 1.0 for p in row):
                raise ValueError(f"walk matrix row {i} has entries outside [0, 1]: {row}")
            if abs(sum(row) - 1.0) > 1e-9:
                raise ValueError(f"walk matrix row {i} sums to {sum(row)!r}, not 1")
        self.rows = frozen
        self._cum = tuple((r[0], r[0] + r[1]) for r in frozen)

    def next_state(self, state: int, rng: RngStream) -> int:
        u = rng.random()
        c0, c1 = self._cum[state]
        if u < c0:
            return 0
        if u < c1:
            return 1
        return 2

    def __eq__(self, other: object) -> bool:
        return isinstance(other, WalkMatrix) and self.rows == other.rows

    def __repr__(self) -> str:
        return f"WalkMatrix({self.rows!r})"


# stay mostly keeps moving; backward/forward runs persist with p=0.7
DEFAULT_WALK_MATRIX = WalkMatrix([(0.0, 0.5, 0.5), (0.3, 0.7, 0.0), (0.3, 0.0, 0.7)])


def walk_states(matrix: WalkMatrix, n_steps: int, rng: RngStream, start: int = 0) -> list[int]:
    """The chain's state after each of n_steps transitions from start."""
    states = []
    append = states.append
    state = start
    next_state = matrix.next_state
    for _ in range(n_steps):
        state = next_state(state, rng)
        append(state)
    return states


def _node_rngs(rng: RngStream, n_nodes: int) -> list[RngStream]:
    # One substream per node: draws for node i never depend on other nodes.
    return [rng.child(f"node{i}") for i in range(n_nodes)]


def generate_rwp(
    n_nodes: int,
    area: Area,
    horizon: float,
    speed: float,
    pause: float,
    rng: RngStream,
) -> MobilityTrace:
    """Random waypoint trace: uniform start, straight legs at constant speed
    to uniform destinations, a pause at each destination."""
    _check_motion_args(n_nodes, horizon, speed, pause)
    tracks: dict[int, Track] = {}
    for nid, node_rng in enumerate(_node_rngs(rng, n_nodes)):
        x = node_rng.uniform(0.0, area.width)
        y = node_rng.uniform(0.0, area.height)
        points = [(0.0, x, y)]
        t = 0.0
        while t < horizon:
            dest_x = node_rng.uniform(0.0, area.width)
            dest_y = node_rng.uniform(0.0, area.height)
            leg = math.hypot(dest_x - x, dest_y - y) / speed
            if leg < _MIN_LEG_SECONDS:
                continue
            t += leg
            x, y = dest_x, dest_y
            points.append((t, x, y))
            if pause > 0.0 and t < horizon:
                t += pause
                points.append((t, x, y))
        tracks[nid] = Track(points)
    return MobilityTrace(area, horizon, tracks)


def _ray_to_wall(
    x: float, y: float, dx: float, dy: float, area: Area
) -> tuple[float, float, float] | None:
    """Distance along unit direction (dx, dy) to the first wall and the hit
    point with the wall coordinate snapped exactly. None on a corner hit."""
    tx = math.inf
    if dx > 1e-12:
        tx = (area.width - x) / dx
    elif dx < -1e-12:
        tx = -x / dx
    ty = math.inf
    if dy > 1e-12:
        ty = (area.height - y) / dy
    elif dy < -1e-12:
        ty = -y / dy
    dist = min(tx, ty)
    if not math.isfinite(dist):
        return None
    if abs(tx - ty) < 1e-9:  # both walls at once: a corner
        return None
    if tx < ty:
        hit_x = area.width if dx > 0 else 0.0
        hit_y = min(max(y + dy * dist, 0.0), area.height)
    else:
        hit_y = area.height if dy > 0 else 0.0
        hit_x = min(max(x + dx * dist, 0.0), area.width)
    return dist, hit_x, hit_y


def _inward_normal(x: float, y: float, area: Area) -> tuple[float, float]:
    if x == 0.0:
        return 1.0, 0.0
    if x == area.width:
        return -1.0, 0.0
    if y == 0.0:
        return 0.0, 1.0
    return 0.0, -1.0


def generate_random_direction(
    n_nodes: int,
    area: Area,
    horizon: float,
    speed: float,
    pause: float,
    rng: RngStream,
) -> MobilityTrace:
    """Random direction trace: straight to the boundary, pause on the wall,
    depart at a uniform inward angle; every pause point lies on a wall."""
    _check_motion_args(n_nodes, horizon, speed, pause)
    tracks: dict[int, Track] = {}
    for nid, node_rng in enumerate(_node_rngs(rng, n_nodes)):
        x = node_rng.uniform(0.0, area.width)
        y = node_rng.uniform(0.0, area.height)
        points = [(0.0, x, y)]
        t = 0.0
        on_wall = False
        while t < horizon:
            for _attempt in range(1000):
                if on_wall:
                    # 0-180 degrees against the wall == +-90 against its normal
                    nx, ny = _inward_normal(x, y, area)
                    theta = node_rng.uniform(-math.pi / 2.0, math.pi / 2.0)
                    cos_t, sin_t = math.cos(theta), math.sin(theta)
                    dx = nx * cos_t - ny * sin_t
                    dy = nx * sin_t + ny * cos_t
                else:
                    heading = node_rng.uniform(0.0, 2.0 * math.pi)
                    dx, dy = math.cos(heading), math.sin(heading)
                hit = _ray_to_wall(x, y, dx, dy, area)
                if hit is not None and hit[0] / speed >= _MIN_LEG_SECONDS:
                    break
            else:  # pragma: no cover - requires a degenerate geometry
                raise RuntimeError("could not draw a usable departure direction")
            dist, x, y = hit
            t += dist / speed
            points.append((t, x, y))
            on_wall = True
            if pause > 0.0 and t < horizon:
                t += pause
                points.append((t, x, y))
        tracks[nid] = Track(points)
    return MobilityTrace(area, horizon, tracks)


def _reflect(v: float, limit: float) -> float:
    # Mirror fold into [0, limit]; terminates for any finite step.
    while v < 0.0 or v > limit:
        if v < 0.0:
            v = -v
        else:
            v = 2.0 * limit - v
    return v


def generate_prob_random_walk(
    n_nodes: int,
    area: Area,
    horizon: float,
    speed: float,
    walk_matrix: WalkMatrix,
    walk_step: float,
    rng: RngStream,
) -> MobilityTrace:
    """Probabilistic random walk trace.

    Time advances in walk_step increments. Each axis carries its own
    three-state chain; per step the axis displacement is 0 or +-(speed *
    walk_step), and positions reflect off the walls. Both chains start in
    state 0 (stay); the x chain for a node is drawn before its y chain.
    """
    _check_motion_args(n_nodes, horizon, speed, pause=0.0)
    if walk_step <= 0.0:
        raise ValueError(f"walk_step must be positive, got {walk_step!r}")
    n_steps = max(1, math.ceil(horizon / walk_step - 1e-12))
    step_len = speed * walk_step
    # displacement per state: stay, backward, forward
    moves = (0.0, -step_len, step_len)
    tracks: dict[int, Track] = {}
    for nid, node_rng in enumerate(_node_rngs(rng, n_nodes)):
        x = node_rng.uniform(0.0, area.width)
        y = node_rng.uniform(0.0, area.height)
        states_x = walk_states(walk_matrix, n_steps, node_rng)
        states_y = walk_states(walk_matrix, n_steps, node_rng)
        points = [(0.0, x, y)]
        for i in range(n_steps):
            x = _reflect(x + moves[states_x[i]], area.width)
            y = _reflect(y + moves[states_y[i]], area.height)
            points.append(((i + 1) * walk_step, x, y))
        tracks[nid] = Track(points)
    return MobilityTrace(area, horizon, tracks)


def _check_motion_args(n_nodes: int, horizon: float, speed: float, pause: float) -> None:
    if n_nodes < 1:
        raise ValueError(f"n_nodes must be >= 1, got {n_nodes!r}")
    if horizon <= 0.0:
        raise ValueError(f"horizon must be positive, got {horizon!r}")
    if speed <= 0.0:
        raise ValueError(f"speed must be positive, got {speed!r}")
    if pause < 0.0:
        raise ValueError(f"pause must be non-negative, got {pause!r}")


class TraceFormatError(ValueError):
    """Parse failure; message carries the 1-based line number."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


def write_trace(trace: MobilityTrace) -> str:
    """Serialize a trace; all numbers at fixed 6-decimal precision.

    Node lines are ordered by id, so equal traces serialize to equal bytes.
    """
    lines = [
        f"#area {trace.area.width:.6f} {trace.area.height:.6f} #horizon {trace.horizon:.6f}"
    ]
    for nid, track in trace.tracks.items():
        parts = [str(nid)]
        parts.extend(
            f"{t:.6f} {x:.6f} {y:.6f}" for t, x, y in zip(track.times, track.xs, track.ys)
        )
        lines.append(" ".join(parts))
    return "\n".join(lines) + "\n"


def parse_trace(text: str) -> MobilityTrace:
    """Parse the write_trace format; parse(write(t)) reproduces t up to the
    6-decimal quantization (exactly, for values already on that grid)."""
    lines = text.splitlines()
    if not lines:
        raise TraceFormatError(1, "empty input, expected '#area W H #horizon T' header")
    header = lines[0].split()
    if len(header) != 5 or header[0] != "#area" or header[3] != "#horizon":
        raise TraceFormatError(1, f"malformed header: {lines[0]!r}")
    try:
        width, height = float(header[1]), float(header[2])
        horizon = float(header[4])
    except ValueError:
        raise TraceFormatError(1, f"non-numeric header field in {lines[0]!r}") from None
    try:
        area = Area(width, height)
    except ValueError as exc:
        raise TraceFormatError(1, str(exc)) from None

    tracks: dict[int, Track] = {}
    for line_no, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        tokens = line.split()
        try:
            nid = int(tokens[0])
        except ValueError:
            raise TraceFormatError(line_no, f"node id {tokens[0]!r} is not an integer") from None
        if nid < 0:
            raise TraceFormatError(line_no, f"node id {nid} is negative")
        if nid in tracks:
            raise TraceFormatError(line_no, f"duplicate node id {nid}")
        rest = tokens[1:]
        if not rest:
            raise TraceFormatError(line_no, f"node {nid} has no waypoints")
        if len(rest) % 3 != 0:
            raise TraceFormatError(
                line_no, f"node {nid}: expected 't x y' triples, got {len(rest)} values"
            )
        try:
            values = [float(v) for v in rest]
        except ValueError:
            raise TraceFormatError(line_no, f"node {nid}: non-numeric waypoint value") from None
        waypoints = list(zip(values[0::3], values[1::3], values[2::3]))
        if waypoints[0][0] != 0.0:
            raise TraceFormatError(
                line_no, f"node {nid}: first waypoint at t={waypoints[0][0]!r}, expected t=0"
            )
        prev_t = -math.inf
        for t, x, y in waypoints:
            if t <= prev_t:
                raise TraceFormatError(
                    line_no, f"node {nid}: waypoint times not strictly increasing at t={t!r}"
                )
            prev_t = t
            if not area.contains(x, y):
                raise TraceFormatError(
                    line_no,
                    f"node {nid}: waypoint ({x!r}, {y!r}) outside {width!r} x {height!r} area",
                )
        if waypoints[-1][0] < horizon:
            raise TraceFormatError(
                line_no,
                f"node {nid}: track ends at t={waypoints[-1][0]!r}, before horizon {horizon!r}",
            )
        tracks[nid] = Track(waypoints)
    return MobilityTrace(area, horizon, tracks)
