"""Shared test fixtures: static topologies and graph oracles.

The BFS oracle recomputes shortest hop counts on the unit-disk graph from
raw positions, independently of the routing implementation, so route length
checks compare two different computations.
"""

from collections import deque

from manetsim.mobility import Area, MobilityTrace, Track


def static_trace(positions, horizon, width=1000.0, height=1000.0):
    """A trace where node i sits at positions[i] for the whole run."""
    tracks = {
        nid: Track([(0.0, x, y), (horizon, x, y)])
        for nid, (x, y) in enumerate(positions)
    }
    return MobilityTrace(Area(width, height), horizon, tracks)


def disk_adjacency(positions, range_m):
    """Adjacency lists of the unit-disk graph (boundary inclusive)."""
    r2 = range_m * range_m
    n = len(positions)
    adj = [[] for _ in range(n)]
    for i in range(n):
        xi, yi = positions[i]
        for j in range(i + 1, n):
            dx = positions[j][0] - xi
            dy = positions[j][1] - yi
            if dx * dx + dy * dy <= r2:
                adj[i].append(j)
                adj[j].append(i)
    return adj


def bfs_hops(positions, range_m, src, dst):
    """Shortest hop count between src and dst, or None if disconnected."""
    adj = disk_adjacency(positions, range_m)
    dist = {src: 0}
    queue = deque([src])
    while queue:
        u = queue.popleft()
        if u == dst:
            return dist[u]
        for v in adj[u]:
            if v not in dist:
                dist[v] = dist[u] + 1
                queue.append(v)
    return None


def connected(positions, range_m):
    adj = disk_adjacency(positions, range_m)
    seen = {0}
    queue = deque([0])
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if v not in seen:
                seen.add(v)
                queue.append(v)
    return len(seen) == len(positions)
