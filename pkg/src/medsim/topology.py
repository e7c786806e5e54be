"""Grid network construction, central-node selection, and route planning.

Nodes are numbered 0..rows*cols-1 in row-major order and connected as a
4-neighbour lattice. Routes from the central node to each user are shortest
paths; edges already claimed by earlier routes are penalised so the plan is
edge-disjoint whenever edge-disjoint shortest paths exist (there is one
quantum memory per physical edge, so edge sharing is physically contended).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import ConfigurationError

_UNSET = -1


@dataclass(frozen=True)
class GridTopology:
    """A rows x cols lattice with a fixed physical edge length in km."""

    rows: int
    cols: int
    edge_length_km: float

    def __post_init__(self):
        if self.rows < 2 or self.cols < 2:
            raise ConfigurationError(
                f"grid must be at least 2x2, got {self.rows}x{self.cols}"
            )
        if not self.edge_length_km > 0:
            raise ConfigurationError(
                f"edge length must be positive, got {self.edge_length_km}"
            )

    @property
    def num_nodes(self) -> int:
        return self.rows * self.cols

    def node_id(self, row: int, col: int) -> int:
        return row * self.cols + col

    def coords(self, node: int) -> tuple[int, int]:
        return divmod(node, self.cols)

    def is_valid_node(self, node: int) -> bool:
        return 0 <= node < self.num_nodes

    def neighbors(self, node: int) -> list[int]:
        """4-neighbourhood of a node, in ascending node-id order."""
        row, col = self.coords(node)
        out = []
        if row > 0:
            out.append(node - self.cols)
        if col > 0:
            out.append(node - 1)
        if col < self.cols - 1:
            out.append(node + 1)
        if row < self.rows - 1:
            out.append(node + self.cols)
        return out

    def edges(self) -> list[tuple[int, int]]:
        """All lattice edges as (low id, high id) pairs."""
        out = []
        for node in range(self.num_nodes):
            for nbr in self.neighbors(node):
                if nbr > node:
                    out.append((node, nbr))
        return out


@dataclass(frozen=True)
class Route:
    """One planned path from the central node to a user."""

    user: int
    vertices: tuple[int, ...]

    @property
    def num_segments(self) -> int:
        return len(self.vertices) - 1


@dataclass(frozen=True)
class RoutePlan:
    """Central node plus one route per user.

    v_max is the largest vertex count over the routes; edge_length_km is
    copied from the topology so latency accounting needs only the plan.
    """

    central_node: int
    routes: tuple[Route, ...]
    v_max: int
    edge_length_km: float

    @property
    def segment_counts(self) -> tuple[int, ...]:
        return tuple(route.num_segments for route in self.routes)


def build_grid(rows: int, cols: int, edge_length_km: float) -> GridTopology:
    """Build a rows x cols lattice with the given edge length in km."""
    return GridTopology(rows=int(rows), cols=int(cols), edge_length_km=float(edge_length_km))


def _bfs_distances(topo: GridTopology, source: int) -> list[int]:
    """Hop distance from source to every node (plain BFS)."""
    dist = [_UNSET] * topo.num_nodes
    dist[source] = 0
    queue = deque([source])
    while queue:
        node = queue.popleft()
        for nbr in topo.neighbors(node):
            if dist[nbr] == _UNSET:
                dist[nbr] = dist[node] + 1
                queue.append(nbr)
    return dist


def _check_users(topo: GridTopology, users: Iterable[int]) -> list[int]:
    users = list(users)
    if not users:
        raise ConfigurationError("user set must not be empty")
    for user in users:
        if not topo.is_valid_node(user):
            raise ConfigurationError(f"user {user} is not a node of the grid")
    if len(set(users)) != len(users):
        raise ConfigurationError(f"user ids must be distinct, got {users}")
    return users


def select_central_node(topo: GridTopology, users: Iterable[int]) -> int:
    """Pick the node acting as the users' centroid.

    Minimises the sum of shortest-path distances to the users; ties are broken
    by the smaller maximum distance to any user, then by the smallest node id,
    so the choice is deterministic and permutation-invariant.
    """
    users = _check_users(topo, users)
    per_user = [_bfs_distances(topo, user) for user in users]
    best = None
    for node in range(topo.num_nodes):
        dists = [d[node] for d in per_user]
        key = (sum(dists), max(dists), node)
        if best is None or key < best:
            best = key
    return best[2]


def _best_shortest_path(
    topo: GridTopology, cn: int, user: int, used_edges: set[tuple[int, int]]
) -> list[int]:
    """Shortest path cn -> user minimising reuse of already-claimed edges.

    Every shortest path crosses BFS layers one at a time, so the shortest
    paths form a DAG over the layers. A single pass over nodes in (layer,
    node id) order finds, per node, the minimum number of used edges on any
    shortest path from cn, keeping the smallest-id predecessor on ties.
    """
    dist = _bfs_distances(topo, cn)
    min_penalty = [_UNSET] * topo.num_nodes
    parent = [_UNSET] * topo.num_nodes
    min_penalty[cn] = 0
    order = sorted(range(topo.num_nodes), key=lambda n: (dist[n], n))
    for node in order:
        if node == cn:
            continue
        for nbr in topo.neighbors(node):
            if dist[nbr] != dist[node] - 1:
                continue
            edge = (nbr, node) if nbr < node else (node, nbr)
            cand = min_penalty[nbr] + (1 if edge in used_edges else 0)
            if min_penalty[node] == _UNSET or cand < min_penalty[node]:
                min_penalty[node] = cand
                parent[node] = nbr
    path = [user]
    while path[-1] != cn:
        path.append(parent[path[-1]])
    path.reverse()
    return path


def compute_routes(topo: GridTopology, cn: int, users: Sequence[int]) -> RoutePlan:
    """Plan one shortest route from cn to each user, in the given user order.

    Earlier routes claim their edges; later routes avoid claimed edges
    whenever an edge-disjoint shortest path exists. Deterministic for
    identical inputs.
    """
    if not topo.is_valid_node(cn):
        raise ConfigurationError(f"central node {cn} is not a node of the grid")
    users = _check_users(topo, users)
    for user in users:
        if user == cn:
            raise ConfigurationError(f"user {user} coincides with the central node")

    used_edges: set[tuple[int, int]] = set()
    routes = []
    for user in users:
        vertices = _best_shortest_path(topo, cn, user, used_edges)
        for a, b in zip(vertices, vertices[1:]):
            used_edges.add((a, b) if a < b else (b, a))
        routes.append(Route(user=user, vertices=tuple(vertices)))
    v_max = max(len(route.vertices) for route in routes)
    return RoutePlan(
        central_node=cn,
        routes=tuple(routes),
        v_max=v_max,
        edge_length_km=topo.edge_length_km,
    )
