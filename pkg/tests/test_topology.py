"""Grid construction, central-node selection, and route planning."""

import itertools
from collections import deque

import pytest

from medsim.errors import ConfigurationError
from medsim.topology import build_grid, compute_routes, select_central_node


def manhattan(topo, a, b):
    (ra, ca), (rb, cb) = topo.coords(a), topo.coords(b)
    return abs(ra - rb) + abs(ca - cb)


def bfs_distance(topo, source, target):
    """Reference shortest-path distance, independent of the routing code."""
    seen = {source: 0}
    queue = deque([source])
    while queue:
        node = queue.popleft()
        if node == target:
            return seen[node]
        for nbr in topo.neighbors(node):
            if nbr not in seen:
                seen[nbr] = seen[node] + 1
                queue.append(nbr)
    raise AssertionError("grid must be connected")


def route_edges(route):
    return {tuple(sorted(pair)) for pair in zip(route.vertices, route.vertices[1:])}


CORNERS_8 = [0, 7, 56, 63]


class TestBuildGrid:
    @pytest.mark.parametrize(
        "rows,cols,expected_edges",
        [(2, 2, 4), (8, 8, 112), (3, 3, 12), (4, 9, 59)],
    )
    def test_node_and_edge_counts(self, rows, cols, expected_edges):
        # Lattice edge count: rows*(cols-1) horizontal + cols*(rows-1) vertical.
        assert expected_edges == rows * (cols - 1) + cols * (rows - 1)
        topo = build_grid(rows, cols, 1.0)
        assert topo.num_nodes == rows * cols
        assert len(topo.edges()) == expected_edges

    def test_edge_length_is_stored(self):
        assert build_grid(3, 3, 5.0).edge_length_km == 5.0

    def test_every_edge_joins_lattice_neighbours(self):
        topo = build_grid(5, 7, 2.0)
        for a, b in topo.edges():
            assert manhattan(topo, a, b) == 1

    def test_neighbor_lists_are_ascending(self):
        topo = build_grid(4, 4, 1.0)
        for node in range(topo.num_nodes):
            nbrs = topo.neighbors(node)
            assert nbrs == sorted(nbrs)

    @pytest.mark.parametrize("rows,cols,length", [(1, 5, 1.0), (5, 1, 1.0), (2, 2, 0.0), (2, 2, -1.0)])
    def test_invalid_dimensions_rejected(self, rows, cols, length):
        with pytest.raises(ConfigurationError):
            build_grid(rows, cols, length)


class TestSelectCentralNode:
    def exhaustive_best(self, topo, users):
        # Independent oracle: scan every node with Manhattan distances.
        best = min(
            range(topo.num_nodes),
            key=lambda n: (
                sum(manhattan(topo, n, u) for u in users),
                max(manhattan(topo, n, u) for u in users),
                n,
            ),
        )
        return best

    def test_3x3_corners(self):
        topo = build_grid(3, 3, 1.0)
        corners = [0, 2, 6, 8]
        assert select_central_node(topo, corners) == 4
        assert self.exhaustive_best(topo, corners) == 4

    def test_8x8_corners(self):
        topo = build_grid(8, 8, 1.0)
        cn = select_central_node(topo, CORNERS_8)
        assert cn == 27
        assert self.exhaustive_best(topo, CORNERS_8) == 27
        # Every node ties on the distance sum, so tie-breaking decides.
        sums = {
            sum(manhattan(topo, n, u) for u in CORNERS_8) for n in range(topo.num_nodes)
        }
        assert sums == {28}

    def test_single_user_is_its_own_centroid(self):
        topo = build_grid(5, 5, 1.0)
        for user in (0, 12, 24):
            assert select_central_node(topo, [user]) == user

    def test_permutation_invariant(self):
        topo = build_grid(6, 4, 1.0)
        users = [0, 3, 21, 10]
        expected = select_central_node(topo, users)
        for perm in itertools.permutations(users):
            assert select_central_node(topo, list(perm)) == expected

    def test_empty_users_rejected(self):
        with pytest.raises(ConfigurationError):
            select_central_node(build_grid(3, 3, 1.0), [])

    def test_invalid_and_duplicate_users_rejected(self):
        topo = build_grid(3, 3, 1.0)
        with pytest.raises(ConfigurationError):
            select_central_node(topo, [0, 99])
        with pytest.raises(ConfigurationError):
            select_central_node(topo, [0, 0])


class TestComputeRoutes:
    def test_8x8_corner_plan(self):
        topo = build_grid(8, 8, 1.0)
        plan = compute_routes(topo, 27, CORNERS_8)
        # Shortest-path lengths must equal the Manhattan distances.
        expected = [manhattan(topo, 27, u) for u in CORNERS_8]
        assert list(plan.segment_counts) == expected == [6, 7, 7, 8]
        assert plan.v_max == 9
        assert sum(plan.segment_counts) == 28
        assert sum(m - 1 for m in plan.segment_counts) == 24
        for a, b in itertools.combinations(plan.routes, 2):
            assert not (route_edges(a) & route_edges(b))

    def test_3x3_center_to_corners(self):
        topo = build_grid(3, 3, 1.0)
        plan = compute_routes(topo, 4, [0, 2, 6, 8])
        assert plan.segment_counts == (2, 2, 2, 2)
        assert plan.v_max == 3

    def test_2x2_tie_break_prefers_lower_id(self):
        topo = build_grid(2, 2, 1.0)
        plan = compute_routes(topo, 0, [3])
        assert plan.routes[0].vertices == (0, 1, 3)
        assert plan.v_max == 3

    @pytest.mark.parametrize(
        "rows,cols,users",
        [(8, 8, CORNERS_8), (5, 9, [0, 8, 36, 44]), (4, 4, [0, 3, 12, 15])],
    )
    def test_routes_are_valid_shortest_paths(self, rows, cols, users):
        topo = build_grid(rows, cols, 1.0)
        cn = select_central_node(topo, users)
        plan = compute_routes(topo, cn, users)
        assert plan.edge_length_km == topo.edge_length_km
        for route, user in zip(plan.routes, users):
            assert route.vertices[0] == cn
            assert route.vertices[-1] == user == route.user
            assert len(set(route.vertices)) == len(route.vertices)
            for a, b in zip(route.vertices, route.vertices[1:]):
                assert manhattan(topo, a, b) == 1
            assert route.num_segments == bfs_distance(topo, cn, user)
        assert plan.v_max == max(len(r.vertices) for r in plan.routes)

    def test_deterministic_across_calls(self):
        topo = build_grid(7, 7, 1.5)
        users = [0, 6, 42, 48]
        first = compute_routes(topo, 24, users)
        for _ in range(3):
            assert compute_routes(topo, 24, users) == first

    def test_user_equal_to_cn_rejected(self):
        topo = build_grid(3, 3, 1.0)
        with pytest.raises(ConfigurationError):
            compute_routes(topo, 4, [4, 0])

    def test_invalid_cn_rejected(self):
        with pytest.raises(ConfigurationError):
            compute_routes(build_grid(3, 3, 1.0), 99, [0])
