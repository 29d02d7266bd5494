from __future__ import annotations

import math

import numpy as np
import pytest

from namegraph.layout import (
    DisconnectedGraphError,
    LayoutGraph,
    build_graph,
    export_dot,
    format_coords,
    hop_distances,
    kamada_kawai_layout,
    neighborhood_graph,
    stress_energy,
)
from namegraph.store import OccurrenceIndex

from oracles import solana_style_pairs


def positions(result):
    return {node.entity: np.array(node.pos) for node in result.graph.nodes}


def dist(p, a, b):
    return float(np.linalg.norm(p[a] - p[b]))


def test_two_nodes_settle_at_edge_length():
    graph = build_graph([(1, "a"), (2, "b")], [(1, 2, 1.0)], edge_length=1.0)
    result = kamada_kawai_layout(graph, epsilon=1e-8)
    p = positions(result)
    assert dist(p, 1, 2) == pytest.approx(1.0, abs=1e-6)
    assert result.energy < 1e-10
    assert result.final_delta < 1e-8


def test_triangle_becomes_equilateral():
    graph = build_graph(
        [(1, "a"), (2, "b"), (3, "c")],
        [(1, 2, 1.0), (2, 3, 1.0), (1, 3, 1.0)],
        edge_length=1.0,
    )
    result = kamada_kawai_layout(graph, epsilon=1e-8)
    p = positions(result)
    for a, b in [(1, 2), (2, 3), (1, 3)]:
        assert dist(p, a, b) == pytest.approx(1.0, abs=1e-4)


def test_path_straightens_out():
    graph = build_graph(
        [(1, "a"), (2, "b"), (3, "c")], [(1, 2, 1.0), (2, 3, 1.0)], edge_length=1.0
    )
    result = kamada_kawai_layout(graph, epsilon=1e-8)
    p = positions(result)
    assert graph.desired_lengths[graph.node_index()[1], graph.node_index()[3]] == 2.0
    assert dist(p, 1, 3) == pytest.approx(2.0, abs=1e-3)
    assert result.energy < 1e-9


def test_matches_independent_minimizer():
    # scipy minimizes the identical stress function from the identical start
    from scipy.optimize import minimize

    graph = build_graph(
        [(1, "a"), (2, "b"), (3, "c"), (4, "d")],
        [(1, 2, 1.0), (2, 3, 1.0), (3, 4, 1.0), (1, 4, 1.0)],
        edge_length=1.0,
    )
    result = kamada_kawai_layout(graph, epsilon=1e-10, max_iters=10_000)

    lengths = graph.desired_lengths
    strengths = graph.spring_strengths
    n = len(graph.nodes)

    def objective(flat):
        pts = flat.reshape(n, 2)
        total = 0.0
        for i in range(n):
            for j in range(i + 1, n):
                d = math.dist(pts[i], pts[j])
                total += strengths[i, j] * (d - lengths[i, j]) ** 2 / 2.0
        return total

    start = np.array(
        [
            (0.5 * lengths.max() * math.cos(2 * math.pi * k / n),
             0.5 * lengths.max() * math.sin(2 * math.pi * k / n))
            for k in range(n)
        ]
    ).ravel()
    reference = minimize(objective, start, method="BFGS", tol=1e-14)
    assert result.energy <= reference.fun + 1e-9


def test_energy_history_non_increasing():
    graph = build_graph(
        [(1, "a"), (2, "b"), (3, "c"), (4, "d"), (5, "e")],
        [(1, 2, 1.0), (1, 3, 1.0), (1, 4, 1.0), (1, 5, 1.0), (2, 3, 1.0)],
        edge_length=1.0,
    )
    result = kamada_kawai_layout(graph, epsilon=1e-8)
    history = result.energy_history
    assert all(later <= earlier for earlier, later in zip(history, history[1:]))


def test_energy_invariant_under_rigid_transform():
    graph = build_graph(
        [(1, "a"), (2, "b"), (3, "c")], [(1, 2, 1.0), (2, 3, 1.0)], edge_length=1.0
    )
    result = kamada_kawai_layout(graph)
    pts = np.array([node.pos for node in result.graph.nodes])
    energy = stress_energy(pts, graph)
    theta = 0.7
    rotation = np.array(
        [[math.cos(theta), -math.sin(theta)], [math.sin(theta), math.cos(theta)]]
    )
    moved = pts @ rotation.T + np.array([3.5, -1.25])
    assert stress_energy(moved, graph) == pytest.approx(energy, abs=1e-9)


def test_layout_is_deterministic():
    def run():
        graph = build_graph(
            [(1, "a"), (2, "b"), (3, "c"), (4, "d")],
            [(1, 2, 1.0), (2, 3, 1.0), (3, 4, 1.0)],
            edge_length=1.0,
        )
        return kamada_kawai_layout(graph)

    first, second = run(), run()
    for a, b in zip(first.graph.nodes, second.graph.nodes):
        assert a.pos == b.pos  # bit-for-bit


def test_single_node_layout():
    graph = build_graph([(1, "only")], [])
    result = kamada_kawai_layout(graph)
    assert result.graph.nodes[0].pos == (0.0, 0.0)
    assert result.final_delta == 0.0


def test_disconnected_graph_rejected():
    with pytest.raises(DisconnectedGraphError):
        build_graph([(1, "a"), (2, "b"), (3, "c")], [(1, 2, 1.0)])
    # direct construction is caught by the layout itself
    graph = LayoutGraph(
        nodes=build_graph([(1, "a"), (2, "b")], [(1, 2, 1.0)]).nodes,
        edges=(),
        desired_lengths=np.array([[0.0, np.inf], [np.inf, 0.0]]),
        spring_strengths=np.zeros((2, 2)),
    )
    with pytest.raises(DisconnectedGraphError):
        kamada_kawai_layout(graph)


def test_max_iters_budget_respected():
    graph = build_graph(
        [(1, "a"), (2, "b"), (3, "c")],
        [(1, 2, 1.0), (2, 3, 1.0), (1, 3, 1.0)],
        edge_length=1.0,
    )
    result = kamada_kawai_layout(graph, epsilon=1e-15, max_iters=1)
    assert result.moves <= 1


def test_hop_distances():
    d = hop_distances(3, [(0, 1), (1, 2)])
    assert d[0, 2] == 2.0
    assert math.isinf(hop_distances(2, [])[0, 1])


# -- neighborhood graphs -----------------------------------------------------


def test_neighborhood_star():
    # two partners that never co-occur with each other
    index = OccurrenceIndex.build([(1, "c1"), (2, "c1"), (1, "c2"), (3, "c2")])
    graph = neighborhood_graph(index, 1, 2)
    assert len(graph.nodes) == 3
    assert len(graph.edges) == 2
    assert {(a, b) for a, b, _ in graph.edges} == {(1, 2), (1, 3)}


def test_neighborhood_isolated_subject():
    index = OccurrenceIndex.build([(1, "c1")])
    graph = neighborhood_graph(index, 1, 5)
    assert len(graph.nodes) == 1
    assert graph.edges == ()


def test_neighborhood_nineteen_nodes():
    # hub-shaped corpus: subject shares a distinct cluster with 18 partners
    pairs = []
    for i in range(18):
        pairs += [(1, f"c{i}"), (2 + i, f"c{i}")]
    index = OccurrenceIndex.build(pairs)
    graph = neighborhood_graph(index, 1, 18)
    assert len(graph.nodes) == 19
    dot = export_dot(graph)
    assert dot.count("label=") == 19
    assert dot.count(" -- ") == 18


def test_neighborhood_includes_partner_partner_edges():
    index = OccurrenceIndex.build(
        [(1, "c1"), (2, "c1"), (1, "c2"), (3, "c2"), (2, "c3"), (3, "c3")]
    )
    graph = neighborhood_graph(index, 1, 2)
    assert {(a, b) for a, b, _ in graph.edges} == {(1, 2), (1, 3), (2, 3)}


def test_neighborhood_unit_square_scaling():
    pairs = solana_style_pairs()
    index = OccurrenceIndex.build(pairs)
    graph = neighborhood_graph(index, 1, 2)
    # farthest pair maps to desired length 1 by the default scaling
    assert graph.desired_lengths.max() == pytest.approx(1.0)


# -- exports ------------------------------------------------------------------


def test_export_dot_two_nodes():
    graph = build_graph([(1, "Alpha"), (2, "Beta")], [(1, 2, 0.5)], edge_length=1.0)
    dot = export_dot(graph)
    assert dot.count(" -- ") == 1
    assert '1 [label="Alpha"];' in dot
    assert "1 -- 2 [weight=0.5];" in dot


def test_export_dot_empty_graph():
    graph = build_graph([], [])
    assert export_dot(graph) == "graph relations {\n}\n"


def test_export_dot_escapes_quotes():
    graph = build_graph([(1, 'Nick "Q" Example')], [])
    assert '\\"Q\\"' in export_dot(graph)


def test_export_dot_positions_pinned():
    graph = build_graph([(1, "a"), (2, "b")], [(1, 2, 1.0)], edge_length=1.0)
    result = kamada_kawai_layout(graph)
    dot = export_dot(result.graph)
    assert 'pos="' in dot and '!"' in dot


def test_format_coords():
    graph = build_graph([(2, "b"), (1, "a")], [(1, 2, 1.0)], edge_length=1.0)
    result = kamada_kawai_layout(graph)
    lines = format_coords(result.graph).strip().splitlines()
    assert lines[0].startswith("1\t")
    assert lines[1].startswith("2\t")
