"""Static relation maps: neighborhood graphs and stress-minimizing layout.

Positions are computed with the Kamada-Kawai scheme: desired pairwise
distances l_ij = L * d_ij come from graph-theoretic (hop) distances,
spring strengths are k_ij = K / d_ij^2, and the stress energy

    E = sum_{i<j} k_ij * (||p_i - p_j|| - l_ij)^2 / 2

is minimized one node at a time: repeatedly pick the node whose energy
gradient is largest and solve its 2-D subproblem by Newton-Raphson.
Initialization is a circle in entity-id order, so layouts are
deterministic with no RNG.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, replace
from typing import Mapping, Sequence

import numpy as np

from .linker import associated, relation_edges
from .model import EntityId
from .store import OccurrenceIndex

_MAX_INNER_STEPS = 50
_MAX_HALVINGS = 40
_COINCIDENT = 1e-12


class DisconnectedGraphError(ValueError):
    """Layout requires a connected graph."""


@dataclass(frozen=True)
class LayoutNode:
    entity: EntityId
    label: str
    pos: tuple[float, float] | None = None


@dataclass(frozen=True)
class LayoutGraph:
    """A relation neighborhood with desired-length and strength matrices.

    Matrix rows follow the order of `nodes`. Edges are (a, b, weight)
    with a < b.
    """

    nodes: tuple[LayoutNode, ...]
    edges: tuple[tuple[EntityId, EntityId, float], ...]
    desired_lengths: np.ndarray
    spring_strengths: np.ndarray

    def node_index(self) -> dict[EntityId, int]:
        return {node.entity: i for i, node in enumerate(self.nodes)}

    def positions(self) -> np.ndarray:
        return np.array([node.pos if node.pos else (0.0, 0.0) for node in self.nodes])


@dataclass(frozen=True)
class LayoutResult:
    graph: LayoutGraph
    final_delta: float
    energy: float
    moves: int
    energy_history: tuple[float, ...]


def hop_distances(n: int, edges: Sequence[tuple[int, int]]) -> np.ndarray:
    """All-pairs shortest hop counts by BFS; inf marks disconnection."""
    dist = np.full((n, n), np.inf)
    adjacency: list[list[int]] = [[] for _ in range(n)]
    for a, b in edges:
        adjacency[a].append(b)
        adjacency[b].append(a)
    for start in range(n):
        dist[start, start] = 0.0
        queue = deque([start])
        while queue:
            current = queue.popleft()
            for neighbor in adjacency[current]:
                if math.isinf(dist[start, neighbor]):
                    dist[start, neighbor] = dist[start, current] + 1.0
                    queue.append(neighbor)
    return dist


def build_graph(
    nodes: Sequence[tuple[EntityId, str]],
    edges: Sequence[tuple[EntityId, EntityId, float]],
    edge_length: float | None = None,
    strength: float = 1.0,
) -> LayoutGraph:
    """Assemble a LayoutGraph, computing l_ij and k_ij from hop distances.

    edge_length is the unit length L; by default L = 1/max(d_ij) so the
    graph diameter maps onto a unit display square. Raises
    DisconnectedGraphError when the edge set does not connect all nodes.
    """
    layout_nodes = tuple(LayoutNode(entity, label) for entity, label in nodes)
    index = {node.entity: i for i, node in enumerate(layout_nodes)}
    normalized = tuple(
        (a, b, w) if a < b else (b, a, w) for a, b, w in edges
    )
    hops = hop_distances(len(layout_nodes), [(index[a], index[b]) for a, b, _ in normalized])
    if np.isinf(hops).any():
        raise DisconnectedGraphError("graph is not connected")

    n = len(layout_nodes)
    max_hop = float(hops.max()) if n > 1 else 1.0
    unit = edge_length if edge_length is not None else (1.0 / max_hop if max_hop else 1.0)
    lengths = hops * unit
    with np.errstate(divide="ignore"):
        strengths = strength / np.square(hops)
    np.fill_diagonal(strengths, 0.0)
    return LayoutGraph(
        nodes=layout_nodes,
        edges=tuple(sorted(normalized, key=lambda e: (e[0], e[1]))),
        desired_lengths=lengths,
        spring_strengths=strengths,
    )


def neighborhood_graph(
    index: OccurrenceIndex,
    subject: EntityId,
    n: int,
    labels: Mapping[EntityId, str] | None = None,
    edge_length: float | None = None,
) -> LayoutGraph:
    """Subject plus its top-n associated partners, with every co-occurring
    pair among the included nodes as a weighted edge. Positions unset."""
    partners = [p for p, _ in associated(index, subject, n).entries]
    members = sorted({subject, *partners})

    def label(entity: EntityId) -> str:
        if labels is not None and entity in labels:
            return labels[entity]
        return str(entity)

    edges = [
        (e.a, e.b, e.weight) for e in relation_edges(index, subject, partners)
    ]
    return build_graph([(m, label(m)) for m in members], edges, edge_length=edge_length)


def stress_energy(positions: np.ndarray, graph: LayoutGraph) -> float:
    """Total stress of a coordinate assignment (rows follow graph.nodes)."""
    total = 0.0
    n = len(graph.nodes)
    for i in range(n):
        for j in range(i + 1, n):
            d = float(np.hypot(*(positions[i] - positions[j])))
            total += graph.spring_strengths[i, j] * (d - graph.desired_lengths[i, j]) ** 2 / 2.0
    return total


def kamada_kawai_layout(
    graph: LayoutGraph,
    epsilon: float = 1e-4,
    max_iters: int | None = None,
) -> LayoutResult:
    """Minimize stress by node-at-a-time Newton-Raphson.

    Iterates until the largest per-node gradient magnitude drops below
    epsilon or max_iters node moves elapse (default 100 * |nodes|).
    Every accepted move lowers (or keeps) the tracked energy; a Newton
    step that would raise it falls back to halved gradient steps.
    """
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    n = len(graph.nodes)
    if n and np.isinf(graph.desired_lengths).any():
        raise DisconnectedGraphError("graph is not connected")
    if max_iters is None:
        max_iters = 100 * max(n, 1)

    pos = _initial_positions(graph)
    if n <= 1:
        return LayoutResult(_with_positions(graph, pos), 0.0, 0.0, 0, (0.0,))

    lengths = graph.desired_lengths
    strengths = graph.spring_strengths
    energy = stress_energy(pos, graph)
    history = [energy]
    moves = 0
    while moves < max_iters:
        deltas = [_delta(pos, lengths, strengths, m) for m in range(n)]
        worst = int(np.argmax(deltas))
        if deltas[worst] < epsilon:
            break
        moved, energy = _move_node(pos, lengths, strengths, worst, epsilon, energy)
        moves += 1
        history.append(energy)
        if not moved:
            break
    final_delta = max(_delta(pos, lengths, strengths, m) for m in range(n))
    final_energy = stress_energy(pos, graph)
    return LayoutResult(
        graph=_with_positions(graph, pos),
        final_delta=final_delta,
        energy=final_energy,
        moves=moves,
        energy_history=tuple(history),
    )


def export_dot(graph: LayoutGraph, name: str = "relations") -> str:
    """Undirected DOT rendering with labels, pinned positions, and weights."""
    lines = [f"graph {name} {{"]
    for node in sorted(graph.nodes, key=lambda nd: nd.entity):
        attrs = [f'label="{_dot_escape(node.label)}"']
        if node.pos is not None:
            attrs.append(f'pos="{node.pos[0]:.6g},{node.pos[1]:.6g}!"')
        lines.append(f"  {node.entity} [{', '.join(attrs)}];")
    for a, b, weight in sorted(graph.edges):
        lines.append(f"  {a} -- {b} [weight={weight:.6g}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def format_coords(graph: LayoutGraph) -> str:
    """Plain coordinate listing: entity_id, x, y (tab-separated)."""
    rows = []
    for node in sorted(graph.nodes, key=lambda nd: nd.entity):
        x, y = node.pos if node.pos is not None else (0.0, 0.0)
        rows.append(f"{node.entity}\t{x:.6f}\t{y:.6f}")
    return "\n".join(rows) + ("\n" if rows else "")


def _dot_escape(label: str) -> str:
    return label.replace("\\", "\\\\").replace('"', '\\"')


def _initial_positions(graph: LayoutGraph) -> np.ndarray:
    """Nodes on a circle in entity-id order; deterministic, no RNG."""
    n = len(graph.nodes)
    pos = np.zeros((n, 2))
    if n <= 1:
        return pos
    radius = float(graph.desired_lengths.max()) / 2.0 or 1.0
    order = sorted(range(n), key=lambda i: graph.nodes[i].entity)
    for rank, i in enumerate(order):
        angle = 2.0 * math.pi * rank / n
        pos[i] = (radius * math.cos(angle), radius * math.sin(angle))
    return pos


def _with_positions(graph: LayoutGraph, pos: np.ndarray) -> LayoutGraph:
    nodes = tuple(
        replace(node, pos=(float(pos[i][0]), float(pos[i][1])))
        for i, node in enumerate(graph.nodes)
    )
    return replace(graph, nodes=nodes)


def _pair_geometry(pos: np.ndarray, m: int) -> tuple[np.ndarray, np.ndarray]:
    diff = pos[m] - pos
    dist = np.hypot(diff[:, 0], diff[:, 1])
    dist[m] = 1.0  # self row is masked out by zero strength
    return diff, np.maximum(dist, _COINCIDENT)


def _gradient(pos: np.ndarray, lengths: np.ndarray, strengths: np.ndarray, m: int) -> np.ndarray:
    diff, dist = _pair_geometry(pos, m)
    factor = strengths[m] * (1.0 - lengths[m] / dist)
    factor[m] = 0.0
    return factor @ diff


def _delta(pos: np.ndarray, lengths: np.ndarray, strengths: np.ndarray, m: int) -> float:
    gx, gy = _gradient(pos, lengths, strengths, m)
    return math.hypot(gx, gy)


def _node_energy(pos: np.ndarray, lengths: np.ndarray, strengths: np.ndarray, m: int) -> float:
    diff, dist = _pair_geometry(pos, m)
    terms = strengths[m] * np.square(dist - lengths[m]) / 2.0
    terms[m] = 0.0
    return float(terms.sum())


def _move_node(
    pos: np.ndarray,
    lengths: np.ndarray,
    strengths: np.ndarray,
    m: int,
    epsilon: float,
    energy: float,
) -> tuple[bool, float]:
    """Newton-Raphson on node m until its gradient is below epsilon.

    Returns (whether any step was accepted, updated tracked energy).
    Steps that would raise the energy fall back to halved moves along
    the negative gradient; if no step helps, the node stays put.
    """
    _separate_coincident(pos, m)
    moved = False
    for _ in range(_MAX_INNER_STEPS):
        grad = _gradient(pos, lengths, strengths, m)
        if math.hypot(*grad) < epsilon:
            break
        step = _newton_step(pos, lengths, strengths, m, grad)
        before = _node_energy(pos, lengths, strengths, m)
        candidate = pos[m] + step if step is not None else None
        accepted = False
        if candidate is not None:
            after = _trial_energy(pos, lengths, strengths, m, candidate)
            if after <= before:
                pos[m] = candidate
                energy += after - before
                accepted = moved = True
        if not accepted:
            scale = 1.0 / max(float(strengths[m].sum()), 1e-12)
            for _ in range(_MAX_HALVINGS):
                candidate = pos[m] - scale * grad
                after = _trial_energy(pos, lengths, strengths, m, candidate)
                if after < before:
                    pos[m] = candidate
                    energy += after - before
                    accepted = moved = True
                    break
                scale /= 2.0
        if not accepted:
            break
    return moved, energy


def _separate_coincident(pos: np.ndarray, m: int) -> None:
    # Deterministic nudge; coincident points have no usable gradient.
    diff = pos[m] - pos
    dist = np.hypot(diff[:, 0], diff[:, 1])
    dist[m] = 1.0
    while (dist < _COINCIDENT).any():
        pos[m] += ((m + 1) * 1e-9, (m + 1) * 2e-9)
        diff = pos[m] - pos
        dist = np.hypot(diff[:, 0], diff[:, 1])
        dist[m] = 1.0


def _trial_energy(
    pos: np.ndarray, lengths: np.ndarray, strengths: np.ndarray, m: int, candidate: np.ndarray
) -> float:
    saved = pos[m].copy()
    pos[m] = candidate
    value = _node_energy(pos, lengths, strengths, m)
    pos[m] = saved
    return value


def _newton_step(
    pos: np.ndarray,
    lengths: np.ndarray,
    strengths: np.ndarray,
    m: int,
    grad: np.ndarray,
) -> np.ndarray | None:
    diff, dist = _pair_geometry(pos, m)
    cubed = dist**3
    k = strengths[m].copy()
    k[m] = 0.0
    l = lengths[m]
    dxx = float((k * (1.0 - l * np.square(diff[:, 1]) / cubed)).sum())
    dyy = float((k * (1.0 - l * np.square(diff[:, 0]) / cubed)).sum())
    dxy = float((k * l * diff[:, 0] * diff[:, 1] / cubed).sum())
    det = dxx * dyy - dxy * dxy
    if abs(det) < 1e-12:
        return None
    dx = (-grad[0] * dyy + grad[1] * dxy) / det
    dy = (grad[0] * dxy - grad[1] * dxx) / det
    return np.array([dx, dy])
