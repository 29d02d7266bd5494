/**
 * Explorer state machine.
 *
 * Nodes the user added or expanded are "subjects"; the highlight set is
 * exactly the nodes adjacent (through visible edges) to two or more
 * subjects. The set is maintained incrementally under every operation
 * and can be recomputed from scratch for verification.
 *
 * All graph data arrives through the ExplorerApi; operations fetch
 * before they mutate, so a failed request leaves the state untouched.
 */

import { ExplorerApi, GraphResponse } from "./api.js";

export interface VisibleNode {
  id: number;
  label: string;
  /** true once the user added this entity or expanded its relations */
  expanded: boolean;
  x: number | null;
  y: number | null;
  pinned: boolean;
}

export interface VisibleEdge {
  a: number;
  b: number;
  weight: number;
}

const DEFAULT_NEIGHBORS = 10;

function edgeKey(a: number, b: number): string {
  return a < b ? `${a}-${b}` : `${b}-${a}`;
}

export class ExplorerState {
  readonly nodes = new Map<number, VisibleNode>();
  readonly edges = new Map<string, VisibleEdge>();
  /** entity -> ids of visible neighbors */
  private readonly adjacency = new Map<number, Set<number>>();
  /** entity -> number of expanded neighbors; drives the highlight set */
  private readonly subjectNeighbors = new Map<number, number>();
  private readonly highlightSet = new Set<number>();
  /** last entity the user asked for while it was already on the canvas */
  focusedId: number | null = null;

  constructor(private readonly api: ExplorerApi) {}

  get highlights(): ReadonlySet<number> {
    return this.highlightSet;
  }

  /**
   * Add one entity to the canvas as a new subject. Edges to already
   * visible entities come from its neighborhood; no new neighbor nodes
   * appear. Adding a visible entity only focuses it.
   */
  async addEntity(entityId: number, n = DEFAULT_NEIGHBORS): Promise<void> {
    if (this.nodes.has(entityId)) {
      this.focusedId = entityId;
      return;
    }
    const graph = await this.api.graph(entityId, n);
    this.insertNode(entityId, this.labelOf(graph, entityId), true);
    this.insertVisibleEdges(graph);
    this.adoptPositions(graph);
    this.focusedId = entityId;
  }

  /** Expand a visible entity: its top-n partners join the canvas. */
  async expand(entityId: number, n = DEFAULT_NEIGHBORS): Promise<void> {
    const node = this.nodes.get(entityId);
    if (!node) {
      throw new Error(`entity ${entityId} is not visible`);
    }
    const graph = await this.api.graph(entityId, n);
    for (const gnode of graph.nodes) {
      if (!this.nodes.has(gnode.id)) {
        this.insertNode(gnode.id, gnode.label, false);
      }
    }
    this.markExpanded(entityId);
    this.insertVisibleEdges(graph);
    this.adoptPositions(graph);
  }

  /**
   * Remove a node and its edges; neighbors left with no edges at all
   * disappear too, unless they are subjects in their own right.
   */
  hide(entityId: number): void {
    if (!this.nodes.has(entityId)) {
      return;
    }
    this.removeNode(entityId);
    let pruned = true;
    while (pruned) {
      pruned = false;
      for (const [id, neighbors] of this.adjacency) {
        const node = this.nodes.get(id);
        if (node && !node.expanded && neighbors.size === 0) {
          this.removeNode(id);
          pruned = true;
        }
      }
    }
    if (this.focusedId !== null && !this.nodes.has(this.focusedId)) {
      this.focusedId = null;
    }
  }

  /** Link to the person page of the service. */
  navigateOut(entityId: number): string {
    return this.api.entityUrl(entityId);
  }

  /** Independent recomputation of the highlight set, for verification. */
  recomputeHighlights(): Set<number> {
    const counts = new Map<number, number>();
    for (const edge of this.edges.values()) {
      if (this.nodes.get(edge.a)?.expanded) {
        counts.set(edge.b, (counts.get(edge.b) ?? 0) + 1);
      }
      if (this.nodes.get(edge.b)?.expanded) {
        counts.set(edge.a, (counts.get(edge.a) ?? 0) + 1);
      }
    }
    const set = new Set<number>();
    for (const [id, count] of counts) {
      if (count >= 2) {
        set.add(id);
      }
    }
    return set;
  }

  // -- internals ------------------------------------------------------------

  private labelOf(graph: GraphResponse, entityId: number): string {
    return graph.nodes.find((n) => n.id === entityId)?.label ?? String(entityId);
  }

  private insertNode(id: number, label: string, expanded: boolean): void {
    this.nodes.set(id, { id, label, expanded: false, x: null, y: null, pinned: false });
    this.adjacency.set(id, new Set());
    this.subjectNeighbors.set(id, 0);
    if (expanded) {
      this.markExpanded(id);
    }
  }

  private markExpanded(id: number): void {
    const node = this.nodes.get(id);
    if (!node || node.expanded) {
      return;
    }
    node.expanded = true;
    for (const neighbor of this.adjacency.get(id) ?? []) {
      this.bumpSubjectCount(neighbor, +1);
    }
  }

  private insertVisibleEdges(graph: GraphResponse): void {
    for (const edge of graph.edges) {
      if (this.nodes.has(edge.a) && this.nodes.has(edge.b)) {
        this.insertEdge(edge.a, edge.b, edge.weight);
      }
    }
  }

  private insertEdge(a: number, b: number, weight: number): void {
    const key = edgeKey(a, b);
    if (this.edges.has(key) || a === b) {
      return;
    }
    this.edges.set(key, { a: Math.min(a, b), b: Math.max(a, b), weight });
    this.adjacency.get(a)!.add(b);
    this.adjacency.get(b)!.add(a);
    if (this.nodes.get(a)!.expanded) {
      this.bumpSubjectCount(b, +1);
    }
    if (this.nodes.get(b)!.expanded) {
      this.bumpSubjectCount(a, +1);
    }
  }

  private removeNode(id: number): void {
    const node = this.nodes.get(id);
    if (!node) {
      return;
    }
    for (const neighbor of [...(this.adjacency.get(id) ?? [])]) {
      this.removeEdge(id, neighbor);
    }
    this.nodes.delete(id);
    this.adjacency.delete(id);
    this.subjectNeighbors.delete(id);
    this.highlightSet.delete(id);
  }

  private removeEdge(a: number, b: number): void {
    const key = edgeKey(a, b);
    if (!this.edges.delete(key)) {
      return;
    }
    this.adjacency.get(a)?.delete(b);
    this.adjacency.get(b)?.delete(a);
    if (this.nodes.get(a)?.expanded) {
      this.bumpSubjectCount(b, -1);
    }
    if (this.nodes.get(b)?.expanded) {
      this.bumpSubjectCount(a, -1);
    }
  }

  private bumpSubjectCount(id: number, delta: number): void {
    if (!this.nodes.has(id)) {
      return;
    }
    const next = (this.subjectNeighbors.get(id) ?? 0) + delta;
    this.subjectNeighbors.set(id, next);
    if (next >= 2) {
      this.highlightSet.add(id);
    } else {
      this.highlightSet.delete(id);
    }
  }

  /** Seed layout positions from the server for nodes that have none yet. */
  private adoptPositions(graph: GraphResponse): void {
    for (const gnode of graph.nodes) {
      const node = this.nodes.get(gnode.id);
      if (node && node.x === null && gnode.x !== null && gnode.y !== null) {
        node.x = gnode.x;
        node.y = gnode.y;
      }
    }
  }
}
