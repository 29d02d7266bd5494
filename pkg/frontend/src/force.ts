/**
 * Small incremental spring simulator. New nodes settle around the
 * coordinates the server computed; nodes that already have positions
 * drift only a little, so the canvas stays calm while exploring.
 */

import { VisibleEdge, VisibleNode } from "./state.js";

export interface SimOptions {
  springLength: number;
  springStrength: number;
  repulsion: number;
  damping: number;
}

export const DEFAULT_SIM: SimOptions = {
  springLength: 120,
  springStrength: 0.02,
  repulsion: 2500,
  damping: 0.85,
};

interface Body {
  node: VisibleNode;
  vx: number;
  vy: number;
}

export class ForceSim {
  private bodies = new Map<number, Body>();

  constructor(private readonly options: SimOptions = DEFAULT_SIM) {}

  /** Register nodes, giving fresh ones a deterministic starting point. */
  sync(nodes: Iterable<VisibleNode>): void {
    const seen = new Set<number>();
    for (const node of nodes) {
      seen.add(node.id);
      if (!this.bodies.has(node.id)) {
        if (node.x === null || node.y === null) {
          const angle = (node.id % 360) * (Math.PI / 180);
          node.x = 200 * Math.cos(angle);
          node.y = 200 * Math.sin(angle);
        }
        this.bodies.set(node.id, { node, vx: 0, vy: 0 });
      }
    }
    for (const id of [...this.bodies.keys()]) {
      if (!seen.has(id)) {
        this.bodies.delete(id);
      }
    }
  }

  /** One integration step; returns the largest displacement. */
  step(edges: Iterable<VisibleEdge>): number {
    const { springLength, springStrength, repulsion, damping } = this.options;
    const list = [...this.bodies.values()];
    for (let i = 0; i < list.length; i++) {
      for (let j = i + 1; j < list.length; j++) {
        const p = list[i]!;
        const q = list[j]!;
        const dx = p.node.x! - q.node.x!;
        const dy = p.node.y! - q.node.y!;
        const d2 = Math.max(dx * dx + dy * dy, 1);
        const push = repulsion / d2;
        const d = Math.sqrt(d2);
        p.vx += (dx / d) * push;
        p.vy += (dy / d) * push;
        q.vx -= (dx / d) * push;
        q.vy -= (dy / d) * push;
      }
    }
    for (const edge of edges) {
      const p = this.bodies.get(edge.a);
      const q = this.bodies.get(edge.b);
      if (!p || !q) {
        continue;
      }
      const dx = q.node.x! - p.node.x!;
      const dy = q.node.y! - p.node.y!;
      const d = Math.max(Math.hypot(dx, dy), 1e-3);
      // heavier edges pull a bit tighter
      const rest = springLength / Math.max(Math.sqrt(edge.weight), 0.5);
      const force = springStrength * (d - rest);
      p.vx += (dx / d) * force;
      p.vy += (dy / d) * force;
      q.vx -= (dx / d) * force;
      q.vy -= (dy / d) * force;
    }
    let maxMove = 0;
    for (const body of list) {
      if (body.node.pinned) {
        body.vx = 0;
        body.vy = 0;
        continue;
      }
      body.vx *= damping;
      body.vy *= damping;
      body.node.x! += body.vx;
      body.node.y! += body.vy;
      maxMove = Math.max(maxMove, Math.hypot(body.vx, body.vy));
    }
    return maxMove;
  }
}
