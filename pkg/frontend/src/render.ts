/** SVG rendering of the explorer state. Pure view code: reads state,
 * never mutates it; user intents go back through the callbacks. */

import { ExplorerState } from "./state.js";

export interface RenderCallbacks {
  onExpand(entityId: number): void;
  onHide(entityId: number): void;
  onNavigate(entityId: number): void;
}

const SVG_NS = "http://www.w3.org/2000/svg";

export class GraphView {
  private readonly edgeLayer: SVGGElement;
  private readonly nodeLayer: SVGGElement;

  constructor(
    private readonly svg: SVGSVGElement,
    private readonly callbacks: RenderCallbacks,
  ) {
    this.edgeLayer = document.createElementNS(SVG_NS, "g");
    this.nodeLayer = document.createElementNS(SVG_NS, "g");
    svg.append(this.edgeLayer, this.nodeLayer);
  }

  render(state: ExplorerState): void {
    const scale = this.fitTransform(state);
    this.edgeLayer.replaceChildren();
    this.nodeLayer.replaceChildren();

    for (const edge of state.edges.values()) {
      const a = state.nodes.get(edge.a);
      const b = state.nodes.get(edge.b);
      if (!a || !b) {
        continue;
      }
      const line = document.createElementNS(SVG_NS, "line");
      line.setAttribute("x1", String(scale.x(a.x ?? 0)));
      line.setAttribute("y1", String(scale.y(a.y ?? 0)));
      line.setAttribute("x2", String(scale.x(b.x ?? 0)));
      line.setAttribute("y2", String(scale.y(b.y ?? 0)));
      line.setAttribute("class", "edge");
      line.setAttribute("stroke-width", String(1 + 2 * Math.min(edge.weight, 1)));
      this.edgeLayer.append(line);
    }

    for (const node of state.nodes.values()) {
      const group = document.createElementNS(SVG_NS, "g");
      const classes = ["node"];
      if (node.expanded) {
        classes.push("subject");
      }
      if (state.highlights.has(node.id)) {
        classes.push("shared");
      }
      if (state.focusedId === node.id) {
        classes.push("focused");
      }
      group.setAttribute("class", classes.join(" "));
      group.setAttribute(
        "transform",
        `translate(${scale.x(node.x ?? 0)},${scale.y(node.y ?? 0)})`,
      );

      const circle = document.createElementNS(SVG_NS, "circle");
      circle.setAttribute("r", node.expanded ? "9" : "6");
      const label = document.createElementNS(SVG_NS, "text");
      label.setAttribute("dy", "-12");
      label.textContent = node.label;
      group.append(circle, label);

      group.addEventListener("click", (event) => {
        if (event.shiftKey) {
          this.callbacks.onHide(node.id);
        } else {
          this.callbacks.onExpand(node.id);
        }
      });
      group.addEventListener("dblclick", () => this.callbacks.onNavigate(node.id));
      this.nodeLayer.append(group);
    }
  }

  private fitTransform(state: ExplorerState) {
    const width = this.svg.clientWidth || 800;
    const height = this.svg.clientHeight || 600;
    const xs = [...state.nodes.values()].map((n) => n.x ?? 0);
    const ys = [...state.nodes.values()].map((n) => n.y ?? 0);
    if (xs.length === 0) {
      return { x: (v: number) => v, y: (v: number) => v };
    }
    const pad = 60;
    const minX = Math.min(...xs);
    const maxX = Math.max(...xs);
    const minY = Math.min(...ys);
    const maxY = Math.max(...ys);
    const spanX = Math.max(maxX - minX, 1e-6);
    const spanY = Math.max(maxY - minY, 1e-6);
    const k = Math.min((width - 2 * pad) / spanX, (height - 2 * pad) / spanY, 400);
    return {
      x: (v: number) => pad + (v - minX) * k + (width - 2 * pad - spanX * k) / 2,
      y: (v: number) => pad + (v - minY) * k + (height - 2 * pad - spanY * k) / 2,
    };
  }
}
