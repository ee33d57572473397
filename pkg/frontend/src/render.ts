/** SVG view over the controller state, plus toolbar wiring. */

import type { MindMapController } from "./mindmap.js";

const SVG_NS = "http://www.w3.org/2000/svg";

export interface ViewCallbacks {
  onNodeClick: (key: string) => void;
  onGhostClick: (key: string) => void;
  onDragStart?: (key: string) => void;
  onDragEnd?: (key: string) => void;
}

export class SvgView {
  private readonly linkLayer: SVGGElement;
  private readonly nodeLayer: SVGGElement;
  private readonly groups = new Map<string, SVGGElement>();
  private dragging: string | null = null;

  constructor(private readonly svg: SVGSVGElement,
              private readonly controller: MindMapController,
              private readonly callbacks: ViewCallbacks) {
    this.linkLayer = document.createElementNS(SVG_NS, "g");
    this.nodeLayer = document.createElementNS(SVG_NS, "g");
    svg.appendChild(this.linkLayer);
    svg.appendChild(this.nodeLayer);
    this.bindDrag();
  }

  /** Rebuild the scene graph; called when the node/link sets change. */
  sync(): void {
    this.linkLayer.replaceChildren();
    for (const link of this.controller.links) {
      const a = this.controller.nodes.get(link.a);
      const b = this.controller.nodes.get(link.b);
      if (!a || !b) continue;
      const line = document.createElementNS(SVG_NS, "line");
      line.setAttribute("class",
        a.kind === "ghost" || b.kind === "ghost" ? "link ghost-link" : "link");
      line.dataset.a = link.a;
      line.dataset.b = link.b;
      this.linkLayer.appendChild(line);
    }

    const seen = new Set<string>();
    this.controller.nodes.forEach((node, key) => {
      seen.add(key);
      let group = this.groups.get(key);
      if (!group) {
        group = document.createElementNS(SVG_NS, "g");
        const circle = document.createElementNS(SVG_NS, "circle");
        circle.setAttribute("r", "26");
        const text = document.createElementNS(SVG_NS, "text");
        text.setAttribute("text-anchor", "middle");
        text.setAttribute("dy", "0.33em");
        group.appendChild(circle);
        group.appendChild(text);
        group.addEventListener("click", (event) => {
          event.stopPropagation();
          const current = this.controller.nodes.get(key);
          if (!current) return;
          if (current.kind === "ghost") {
            this.callbacks.onGhostClick(key);
          } else {
            this.callbacks.onNodeClick(key);
          }
        });
        group.addEventListener("pointerdown", () => {
          this.dragging = key;
          const current = this.controller.nodes.get(key);
          if (current) current.pinned = true;
          this.callbacks.onDragStart?.(key);
        });
        this.nodeLayer.appendChild(group);
        this.groups.set(key, group);
      }
      const classes = ["node", node.kind];
      if (node.provenance) classes.push(node.provenance);
      if (key === this.controller.selected) classes.push("selected");
      group.setAttribute("class", classes.join(" "));
      group.setAttribute("data-key", key);
      group.setAttribute("data-label", node.label);
      group.querySelector("text")!.textContent = node.label;
    });
    for (const key of [...this.groups.keys()]) {
      if (!seen.has(key)) {
        this.groups.get(key)!.remove();
        this.groups.delete(key);
      }
    }
    this.positions();
  }

  /** Cheap per-frame update: move existing elements to current coordinates. */
  positions(): void {
    this.controller.nodes.forEach((node, key) => {
      const group = this.groups.get(key);
      if (group) group.setAttribute("transform", `translate(${node.x},${node.y})`);
    });
    for (const line of this.linkLayer.children) {
      const a = this.controller.nodes.get((line as SVGLineElement).dataset.a!);
      const b = this.controller.nodes.get((line as SVGLineElement).dataset.b!);
      if (!a || !b) continue;
      line.setAttribute("x1", String(a.x));
      line.setAttribute("y1", String(a.y));
      line.setAttribute("x2", String(b.x));
      line.setAttribute("y2", String(b.y));
    }
  }

  private bindDrag(): void {
    this.svg.addEventListener("pointermove", (event) => {
      if (!this.dragging) return;
      const node = this.controller.nodes.get(this.dragging);
      if (!node) return;
      const rect = this.svg.getBoundingClientRect();
      node.x = event.clientX - rect.left;
      node.y = event.clientY - rect.top;
      node.vx = 0;
      node.vy = 0;
    });
    const release = () => {
      if (!this.dragging) return;
      const key = this.dragging;
      this.dragging = null;
      const node = this.controller.nodes.get(key);
      if (node) node.pinned = false;
      this.callbacks.onDragEnd?.(key);
    };
    this.svg.addEventListener("pointerup", release);
    this.svg.addEventListener("pointerleave", release);
  }
}
