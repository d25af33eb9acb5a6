// Contact graph modal: force-directed layout with node/edge removal and
// ordered undo. Hovering an edge highlights it and both endpoints.

import {
  forceCenter,
  forceLink,
  forceManyBody,
  forceSimulation,
  type SimulationLinkDatum,
  type SimulationNodeDatum,
} from "d3-force";

import { clear, el, svgEl } from "../dom";
import { PanelStore } from "../state";

interface LayoutNode extends SimulationNodeDatum {
  id: string;
}

interface LayoutEdge extends SimulationLinkDatum<LayoutNode> {
  a: string;
  b: string;
  weight: number;
}

const WIDTH = 640;
const HEIGHT = 420;

export class GraphModal {
  private doc: Document;
  private modal: HTMLElement;
  private canvas: HTMLElement;
  private undoButton: HTMLButtonElement;
  private selection: { kind: "node"; address: string } | { kind: "edge"; a: string; b: string } | null = null;
  private selectionLabel: HTMLElement;
  open = false;

  constructor(root: HTMLElement, private store: PanelStore) {
    this.doc = root.ownerDocument;
    const doc = this.doc;

    const openButton = el(doc, "button", {
      class: "open-graph",
      onclick: () => this.toggle(true),
    }, "contact graph");

    this.canvas = el(doc, "div", { class: "graph-canvas" });
    this.undoButton = el(doc, "button", {
      class: "graph-undo",
      onclick: () => void this.store.undoGraphRemoval(),
    }, "undo removal");
    this.selectionLabel = el(doc, "span", { class: "graph-selection" }, "nothing selected");
    const removeButton = el(doc, "button", {
      class: "graph-remove",
      onclick: () => this.removeSelected(),
    }, "remove selected");

    this.modal = el(doc, "div", { class: "graph-modal", hidden: true },
      el(doc, "div", { class: "modal-bar" },
        el(doc, "h2", {}, "contact graph"),
        this.selectionLabel,
        removeButton,
        this.undoButton,
        el(doc, "button", { class: "graph-close", onclick: () => this.toggle(false) }, "close"),
      ),
      this.canvas,
    );
    root.append(openButton, this.modal);
    store.subscribe(() => this.render());
  }

  toggle(open: boolean): void {
    this.open = open;
    if (open) this.modal.removeAttribute("hidden");
    else this.modal.setAttribute("hidden", "");
    this.render();
  }

  private removeSelected(): void {
    const selected = this.selection;
    if (!selected) return;
    this.selection = null;
    if (selected.kind === "node") void this.store.removeGraphNode(selected.address);
    else void this.store.removeGraphEdge(selected.a, selected.b);
  }

  /** Static positions from a synchronously ticked force simulation. */
  private layout(nodes: LayoutNode[], edges: LayoutEdge[]): void {
    const simulation = forceSimulation(nodes)
      .force("charge", forceManyBody().strength(-120))
      .force("center", forceCenter(WIDTH / 2, HEIGHT / 2))
      .force("link", forceLink<LayoutNode, LayoutEdge>(edges).id((n) => n.id).distance(90))
      .stop();
    simulation.tick(120);
  }

  render(): void {
    if (!this.open) return;
    clear(this.canvas);
    const payload = this.store.caches.graph;
    if (!payload) return;
    this.undoButton.disabled = payload.undo_depth === 0;

    const doc = this.doc;
    if (payload.nodes.length === 0) {
      this.canvas.append(el(doc, "p", { class: "empty-state" }, "empty graph"));
      return;
    }
    const nodes: LayoutNode[] = payload.nodes.map((n) => ({ id: n.address }));
    const edges: LayoutEdge[] = payload.edges.map((e) => ({
      a: e.a, b: e.b, weight: e.weight, source: e.a, target: e.b,
    }));
    this.layout(nodes, edges);
    const at = new Map(nodes.map((n) => [n.id, n]));

    const svg = svgEl(doc, "svg", {
      viewBox: `0 0 ${WIDTH} ${HEIGHT}`, width: WIDTH, height: HEIGHT, class: "graph-svg",
    });
    for (const edge of edges) {
      const source = at.get(edge.a)!;
      const target = at.get(edge.b)!;
      const line = svgEl(doc, "line", {
        x1: (source.x ?? 0).toFixed(1), y1: (source.y ?? 0).toFixed(1),
        x2: (target.x ?? 0).toFixed(1), y2: (target.y ?? 0).toFixed(1),
        class: "graph-edge",
        "stroke-width": Math.min(6, edge.weight),
        "data-a": edge.a, "data-b": edge.b,
      });
      line.append(svgEl(doc, "title", {}, `${edge.a} — ${edge.b}: ${edge.weight}`));
      line.addEventListener("mouseenter", () => this.highlight(edge, true));
      line.addEventListener("mouseleave", () => this.highlight(edge, false));
      line.addEventListener("click", () => {
        this.selection = { kind: "edge", a: edge.a, b: edge.b };
        this.selectionLabel.textContent = `edge ${edge.a} — ${edge.b}`;
      });
      svg.append(line);
    }
    for (const node of nodes) {
      const dot = svgEl(doc, "circle", {
        cx: (node.x ?? 0).toFixed(1), cy: (node.y ?? 0).toFixed(1), r: 9,
        class: "graph-node", "data-address": node.id,
      });
      dot.append(svgEl(doc, "title", {}, node.id));
      dot.addEventListener("click", () => {
        this.selection = { kind: "node", address: node.id };
        this.selectionLabel.textContent = `node ${node.id}`;
      });
      svg.append(dot);
      const label = svgEl(doc, "text", {
        x: ((node.x ?? 0) + 11).toFixed(1), y: ((node.y ?? 0) + 4).toFixed(1),
        class: "graph-label",
      }, node.id.split("@")[0]);
      svg.append(label);
    }
    this.canvas.append(svg);
  }

  /** Edge hover: mark the edge and both endpoint nodes. */
  private highlight(edge: LayoutEdge, on: boolean): void {
    for (const element of this.canvas.querySelectorAll(".graph-node")) {
      const address = element.getAttribute("data-address");
      if (address === edge.a || address === edge.b) {
        element.classList.toggle("highlighted", on);
      }
    }
    for (const element of this.canvas.querySelectorAll(".graph-edge")) {
      if (element.getAttribute("data-a") === edge.a && element.getAttribute("data-b") === edge.b) {
        element.classList.toggle("highlighted", on);
      }
    }
  }
}
