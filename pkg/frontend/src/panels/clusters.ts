// Cluster panel: a packed layout of the matched emails. Before clustering
// every email is one bubble; after picking k and hitting clusterize the
// heads are shown, and clicking a head reveals that cluster's members.

import { hierarchy, pack } from "d3-hierarchy";

import { clear, el, svgEl } from "../dom";
import { PanelStore } from "../state";

const SIZE = 420;

interface Bubble {
  name: string;
  cluster?: number;
  isHead?: boolean;
  children?: Bubble[];
  value?: number;
}

export class ClusterPanel {
  private doc: Document;
  private canvas: HTMLElement;
  private memberBox: HTMLElement;
  private kSelect: HTMLSelectElement;

  constructor(root: HTMLElement, private store: PanelStore) {
    this.doc = root.ownerDocument;
    const doc = this.doc;
    this.kSelect = el(doc, "select", { class: "k-select" });
    const clusterizeButton = el(doc, "button", {
      class: "clusterize",
      onclick: () => void this.store.clusterize(Number(this.kSelect.value)),
    }, "clusterize");
    this.canvas = el(doc, "div", { class: "cluster-canvas" });
    this.memberBox = el(doc, "div", { class: "cluster-members" });
    root.append(
      el(doc, "div", { class: "panel-head" },
        el(doc, "h2", {}, "clusters"),
        el(doc, "label", {}, "k ", this.kSelect),
        clusterizeButton,
      ),
      this.canvas,
      this.memberBox,
    );
    store.subscribe(() => this.render());
  }

  private packLayout(tree: Bubble): SVGElement {
    const doc = this.doc;
    const rootNode = hierarchy<Bubble>(tree)
      .sum((d) => d.value ?? 0)
      .sort((x, y) => (x.data.name < y.data.name ? -1 : 1));
    pack<Bubble>().size([SIZE, SIZE]).padding(4)(rootNode);
    const svg = svgEl(doc, "svg", {
      viewBox: `0 0 ${SIZE} ${SIZE}`, width: SIZE, height: SIZE, class: "cluster-svg",
    });
    for (const node of rootNode.descendants()) {
      if (!node.parent) continue; // skip the invisible outer circle
      const { x, y, r } = node as unknown as { x: number; y: number; r: number };
      const data = node.data;
      const isLeaf = !node.children;
      const circle = svgEl(doc, "circle", {
        cx: x.toFixed(1), cy: y.toFixed(1), r: r.toFixed(1),
        class: isLeaf
          ? `doc-bubble${data.isHead ? " head" : ""}`
          : "cluster-ring",
        "data-doc-id": isLeaf ? data.name : "",
        "data-cluster": data.cluster ?? "",
      });
      circle.append(svgEl(doc, "title", {}, isLeaf ? data.name : `cluster ${data.cluster}`));
      if (isLeaf && data.isHead && data.cluster !== undefined) {
        const cluster = data.cluster;
        circle.addEventListener("click", () => void this.showMembers(cluster));
      }
      svg.append(circle);
    }
    return svg;
  }

  private async showMembers(index: number): Promise<void> {
    const payload = await this.store.loadClusterMembers(index);
    clear(this.memberBox);
    const doc = this.doc;
    this.memberBox.append(
      el(doc, "h3", {}, `cluster ${index} members (head ${payload.head ?? "-"})`),
      el(doc, "ul", { class: "member-list" },
        ...payload.members.map((m) => el(doc, "li", { "data-doc-id": m }, m)),
      ),
    );
  }

  render(): void {
    clear(this.canvas);
    const payload = this.store.caches.cluster;
    const matchCount = this.store.session?.match_count ?? 0;
    clear(this.kSelect);
    for (let k = 1; k <= Math.min(10, Math.max(1, matchCount)); k++) {
      this.kSelect.append(el(this.doc, "option", { value: k }, String(k)));
    }
    if (!payload) return;
    if (!payload.clustered) {
      // packed layout of every matched email, one bubble each
      const docs = payload.doc_ids ?? [];
      if (docs.length === 0) {
        this.canvas.append(el(this.doc, "p", { class: "empty-state" }, "nothing to cluster"));
        return;
      }
      this.canvas.append(this.packLayout({
        name: "all",
        children: docs.map((d) => ({ name: d, value: 1 })),
      }));
      return;
    }
    const clusters = payload.clusters ?? [];
    this.canvas.append(this.packLayout({
      name: "all",
      children: clusters.filter((c) => c.size > 0).map((c) => ({
        name: `cluster-${c.index}`,
        cluster: c.index,
        children: [
          // the head bubble is rendered per cluster; members load on click
          { name: c.head ?? "?", value: Math.max(1, c.size), isHead: true, cluster: c.index },
        ],
      })),
    }));
    this.canvas.append(
      el(this.doc, "p", { class: "cluster-note" },
        `k=${payload.k}, objective ${payload.objective?.toFixed(4)} ` +
        `(${payload.iterations} iterations${payload.converged ? "" : ", not converged"})`),
    );
  }
}
