// Correspondent panel: expansion rows, busiest first; each row expands to a
// sent/received pie and the exchange counts.

import { clear, el, svgEl } from "../dom";
import { PanelStore } from "../state";
import type { CorrespondentRow } from "../types";

function pieSlices(doc: Document, sent: number, received: number): SVGElement {
  const svg = svgEl(doc, "svg", { viewBox: "0 0 32 32", width: 64, height: 64, class: "pie" });
  const total = sent + received;
  if (total === 0) return svg;
  const sentFraction = sent / total;
  if (sentFraction === 1 || sentFraction === 0) {
    svg.append(svgEl(doc, "circle", {
      cx: 16, cy: 16, r: 15,
      class: sentFraction === 1 ? "pie-sent" : "pie-received",
    }));
    return svg;
  }
  // slice arc for "sent", remainder circle underneath for "received"
  const angle = 2 * Math.PI * sentFraction;
  const x = 16 + 15 * Math.sin(angle);
  const y = 16 - 15 * Math.cos(angle);
  const largeArc = sentFraction > 0.5 ? 1 : 0;
  svg.append(svgEl(doc, "circle", { cx: 16, cy: 16, r: 15, class: "pie-received" }));
  svg.append(svgEl(doc, "path", {
    d: `M16,16 L16,1 A15,15 0 ${largeArc} 1 ${x.toFixed(3)},${y.toFixed(3)} Z`,
    class: "pie-sent",
    "data-sent-fraction": sentFraction.toFixed(4),
  }));
  return svg;
}

export class CorrespondentsPanel {
  private doc: Document;
  private list: HTMLElement;
  private expanded = new Set<string>();

  constructor(root: HTMLElement, private store: PanelStore) {
    this.doc = root.ownerDocument;
    this.list = el(this.doc, "div", { class: "correspondent-list" });
    root.append(el(this.doc, "h2", {}, "correspondents"), this.list);
    store.subscribe(() => this.render());
  }

  private row(stat: CorrespondentRow): HTMLElement {
    const doc = this.doc;
    const isOpen = this.expanded.has(stat.address);
    const header = el(doc, "div", {
      class: "correspondent-header",
      onclick: () => {
        if (isOpen) this.expanded.delete(stat.address);
        else this.expanded.add(stat.address);
        this.render();
      },
    },
      el(doc, "span", { class: "address" }, stat.address),
      el(doc, "span", { class: "total" }, `${stat.total} exchanges`),
    );
    const row = el(doc, "div", { class: "correspondent-row", "data-address": stat.address }, header);
    if (isOpen) {
      row.append(
        el(doc, "div", { class: "correspondent-detail" },
          pieSlices(doc, stat.sent, stat.received),
          el(doc, "div", { class: "counts" },
            el(doc, "div", {}, stat.display_name ?? ""),
            el(doc, "div", {}, `sent ${stat.sent}`),
            el(doc, "div", {}, `received ${stat.received}`),
          ),
        ),
      );
    }
    return row;
  }

  render(): void {
    clear(this.list);
    const payload = this.store.caches.correspondents;
    if (!payload || payload.correspondents.length === 0) {
      this.list.append(el(this.doc, "p", { class: "empty-state" }, "no correspondents in the filtered set"));
      return;
    }
    // API order is already total-descending; the top row is the busiest
    for (const stat of payload.correspondents) {
      this.list.append(this.row(stat));
    }
  }
}
