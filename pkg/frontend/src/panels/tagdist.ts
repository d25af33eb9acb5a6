// Tag distribution panel: a color-varying histogram of how many terms
// carry each tag, with tooltips; re-rendered from the server after every
// tag assignment.

import { schemeTableau10 } from "d3-scale-chromatic";

import { clear, el, svgEl } from "../dom";
import { PanelStore } from "../state";

const WIDTH = 420;
const BAR = 26;

export class TagDistributionPanel {
  private doc: Document;
  private chart: HTMLElement;

  constructor(root: HTMLElement, private store: PanelStore) {
    this.doc = root.ownerDocument;
    this.chart = el(this.doc, "div", { class: "tagdist-chart" });
    root.append(el(this.doc, "h2", {}, "tag distribution"), this.chart);
    store.subscribe(() => this.render());
  }

  render(): void {
    clear(this.chart);
    const payload = this.store.caches.tagDistribution;
    if (!payload || payload.tags.length === 0) {
      this.chart.append(el(this.doc, "p", { class: "empty-state" }, "no tags assigned yet"));
      return;
    }
    const doc = this.doc;
    const maxCount = payload.tags[0]?.count || 1;
    const svg = svgEl(doc, "svg", {
      viewBox: `0 0 ${WIDTH} ${payload.tags.length * BAR}`,
      width: WIDTH,
      height: payload.tags.length * BAR,
      class: "tagdist-svg",
    });
    payload.tags.forEach((row, i) => {
      const width = Math.max(4, (row.count / maxCount) * (WIDTH - 120));
      const bar = svgEl(doc, "rect", {
        x: 100, y: i * BAR + 4, width: width.toFixed(1), height: BAR - 8,
        fill: schemeTableau10[i % schemeTableau10.length],
        class: "tag-bar", "data-tag": row.tag, "data-count": row.count,
      });
      bar.append(svgEl(doc, "title", {}, `${row.tag}: ${row.count} terms`));
      svg.append(bar);
      svg.append(svgEl(doc, "text", {
        x: 94, y: i * BAR + BAR / 2 + 4, "text-anchor": "end", class: "tag-name",
      }, row.tag));
      svg.append(svgEl(doc, "text", {
        x: 104 + width, y: i * BAR + BAR / 2 + 4, class: "tag-count",
      }, String(row.count)));
    });
    this.chart.append(svg);
  }
}
