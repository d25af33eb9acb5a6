// Timeline panel: a scatter of calendar bins with a zoom slider stepping
// year -> month -> day. Hovering a point reveals the exact count.

import { clear, el, svgEl } from "../dom";
import { PanelStore } from "../state";
import type { Granularity } from "../types";

const LEVELS: Granularity[] = ["year", "month", "day"];
const WIDTH = 560;
const HEIGHT = 180;
const PAD = 28;

export class TimelinePanel {
  private doc: Document;
  private plot: HTMLElement;
  private slider: HTMLInputElement;
  private sliderLabel: HTMLElement;

  constructor(root: HTMLElement, private store: PanelStore) {
    this.doc = root.ownerDocument;
    const doc = this.doc;
    this.plot = el(doc, "div", { class: "timeline-plot" });
    this.slider = el(doc, "input", {
      type: "range", min: 0, max: 2, step: 1, value: 0, class: "zoom-slider",
    });
    this.slider.addEventListener("input", () => {
      void this.store.setGranularity(LEVELS[Number(this.slider.value)]);
    });
    this.sliderLabel = el(doc, "span", { class: "zoom-label" }, "year");
    root.append(
      el(doc, "div", { class: "panel-head" },
        el(doc, "h2", {}, "timeline"),
        el(doc, "label", { class: "zoom" }, "zoom ", this.slider, this.sliderLabel),
      ),
      this.plot,
    );
    store.subscribe(() => this.render());
  }

  render(): void {
    clear(this.plot);
    const payload = this.store.caches.timeline;
    if (!payload) return;
    this.slider.value = String(LEVELS.indexOf(payload.granularity));
    this.sliderLabel.textContent = payload.granularity;
    const bins = payload.bins;
    if (bins.length === 0) {
      this.plot.append(el(this.doc, "p", { class: "empty-state" }, "no dated emails match"));
      return;
    }
    const doc = this.doc;
    const svg = svgEl(doc, "svg", {
      viewBox: `0 0 ${WIDTH} ${HEIGHT}`, class: "timeline-svg", width: WIDTH, height: HEIGHT,
    });
    const maxCount = Math.max(...bins.map((b) => b.count));
    const step = (WIDTH - 2 * PAD) / Math.max(1, bins.length - 1);
    svg.append(svgEl(doc, "line", {
      x1: PAD, y1: HEIGHT - PAD, x2: WIDTH - PAD, y2: HEIGHT - PAD, class: "axis",
    }));
    bins.forEach((bin, i) => {
      const x = bins.length === 1 ? WIDTH / 2 : PAD + i * step;
      const y = HEIGHT - PAD - ((HEIGHT - 2 * PAD) * bin.count) / maxCount;
      const dot = svgEl(doc, "circle", {
        cx: x.toFixed(1), cy: y.toFixed(1), r: 4,
        class: "time-dot", "data-bucket": bin.bucket, "data-count": bin.count,
      });
      dot.append(svgEl(doc, "title", {}, `${bin.bucket}: ${bin.count} emails`));
      svg.append(dot);
    });
    // sparse x labels: first, middle, last
    for (const i of new Set([0, Math.floor((bins.length - 1) / 2), bins.length - 1])) {
      const x = bins.length === 1 ? WIDTH / 2 : PAD + i * step;
      svg.append(svgEl(doc, "text", {
        x: x.toFixed(1), y: HEIGHT - 8, class: "tick-label", "text-anchor": "middle",
      }, bins[i].bucket));
    }
    this.plot.append(svg);
  }
}
