// Application entry: wire the store to one instance of each panel.

import { ApiClient } from "./api";
import { PanelStore } from "./state";
import { ClusterPanel } from "./panels/clusters";
import { CommunicationsPanel } from "./panels/communications";
import { CorrespondentsPanel } from "./panels/correspondents";
import { EntitiesPanel } from "./panels/entities";
import { GraphModal } from "./panels/graph";
import { QueryPanel } from "./panels/query";
import { TagDistributionPanel } from "./panels/tagdist";
import { TimelinePanel } from "./panels/timeline";
import { clear, el } from "./dom";

export interface App {
  store: PanelStore;
  panels: {
    query: QueryPanel;
    correspondents: CorrespondentsPanel;
    communications: CommunicationsPanel;
    timeline: TimelinePanel;
    entities: EntitiesPanel;
    graph: GraphModal;
    clusters: ClusterPanel;
    tagDistribution: TagDistributionPanel;
  };
}

/** Build the whole UI into `root`; exported so tests can mount it off-screen. */
export function mountApp(root: HTMLElement, apiBase: string, fetchFn?: typeof fetch): App {
  const doc = root.ownerDocument;
  const store = new PanelStore(new ApiClient(apiBase, fetchFn));

  const datasetBar = el(doc, "div", { id: "dataset-bar" });
  const grid = el(doc, "div", { id: "panel-grid" });
  const sections: Record<string, HTMLElement> = {};
  for (const name of [
    "query", "correspondents", "communications", "timeline",
    "entities", "graph", "clusters", "tagdist",
  ]) {
    sections[name] = el(doc, "section", { id: `panel-${name}`, class: "panel" });
    grid.append(sections[name]);
  }
  root.append(datasetBar, grid);

  const panels = {
    query: new QueryPanel(sections.query, store),
    correspondents: new CorrespondentsPanel(sections.correspondents, store),
    communications: new CommunicationsPanel(sections.communications, store),
    timeline: new TimelinePanel(sections.timeline, store),
    entities: new EntitiesPanel(sections.entities, store),
    graph: new GraphModal(sections.graph, store),
    clusters: new ClusterPanel(sections.clusters, store),
    tagDistribution: new TagDistributionPanel(sections.tagdist, store),
  };

  const renderDatasets = () => {
    clear(datasetBar);
    datasetBar.append(el(doc, "span", { class: "bar-label" }, "datasets:"));
    for (const handle of store.datasets) {
      datasetBar.append(
        el(doc, "button", {
          class: "dataset-chip",
          "data-dataset-id": handle.dataset_id,
          onclick: () => void store.openSession(handle.dataset_id),
        }, `${handle.label} (${handle.record_count})`),
      );
    }
  };
  store.subscribe(renderDatasets);
  void store.refreshDatasets();
  return { store, panels };
}

declare global {
  interface Window {
    __MAILSCOPE_API__?: string;
  }
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  const base =
    window.__MAILSCOPE_API__ ??
    new URLSearchParams(window.location.search).get("api") ??
    "http://127.0.0.1:8000";
  mountApp(document.getElementById("app")!, base);
}
