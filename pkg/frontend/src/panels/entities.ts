// Entity panel: horizontal bars (width proportional to score, descending
// as served), compact tag badges, and a context menu for assigning new or
// existing tags without leaving the panel.

import { clear, el } from "../dom";
import { PanelStore } from "../state";
import type { EntityRow } from "../types";

export class EntitiesPanel {
  private doc: Document;
  private list: HTMLElement;
  private menu: HTMLElement;

  constructor(private root: HTMLElement, private store: PanelStore) {
    this.doc = root.ownerDocument;
    this.list = el(this.doc, "div", { class: "entity-list" });
    this.menu = el(this.doc, "div", { class: "tag-menu", hidden: true });
    root.append(el(this.doc, "h2", {}, "entities"), this.list, this.menu);
    store.subscribe(() => this.render());
  }

  private openMenu(entity: EntityRow, anchor: HTMLElement): void {
    const doc = this.doc;
    clear(this.menu);
    this.menu.removeAttribute("hidden");
    this.menu.setAttribute("data-term", entity.term);
    this.menu.append(el(doc, "div", { class: "tag-menu-title" }, `tag "${entity.term}"`));

    const known = new Set<string>();
    for (const row of this.store.caches.tagDistribution?.tags ?? []) known.add(row.tag);
    for (const existing of [...known].sort()) {
      this.menu.append(
        el(doc, "button", {
          class: "tag-option",
          onclick: () => this.assign(entity.term, existing),
        }, existing),
      );
    }
    const input = el(doc, "input", { class: "tag-new", placeholder: "new tag…" });
    input.addEventListener("keydown", (event) => {
      if ((event as KeyboardEvent).key === "Enter" && input.value.trim()) {
        this.assign(entity.term, input.value.trim());
      }
    });
    this.menu.append(
      input,
      el(doc, "button", {
        class: "tag-apply",
        onclick: () => input.value.trim() && this.assign(entity.term, input.value.trim()),
      }, "apply"),
      el(doc, "button", { class: "tag-cancel", onclick: () => this.closeMenu() }, "cancel"),
    );
    anchor.append(this.menu);
  }

  private closeMenu(): void {
    this.menu.setAttribute("hidden", "");
    this.root.append(this.menu);
  }

  private assign(term: string, tag: string): void {
    this.closeMenu();
    void this.store.assignTag(term, tag);
  }

  render(): void {
    clear(this.list);
    const payload = this.store.caches.entities;
    if (!payload || payload.entities.length === 0) {
      this.list.append(el(this.doc, "p", { class: "empty-state" }, "no distinctive terms to show"));
      return;
    }
    const doc = this.doc;
    const maxScore = payload.entities[0]?.score || 1;
    for (const entity of payload.entities) {
      const width = Math.max(2, Math.round((entity.score / maxScore) * 100));
      const badges = el(doc, "span", { class: "badges" });
      for (const tag of entity.tags) {
        badges.append(el(doc, "span", { class: "badge", "data-tag": tag }, tag));
      }
      const row = el(doc, "div", {
        class: "entity-row",
        "data-term": entity.term,
        "data-score": entity.score.toFixed(6),
      },
        el(doc, "span", { class: "entity-term" }, entity.term),
        el(doc, "div", { class: "bar-track" },
          el(doc, "div", { class: "bar", style: `width:${width}%` }),
        ),
        badges,
      );
      row.addEventListener("contextmenu", (event) => {
        event.preventDefault();
        this.openMenu(entity, row);
      });
      this.list.append(row);
    }
  }
}
