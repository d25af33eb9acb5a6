// Communications panel: the matched emails as a paged expansion list, like
// a mail client. Headers show subject plus datetime when the record has
// one; expanding reveals the plain-text body with sender and recipients.

import { clear, el } from "../dom";
import { PanelStore } from "../state";
import type { RecordJson } from "../types";

export class CommunicationsPanel {
  private doc: Document;
  private list: HTMLElement;
  private pager: HTMLElement;
  private expanded = new Set<string>();

  constructor(root: HTMLElement, private store: PanelStore) {
    this.doc = root.ownerDocument;
    this.list = el(this.doc, "div", { class: "mail-list" });
    this.pager = el(this.doc, "div", { class: "pager" });
    root.append(el(this.doc, "h2", {}, "communications"), this.list, this.pager);
    store.subscribe(() => this.render());
  }

  private item(record: RecordJson): HTMLElement {
    const doc = this.doc;
    const isOpen = this.expanded.has(record.doc_id);
    const headerBits: Array<Node | string> = [
      el(doc, "span", { class: "subject" }, record.subject || "(no subject)"),
    ];
    if (record.timestamp) {
      headerBits.push(el(doc, "span", { class: "datetime" }, record.timestamp.slice(0, 16).replace("T", " ")));
    }
    const header = el(doc, "div", {
      class: "mail-header",
      onclick: () => {
        if (isOpen) this.expanded.delete(record.doc_id);
        else this.expanded.add(record.doc_id);
        this.render();
      },
    }, ...headerBits);
    const item = el(doc, "div", { class: "mail-item", "data-doc-id": record.doc_id }, header);
    if (isOpen) {
      const recipients = record.recipients.map((r) => r.canonical).join(", ");
      item.append(
        el(doc, "div", { class: "mail-body" },
          el(doc, "div", { class: "mail-meta" }, `from ${record.sender.canonical} to ${recipients}`),
          el(doc, "pre", { class: "mail-text" }, record.body || "(empty body)"),
        ),
      );
    }
    return item;
  }

  render(): void {
    clear(this.list);
    clear(this.pager);
    const page = this.store.caches.results;
    if (!page) return;
    for (const record of page.records) {
      this.list.append(this.item(record));
    }
    const doc = this.doc;
    const from = page.total === 0 ? 0 : page.offset + 1;
    const to = Math.min(page.offset + page.limit, page.total);
    this.pager.append(
      el(doc, "button", {
        class: "page-prev",
        disabled: page.offset === 0,
        onclick: () => void this.store.setPage(page.offset - page.limit),
      }, "‹ prev"),
      el(doc, "span", { class: "page-info" }, `${from}–${to} of ${page.total}`),
      el(doc, "button", {
        class: "page-next",
        disabled: to >= page.total,
        onclick: () => void this.store.setPage(page.offset + page.limit),
      }, "next ›"),
    );
  }
}
