// Query panel: removable filter chips, dataset upload, action-log download.

import { clear, el } from "../dom";
import { DuplicateChipError, PanelStore } from "../state";
import type { FilterChip, FilterField } from "../types";

function chipLabel(chip: FilterChip): string {
  if (typeof chip.value === "string") return `${chip.field}:${chip.value}`;
  return `${chip.field}:${chip.value.start.slice(0, 10)}..${chip.value.end.slice(0, 10)}`;
}

export class QueryPanel {
  private doc: Document;
  private inlineError: HTMLElement;
  private chipRow: HTMLElement;
  private matchCount: HTMLElement;

  constructor(
    root: HTMLElement,
    private store: PanelStore,
  ) {
    this.doc = root.ownerDocument;
    const doc = this.doc;

    const fieldSelect = el(doc, "select", { class: "filter-field" });
    for (const field of ["content", "subject", "correspondent"]) {
      fieldSelect.append(el(doc, "option", { value: field }, field));
    }
    const valueInput = el(doc, "input", {
      class: "filter-value",
      placeholder: "add a query term…",
    });
    const addButton = el(doc, "button", {
      class: "add-filter",
      onclick: () => this.submit(fieldSelect.value as FilterField, valueInput.value),
    }, "add");
    valueInput.addEventListener("keydown", (event) => {
      if ((event as KeyboardEvent).key === "Enter") {
        this.submit(fieldSelect.value as FilterField, valueInput.value);
      }
    });

    this.inlineError = el(doc, "span", { class: "inline-error" });
    this.chipRow = el(doc, "div", { class: "chip-row" });
    this.matchCount = el(doc, "span", { class: "match-count" });

    const uploadInput = el(doc, "input", { type: "file", class: "upload-file" });
    const formatSelect = el(doc, "select", { class: "upload-format" });
    for (const format of ["mbox", "eml", "csv", "jsonl"]) {
      formatSelect.append(el(doc, "option", { value: format }, format));
    }
    const uploadButton = el(doc, "button", {
      class: "upload-btn",
      onclick: () => void this.upload(uploadInput, formatSelect.value),
    }, "upload dataset");
    const downloadButton = el(doc, "button", {
      class: "download-log",
      onclick: () => void this.downloadLog(),
    }, "download actions");

    root.append(
      el(doc, "div", { class: "panel-head" },
        el(doc, "h2", {}, "query"),
        this.matchCount,
      ),
      el(doc, "div", { class: "filter-form" }, fieldSelect, valueInput, addButton, this.inlineError),
      this.chipRow,
      el(doc, "div", { class: "dataset-controls" }, uploadInput, formatSelect, uploadButton, downloadButton),
    );
    store.subscribe(() => this.render());
  }

  private submit(field: FilterField, raw: string): void {
    const value = raw.trim();
    if (!value) return;
    this.inlineError.textContent = "";
    try {
      void this.store.addFilter(field, value).catch((error) => {
        this.inlineError.textContent = String(error.message ?? error);
      });
    } catch (error) {
      if (error instanceof DuplicateChipError) {
        // rejected before any request leaves the client
        this.inlineError.textContent = error.message;
      } else {
        throw error;
      }
    }
  }

  private async upload(input: HTMLInputElement, format: string): Promise<void> {
    const file = input.files?.[0];
    if (!file) return;
    await this.store.api.uploadDataset(file, file.name, format, file.name);
    await this.store.refreshDatasets();
  }

  private async downloadLog(): Promise<void> {
    const text = await this.store.downloadActionLog();
    const url = URL.createObjectURL(new Blob([text], { type: "application/x-ndjson" }));
    const a = el(this.doc, "a", { href: url, download: "actions.jsonl" });
    a.click();
    URL.revokeObjectURL(url);
  }

  render(): void {
    const session = this.store.session;
    this.matchCount.textContent = session ? `${session.match_count} matching emails` : "";
    clear(this.chipRow);
    for (const chip of session?.filters ?? []) {
      this.chipRow.append(
        el(this.doc, "span", { class: "chip", "data-filter-id": chip.filter_id },
          chipLabel(chip),
          el(this.doc, "button", {
            class: "chip-remove",
            onclick: () => void this.store.removeFilter(chip.filter_id),
          }, "×"),
        ),
      );
    }
  }
}
