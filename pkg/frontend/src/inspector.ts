/**
 * Object inspector: details of the clicked milestone plus edit fields.
 * Edits submit SetDescription / SetSpan / MoveMilestone commands; the
 * panel itself never touches the model.
 */

import { accessesOf } from "./docscan.js";
import { iconFor } from "./icons.js";
import type { DocumentState } from "./state.js";
import type { CommandJson, ViewEntry } from "./types.js";

export interface InspectorCallbacks {
  submit(commands: CommandJson[]): Promise<boolean>;
}

export class Inspector {
  private current: ViewEntry | null = null;

  constructor(
    private readonly container: HTMLElement,
    private readonly state: DocumentState,
    private readonly callbacks: InspectorCallbacks,
  ) {
    container.classList.add("inspector");
    this.clear();
  }

  clear(): void {
    this.current = null;
    this.container.textContent = "";
    const hint = document.createElement("p");
    hint.className = "inspector-empty";
    hint.textContent = "Select a milestone to inspect it.";
    this.container.appendChild(hint);
  }

  show(nodeId: number): void {
    const entry = this.state.view?.entries.find((e) => e.id === nodeId);
    if (!entry) {
      this.clear();
      return;
    }
    this.current = entry;
    this.container.textContent = "";

    const title = document.createElement("h3");
    title.className = "inspector-title";
    title.textContent = entry.name;
    this.container.appendChild(title);

    const position = document.createElement("p");
    position.className = "inspector-position";
    position.textContent = entry.span
      ? `position ${entry.position}, span ${entry.span[0]}..${entry.span[1]}`
      : `position ${entry.position}`;
    this.container.appendChild(position);

    const description = document.createElement("textarea");
    description.className = "inspector-description";
    description.value = entry.description ?? "";
    this.container.appendChild(description);

    const save = document.createElement("button");
    save.className = "inspector-save";
    save.textContent = "Save description";
    save.addEventListener("click", () => {
      void this.callbacks.submit([
        {
          cmd: "SetDescription",
          target: { kind: "milestone", milestone: entry.name },
          description: description.value,
        },
      ]);
    });
    this.container.appendChild(save);

    const spanRow = document.createElement("div");
    spanRow.className = "inspector-span";
    const spanStart = document.createElement("input");
    spanStart.type = "number";
    spanStart.value = entry.span ? String(entry.span[0]) : "";
    const spanEnd = document.createElement("input");
    spanEnd.type = "number";
    spanEnd.value = entry.span ? String(entry.span[1]) : "";
    const spanSave = document.createElement("button");
    spanSave.textContent = "Set span";
    spanSave.addEventListener("click", () => {
      const start = parseInt(spanStart.value, 10);
      const end = parseInt(spanEnd.value, 10);
      const span = Number.isFinite(start) && Number.isFinite(end) ? [start, end] : null;
      void this.callbacks.submit([{ cmd: "SetSpan", name: entry.name, span }]);
    });
    spanRow.append("span: ", spanStart, "..", spanEnd, spanSave);
    this.container.appendChild(spanRow);

    if (entry.results && entry.results.length > 0) {
      const results = document.createElement("ul");
      results.className = "inspector-results";
      for (const artifact of entry.results) {
        const row = document.createElement("li");
        row.textContent = artifact.description
          ? `${artifact.name}: ${artifact.description}`
          : artifact.name;
        results.appendChild(row);
      }
      this.container.appendChild(results);
    }

    const accesses = accessesOf(this.state.outline, entry.name);
    if (accesses.length > 0) {
      const list = document.createElement("ul");
      list.className = "inspector-accesses";
      for (const access of accesses) {
        const row = document.createElement("li");
        const icon = iconFor(access.kind);
        row.textContent = `${icon.glyph} ${access.layer}/${access.scope} (${icon.title})`;
        list.appendChild(row);
      }
      this.container.appendChild(list);
    }
  }

  get shownNodeId(): number | null {
    return this.current?.id ?? null;
  }
}
