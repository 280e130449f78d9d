/**
 * The milestone-plan pane: a horizontal timeline with one display item
 * per view entry, plus selection and drag&drop editing.
 *
 * Display items reference model nodes by id only; everything else on the
 * item is derived presentation (pixel x, icon class, label text). Drags
 * are optimistic hints: the item follows the pointer, and on drop the
 * computed MoveMilestone batch goes to the server. The acknowledged view
 * is re-rendered afterwards, or the items snap back on failure.
 */

import { iconFor } from "./icons.js";
import {
  axisTicks,
  positionToX,
  pxPerUnit,
  xToPosition,
  type TimelineGeometry,
} from "./timeline.js";
import type { CommandJson, ViewEntry, ViewModel } from "./types.js";

export interface DisplayItem {
  /** Node id of the milestone; never a model-node copy. */
  nodeId: number;
  x: number;
  iconKey: string;
  label: string;
  element: HTMLElement;
}

export interface PlanCallbacks {
  /** Send one atomic command batch; resolves true when acknowledged. */
  submit(commands: CommandJson[]): Promise<boolean>;
  onSelect(nodeIds: number[]): void;
}

interface DragState {
  leadId: number;
  startClientX: number;
  moved: boolean;
}

export class PlanCanvas {
  private items = new Map<number, DisplayItem>();
  private entriesById = new Map<number, ViewEntry>();
  private drag: DragState | null = null;
  private readonly selection = new Set<number>();

  constructor(
    private readonly container: HTMLElement,
    private geometry: TimelineGeometry,
    private readonly callbacks: PlanCallbacks,
  ) {
    container.classList.add("plan-canvas");
    container.addEventListener("mousedown", (event) => {
      if (event.target === container) this.clearSelection();
    });
    document.addEventListener("mousemove", (event) => this.onDragMove(event));
    document.addEventListener("mouseup", (event) => void this.onDragEnd(event));
  }

  setGeometry(geometry: TimelineGeometry): void {
    this.geometry = geometry;
  }

  get selectedIds(): number[] {
    return [...this.selection];
  }

  render(view: ViewModel): void {
    this.container.textContent = "";
    this.items.clear();
    this.entriesById.clear();

    const axis = document.createElement("div");
    axis.className = "plan-axis";
    for (const tick of axisTicks(this.geometry)) {
      const mark = document.createElement("span");
      mark.className = "axis-tick";
      mark.style.left = `${positionToX(this.geometry, tick)}px`;
      mark.textContent = String(tick);
      this.container.appendChild(mark);
    }
    this.container.appendChild(axis);

    for (const entry of view.entries) {
      const item = this.buildItem(entry);
      this.items.set(entry.id, item);
      this.entriesById.set(entry.id, entry);
      this.container.appendChild(item.element);
    }
    for (const id of [...this.selection]) {
      if (!this.items.has(id)) this.selection.delete(id);
    }
    this.applySelectionStyles();
  }

  private buildItem(entry: ViewEntry): DisplayItem {
    const icon = iconFor(entry.access);
    const element = document.createElement("div");
    element.className = "milestone-item";
    element.dataset.nodeId = String(entry.id);

    const glyph = document.createElement("span");
    glyph.className = `icon ${icon.className}`;
    glyph.textContent = icon.glyph;
    glyph.title = icon.title;

    const label = document.createElement("span");
    label.className = "item-label";
    label.textContent = entry.name;

    element.append(glyph, label);
    if (entry.span) {
      const bar = document.createElement("div");
      bar.className = "span-bar";
      const left = positionToX(this.geometry, entry.span[0]);
      bar.style.left = `${left - positionToX(this.geometry, entry.position)}px`;
      bar.style.width = `${(entry.span[1] - entry.span[0]) * pxPerUnit(this.geometry)}px`;
      element.appendChild(bar);
    }

    const x = positionToX(this.geometry, entry.position);
    const item: DisplayItem = {
      nodeId: entry.id,
      x,
      iconKey: icon.className,
      label: entry.name,
      element,
    };
    element.style.left = `${x}px`;
    element.addEventListener("mousedown", (event) => {
      event.stopPropagation();
      this.onItemMouseDown(item, event);
    });
    return item;
  }

  // -- selection -------------------------------------------------------------

  private onItemMouseDown(item: DisplayItem, event: MouseEvent): void {
    if (event.shiftKey) {
      if (this.selection.has(item.nodeId)) this.selection.delete(item.nodeId);
      else this.selection.add(item.nodeId);
    } else if (!this.selection.has(item.nodeId)) {
      this.selection.clear();
      this.selection.add(item.nodeId);
    }
    this.applySelectionStyles();
    this.callbacks.onSelect(this.selectedIds);
    this.drag = { leadId: item.nodeId, startClientX: event.clientX, moved: false };
  }

  private clearSelection(): void {
    this.selection.clear();
    this.applySelectionStyles();
    this.callbacks.onSelect([]);
  }

  private applySelectionStyles(): void {
    for (const item of this.items.values()) {
      item.element.classList.toggle("selected", this.selection.has(item.nodeId));
    }
  }

  // -- drag&drop -------------------------------------------------------------

  private onDragMove(event: MouseEvent): void {
    if (!this.drag) return;
    const delta = event.clientX - this.drag.startClientX;
    if (delta !== 0) this.drag.moved = true;
    for (const id of this.selection) {
      const item = this.items.get(id);
      if (item) item.element.style.left = `${item.x + delta}px`;
    }
  }

  private async onDragEnd(event: MouseEvent): Promise<void> {
    const drag = this.drag;
    this.drag = null;
    if (!drag || !drag.moved) return;

    const lead = this.items.get(drag.leadId);
    if (!lead) return;
    const delta = event.clientX - drag.startClientX;
    const leadEntry = this.entriesById.get(drag.leadId)!;
    const droppedPosition = xToPosition(this.geometry, lead.x + delta);
    const shift = droppedPosition - leadEntry.position;

    const commands: CommandJson[] = [];
    for (const id of this.selection) {
      const entry = this.entriesById.get(id);
      if (!entry) continue;
      const target = Math.min(this.geometry.bound, Math.max(0, entry.position + shift));
      if (target !== entry.position) {
        commands.push({ cmd: "MoveMilestone", name: entry.name, position: target });
      }
    }

    if (commands.length === 0) {
      this.snapBack();
      return;
    }
    const accepted = await this.callbacks.submit(commands);
    if (!accepted) this.snapBack();
    // on success the acknowledged view is re-rendered by the editor
  }

  /** Visual revert of an unaccepted drag; no model state changed. */
  private snapBack(): void {
    for (const item of this.items.values()) {
      item.element.style.left = `${item.x}px`;
    }
  }
}
