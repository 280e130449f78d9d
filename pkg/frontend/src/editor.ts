/**
 * Wires the three panes (plan, toolbox, inspector) to the service API.
 *
 * Editing discipline: every change is a command batch sent with the
 * acknowledged revision; at most one batch is in flight per document
 * (later ones queue locally). On success the server's canonical text and
 * a freshly fetched view replace local state; on REVISION_CONFLICT a
 * reload prompt appears and nothing is applied locally. Undo and redo are
 * server-side: the buttons call the corresponding endpoints.
 */

import { ApiClient, ApiError } from "./api.js";
import { AutosaveLoop, type AutosaveOptions } from "./autosave.js";
import { Inspector } from "./inspector.js";
import { NoticeArea } from "./notices.js";
import { PlanCanvas } from "./plan.js";
import { DocumentState, type ViewChoice } from "./state.js";
import { Toolbox } from "./toolbox.js";
import type { TimelineGeometry } from "./timeline.js";
import type { CommandJson } from "./types.js";

export interface EditorElements {
  plan: HTMLElement;
  toolbox: HTMLElement;
  inspector: HTMLElement;
  notices: HTMLElement;
  undoButton: HTMLButtonElement;
  redoButton: HTMLButtonElement;
  /** Raw-text drawer whose unsynced content autosaves as the draft. */
  textDrawer: HTMLTextAreaElement;
  applyTextButton: HTMLButtonElement;
  viewPicker: HTMLSelectElement;
}

export interface EditorOptions {
  autosave?: AutosaveOptions;
  planWidthPx?: number;
}

export class Editor {
  readonly state = new DocumentState();
  readonly notices: NoticeArea;
  readonly plan: PlanCanvas;
  readonly inspector: Inspector;
  readonly autosave: AutosaveLoop;
  private queue: Promise<void> = Promise.resolve();
  private readonly planWidthPx: number;

  constructor(
    private readonly api: ApiClient,
    private readonly elements: EditorElements,
    options: EditorOptions = {},
  ) {
    this.planWidthPx = options.planWidthPx ?? 900;
    this.notices = new NoticeArea(elements.notices);
    this.plan = new PlanCanvas(elements.plan, this.geometry(), {
      submit: (commands) => this.submit(commands),
      onSelect: (ids) => this.onSelect(ids),
    });
    this.inspector = new Inspector(elements.inspector, this.state, {
      submit: (commands) => this.submit(commands),
    });
    new Toolbox(elements.toolbox, this.state, {
      submit: (commands) => this.submit(commands),
      geometry: () => this.geometry(),
      planElement: () => elements.plan,
    });
    this.autosave = new AutosaveLoop(
      () => elements.textDrawer.value,
      (text) => this.api.putDraft(this.state.docId, text),
      options.autosave,
      () => this.state.text,
    );
    elements.undoButton.addEventListener("click", () => void this.undoRedo("undo"));
    elements.redoButton.addEventListener("click", () => void this.undoRedo("redo"));
    elements.applyTextButton.addEventListener("click", () => void this.applyTextDrawer());
    elements.viewPicker.addEventListener("change", () => {
      void this.switchView(elements.viewPicker.value);
    });
  }

  geometry(): TimelineGeometry {
    return { bound: this.state.bound, originPx: 40, widthPx: this.planWidthPx };
  }

  // -- document lifecycle ------------------------------------------------------

  async open(docId: string): Promise<void> {
    this.autosave.stop();
    if (docId !== this.state.docId) {
      this.state.viewChoice = { kind: "milestone-list", params: {} };
    }
    this.state.docId = docId;
    const doc = await this.api.getDocument(docId);
    this.state.acknowledge(doc.revision, doc.text);
    this.elements.textDrawer.value = doc.text;
    this.populateViewPicker();
    await this.refreshView();

    const draft = (await this.api.getDraft(docId)).text;
    if (draft !== null && draft !== doc.text) {
      this.notices.showDraftPrompt(
        () => {
          this.elements.textDrawer.value = draft;
          this.autosave.markSaved(draft);
        },
        () => {
          void this.api.deleteDraft(docId);
          this.autosave.markSaved(null);
        },
      );
    }
    this.autosave.start(draft);
  }

  async reload(): Promise<void> {
    await this.open(this.state.docId);
  }

  // -- command path -------------------------------------------------------------

  /** Queue one atomic batch; resolves true when the server accepted it. */
  submit(commands: CommandJson[]): Promise<boolean> {
    const run = this.queue.then(() => this.send(commands));
    this.queue = run.then(() => undefined, () => undefined);
    return run;
  }

  private async send(commands: CommandJson[]): Promise<boolean> {
    try {
      const result = await this.api.applyCommands(
        this.state.docId, this.state.revision, commands);
      this.state.acknowledge(result.revision, result.text);
      this.elements.textDrawer.value = result.text;
      await this.refreshView();
      return true;
    } catch (error) {
      this.handleEditError(error);
      return false;
    }
  }

  private async undoRedo(direction: "undo" | "redo"): Promise<void> {
    try {
      const result = direction === "undo"
        ? await this.api.undo(this.state.docId)
        : await this.api.redo(this.state.docId);
      this.state.acknowledge(result.revision, result.text);
      this.elements.textDrawer.value = result.text;
      await this.refreshView();
    } catch (error) {
      this.handleEditError(error);
    }
  }

  private async applyTextDrawer(): Promise<void> {
    try {
      await this.api.putDocument(
        this.state.docId, this.elements.textDrawer.value, this.state.revision);
      await this.api.deleteDraft(this.state.docId);
      this.autosave.markSaved(null);
      await this.reload();
      this.notices.show("Plan text applied.");
    } catch (error) {
      this.handleEditError(error);
    }
  }

  private handleEditError(error: unknown): void {
    if (error instanceof ApiError && error.code === "REVISION_CONFLICT") {
      this.notices.showReloadPrompt(() => void this.reload());
      return;
    }
    if (error instanceof ApiError) {
      const detail = error.diagnostics.map((d) => `${d.code}: ${d.message}`).join("; ");
      this.notices.show(detail ? `${error.message} (${detail})` : error.message, "error");
      return;
    }
    this.notices.show("Network problem, change not applied. Retry when back online.", "error");
  }

  // -- views ---------------------------------------------------------------------

  async refreshView(): Promise<void> {
    const choice = this.state.viewChoice;
    let view;
    try {
      view = await this.api.getView(this.state.docId, choice.kind, choice.params);
    } catch (error) {
      const gone = error instanceof ApiError && error.code === "UNKNOWN_VIEW_SUBJECT";
      if (gone && choice.kind !== "milestone-list") {
        // the chosen layer/scope no longer exists; fall back to the full list
        this.state.viewChoice = { kind: "milestone-list", params: {} };
        this.elements.viewPicker.value = "milestone-list";
        return this.refreshView();
      }
      throw error;
    }
    this.state.setView(view);
    this.plan.setGeometry(this.geometry());
    this.plan.render(view);
    const shown = this.inspector.shownNodeId;
    if (shown !== null) this.inspector.show(shown);
  }

  async switchView(encoded: string): Promise<void> {
    this.state.viewChoice = decodeViewChoice(encoded);
    await this.refreshView();
  }

  private populateViewPicker(): void {
    const picker = this.elements.viewPicker;
    picker.textContent = "";
    const add = (value: string, label: string) => {
      const option = document.createElement("option");
      option.value = value;
      option.textContent = label;
      picker.appendChild(option);
    };
    add("milestone-list", "All milestones");
    for (const layer of this.state.outline.layers) {
      add(`layer-involvement:${layer}`, `Layer: ${layer}`);
    }
    for (const scope of this.state.outline.scopes) {
      add(`scope-plan:${scope.layer}:${scope.name}`, `Plan: ${scope.layer} / ${scope.name}`);
    }
    picker.value = encodeViewChoice(this.state.viewChoice);
    if (picker.value === "") {
      picker.value = "milestone-list";
      this.state.viewChoice = { kind: "milestone-list", params: {} };
    }
  }

  private onSelect(ids: number[]): void {
    if (ids.length === 1) this.inspector.show(ids[0]);
    else this.inspector.clear();
  }
}

export function decodeViewChoice(encoded: string): ViewChoice {
  const [kind, a, b] = encoded.split(":");
  if (kind === "scope-plan") return { kind, params: { layer: a, scope: b } };
  if (kind === "layer-involvement") return { kind, params: { layer: a } };
  if (kind === "milestone-io") return { kind, params: { milestone: a } };
  return { kind: "milestone-list", params: {} };
}

export function encodeViewChoice(choice: ViewChoice): string {
  if (choice.kind === "scope-plan") {
    return `scope-plan:${choice.params.layer}:${choice.params.scope}`;
  }
  if (choice.kind === "layer-involvement") {
    return `layer-involvement:${choice.params.layer}`;
  }
  if (choice.kind === "milestone-io") {
    return `milestone-io:${choice.params.milestone}`;
  }
  return "milestone-list";
}
