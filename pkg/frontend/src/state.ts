/**
 * Server-authoritative document state.
 *
 * The client never mutates its model locally: `acknowledge` records what
 * the server confirmed (canonical text + revision), views are refetched
 * from that revision, and in-flight drags only set visual position hints
 * that are dropped on the next acknowledge or revert.
 */

import { scanOutline, type DocOutline } from "./docscan.js";
import type { ViewModel } from "./types.js";

export interface ViewChoice {
  kind: "milestone-list" | "scope-plan" | "milestone-io" | "layer-involvement";
  params: Record<string, string>;
}

export class DocumentState {
  docId = "";
  revision = 0;
  /** Last server-acknowledged canonical text. */
  text = "";
  outline: DocOutline = { layers: [], scopes: [] };
  /** Timeline bound parsed from the acknowledged text. */
  bound = 1;
  view: ViewModel | null = null;
  viewChoice: ViewChoice = { kind: "milestone-list", params: {} };
  /** Visual x-offset hints for in-flight drags, keyed by node id. */
  optimisticOffsets = new Map<number, number>();
  selection = new Set<number>();

  acknowledge(revision: number, text: string): void {
    this.revision = revision;
    this.text = text;
    this.outline = scanOutline(text);
    this.bound = timelineBound(text);
    this.optimisticOffsets.clear();
  }

  setView(view: ViewModel): void {
    this.view = view;
    const present = new Set(view.entries.map((entry) => entry.id));
    for (const id of [...this.selection]) {
      if (!present.has(id)) this.selection.delete(id);
    }
  }

  milestoneNames(): Set<string> {
    return new Set((this.view?.entries ?? []).map((entry) => entry.name));
  }
}

const WEEKS_RE = /^ {2}timeline weeks (\d+)$/m;
const CALENDAR_RE = /^ {2}timeline calendar (\d{4}-\d{2}-\d{2}) (\d{4}-\d{2}-\d{2})$/m;

export function timelineBound(canonicalText: string): number {
  const weeks = WEEKS_RE.exec(canonicalText);
  if (weeks) return parseInt(weeks[1], 10);
  const calendar = CALENDAR_RE.exec(canonicalText);
  if (calendar) {
    const start = Date.parse(calendar[1] + "T00:00:00Z");
    const end = Date.parse(calendar[2] + "T00:00:00Z");
    return Math.round((end - start) / 86_400_000);
  }
  return 1;
}
