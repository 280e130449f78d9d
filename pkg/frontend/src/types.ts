/** Wire types of the document service API. */

export type ResponsibilityKind = "resp" | "cont" | "noti";

export type ViewKind =
  | "MilestoneList"
  | "ScopePlan"
  | "MilestoneIO"
  | "LayerInvolvement";

export interface ViewEntry {
  id: number;
  name: string;
  position: number;
  span: [number, number] | null;
  access?: ResponsibilityKind;
  role?: "input" | "output";
  description?: string;
  results?: { name: string; description: string }[];
}

export interface ViewModel {
  view_kind: ViewKind;
  subject: Record<string, string>;
  entries: ViewEntry[];
}

export interface FileSummary {
  id: string;
  name: string;
  revision: number;
  updated_at: string;
}

export interface DocumentPayload {
  id: string;
  text: string;
  revision: number;
  name: string;
  updated_at: string;
}

export interface Diagnostic {
  severity: "error" | "warning";
  code: string;
  message: string;
  line: number | null;
  column: number | null;
}

/** One edit command; the server validates the full shape. */
export interface CommandJson {
  cmd: string;
  [arg: string]: unknown;
}

export interface RevisionText {
  revision: number;
  text: string;
}

export interface ErrorBody {
  code: string;
  message: string;
  diagnostics?: Diagnostic[];
  index?: number;
  cause?: string;
}
