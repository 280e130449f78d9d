/**
 * Typed client for the document service API.
 *
 * All mutations carry the caller's expected revision; a 409 surfaces as
 * ApiError with code REVISION_CONFLICT so the UI can prompt a reload.
 * The fetch implementation is injectable for tests.
 */

import type {
  CommandJson,
  DocumentPayload,
  Diagnostic,
  ErrorBody,
  FileSummary,
  RevisionText,
  ViewModel,
} from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  readonly code: string;
  readonly status: number;
  readonly diagnostics: Diagnostic[];
  readonly index?: number;
  readonly cause_code?: string;

  constructor(status: number, body: ErrorBody) {
    super(body.message);
    this.code = body.code;
    this.status = status;
    this.diagnostics = body.diagnostics ?? [];
    this.index = body.index;
    this.cause_code = body.cause;
  }
}

export class ApiClient {
  private token: string | null = null;

  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchFn: FetchLike = (url, init) => fetch(url, init),
  ) {}

  get authenticated(): boolean {
    return this.token !== null;
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const headers: Record<string, string> = {};
    if (body !== undefined) headers["Content-Type"] = "application/json";
    if (this.token) headers["Authorization"] = `Bearer ${this.token}`;
    const response = await this.fetchFn(this.baseUrl + path, {
      method,
      headers,
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    if (!response.ok) {
      let parsed: ErrorBody;
      try {
        parsed = (await response.json()) as ErrorBody;
      } catch {
        parsed = { code: "HTTP_ERROR", message: `HTTP ${response.status}` };
      }
      throw new ApiError(response.status, parsed);
    }
    return (await response.json()) as T;
  }

  async login(username: string, password: string): Promise<void> {
    const result = await this.request<{ token: string }>("POST", "/api/login", {
      username,
      password,
    });
    this.token = result.token;
  }

  listFiles(): Promise<{ files: FileSummary[] }> {
    return this.request("GET", "/api/files");
  }

  createFile(text: string): Promise<{ id: string; revision: number; name: string }> {
    return this.request("POST", "/api/files", { text });
  }

  getDocument(id: string): Promise<DocumentPayload> {
    return this.request("GET", `/api/files/${id}`);
  }

  putDocument(id: string, text: string, expectedRevision: number): Promise<{ revision: number }> {
    return this.request("PUT", `/api/files/${id}`, {
      text,
      expected_revision: expectedRevision,
    });
  }

  applyCommands(
    id: string,
    expectedRevision: number,
    commands: CommandJson[],
  ): Promise<RevisionText> {
    return this.request("POST", `/api/files/${id}/commands`, {
      expected_revision: expectedRevision,
      commands,
    });
  }

  undo(id: string): Promise<RevisionText> {
    return this.request("POST", `/api/files/${id}/undo`, {});
  }

  redo(id: string): Promise<RevisionText> {
    return this.request("POST", `/api/files/${id}/redo`, {});
  }

  getDraft(id: string): Promise<{ text: string | null }> {
    return this.request("GET", `/api/files/${id}/draft`);
  }

  putDraft(id: string, text: string): Promise<void> {
    return this.request("PUT", `/api/files/${id}/draft`, { text });
  }

  deleteDraft(id: string): Promise<void> {
    return this.request("DELETE", `/api/files/${id}/draft`);
  }

  validate(id: string, text?: string): Promise<{ diagnostics: Diagnostic[] }> {
    return this.request("POST", `/api/files/${id}/validate`, text === undefined ? {} : { text });
  }

  getView(id: string, kind: string, params: Record<string, string> = {}): Promise<ViewModel> {
    const query = new URLSearchParams(params).toString();
    const suffix = query ? `?${query}` : "";
    return this.request("GET", `/api/files/${id}/views/${kind}${suffix}`);
  }
}
