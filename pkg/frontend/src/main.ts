/**
 * Application bootstrap: login screen, file list, then the three-pane
 * editor (plan, toolbox, inspector) for the opened document.
 */

import { ApiClient, ApiError } from "./api.js";
import { Editor, type EditorElements } from "./editor.js";

function el<T extends HTMLElement>(id: string): T {
  const found = document.getElementById(id);
  if (!found) throw new Error(`missing element #${id}`);
  return found as T;
}

export function bootstrap(): void {
  const api = new ApiClient("");
  const loginPane = el<HTMLElement>("login-pane");
  const filesPane = el<HTMLElement>("files-pane");
  const editorPane = el<HTMLElement>("editor-pane");

  const elements: EditorElements = {
    plan: el("plan"),
    toolbox: el("toolbox"),
    inspector: el("inspector"),
    notices: el("notices"),
    undoButton: el<HTMLButtonElement>("undo-button"),
    redoButton: el<HTMLButtonElement>("redo-button"),
    textDrawer: el<HTMLTextAreaElement>("text-drawer"),
    applyTextButton: el<HTMLButtonElement>("apply-text-button"),
    viewPicker: el<HTMLSelectElement>("view-picker"),
  };
  const editor = new Editor(api, elements);

  el<HTMLFormElement>("login-form").addEventListener("submit", (event) => {
    event.preventDefault();
    const username = el<HTMLInputElement>("login-username").value;
    const password = el<HTMLInputElement>("login-password").value;
    void api.login(username, password).then(
      async () => {
        loginPane.hidden = true;
        filesPane.hidden = false;
        await renderFileList();
      },
      (error) => {
        el("login-error").textContent =
          error instanceof ApiError ? "Login failed." : "Service unreachable.";
      },
    );
  });

  async function renderFileList(): Promise<void> {
    const list = el("file-list");
    list.textContent = "";
    const { files } = await api.listFiles();
    for (const file of files) {
      const row = document.createElement("li");
      const link = document.createElement("a");
      link.href = "#";
      link.textContent = `${file.name} (rev ${file.revision})`;
      link.addEventListener("click", (event) => {
        event.preventDefault();
        void openDocument(file.id);
      });
      row.appendChild(link);
      list.appendChild(row);
    }
    if (files.length === 0) {
      const hint = document.createElement("li");
      hint.textContent = "No plans yet.";
      list.appendChild(hint);
    }
  }

  async function openDocument(id: string): Promise<void> {
    filesPane.hidden = true;
    editorPane.hidden = false;
    await editor.open(id);
  }

  el<HTMLButtonElement>("back-to-files").addEventListener("click", () => {
    editor.autosave.stop();
    editorPane.hidden = true;
    filesPane.hidden = false;
    void renderFileList();
  });
}

if (typeof document !== "undefined" && document.getElementById("login-pane")) {
  bootstrap();
}
