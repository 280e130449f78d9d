/** Non-blocking notices and the modal-ish prompts (reload, draft restore). */

export class NoticeArea {
  constructor(private readonly container: HTMLElement) {}

  show(message: string, kind: "info" | "error" = "info"): void {
    const notice = document.createElement("div");
    notice.className = `notice notice-${kind}`;
    notice.textContent = message;
    this.container.appendChild(notice);
    setTimeout(() => notice.remove(), 6000);
  }

  /** The document changed under us; offer a reload. */
  showReloadPrompt(onReload: () => void): void {
    if (this.container.querySelector(".reload-prompt")) return;
    const prompt = document.createElement("div");
    prompt.className = "reload-prompt notice notice-error";
    const text = document.createElement("span");
    text.textContent = "This plan changed on the server. Reload to continue editing.";
    const button = document.createElement("button");
    button.textContent = "Reload";
    button.addEventListener("click", () => {
      prompt.remove();
      onReload();
    });
    prompt.append(text, button);
    this.container.appendChild(prompt);
  }

  /** A newer draft exists; let the user restore or discard it. */
  showDraftPrompt(onRestore: () => void, onDiscard: () => void): void {
    const prompt = document.createElement("div");
    prompt.className = "draft-prompt notice";
    const text = document.createElement("span");
    text.textContent = "An unsaved draft of this plan exists.";
    const restore = document.createElement("button");
    restore.textContent = "Restore draft";
    restore.addEventListener("click", () => {
      prompt.remove();
      onRestore();
    });
    const discard = document.createElement("button");
    discard.textContent = "Discard";
    discard.addEventListener("click", () => {
      prompt.remove();
      onDiscard();
    });
    prompt.append(text, restore, discard);
    this.container.appendChild(prompt);
  }

  clear(): void {
    this.container.textContent = "";
  }
}
