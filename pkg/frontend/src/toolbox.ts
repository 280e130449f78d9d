/**
 * Toolbox pane: drag the milestone tool onto the plan to create one.
 * The drop sends an AddMilestone command at the snapped position; the
 * name is generated fresh against the acknowledged view.
 */

import { xToPosition, type TimelineGeometry } from "./timeline.js";
import type { DocumentState } from "./state.js";
import type { CommandJson } from "./types.js";

export interface ToolboxCallbacks {
  submit(commands: CommandJson[]): Promise<boolean>;
  geometry(): TimelineGeometry;
  planElement(): HTMLElement;
}

export function freshMilestoneName(taken: Set<string>): string {
  for (let i = 1; ; i++) {
    const candidate = `milestone_${i}`;
    if (!taken.has(candidate)) return candidate;
  }
}

export class Toolbox {
  private dragging = false;

  constructor(
    container: HTMLElement,
    private readonly state: DocumentState,
    private readonly callbacks: ToolboxCallbacks,
  ) {
    container.classList.add("toolbox");
    const tool = document.createElement("div");
    tool.className = "tool tool-milestone";
    tool.textContent = "■ milestone";
    tool.addEventListener("mousedown", (event) => {
      event.preventDefault();
      this.dragging = true;
    });
    container.appendChild(tool);
    document.addEventListener("mouseup", (event) => void this.onDrop(event));
  }

  private async onDrop(event: MouseEvent): Promise<void> {
    if (!this.dragging) return;
    this.dragging = false;
    const plan = this.callbacks.planElement();
    if (event.target instanceof Node && !plan.contains(event.target)) return;
    const position = xToPosition(this.callbacks.geometry(), event.clientX);
    const name = freshMilestoneName(this.state.milestoneNames());
    await this.callbacks.submit([
      { cmd: "AddMilestone", name, position, description: "" },
    ]);
  }
}
