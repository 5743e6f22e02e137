// DOM rendering. All document access lives here; the controller is pure.

import { ControllerState } from "./controller.js";
import { highlightKeywords } from "./keywords.js";
import { BINARY_LABELS, SENTIMENT_LABELS, Stats, TaskView } from "./types.js";

export class View {
  constructor(private readonly root: HTMLElement) {}

  render(state: ControllerState): void {
    this.root.replaceChildren(
      this.renderStats(state.stats),
      this.renderBody(state),
      this.renderHelp(state),
    );
  }

  private renderStats(stats: Stats | null): HTMLElement {
    const panel = el("div", "stats-panel");
    if (stats === null) {
      panel.textContent = "stats unavailable";
      return panel;
    }
    const agreement =
      stats.agreement === null ? "–" : `${(stats.agreement * 100).toFixed(0)}%`;
    for (const [label, value] of [
      ["decided", `${stats.decided} / ${stats.total}`],
      ["confirmed", String(stats.confirmed)],
      ["overridden", String(stats.overridden)],
      ["skipped", String(stats.skipped)],
      ["agreement", agreement],
    ]) {
      const cell = el("span", "stat");
      cell.append(el("strong", "", `${value}`), ` ${label}`);
      panel.append(cell);
    }
    return panel;
  }

  private renderBody(state: ControllerState): HTMLElement {
    if (state.mode === "loading") {
      return el("div", "notice", "loading…");
    }
    if (state.mode === "done" || state.task === null) {
      return el("div", "notice", "queue drained — nothing left to review");
    }
    const card = el("div", "task-card");
    card.append(this.renderTaskHeader(state.task));
    card.append(this.renderText(state.task.text));
    card.append(this.renderProposal(state.task));
    if (state.mode === "override") {
      card.append(this.renderOverrideEditor(state));
    }
    if (state.message) {
      card.append(el("div", "message", state.message));
    }
    return card;
  }

  private renderTaskHeader(task: TaskView): HTMLElement {
    const header = el("div", "task-header");
    header.append(
      el("span", "task-id", task.post_id),
      el("span", "task-meta", `${task.country} · ${task.month}`),
    );
    return header;
  }

  private renderText(text: string): HTMLElement {
    const body = el("p", "task-text");
    for (const segment of highlightKeywords(text)) {
      if (segment.matched === null) {
        body.append(segment.text);
      } else {
        const mark = document.createElement("mark");
        mark.className = `kw-${segment.matched}`;
        mark.textContent = segment.text;
        body.append(mark);
      }
    }
    return body;
  }

  private renderProposal(task: TaskView): HTMLElement {
    const box = el("div", "proposal");
    if (task.proposed_binary === null) {
      box.append(el("div", "proposal-binary", "no machine proposal"));
      return box;
    }
    const confidence =
      task.proposed_confidence === null
        ? ""
        : ` (${(task.proposed_confidence * 100).toFixed(0)}%)`;
    box.append(
      el(
        "div",
        "proposal-binary",
        `proposed: ${task.proposed_binary}${confidence}`,
      ),
    );
    if (task.proposed_sentiments.length > 0) {
      box.append(
        el("div", "proposal-sentiments", task.proposed_sentiments.join(", ")),
      );
    }
    return box;
  }

  private renderOverrideEditor(state: ControllerState): HTMLElement {
    const editor = el("div", "override-editor");
    const binaryRow = el("div", "binary-row");
    for (const label of BINARY_LABELS) {
      const chip = el("span", "chip", label);
      if (label === state.draftBinary) chip.classList.add("selected");
      binaryRow.append(chip);
    }
    editor.append(binaryRow);

    const list = el("ol", "sentiment-list");
    SENTIMENT_LABELS.forEach((label, i) => {
      const item = document.createElement("li");
      item.className = "sentiment-item";
      if (state.draftSentiments[i]) item.classList.add("selected");
      const keyHint = i === 9 ? "0" : String(i + 1);
      item.append(el("kbd", "", keyHint), ` ${label}`);
      list.append(item);
    });
    editor.append(list);
    return editor;
  }

  private renderHelp(state: ControllerState): HTMLElement {
    const help = el("div", "help");
    help.textContent =
      state.mode === "override"
        ? "b: flip binary · 1–9, 0: toggle sentiments · Enter: submit · Esc: cancel"
        : "1: confirm · 2: override · 0: skip";
    return help;
  }
}

function el(tag: string, className: string, text?: string): HTMLElement {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}
