// DOM rendering for one sentence panel. The hypothesis line shows the
// server's string byte for byte; the token row underneath is the click
// surface for corrections.

import type { SessionPanel } from "./session";
import type { CorrectionDraft } from "./types";

export interface PanelHandlers {
  onCorrection(draft: CorrectionDraft): void;
  onAccept(): void;
  onRetry(): void;
  onStart(): void;
}

export function renderPanel(
  host: HTMLElement,
  panel: SessionPanel,
  handlers: PanelHandlers,
): void {
  host.innerHTML = "";
  host.className = "panel";
  const view = panel.view;

  const source = document.createElement("div");
  source.className = "source";
  source.textContent = panel.sourceText;
  host.appendChild(source);

  if (!view) {
    const start = document.createElement("button");
    start.className = "start";
    start.textContent = "Start session";
    start.addEventListener("click", () => handlers.onStart());
    host.appendChild(start);
    return;
  }

  if (view.status === "accepted") {
    host.classList.add("accepted");
  }

  const hypothesis = document.createElement("div");
  hypothesis.className = "hypothesis";
  hypothesis.textContent = view.hypothesis;
  host.appendChild(hypothesis);

  const row = document.createElement("div");
  row.className = "tokens";
  view.tokens.forEach((token, index) => {
    const position = index + 1;
    const span = document.createElement("span");
    span.textContent = token;
    span.className = "token";
    if (position <= view.prefixLen) {
      span.classList.add("locked");
    } else {
      if (index >= panel.freshFrom) {
        span.classList.add("fresh");
      }
      if (view.status === "active") {
        span.classList.add("editable");
        span.addEventListener("click", () => {
          if (panel.busy) {
            return;
          }
          openEditor(row, span, position, handlers);
        });
      }
    }
    row.appendChild(span);
  });
  if (view.status === "active") {
    const append = document.createElement("span");
    append.className = "token editable append";
    append.textContent = "+";
    append.title = "append a word";
    append.addEventListener("click", () => {
      if (!panel.busy) {
        openEditor(row, append, view.tokens.length + 1, handlers);
      }
    });
    row.appendChild(append);
  }
  host.appendChild(row);

  const footer = document.createElement("div");
  footer.className = "footer";
  const counters = document.createElement("span");
  counters.className = "counters";
  counters.textContent = `strokes ${view.wordStrokes} · clicks ${view.mouseActions}`;
  footer.appendChild(counters);
  if (view.status === "active") {
    const accept = document.createElement("button");
    accept.className = "accept";
    accept.textContent = "Accept";
    accept.disabled = panel.busy;
    accept.addEventListener("click", () => handlers.onAccept());
    footer.appendChild(accept);
  } else {
    const done = document.createElement("span");
    done.className = "done";
    done.textContent = "accepted";
    footer.appendChild(done);
  }
  host.appendChild(footer);

  if (panel.lastError) {
    const error = document.createElement("div");
    error.className = "error";
    error.textContent = panel.lastError;
    if (panel.lastError.startsWith("network")) {
      const retry = document.createElement("button");
      retry.className = "retry";
      retry.textContent = "Retry";
      retry.addEventListener("click", () => handlers.onRetry());
      error.appendChild(retry);
    }
    host.appendChild(error);
  }
}

function openEditor(
  row: HTMLElement,
  span: HTMLElement,
  position: number,
  handlers: PanelHandlers,
): void {
  if (row.querySelector("input")) {
    return; // one editor at a time
  }
  const input = document.createElement("input");
  input.type = "text";
  input.className = "editor";
  input.value = span.classList.contains("append") ? "" : span.textContent ?? "";
  input.addEventListener("keydown", (event) => {
    if (event.key === "Enter") {
      handlers.onCorrection({ position, word: input.value });
    } else if (event.key === "Escape") {
      input.remove();
      span.hidden = false;
    }
  });
  span.hidden = true;
  span.insertAdjacentElement("afterend", input);
  input.focus();
  input.select();
}
