import { ApiClient } from "./api";
import { DocumentController } from "./document";
import { renderPanel } from "./render";
import type { SessionPanel } from "./session";
import "./styles.css";

const STORAGE_KEY = "prefixmt-ui-state";

interface PersistedState {
  engine: string;
  lines: string[];
  sessionIds: (number | null)[];
}

const client = new ApiClient();

let controller: DocumentController | null = null;
let engineName = "smt";

function persist(lines: string[]): void {
  if (!controller) {
    return;
  }
  const state: PersistedState = {
    engine: engineName,
    lines,
    sessionIds: controller.sessionIds(),
  };
  localStorage.setItem(STORAGE_KEY, JSON.stringify(state));
}

function renderAll(lines: string[]): void {
  if (!controller) {
    return;
  }
  const panelsHost = document.querySelector<HTMLDivElement>("#panels")!;
  panelsHost.innerHTML = "";
  controller.panels.forEach((panel, index) => {
    const host = document.createElement("section");
    panelsHost.appendChild(host);
    drawPanel(panel, host, index);
  });
  drawTotals();
  persist(lines);
}

function drawPanel(
  panel: SessionPanel,
  host: HTMLElement,
  index: number,
): void {
  renderPanel(host, panel, {
    onStart: () => void controller!.activate(index),
    onCorrection: (draft) => void panel.submitCorrection(draft),
    onAccept: () => void panel.acceptSentence(),
    onRetry: () => void panel.retry(),
  });
}

function drawTotals(): void {
  const totalsHost = document.querySelector<HTMLDivElement>("#totals")!;
  if (!controller || controller.panels.length === 0) {
    totalsHost.textContent = "Paste a document above to begin.";
    return;
  }
  const t = controller.totals();
  const wsr = t.wsr === null ? "–" : t.wsr.toFixed(1);
  const mar = t.mar === null ? "–" : t.mar.toFixed(1);
  totalsHost.textContent =
    `${t.acceptedSentences}/${t.totalSentences} sentences accepted · ` +
    `strokes ${t.wordStrokes} · clicks ${t.mouseActions} · ` +
    `WSR ${wsr} · MAR ${mar}`;
}

async function loadDocument(text: string): Promise<void> {
  const lines = text.split(/\r?\n/).filter((l) => l.trim().length > 0);
  controller = new DocumentController(client, engineName, () => renderAll(lines));
  controller.load(text);
  renderAll(lines);
  if (controller.panels.length > 0) {
    await controller.activate(0);
  }
}

async function tryRestore(): Promise<boolean> {
  const raw = localStorage.getItem(STORAGE_KEY);
  if (!raw) {
    return false;
  }
  try {
    const state = JSON.parse(raw) as PersistedState;
    if (!state.lines?.length) {
      return false;
    }
    engineName = state.engine;
    controller = new DocumentController(client, engineName, () =>
      renderAll(state.lines),
    );
    await controller.restore(state.lines, state.sessionIds);
    renderAll(state.lines);
    return true;
  } catch {
    return false;
  }
}

async function boot(): Promise<void> {
  const select = document.querySelector<HTMLSelectElement>("#engine")!;
  try {
    const { engines } = await client.engines();
    select.innerHTML = "";
    for (const engine of engines) {
      const option = document.createElement("option");
      option.value = engine.name;
      option.textContent = engine.name;
      select.appendChild(option);
    }
    if (engines.length > 0) {
      engineName = engines[0].name;
    }
  } catch {
    // service down: leave the default option in place
  }
  select.addEventListener("change", () => {
    engineName = select.value;
  });

  const textarea = document.querySelector<HTMLTextAreaElement>("#document")!;
  const loadButton = document.querySelector<HTMLButtonElement>("#load")!;
  loadButton.addEventListener("click", () => void loadDocument(textarea.value));

  if (!(await tryRestore())) {
    drawTotals();
  }
}

void boot();
