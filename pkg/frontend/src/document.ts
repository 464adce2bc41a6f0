// Document-level controller: one panel per pasted line, sessions created
// lazily, running totals aggregated from server-reported metrics only.

import { ApiClient } from "./api";
import { SessionPanel } from "./session";

export interface DocumentTotals {
  wordStrokes: number;
  mouseActions: number;
  acceptedSentences: number;
  totalSentences: number;
  wsr: number | null; // strokes per final word, percent, accepted panels only
  mar: number | null; // actions per final character, percent
}

export function splitDocument(text: string): string[] {
  return text
    .split(/\r?\n/)
    .map((line) => line.trim())
    .filter((line) => line.length > 0);
}

export class DocumentController {
  panels: SessionPanel[] = [];

  constructor(
    private readonly client: ApiClient,
    private readonly engine: string,
    private readonly onChange: () => void = () => {},
  ) {}

  load(text: string): SessionPanel[] {
    this.panels = splitDocument(text).map(
      (line) => new SessionPanel(line, this.engine, this.client, this.onChange),
    );
    return this.panels;
  }

  /** Start the session for a panel the user has reached. */
  activate(index: number): Promise<void> {
    const panel = this.panels[index];
    if (!panel || panel.started) {
      return Promise.resolve();
    }
    return panel.start();
  }

  /** Rebuild panels for existing server sessions (page reload). */
  async restore(lines: string[], sessionIds: (number | null)[]): Promise<SessionPanel[]> {
    this.panels = lines.map(
      (line) => new SessionPanel(line, this.engine, this.client, this.onChange),
    );
    await Promise.all(
      this.panels.map((panel, i) => {
        const sid = sessionIds[i];
        return sid == null ? Promise.resolve() : panel.restore(sid);
      }),
    );
    return this.panels;
  }

  sessionIds(): (number | null)[] {
    return this.panels.map((p) => p.view?.sessionId ?? null);
  }

  /** Totals mirror per-panel server metrics; nothing is recomputed. */
  totals(): DocumentTotals {
    let strokes = 0;
    let actions = 0;
    let words = 0;
    let chars = 0;
    let accepted = 0;
    for (const panel of this.panels) {
      if (!panel.view) {
        continue;
      }
      strokes += panel.view.wordStrokes;
      actions += panel.view.mouseActions;
      if (panel.view.status === "accepted" && panel.acceptResult) {
        accepted += 1;
        words += panel.view.tokens.length;
        chars += panel.acceptResult.final_text.length;
      }
    }
    return {
      wordStrokes: strokes,
      mouseActions: actions,
      acceptedSentences: accepted,
      totalSentences: this.panels.length,
      wsr: words > 0 ? (100 * strokes) / words : null,
      mar: chars > 0 ? (100 * actions) / chars : null,
    };
  }
}
