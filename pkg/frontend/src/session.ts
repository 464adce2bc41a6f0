// Per-sentence session controller: server-mirrored state, one request in
// flight at a time, duplicate actions dropped, failed requests retryable.

import { ApiClient, ApiError } from "./api";
import type {
  AcceptResponse,
  CorrectionDraft,
  SessionResponse,
  SessionView,
} from "./types";
import { validateDraft } from "./types";

type Task = {
  signature: string;
  run: () => Promise<void>;
};

export class SessionPanel {
  view: SessionView | null = null;
  acceptResult: AcceptResponse | null = null;
  // freshFrom marks where the regenerated suffix starts, for diff highlight
  freshFrom = 0;
  lastError: string | null = null;
  private retryTask: Task | null = null;
  private inflight: Task | null = null;
  private queue: Task[] = [];

  constructor(
    readonly sourceText: string,
    private readonly engine: string,
    private readonly client: ApiClient,
    private readonly onChange: () => void = () => {},
  ) {}

  get started(): boolean {
    return this.view !== null;
  }

  get busy(): boolean {
    return this.inflight !== null;
  }

  start(): Promise<void> {
    return this.enqueue("start", async () => {
      const response = await this.client.createSession(this.engine, this.sourceText);
      this.applySession(response, 0);
    });
  }

  restore(sessionId: number): Promise<void> {
    return this.enqueue(`restore:${sessionId}`, async () => {
      const response = await this.client.getSession(sessionId);
      this.applySession(response, response.tokens.length);
      if (response.status === "accepted") {
        this.view!.status = "accepted";
        this.acceptResult = {
          final_text: response.hypothesis,
          metrics: {
            word_strokes: response.word_strokes,
            mouse_actions: response.mouse_actions,
            iterations: 0,
          },
        };
      }
    });
  }

  submitCorrection(draft: CorrectionDraft): Promise<void> {
    const view = this.view;
    if (!view) {
      return Promise.reject(new Error("session not started"));
    }
    const problem = validateDraft(view, draft);
    if (problem) {
      this.lastError = problem;
      this.onChange();
      return Promise.resolve();
    }
    return this.enqueue(`correct:${draft.position}:${draft.word}`, async () => {
      const live = this.view!;
      try {
        const response = await this.client.correct(live.sessionId, {
          position: draft.position,
          word: draft.word.trim(),
        });
        this.applySession(response, draft.position);
      } catch (error) {
        if (error instanceof ApiError) {
          // server refused: surface the reason, view unchanged
          this.lastError = error.message;
          if (error.status === 409) {
            this.view!.status = "accepted";
          }
          return;
        }
        throw error;
      }
    });
  }

  acceptSentence(): Promise<void> {
    if (!this.view) {
      return Promise.reject(new Error("session not started"));
    }
    return this.enqueue("accept", async () => {
      const live = this.view!;
      try {
        const response = await this.client.accept(live.sessionId);
        this.acceptResult = response;
        const current = this.view!;
        current.status = "accepted";
        current.wordStrokes = response.metrics.word_strokes;
        current.mouseActions = response.metrics.mouse_actions;
        this.lastError = null;
      } catch (error) {
        if (error instanceof ApiError) {
          this.lastError = error.message;
          if (error.status === 409) {
            this.view!.status = "accepted";
          }
          return;
        }
        throw error;
      }
    });
  }

  retry(): Promise<void> {
    const task = this.retryTask;
    if (!task) {
      return Promise.resolve();
    }
    this.retryTask = null;
    this.lastError = null;
    return this.enqueue(task.signature, task.run);
  }

  private applySession(response: SessionResponse, freshFrom: number): void {
    this.view = {
      sessionId: response.session_id,
      sourceText: this.sourceText,
      hypothesis: response.hypothesis,
      tokens: [...response.tokens],
      prefixLen: response.prefix_len,
      wordStrokes: response.word_strokes,
      mouseActions: response.mouse_actions,
      status: response.status === "accepted" ? "accepted" : "active",
    };
    this.freshFrom = freshFrom;
    this.lastError = null;
  }

  // Single in-flight request per panel; later actions queue, and an action
  // identical to the one in flight or already queued is dropped so a
  // double-click never issues a second request.
  private enqueue(signature: string, run: () => Promise<void>): Promise<void> {
    if (this.inflight?.signature === signature) {
      return Promise.resolve();
    }
    if (this.queue.some((t) => t.signature === signature)) {
      return Promise.resolve();
    }
    const task: Task = { signature, run };
    this.queue.push(task);
    return this.pump();
  }

  private async pump(): Promise<void> {
    if (this.inflight) {
      return;
    }
    const task = this.queue.shift();
    if (!task) {
      return;
    }
    this.inflight = task;
    try {
      await task.run();
    } catch (error) {
      // transport failure: keep the task for an explicit retry
      this.lastError = "network failure, try again";
      this.retryTask = task;
      this.queue = [];
    } finally {
      this.inflight = null;
      this.onChange();
    }
    await this.pump();
  }
}
