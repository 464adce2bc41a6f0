// Wire types, exactly as the correction service emits them.

export interface SessionResponse {
  session_id: number;
  hypothesis: string;
  tokens: string[];
  prefix_len: number;
  word_strokes: number;
  mouse_actions: number;
  status?: string;
  engine?: string;
}

export interface AcceptMetrics {
  word_strokes: number;
  mouse_actions: number;
  iterations: number;
}

export interface AcceptResponse {
  final_text: string;
  metrics: AcceptMetrics;
}

export interface EngineInfo {
  name: string;
  digest: string;
}

// Client-side view state. The hypothesis string and every counter are
// copied verbatim from the latest server response, never recomputed.
export interface SessionView {
  sessionId: number;
  sourceText: string;
  hypothesis: string;
  tokens: string[];
  prefixLen: number;
  wordStrokes: number;
  mouseActions: number;
  status: "active" | "accepted";
}

export interface CorrectionDraft {
  position: number; // 1-based token index, must lie past the prefix
  word: string;
}

export function validateDraft(view: SessionView, draft: CorrectionDraft): string | null {
  if (draft.position <= view.prefixLen) {
    return `position ${draft.position} is inside the validated prefix`;
  }
  if (draft.position > view.tokens.length + 1) {
    return `position ${draft.position} is past the end of the hypothesis`;
  }
  const word = draft.word.trim();
  if (word.length === 0) {
    return "replacement must not be empty";
  }
  if (/\s/.test(word)) {
    return "replacement must be a single word";
  }
  return null;
}
