/**
 * Student-side session state. Maps correction responses onto editor
 * markers, renders the suppressed case as an encouragement rather than a
 * partial answer, and coalesces overlapping requests so only the latest
 * response ever reaches the screen.
 */

import { ApiClient, CorrectionsResult, Hint } from "./api.js";

export interface EditorMarker {
  line: number;
  kind: string;
  message: string;
  severity: number;
}

export type PlaygroundView =
  | { state: "idle" }
  | { state: "no-changes" }
  | { state: "hints"; markers: EditorMarker[]; distance: number }
  | { state: "keep-trying" }
  | { state: "diagnostics"; diagnostics: string[] }
  | { state: "gated"; have: number; need: number }
  | { state: "blocked"; reason: string };

export function markerFromHint(hint: Hint, lineCount: number): EditorMarker {
  return {
    line: Math.min(Math.max(hint.line, 1), Math.max(lineCount, 1)),
    kind: hint.kind,
    message: hint.message,
    severity: hint.severity,
  };
}

export function viewFromResult(result: CorrectionsResult, buffer: string): PlaygroundView {
  switch (result.kind) {
    case "diagnostics":
      return { state: "diagnostics", diagnostics: result.diagnostics };
    case "gated":
      return { state: "gated", have: result.have, need: result.need };
    case "blocked":
      return { state: "blocked", reason: result.reason };
    case "hints": {
      const payload = result.payload;
      if (payload.suppressed) return { state: "keep-trying" };
      if (payload.hints.length === 0) return { state: "no-changes" };
      const lineCount = buffer.split("\n").length;
      return {
        state: "hints",
        distance: payload.neighbor_distance,
        markers: payload.hints.map((h) => markerFromHint(h, lineCount)),
      };
    }
  }
}

export class PlaygroundSession {
  attemptCount = 0;
  view: PlaygroundView = { state: "idle" };
  private requestSeq = 0;

  constructor(
    readonly problemId: string,
    private client: ApiClient,
    private author?: string,
  ) {}

  /** Ask for hints; stale responses are dropped (latest request wins). */
  async submitForHints(buffer: string): Promise<PlaygroundView> {
    if (!buffer.trim()) return this.view;
    const seq = ++this.requestSeq;
    this.attemptCount += 1;
    const result = await this.client.corrections(this.problemId, buffer, this.author);
    if (seq !== this.requestSeq) {
      return this.view; // superseded while in flight
    }
    this.view = viewFromResult(result, buffer);
    return this.view;
  }
}
