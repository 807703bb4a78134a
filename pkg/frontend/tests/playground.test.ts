import { describe, expect, it } from "vitest";

import { ApiClient, CorrectionsResult, HintSetPayload } from "../src/api.js";
import { PlaygroundSession, viewFromResult } from "../src/playground.js";
import { renderGutter, renderPlayground } from "../src/render.js";

const BUFFER = "int main() {\n  int x;\n  x = 1;\n  return x;\n}\n";

function hintsPayload(overrides: Partial<HintSetPayload> = {}): CorrectionsResult {
  return {
    kind: "hints",
    payload: {
      suppressed: false,
      neighbor_distance: 5,
      hints: [
        {
          kind: "changed-condition",
          line: 4,
          message: "the condition near line 4 should differ",
          severity: 5,
          function_ordinal: 0,
          token_index: 5,
        },
      ],
      ...overrides,
    },
  };
}

describe("viewFromResult", () => {
  it("maps hints onto editor markers", () => {
    const view = viewFromResult(hintsPayload(), BUFFER);
    expect(view.state).toBe("hints");
    if (view.state === "hints") {
      expect(view.markers).toHaveLength(1);
      expect(view.markers[0].line).toBe(4);
      expect(view.markers[0].kind).toBe("changed-condition");
    }
  });

  it("clamps marker lines to the buffer", () => {
    const result = hintsPayload();
    if (result.kind === "hints") result.payload.hints[0].line = 99;
    const view = viewFromResult(result, "int main(){}\n");
    if (view.state === "hints") expect(view.markers[0].line).toBe(2);
  });

  it("suppressed responses become the keep-trying state with no hints", () => {
    const view = viewFromResult(hintsPayload({ suppressed: true, hints: [] }), BUFFER);
    expect(view.state).toBe("keep-trying");
    expect(renderPlayground(view)).not.toContain("hint ");
  });

  it("zero-distance empty responses render as no changes suggested", () => {
    const view = viewFromResult(
      hintsPayload({ hints: [], neighbor_distance: 0 }),
      BUFFER,
    );
    expect(view.state).toBe("no-changes");
    expect(renderPlayground(view)).toContain("No changes suggested");
  });

  it("parse failures render diagnostics", () => {
    const view = viewFromResult(
      { kind: "diagnostics", diagnostics: ["2:3: expected ';'"] },
      BUFFER,
    );
    expect(view.state).toBe("diagnostics");
    expect(renderPlayground(view)).toContain("expected");
  });

  it("blocked problems surface the reason", () => {
    const view = viewFromResult({ kind: "blocked", reason: "problem not active" }, BUFFER);
    expect(view.state).toBe("blocked");
  });
});

describe("PlaygroundSession", () => {
  function clientReturning(sequence: CorrectionsResult[], delays: number[]): ApiClient {
    let call = 0;
    const fetchFn = (async () => {
      throw new Error("unused");
    }) as unknown as typeof fetch;
    const client = new ApiClient("", undefined, fetchFn);
    client.corrections = async () => {
      const idx = call++;
      await new Promise((resolve) => setTimeout(resolve, delays[idx] ?? 0));
      return sequence[idx];
    };
    return client;
  }

  it("counts attempts", async () => {
    const client = clientReturning([hintsPayload(), hintsPayload()], [0, 0]);
    const session = new PlaygroundSession("p", client);
    await session.submitForHints(BUFFER);
    await session.submitForHints(BUFFER);
    expect(session.attemptCount).toBe(2);
  });

  it("latest request wins when responses arrive out of order", async () => {
    const slowOld: CorrectionsResult = { kind: "blocked", reason: "stale" };
    const client = clientReturning([slowOld, hintsPayload()], [50, 0]);
    const session = new PlaygroundSession("p", client);
    const first = session.submitForHints(BUFFER);
    const second = session.submitForHints(BUFFER);
    await Promise.all([first, second]);
    expect(session.view.state).toBe("hints");
  });

  it("ignores empty buffers", async () => {
    const client = clientReturning([], []);
    const session = new PlaygroundSession("p", client);
    await session.submitForHints("   ");
    expect(session.attemptCount).toBe(0);
    expect(session.view.state).toBe("idle");
  });
});

describe("gutter rendering", () => {
  it("marks exactly the hinted lines", () => {
    const html = renderGutter(5, new Set([4]));
    const marked = html.match(/marked/g) ?? [];
    expect(marked).toHaveLength(1);
    expect(html).toContain(`class="gutter-line marked">4<`);
  });
});
