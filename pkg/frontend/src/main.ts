/**
 * Browser wiring: a student playground tab and an instructor explorer tab.
 * Configuration is a single API base URL (?api=... overrides the default).
 */

import { ApiClient } from "./api.js";
import { explorerState, layoutDendrogram, layoutForceGraph } from "./explorer.js";
import { PlaygroundSession } from "./playground.js";
import {
  renderClusterTable, renderDendrogram, renderForceGraph, renderGutter,
  renderPlayground,
} from "./render.js";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function boot(): void {
  const params = new URLSearchParams(window.location.search);
  const base = params.get("api") ?? "";
  const client = new ApiClient(base);

  const problemInput = el<HTMLInputElement>("problem-id");
  const editor = el<HTMLTextAreaElement>("editor");
  const gutter = el<HTMLElement>("gutter");
  const hintPanel = el<HTMLElement>("hint-panel");
  const attemptsLabel = el<HTMLElement>("attempts");

  let session = new PlaygroundSession(problemInput.value, client);
  problemInput.addEventListener("change", () => {
    session = new PlaygroundSession(problemInput.value, client);
    attemptsLabel.textContent = "0";
    hintPanel.innerHTML = renderPlayground({ state: "idle" });
  });

  const refreshGutter = () => {
    const lines = editor.value.split("\n").length;
    const marked = new Set<number>(
      session.view.state === "hints" ? session.view.markers.map((m) => m.line) : [],
    );
    gutter.innerHTML = renderGutter(lines, marked);
  };

  editor.addEventListener("input", refreshGutter);

  el<HTMLButtonElement>("ask-hints").addEventListener("click", async () => {
    const view = await session.submitForHints(editor.value);
    attemptsLabel.textContent = String(session.attemptCount);
    hintPanel.innerHTML = renderPlayground(view);
    refreshGutter();
  });

  // --- explorer ---------------------------------------------------------

  const explorerProblem = el<HTMLInputElement>("explorer-problem");
  const activation = el<HTMLInputElement>("activation-toggle");
  const tablePanel = el<HTMLElement>("cluster-table");
  const dendroPanel = el<HTMLElement>("dendrogram");
  const forcePanel = el<HTMLElement>("forcegraph");
  const summary = el<HTMLElement>("explorer-summary");

  async function refreshExplorer(): Promise<void> {
    const pid = explorerProblem.value;
    const [snapshot, graph, variance, dendro] = await Promise.all([
      client.snapshot(pid),
      client.forcegraph(pid),
      client.variance(pid),
      client.dendrogram(pid),
    ]);
    const state = explorerState(snapshot, graph, variance);
    if (!state.snapshot) {
      summary.textContent = "No snapshot yet; ingest submissions and recluster.";
      tablePanel.innerHTML = "";
      dendroPanel.innerHTML = "";
      forcePanel.innerHTML = "";
      return;
    }
    summary.textContent =
      `${state.nodeCount} submissions, ${state.snapshot.clusters.length} clusters, ` +
      `linkage ${state.snapshot.linkage ?? "n/a"}`;
    tablePanel.innerHTML = renderClusterTable(state.table);
    dendroPanel.innerHTML = dendro && dendro.count ? renderDendrogram(layoutDendrogram(dendro)) : "";
    forcePanel.innerHTML = graph ? renderForceGraph(layoutForceGraph(graph)) : "";
  }

  el<HTMLButtonElement>("refresh-explorer").addEventListener("click", refreshExplorer);
  el<HTMLButtonElement>("recluster").addEventListener("click", async () => {
    await client.recluster(explorerProblem.value);
    await refreshExplorer();
  });

  // clicking a submission node shows its normalized token view
  const tokenView = el<HTMLElement>("token-view");
  for (const panel of [forcePanel, dendroPanel]) {
    panel.addEventListener("click", async (event) => {
      const target = event.target as Element | null;
      const id = target?.getAttribute?.("data-id");
      if (!id) return;
      const linear = await client.linearView(explorerProblem.value, id);
      tokenView.textContent = linear ?? `no normalized form for ${id}`;
    });
  }
  activation.addEventListener("change", async () => {
    activation.checked = await client.setActivation(explorerProblem.value, activation.checked);
  });

  refreshExplorer().catch(() => {
    summary.textContent = "Service unreachable.";
  });
}

if (typeof document !== "undefined") {
  document.addEventListener("DOMContentLoaded", boot);
}
