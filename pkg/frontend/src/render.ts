/**
 * Pure HTML/SVG string renderers. Keeping these free of document access
 * makes every view testable in node; main.ts only assigns innerHTML.
 */

import { DendrogramLayout, ClusterRow, PlacedNode } from "./explorer.js";
import { PlaygroundView } from "./playground.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function renderPlayground(view: PlaygroundView): string {
  switch (view.state) {
    case "idle":
      return `<p class="muted">Submit your attempt to ask for hints.</p>`;
    case "no-changes":
      return `<p class="ok">No changes suggested. This looks like a known correct solution.</p>`;
    case "keep-trying":
      return `<p class="muted">Your attempt is still far from the solutions we know. ` +
        `Keep trying; hints unlock as you get closer.</p>`;
    case "gated":
      return `<p class="muted">Hints open after ${view.need} attempts ` +
        `(you have ${view.have}).</p>`;
    case "blocked":
      return `<p class="warn">Hints unavailable: ${escapeHtml(view.reason)}</p>`;
    case "diagnostics":
      return (
        `<ul class="diagnostics">` +
        view.diagnostics.map((d) => `<li>${escapeHtml(d)}</li>`).join("") +
        `</ul>`
      );
    case "hints":
      return (
        `<ul class="hints">` +
        view.markers
          .map(
            (m) =>
              `<li class="hint ${escapeHtml(m.kind)}" data-line="${m.line}">` +
              `<span class="line">line ${m.line}</span> ${escapeHtml(m.message)}</li>`,
          )
          .join("") +
        `</ul>`
      );
  }
}

export function renderGutter(lineCount: number, markedLines: Set<number>): string {
  const rows = [];
  for (let ln = 1; ln <= lineCount; ln++) {
    const cls = markedLines.has(ln) ? "gutter-line marked" : "gutter-line";
    rows.push(`<div class="${cls}">${ln}</div>`);
  }
  return rows.join("");
}

export function renderDendrogram(layout: DendrogramLayout): string {
  const parts = [
    `<svg viewBox="0 0 ${layout.width} ${layout.height}" class="dendrogram">`,
  ];
  for (const j of layout.joins) {
    const [x1, x2] = j.childXs;
    const [y1, y2] = j.childYs;
    parts.push(
      `<polyline fill="none" stroke="#555" points="` +
        `${x1},${y1} ${x1},${j.y} ${x2},${j.y} ${x2},${y2}" />`,
    );
  }
  for (const leaf of layout.leaves) {
    parts.push(
      `<circle cx="${leaf.x}" cy="${leaf.y}" r="3" class="leaf" ` +
        `data-id="${escapeHtml(leaf.id)}"><title>${escapeHtml(leaf.id)}</title></circle>`,
    );
  }
  parts.push("</svg>");
  return parts.join("");
}

const PALETTE = ["#4c78a8", "#f58518", "#54a24b", "#e45756", "#72b7b2",
                 "#b279a2", "#eeca3b", "#9d755d"];

export function renderForceGraph(nodes: PlacedNode[], width = 800, height = 600): string {
  const parts = [`<svg viewBox="0 0 ${width} ${height}" class="forcegraph">`];
  for (const n of nodes) {
    const color = n.cluster === null ? "#999" : PALETTE[n.cluster % PALETTE.length];
    const r = n.representative ? 8 : 5;
    const ring = n.representative ? ` stroke="#222" stroke-width="2"` : "";
    parts.push(
      `<circle cx="${n.x.toFixed(1)}" cy="${n.y.toFixed(1)}" r="${r}" fill="${color}"${ring} ` +
        `data-id="${escapeHtml(n.id)}"><title>${escapeHtml(n.id)}</title></circle>`,
    );
  }
  parts.push("</svg>");
  return parts.join("");
}

export function renderClusterTable(rows: ClusterRow[]): string {
  const body = rows
    .map(
      (r) =>
        `<tr><td>${r.cluster}</td><td>${r.size}</td>` +
        `<td><span class="badge">${escapeHtml(r.representative)}</span></td>` +
        `<td>${r.meanMarks === null ? "-" : r.meanMarks.toFixed(2)}</td>` +
        `<td>${r.variance === null ? "-" : r.variance.toFixed(3)}</td></tr>`,
    )
    .join("");
  return (
    `<table class="clusters"><thead><tr>` +
    `<th>cluster</th><th>size</th><th>representative</th>` +
    `<th>mean marks</th><th>marks variance</th></tr></thead>` +
    `<tbody>${body}</tbody></table>`
  );
}
