import { describe, expect, it } from "vitest";

import { DendrogramNode, ForceGraph, SnapshotSummary, VarianceReport } from "../src/api.js";
import {
  clusterTable, explorerState, layoutDendrogram, layoutForceGraph,
} from "../src/explorer.js";
import { renderClusterTable, renderDendrogram, renderForceGraph } from "../src/render.js";

const TREE: DendrogramNode = {
  dist: 20,
  count: 3,
  children: [
    {
      dist: 5,
      count: 2,
      children: [
        { dist: 0, count: 1, leaf_id: "a" },
        { dist: 0, count: 1, leaf_id: "b" },
      ],
    },
    { dist: 0, count: 1, leaf_id: "c" },
  ],
};

const GRAPH: ForceGraph = {
  nodes: [
    { id: "a", cluster: 0, representative: true },
    { id: "b", cluster: 0, representative: false },
    { id: "c", cluster: 1, representative: true },
  ],
  edges: [{ source: "a", target: "b", weight: 5 }],
};

const SNAPSHOT: SnapshotSummary = {
  problem_id: "p",
  linkage: "average",
  cophenetic_c: 0.9,
  threshold_dist: 30,
  threshold_count: 1,
  clusters: [
    { id: 0, members: ["a", "b"], representative: "a" },
    { id: 1, members: ["c"], representative: "c" },
  ],
};

const VARIANCE: VarianceReport = {
  problem_id: "p",
  overall_variance: 4,
  weighted_cluster_variance: 1,
  reduction: 0.75,
  clusters: [
    { cluster: 0, size: 2, mean: 8, variance: 1.5 },
    { cluster: 1, size: 1, mean: 3, variance: 0 },
  ],
  excluded: [],
};

describe("dendrogram layout", () => {
  it("places every leaf and join", () => {
    const layout = layoutDendrogram(TREE);
    expect(layout.leaves.map((l) => l.id)).toEqual(["a", "b", "c"]);
    expect(layout.joins).toHaveLength(2);
  });

  it("join heights decrease toward the root (root on top)", () => {
    const layout = layoutDendrogram(TREE);
    const root = layout.joins.find((j) => j.dist === 20)!;
    const inner = layout.joins.find((j) => j.dist === 5)!;
    expect(root.y).toBeLessThan(inner.y);
    for (const leaf of layout.leaves) {
      expect(leaf.y).toBeGreaterThan(root.y);
    }
  });

  it("renders one circle per submission", () => {
    const svg = renderDendrogram(layoutDendrogram(TREE));
    expect(svg.match(/<circle/g)).toHaveLength(3);
  });
});

describe("force layout", () => {
  it("keeps every node and stays inside the frame", () => {
    const placed = layoutForceGraph(GRAPH, 800, 600);
    expect(placed).toHaveLength(GRAPH.nodes.length);
    for (const n of placed) {
      expect(n.x).toBeGreaterThanOrEqual(0);
      expect(n.x).toBeLessThanOrEqual(800);
      expect(n.y).toBeGreaterThanOrEqual(0);
      expect(n.y).toBeLessThanOrEqual(600);
      expect(Number.isFinite(n.x) && Number.isFinite(n.y)).toBe(true);
    }
  });

  it("is deterministic for a fixed seed", () => {
    const one = layoutForceGraph(GRAPH, 800, 600, 100, 7);
    const two = layoutForceGraph(GRAPH, 800, 600, 100, 7);
    expect(one).toEqual(two);
  });

  it("pulls connected nodes closer than unconnected ones", () => {
    const placed = layoutForceGraph(GRAPH, 800, 600, 300);
    const at = new Map(placed.map((n) => [n.id, n]));
    const d = (p: string, q: string) =>
      Math.hypot(at.get(p)!.x - at.get(q)!.x, at.get(p)!.y - at.get(q)!.y);
    expect(d("a", "b")).toBeLessThan(d("a", "c"));
    expect(d("a", "b")).toBeLessThan(d("b", "c"));
  });

  it("badges representatives in the svg", () => {
    const svg = renderForceGraph(layoutForceGraph(GRAPH));
    expect(svg.match(/stroke-width="2"/g)).toHaveLength(2);
  });
});

describe("cluster table", () => {
  it("joins snapshot and variance rows", () => {
    const rows = clusterTable(SNAPSHOT, VARIANCE);
    expect(rows).toHaveLength(2);
    expect(rows[0].representative).toBe("a");
    expect(rows[0].variance).toBe(1.5);
    expect(rows[1].size).toBe(1);
  });

  it("renders without variance data", () => {
    const html = renderClusterTable(clusterTable(SNAPSHOT, null));
    expect(html).toContain("<table");
    expect(html).toContain(">-<");
  });

  it("node count comes from the force graph export", () => {
    const state = explorerState(SNAPSHOT, GRAPH, VARIANCE);
    expect(state.nodeCount).toBe(3);
    expect(state.table).toHaveLength(2);
  });
});
