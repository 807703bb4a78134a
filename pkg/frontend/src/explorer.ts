/**
 * Instructor-side view models: dendrogram layout, force-directed layout,
 * and the cluster table joined with per-cluster marks variance. All inputs
 * come straight from API exports; the layout math here is presentation
 * only and never feeds back into the engine.
 */

import { DendrogramNode, ForceGraph, SnapshotSummary, VarianceReport } from "./api.js";

export interface PlacedLeaf {
  id: string;
  x: number;
  y: number;
}

export interface PlacedJoin {
  x: number;
  y: number;
  dist: number;
  childXs: [number, number];
  childYs: [number, number];
}

export interface DendrogramLayout {
  leaves: PlacedLeaf[];
  joins: PlacedJoin[];
  width: number;
  height: number;
}

/** Classic dendrogram placement: leaves evenly spaced along x, join height
 * proportional to merge distance (taller joins sit higher). */
export function layoutDendrogram(
  root: DendrogramNode,
  width = 800,
  height = 400,
  margin = 20,
): DendrogramLayout {
  const leaves: PlacedLeaf[] = [];
  const joins: PlacedJoin[] = [];
  const maxDist = Math.max(root.dist, 1e-9);
  const leafCount = root.count;
  const xStep = (width - 2 * margin) / Math.max(leafCount - 1, 1);
  const yOf = (dist: number) => margin + (1 - dist / maxDist) * (height - 2 * margin);

  let nextLeaf = 0;
  const place = (node: DendrogramNode): { x: number; y: number } => {
    if (!node.children) {
      const x = margin + nextLeaf * xStep;
      nextLeaf += 1;
      leaves.push({ id: node.leaf_id ?? `leaf-${nextLeaf}`, x, y: yOf(0) });
      return { x, y: yOf(0) };
    }
    const left = place(node.children[0]);
    const right = place(node.children[1]);
    const x = (left.x + right.x) / 2;
    const y = yOf(node.dist);
    joins.push({ x, y, dist: node.dist, childXs: [left.x, right.x], childYs: [left.y, right.y] });
    return { x, y };
  };
  place(root);
  return { leaves, joins, width, height };
}

export interface PlacedNode {
  id: string;
  x: number;
  y: number;
  cluster: number | null;
  representative: boolean;
}

function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) | 0;
    let t = Math.imul(a ^ (a >>> 15), 1 | a);
    t = (t + Math.imul(t ^ (t >>> 7), 61 | t)) ^ t;
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

/** Small deterministic spring/repulsion simulation, enough to spread the
 * submission graph for inspection. Client-side by design. */
export function layoutForceGraph(
  graph: ForceGraph,
  width = 800,
  height = 600,
  iterations = 150,
  seed = 42,
): PlacedNode[] {
  const rand = mulberry32(seed);
  const nodes = graph.nodes.map((n) => ({
    ...n,
    x: width * (0.25 + 0.5 * rand()),
    y: height * (0.25 + 0.5 * rand()),
    vx: 0,
    vy: 0,
  }));
  const index = new Map(nodes.map((n, i) => [n.id, i]));
  const maxWeight = Math.max(1, ...graph.edges.map((e) => e.weight));
  // rest length must stay well under the repulsion/centering equilibrium
  // (~125px here), or edges would push similar programs apart
  const springLength = (w: number) => 20 + 60 * (w / maxWeight);

  for (let it = 0; it < iterations; it++) {
    const cool = 1 - it / iterations;
    // pairwise repulsion
    for (let i = 0; i < nodes.length; i++) {
      for (let j = i + 1; j < nodes.length; j++) {
        const a = nodes[i];
        const b = nodes[j];
        let dx = a.x - b.x;
        let dy = a.y - b.y;
        const dsq = Math.max(dx * dx + dy * dy, 1);
        const f = (2000 / dsq) * cool;
        const d = Math.sqrt(dsq);
        dx /= d;
        dy /= d;
        a.vx += dx * f;
        a.vy += dy * f;
        b.vx -= dx * f;
        b.vy -= dy * f;
      }
    }
    // springs along exported edges
    for (const e of graph.edges) {
      const a = nodes[index.get(e.source)!];
      const b = nodes[index.get(e.target)!];
      const dx = b.x - a.x;
      const dy = b.y - a.y;
      const d = Math.max(Math.sqrt(dx * dx + dy * dy), 1);
      const stretch = (d - springLength(e.weight)) / d;
      const f = 0.08 * stretch * cool;
      a.vx += dx * f;
      a.vy += dy * f;
      b.vx -= dx * f;
      b.vy -= dy * f;
    }
    for (const n of nodes) {
      n.vx += (width / 2 - n.x) * 0.002 * cool;
      n.vy += (height / 2 - n.y) * 0.002 * cool;
      n.x = Math.min(Math.max(n.x + n.vx, 0), width);
      n.y = Math.min(Math.max(n.y + n.vy, 0), height);
      n.vx *= 0.6;
      n.vy *= 0.6;
    }
  }
  return nodes.map(({ id, x, y, cluster, representative }) => ({
    id, x, y, cluster, representative,
  }));
}

export interface ClusterRow {
  cluster: number;
  size: number;
  representative: string;
  members: string[];
  variance: number | null;
  meanMarks: number | null;
}

export function clusterTable(
  snapshot: SnapshotSummary,
  variance: VarianceReport | null,
): ClusterRow[] {
  const byCluster = new Map<number, { variance: number; mean: number }>();
  for (const row of variance?.clusters ?? []) {
    byCluster.set(row.cluster, { variance: row.variance, mean: row.mean });
  }
  return snapshot.clusters.map((c) => ({
    cluster: c.id,
    size: c.members.length,
    representative: c.representative,
    members: c.members,
    variance: byCluster.get(c.id)?.variance ?? null,
    meanMarks: byCluster.get(c.id)?.mean ?? null,
  }));
}

export interface ExplorerState {
  snapshot: SnapshotSummary | null;
  nodeCount: number;
  table: ClusterRow[];
}

export function explorerState(
  snapshot: SnapshotSummary | null,
  graph: ForceGraph | null,
  variance: VarianceReport | null,
): ExplorerState {
  return {
    snapshot,
    nodeCount: graph?.nodes.length ?? 0,
    table: snapshot ? clusterTable(snapshot, variance) : [],
  };
}
