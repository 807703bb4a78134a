/**
 * Typed client for the /v1 endpoints. The UI never computes distances or
 * clusters itself; every number rendered comes out of one of these calls.
 */

export interface SubmitResponse {
  submission_id: string;
  diagnostics: string[];
}

export interface Hint {
  kind: string;
  line: number;
  message: string;
  severity: number;
  function_ordinal: number;
  token_index: number;
}

export interface HintSetPayload {
  suppressed: boolean;
  neighbor_distance: number;
  hints: Hint[];
}

export type CorrectionsResult =
  | { kind: "hints"; payload: HintSetPayload }
  | { kind: "diagnostics"; diagnostics: string[] }
  | { kind: "blocked"; reason: string }
  | { kind: "gated"; have: number; need: number };

export interface ClusterInfo {
  id: number;
  members: string[];
  representative: string;
}

export interface SnapshotSummary {
  problem_id: string;
  linkage: string | null;
  cophenetic_c: number;
  threshold_dist: number;
  threshold_count: number;
  clusters: ClusterInfo[];
  created_at?: string;
}

export interface DendrogramNode {
  dist: number;
  count: number;
  leaf_id?: string;
  children?: [DendrogramNode, DendrogramNode];
}

export interface ForceGraph {
  nodes: { id: string; cluster: number | null; representative: boolean }[];
  edges: { source: string; target: string; weight: number }[];
}

export interface VarianceReport {
  problem_id: string;
  overall_variance: number;
  weighted_cluster_variance: number;
  reduction: number;
  clusters: { cluster: number; size: number; mean: number; variance: number }[];
  excluded: string[];
}

export class ApiClient {
  constructor(
    private baseUrl: string,
    private instructorToken?: string,
    private fetchFn: typeof fetch = fetch,
  ) {}

  private url(problemId: string, tail: string): string {
    return `${this.baseUrl}/v1/problems/${encodeURIComponent(problemId)}${tail}`;
  }

  private instructorHeaders(): Record<string, string> {
    return this.instructorToken ? { "X-Instructor-Token": this.instructorToken } : {};
  }

  async submit(
    problemId: string,
    source: string,
    correct: boolean,
    author = "playground",
    id?: string,
    marks?: number,
  ): Promise<SubmitResponse> {
    const res = await this.fetchFn(this.url(problemId, "/submissions"), {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ author, source, correct, id, marks }),
    });
    if (!res.ok) throw new Error(`submit failed: ${res.status}`);
    return (await res.json()) as SubmitResponse;
  }

  async corrections(
    problemId: string,
    source: string,
    author?: string,
  ): Promise<CorrectionsResult> {
    const res = await this.fetchFn(this.url(problemId, "/corrections"), {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ source, author }),
    });
    const body = await res.json();
    if (res.status === 200) return { kind: "hints", payload: body as HintSetPayload };
    if (res.status === 422) return { kind: "diagnostics", diagnostics: body.diagnostics ?? [] };
    if (res.status === 403) return { kind: "gated", have: body.have ?? 0, need: body.need ?? 0 };
    return { kind: "blocked", reason: body.error ?? `status ${res.status}` };
  }

  async recluster(problemId: string): Promise<SnapshotSummary> {
    const res = await this.fetchFn(this.url(problemId, "/recluster"), {
      method: "POST",
      headers: this.instructorHeaders(),
    });
    if (!res.ok) throw new Error(`recluster failed: ${res.status}`);
    return (await res.json()) as SnapshotSummary;
  }

  async snapshot(problemId: string): Promise<SnapshotSummary | null> {
    const res = await this.fetchFn(this.url(problemId, "/clusters.json"));
    if (res.status === 409) return null;
    if (!res.ok) throw new Error(`snapshot fetch failed: ${res.status}`);
    return (await res.json()) as SnapshotSummary;
  }

  async dendrogram(problemId: string): Promise<DendrogramNode | null> {
    const res = await this.fetchFn(this.url(problemId, "/dendrogram"));
    if (res.status === 409) return null;
    if (!res.ok) throw new Error(`dendrogram fetch failed: ${res.status}`);
    return (await res.json()) as DendrogramNode;
  }

  async forcegraph(problemId: string): Promise<ForceGraph | null> {
    const res = await this.fetchFn(this.url(problemId, "/forcegraph"));
    if (res.status === 409) return null;
    if (!res.ok) throw new Error(`forcegraph fetch failed: ${res.status}`);
    return (await res.json()) as ForceGraph;
  }

  async variance(problemId: string): Promise<VarianceReport | null> {
    const res = await this.fetchFn(this.url(problemId, "/variance"));
    if (res.status === 409) return null;
    if (!res.ok) throw new Error(`variance fetch failed: ${res.status}`);
    return (await res.json()) as VarianceReport;
  }

  async linearView(problemId: string, submissionId: string): Promise<string | null> {
    const res = await this.fetchFn(
      this.url(problemId, `/submissions/${encodeURIComponent(submissionId)}/linear`),
      { headers: this.instructorHeaders() },
    );
    if (!res.ok) return null;
    const body = (await res.json()) as { linear: string | null };
    return body.linear;
  }

  async setActivation(problemId: string, active: boolean): Promise<boolean> {
    const res = await this.fetchFn(this.url(problemId, "/activation"), {
      method: "PUT",
      headers: { "Content-Type": "application/json", ...this.instructorHeaders() },
      body: JSON.stringify({ active }),
    });
    if (!res.ok) throw new Error(`activation failed: ${res.status}`);
    return ((await res.json()) as { active: boolean }).active;
  }
}
