"""Agglomerative clustering over program distance matrices.

Distances from the edit metric do not satisfy the triangle inequality, so the
programs cannot be embedded in a vector space; hierarchical clustering works
directly on the matrix instead. The linkage rule is chosen per problem by
cophenetic correlation, the tree is pruned into size-bounded clusters, and
each cluster nominates a medoid as its representative.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Optional

import numpy as np

LINKAGE_METHODS = ("single", "complete", "average", "weighted")


class DegenerateVariance(Exception):
    """Cophenetic correlation is undefined when either side has no spread."""


@dataclass(frozen=True)
class DistanceMatrix:
    ids: tuple[str, ...]
    d: np.ndarray  # symmetric, zero diagonal

    def __post_init__(self):
        n = len(self.ids)
        if self.d.shape != (n, n):
            raise ValueError("matrix shape does not match id count")
        if n and (np.diag(self.d) != 0).any():
            raise ValueError("nonzero diagonal")
        if n and not np.allclose(self.d, self.d.T):
            raise ValueError("matrix not symmetric")

    @property
    def n(self) -> int:
        return len(self.ids)

    def index_of(self, pid: str) -> int:
        return self.ids.index(pid)


@dataclass
class DendroNode:
    dist: float
    count: int
    leaf_id: Optional[str] = None
    left: Optional["DendroNode"] = None
    right: Optional["DendroNode"] = None

    @property
    def is_leaf(self) -> bool:
        return self.leaf_id is not None

    def leaves(self) -> list[str]:
        out = []
        stack = [self]
        while stack:
            node = stack.pop()
            if node.is_leaf:
                out.append(node.leaf_id)
            else:
                stack.append(node.right)
                stack.append(node.left)
        return out


def linkage_tree(m: DistanceMatrix, method: str) -> DendroNode:
    """Standard agglomerative merge tree under the named update rule.

    Ties are broken toward the smallest (row, column) slot pair; a merged
    cluster keeps the smaller of its two slots, so the order is stable.
    """
    if method not in LINKAGE_METHODS:
        raise ValueError(f"unknown linkage method {method!r}")
    n = m.n
    if n == 0:
        raise ValueError("empty matrix")
    nodes: list[Optional[DendroNode]] = [
        DendroNode(0.0, 1, leaf_id=pid) for pid in m.ids
    ]
    if n == 1:
        return nodes[0]

    work = m.d.astype(float).copy()
    np.fill_diagonal(work, np.inf)
    sizes = np.ones(n)

    for _ in range(n - 1):
        flat = np.argmin(work)
        i, j = divmod(int(flat), n)
        if i > j:
            i, j = j, i
        dist = work[i, j]

        # Lance-Williams update of row i against every other active slot.
        di, dj = work[i], work[j]
        if method == "single":
            new_row = np.minimum(di, dj)
        elif method == "complete":
            merged = np.isinf(di) | np.isinf(dj)
            new_row = np.where(merged, np.inf, np.maximum(di, dj))
        elif method == "average":
            si, sj = sizes[i], sizes[j]
            new_row = (si * di + sj * dj) / (si + sj)
        else:  # weighted
            new_row = (di + dj) / 2.0

        nodes[i] = DendroNode(float(dist), nodes[i].count + nodes[j].count,
                              left=nodes[i], right=nodes[j])
        nodes[j] = None
        sizes[i] += sizes[j]
        work[i, :] = new_row
        work[:, i] = new_row
        work[i, i] = np.inf
        work[j, :] = np.inf
        work[:, j] = np.inf

    root = next(node for node in nodes if node is not None)
    return root


def _cophenetic_vector(m: DistanceMatrix, tree: DendroNode) -> tuple[np.ndarray, np.ndarray]:
    n = m.n
    index = {pid: k for k, pid in enumerate(m.ids)}
    coph = np.zeros((n, n))
    stack = [tree]
    while stack:
        node = stack.pop()
        if node.is_leaf:
            continue
        left_ids = [index[x] for x in node.left.leaves()]
        right_ids = [index[x] for x in node.right.leaves()]
        for a in left_ids:
            for b in right_ids:
                coph[a, b] = coph[b, a] = node.dist
        stack.append(node.left)
        stack.append(node.right)
    iu = np.triu_indices(n, 1)
    return m.d[iu], coph[iu]


def cophenetic_correlation(m: DistanceMatrix, tree: DendroNode) -> float:
    """Pearson correlation between original and cophenetic pair distances."""
    if m.n < 3:
        raise ValueError("correlation needs at least 3 programs")
    orig, coph = _cophenetic_vector(m, tree)
    if np.std(orig) == 0 or np.std(coph) == 0:
        raise DegenerateVariance("no variance in pair distances")
    return float(np.corrcoef(orig, coph)[0, 1])


def select_linkage(m: DistanceMatrix) -> tuple[str, DendroNode, float]:
    """Build all four linkages and keep the one with the highest cophenetic
    correlation. Degenerate methods score 0; ties keep the latest method in
    the fixed order single < complete < average < weighted."""
    best = None
    degenerate = 0
    for method in LINKAGE_METHODS:
        tree = linkage_tree(m, method)
        try:
            c = cophenetic_correlation(m, tree)
        except DegenerateVariance:
            degenerate += 1
            c = 0.0
        if best is None or c >= best[2]:
            best = (method, tree, c)
    if degenerate == len(LINKAGE_METHODS):
        raise DegenerateVariance("all linkage methods degenerate")
    return best


def prune_clusters(tree: DendroNode, n: int, threshold_dist: float) -> list[list[str]]:
    """Cut the dendrogram into clusters of at most floor(sqrt(n)) members.

    Wide or tall nodes are descended, small enough nodes become clusters,
    and leaves that no cluster captured come back as singletons (outliers).
    """
    threshold_count = max(1, math.isqrt(n))
    clusters: list[list[str]] = []

    stack = [tree]
    while stack:
        node = stack.pop()
        if node is None:
            continue
        if node.dist > threshold_dist or node.count >= 2 * threshold_count:
            stack.append(node.right)
            stack.append(node.left)
        elif node.left is None or node.right is None:
            stack.append(node.right)
            stack.append(node.left)
        elif node.count <= threshold_count:
            clusters.append(sorted(node.leaves()))
        else:
            stack.append(node.right)
            stack.append(node.left)

    captured = {pid for c in clusters for pid in c}
    for pid in tree.leaves():
        if pid not in captured:
            clusters.append([pid])
    clusters.sort(key=lambda c: c[0])
    return clusters


def representative(members: list[str], m: DistanceMatrix) -> str:
    """Medoid: member with least RMS distance to the whole cluster."""
    if not members:
        raise ValueError("empty cluster")
    idx = [m.index_of(pid) for pid in members]
    sub = m.d[np.ix_(idx, idx)]
    rms = np.sqrt((sub ** 2).mean(axis=1))
    order = sorted(range(len(members)), key=lambda k: (rms[k], members[k]))
    return members[order[0]]


def default_threshold(m: DistanceMatrix) -> float:
    """Twice the median nonzero pairwise distance; 0 when all pairs tie."""
    iu = np.triu_indices(m.n, 1)
    vals = m.d[iu]
    nz = vals[vals > 0]
    return float(2 * np.median(nz)) if nz.size else 0.0


@dataclass(frozen=True)
class Cluster:
    members: tuple[str, ...]
    representative: str


@dataclass(frozen=True)
class ClusterSnapshot:
    problem_id: str
    linkage: Optional[str]
    cophenetic_c: float
    clusters: tuple[Cluster, ...]
    threshold_dist: float
    threshold_count: int
    created_at: str = field(default="", compare=False)

    def member_map(self) -> dict[str, int]:
        return {pid: k for k, c in enumerate(self.clusters) for pid in c.members}


def build_snapshot(m: DistanceMatrix, problem_id: str = "",
                   threshold_dist: Optional[float] = None) -> ClusterSnapshot:
    """Cluster one problem's matrix into a published snapshot."""
    created = datetime.now(timezone.utc).isoformat()
    n = m.n
    if n == 0:
        return ClusterSnapshot(problem_id, None, 0.0, (), 0.0, 0, created)
    thr = default_threshold(m) if threshold_dist is None else float(threshold_dist)
    if n < 3:
        # Too small for cophenetic selection; every program stands alone.
        clusters = tuple(Cluster((pid,), pid) for pid in sorted(m.ids))
        return ClusterSnapshot(problem_id, None, 0.0, clusters, thr,
                               max(1, math.isqrt(n)), created)
    try:
        method, tree, c = select_linkage(m)
    except DegenerateVariance:
        method, tree, c = "single", linkage_tree(m, "single"), 0.0
    groups = prune_clusters(tree, n, thr)
    clusters = tuple(
        Cluster(tuple(g), representative(g, m)) for g in groups
    )
    return ClusterSnapshot(problem_id, method, c, clusters, thr,
                           max(1, math.isqrt(n)), created)


# --- exports ----------------------------------------------------------------

def snapshot_to_dict(s: ClusterSnapshot, include_created=True) -> dict:
    out = {
        "problem_id": s.problem_id,
        "linkage": s.linkage,
        "cophenetic_c": s.cophenetic_c,
        "threshold_dist": s.threshold_dist,
        "threshold_count": s.threshold_count,
        "clusters": [
            {"id": k, "members": list(c.members), "representative": c.representative}
            for k, c in enumerate(s.clusters)
        ],
    }
    if include_created:
        out["created_at"] = s.created_at
    return out


def snapshot_canonical_json(s: ClusterSnapshot) -> str:
    """Byte-stable form: same input matrix, same bytes (timestamps excluded)."""
    return json.dumps(snapshot_to_dict(s, include_created=False),
                      sort_keys=True, separators=(",", ":")) + "\n"


def snapshot_from_dict(data: dict) -> ClusterSnapshot:
    return ClusterSnapshot(
        problem_id=data["problem_id"],
        linkage=data["linkage"],
        cophenetic_c=data["cophenetic_c"],
        clusters=tuple(
            Cluster(tuple(c["members"]), c["representative"])
            for c in data["clusters"]
        ),
        threshold_dist=data["threshold_dist"],
        threshold_count=data["threshold_count"],
        created_at=data.get("created_at", ""),
    )


def clusters_flat_text(s: ClusterSnapshot) -> str:
    """One line per membership: cluster index, member id, representative flag."""
    lines = []
    for k, c in enumerate(s.clusters):
        for pid in c.members:
            flag = 1 if pid == c.representative else 0
            lines.append(f"{k}\t{pid}\t{flag}")
    return "\n".join(lines) + ("\n" if lines else "")


def dendrogram_dict(tree: DendroNode) -> dict:
    if tree.is_leaf:
        return {"leaf_id": tree.leaf_id, "dist": tree.dist, "count": tree.count}
    return {
        "dist": tree.dist,
        "count": tree.count,
        "children": [dendrogram_dict(tree.left), dendrogram_dict(tree.right)],
    }


def forcegraph_dict(m: DistanceMatrix, s: ClusterSnapshot) -> dict:
    """Node/edge export for force-layout views; edges below the threshold."""
    member_map = s.member_map()
    reps = {c.representative for c in s.clusters}
    nodes = [
        {"id": pid, "cluster": member_map.get(pid), "representative": pid in reps}
        for pid in m.ids
    ]
    edges = []
    for i in range(m.n):
        for j in range(i + 1, m.n):
            w = float(m.d[i, j])
            if w < s.threshold_dist:
                edges.append({"source": m.ids[i], "target": m.ids[j], "weight": w})
    return {"nodes": nodes, "edges": edges}
