import json
import math
import random

import numpy as np
import pytest

from ctutor.cluster import (
    Cluster, ClusterSnapshot, DegenerateVariance, DendroNode, DistanceMatrix,
    build_snapshot, clusters_flat_text, cophenetic_correlation,
    default_threshold, dendrogram_dict, forcegraph_dict, linkage_tree,
    prune_clusters, representative, select_linkage, snapshot_canonical_json,
    snapshot_from_dict, snapshot_to_dict,
)


def matrix(ids, rows):
    return DistanceMatrix(tuple(ids), np.array(rows, dtype=float))


def random_matrix(rng, n, low=1, high=60, integer=False):
    if integer:
        d = rng.integers(low, high, size=(n, n)).astype(float)
    else:
        d = rng.uniform(low, high, size=(n, n))
    d = np.triu(d, 1)
    return DistanceMatrix(tuple(f"p{i:02d}" for i in range(n)), d + d.T)


M3 = matrix("xyz", [[0, 1, 10], [1, 0, 10], [10, 10, 0]])

# Reference fixture: merge sequences and cophenetic coefficients computed
# offline with a well-known clustering library and frozen here.
D5 = matrix("abcde", [
    [0, 17, 21, 31, 23],
    [17, 0, 30, 34, 21],
    [21, 30, 0, 28, 39],
    [31, 34, 28, 0, 43],
    [23, 21, 39, 43, 0],
])
D5_MERGES = {
    "single": [("ab", 17.0), ("abc", 21.0), ("abce", 21.0), ("abcde", 28.0)],
    "complete": [("ab", 17.0), ("abe", 23.0), ("cd", 28.0), ("abcde", 43.0)],
    "average": [("ab", 17.0), ("abe", 22.0), ("cd", 28.0), ("abcde", 33.0)],
    "weighted": [("ab", 17.0), ("abe", 22.0), ("cd", 28.0), ("abcde", 35.0)],
}
D5_COPHENETIC = {
    "single": 0.6238458476,
    "complete": 0.7158611222,
    "average": 0.7302031612,
    "weighted": 0.7288051142,
}


def merge_steps(tree):
    """(sorted leaf string, height) per internal node, bottom-up order."""
    steps = []

    def walk(node):
        if node.is_leaf:
            return
        walk(node.left)
        walk(node.right)
        steps.append(("".join(sorted(node.leaves())), round(node.dist, 6)))

    walk(tree)
    return sorted(steps, key=lambda s: (s[1], s[0]))


# --- linkage ------------------------------------------------------------------

def test_single_leaf():
    tree = linkage_tree(matrix(["only"], [[0]]), "single")
    assert tree.is_leaf and tree.leaf_id == "only" and tree.count == 1


def test_three_point_first_merge_forced():
    for method in ("single", "complete", "average", "weighted"):
        tree = linkage_tree(M3, method)
        assert tree.count == 3
        first = tree.left if not tree.left.is_leaf else tree.right
        if first.is_leaf:  # n=3 root children: pair node and leaf
            first = tree.right
        assert sorted(first.leaves()) == ["x", "y"]
        assert first.dist == 1


@pytest.mark.parametrize("method", list(D5_MERGES))
def test_five_point_fixture_matches_reference(method):
    tree = linkage_tree(D5, method)
    assert merge_steps(tree) == sorted(D5_MERGES[method], key=lambda s: (s[1], s[0]))


def test_monotone_merge_heights(rng):
    nrng = np.random.default_rng(11)
    for n in (4, 7, 12, 25):
        m = random_matrix(nrng, n)
        for method in ("single", "complete", "average", "weighted"):
            tree = linkage_tree(m, method)

            def check(node):
                if node.is_leaf:
                    return
                assert node.dist >= node.left.dist - 1e-9
                assert node.dist >= node.right.dist - 1e-9
                check(node.left)
                check(node.right)

            check(tree)
            assert sorted(tree.leaves()) == sorted(m.ids)


def test_tie_break_smallest_pair():
    m = matrix("abcd", [
        [0, 5, 5, 9],
        [5, 0, 5, 9],
        [5, 5, 0, 9],
        [9, 9, 9, 0],
    ])
    tree = linkage_tree(m, "single")
    steps = merge_steps(tree)
    assert steps[0][0] == "ab"  # (a,b) preferred over (a,c) and (b,c)


def test_unknown_method_rejected():
    with pytest.raises(ValueError):
        linkage_tree(M3, "ward")


# --- cophenetic ----------------------------------------------------------------

def test_ultrametric_gives_perfect_correlation():
    m = matrix("abcd", [
        [0, 2, 8, 8],
        [2, 0, 8, 8],
        [8, 8, 0, 4],
        [8, 8, 4, 0],
    ])
    tree = linkage_tree(m, "single")
    assert cophenetic_correlation(m, tree) == pytest.approx(1.0)


def test_three_point_hand_computed():
    tree = linkage_tree(M3, "single")
    # cophenetic pairs: (x,y)=1, (x,z)=10, (y,z)=10, identical to the input
    assert cophenetic_correlation(M3, tree) == pytest.approx(1.0)


def test_equal_distances_degenerate():
    m = matrix("abc", [[0, 4, 4], [4, 0, 4], [4, 4, 0]])
    tree = linkage_tree(m, "single")
    with pytest.raises(DegenerateVariance):
        cophenetic_correlation(m, tree)


def test_five_point_cophenetic_values():
    for method, expected in D5_COPHENETIC.items():
        tree = linkage_tree(D5, method)
        assert cophenetic_correlation(D5, tree) == pytest.approx(expected, abs=1e-9)


# --- selection -------------------------------------------------------------------

def test_select_linkage_picks_argmax():
    method, _, c = select_linkage(D5)
    assert method == "average"
    assert c == pytest.approx(D5_COPHENETIC["average"], abs=1e-9)


def test_three_point_trees_coincide_tie_picks_weighted():
    method, _, c = select_linkage(M3)
    assert method == "weighted"
    assert c == pytest.approx(1.0)


def test_all_degenerate_raises():
    m = matrix("abc", [[0, 4, 4], [4, 0, 4], [4, 4, 0]])
    with pytest.raises(DegenerateVariance):
        select_linkage(m)


# --- pruning ---------------------------------------------------------------------

def test_four_identical_programs_bounded_clusters():
    m = matrix("abcd", np.zeros((4, 4)))
    tree = linkage_tree(m, "single")
    clusters = prune_clusters(tree, 4, threshold_dist=0.0)
    assert all(len(c) <= 2 for c in clusters)
    assert sorted(pid for c in clusters for pid in c) == list("abcd")


def test_single_program_singleton():
    tree = linkage_tree(matrix(["solo"], [[0]]), "single")
    assert prune_clusters(tree, 1, threshold_dist=10.0) == [["solo"]]


def test_two_separated_groups():
    ids = list("abcdef")
    d = np.full((6, 6), 500.0)
    for block in ([0, 1, 2], [3, 4, 5]):
        for i in block:
            for j in block:
                d[i, j] = 0 if i == j else 4.0
    m = matrix(ids, d)
    method, tree, _ = select_linkage(m)
    clusters = prune_clusters(tree, 6, threshold_dist=default_threshold(m))
    # thresholdCount = 2 forces subclusters of <=2 and at least 3 clusters
    flat = sorted(pid for c in clusters for pid in c)
    assert flat == ids
    assert all(len(c) <= 2 for c in clusters)
    assert len(clusters) >= 3
    for c in clusters:  # no cluster mixes the two groups
        assert set(c) <= {"a", "b", "c"} or set(c) <= {"d", "e", "f"}


def test_outliers_become_singletons():
    d = np.array([
        [0, 1, 90, 90],
        [1, 0, 90, 90],
        [90, 90, 0, 90],
        [90, 90, 90, 0],
    ], float)
    m = matrix("abcd", d)
    tree = linkage_tree(m, "single")
    clusters = prune_clusters(tree, 4, threshold_dist=10.0)
    assert ["a", "b"] in clusters
    assert ["c"] in clusters and ["d"] in clusters


def test_partition_property(rng):
    nrng = np.random.default_rng(3)
    for n in (5, 11, 30):
        m = random_matrix(nrng, n, integer=True)
        method, tree, _ = select_linkage(m)
        clusters = prune_clusters(tree, n, default_threshold(m))
        flat = [pid for c in clusters for pid in c]
        assert sorted(flat) == sorted(m.ids)
        assert len(flat) == len(set(flat))
        limit = max(1, math.isqrt(n))
        assert all(len(c) <= limit for c in clusters)
        assert len(clusters) >= math.ceil(n / limit)


# --- representatives ---------------------------------------------------------------

def test_singleton_representative():
    m = matrix(["a"], [[0]])
    assert representative(["a"], m) == "a"


def test_unique_medoid():
    m = matrix("abc", [[0, 1, 1], [1, 0, 2], [1, 2, 0]])
    assert representative(["a", "b", "c"], m) == "a"


def test_five_member_medoid_bruteforce(rng):
    nrng = np.random.default_rng(9)
    for _ in range(20):
        m = random_matrix(nrng, 5, integer=True)
        members = list(m.ids)
        got = representative(members, m)
        rms = {
            p: math.sqrt(sum(m.d[m.index_of(p), m.index_of(q)] ** 2 for q in members)
                         / len(members))
            for p in members
        }
        best = min(rms.values())
        assert rms[got] == pytest.approx(best)
        assert got == min(p for p in members if rms[p] == pytest.approx(best))


def test_representative_tie_smallest_id():
    m = matrix("ba", [[0, 2], [2, 0]])
    assert representative(["b", "a"], m) == "a"


# --- snapshots -------------------------------------------------------------------

def test_empty_snapshot():
    snap = build_snapshot(matrix([], np.zeros((0, 0))), "empty")
    assert snap.clusters == ()


def test_small_problem_one_cluster_per_program():
    m = matrix("ab", [[0, 3], [3, 0]])
    snap = build_snapshot(m, "tiny")
    assert [c.members for c in snap.clusters] == [("a",), ("b",)]
    assert snap.linkage is None


def test_snapshot_determinism_byte_identical():
    nrng = np.random.default_rng(4)
    m = random_matrix(nrng, 12, integer=True)
    one = snapshot_canonical_json(build_snapshot(m, "p"))
    two = snapshot_canonical_json(build_snapshot(m, "p"))
    assert one == two


def test_snapshot_round_trip():
    nrng = np.random.default_rng(5)
    m = random_matrix(nrng, 9, integer=True)
    snap = build_snapshot(m, "p")
    again = snapshot_from_dict(json.loads(json.dumps(snapshot_to_dict(snap))))
    assert again == snap  # created_at is excluded from equality


def test_representative_belongs_to_cluster():
    nrng = np.random.default_rng(6)
    m = random_matrix(nrng, 16, integer=True)
    snap = build_snapshot(m, "p")
    for c in snap.clusters:
        assert c.representative in c.members


def test_default_threshold_zero_when_all_identical():
    m = matrix("abcd", np.zeros((4, 4)))
    assert default_threshold(m) == 0.0
    snap = build_snapshot(m, "p")
    flat = sorted(pid for c in snap.clusters for pid in c.members)
    assert flat == list("abcd")


# --- exports ---------------------------------------------------------------------

def test_flat_export_shape():
    snap = ClusterSnapshot("p", "single", 0.9,
                           (Cluster(("a", "b"), "a"), Cluster(("c",), "c")),
                           10.0, 2)
    text = clusters_flat_text(snap)
    assert text == "0\ta\t1\n0\tb\t0\n1\tc\t1\n"


def test_dendrogram_export_nested():
    tree = linkage_tree(M3, "single")
    data = dendrogram_dict(tree)
    assert data["count"] == 3
    assert len(data["children"]) == 2

    def heights(node):
        if "children" not in node:
            return []
        return [node["dist"]] + heights(node["children"][0]) + heights(node["children"][1])

    hs = heights(data)
    assert hs == sorted(hs, reverse=True)


def test_forcegraph_export_edges_below_threshold():
    snap = build_snapshot(M3, "p", threshold_dist=5.0)
    graph = forcegraph_dict(M3, snap)
    assert {n["id"] for n in graph["nodes"]} == {"x", "y", "z"}
    assert graph["edges"] == [{"source": "x", "target": "y", "weight": 1.0}]
