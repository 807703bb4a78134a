"""Long-running engine: ingestion, distance matrix upkeep, periodic
clustering, and the two-level correction lookup.

Per problem there is exactly one writer: a worker thread that drains a FIFO
of distance-update jobs, so rows append sequentially and the matrix is
always consistent. Readers (corrections, exports) only ever see immutable
published snapshots. Pair computations inside one job may fan out to a
small thread pool.
"""

from __future__ import annotations

import json
import queue
import threading
from concurrent.futures import ThreadPoolExecutor
from typing import Optional

import numpy as np

from ..cluster import (
    ClusterSnapshot, DistanceMatrix, build_snapshot, dendrogram_dict,
    linkage_tree, snapshot_canonical_json, snapshot_from_dict,
    snapshot_to_dict,
)
from ..cparse import parse
from ..distance import program_distance
from ..hints import HintSet, filter_hints, script_to_hints
from ..linear import LinearProgram, program_from_text, program_to_text
from ..normalize import normalize
from ..spans import SourceError
from .config import ServiceConfig
from .store import Submission, open_store


class ProblemInactive(Exception):
    pass


class NoSnapshot(Exception):
    pass


class NotEnoughAttempts(Exception):
    def __init__(self, have: int, need: int):
        super().__init__(f"{have} of {need} required attempts")
        self.have = have
        self.need = need


class ParseFailed(Exception):
    def __init__(self, diagnostics: list[str]):
        super().__init__("; ".join(diagnostics))
        self.diagnostics = diagnostics


class _Worker:
    def __init__(self, name: str):
        self.jobs: queue.Queue = queue.Queue()
        self.thread = threading.Thread(target=self._run, name=name, daemon=True)
        self.thread.start()

    def _run(self):
        while True:
            job = self.jobs.get()
            try:
                job()
            finally:
                self.jobs.task_done()

    def submit(self, job):
        self.jobs.put(job)

    def drain(self):
        self.jobs.join()


class Engine:
    def __init__(self, config: ServiceConfig = ServiceConfig(), store=None):
        self.config = config
        self.store = store if store is not None else open_store(config.store_path)
        self._lock = threading.RLock()
        self._workers: dict[str, _Worker] = {}
        self._snapshots: dict[str, ClusterSnapshot] = {}
        self._programs: dict[str, LinearProgram] = {}
        self._counters: dict[str, int] = {}
        self._scheduler: Optional[threading.Timer] = None
        self.pair_count = 0  # program_distance evaluations, for instrumentation

    # -- helpers --------------------------------------------------------

    def _worker(self, problem_id: str) -> _Worker:
        with self._lock:
            w = self._workers.get(problem_id)
            if w is None:
                w = _Worker(f"dist-{problem_id}")
                self._workers[problem_id] = w
            return w

    def _next_id(self, problem_id: str) -> str:
        with self._lock:
            n = self._counters.get(problem_id)
            if n is None:
                n = len(self.store.submissions_for(problem_id))
            self._counters[problem_id] = n + 1
            return f"{problem_id}-{n + 1:05d}"

    def _program(self, sub_id: str) -> LinearProgram:
        with self._lock:
            prog = self._programs.get(sub_id)
        if prog is None:
            sub = self.store.get_submission(sub_id)
            if sub is None or sub.linear_text is None:
                raise KeyError(f"no normalized program for {sub_id!r}")
            prog = program_from_text(sub.linear_text)
            with self._lock:
                self._programs[sub_id] = prog
        return prog

    def _distance(self, a: LinearProgram, b: LinearProgram) -> float:
        with self._lock:
            self.pair_count += 1
        return program_distance(a, b, self.config.weights).total

    # -- ingestion --------------------------------------------------------

    def ingest(self, problem_id: str, author: str, source: str, correct: bool,
               marks: Optional[float] = None,
               submission_id: Optional[str] = None) -> tuple[str, list[str]]:
        """Parse, persist, and (for correct submissions) schedule the
        distance update. Returns immediately with (id, diagnostics)."""
        sub_id = submission_id or self._next_id(problem_id)
        diagnostics: list[str] = []
        linear_text = None
        try:
            program = normalize(parse(source, name=sub_id))
            linear_text = program_to_text(program)
        except SourceError as err:
            diagnostics.append(str(err.diagnostic()))
        sub = Submission(
            id=sub_id, problem_id=problem_id, author=author, source=source,
            linear_text=linear_text, correct=correct, marks=marks,
            diagnostics=tuple(diagnostics),
        )
        self.store.add_submission(sub)
        if correct and linear_text is not None:
            self._worker(problem_id).submit(
                lambda: self.update_distances(problem_id, sub_id)
            )
        return sub_id, diagnostics

    def update_distances(self, problem_id: str, sub_id: str):
        """Compute this member's distances against the whole matrix and
        append the row atomically. Runs on the problem's worker thread."""
        target = self._program(sub_id)
        members = self.store.matrix_members(problem_id)
        if self.config.workers > 1 and len(members) > 1:
            with ThreadPoolExecutor(max_workers=self.config.workers) as pool:
                costs = list(pool.map(
                    lambda other: self._distance(target, self._program(other)),
                    members,
                ))
        else:
            costs = [self._distance(target, self._program(other)) for other in members]
        self.store.add_matrix_row(problem_id, sub_id, list(zip(members, costs)))

    def drain(self, problem_id: Optional[str] = None):
        """Block until queued distance jobs finish (test and CLI support)."""
        with self._lock:
            if problem_id is None:
                workers = list(self._workers.values())
            elif problem_id in self._workers:
                workers = [self._workers[problem_id]]
            else:
                workers = []
        for w in workers:
            w.drain()

    # -- matrix and clustering ---------------------------------------------

    def matrix(self, problem_id: str) -> DistanceMatrix:
        members = self.store.matrix_members(problem_id)
        pairs = self.store.distances(problem_id)
        n = len(members)
        d = np.zeros((n, n))
        for i in range(n):
            for j in range(i + 1, n):
                a, b = members[i], members[j]
                d[i, j] = d[j, i] = pairs[(min(a, b), max(a, b))]
        return DistanceMatrix(tuple(members), d)

    def recluster(self, problem_id: str) -> ClusterSnapshot:
        """Rebuild and atomically publish this problem's snapshot."""
        snapshot = build_snapshot(self.matrix(problem_id), problem_id,
                                  self.config.threshold_dist)
        blob = json.dumps(snapshot_to_dict(snapshot))
        self.store.save_snapshot(problem_id, blob)
        with self._lock:
            self._snapshots[problem_id] = snapshot
        return snapshot

    def snapshot(self, problem_id: str) -> Optional[ClusterSnapshot]:
        with self._lock:
            snap = self._snapshots.get(problem_id)
        if snap is None:
            blob = self.store.load_snapshot(problem_id)
            if blob is not None:
                snap = snapshot_from_dict(json.loads(blob))
                with self._lock:
                    self._snapshots[problem_id] = snap
        return snap

    def dendrogram(self, problem_id: str) -> dict:
        snap = self.snapshot(problem_id)
        if snap is None:
            raise NoSnapshot(problem_id)
        m = self.matrix(problem_id)
        if m.n == 0:
            return {}
        method = snap.linkage or "single"
        return dendrogram_dict(linkage_tree(m, method))

    # -- corrections --------------------------------------------------------

    def corrections(self, problem_id: str, source: str,
                    author: Optional[str] = None) -> HintSet:
        """Two-level nearest-program lookup, then filtered hints.

        The input is compared with every cluster representative first, then
        with all members of the closest few clusters only.
        """
        if not self.store.is_active(problem_id):
            raise ProblemInactive(problem_id)
        snap = self.snapshot(problem_id)
        if snap is None or not snap.clusters:
            raise NoSnapshot(problem_id)
        if author is not None and self.config.min_attempts > 0:
            have = self.store.attempts(problem_id, author)
            if have < self.config.min_attempts:
                raise NotEnoughAttempts(have, self.config.min_attempts)

        try:
            student = normalize(parse(source, name="corrections-input"))
        except SourceError as err:
            raise ParseFailed([str(err.diagnostic())]) from err

        rep_dist = {
            c.representative: self._distance(student, self._program(c.representative))
            for c in snap.clusters
        }
        ranked = sorted(
            snap.clusters,
            key=lambda c: (rep_dist[c.representative], c.representative),
        )[: self.config.top_k]

        best_id, best_dist = None, None
        for cluster in ranked:
            for member in cluster.members:
                dist = (rep_dist[member] if member in rep_dist
                        else self._distance(student, self._program(member)))
                if best_dist is None or dist < best_dist or (
                        dist == best_dist and member < best_id):
                    best_id, best_dist = member, dist

        result = program_distance(student, self._program(best_id), self.config.weights)
        hints = script_to_hints(result, student, self.config.weights)
        return filter_hints(hints, result.total, student.token_count(),
                            self.config.hints, self.config.weights)

    # -- evaluation -----------------------------------------------------------

    def evaluate_variance(self, problem_id: str,
                          marks: Optional[dict[str, float]] = None) -> dict:
        """Overall marks variance vs the cluster-size-weighted average of
        per-cluster variances. Members without marks are excluded and named."""
        snap = self.snapshot(problem_id)
        if snap is None:
            raise NoSnapshot(problem_id)
        if marks is None:
            marks = {
                s.id: s.marks
                for s in self.store.submissions_for(problem_id)
                if s.marks is not None
            }

        excluded = []
        rows = []
        weighted_sum = 0.0
        weight_total = 0
        all_marks = []
        for k, cluster in enumerate(snap.clusters):
            got = [marks[m] for m in cluster.members if m in marks]
            excluded.extend(m for m in cluster.members if m not in marks)
            if not got:
                continue
            var = float(np.var(got))  # population variance; singletons give 0
            rows.append({
                "cluster": k,
                "size": len(got),
                "mean": float(np.mean(got)),
                "variance": var,
            })
            weighted_sum += var * len(got)
            weight_total += len(got)
            all_marks.extend(got)

        overall = float(np.var(all_marks)) if all_marks else 0.0
        weighted = weighted_sum / weight_total if weight_total else 0.0
        return {
            "problem_id": problem_id,
            "overall_variance": overall,
            "weighted_cluster_variance": weighted,
            "reduction": 1.0 - (weighted / overall) if overall > 0 else 0.0,
            "clusters": rows,
            "excluded": sorted(excluded),
        }

    # -- scheduling -----------------------------------------------------------

    def start_scheduler(self):
        """Recluster every active problem on a fixed period."""

        def tick():
            for problem_id in self.store.problems():
                if self.store.matrix_members(problem_id):
                    self.recluster(problem_id)
            with self._lock:
                self._scheduler = threading.Timer(self.config.recluster_period, tick)
                self._scheduler.daemon = True
                self._scheduler.start()

        with self._lock:
            self._scheduler = threading.Timer(self.config.recluster_period, tick)
            self._scheduler.daemon = True
            self._scheduler.start()

    def stop_scheduler(self):
        with self._lock:
            if self._scheduler is not None:
                self._scheduler.cancel()
                self._scheduler = None

    def canonical_snapshot_json(self, problem_id: str) -> str:
        snap = self.snapshot(problem_id)
        if snap is None:
            raise NoSnapshot(problem_id)
        return snapshot_canonical_json(snap)
