"""Submission persistence: an in-memory store for tests and an embedded
SQLite store for durable deployments.

Logical schema is the same in both: submissions, an ordered matrix
membership list per problem with pairwise distances, snapshot blobs, and
the per-problem activation flag. Matrix appends are atomic, so readers
never observe a row without its column.
"""

from __future__ import annotations

import json
import sqlite3
import threading
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Optional


@dataclass(frozen=True)
class Submission:
    id: str
    problem_id: str
    author: str
    source: str
    linear_text: Optional[str]  # set iff parse+normalize succeeded
    correct: bool
    marks: Optional[float] = None
    diagnostics: tuple[str, ...] = ()
    created_at: str = field(default="", compare=False)

    @property
    def parsed(self) -> bool:
        return self.linear_text is not None


def _now() -> str:
    return datetime.now(timezone.utc).isoformat()


class MemoryStore:
    """Dict-backed store; the reference implementation of the contract."""

    def __init__(self):
        self._lock = threading.RLock()
        self._submissions: dict[str, Submission] = {}
        self._by_problem: dict[str, list[str]] = {}
        self._members: dict[str, list[str]] = {}
        self._distances: dict[str, dict[tuple[str, str], float]] = {}
        self._snapshots: dict[str, str] = {}
        self._active: dict[str, bool] = {}

    def close(self):
        pass

    def add_submission(self, sub: Submission):
        with self._lock:
            if sub.id in self._submissions:
                raise ValueError(f"duplicate submission id {sub.id!r}")
            self._submissions[sub.id] = sub
            self._by_problem.setdefault(sub.problem_id, []).append(sub.id)

    def get_submission(self, sub_id: str) -> Optional[Submission]:
        with self._lock:
            return self._submissions.get(sub_id)

    def submissions_for(self, problem_id: str) -> list[Submission]:
        with self._lock:
            return [self._submissions[i] for i in self._by_problem.get(problem_id, [])]

    def attempts(self, problem_id: str, author: str) -> int:
        with self._lock:
            return sum(
                1 for i in self._by_problem.get(problem_id, [])
                if self._submissions[i].author == author
            )

    def matrix_members(self, problem_id: str) -> list[str]:
        with self._lock:
            return list(self._members.get(problem_id, []))

    def add_matrix_row(self, problem_id: str, sub_id: str,
                       pairs: list[tuple[str, float]]):
        """Append one member and all its distances in one atomic step."""
        with self._lock:
            members = self._members.setdefault(problem_id, [])
            dist = self._distances.setdefault(problem_id, {})
            if sub_id in members:
                raise ValueError(f"{sub_id!r} already in matrix")
            if {other for other, _ in pairs} != set(members):
                raise ValueError("row does not cover existing members")
            for other, cost in pairs:
                key = (min(sub_id, other), max(sub_id, other))
                dist[key] = cost
            members.append(sub_id)

    def distances(self, problem_id: str) -> dict[tuple[str, str], float]:
        with self._lock:
            return dict(self._distances.get(problem_id, {}))

    def save_snapshot(self, problem_id: str, blob: str):
        with self._lock:
            self._snapshots[problem_id] = blob

    def load_snapshot(self, problem_id: str) -> Optional[str]:
        with self._lock:
            return self._snapshots.get(problem_id)

    def set_active(self, problem_id: str, active: bool):
        with self._lock:
            self._active[problem_id] = active

    def is_active(self, problem_id: str) -> bool:
        with self._lock:
            return self._active.get(problem_id, False)

    def problems(self) -> list[str]:
        with self._lock:
            return sorted(set(self._by_problem) | set(self._active))


class SqliteStore:
    """Durable embedded store with the same contract as MemoryStore."""

    def __init__(self, path: str):
        self._lock = threading.RLock()
        self._conn = sqlite3.connect(path, check_same_thread=False)
        self._conn.execute("PRAGMA journal_mode=WAL")
        self._init_schema()

    def _init_schema(self):
        with self._lock, self._conn:
            self._conn.executescript("""
                CREATE TABLE IF NOT EXISTS submissions (
                    id TEXT PRIMARY KEY,
                    problem_id TEXT NOT NULL,
                    author TEXT NOT NULL,
                    source TEXT NOT NULL,
                    linear_text TEXT,
                    correct INTEGER NOT NULL,
                    marks REAL,
                    diagnostics TEXT NOT NULL,
                    created_at TEXT NOT NULL,
                    seq INTEGER
                );
                CREATE INDEX IF NOT EXISTS idx_sub_problem ON submissions(problem_id);
                CREATE TABLE IF NOT EXISTS matrix_members (
                    problem_id TEXT NOT NULL,
                    submission_id TEXT NOT NULL,
                    position INTEGER NOT NULL,
                    PRIMARY KEY (problem_id, submission_id)
                );
                CREATE TABLE IF NOT EXISTS distances (
                    problem_id TEXT NOT NULL,
                    id_a TEXT NOT NULL,
                    id_b TEXT NOT NULL,
                    cost REAL NOT NULL,
                    PRIMARY KEY (problem_id, id_a, id_b)
                );
                CREATE TABLE IF NOT EXISTS snapshots (
                    problem_id TEXT PRIMARY KEY,
                    blob TEXT NOT NULL
                );
                CREATE TABLE IF NOT EXISTS activation (
                    problem_id TEXT PRIMARY KEY,
                    active INTEGER NOT NULL
                );
            """)

    def close(self):
        with self._lock:
            self._conn.close()

    def add_submission(self, sub: Submission):
        with self._lock, self._conn:
            self._conn.execute(
                "INSERT INTO submissions "
                "(id, problem_id, author, source, linear_text, correct, marks,"
                " diagnostics, created_at) VALUES (?,?,?,?,?,?,?,?,?)",
                (sub.id, sub.problem_id, sub.author, sub.source, sub.linear_text,
                 int(sub.correct), sub.marks, json.dumps(list(sub.diagnostics)),
                 sub.created_at or _now()),
            )

    @staticmethod
    def _row_to_submission(row) -> Submission:
        return Submission(
            id=row[0], problem_id=row[1], author=row[2], source=row[3],
            linear_text=row[4], correct=bool(row[5]), marks=row[6],
            diagnostics=tuple(json.loads(row[7])), created_at=row[8],
        )

    _COLS = "id, problem_id, author, source, linear_text, correct, marks, diagnostics, created_at"

    def get_submission(self, sub_id: str) -> Optional[Submission]:
        with self._lock:
            row = self._conn.execute(
                f"SELECT {self._COLS} FROM submissions WHERE id=?", (sub_id,)
            ).fetchone()
        return self._row_to_submission(row) if row else None

    def submissions_for(self, problem_id: str) -> list[Submission]:
        with self._lock:
            rows = self._conn.execute(
                f"SELECT {self._COLS} FROM submissions WHERE problem_id=? ORDER BY rowid",
                (problem_id,),
            ).fetchall()
        return [self._row_to_submission(r) for r in rows]

    def attempts(self, problem_id: str, author: str) -> int:
        with self._lock:
            (count,) = self._conn.execute(
                "SELECT COUNT(*) FROM submissions WHERE problem_id=? AND author=?",
                (problem_id, author),
            ).fetchone()
        return count

    def matrix_members(self, problem_id: str) -> list[str]:
        with self._lock:
            rows = self._conn.execute(
                "SELECT submission_id FROM matrix_members WHERE problem_id=? ORDER BY position",
                (problem_id,),
            ).fetchall()
        return [r[0] for r in rows]

    def add_matrix_row(self, problem_id: str, sub_id: str,
                       pairs: list[tuple[str, float]]):
        with self._lock, self._conn:
            members = self.matrix_members(problem_id)
            if sub_id in members:
                raise ValueError(f"{sub_id!r} already in matrix")
            if {other for other, _ in pairs} != set(members):
                raise ValueError("row does not cover existing members")
            self._conn.executemany(
                "INSERT INTO distances (problem_id, id_a, id_b, cost) VALUES (?,?,?,?)",
                [(problem_id, min(sub_id, o), max(sub_id, o), c) for o, c in pairs],
            )
            self._conn.execute(
                "INSERT INTO matrix_members (problem_id, submission_id, position) VALUES (?,?,?)",
                (problem_id, sub_id, len(members)),
            )

    def distances(self, problem_id: str) -> dict[tuple[str, str], float]:
        with self._lock:
            rows = self._conn.execute(
                "SELECT id_a, id_b, cost FROM distances WHERE problem_id=?",
                (problem_id,),
            ).fetchall()
        return {(a, b): c for a, b, c in rows}

    def save_snapshot(self, problem_id: str, blob: str):
        with self._lock, self._conn:
            self._conn.execute(
                "INSERT INTO snapshots (problem_id, blob) VALUES (?,?) "
                "ON CONFLICT(problem_id) DO UPDATE SET blob=excluded.blob",
                (problem_id, blob),
            )

    def load_snapshot(self, problem_id: str) -> Optional[str]:
        with self._lock:
            row = self._conn.execute(
                "SELECT blob FROM snapshots WHERE problem_id=?", (problem_id,)
            ).fetchone()
        return row[0] if row else None

    def set_active(self, problem_id: str, active: bool):
        with self._lock, self._conn:
            self._conn.execute(
                "INSERT INTO activation (problem_id, active) VALUES (?,?) "
                "ON CONFLICT(problem_id) DO UPDATE SET active=excluded.active",
                (problem_id, int(active)),
            )

    def is_active(self, problem_id: str) -> bool:
        with self._lock:
            row = self._conn.execute(
                "SELECT active FROM activation WHERE problem_id=?", (problem_id,)
            ).fetchone()
        return bool(row[0]) if row else False

    def problems(self) -> list[str]:
        with self._lock:
            rows = self._conn.execute(
                "SELECT DISTINCT problem_id FROM submissions "
                "UNION SELECT problem_id FROM activation"
            ).fetchall()
        return sorted(r[0] for r in rows)


def open_store(path: str):
    """':memory:' gives the test store; anything else is a SQLite file."""
    if path == ":memory:":
        return MemoryStore()
    return SqliteStore(path)
