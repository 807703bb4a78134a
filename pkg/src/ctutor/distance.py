"""Weighted edit distance between linear programs.

Token-level Levenshtein with a twist per token class: insert/delete cost a
flat weight, block markers cost triple (so the aligner anchors blocks), and
replacements between two expression tokens of the same kind cost a nested,
size-normalized expression distance capped at half the add/delete weight.
Programs are compared function by function after an exponential pairing
search with left-out and ordering penalties.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

from .linear import (
    Atom, CLOSE, EXPR_KINDS, LinearFunction, LinearProgram, LinearToken,
    OPEN, token_to_text,
)


@dataclass(frozen=True)
class Weights:
    """Edit cost configuration.

    By default replacements cap at half the add/delete cost, and block
    markers are three times as expensive to add or delete as anything else.
    """

    add_delete: float = 20.0
    replace_cap: float = 10.0
    block_multiplier: float = 3.0
    leftout_token_cost: float = 20.0
    ordering_penalty: float = 100.0
    max_exact_pairing: int = 7
    pairing_timeout: Optional[float] = None  # seconds, None = no limit

    def __post_init__(self):
        if min(self.add_delete, self.replace_cap, self.block_multiplier,
               self.leftout_token_cost, self.ordering_penalty) <= 0:
            raise ValueError("all weights must be positive")

    def indel(self, token: LinearToken) -> float:
        if token.kind in (OPEN, CLOSE):
            return self.block_multiplier * self.add_delete
        return self.add_delete


DEFAULT_WEIGHTS = Weights()


# --- expression distance ----------------------------------------------------

@lru_cache(maxsize=131072)
def _raw_lev(a: tuple[Atom, ...], b: tuple[Atom, ...]) -> int:
    """Unit-cost Levenshtein over postfix atoms, atoms compared by equality."""
    if not a:
        return len(b)
    if not b:
        return len(a)
    prev = list(range(len(b) + 1))
    for i, x in enumerate(a, 1):
        cur = [i] + [0] * len(b)
        for j, y in enumerate(b, 1):
            cur[j] = min(
                prev[j - 1] + (0 if x == y else 1),
                prev[j] + 1,
                cur[j - 1] + 1,
            )
        prev = cur
    return prev[len(b)]


def expr_distance(a: Optional[tuple[Atom, ...]], b: Optional[tuple[Atom, ...]],
                  w: Weights = DEFAULT_WEIGHTS) -> float:
    """Nested distance between two postfix atom lists, scaled into (0, cap].

    Raw distance is normalized by the longer list and scaled to the
    replacement cap; unequal expressions never cost less than 1. A missing
    expression (bare return) counts as an empty list.
    """
    ta = a or ()
    tb = b or ()
    if ta == tb:
        return 0.0
    raw = _raw_lev(ta, tb)
    scaled = round(w.replace_cap * raw / max(len(ta), len(tb)))
    return float(min(max(scaled, 1), w.replace_cap))


def token_replace_cost(a: LinearToken, b: LinearToken, w: Weights = DEFAULT_WEIGHTS) -> float:
    """Replacement cost: 0 if equal, nested distance for same-kind expression
    tokens, the flat cap otherwise. Token kind is part of equality, so an IF
    never matches a LOOP for free even with the same condition."""
    if a == b:
        return 0.0
    if a.kind == b.kind and a.kind in EXPR_KINDS:
        return expr_distance(a.expr, b.expr, w)
    return w.replace_cap


# --- edit script ------------------------------------------------------------

@dataclass(frozen=True)
class Insert:
    pos: int  # insert before this index of the source token list
    token: LinearToken


@dataclass(frozen=True)
class Delete:
    pos: int
    token: LinearToken


@dataclass(frozen=True)
class Replace:
    pos: int
    old: LinearToken
    new: LinearToken
    cost: float = 0.0


EditOp = Insert | Delete | Replace


def apply_script(tokens: tuple[LinearToken, ...], script: list[EditOp]) -> tuple[LinearToken, ...]:
    """Replay a script against its source token list."""
    inserts: dict[int, list[LinearToken]] = {}
    deletes: dict[int, bool] = {}
    replaces: dict[int, LinearToken] = {}
    for op in script:
        if isinstance(op, Insert):
            inserts.setdefault(op.pos, []).append(op.token)
        elif isinstance(op, Delete):
            deletes[op.pos] = True
        else:
            replaces[op.pos] = op.new
    out: list[LinearToken] = []
    for i in range(len(tokens) + 1):
        out.extend(inserts.get(i, ()))
        if i < len(tokens):
            if deletes.get(i):
                continue
            out.append(replaces.get(i, tokens[i]))
    return tuple(out)


def script_to_text(script: list[EditOp]) -> str:
    lines = []
    for op in script:
        if isinstance(op, Insert):
            lines.append(f"INS {op.pos} {token_to_text(op.token)}")
        elif isinstance(op, Delete):
            lines.append(f"DEL {op.pos} {token_to_text(op.token)}")
        else:
            lines.append(
                f"REP {op.pos} {token_to_text(op.old)} -> {token_to_text(op.new)} [{op.cost:g}]"
            )
    return "\n".join(lines)


# --- token-list distance ----------------------------------------------------

def token_distance(a: tuple[LinearToken, ...], b: tuple[LinearToken, ...],
                   w: Weights = DEFAULT_WEIGHTS) -> tuple[float, list[EditOp]]:
    """Minimal-cost edit script between two token lists.

    Backtrace tie-break prefers Replace over Delete over Insert, which keeps
    scripts deterministic for golden tests and stable hints.
    """
    m, n = len(a), len(b)
    del_w = [w.indel(t) for t in a]
    ins_w = [w.indel(t) for t in b]

    dp = [[0.0] * (n + 1) for _ in range(m + 1)]
    for i in range(1, m + 1):
        dp[i][0] = dp[i - 1][0] + del_w[i - 1]
    for j in range(1, n + 1):
        dp[0][j] = dp[0][j - 1] + ins_w[j - 1]
    rep = [[0.0] * n for _ in range(m)]
    for i in range(1, m + 1):
        for j in range(1, n + 1):
            r = token_replace_cost(a[i - 1], b[j - 1], w)
            rep[i - 1][j - 1] = r
            dp[i][j] = min(dp[i - 1][j - 1] + r,
                           dp[i - 1][j] + del_w[i - 1],
                           dp[i][j - 1] + ins_w[j - 1])

    ops: list[EditOp] = []
    i, j = m, n
    while i > 0 or j > 0:
        if i > 0 and j > 0 and dp[i][j] == dp[i - 1][j - 1] + rep[i - 1][j - 1]:
            if rep[i - 1][j - 1] > 0:
                ops.append(Replace(i - 1, a[i - 1], b[j - 1], rep[i - 1][j - 1]))
            i -= 1
            j -= 1
        elif i > 0 and dp[i][j] == dp[i - 1][j] + del_w[i - 1]:
            ops.append(Delete(i - 1, a[i - 1]))
            i -= 1
        else:
            ops.append(Insert(i, b[j - 1]))
            j -= 1
    ops.reverse()
    return dp[m][n], ops


@lru_cache(maxsize=8192)
def _cached_cost(a: tuple[LinearToken, ...], b: tuple[LinearToken, ...], w: Weights) -> float:
    m, n = len(a), len(b)
    del_w = [w.indel(t) for t in a]
    ins_w = [w.indel(t) for t in b]
    prev = [0.0] * (n + 1)
    for j in range(1, n + 1):
        prev[j] = prev[j - 1] + ins_w[j - 1]
    for i in range(1, m + 1):
        cur = [prev[0] + del_w[i - 1]] + [0.0] * n
        ai = a[i - 1]
        for j in range(1, n + 1):
            cur[j] = min(prev[j - 1] + token_replace_cost(ai, b[j - 1], w),
                         prev[j] + del_w[i - 1],
                         cur[j - 1] + ins_w[j - 1])
        prev = cur
    return prev[n]


# --- function pairing -------------------------------------------------------

@dataclass(frozen=True)
class Pairing:
    pairs: tuple[tuple[int, int], ...]  # (index into p1, index into p2)
    leftout_cost: float
    ordering_cost: float
    exact: bool  # False when the permutation search was skipped or timed out


def _identity_pairing(n1: int, n2: int, fns1, fns2, w: Weights) -> Pairing:
    k = min(n1, n2)
    pairs = tuple((i, i) for i in range(k))
    longer = fns1 if n1 > n2 else fns2
    leftout_tokens = sum(len(f.tokens) for f in longer[k:])
    return Pairing(pairs, leftout_tokens * w.leftout_token_cost, 0.0, exact=False)


def pair_functions(p1: LinearProgram, p2: LinearProgram,
                   w: Weights = DEFAULT_WEIGHTS) -> Pairing:
    """Choose which functions compare against which.

    All permutations of the longer program's function list are scored
    against the shorter list in first-use order: sum of pairwise edit costs,
    plus a penalty per left-out token and a penalty proportional to the
    fraction of functions moved out of their first-use position. Permuting
    the longer side regardless of argument order keeps the distance
    symmetric. Above the function-count limit (or on timeout) pairing falls
    back to first-use order with the longer program's tail left out.
    """
    fns1, fns2 = p1.functions, p2.functions
    n1, n2 = len(fns1), len(fns2)
    if n1 == 0 or n2 == 0:
        longer = fns1 if n1 else fns2
        leftout = sum(len(f.tokens) for f in longer)
        return Pairing((), leftout * w.leftout_token_cost, 0.0, exact=True)

    swapped = n1 > n2
    short, long_ = (fns2, fns1) if swapped else (fns1, fns2)
    ns, nl = len(short), len(long_)

    fallback = _identity_pairing(n1, n2, fns1, fns2, w)
    if nl > w.max_exact_pairing:
        return fallback

    cost = [[_cached_cost(s.tokens, g.tokens, w) for g in long_] for s in short]
    long_tokens = [len(g.tokens) for g in long_]

    deadline = (time.monotonic() + w.pairing_timeout
                if w.pairing_timeout is not None else None)
    best = None
    best_perm = None
    for perm in itertools.permutations(range(nl)):
        if deadline is not None and time.monotonic() > deadline:
            return fallback
        pair_cost = sum(cost[i][perm[i]] for i in range(ns))
        leftout = sum(long_tokens[perm[i]] for i in range(ns, nl)) * w.leftout_token_cost
        displaced = sum(1 for k in range(nl) if perm[k] != k)
        ordering = (displaced / nl) * w.ordering_penalty
        total = pair_cost + leftout + ordering
        if best is None or total < best[0]:
            best = (total, leftout, ordering)
            best_perm = perm

    pairs = tuple(
        (best_perm[i], i) if swapped else (i, best_perm[i])
        for i in range(ns)
    )
    return Pairing(pairs, best[1], best[2], exact=True)


# --- program distance -------------------------------------------------------

@dataclass(frozen=True)
class FunctionEdit:
    source_index: int
    target_index: int
    source_name: str
    target_name: str
    cost: float
    script: tuple[EditOp, ...] = field(compare=False)


@dataclass(frozen=True)
class DistanceResult:
    total: float
    per_function: tuple[FunctionEdit, ...]
    leftout_cost: float
    ordering_cost: float
    exact_pairing: bool

    def script_text(self) -> str:
        chunks = []
        for fe in self.per_function:
            chunks.append(f"PAIR {fe.source_name} -> {fe.target_name} [{fe.cost:g}]")
            text = script_to_text(list(fe.script))
            if text:
                chunks.append(text)
        return "\n".join(chunks)


def program_distance(p1: LinearProgram, p2: LinearProgram,
                     w: Weights = DEFAULT_WEIGHTS) -> DistanceResult:
    """Distance and edit script from p1 (the submission under scrutiny) to p2."""
    pairing = pair_functions(p1, p2, w)
    edits = []
    total = pairing.leftout_cost + pairing.ordering_cost
    for i, j in sorted(pairing.pairs):
        f1, f2 = p1.functions[i], p2.functions[j]
        cost, script = token_distance(f1.tokens, f2.tokens, w)
        edits.append(FunctionEdit(i, j, f1.name, f2.name, cost, tuple(script)))
        total += cost
    return DistanceResult(total, tuple(edits), pairing.leftout_cost,
                          pairing.ordering_cost, pairing.exact)
