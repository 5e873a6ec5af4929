"""Exhaustive reachability over a level's configuration graph.

BFS explores states in nondecreasing move count with canonical-digest
deduplication and a fixed move order (pieces by id, Left before Right,
shifts before swaps), so returned plans are shortest and runs are
deterministic.  ``naive_solve`` is an independent enumerator that stores
full states instead of digests; the test suite cross-checks the two.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
import time

from . import jelly, hanano


@dataclass(frozen=True)
class SearchLimits:
    max_nodes: int = 10_000_000
    max_queue: int = 10_000_000
    max_seconds: float = None

    def __post_init__(self):
        if self.max_nodes <= 0 or self.max_queue <= 0:
            raise ValueError("limits must be positive")


@dataclass
class SearchOutcome:
    status: str                  # "solved" | "unsolvable" | "limit"
    plan: list = None
    explored: int = 0

    @property
    def solved(self):
        return self.status == "solved"


@dataclass
class ReachStats:
    status: str                  # "closed" | "limit"
    states: int
    transitions: int


class IllegalMoveAt(Exception):
    def __init__(self, index, cause):
        super().__init__(f"illegal move at index {index}: {cause}")
        self.index = index
        self.cause = cause


class _Game:
    """Uniform facade over the two engines."""

    def __init__(self, initial, moves, apply, won, key, fullkey):
        self.initial = initial
        self.moves = moves
        self.apply = apply
        self.won = won
        self.key = key
        self.fullkey = fullkey


def game_for(level):
    if isinstance(level, jelly.JellyLevel):
        level.validate()
        return _Game(jelly.JellyState.from_level(level), jelly.legal_moves,
                     jelly.apply_move, jelly.is_won, jelly.canonical_key, jelly.full_key)
    if isinstance(level, hanano.HananoLevel):
        level.validate()
        return _Game(hanano.HananoState.from_level(level), hanano.legal_actions,
                     hanano.apply_action, hanano.is_won, hanano.canonical_key, hanano.full_key)
    raise TypeError(f"not a level: {level!r}")


def solve(level, limits=SearchLimits(), strategy="bfs", paranoid=False):
    g = game_for(level)
    if strategy == "bfs":
        return _bfs(g, limits, paranoid)
    if strategy == "iddfs":
        return _iddfs(g, limits)
    raise ValueError(f"unknown strategy {strategy!r}")


def _bfs(g, limits, paranoid=False):
    start = g.initial
    deadline = None if limits.max_seconds is None else time.monotonic() + limits.max_seconds
    k0 = g.key(start)
    visited = {k0: (None, None)}
    shadow = {k0: g.fullkey(start)} if paranoid else None
    if g.won(start):
        return SearchOutcome("solved", [], 1)
    queue = deque([start])
    explored = 0
    while queue:
        state = queue.popleft()
        explored += 1
        if explored > limits.max_nodes:
            return SearchOutcome("limit", None, explored)
        if deadline is not None and explored % 256 == 0 and time.monotonic() > deadline:
            return SearchOutcome("limit", None, explored)
        skey = g.key(state)
        for move in g.moves(state):
            nxt = g.apply(state, move)
            nkey = g.key(nxt)
            if nkey in visited:
                if paranoid and shadow[nkey] != g.fullkey(nxt):
                    raise AssertionError("canonical key collision detected")
                continue
            visited[nkey] = (skey, move)
            if paranoid:
                shadow[nkey] = g.fullkey(nxt)
            if g.won(nxt):
                return SearchOutcome("solved", _plan(visited, nkey), explored)
            if len(visited) > limits.max_queue:
                return SearchOutcome("limit", None, explored)
            queue.append(nxt)
    return SearchOutcome("unsolvable", None, explored)


def _plan(visited, key):
    plan = []
    while True:
        parent, move = visited[key]
        if move is None:
            break
        plan.append(move)
        key = parent
    plan.reverse()
    return plan


def _iddfs(g, limits):
    """Depth-bounded DFS with a best-depth transposition table."""
    start = g.initial
    deadline = None if limits.max_seconds is None else time.monotonic() + limits.max_seconds
    explored_total = 0
    depth = 0
    while True:
        best = {g.key(start): 0}
        cut = False
        plan = []
        found = None

        def dfs(state, d):
            nonlocal cut, explored_total, found
            if found is not None:
                return
            explored_total += 1
            if explored_total > limits.max_nodes:
                raise _LimitHit
            if deadline is not None and explored_total % 256 == 0 and time.monotonic() > deadline:
                raise _LimitHit
            if g.won(state):
                found = list(plan)
                return
            if d == depth:
                cut = True
                return
            for move in g.moves(state):
                nxt = g.apply(state, move)
                nkey = g.key(nxt)
                if best.get(nkey, d + 2) <= d + 1:
                    continue
                best[nkey] = d + 1
                if len(best) > limits.max_queue:
                    raise _LimitHit
                plan.append(move)
                dfs(nxt, d + 1)
                plan.pop()
                if found is not None:
                    return

        try:
            dfs(start, 0)
        except _LimitHit:
            return SearchOutcome("limit", None, explored_total)
        if found is not None:
            return SearchOutcome("solved", found, explored_total)
        if not cut:
            return SearchOutcome("unsolvable", None, explored_total)
        depth += 1


class _LimitHit(Exception):
    pass


def verify_script(level, moves):
    """Replay a move list; True iff every move is legal and the end state wins."""
    g = game_for(level)
    state = g.initial
    for i, move in enumerate(moves):
        try:
            state = g.apply(state, move)
        except Exception as exc:  # noqa: BLE001 - engine move errors become indexed
            raise IllegalMoveAt(i, exc) from exc
    return g.won(state)


def run_script(level, moves):
    """Replay and return the final state (raises IllegalMoveAt on bad moves)."""
    g = game_for(level)
    state = g.initial
    for i, move in enumerate(moves):
        try:
            state = g.apply(state, move)
        except Exception as exc:  # noqa: BLE001
            raise IllegalMoveAt(i, exc) from exc
    return state


def reachable_stats(level, limits=SearchLimits()):
    """Exact closure counts: (states, transitions) or LimitReached outcome."""
    g = game_for(level)
    start = g.initial
    seen = {g.key(start)}
    queue = deque([start])
    transitions = 0
    while queue:
        state = queue.popleft()
        for move in g.moves(state):
            transitions += 1
            nxt = g.apply(state, move)
            nkey = g.key(nxt)
            if nkey in seen:
                continue
            seen.add(nkey)
            if len(seen) > limits.max_nodes:
                return ReachStats("limit", len(seen), transitions)
            queue.append(nxt)
    return ReachStats("closed", len(seen), transitions)


def naive_solve(level, limits=SearchLimits()):
    """Independent oracle: BFS storing full structural states, no digests.

    Deliberately separate from ``solve`` so the two can cross-check each
    other on outcome and plan length.
    """
    g = game_for(level)
    start = g.initial
    if g.won(start):
        return SearchOutcome("solved", [], 1)
    seen = {g.fullkey(start)}
    queue = deque([(start, [])])
    explored = 0
    while queue:
        state, path = queue.popleft()
        explored += 1
        if explored > limits.max_nodes:
            return SearchOutcome("limit", None, explored)
        for move in g.moves(state):
            nxt = g.apply(state, move)
            fk = g.fullkey(nxt)
            if fk in seen:
                continue
            seen.add(fk)
            if g.won(nxt):
                return SearchOutcome("solved", path + [move], explored)
            queue.append((nxt, path + [move]))
    return SearchOutcome("unsolvable", None, explored)
