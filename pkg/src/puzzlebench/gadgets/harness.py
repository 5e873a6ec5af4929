"""Sealed test levels around one gadget, and the exhaustive property suite.

A harness embeds a gadget with a short sealed tunnel stub per port.  The
boundary config says which edge jellies start inside (docked); blue
tunnels carry a 2x1 jelly, red tunnels a 1x1.  ``verify_gadget`` asks the
solver whether the harness is winnable; the expected answer is exactly
"weighted inflow >= 2" (blue counts two, red one).

``closure_report`` walks the whole reachable configuration graph and
checks containment (nothing ever enters a foreign tunnel stub) and
reversibility (all station states with enough inflow sit in one strongly
connected component of the transition graph).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from ..jelly import (Jelly, JellyLevel, JellyState, apply_move, legal_moves,
                     is_won, canonical_key, BLACK)
from ..solver import solve, SearchLimits
from .templates import (EDGE_IDS, WIDTH, build_gadget, ports_of, signature_key,
                        SIGNATURES, V_ID)

STUB = 4


@dataclass(frozen=True)
class BoundaryConfig:
    inside: tuple   # three booleans, by slot (top, mid, bottom)

    def __post_init__(self):
        if len(self.inside) != 3:
            raise ValueError("a gadget has exactly three tunnels")


ALL_CONFIGS = tuple(BoundaryConfig((a, b, c))
                    for a in (True, False) for b in (True, False) for c in (True, False))


def inflow_weight(sig, config):
    return sum(w for (slot, _, w), here in zip(ports_of(sig), config.inside) if here)


def harness(sig, config, port_rows=None, stub=STUB):
    """A closed level wrapping the gadget; absent tunnels are sealed stubs."""
    t = build_gadget(sig, port_rows)
    off = stub
    width = t.width + 2 * stub
    walls = set()
    for y in range(t.height):
        for x in range(width):
            walls.add((x, y))
    for (x, y) in t.walls:
        walls.discard((x + off, y))
        walls.add((x + off, y))
    open_cells = {(x + off, y) for x in range(t.width) for y in range(t.height)
                  if (x, y) not in t.walls}
    for (slot, side, weight, r) in t.ports:
        if side == "L":
            stub_cells = {(x, r) for x in range(0, off + 1)}        # + doorway
        else:
            stub_cells = {(x, r) for x in range(off + t.width - 1, width)}
        open_cells |= stub_cells
    walls = frozenset((x, y) for x in range(width) for y in range(t.height)
                      if (x, y) not in open_cells)

    jellies = [Jelly(j.jid, j.colour, frozenset((x + off, y) for (x, y) in j.cells),
                     j.anchored) for j in t.jellies]
    for (slot, side, weight, r), here in zip(t.ports, config.inside):
        if not here:
            continue
        if side == "L":
            dock = [(off + 4, r)] if weight == 1 else [(off + 3, r), (off + 4, r)]
        else:
            dock = [(off + 9, r)] if weight == 1 else [(off + 9, r), (off + 10, r)]
        jellies.append(Jelly(EDGE_IDS[slot], BLACK, frozenset(dock)))
    level = JellyLevel(width, t.height, walls, tuple(jellies))
    level.validate()
    return level


def verify_gadget(sig, config, limits=SearchLimits(max_nodes=2_000_000)):
    """True/False per the solver; 'limit' is surfaced, never coerced."""
    out = solve(harness(sig, config), limits)
    if out.status == "limit":
        return "limit"
    return out.solved


def gadget_table(limits=SearchLimits(max_nodes=2_000_000)):
    """All 16 signatures x 8 configs: (signature, config, verdict, expected)."""
    rows = []
    for sig in SIGNATURES:
        for config in ALL_CONFIGS:
            verdict = verify_gadget(sig, config, limits)
            expected = inflow_weight(sig, config) >= 2
            rows.append((signature_key(sig), config.inside, verdict, expected))
    return rows


def _tunnel_zones(sig, port_rows=None, stub=STUB):
    t = build_gadget(sig, port_rows)
    zones = {}
    for (slot, side, weight, r) in t.ports:
        if side == "L":
            zones[slot] = {(x, r) for x in range(0, stub)}
        else:
            zones[slot] = {(x, r) for x in range(stub + t.width, t.width + 2 * stub)}
    return t, zones


def closure_report(sig, config, port_rows=None, limits=SearchLimits(max_nodes=2_000_000)):
    """Exhaustive closure with containment and reversibility verdicts.

    Returns a dict: states, containment_violations, station_states,
    station_scc_ok, solvable.
    """
    t, zones = _tunnel_zones(sig, port_rows)
    off = STUB
    level = harness(sig, config, port_rows)
    board_probe = JellyState.from_level(level)
    stride = board_probe.board.stride

    port_by_slot = {slot: (side, w, r) for (slot, side, w, r) in t.ports}
    zone_masks = {}
    for slot, cells in zones.items():
        m = 0
        for (x, y) in cells:
            m |= 1 << (y * stride + x)
        zone_masks[slot] = m
    inside_mask = 0
    for x in range(off + 1, off + t.width - 1):
        for y in range(t.height):
            inside_mask |= 1 << (y * stride + x)
    pit_mask = (1 << (t.pit_row * stride + off + t.well[0])) | \
               (1 << (t.pit_row * stride + off + t.well[1]))
    alcove_mask = (1 << (t.walk_row * stride + off + 2)) | \
                  (1 << (t.walk_row * stride + off + 3)) | \
                  (1 << (t.walk_row * stride + off + 4))
    row_masks = {}
    for slot, (side, w, r) in port_by_slot.items():
        m = 0
        for x in range(board_probe.board.width):
            m |= 1 << (r * stride + x)
        row_masks[slot] = m

    def piece_map(state):
        return {p[0]: p for p in state.pieces}

    def containment_ok(state):
        for p in state.pieces:
            jid, colour, anchored, mask = p
            for slot, zm in zone_masks.items():
                if mask & zm and jid != EDGE_IDS[slot]:
                    return False
        return True

    def is_station_state(state):
        pieces = piece_map(state)
        v = pieces.get(V_ID)
        if v is None or not (v[3] & alcove_mask) or v[3] & ~alcove_mask:
            return False
        occupied = 0
        for p in state.pieces:
            occupied |= p[3]
        if occupied & pit_mask:
            return False
        inflow = 0
        for slot, (side, w, r) in port_by_slot.items():
            p = pieces.get(EDGE_IDS[slot])
            if p is None:
                continue
            if p[3] & ~row_masks[slot]:
                return False       # dropped below its port row: not a station
            if p[3] & inside_mask:
                inflow += w
        return inflow >= 2

    start = JellyState.from_level(level)
    start_key = canonical_key(start)
    index = {start_key: 0}
    states = [start]
    edges = []
    queue = deque([start])
    violations = []
    solvable = is_won(start)
    while queue:
        state = queue.popleft()
        si = index[canonical_key(state)]
        for move in legal_moves(state):
            nxt = apply_move(state, move)
            k = canonical_key(nxt)
            if k not in index:
                index[k] = len(states)
                states.append(nxt)
                if len(states) > limits.max_nodes:
                    return {"status": "limit", "states": len(states)}
                if is_won(nxt):
                    solvable = True
                if not containment_ok(nxt):
                    violations.append(nxt)
                queue.append(nxt)
            edges.append((si, index[k]))

    station = [i for i, s in enumerate(states) if is_station_state(s)]
    scc_ok = _single_scc(len(states), edges, station)
    return {
        "status": "closed",
        "states": len(states),
        "transitions": len(edges),
        "containment_violations": len(violations),
        "station_states": len(station),
        "station_scc_ok": scc_ok,
        "solvable": solvable,
    }


def _single_scc(n, edges, nodes):
    """True iff all given nodes lie in one SCC of the transition graph."""
    if len(nodes) <= 1:
        return True
    fwd = [[] for _ in range(n)]
    rev = [[] for _ in range(n)]
    for a, b in edges:
        fwd[a].append(b)
        rev[a if False else b].append(a)

    def reach(adj, src):
        seen = bytearray(n)
        seen[src] = 1
        stack = [src]
        while stack:
            u = stack.pop()
            for v in adj[u]:
                if not seen[v]:
                    seen[v] = 1
                    stack.append(v)
        return seen

    src = nodes[0]
    f = reach(fwd, src)
    r = reach(rev, src)
    return all(f[i] and r[i] for i in nodes)
