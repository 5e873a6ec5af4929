"""Compile a restricted-NCL flip problem into a Jelly-No level.

Every vertex becomes a gadget placed at its visibility-representation
column; every edge becomes a height-1 tunnel at its dedicated row, linking
the two incident gadgets, carrying a jelly whose position (which gadget it
is docked in) encodes the edge's orientation.  The level is solvable
exactly when the flip problem is: each gadget's solving pit takes total
fill weight two, and the extra anchored jelly under the target gadget's
pit (multi-colour mode) or the target exit tunnel (one-black mode) forces
the target edge to finish pointing at the required vertex.

Modes:
  multi    - one colour per vertex plus one for the target edge; all other
             edge jellies black (a flag recolours them individually).
  oneblack - a single non-black colour shared by every vertex jelly and
             the target edge jelly; vertex jellies become 1x2, edge
             jellies double in width, and everything coloured must reach
             a global solving zone at the bottom of the level.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .jelly import Jelly, JellyLevel, JellyState, apply_move, is_won, BLACK
from .ncl import FlipProblem, legal_flips, apply_flips
from .visibility import layout, vertex_signature
from .solver import solve, SearchLimits, IllegalMoveAt
from .gadgets.templates import (build_gadget, build_gadget_oneblack,
                                VERTEX_COLOUR, V_ID, F_ID, OB_SHAFT, OB_VHOLE)

PITCH_Y = 10          # rows per visibility row (clears gadget under-hang)
TUNNEL_GAP = 8        # wall between adjacent gadget columns
TOP_MARGIN = 2
ZONE_HEIGHT = 8       # one-black solving zone

EDGE_ID_BASE = 100


class InvalidProblem(ValueError):
    pass


class FlipSequenceInvalid(ValueError):
    pass


@dataclass
class ReductionArtifact:
    level: JellyLevel
    mode: str
    problem: FlipProblem
    target_vertex: str
    edge_map: dict            # eid -> dict(jid, row, weight)
    vertex_map: dict          # vid -> dict(origin, template, ids, ports)
    colours: dict             # ledger: role -> colour label

    def edge_jelly(self, eid):
        return self.edge_map[eid]["jid"]


def _vertex_signatures(graph, rep):
    sigs = {}
    for vid, _ in graph.vertices:
        sigs[vid] = vertex_signature(rep, graph, vid)
    return sigs


def ncl_to_jelly(problem, mode="multi", all_coloured=False):
    """Compile; returns a ReductionArtifact whose level validates."""
    if mode not in ("multi", "oneblack"):
        raise InvalidProblem(f"unknown mode {mode!r}")
    try:
        problem.validate()
    except ValueError as exc:
        raise InvalidProblem(str(exc)) from exc
    graph = problem.graph
    target_vertex = graph.other_end(problem.target, problem.orientation[problem.target])

    rep = layout(graph, leftmost=target_vertex if mode == "oneblack" else None)
    sigs = _vertex_signatures(graph, rep)

    # global geometry
    build = build_gadget if mode == "multi" else build_gadget_oneblack
    gw = build(sigs[graph.vertices[0][0]]).width
    col_of = {vid: rep.bars[vid][0] for vid, _ in graph.vertices}
    x_origin = {vid: 1 + col_of[vid] * (gw + TUNNEL_GAP) for vid, _ in graph.vertices}
    row_of = {eid: TOP_MARGIN + seg[0] * PITCH_Y for eid, seg in rep.segments.items()}

    vertex_map = {}
    colours = {}
    edge_colour = {}
    vcolour = {}
    for i, (vid, _) in enumerate(graph.vertices):
        vcolour[vid] = "c1" if mode == "oneblack" else f"n{i}"
        colours[f"vertex {vid}"] = vcolour[vid]
    for j, (eid, u, v, w) in enumerate(graph.edges):
        if eid == problem.target:
            edge_colour[eid] = "c1" if mode == "oneblack" else "mt"
        elif all_coloured and mode == "multi":
            edge_colour[eid] = f"m{j}"
        else:
            edge_colour[eid] = BLACK
        colours[f"edge {eid}"] = edge_colour[eid]

    open_cells = set()
    jellies = []
    next_vid_ids = {}
    max_bottom = 0
    for i, (vid, _) in enumerate(graph.vertices):
        incident = sorted(graph.incident(vid), key=lambda e: row_of[e[0]])
        rows_global = [row_of[e[0]] for e in incident]
        y_top = rows_global[0] - 2
        local_rows = tuple(r - y_top for r in rows_global)
        t = build(sigs[vid], local_rows) if mode == "multi" else \
            build_gadget_oneblack(sigs[vid], local_rows,
                                  target_exit=(vid == target_vertex))
        ox = x_origin[vid]
        for y in range(t.height):
            for x in range(t.width):
                if (x, y) not in t.walls:
                    open_cells.add((ox + x, y_top + y))
        v_jid = 1000 + 2 * i
        f_jid = 1000 + 2 * i + 1
        for j in t.jellies:
            jid = v_jid if j.jid == V_ID else f_jid
            jellies.append(Jelly(jid, vcolour[vid],
                                 frozenset((ox + x, y_top + y) for (x, y) in j.cells),
                                 j.anchored))
        ports = {}
        for (slot, side, weight, r), e in zip(t.ports, incident):
            ports[e[0]] = (slot, side, weight)
        vertex_map[vid] = {
            "origin": (ox, y_top),
            "template": t,
            "rect": (ox, y_top, ox + t.width - 1, y_top + t.height - 1),
            "v_id": v_jid, "f_id": f_jid,
            "ports": ports,
        }
        max_bottom = max(max_bottom, y_top + t.height - 1)

    # tunnels between gadget borders (door cells included)
    edge_map = {}
    for j, (eid, u, v, w) in enumerate(graph.edges):
        left_v, right_v = (u, v) if col_of[u] < col_of[v] else (v, u)
        y = row_of[eid]
        x_from = x_origin[left_v] + gw - 1
        x_to = x_origin[right_v]
        for x in range(x_from, x_to + 1):
            open_cells.add((x, y))
        jid = EDGE_ID_BASE + j
        edge_map[eid] = {"jid": jid, "row": y, "weight": w,
                         "tunnel": (x_from, x_to)}

    # one-black plumbing: exit shafts and the global solving zone
    zone_top = None
    if mode == "oneblack":
        zone_top = max_bottom + 2
        for vid, _ in graph.vertices:
            vm = vertex_map[vid]
            ox, oy = vm["origin"]
            t = vm["template"]
            pit_g = oy + t.pit_row
            shaft_cols = [ox + x for x in t.exit_cols]
            for x in shaft_cols:
                for y in range(pit_g + 1, zone_top):
                    open_cells.add((x, y))

    width = max(x for x, _ in open_cells) + 2
    if mode == "oneblack":
        height = zone_top + ZONE_HEIGHT + 1
        for x in range(1, width - 1):
            for y in range(zone_top, zone_top + ZONE_HEIGHT):
                open_cells.add((x, y))
    else:
        height = max_bottom + 2

    # edge jellies at the head vertex's dock
    for eid, info in edge_map.items():
        head = problem.orientation[eid]
        vm = vertex_map[head]
        t = vm["template"]
        slot, side, weight = vm["ports"][eid]
        ox, oy = vm["origin"]
        cells = frozenset((ox + x, oy + y) for (x, y) in t.docks[slot])
        jellies.append(Jelly(info["jid"], edge_colour[eid], cells))

    # target enforcement (multi): anchored jelly in the ground of the pit
    if mode == "multi":
        vm = vertex_map[target_vertex]
        t = vm["template"]
        ox, oy = vm["origin"]
        ground = frozenset(((ox + t.well[0], oy + t.pit_row + 1),
                            (ox + t.well[1], oy + t.pit_row + 1)))
        open_cells.update(ground)
        jellies.append(Jelly(9999, edge_colour[problem.target], ground, anchored=True))

    walls = frozenset((x, y) for x in range(width) for y in range(height)
                      if (x, y) not in open_cells)
    meta = {
        "generator": "reduce-ncl",
        "mode": mode,
        "target_edge": problem.target,
        "target_vertex": target_vertex,
    }
    level = JellyLevel(width, height, walls, tuple(jellies), meta=meta)
    level.validate()
    art = ReductionArtifact(level, mode, problem, target_vertex,
                            edge_map, vertex_map, colours)
    art.zone_top = zone_top
    return art


def colour_count(level):
    """Number of distinct non-black colours in a level."""
    return len({j.colour for j in level.jellies if j.colour != BLACK})


# -------------------------------------------------------- witness translation

class _Sim:
    """Tracks the live state while the translator appends moves."""

    def __init__(self, level):
        self.level = level
        self.state = JellyState.from_level(level)
        self.moves = []

    def do(self, move):
        self.state = apply_move(self.state, move)
        self.moves.append(move)

    def piece(self, jid):
        return self.state.piece(jid)

    def cells(self, jid):
        p = self.piece(jid)
        return self.state.board.cells_of(p[3]) if p else None


def _slide_to(sim, jid, target_min_x):
    cur = min(x for x, _ in sim.cells(jid))
    while cur != target_min_x:
        d = "R" if target_min_x > cur else "L"
        sim.do((jid, d))
        nxt = min(x for x, _ in sim.cells(jid))
        if nxt == cur:
            raise FlipSequenceInvalid(f"jelly {jid} stuck sliding to {target_min_x}")
        cur = nxt


def witness_translate(artifact, flips):
    """Turn an NCL flip sequence into a winning move script.

    The flips shuttle edge jellies dock-to-dock through their tunnels; the
    endgame solves each gadget (fills its pit, walks the vertex jelly) and,
    in one-black mode, routes every coloured piece to the solving zone.
    Raises FlipSequenceInvalid if the flips are not a valid NCL solution.
    """
    problem = artifact.problem
    graph = problem.graph
    if not flips or flips[-1] != problem.target:
        raise FlipSequenceInvalid("sequence must end by flipping the target edge")
    try:
        final = apply_flips(graph, problem.orientation, flips)
    except ValueError as exc:
        raise FlipSequenceInvalid(str(exc)) from exc

    sim = _Sim(artifact.level)
    orientation = dict(problem.orientation)
    for eid in flips:
        head = orientation[eid]
        new_head = graph.other_end(eid, head)
        _dock_jelly(artifact, sim, eid, new_head)
        orientation[eid] = new_head

    if artifact.mode == "multi":
        for vid, _ in graph.vertices:
            _solve_gadget_multi(artifact, sim, vid, orientation)
    else:
        _solve_oneblack(artifact, sim, orientation)

    if not is_won(sim.state):
        raise FlipSequenceInvalid("translated script does not win (translator bug)")
    return sim.moves


def _dock_jelly(artifact, sim, eid, head_vid):
    vm = artifact.vertex_map[head_vid]
    t = vm["template"]
    slot, side, weight = vm["ports"][eid]
    ox, oy = vm["origin"]
    cells = sorted((ox + x, oy + y) for (x, y) in t.docks[slot])
    _slide_to(sim, artifact.edge_map[eid]["jid"], cells[0][0])


def _fills_for(artifact, vid, orientation):
    """Docked edge jellies chosen to fill this vertex's pit, widest first."""
    graph = artifact.problem.graph
    docked = [(eid, w) for (eid, u, v, w) in graph.edges
              if vid in (u, v) and orientation[eid] == vid]
    target = artifact.problem.target
    need = 2
    picked = []
    if artifact.mode == "multi" and vid == artifact.target_vertex:
        tw = dict(docked).get(target)
        if tw is None:
            raise FlipSequenceInvalid("target edge does not point at the target vertex")
        picked.append((target, tw))
        need -= tw
    for eid, w in sorted(docked, key=lambda t: -t[1]):
        if need <= 0:
            break
        if any(eid == p for p, _ in picked):
            continue
        picked.append((eid, w))
        need -= w
    if need > 0:
        raise FlipSequenceInvalid(f"vertex {vid} lacks inflow to solve its gadget")
    return picked


def _solve_gadget_multi(artifact, sim, vid, orientation):
    """Local-harness solve, replayed onto the global level.

    The gadget plus short tunnel stubs is rebuilt as a standalone level
    with the same piece ids and current dock positions; a BFS plan for it
    is then valid verbatim on the full level.
    """
    from .gadgets.harness import STUB
    vm = artifact.vertex_map[vid]
    t = vm["template"]
    ox, oy = vm["origin"]
    off = STUB

    width = t.width + 2 * off
    open_cells = {(x + off, y) for x in range(t.width) for y in range(t.height)
                  if (x, y) not in t.walls}
    for (slot, side, weight, r) in t.ports:
        if side == "L":
            open_cells |= {(x, r) for x in range(0, off + 1)}
        else:
            open_cells |= {(x, r) for x in range(off + t.width - 1, width)}
    jellies = [Jelly(vm["v_id"], VERTEX_COLOUR,
                     frozenset((x - ox + off, y - oy) for (x, y) in
                               sim.cells(vm["v_id"])))]
    fj = sim.piece(vm["f_id"])
    if fj is not None:
        jellies.append(Jelly(vm["f_id"], VERTEX_COLOUR,
                             frozenset((x - ox + off, y - oy) for (x, y) in
                                       sim.cells(vm["f_id"])), anchored=True))
    if vid == artifact.target_vertex:
        anchor = sim.cells(9999)
        target_jid = artifact.edge_map[artifact.problem.target]["jid"]
        cells = frozenset((x - ox + off, y - oy) for (x, y) in anchor)
        open_cells |= cells
        jellies.append(Jelly(9999, "mt", cells, anchored=True))
    for eid, (slot, side, weight) in vm["ports"].items():
        if orientation[eid] != vid:
            continue
        jid = artifact.edge_map[eid]["jid"]
        colour = "mt" if (vid == artifact.target_vertex
                          and eid == artifact.problem.target) else BLACK
        jellies.append(Jelly(jid, colour,
                             frozenset((x - ox + off, y - oy) for (x, y) in
                                       sim.cells(jid))))
    walls = frozenset((x, y) for x in range(width) for y in range(t.height)
                      if (x, y) not in open_cells)
    local = JellyLevel(width, t.height, walls, tuple(jellies))
    local.validate()
    out = solve(local, SearchLimits(max_nodes=2_000_000))
    if not out.solved:
        raise FlipSequenceInvalid(f"gadget at {vid} unsolvable in the endgame "
                                  f"({out.status})")
    for move in out.plan:
        sim.do(move)


def _commit_fill(artifact, sim, vid, eid):
    """Push a docked edge jelly into the well so it drops toward the pit."""
    vm = artifact.vertex_map[vid]
    t = vm["template"]
    ox, oy = vm["origin"]
    slot, side, weight = vm["ports"][eid]
    jid = artifact.edge_map[eid]["jid"]
    pit_y = oy + t.pit_row
    d = "R" if side == "L" else "L"
    guard = 0
    while True:
        before = sim.cells(jid)
        sim.do((jid, d))
        after = sim.cells(jid)
        if max(y for _, y in after) > max(y for _, y in before):
            return  # fell
        guard += 1
        if guard > t.width:
            raise FlipSequenceInvalid(f"fill {eid} never dropped at {vid}")


def _solve_oneblack(artifact, sim, orientation):
    graph = artifact.problem.graph
    target = artifact.problem.target
    tv = artifact.target_vertex

    for vid, _ in graph.vertices:
        vm = artifact.vertex_map[vid]
        t = vm["template"]
        ox, oy = vm["origin"]
        pit_y = oy + t.pit_row
        pitL, pitR = ox + t.well[0], ox + t.well[1]
        fills = _fills_for(artifact, vid, orientation)
        # the coloured target fill (if present) goes in last, right half
        fills.sort(key=lambda p: (p[0] == target, -p[1]))
        for eid, w in fills:
            _commit_fill(artifact, sim, vid, eid)
            jid = artifact.edge_map[eid]["jid"]
            guard = 0
            while max(y for _, y in sim.cells(jid)) < pit_y:
                # resting on an earlier fill: slide toward the free pit cells
                occupied = set()
                for p in sim.state.pieces:
                    if p[0] != jid:
                        occupied |= sim.state.board.cells_of(p[3])
                free = [x for x in range(pitL, pitR + 1)
                        if (x, pit_y) not in occupied]
                if not free:
                    raise FlipSequenceInvalid(f"no pit room at {vid}")
                d = "R" if min(free) > min(x for x, _ in sim.cells(jid)) else "L"
                sim.do((jid, d))
                guard += 1
                if guard > 2 * t.width:
                    raise FlipSequenceInvalid(f"fill {eid} cannot seat at {vid}")
        # walk the vertex jelly across the pit into its exit
        v_jid = vm["v_id"]
        alcove_x = min(x for x, _ in sim.cells(v_jid))
        d = "R" if alcove_x <= ox + t.well[0] else "L"
        guard = 0
        while sim.piece(v_jid) is not None:
            cells = sim.cells(v_jid)
            if min(y for _, y in cells) >= artifact.zone_top:
                break
            sim.do((v_jid, d))
            guard += 1
            if guard > artifact.level.width:
                raise FlipSequenceInvalid(f"vertex jelly stuck at {vid}")
        if vid == tv:
            # route the coloured blob (or the lone target jelly) to the shaft
            blob = artifact.edge_map[target]["jid"]
            if sim.piece(blob) is not None and \
                    max(y for _, y in sim.cells(blob)) == oy + vm["ports"][target][0] * 0 + \
                    artifact.edge_map[target]["row"]:
                _commit_fill(artifact, sim, vid, target)   # still docked: drop it in
            guard = 0
            while sim.piece(blob) is not None and \
                    min(y for _, y in sim.cells(blob)) < artifact.zone_top:
                sim.do((blob, "R"))
                guard += 1
                if guard > artifact.level.width:
                    raise FlipSequenceInvalid("target jelly stuck en route to zone")

    # compact every coloured piece in the zone into one jelly
    _compact_zone(artifact, sim)


def _compact_zone(artifact, sim):
    colour = "c1"
    guard = 0
    while True:
        pieces = [p for p in sim.state.pieces if p[1] == colour]
        if len(pieces) <= 1:
            return
        guard += 1
        if guard > 200:
            raise FlipSequenceInvalid("zone compaction does not converge")
        spans = []
        for p in pieces:
            xs = [x for x, _ in sim.state.board.cells_of(p[3])]
            spans.append((min(xs), p[0]))
        spans.sort()
        mover = spans[1][1]
        before = len(pieces)
        while sim.piece(mover) is not None and \
                len([p for p in sim.state.pieces if p[1] == colour]) == before:
            try:
                sim.do((mover, "L"))
            except Exception as exc:
                raise FlipSequenceInvalid(f"zone compaction blocked: {exc}") from exc
