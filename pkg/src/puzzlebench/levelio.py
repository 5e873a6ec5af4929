"""Text formats: levels, NCL graphs, partition instances, move scripts.

The level encoding is canonical (sorted ids, sorted cells, fixed wrapping)
so serialize(parse(text)) == text for canonical documents and golden files
diff cleanly.  All formats carry a version header.
"""

from __future__ import annotations

import re

from .jelly import Jelly, JellyLevel, BLACK
from .hanano import Block, Flower, HananoLevel
from .ncl import NCLGraph, FlipProblem

LEVEL_HEADER = "puzzlebench-level v1"
NCL_HEADER = "puzzlebench-ncl v1"
INSTANCE_HEADER = "puzzlebench-instance v1"

HANANO_COLOURS = ("red", "blue", "yellow")
_COLOUR_RE = re.compile(r"^[a-z][a-z0-9_]*$")
_WRAP = 12  # cells per walls line


class LevelFormatError(ValueError):
    """Raised on malformed documents; .code is one of the format error names."""

    def __init__(self, code, message):
        super().__init__(f"{code}: {message}")
        self.code = code


def _err(code, message):
    raise LevelFormatError(code, message)


def _parse_cell(tok, what):
    m = re.fullmatch(r"(-?\d+),(-?\d+)", tok)
    if not m:
        _err("Syntax", f"bad cell {tok!r} in {what}")
    return (int(m.group(1)), int(m.group(2)))


def _fmt_cell(c):
    return f"{c[0]},{c[1]}"


def _sorted_cells(cells):
    return sorted(cells, key=lambda c: (c[1], c[0]))


def _check_bounds(cells, width, height, what):
    for (x, y) in cells:
        if not (0 <= x < width and 0 <= y < height):
            _err("Bounds", f"{what} cell {(x, y)} outside {width}x{height}")


def _connected(cells):
    cells = set(cells)
    start = next(iter(cells))
    stack, seen = [start], {start}
    while stack:
        x, y = stack.pop()
        for nb in ((x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1)):
            if nb in cells and nb not in seen:
                seen.add(nb)
                stack.append(nb)
    return len(seen) == len(cells)


def parse_level(text):
    lines = [ln.rstrip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines or lines[0] != LEVEL_HEADER:
        _err("Syntax", f"missing header {LEVEL_HEADER!r}")
    game = width = height = None
    meta = {}
    walls = []
    jellies = []
    blocks = []
    flowers = []
    for ln in lines[1:]:
        parts = ln.split()
        tag = parts[0]
        if tag == "game":
            if len(parts) != 2 or parts[1] not in ("jelly", "hanano"):
                _err("Syntax", f"bad game line {ln!r}")
            game = parts[1]
        elif tag == "size":
            if len(parts) != 3:
                _err("Syntax", f"bad size line {ln!r}")
            width, height = int(parts[1]), int(parts[2])
            if width <= 0 or height <= 0:
                _err("Bounds", "non-positive dimensions")
        elif tag == "meta":
            if len(parts) < 3:
                _err("Syntax", f"bad meta line {ln!r}")
            meta[parts[1]] = " ".join(parts[2:])
        elif tag == "walls":
            walls.extend(_parse_cell(t, "walls") for t in parts[1:])
        elif tag == "jelly":
            # jelly <id> <colour> <anchored|movable> <cells...>
            if len(parts) < 5:
                _err("Syntax", f"bad jelly line {ln!r}")
            jid = int(parts[1])
            colour = parts[2]
            if not _COLOUR_RE.match(colour):
                _err("BadColour", f"bad colour {colour!r}")
            if parts[3] not in ("anchored", "movable"):
                _err("Syntax", f"bad anchor flag in {ln!r}")
            cells = frozenset(_parse_cell(t, f"jelly {jid}") for t in parts[4:])
            jellies.append(Jelly(jid, colour, cells, parts[3] == "anchored"))
        elif tag == "block":
            # block <id> grey <cells...>
            # block <id> <colour> <arrow> <fresh|bloomed> <cell>
            if len(parts) < 4:
                _err("Syntax", f"bad block line {ln!r}")
            bid = int(parts[1])
            if parts[2] == "grey":
                cells = frozenset(_parse_cell(t, f"block {bid}") for t in parts[3:])
                blocks.append(Block(bid, cells))
            else:
                colour = parts[2]
                if colour not in HANANO_COLOURS:
                    _err("BadColour", f"hanano colour must be one of {HANANO_COLOURS}")
                if len(parts) != 6 or parts[3] not in "UDLR" or parts[4] not in ("fresh", "bloomed"):
                    _err("Syntax", f"bad block line {ln!r}")
                cell = _parse_cell(parts[5], f"block {bid}")
                blocks.append(Block(bid, frozenset([cell]), colour, parts[3],
                                    parts[4] == "bloomed"))
        elif tag == "flower":
            # flower <colour> terrain|block=<id> <cell>
            if len(parts) != 4:
                _err("Syntax", f"bad flower line {ln!r}")
            colour = parts[1]
            if colour not in HANANO_COLOURS:
                _err("BadColour", f"hanano colour must be one of {HANANO_COLOURS}")
            if parts[2] == "terrain":
                host = None
            elif parts[2].startswith("block="):
                host = int(parts[2][6:])
            else:
                _err("Syntax", f"bad flower host {parts[2]!r}")
            flowers.append(Flower(colour, _parse_cell(parts[3], "flower"), host))
        else:
            _err("Syntax", f"unknown line {ln!r}")
    if game is None or width is None:
        _err("Syntax", "missing game or size line")

    occupied = {}

    def claim(cells, what):
        _check_bounds(cells, width, height, what)
        for c in cells:
            if c in occupied:
                _err("Overlap", f"{what} overlaps {occupied[c]} at {c}")
            occupied[c] = what

    claim(walls, "walls")
    if game == "jelly":
        if blocks or flowers:
            _err("Syntax", "hanano lines in a jelly level")
        seen_ids = set()
        for j in jellies:
            if j.jid in seen_ids:
                _err("Syntax", f"duplicate jelly id {j.jid}")
            seen_ids.add(j.jid)
            if not j.cells:
                _err("Syntax", f"jelly {j.jid} has no cells")
            claim(j.cells, f"jelly {j.jid}")
            if not _connected(j.cells):
                _err("DisconnectedJelly", f"jelly {j.jid}")
        level = JellyLevel(width, height, frozenset(walls), tuple(sorted(jellies, key=lambda j: j.jid)))
    else:
        if jellies:
            _err("Syntax", "jelly lines in a hanano level")
        seen_ids = set()
        for b in blocks:
            if b.bid in seen_ids:
                _err("Syntax", f"duplicate block id {b.bid}")
            seen_ids.add(b.bid)
            if not b.cells:
                _err("Syntax", f"block {b.bid} has no cells")
            claim(b.cells, f"block {b.bid}")
            if not _connected(b.cells):
                _err("DisconnectedJelly", f"block {b.bid}")
        for f in flowers:
            claim([f.cell], "flower")
            if f.host is not None and f.host not in seen_ids:
                _err("Syntax", f"flower hosted on unknown block {f.host}")
        level = HananoLevel(width, height, frozenset(walls),
                            tuple(sorted(blocks, key=lambda b: b.bid)), tuple(sorted(
                                flowers, key=lambda f: (f.cell[1], f.cell[0], f.colour))))
    level.validate()
    if meta:
        level = attach_meta(level, meta)
    return level


def attach_meta(level, meta):
    import dataclasses
    return dataclasses.replace(level, meta=dict(meta))


def level_meta(level):
    return level.meta or {}


def serialize_level(level):
    out = [LEVEL_HEADER]
    is_jelly = isinstance(level, JellyLevel)
    out.append(f"game {'jelly' if is_jelly else 'hanano'}")
    out.append(f"size {level.width} {level.height}")
    for k in sorted(level_meta(level)):
        out.append(f"meta {k} {level_meta(level)[k]}")
    cells = _sorted_cells(level.walls)
    for i in range(0, len(cells), _WRAP):
        out.append("walls " + " ".join(_fmt_cell(c) for c in cells[i:i + _WRAP]))
    if is_jelly:
        for j in sorted(level.jellies, key=lambda j: j.jid):
            flag = "anchored" if j.anchored else "movable"
            cs = " ".join(_fmt_cell(c) for c in _sorted_cells(j.cells))
            out.append(f"jelly {j.jid} {j.colour} {flag} {cs}")
    else:
        for b in sorted(level.blocks, key=lambda b: b.bid):
            if b.is_grey():
                cs = " ".join(_fmt_cell(c) for c in _sorted_cells(b.cells))
                out.append(f"block {b.bid} grey {cs}")
            else:
                state = "bloomed" if b.bloomed else "fresh"
                out.append(f"block {b.bid} {b.colour} {b.arrow} {state} "
                           f"{_fmt_cell(next(iter(b.cells)))}")
        for f in sorted(level.flowers, key=lambda f: (f.cell[1], f.cell[0], f.colour)):
            host = "terrain" if f.host is None else f"block={f.host}"
            out.append(f"flower {f.colour} {host} {_fmt_cell(f.cell)}")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------- scripts

def parse_script(text):
    moves = []
    for ln in text.splitlines():
        ln = ln.strip()
        if not ln or ln.startswith("#"):
            continue
        parts = ln.split()
        if parts[0] == "move" and len(parts) == 3 and parts[2] in ("L", "R"):
            moves.append((int(parts[1]), parts[2]))
        elif parts[0] == "shift" and len(parts) == 3 and parts[2] in ("L", "R"):
            moves.append(("shift", int(parts[1]), parts[2]))
        elif parts[0] == "swap" and len(parts) == 3:
            moves.append(("swap", int(parts[1]), int(parts[2])))
        else:
            _err("Syntax", f"bad script line {ln!r}")
    return moves


def serialize_script(moves):
    out = []
    for m in moves:
        if m[0] == "shift":
            out.append(f"shift {m[1]} {m[2]}")
        elif m[0] == "swap":
            out.append(f"swap {m[1]} {m[2]}")
        else:
            out.append(f"move {m[0]} {m[1]}")
    return "\n".join(out) + ("\n" if out else "")


# ---------------------------------------------------------------- instances

def parse_instance(text):
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines or lines[0] != INSTANCE_HEADER:
        _err("Syntax", f"missing header {INSTANCE_HEADER!r}")
    fields = {}
    for ln in lines[1:]:
        parts = ln.split()
        fields[parts[0]] = parts[1:]
    kind = fields.get("kind", [None])[0]
    if kind == "3partition":
        m = int(fields["m"][0])
        B = int(fields["B"][0])
        values = tuple(int(v) for v in fields["values"])
        from .reduce_partition import PartitionInstance
        return PartitionInstance(m, B, values)
    if kind == "abc":
        m = int(fields["m"][0])
        B = int(fields["B"][0])
        from .reduce_partition import ABCInstance
        return ABCInstance(m, B,
                           tuple(int(v) for v in fields["x"]),
                           tuple(int(v) for v in fields["y"]),
                           tuple(int(v) for v in fields["z"]))
    _err("Syntax", f"unknown instance kind {kind!r}")


def serialize_instance(inst):
    from .reduce_partition import PartitionInstance, ABCInstance
    out = [INSTANCE_HEADER]
    if isinstance(inst, PartitionInstance):
        out.append("kind 3partition")
        out.append(f"m {inst.m}")
        out.append(f"B {inst.B}")
        out.append("values " + " ".join(str(v) for v in inst.values))
    elif isinstance(inst, ABCInstance):
        out.append("kind abc")
        out.append(f"m {inst.m}")
        out.append(f"B {inst.B}")
        out.append("x " + " ".join(str(v) for v in inst.x))
        out.append("y " + " ".join(str(v) for v in inst.y))
        out.append("z " + " ".join(str(v) for v in inst.z))
    else:
        raise TypeError(inst)
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------- NCL graphs

def parse_ncl(text):
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines or lines[0] != NCL_HEADER:
        _err("Syntax", f"missing header {NCL_HEADER!r}")
    vertices = []
    edges = []
    embedding = {}
    outer = None
    orient = {}
    target = None
    for ln in lines[1:]:
        parts = ln.split()
        tag = parts[0]
        if tag == "vertex":
            if len(parts) != 3 or parts[2] not in ("AND", "OR"):
                _err("Syntax", f"bad vertex line {ln!r}")
            vertices.append((parts[1], parts[2]))
        elif tag == "edge":
            if len(parts) != 5 or parts[4] not in ("1", "2"):
                _err("Syntax", f"bad edge line {ln!r}")
            edges.append((parts[1], parts[2], parts[3], int(parts[4])))
        elif tag == "embedding":
            embedding[parts[1]] = tuple(parts[2:])
        elif tag == "outer":
            outer = tuple(parts[1:])
        elif tag == "orient":
            # orient <edge> <head-vertex>
            if len(parts) != 3:
                _err("Syntax", f"bad orient line {ln!r}")
            orient[parts[1]] = parts[2]
        elif tag == "target":
            target = parts[1]
        else:
            _err("Syntax", f"unknown line {ln!r}")
    graph = NCLGraph(tuple(vertices), tuple(edges), embedding, outer)
    graph.validate()
    if orient or target:
        if target is None or set(orient) != {e[0] for e in edges}:
            _err("Syntax", "orientation must cover every edge and name a target")
        return FlipProblem(graph, orient, target)
    return graph


def serialize_ncl(problem_or_graph):
    if isinstance(problem_or_graph, FlipProblem):
        graph = problem_or_graph.graph
        orient = problem_or_graph.orientation
        target = problem_or_graph.target
    else:
        graph, orient, target = problem_or_graph, None, None
    out = [NCL_HEADER]
    for vid, vtype in graph.vertices:
        out.append(f"vertex {vid} {vtype}")
    for eid, u, v, w in graph.edges:
        out.append(f"edge {eid} {u} {v} {w}")
    for vid, _ in graph.vertices:
        out.append(f"embedding {vid} " + " ".join(graph.embedding[vid]))
    if graph.outer_face:
        out.append("outer " + " ".join(graph.outer_face))
    if orient is not None:
        for eid, _, _, _ in graph.edges:
            out.append(f"orient {eid} {orient[eid]}")
        out.append(f"target {target}")
    return "\n".join(out) + "\n"
