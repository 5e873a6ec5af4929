"""The sixteen vertex-gadget grid templates.

Every gadget follows one shape: three tunnel ports (one per signature slot,
top/mid/bottom rows, each on its signature side) open onto height-1
corridors that end at a central two-column drop well.  The well descends to
the solving pit: two floor cells between the movable vertex jelly (left, in
a small alcove on the walk row) and the anchored vertex jelly (right,
fixed in the wall).  An edge jelly parked on its corridor is reversibly
"in" the gadget; pushed past the corridor end it drops down the well and
becomes pit fill.  The pit is completed flush only by one 2x1 (blue) or
two 1x1 (red) fills - total weight two - after which the vertex jelly can
walk across and merge with its anchored partner.

The anchored partner sits in the floor beyond a one-cell ledge, so the
vertex jelly can only reach it by standing on top of it, which takes both
pit cells filled flush.  Port rows are parameters (the visibility
representation dictates them) and stretch freely; the fixed columns are:

    0      border wall
    1..4   left corridors (dock = cells 3,4)
    5,6    drop well and pit
    7      ledge (open at the walk row only)
    8      anchored partner, embedded at pit level
    9..12  right corridors (dock = cells 9,10)
    13     border wall

Row clearances (port pitch >= 3, pit four rows under the lowest port) keep
piece stacks in the well from ever topping out level with a tunnel, which
the containment suite checks exhaustively.  Mirror-twin signatures are
produced by mirroring the stored orientation.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from itertools import product

from ..jelly import Jelly, JellyLevel, BLACK
from ..visibility import VertexSignature

VERTEX_COLOUR = "vertex"
V_ID, F_ID = 1, 2
EDGE_IDS = (11, 12, 13)      # by slot: top, mid, bottom

WIDTH = 14
WELL = (5, 6)
LEDGE_COL = 7
F_COL = 8
MIN_PITCH = 3
BASE_ROWS = (2, 5, 8)


@dataclass(frozen=True)
class GadgetTemplate:
    signature: VertexSignature
    width: int
    height: int
    walls: frozenset
    jellies: tuple           # vertex jelly + anchored partner only
    ports: tuple             # ((slot, side, weight, row), ...)
    well: tuple
    pit_row: int
    walk_row: int
    stretch_rows: tuple      # duplicable all-wall-plus-well rows
    docks: dict = None       # slot -> tuple of dock cells for the edge jelly
    exit_cols: tuple = ()    # one-black: columns whose shaft continues below

    def port(self, slot):
        for p in self.ports:
            if p[0] == slot:
                return p
        raise KeyError(slot)


def signature_key(sig):
    return str(sig)


def all_signatures():
    """The 16 classes: 4 OR + 12 AND, canonical under mirror symmetry."""
    seen = {}
    for sides in product("LR", repeat=3):
        left = tuple("B" if s == "L" else "." for s in sides)
        right = tuple("B" if s == "R" else "." for s in sides)
        sig = VertexSignature(left, right).canonical()
        seen.setdefault(signature_key(sig), sig)
    for blue_slot in range(3):
        red_slots = [s for s in range(3) if s != blue_slot]
        for blue_side in "LR":
            for red_sides in product("LR", repeat=2):
                left, right = ["."] * 3, ["."] * 3
                (left if blue_side == "L" else right)[blue_slot] = "B"
                for slot, side in zip(red_slots, red_sides):
                    (left if side == "L" else right)[slot] = "R"
                sig = VertexSignature(tuple(left), tuple(right)).canonical()
                seen.setdefault(signature_key(sig), sig)
    return tuple(sorted(seen.values(), key=signature_key))


SIGNATURES = all_signatures()


def ports_of(sig):
    """(slot, side, weight) per slot; exactly one edge per vertical slot."""
    out = []
    for slot in range(3):
        l, r = sig.left[slot], sig.right[slot]
        if (l == ".") == (r == "."):
            raise ValueError(f"signature {sig} has {'no' if l == '.' else 'two'} "
                             f"edges in slot {slot}")
        side = "L" if l != "." else "R"
        letter = l if side == "L" else r
        out.append((slot, side, 2 if letter == "B" else 1))
    return tuple(out)


def is_canonical(sig):
    return sig == sig.canonical()


def build_gadget(sig, rows=None):
    """Emit the template grid for a signature at the given port rows."""
    ports = ports_of(sig)
    if rows is None:
        rows = BASE_ROWS
    if len(rows) != 3 or any(rows[i + 1] - rows[i] < MIN_PITCH for i in range(2)):
        raise ValueError(f"port rows {rows} must ascend with pitch >= {MIN_PITCH}")
    if rows[0] < 2:
        raise ValueError("top port needs a wall row above it")
    if not is_canonical(sig):
        base = build_gadget(sig.mirrored(), rows)
        return _mirror_template(base, sig)

    wL, wR = WELL
    walk = rows[2] + 4
    pit = walk + 1
    height = pit + 2

    open_cells = set()
    for y in range(rows[0], pit + 1):
        open_cells.add((wL, y))
        open_cells.add((wR, y))
    port_rows = []
    for (slot, side, weight), r in zip(ports, rows):
        cols = range(1, wL) if side == "L" else range(LEDGE_COL, WIDTH - 1)
        for x in cols:
            open_cells.add((x, r))
        port_rows.append((slot, side, weight, r))
    open_cells.update({(2, walk), (3, walk), (4, walk),
                       (LEDGE_COL, walk), (F_COL, walk), (F_COL, pit)})

    walls = frozenset((x, y) for x in range(WIDTH) for y in range(height)
                      if (x, y) not in open_cells)
    jellies = (
        Jelly(V_ID, VERTEX_COLOUR, frozenset({(3, walk)})),
        Jelly(F_ID, VERTEX_COLOUR, frozenset({(F_COL, pit)}), anchored=True),
    )
    stretch = tuple(y for y in range(rows[0] + 1, pit)
                    if y not in [r for r in rows]
                    and y not in [r + 1 for r in rows] and y != walk)
    docks = {}
    for (slot, side, weight, r) in port_rows:
        if side == "L":
            docks[slot] = ((4, r),) if weight == 1 else ((3, r), (4, r))
        else:
            docks[slot] = ((9, r),) if weight == 1 else ((9, r), (10, r))
    return GadgetTemplate(sig, WIDTH, height, walls, jellies,
                          tuple(port_rows), WELL, pit, walk, stretch, docks, ())


def _mirror_template(t, sig):
    w = t.width

    def mx(c):
        return (w - 1 - c[0], c[1])

    walls = frozenset(mx(c) for c in t.walls)
    jellies = tuple(Jelly(j.jid, j.colour, frozenset(mx(c) for c in j.cells), j.anchored)
                    for j in t.jellies)
    ports = tuple((slot, "L" if side == "R" else "R", weight, row)
                  for (slot, side, weight, row) in t.ports)
    well = (w - 1 - t.well[1], w - 1 - t.well[0])
    docks = {slot: tuple(sorted(mx(c) for c in cells))
             for slot, cells in (t.docks or {}).items()}
    exits = tuple(sorted(w - 1 - x for x in t.exit_cols))
    return GadgetTemplate(sig, w, t.height, walls, jellies, ports, well,
                          t.pit_row, t.walk_row, t.stretch_rows, docks, exits)


def instantiate(sig, port_rows=None):
    """Grid fragment with ports at the requested rows (raising is free)."""
    return build_gadget(sig, port_rows)


def template_level(t):
    """The template as a standalone level document (for the data files)."""
    meta = {
        "kind": "gadget-template",
        "signature": signature_key(t.signature),
        "ports": "; ".join(f"slot{s} {side} w{w} row {r}" for s, side, w, r in t.ports),
        "well": f"{t.well[0]} {t.well[1]}",
        "pit_row": str(t.pit_row),
        "walk_row": str(t.walk_row),
        "stretch_rows": " ".join(str(y) for y in t.stretch_rows),
        "roles": f"jelly {V_ID} movable vertex jelly; jelly {F_ID} anchored partner",
    }
    return JellyLevel(t.width, t.height, t.walls, t.jellies, meta=meta)


def data_file_name(sig):
    body = signature_key(sig).strip("()").replace(",", "").replace("|", "-").replace(".", "o")
    return f"gadget_{body}.txt"


def write_data_files(directory):
    from ..levelio import serialize_level
    import pathlib
    directory = pathlib.Path(directory)
    for sig in SIGNATURES:
        t = build_gadget(sig)
        (directory / data_file_name(sig)).write_text(serialize_level(template_level(t)))


def load_template(sig):
    """Template from the packaged data file (emitter and file must agree)."""
    from ..levelio import parse_level
    sig = sig.canonical()
    text = resources.files("puzzlebench.gadgets").joinpath(
        "data", data_file_name(sig)).read_text()
    level = parse_level(text)
    t = build_gadget(sig)
    if level.walls != t.walls or tuple(level.jellies) != t.jellies:
        raise ValueError(f"packaged template for {signature_key(sig)} "
                         "does not match the emitter")
    return t


# ------------------------------------------------------------ one-black mode
#
# With a single non-black colour the gadget changes shape: the solving pit
# is four cells wide (edge jellies double in width, so two 1x2 "red" fills
# or one 4x1 "blue" fill complete it and a lone 1x2 cannot bridge), the
# anchored partner disappears, the movable vertex jelly is 1x2 and leaves
# through a width-1 floor hole beyond the pit into a drop shaft that the
# wider edge jellies cannot enter.  The target gadget instead opens a
# height-1 pit-level tunnel into a wide shaft, so the one coloured edge
# jelly (and the vertex jelly after it crosses) can reach the global
# solving zone; a one-cell-deeper pocket under the pit's last cell stops
# the vertex jelly from sneaking along the pit floor.

OB_WIDTH = 16
OB_WELL = (5, 8)          # pit spans columns 5..8
OB_VHOLE = 10
OB_SHAFT = (11, 14)       # target-mode exit shaft mouth


def build_gadget_oneblack(sig, rows=None, target_exit=False):
    ports = ports_of(sig)
    if rows is None:
        rows = BASE_ROWS
    if len(rows) != 3 or any(rows[i + 1] - rows[i] < MIN_PITCH for i in range(2)):
        raise ValueError(f"port rows {rows} must ascend with pitch >= {MIN_PITCH}")
    if rows[0] < 2:
        raise ValueError("top port needs a wall row above it")
    if not is_canonical(sig):
        base = build_gadget_oneblack(sig.mirrored(), rows, target_exit)
        return _mirror_template(base, sig)

    pL, pR = OB_WELL
    walk = rows[2] + 6
    pit = walk + 1
    height = pit + 2

    open_cells = set()
    for x in range(pL, pR + 1):
        for y in range(rows[0], pit + 1):
            open_cells.add((x, y))
    port_rows = []
    for (slot, side, weight), r in zip(ports, rows):
        cols = range(1, pL) if side == "L" else range(OB_SHAFT[0], OB_WIDTH - 1)
        for x in cols:
            open_cells.add((x, r))
        if side == "R":
            open_cells.update({(9, r), (10, r)})   # through to the well
        port_rows.append((slot, side, weight, r))
    for x in range(2, OB_VHOLE + 1):
        open_cells.add((x, walk))
        open_cells.add((x, walk - 1))
    open_cells.add((pR, pit + 1))                   # trap pocket under pit col 8
    if target_exit:
        open_cells.update({(9, pit), (10, pit)})    # pit-level exit tunnel
        for x in range(OB_SHAFT[0], OB_SHAFT[1] + 1):
            open_cells.update({(x, pit), (x, walk), (x, walk - 1)})
        open_cells.add((OB_VHOLE, pit))
    else:
        open_cells.add((OB_VHOLE, pit))             # width-1 vertex exit hole

    walls = frozenset((x, y) for x in range(OB_WIDTH) for y in range(height)
                      if (x, y) not in open_cells)
    jellies = (
        Jelly(V_ID, VERTEX_COLOUR, frozenset({(3, walk), (3, walk - 1)})),
    )
    stretch = tuple(y for y in range(rows[0] + 1, rows[2] + 2)
                    if y not in rows and y not in [r + 1 for r in rows])
    docks = {}
    for (slot, side, weight, r) in port_rows:
        if side == "L":
            docks[slot] = ((3, r), (4, r)) if weight == 1 else ((1, r), (2, r), (3, r), (4, r))
        else:
            docks[slot] = ((11, r), (12, r)) if weight == 1 else \
                ((11, r), (12, r), (13, r), (14, r))
    exits = tuple(range(OB_SHAFT[0], OB_SHAFT[1] + 1)) if target_exit else (OB_VHOLE,)
    return GadgetTemplate(sig, OB_WIDTH, height, walls, jellies,
                          tuple(port_rows), OB_WELL, pit, walk, stretch, docks, exits)
