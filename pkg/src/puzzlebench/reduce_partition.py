"""3-Partition / ABC-Partition oracles and the five bounded-board generators.

The oracles are plain exhaustive searches (desk scale is tiny).  Each
generator emits a level whose solvability matches the instance exactly;
the quoted dimension and structure formulas (board heights 10/4/11, widths
5/6, hole lengths 2jB + B/2, gap lengths (6j+1)B, padding counts 3j,
choice-zone height B/2, anchor separations, one coloured block plus one
flower, ...) are preserved verbatim and pinned by the acceptance tests.

Generators that need half-integers normalise odd B by doubling every value
first (doubling preserves 3-Partition solvability both ways); oracle
answers are computed on the original instance.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .jelly import Jelly, JellyLevel
from .hanano import Block, Flower, HananoLevel

PINK = "pink"
BLUE = "blue"


class BoundsViolation(ValueError):
    pass


class SumMismatch(ValueError):
    pass


@dataclass(frozen=True)
class PartitionInstance:
    m: int
    B: int
    values: tuple

    def validate(self):
        if len(self.values) != 3 * self.m:
            raise BoundsViolation(f"need {3 * self.m} values, got {len(self.values)}")
        for a in self.values:
            if not (self.B / 4 < a < self.B / 2):
                raise BoundsViolation(f"value {a} outside (B/4, B/2) for B={self.B}")
        if sum(self.values) != self.m * self.B:
            raise SumMismatch(f"sum {sum(self.values)} != m*B = {self.m * self.B}")
        return self

    def normalised(self):
        """Double everything when B is odd so B/2 and B/4 stay integral."""
        if self.B % 2 == 0:
            return self
        return PartitionInstance(self.m, 2 * self.B, tuple(2 * a for a in self.values))


@dataclass(frozen=True)
class ABCInstance:
    m: int
    B: int
    x: tuple
    y: tuple
    z: tuple

    def validate(self):
        for s in (self.x, self.y, self.z):
            if len(s) != self.m:
                raise BoundsViolation(f"each set needs {self.m} values")
            for a in s:
                if not (self.B / 4 < a < self.B / 2):
                    raise BoundsViolation(f"value {a} outside (B/4, B/2) for B={self.B}")
        total = sum(self.x) + sum(self.y) + sum(self.z)
        if total != self.m * self.B:
            raise SumMismatch(f"sum {total} != m*B = {self.m * self.B}")
        return self


def oracle_3partition(inst):
    """First witness (tuples of value indices) in lexicographic order, or None."""
    inst.validate()
    n = 3 * inst.m

    def search(remaining, acc):
        if not remaining:
            return acc
        first = remaining[0]
        rest = remaining[1:]
        for pair in combinations(rest, 2):
            if inst.values[first] + inst.values[pair[0]] + inst.values[pair[1]] == inst.B:
                left = [i for i in rest if i not in pair]
                out = search(left, acc + [(first, pair[0], pair[1])])
                if out is not None:
                    return out
        return None

    return search(list(range(n)), [])


def oracle_abc(inst):
    """First witness as index triples (i, j, k) over X, Y, Z, or None."""
    inst.validate()

    def search(xs, ys, zs, acc):
        if not xs:
            return acc
        i = xs[0]
        for j in ys:
            for k in zs:
                if inst.x[i] + inst.y[j] + inst.z[k] == inst.B:
                    out = search(xs[1:], [t for t in ys if t != j],
                                 [t for t in zs if t != k], acc + [(i, j, k)])
                    if out is not None:
                        return out
        return None

    return search(list(range(inst.m)), list(range(inst.m)), list(range(inst.m)), [])


# ------------------------------------------------------------------ helpers

class _Grid:
    """Mutable open-cell canvas; everything not carved is wall."""

    def __init__(self, width, height):
        self.width = width
        self.height = height
        self.open = set()
        self.jellies = []
        self.blocks = []
        self.flowers = []
        self._id = 0

    def carve(self, x0, x1, y0, y1):
        for x in range(x0, x1 + 1):
            for y in range(y0, y1 + 1):
                self.open.add((x, y))

    def nid(self):
        self._id += 1
        return self._id

    def jelly(self, colour, cells, anchored=False):
        cells = frozenset(cells)
        self.open |= cells
        self.jellies.append(Jelly(self.nid(), colour, cells, anchored))

    def block(self, cells, colour=None, arrow=None):
        cells = frozenset(cells)
        self.open |= cells
        self.blocks.append(Block(self.nid(), cells, colour, arrow))

    def flower(self, colour, cell, host=None):
        self.open.add(cell)
        self.flowers.append(Flower(colour, cell, host))

    def walls(self):
        return frozenset((x, y) for x in range(self.width) for y in range(self.height)
                         if (x, y) not in self.open)

    def jelly_level(self, meta=None):
        lvl = JellyLevel(self.width, self.height, self.walls(),
                         tuple(self.jellies), meta=meta)
        lvl.validate()
        return lvl

    def hanano_level(self, meta=None):
        lvl = HananoLevel(self.width, self.height, self.walls(),
                          tuple(self.blocks), tuple(self.flowers), meta=meta)
        lvl.validate()
        return lvl


# ------------------------------------------------------- Jelly, ten lines

def gen_jelly_h10(inst):
    """One colour, board height exactly 10.

    Bottom: an anchored ground chain interrupted by m gaps of width
    (6j+1)B (triplet 0 rightmost).  A travel floor above has one hole per
    triplet of length 2jB + B/2 over the gap; the covered ground flanks
    (widths 2jB+B/2 and 2jB+B/2+1) bounce badly-aimed drops back inside.
    Values rest on a storage shelf top right; padding jellies (width 2B,
    3j per triplet j) on a rack; merged value+paddings clear the smaller
    holes and drop through their own.
    """
    inst.validate()
    inst = inst.normalised()
    m, B = inst.m, inst.B
    H = B // 2

    gap = lambda j: (6 * j + 1) * B
    hole = lambda j: 2 * j * B + H
    lcov = lambda j: 2 * j * B + H
    rcov = lambda j: 2 * j * B + H + 1

    # bottom layout, built right to left: x decreases from the storage side
    # ground segments must at least carry their covers
    seg = [0] * (m + 1)  # seg[j] sits right of gap j (seg[m] leftmost)
    seg[0] = rcov(0) + 2
    for j in range(1, m):
        seg[j] = max(lcov(j - 1), rcov(j)) + 2
    seg[m] = lcov(m - 1) + 2

    values = sorted(inst.values, reverse=True)
    n_pad = 3 * (m * (m - 1) // 2)
    pad_w = 2 * B
    store_len = sum(values) + len(values)          # 1-cell gaps between
    rack_len = n_pad * (pad_w + 1)
    drop_zone = 2 * B + 4                          # assembly room right of hole 0
    bottom_len = sum(gap(j) for j in range(m)) + sum(seg)
    top_len = drop_zone + rack_len + B + store_len + 2
    width = max(bottom_len, 2) + top_len

    g = _Grid(width, 10)
    Y_VAL, Y_VSH = 1, 2          # values row, their shelf row
    Y_PAD, Y_PSH = 3, 4          # padding rack row, its shelf
    Y_TRough, Y_FLOOR = 5, 6     # travel row, floor-with-holes row
    Y_AIR, Y_COV, Y_GROUND = 7, 8, 9

    # ground chain and gaps (right to left from x = bottom origin)
    x = width - 1
    ground_cells = []
    gaps = []
    for j in range(m + 1):
        s = seg[j]
        ground_cells.append((x - s + 1, x))
        x -= s
        if j < m:
            gaps.append((x - gap(j) + 1, x))
            x -= gap(j)
    for (x0, x1) in ground_cells:
        g.jelly(PINK, [(xx, Y_GROUND) for xx in range(x0, x1 + 1)], anchored=True)
    for j, (x0, x1) in enumerate(gaps):
        g.carve(x0, x1, Y_AIR, Y_GROUND)           # open gap interior
        g.carve(x0 - lcov(j), x0 - 1, Y_AIR, Y_AIR)   # air above left cover
        g.carve(x1 + 1, x1 + rcov(j), Y_AIR, Y_AIR)   # air above right cover
        # covers are wall rows at Y_COV over the grounds: leave them walls.
        # travel floor hole over the gap's right part
        g.carve(x1 - hole(j) + 1, x1, Y_FLOOR, Y_FLOOR)
        g.carve(x1 - hole(j) + 1, x1, Y_TRough, Y_TRough)

    # travel row is open everywhere over the bottom section plus the
    # assembly area; the floor row stays wall outside the holes
    g.carve(1, width - 2, Y_TRough, Y_TRough)

    # storage shelf (rightmost) and values
    x = width - 2
    for a in values:
        cells = [(xx, Y_VAL) for xx in range(x - a + 1, x + 1)]
        g.jelly(PINK, cells)
        g.carve(x - a + 1, x, Y_VAL, Y_VAL)
        x -= a + 1
    g.carve(x + 1, width - 2, Y_VAL, Y_VAL)
    store_left = x
    # shelf wall under the stored values: rows Y_VSH..Y_PSH stay wall there
    # values exit by sliding left past store_left and dropping to the travel row
    g.carve(store_left - B // 2 - 2, store_left, Y_VAL, Y_TRough)

    # padding rack, left of the value drop zone
    x = store_left - B // 2 - 4
    for _ in range(n_pad):
        cells = [(xx, Y_PAD) for xx in range(x - pad_w + 1, x + 1)]
        g.jelly(PINK, cells)
        g.carve(x - pad_w + 1, x, Y_PAD, Y_PAD)
        x -= pad_w + 1
    g.carve(x + 1, store_left - B // 2 - 4, Y_PAD, Y_PAD)
    rack_left = x
    g.carve(rack_left - pad_w - 2, rack_left, Y_PAD, Y_TRough)

    meta = {"generator": "gen_jelly_h10", "m": str(m), "B": str(B)}
    return g.jelly_level(meta)


# --------------------------------------------------- Jelly, two colours, 4

def gen_jelly_2col_h4(inst):
    """Two colours, height exactly 4: anchored pink slabs with width-B gaps
    at the bottom, a movable blue platform of width B+1 bridging them, and
    the value jellies walking in from a storage shelf on the left."""
    inst.validate()
    inst = inst.normalised()
    m, B = inst.m, inst.B

    values = sorted(inst.values, reverse=True)
    store_len = sum(values) + len(values)
    slab = 2
    bottom_len = (m + 1) * slab + m * B
    width = store_len + 2 + bottom_len + B + 3

    g = _Grid(width, 4)
    Y_VAL, Y_SHELF, Y_TOP, Y_BOT = 0, 1, 2, 3

    x = 1
    for a in values:
        g.jelly(PINK, [(xx, Y_VAL) for xx in range(x, x + a)])
        g.carve(x, x + a, Y_VAL, Y_VAL)
        x += a + 1
    shelf_end = x
    g.carve(1, shelf_end, Y_VAL, Y_VAL)
    # everything right of the shelf is open on rows 2..3 (slabs own row 3)
    g.carve(shelf_end, width - 2, Y_TOP, Y_TOP)
    g.carve(shelf_end, width - 2, Y_VAL, Y_SHELF)

    x0 = shelf_end + 1
    x = x0
    for j in range(m + 1):
        g.jelly(PINK, [(xx, Y_BOT) for xx in range(x, x + slab)], anchored=True)
        x += slab
        if j < m:
            g.carve(x, x + B - 1, Y_BOT, Y_BOT)
            x += B
    # blue platform resting on the first slab pair, bridging gap 0
    g.jelly(BLUE, [(xx, Y_TOP) for xx in range(x0 + 1, x0 + B + 2)])

    meta = {"generator": "gen_jelly_2col_h4", "m": str(m), "B": str(B)}
    return g.jelly_level(meta)


# ------------------------------------------------------ Jelly, five columns

def gen_jelly_w5(inst):
    """One colour, width exactly 5, triplets stacked vertically.

    Columns: 0 chain (anchors, fill space, connectors), 1 fill well,
    2 descent/arrival, 3 onward flank, 4 storage pedestals.  Each triplet:
    a choice zone (height B/2) whose floor drops into the fill well at
    column 1, a vertical fill space of height B between the two anchored
    jellies, and a dogleg chamber returning the onward flank to column 2.
    """
    inst.validate()
    inst = inst.normalised()
    m, B = inst.m, inst.B
    H = B // 2
    amax = max(inst.values)

    g = _Grid(5, 0)  # height fixed later

    y = 1

    # storage larder: values on width-1 pedestals in column 4, with a ledge
    # cell beside each pedestal so a value steps to column 2 before dropping
    values = list(inst.values)
    for a in values:
        g.carve(3, 4, y, y + a - 1)
        g.jelly(PINK, [(4, yy) for yy in range(y, y + a)])
        y += a + 1   # pedestal wall row at y+a covers columns 3..4
    larder_end = y
    g.carve(2, 2, 1, larder_end)     # the descent shaft to the first zone

    per_triplet = []
    y = larder_end + 1
    for j in range(m):
        z0, zb = y, y + H - 1
        g.carve(1, 3, z0, zb)                 # zone (cols 1..3)
        g.carve(2, 2, z0 - 1, z0 - 1)          # continuity of col-2 descent
        g.jelly(PINK, [(0, yy) for yy in range(z0, zb + 1)])   # connector
        A = zb + 1                             # zone floor / top anchor row
        g.carve(1, 1, A, A)                    # fill hole (overflow cell)
        # top anchor: vertical 2x1 at column 0, rows A..A+1
        g.jelly(PINK, [(0, A), (0, A + 1)], anchored=True)
        g.carve(1, 1, A + 1, A + B)            # the fill space, height B
        bottom = A + B + 1
        g.jelly(PINK, [(0, bottom), (1, bottom)], anchored=True)
        # dogleg: onward flank (col 3) descends beside the fill space, lands,
        # and steps left to column 2 for the next zone's arrival
        d0 = bottom + 1
        d1 = d0 + amax
        g.carve(3, 3, A, d1)                   # continuous onward flank
        g.carve(2, 3, d0, d1)
        g.carve(2, 2, d1 + 1, d1 + 1)          # hole down to the next zone
        g.jelly(PINK, [(0, yy) for yy in range(bottom + 1, d1 + 2)],
                anchored=True)                 # chain tail through the dogleg
        per_triplet.append((z0, A, bottom))
        y = d1 + 2

    g.height = y + 1
    meta = {"generator": "gen_jelly_w5", "m": str(m), "B": str(B)}
    return g.jelly_level(meta)


# --------------------------------------------------- Hanano, eleven lines

def gen_hanano_h11(inst):
    """One coloured block and one flower, height exactly 11.

    Gadgets in a row: each a width-B gap of depth four whose floor row
    keeps only its two end pockets open, with the unmovable (B-2)x1
    platform between them and a movable 1x1 on it.  Gamma-shaped X/Z value
    blocks seat into the pockets, height-2 Y blocks ride the 1x1; a grey
    carrier platform ferries blocks over unfilled gaps; the red block
    crosses the finished bridges to the terrain flower on the far right.
    """
    inst.validate()
    m, B = inst.m, inst.B

    Y_TRAV0, Y_TRAV1 = 1, 4       # tall blocks travel rows 1..4
    Y_RIDE = 5                    # carrier / red row
    Y_GAPTOP, Y_GAPBOT = 6, 8     # open gap rows
    Y_POCKET = 9                  # platform row with end pockets
    # row 0 top margin, row 10 bottom margin

    start_shelf = sum(inst.x) + sum(inst.y) + sum(inst.z) + 3 * m + 2
    carrier_w = B + 1
    width = start_shelf + carrier_w + 2 + m * (B + 3) + 4

    g = _Grid(width, 11)
    g.carve(1, width - 2, Y_TRAV0, Y_RIDE)

    # value blocks staged left on the fixed shelf (travel rows)
    x = 1
    def gamma(x0, w, h, mirrored=False):
        stem_x = x0 + w - 1 if mirrored else x0
        arm = [(xx, Y_RIDE - h + 1) for xx in range(x0, x0 + w)]
        stem = [(stem_x, yy) for yy in range(Y_RIDE - h + 1, Y_RIDE + 1)]
        return set(arm) | set(stem)

    for xi in inst.x:
        g.block(gamma(x, xi, 4))
        x += xi + 1
    for yi in inst.y:
        g.block(gamma(x, yi, 2))
        x += yi + 1
    for zi in inst.z:
        g.block(gamma(x, zi, 4, mirrored=True))
        x += zi + 1
    # the red block, then the carrier platform to its right
    g.block([(x, Y_RIDE)], colour="red", arrow="U")
    x += 2
    g.block([(xx, Y_RIDE) for xx in range(x, x + carrier_w)])
    x += carrier_w + 1

    # triplet gadgets
    for j in range(m):
        gx = x
        g.carve(gx, gx + B - 1, Y_GAPTOP, Y_GAPBOT)
        g.open.add((gx, Y_POCKET))             # left pocket
        g.open.add((gx + B - 1, Y_POCKET))     # right pocket
        # central platform (B-2) wide stays wall at Y_POCKET
        g.block([(gx + B // 2, Y_GAPBOT)])     # movable 1x1 on the platform
        x += B + 3                             # solid tunnel floor between gaps

    # terrain flower at the far right of the ride row
    g.flower("red", (x, Y_RIDE))
    g.carve(x, x, Y_RIDE, Y_RIDE)

    meta = {"generator": "gen_hanano_h11", "m": str(m), "B": str(B)}
    return g.hanano_level(meta)


# --------------------------------------------------- Hanano, six columns

def gen_hanano_w6(inst):
    """One colour, width exactly 6, triplets stacked vertically.

    Columns: 0 red ledge, 1 fill shaft (depth B), 2 crossing cell,
    3 terrain flower (walled), 4 arrival flank, 5 onward flank with a
    dogleg back to column 4 under every triplet.  Grey value columns
    (height a_i) stack in the shaft; the red crosses a flush stack and
    blooms against its flower, then is boxed in.
    """
    inst.validate()
    inst = inst.normalised()
    m, B = inst.m, inst.B
    amax = max(inst.values)

    g = _Grid(6, 0)

    # larder: greys on width-1 pedestals in column 5
    y = 1
    for a in inst.values:
        g.carve(5, 5, y, y + a - 1)
        g.block([(5, yy) for yy in range(y, y + a)])
        g.carve(4, 4, y, y + a - 1)
        y += a + 1
    larder_end = y
    g.carve(4, 4, 1, larder_end + amax)
    y = larder_end + amax + 1
    entry_floor = y   # (4, y) wall: greys land here, zone below via col 4? no:
    # greys descend column 4 directly into the first zone

    y += 0
    for j in range(m):
        z0 = y
        zb = z0 + amax            # zone tall enough for any grey
        g.carve(1, 4, z0, zb)
        r = zb + 1                # travel row of this triplet
        g.carve(0, 2, r, r)       # ledge, crossing, stand cells
        g.block([(0, r)], colour="red", arrow="U")
        g.flower("red", (3, r))
        g.carve(3, 3, r, r)
        g.carve(1, 1, r + 1, r + B)          # the fill shaft, depth B
        # onward flank: column 5 from the zone down to the dogleg
        g.carve(5, 5, z0, r + B + 1)
        d0 = r + B + 1
        d1 = d0 + amax
        g.carve(4, 5, d0, d1)
        g.carve(4, 4, d1 + 1, d1 + 1)        # hole down to the next zone
        y = d1 + 2

    g.height = y + 1
    meta = {"generator": "gen_hanano_w6", "m": str(m), "B": str(B)}
    return g.hanano_level(meta)
