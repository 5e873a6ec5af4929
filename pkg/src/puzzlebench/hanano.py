"""Rules engine for the Hanano puzzle.

Coloured blocks are 1x1 and carry a bloom arrow; grey blocks are movable
polyominoes of any shape.  Flowers occupy one cell each and are attached
either to terrain (never move) or to a block (move and fall with it as a
rigid unit, and provide support).  The player shifts a block left/right
(with jelly-style push chains) or swaps two horizontally adjacent 1x1
blocks; afterwards gravity and blooming alternate until quiescent.

A bloom fires when an unbloomed coloured block is orthogonally adjacent to
a same-colour flower and the cell in its arrow direction can take a new
flower, pushing a chain of movable blocks one cell if needed.  Blocked
blooms are deferred, not lost.  Scan order is bottom-to-top then
left-to-right so the engine is deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import hashlib

from .jelly import Board, MoveError, Blocked, NoSuchJelly, LEFT, RIGHT

UP = "U"
DOWN = "D"

_DELTAS = {LEFT: (-1, 0), RIGHT: (1, 0), UP: (0, -1), DOWN: (0, 1)}


class BadSwap(MoveError):
    """Swap operands are not two horizontally adjacent 1x1 blocks."""


class NoSuchBlock(NoSuchJelly):
    pass


@dataclass(frozen=True)
class Block:
    bid: int
    cells: frozenset
    colour: str = None      # None means grey
    arrow: str = None       # U/D/L/R for coloured blocks
    bloomed: bool = False

    def is_grey(self):
        return self.colour is None


@dataclass(frozen=True)
class Flower:
    colour: str
    cell: tuple
    host: int = None        # block id, or None for terrain


@dataclass(frozen=True)
class HananoLevel:
    width: int
    height: int
    walls: frozenset
    blocks: tuple
    flowers: tuple
    meta: dict = field(default=None, compare=False)

    def validate(self):
        seen = {}
        for (x, y) in self.walls:
            if not (0 <= x < self.width and 0 <= y < self.height):
                raise ValueError(f"wall out of bounds: {(x, y)}")
            seen[(x, y)] = "wall"
        ids = set()
        for b in self.blocks:
            if b.bid in ids:
                raise ValueError(f"duplicate block id {b.bid}")
            ids.add(b.bid)
            if not b.cells:
                raise ValueError(f"block {b.bid} has no cells")
            if b.colour is not None:
                if len(b.cells) != 1:
                    raise ValueError(f"coloured block {b.bid} must be 1x1")
                if b.arrow not in _DELTAS:
                    raise ValueError(f"block {b.bid} has no arrow")
            for c in b.cells:
                x, y = c
                if not (0 <= x < self.width and 0 <= y < self.height):
                    raise ValueError(f"block {b.bid} out of bounds: {c}")
                if c in seen:
                    raise ValueError(f"overlap at {c}: block {b.bid} and {seen[c]}")
                seen[c] = f"block {b.bid}"
        for f in self.flowers:
            x, y = f.cell
            if not (0 <= x < self.width and 0 <= y < self.height):
                raise ValueError(f"flower out of bounds: {f.cell}")
            if f.cell in seen:
                raise ValueError(f"overlap at {f.cell}: flower and {seen[f.cell]}")
            seen[f.cell] = "flower"
            if f.host is not None and f.host not in ids:
                raise ValueError(f"flower hosted on unknown block {f.host}")
        return self


# internal block tuple:  (bid, colour, arrow, bloomed, mask)
# internal flower tuple: (colour, mask, host_bid_or_None)


class HananoState:
    __slots__ = ("board", "blocks", "flowers", "_key")

    def __init__(self, board, blocks, flowers):
        self.board = board
        self.blocks = tuple(sorted(blocks))
        self.flowers = tuple(sorted(flowers, key=lambda f: (f[1], f[0], f[2] if f[2] is not None else -1)))
        self._key = None

    @staticmethod
    def from_level(level, presettled=False):
        board = Board(level.width, level.height, level.walls)
        blocks = [(b.bid, b.colour, b.arrow, b.bloomed, board.mask_of(b.cells))
                  for b in level.blocks]
        flowers = [(f.colour, board.mask_of([f.cell]), f.host) for f in level.flowers]
        st = HananoState(board, blocks, flowers)
        return st if presettled else quiesce(st)

    def block(self, bid):
        for b in self.blocks:
            if b[0] == bid:
                return b
        return None

    def unit_mask(self, bid):
        m = self.block(bid)[4]
        for f in self.flowers:
            if f[2] == bid:
                m |= f[1]
        return m

    def terrain_flower_mask(self):
        m = 0
        for f in self.flowers:
            if f[2] is None:
                m |= f[1]
        return m

    def render(self):
        b = self.board
        grid = [["." for _ in range(b.width)] for _ in range(b.height)]
        for y in range(b.height):
            for x in range(b.width):
                if b.walls_mask >> (y * b.stride + x) & 1:
                    grid[y][x] = "#"
        for (bid, colour, arrow, bloomed, mask) in self.blocks:
            g = "g" if colour is None else (colour[0].upper() if not bloomed else colour[0])
            for (x, y) in b.cells_of(mask):
                grid[y][x] = g
        for (colour, mask, host) in self.flowers:
            for (x, y) in b.cells_of(mask):
                grid[y][x] = "*"
        return "\n".join("".join(r) for r in grid)


def _shift_mask(board, mask, direction):
    dx, dy = _DELTAS[direction]
    if dx == -1:
        out = mask >> 1
        if out.bit_count() != mask.bit_count():
            return None
        return out
    if dx == 1:
        return mask << 1
    if dy == -1:
        out = mask >> board.stride
        if out.bit_count() != mask.bit_count():
            return None
        return out
    out = mask << board.stride
    if out & ~board.full:
        return None
    return out


def _push_chain(state, bid, direction):
    """Units that must move together for this shift; Blocked if impossible."""
    board = state.board
    hard = board.blocked_static | state.terrain_flower_mask()
    chain = {bid}
    frontier = [bid]
    moved_union = 0
    while frontier:
        nxt = []
        for b in frontier:
            shifted = _shift_mask(board, state.unit_mask(b), direction)
            if shifted is None or shifted & hard:
                raise Blocked(bid)
            moved_union |= shifted
        for q in state.blocks:
            if q[0] in chain:
                continue
            if moved_union & state.unit_mask(q[0]):
                chain.add(q[0])
                nxt.append(q[0])
        frontier = nxt
    return chain


def _moved(state, chain, direction):
    board = state.board
    blocks = []
    for b in state.blocks:
        if b[0] in chain:
            blocks.append((b[0], b[1], b[2], b[3], _shift_mask(board, b[4], direction)))
        else:
            blocks.append(b)
    flowers = []
    for f in state.flowers:
        if f[2] in chain:
            flowers.append((f[0], _shift_mask(board, f[1], direction), f[2]))
        else:
            flowers.append(f)
    return HananoState(board, blocks, flowers)


def settle(state):
    """Gravity fixpoint; a block falls as one unit with its hosted flowers."""
    board = state.board
    stride = board.stride
    blocks = list(state.blocks)
    flowers = list(state.flowers)
    hosted = {}
    for i, f in enumerate(flowers):
        if f[2] is not None:
            hosted.setdefault(f[2], []).append(i)
    static = board.blocked_static | state.terrain_flower_mask()

    def unit(bid_index):
        b = blocks[bid_index]
        m = b[4]
        for fi in hosted.get(b[0], ()):
            m |= flowers[fi][1]
        return m

    while True:
        falling = list(range(len(blocks)))
        while True:
            support = static
            falling_set = set(falling)
            for i in range(len(blocks)):
                if i not in falling_set:
                    support |= unit(i)
            keep = []
            for i in falling:
                m = unit(i)
                below = (m << stride) & ~m
                if below & ~board.full or below & support:
                    continue
                keep.append(i)
            if len(keep) == len(falling):
                break
            falling = keep
        if not falling:
            break
        for i in falling:
            b = blocks[i]
            blocks[i] = (b[0], b[1], b[2], b[3], b[4] << stride)
            for fi in hosted.get(b[0], ()):
                f = flowers[fi]
                flowers[fi] = (f[0], f[1] << stride, f[2])
    return HananoState(board, blocks, flowers)


def bloom_pass(state):
    """Fire blooms until none can; returns (state, fired_count)."""
    board = state.board
    stride = board.stride
    fired = 0
    while True:
        flower_by_colour = {}
        for f in state.flowers:
            flower_by_colour.setdefault(f[0], 0)
            flower_by_colour[f[0]] |= f[1]
        candidates = []
        for b in state.blocks:
            if b[1] is None or b[3]:
                continue
            fm = flower_by_colour.get(b[1], 0)
            if _adjacent(board, b[4], fm):
                cells = board.cells_of(b[4])
                (x, y) = next(iter(cells))
                candidates.append((-y, x, b))
        candidates.sort(key=lambda t: (t[0], t[1]))
        advanced = False
        for _, _, b in candidates:
            new_state = _try_bloom(state, b)
            if new_state is not None:
                state = new_state
                fired += 1
                advanced = True
                break
        if not advanced:
            return state, fired


def _adjacent(board, a, b):
    from .jelly import _dilate
    return bool(_dilate(board, a) & b)


def _try_bloom(state, b):
    """Attempt one bloom; None when deferred (blocked by wall/terrain)."""
    board = state.board
    bid, colour, arrow, _, mask = b
    target = _shift_mask(board, mask, arrow)
    if target is None or target & board.blocked_static:
        return None
    occupied_flowers = 0
    for f in state.flowers:
        occupied_flowers |= f[1]
    occupied_blocks = 0
    for q in state.blocks:
        occupied_blocks |= q[4]
    cur = state
    if target & (occupied_blocks | occupied_flowers):
        owner = None
        for q in state.blocks:
            if state.unit_mask(q[0]) & target:
                owner = q[0]
                break
        if owner is None:
            return None  # terrain flower in the way
        try:
            chain = _push_chain(state, owner, arrow)
        except Blocked:
            return None
        if bid in chain:
            return None  # cannot push itself
        cur = _moved(state, chain, arrow)
    blocks = [(q[0], q[1], q[2], True, q[4]) if q[0] == bid else q for q in cur.blocks]
    flowers = list(cur.flowers) + [(colour, target, bid)]
    return HananoState(board, blocks, flowers)


def quiesce(state):
    while True:
        state = settle(state)
        state, fired = bloom_pass(state)
        if not fired:
            return state


def apply_action(state, action):
    """Shift ('shift', bid, dir) or swap ('swap', bid1, bid2), then quiesce."""
    kind = action[0]
    if kind == "shift":
        _, bid, direction = action
        if state.block(bid) is None:
            raise NoSuchBlock(bid)
        chain = _push_chain(state, bid, direction)
        return quiesce(_moved(state, chain, direction))
    if kind == "swap":
        _, b1, b2 = action
        p1, p2 = state.block(b1), state.block(b2)
        if p1 is None or p2 is None:
            raise NoSuchBlock((b1, b2))
        board = state.board
        c1, c2 = board.cells_of(p1[4]), board.cells_of(p2[4])
        if len(c1) != 1 or len(c2) != 1:
            raise BadSwap("operands must be 1x1")
        (x1, y1), (x2, y2) = next(iter(c1)), next(iter(c2))
        if y1 != y2 or abs(x1 - x2) != 1:
            raise BadSwap("operands must be horizontally adjacent")
        d1 = RIGHT if x2 > x1 else LEFT
        d2 = RIGHT if x1 > x2 else LEFT
        blocks = []
        for q in state.blocks:
            if q[0] == b1:
                blocks.append((q[0], q[1], q[2], q[3], _shift_mask(board, q[4], d1)))
            elif q[0] == b2:
                blocks.append((q[0], q[1], q[2], q[3], _shift_mask(board, q[4], d2)))
            else:
                blocks.append(q)
        flowers = []
        for f in state.flowers:
            if f[2] == b1:
                nm = _shift_mask(board, f[1], d1)
            elif f[2] == b2:
                nm = _shift_mask(board, f[1], d2)
            else:
                nm = f[1]
            if nm is None:
                raise BadSwap("attached flower would leave the board")
            flowers.append((f[0], nm, f[2]))
        occ = board.walls_mask
        total_bits = 0
        for q in blocks:
            occ_overlap = occ & q[4]
            if occ_overlap:
                raise BadSwap("swap collides")
            occ |= q[4]
            total_bits += q[4].bit_count()
        for f in flowers:
            if occ & f[1]:
                raise BadSwap("swap collides")
            occ |= f[1]
        return quiesce(HananoState(board, blocks, flowers))
    raise ValueError(action)


def legal_actions(state):
    """Shifts (block id order, L before R), then swaps (ordered pairs)."""
    out = []
    for b in state.blocks:
        for d in (LEFT, RIGHT):
            try:
                _push_chain(state, b[0], d)
            except MoveError:
                continue
            out.append(("shift", b[0], d))
    board = state.board
    singles = [(b[0], board.cells_of(b[4])) for b in state.blocks if b[4].bit_count() == 1]
    singles = [(bid, next(iter(cells))) for bid, cells in singles]
    pos = {cell: bid for bid, cell in singles}
    for bid, (x, y) in sorted(singles):
        other = pos.get((x + 1, y))
        if other is not None:
            try:
                apply_action(state, ("swap", bid, other))
            except MoveError:
                continue
            out.append(("swap", bid, other))
    return out


def is_won(state):
    return all(b[3] for b in state.blocks if b[1] is not None)


def canonical_key(state):
    if state._key is not None:
        return state._key
    items = []
    for b in state.blocks:
        mine = tuple(sorted((f[0], f[1]) for f in state.flowers if f[2] == b[0]))
        items.append(("B", b[1] or "", b[2] or "", b[3], b[4], mine))
    for f in state.flowers:
        if f[2] is None:
            items.append(("F", f[0], "", False, f[1], ()))
    items.sort()
    h = hashlib.blake2b(digest_size=16)
    h.update(f"{state.board.width}x{state.board.height}".encode())
    h.update(repr(items).encode())
    key = h.digest()
    state._key = key
    return key


def full_key(state):
    items = []
    for b in state.blocks:
        mine = tuple(sorted((f[0], f[1]) for f in state.flowers if f[2] == b[0]))
        items.append((b[1] or "", b[2] or "", b[3], b[4], mine))
    terrain = tuple(sorted((f[0], f[1]) for f in state.flowers if f[2] is None))
    return (state.board.width, state.board.height, tuple(sorted(items)), terrain)
