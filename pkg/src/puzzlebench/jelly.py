"""Rules engine for the Jelly-No puzzle.

Board model: a width x height grid, y grows downward and gravity pulls
toward +y.  The outer boundary behaves like a wall.  Jellies are coloured
polyominoes; moving one pushes any chain of movable jellies in front of it,
then gravity settles everything.  Two touching jellies of the same
non-black colour merge immediately (after every single-cell displacement,
both player shifts and gravity steps).  Anchored jellies never move.

States are immutable.  Internally each piece is a bitmask over a grid with
a sentinel column at x == width, which keeps single-bit shifts from
wrapping across rows.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
import hashlib

BLACK = "black"

LEFT = "L"
RIGHT = "R"


class MoveError(Exception):
    pass


class Blocked(MoveError):
    """A wall, the board edge or an anchored jelly obstructs the push chain."""


class Immovable(MoveError):
    """The selected jelly is anchored."""


class NoSuchJelly(MoveError):
    pass


@dataclass(frozen=True)
class Jelly:
    jid: int
    colour: str
    cells: frozenset
    anchored: bool = False

    def is_black(self):
        return self.colour == BLACK


@dataclass(frozen=True)
class JellyLevel:
    width: int
    height: int
    walls: frozenset
    jellies: tuple
    meta: dict = field(default=None, compare=False)

    def validate(self):
        """Raise ValueError on malformed geometry."""
        seen = {}
        for (x, y) in self.walls:
            if not (0 <= x < self.width and 0 <= y < self.height):
                raise ValueError(f"wall out of bounds: {(x, y)}")
            seen[(x, y)] = "wall"
        ids = set()
        for j in self.jellies:
            if j.jid in ids:
                raise ValueError(f"duplicate jelly id {j.jid}")
            ids.add(j.jid)
            if not j.cells:
                raise ValueError(f"jelly {j.jid} has no cells")
            for c in j.cells:
                x, y = c
                if not (0 <= x < self.width and 0 <= y < self.height):
                    raise ValueError(f"jelly {j.jid} out of bounds: {c}")
                if c in seen:
                    raise ValueError(f"overlap at {c} between jelly {j.jid} and {seen[c]}")
                seen[c] = f"jelly {j.jid}"
            if not _connected(j.cells):
                raise ValueError(f"jelly {j.jid} is not orthogonally connected")
        return self


def _connected(cells):
    cells = set(cells)
    start = next(iter(cells))
    stack = [start]
    seen = {start}
    while stack:
        x, y = stack.pop()
        for nb in ((x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1)):
            if nb in cells and nb not in seen:
                seen.add(nb)
                stack.append(nb)
    return len(seen) == len(cells)


class Board:
    """Static geometry shared by all states of one level (bitmask helpers)."""

    __slots__ = ("width", "height", "stride", "full", "walls_mask", "blocked_static")

    def __init__(self, width, height, walls):
        self.width = width
        self.height = height
        self.stride = width + 1
        full = 0
        for y in range(height):
            full |= ((1 << width) - 1) << (y * self.stride)
        self.full = full
        wm = 0
        for (x, y) in walls:
            wm |= 1 << (y * self.stride + x)
        self.walls_mask = wm
        sentinel = 0
        for y in range(height):
            sentinel |= 1 << (y * self.stride + width)
        self.blocked_static = wm | sentinel

    def mask_of(self, cells):
        m = 0
        for (x, y) in cells:
            m |= 1 << (y * self.stride + x)
        return m

    def cells_of(self, mask):
        cells = []
        s = self.stride
        while mask:
            low = mask & -mask
            i = low.bit_length() - 1
            cells.append((i % s, i // s))
            mask ^= low
        return frozenset(cells)


# piece tuple: (jid, colour, anchored, mask)


class JellyState:
    """Immutable dynamic configuration: gravity-stable and merge-closed."""

    __slots__ = ("board", "pieces", "_key")

    def __init__(self, board, pieces):
        self.board = board
        self.pieces = tuple(sorted(pieces))
        self._key = None

    @staticmethod
    def from_level(level, presettled=False):
        board = Board(level.width, level.height, level.walls)
        pieces = [(j.jid, j.colour, j.anchored, board.mask_of(j.cells)) for j in level.jellies]
        st = JellyState(board, pieces)
        return st if presettled else settle(st)

    def jellies(self):
        b = self.board
        return tuple(Jelly(jid, colour, b.cells_of(mask), anchored)
                     for (jid, colour, anchored, mask) in self.pieces)

    def piece(self, jid):
        for p in self.pieces:
            if p[0] == jid:
                return p
        return None

    def occupied_mask(self):
        m = 0
        for p in self.pieces:
            m |= p[3]
        return m

    def render(self):
        """ASCII dump for debugging: '#' wall, '.' empty, else piece glyph."""
        b = self.board
        grid = [["." for _ in range(b.width)] for _ in range(b.height)]
        for y in range(b.height):
            for x in range(b.width):
                if b.walls_mask >> (y * b.stride + x) & 1:
                    grid[y][x] = "#"
        for (jid, colour, anchored, mask) in self.pieces:
            glyph = colour[0].upper() if not colour[0].isdigit() else colour[0]
            if colour == BLACK:
                glyph = "b"
            if anchored:
                glyph = glyph.lower() if glyph.isalpha() and not colour == BLACK else glyph
            for (x, y) in b.cells_of(mask):
                grid[y][x] = glyph
        return "\n".join("".join(row) for row in grid)


def _shift(board, mask, direction):
    """Shift a mask one cell; returns None if a cell leaves the board."""
    if direction == LEFT:
        out = mask >> 1
        if out.bit_count() != mask.bit_count():
            return None
        return out
    if direction == RIGHT:
        return mask << 1  # sentinel column catches the edge
    raise ValueError(direction)


def push_set(state, jid, direction):
    """Minimal transitively-closed set of jellies that must shift together.

    Raises Blocked if a wall, the board edge or an anchored jelly stops the
    chain, NoSuchJelly / Immovable for bad arguments.
    """
    target = state.piece(jid)
    if target is None:
        raise NoSuchJelly(jid)
    if target[2]:
        raise Immovable(jid)
    board = state.board
    anchored_mask = 0
    for p in state.pieces:
        if p[2]:
            anchored_mask |= p[3]
    hard = board.blocked_static | anchored_mask
    chain = {jid}
    frontier = [target]
    moved_union = 0
    while frontier:
        nxt = []
        for p in frontier:
            shifted = _shift(board, p[3], direction)
            if shifted is None or shifted & hard:
                raise Blocked(jid)
            moved_union |= shifted
        for q in state.pieces:
            if q[0] in chain or q[2]:
                continue
            if moved_union & q[3]:
                chain.add(q[0])
                nxt.append(q)
        frontier = nxt
    return frozenset(chain)


def merge_pass(state):
    """Union every touching group of same-coloured non-black jellies."""
    board = state.board
    pieces = list(state.pieces)
    merged = _merge_inplace(board, pieces)
    return JellyState(board, pieces) if merged else state


def _dilate(board, mask):
    return ((mask << 1) | (mask >> 1) | (mask << board.stride) | (mask >> board.stride)) & board.full


def _merge_inplace(board, pieces):
    changed = False
    while True:
        groups = {}
        for i, p in enumerate(pieces):
            if p[1] != BLACK:
                groups.setdefault(p[1], []).append(i)
        todo = None
        for colour, idxs in groups.items():
            if len(idxs) < 2:
                continue
            for a in range(len(idxs)):
                ia = idxs[a]
                da = _dilate(board, pieces[ia][3])
                for b in range(a + 1, len(idxs)):
                    ib = idxs[b]
                    if da & pieces[ib][3]:
                        todo = (ia, ib)
                        break
                if todo:
                    break
            if todo:
                break
        if not todo:
            return changed
        ia, ib = todo
        pa, pb = pieces[ia], pieces[ib]
        union = (min(pa[0], pb[0]), pa[1], pa[2] or pb[2], pa[3] | pb[3])
        pieces[ia] = union
        del pieces[ib]
        changed = True


def settle(state):
    """Gravity fixpoint: drop every unsupported group one cell, merge, repeat."""
    board = state.board
    stride = board.stride
    pieces = list(state.pieces)
    _merge_inplace(board, pieces)
    while True:
        falling = [i for i, p in enumerate(pieces) if not p[2]]
        while True:
            support = board.blocked_static
            falling_set = set(falling)
            for i, p in enumerate(pieces):
                if i not in falling_set:
                    support |= p[3]
            keep = []
            for i in falling:
                m = pieces[i][3]
                below = (m << stride) & ~m
                if below & ~board.full or below & support:
                    continue  # supported: floor, wall, anchored or non-falling piece
                keep.append(i)
            if len(keep) == len(falling):
                break
            falling = keep
        if not falling:
            break
        for i in falling:
            p = pieces[i]
            pieces[i] = (p[0], p[1], p[2], p[3] << stride)
        _merge_inplace(board, pieces)
    st = JellyState(board, pieces)
    return st


def apply_move(state, move):
    """One player move: shift the push chain one cell, then settle."""
    jid, direction = move
    chain = push_set(state, jid, direction)
    board = state.board
    pieces = []
    for p in state.pieces:
        if p[0] in chain:
            pieces.append((p[0], p[1], p[2], _shift(board, p[3], direction)))
        else:
            pieces.append(p)
    _merge_inplace(board, pieces)
    return settle(JellyState(board, pieces))


def legal_moves(state):
    """Deterministic move order: jellies by id, Left before Right."""
    out = []
    for p in state.pieces:
        if p[2]:
            continue
        for d in (LEFT, RIGHT):
            try:
                push_set(state, p[0], d)
            except MoveError:
                continue
            out.append((p[0], d))
    return out


def is_won(state):
    counts = {}
    for p in state.pieces:
        if p[1] != BLACK:
            counts[p[1]] = counts.get(p[1], 0) + 1
    return all(n == 1 for n in counts.values())


def canonical_key(state):
    """Digest of occupied-cell/colour/anchored content, id- and order-free."""
    if state._key is not None:
        return state._key
    items = sorted((p[1], p[2], p[3]) for p in state.pieces)
    h = hashlib.blake2b(digest_size=16)
    h.update(f"{state.board.width}x{state.board.height}".encode())
    for colour, anchored, mask in items:
        h.update(colour.encode())
        h.update(b"\x01" if anchored else b"\x00")
        h.update(mask.to_bytes((mask.bit_length() + 7) // 8 or 1, "little"))
        h.update(b"|")
    key = h.digest()
    state._key = key
    return key


def full_key(state):
    """Collision-free structural key (used by the paranoid solver mode)."""
    return (state.board.width, state.board.height,
            tuple(sorted((p[1], p[2], p[3]) for p in state.pieces)))
