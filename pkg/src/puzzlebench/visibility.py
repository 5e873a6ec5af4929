"""Visibility representations of embedded planar graphs.

Vertices map to vertical bars (one column each), edges to horizontal
segments (one dedicated row each, never shared); a segment touches exactly
its endpoints' bars and crosses nothing else.  Construction: pick an
st-edge on the outer face, compute an st-numbering, orient edges from
lower to higher number, topologically order the faces of the resulting
planar st-graph and take edge rows from that order, vertex columns from
the st-order.  Rows are then spread so every edge has its own integer row,
which only stretches the drawing.
"""

from __future__ import annotations

from dataclasses import dataclass


class EmbeddingInvalid(ValueError):
    pass


@dataclass(frozen=True)
class EmbeddedGraph:
    """Minimal embedded-graph carrier for layouts outside NCL."""
    vertices: tuple           # ((vid, payload...), ...) - only vid is used
    edges: tuple              # ((eid, u, v[, weight]), ...)
    embedding: dict
    outer_face: tuple = None

    def other_end(self, eid, vid):
        for e in self.edges:
            if e[0] == eid:
                return e[2] if vid == e[1] else e[1]
        raise KeyError(eid)


@dataclass(frozen=True)
class VisRep:
    bars: dict                # vid -> (x, y_low, y_high)
    segments: dict            # eid -> (y, x_left, x_right)

    def width(self):
        return 1 + max(x for x, _, _ in self.bars.values())

    def rows(self):
        return sorted(y for y, _, _ in self.segments.values())


def _adjacency(graph):
    adj = {v[0]: [] for v in graph.vertices}
    for e in graph.edges:
        eid, u, v = e[0], e[1], e[2]
        adj[u].append((eid, v))
        adj[v].append((eid, u))
    return adj


def st_numbering(graph, s, t):
    """Order v0=s..vn=t so every inner vertex has earlier and later neighbours.

    Backtracking with connectivity pruning; graphs here are desk-sized.
    """
    adj = _adjacency(graph)
    vids = [v[0] for v in graph.vertices]
    n = len(vids)
    if s == t:
        raise EmbeddingInvalid("s and t must differ")

    def connected_rest(used):
        rest = [v for v in vids if v not in used]
        if not rest:
            return True
        seen = {t} if t not in used else set()
        if not seen:
            return False
        stack = [t]
        while stack:
            for _, nb in adj[stack.pop()]:
                if nb not in used and nb not in seen:
                    seen.add(nb)
                    stack.append(nb)
        return all(v in seen for v in rest)

    order = [s]
    used = {s}

    def later_ok(order):
        pos = {v: i for i, v in enumerate(order)}
        for v in order[1:-1]:
            if not any(pos[nb] > pos[v] for _, nb in adj[v]):
                return False
        return True

    def bt():
        if len(order) == n - 1:
            order.append(t)
            if later_ok(order):
                return True
            order.pop()
            return False
        for v in vids:
            if v in used or v == t:
                continue
            if not any(nb in used for _, nb in adj[v]):
                continue
            used.add(v)
            order.append(v)
            if connected_rest(used) and bt():
                return True
            used.discard(v)
            order.pop()
        return False

    if n == 2:
        if any(s in (e[1], e[2]) and t in (e[1], e[2]) for e in graph.edges):
            return [s, t]
        raise EmbeddingInvalid("no st-edge in a 2-vertex graph")
    if not bt():
        raise EmbeddingInvalid(f"no st-numbering for ({s},{t}); graph not biconnected?")
    return order


def _trace_faces(graph):
    darts = set()
    for e in graph.edges:
        darts.add((e[0], e[1]))
        darts.add((e[0], e[2]))
    faces = []
    while darts:
        start = min(darts)
        face = []
        d = start
        while True:
            face.append(d)
            darts.discard(d)
            eid, tail = d
            head = graph.other_end(eid, tail)
            rot = graph.embedding[head]
            try:
                i = rot.index(eid)
            except ValueError as exc:
                raise EmbeddingInvalid(f"edge {eid} missing from rotation at {head}") from exc
            nxt = rot[(i + 1) % len(rot)]
            d = (nxt, head)
            if d == start:
                break
        faces.append(tuple(face))
    return faces


def _pick_st_edge(graph, leftmost):
    faces = _trace_faces(graph)
    if graph.outer_face is not None:
        outer_set = frozenset(graph.outer_face)
        outer = next((f for f in faces if frozenset(e for e, _ in f) == outer_set), None)
        if outer is None:
            raise EmbeddingInvalid("outer face does not match the rotation system")
    else:
        outer = max(faces, key=len)
    if leftmost is not None:
        for eid, tail in outer:
            if tail == leftmost:
                return eid, tail, graph.other_end(eid, tail), faces, outer
        raise EmbeddingInvalid(f"vertex {leftmost} is not on the outer face")
    eid, tail = outer[0]
    return eid, tail, graph.other_end(eid, tail), faces, outer


def layout(graph, leftmost=None):
    """Build a VisRep; the designated vertex (if any) gets the smallest column.

    An embedding and its mirror image are both acceptable rotation systems,
    so the dual's left/right convention is tried both ways.
    """
    last = None
    for flip in (False, True):
        try:
            rep = _layout_once(graph, leftmost, flip)
        except EmbeddingInvalid as exc:
            last = exc
            continue
        problems = validate_visrep(rep, graph)
        if not problems:
            return rep
        last = EmbeddingInvalid(f"layout failed validation: {problems}")
    raise last


def _layout_once(graph, leftmost, flip):
    n = len(graph.vertices)
    if n < 2:
        raise EmbeddingInvalid("need at least two vertices")
    st_eid, s, t, faces, outer = _pick_st_edge(graph, leftmost)
    order = st_numbering(graph, s, t)
    num = {v: i for i, v in enumerate(order)}

    # orient every edge low -> high; dart (eid, tail=lower end)
    lower = {}
    for e in graph.edges:
        eid, u, v = e[0], e[1], e[2]
        lower[eid] = u if num[u] < num[v] else v

    face_index = {}
    for i, f in enumerate(faces):
        for d in f:
            face_index[d] = i
    outer_i = faces.index(outer)

    # dual st-graph: the face containing dart (e, lower) lies on one side of
    # e; call it the e's "left". The outer face splits into source and sink.
    S, T = "S*", "T*"

    def left_face(eid):
        tail = lower[eid] if not flip else graph.other_end(eid, lower[eid])
        i = face_index[(eid, tail)]
        return S if i == outer_i else i

    def right_face(eid):
        tail = graph.other_end(eid, lower[eid]) if not flip else lower[eid]
        i = face_index[(eid, tail)]
        return T if i == outer_i else i

    nodes = {S, T} | {i for i in range(len(faces)) if i != outer_i}
    dual_edges = []
    for e in graph.edges:
        eid = e[0]
        lf, rf = left_face(eid), right_face(eid)
        if lf == rf:
            # bridge edge: both sides are the same face; not st-planar
            raise EmbeddingInvalid(f"edge {eid} is a bridge")
        dual_edges.append((lf, rf, eid))

    # topological numbering of the dual
    outgoing = {nd: [] for nd in nodes}
    indeg = {nd: 0 for nd in nodes}
    for lf, rf, _ in dual_edges:
        outgoing[lf].append(rf)
        indeg[rf] += 1
    rank = {}
    ready = sorted([nd for nd in nodes if indeg[nd] == 0], key=str)
    k = 0
    while ready:
        nd = ready.pop(0)
        rank[nd] = k
        k += 1
        for m in sorted(outgoing[nd], key=str):
            indeg[m] -= 1
            if indeg[m] == 0:
                ready.append(m)
    if len(rank) != len(nodes):
        raise EmbeddingInvalid("dual graph has a cycle; embedding/numbering unusable")

    # one dedicated row per edge: order by (left-face rank, tail number)
    keyed = sorted(graph.edges,
                   key=lambda e: (rank[left_face(e[0])], num[lower[e[0]]], e[0]))
    row = {e[0]: i for i, e in enumerate(keyed)}

    bars = {}
    for v in order:
        incident_rows = [row[e[0]] for e in graph.edges if v in (e[1], e[2])]
        bars[v] = (num[v], min(incident_rows), max(incident_rows))
    segments = {}
    for e in graph.edges:
        eid, u, v = e[0], e[1], e[2]
        xs = sorted((num[u], num[v]))
        segments[eid] = (row[eid], xs[0], xs[1])
    return VisRep(bars, segments)


def validate_visrep(rep, graph):
    """All VisRep invariants plus incidence completeness; [] when valid."""
    problems = []
    cols = {}
    for v, (x, lo, hi) in rep.bars.items():
        if x < 0 or lo < 0 or hi < lo:
            problems.append(("BadBar", v))
        if x in cols:
            problems.append(("SharedColumn", v, cols[x]))
        cols[x] = v
    rows_seen = {}
    edges_by_id = {e[0]: e for e in graph.edges}
    if set(edges_by_id) != set(rep.segments):
        problems.append(("IncidenceIncomplete",))
        return problems
    for eid, (y, x1, x2) in rep.segments.items():
        e = edges_by_id[eid]
        u, v = e[1], e[2]
        if y in rows_seen:
            problems.append(("DistinctRows", eid, rows_seen[y]))
        rows_seen[y] = eid
        bu, bv = rep.bars[u], rep.bars[v]
        if {x1, x2} != {bu[0], bv[0]}:
            problems.append(("WrongEndpoints", eid))
        for w, (x, lo, hi) in rep.bars.items():
            if w in (u, v):
                if not (lo <= y <= hi):
                    problems.append(("EndpointMiss", eid, w))
                continue
            if x1 < x < x2 and lo <= y <= hi:
                problems.append(("Crossing", eid, w))
    return problems


@dataclass(frozen=True)
class VertexSignature:
    left: tuple               # (top, mid, bottom) each "B", "R" or "."
    right: tuple

    def __str__(self):
        return "(" + ",".join(self.left) + "|" + ",".join(self.right) + ")"

    def mirrored(self):
        return VertexSignature(self.right, self.left)

    def canonical(self):
        m = self.mirrored()
        return self if (self.left, self.right) <= (m.left, m.right) else m

    @staticmethod
    def parse(text):
        body = text.strip().strip("()").replace(" ", "")
        lt, rt = body.split("|")
        left = tuple(c if c in "BR" else "." for c in lt.split(","))
        right = tuple(c if c in "BR" else "." for c in rt.split(","))
        if len(left) != 3 or len(right) != 3:
            raise ValueError(f"bad signature {text!r}")
        return VertexSignature(left, right)


def vertex_signature(rep, graph, vid):
    """Six-slot description of where a degree-3 vertex's edges attach."""
    incident = [e for e in graph.edges if vid in (e[1], e[2])]
    if len(incident) != 3:
        raise ValueError(f"vertex {vid} has degree {len(incident)}")
    x = rep.bars[vid][0]
    entries = []
    for e in incident:
        eid, w = e[0], (e[3] if len(e) > 3 else 2)
        y = rep.segments[eid][0]
        other = graph.other_end(eid, vid)
        side = "left" if rep.bars[other][0] < x else "right"
        entries.append((y, side, "B" if w == 2 else "R"))
    entries.sort()
    left = ["."] * 3
    right = ["."] * 3
    for slot, (_, side, letter) in enumerate(entries):
        (left if side == "left" else right)[slot] = letter
    return VertexSignature(tuple(left), tuple(right))


def signature_census(rep, graph):
    out = {}
    for v in rep.bars:
        incident = [e for e in graph.edges if v in (e[1], e[2])]
        if len(incident) == 3:
            sig = vertex_signature(rep, graph, v)
            out[v] = sig
    return out
