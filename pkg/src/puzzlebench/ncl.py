"""Restricted Nondeterministic Constraint Logic: model and brute-force oracle.

Graphs are simple, planar, 3-regular; every vertex is AND (incident weights
1,1,2) or OR (2,2,2).  An orientation assigns each edge a head vertex; it is
valid when every vertex's incoming weight sum is at least two.  A move flips
one edge while keeping validity.  ``flip_search`` answers whether a target
edge can ever be flipped, by exhaustive BFS over orientations (exact
bitmask states, no hashing approximation).

A planar embedding (rotation system plus outer face) is part of the input;
we check Euler's formula by tracing faces rather than running a planarity
test.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field


@dataclass(frozen=True)
class NCLGraph:
    vertices: tuple          # ((vid, "AND"|"OR"), ...)
    edges: tuple             # ((eid, u, v, weight), ...)
    embedding: dict          # vid -> cyclic tuple of incident eids
    outer_face: tuple = None  # eids bounding the outer face

    def vertex_type(self, vid):
        for v, t in self.vertices:
            if v == vid:
                return t
        raise KeyError(vid)

    def edge(self, eid):
        for e in self.edges:
            if e[0] == eid:
                return e
        raise KeyError(eid)

    def incident(self, vid):
        return [e for e in self.edges if vid in (e[1], e[2])]

    def other_end(self, eid, vid):
        _, u, v, _ = self.edge(eid)
        return v if vid == u else u

    def validate(self):
        vids = [v for v, _ in self.vertices]
        if len(set(vids)) != len(vids):
            raise ValueError("duplicate vertex ids")
        seen_pairs = set()
        for eid, u, v, w in self.edges:
            if u == v:
                raise ValueError(f"loop at {u}")
            if u not in vids or v not in vids:
                raise ValueError(f"edge {eid} uses unknown vertex")
            pair = frozenset((u, v))
            if pair in seen_pairs:
                raise ValueError(f"multiple edge {u}-{v}")
            seen_pairs.add(pair)
            if w not in (1, 2):
                raise ValueError(f"edge {eid} weight {w}")
        for vid, vtype in self.vertices:
            inc = self.incident(vid)
            if len(inc) != 3:
                raise ValueError(f"vertex {vid} has degree {len(inc)}")
            weights = sorted(e[3] for e in inc)
            if vtype == "AND" and weights != [1, 1, 2]:
                raise ValueError(f"AND vertex {vid} weights {weights}")
            if vtype == "OR" and weights != [2, 2, 2]:
                raise ValueError(f"OR vertex {vid} weights {weights}")
            rot = self.embedding.get(vid)
            if rot is None or sorted(rot) != sorted(e[0] for e in inc):
                raise ValueError(f"embedding at {vid} is not its incident edges")
        faces = self.trace_faces()
        V, E, F = len(self.vertices), len(self.edges), len(faces)
        if not self._connected():
            raise ValueError("graph is not connected")
        if V - E + F != 2:
            raise ValueError(f"rotation system is not planar: V-E+F = {V - E + F}")
        if self.outer_face is not None:
            face_sets = [frozenset(eid for eid, _ in f) for f in faces]
            if frozenset(self.outer_face) not in face_sets:
                raise ValueError("outer face does not match any traced face")
        return self

    def _connected(self):
        vids = [v for v, _ in self.vertices]
        adj = {v: [] for v in vids}
        for _, u, v, _ in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        seen = {vids[0]}
        stack = [vids[0]]
        while stack:
            for nb in adj[stack.pop()]:
                if nb not in seen:
                    seen.add(nb)
                    stack.append(nb)
        return len(seen) == len(vids)

    def trace_faces(self):
        """Face orbits of the rotation system, as tuples of darts (eid, tail)."""
        darts = set()
        for eid, u, v, _ in self.edges:
            darts.add((eid, u))
            darts.add((eid, v))
        faces = []
        while darts:
            start = min(darts)
            face = []
            d = start
            while True:
                face.append(d)
                darts.discard(d)
                eid, tail = d
                head = self.other_end(eid, tail)
                rot = self.embedding[head]
                i = rot.index(eid)
                nxt = rot[(i + 1) % len(rot)]
                d = (nxt, head)
                if d == start:
                    break
            faces.append(tuple(face))
        return faces


@dataclass(frozen=True)
class FlipProblem:
    graph: NCLGraph
    orientation: dict        # eid -> head vid
    target: str

    def validate(self):
        self.graph.validate()
        if set(self.orientation) != {e[0] for e in self.graph.edges}:
            raise ValueError("orientation must assign every edge")
        for eid, head in self.orientation.items():
            e = self.graph.edge(eid)
            if head not in (e[1], e[2]):
                raise ValueError(f"edge {eid} cannot point at {head}")
        self.graph.edge(self.target)
        bad = validate_orientation(self.graph, self.orientation)
        if bad:
            raise ValueError(f"initial orientation invalid: {bad}")
        return self


def inflows(graph, orientation):
    flow = {v: 0 for v, _ in graph.vertices}
    for eid, u, v, w in graph.edges:
        flow[orientation[eid]] += w
    return flow


def validate_orientation(graph, orientation):
    """Empty list when valid, else (vertex, inflow) pairs below the minimum."""
    return [(v, f) for v, f in sorted(inflows(graph, orientation).items()) if f < 2]


def legal_flips(graph, orientation):
    """Edges whose single flip keeps every inflow at two or more."""
    out = []
    flow = inflows(graph, orientation)
    for eid, u, v, w in graph.edges:
        head = orientation[eid]
        tail = u if head == v else v
        # flipping moves w of inflow from head to tail; only head can break
        if flow[head] - w >= 2:
            out.append(eid)
    return out


def flip_search(problem):
    """Shortest flip sequence ending with the target edge, or None.

    BFS over all valid orientations reachable from the initial one; states
    are exact bitmasks over edges (bit set = edge points at its 'v' end).
    """
    problem.validate()
    graph = problem.graph
    edges = graph.edges
    index = {e[0]: i for i, e in enumerate(edges)}
    tgt = index[problem.target]

    def mask_of(orientation):
        m = 0
        for i, (eid, u, v, w) in enumerate(edges):
            if orientation[eid] == v:
                m |= 1 << i
        return m

    def orient_of(mask):
        return {eid: (v if mask >> i & 1 else u)
                for i, (eid, u, v, w) in enumerate(edges)}

    vids = [v for v, _ in graph.vertices]
    vindex = {v: i for i, v in enumerate(vids)}
    # per edge: (weight, head-vertex-index when bit set, when clear)
    einfo = [(w, vindex[v], vindex[u]) for (eid, u, v, w) in edges]

    def flows(mask):
        flow = [0] * len(vids)
        for i, (w, hv, hu) in enumerate(einfo):
            flow[hv if mask >> i & 1 else hu] += w
        return flow

    def legal(mask, i):
        w, hv, hu = einfo[i]
        head = hv if mask >> i & 1 else hu
        return flows(mask)[head] - w >= 2

    start = mask_of(problem.orientation)
    seen = {start: (None, None)}
    queue = deque([start])
    while queue:
        mask = queue.popleft()
        flow = flows(mask)
        for i in range(len(edges)):
            w, hv, hu = einfo[i]
            head = hv if mask >> i & 1 else hu
            if flow[head] - w < 2:
                continue
            if i == tgt:
                seq = []
                k = mask
                while seen[k][0] is not None:
                    k, eidx = seen[k][0], seen[k][1]
                    seq.append(edges[eidx][0])
                seq.reverse()
                seq.append(edges[tgt][0])
                return seq
            nxt = mask ^ (1 << i)
            if nxt not in seen:
                seen[nxt] = (mask, i)
                queue.append(nxt)
    return None


def apply_flips(graph, orientation, flips):
    """Replay a flip sequence, checking validity at every step."""
    cur = dict(orientation)
    bad = validate_orientation(graph, cur)
    if bad:
        raise ValueError(f"invalid start: {bad}")
    for eid in flips:
        if eid not in legal_flips(graph, cur):
            raise ValueError(f"illegal flip {eid}")
        cur[eid] = graph.other_end(eid, cur[eid])
    return cur


def enumerate_valid_orientations(graph):
    """All valid orientations (for cross-checks on small graphs)."""
    edges = graph.edges
    out = []
    for mask in range(1 << len(edges)):
        orientation = {eid: (v if mask >> i & 1 else u)
                       for i, (eid, u, v, w) in enumerate(edges)}
        if not validate_orientation(graph, orientation):
            out.append(orientation)
    return out
