"""Embedded multigraphs, the 3-edge-coloring oracle, and Kempe chain operations.

A graph is an undirected multigraph on vertices 0..n-1 with numbered edges.
An embedding, when present, is a rotation system with edge signs: the cyclic
order of edge ends around every vertex, plus a sign in {+1, -1} per edge.
Sign -1 marks an edge that crosses the crosscap; an embedding lies in the
projective plane exactly when the traced Euler characteristic is 1, which
forces some cycle with negative sign product.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Sequence

Dart = tuple[int, int]  # (edge id, end index 0 or 1)


class Graph:
    """Undirected multigraph with an optional rotation-system embedding.

    Edges are numbered 0..m-1 in construction order; edge e joins the pair
    ``endpoints(e)``. A dart (e, k) is the end of edge e at vertex
    ``endpoints(e)[k]``; loops contribute two darts at the same vertex.
    ``rotation(v)`` lists the darts at v in cyclic order when the graph
    carries an embedding.
    """

    __slots__ = ("_n", "_edges", "_signs", "_rot", "_pos", "_inc")

    def __init__(
        self,
        num_vertices: int,
        edges: Sequence[tuple[int, int]],
        rotations: Optional[Sequence[Sequence[Dart]]] = None,
        signs: Optional[Sequence[int]] = None,
    ):
        if num_vertices < 0:
            raise ValueError("negative vertex count")
        self._n = num_vertices
        self._edges = [(int(u), int(v)) for u, v in edges]
        for u, v in self._edges:
            if not (0 <= u < num_vertices and 0 <= v < num_vertices):
                raise ValueError("edge endpoint out of range")
        m = len(self._edges)
        if signs is None:
            self._signs = [1] * m
        else:
            self._signs = [int(s) for s in signs]
            if len(self._signs) != m or any(s not in (-1, 1) for s in self._signs):
                raise ValueError("bad sign vector")

        # incidence lists; loops appear twice at their vertex
        inc: list[list[Dart]] = [[] for _ in range(num_vertices)]
        for e, (u, v) in enumerate(self._edges):
            inc[u].append((e, 0))
            inc[v].append((e, 1))
        self._inc = inc

        if rotations is None:
            self._rot = None
            self._pos = None
        else:
            rot = [tuple((int(e), int(k)) for e, k in r) for r in rotations]
            if len(rot) != num_vertices:
                raise ValueError("rotation count mismatch")
            pos: dict[Dart, tuple[int, int]] = {}
            for v, r in enumerate(rot):
                for i, d in enumerate(r):
                    e, k = d
                    if not (0 <= e < m and k in (0, 1)):
                        raise ValueError("bad dart in rotation")
                    if self._edges[e][k] != v:
                        raise ValueError("dart listed at wrong vertex")
                    if d in pos:
                        raise ValueError("dart repeated in rotations")
                    pos[d] = (v, i)
            if len(pos) != 2 * m:
                raise ValueError("rotation misses a dart")
            self._rot = rot
            self._pos = pos

    # -- basic accessors ---------------------------------------------------

    @property
    def n(self) -> int:
        return self._n

    @property
    def m(self) -> int:
        return len(self._edges)

    def endpoints(self, e: int) -> tuple[int, int]:
        return self._edges[e]

    def sign(self, e: int) -> int:
        return self._signs[e]

    @property
    def edge_list(self) -> list[tuple[int, int]]:
        return list(self._edges)

    @property
    def sign_list(self) -> list[int]:
        return list(self._signs)

    def has_embedding(self) -> bool:
        return self._rot is not None

    def rotation(self, v: int) -> tuple[Dart, ...]:
        if self._rot is None:
            raise ValueError("graph has no embedding")
        return tuple(self._rot[v])

    def rotations(self) -> list[tuple[Dart, ...]]:
        if self._rot is None:
            raise ValueError("graph has no embedding")
        return [tuple(r) for r in self._rot]

    def incident_darts(self, v: int) -> list[Dart]:
        if self._rot is not None:
            return list(self._rot[v])
        return list(self._inc[v])

    def incident_edges(self, v: int) -> list[int]:
        return [e for e, _ in self.incident_darts(v)]

    def dart_vertex(self, d: Dart) -> int:
        e, k = d
        return self._edges[e][k]

    def dart_other_vertex(self, d: Dart) -> int:
        e, k = d
        return self._edges[e][1 - k]

    def other_end(self, e: int, v: int) -> int:
        u, w = self._edges[e]
        if u == v:
            return w
        if w == v:
            return u
        raise ValueError("vertex not on edge")

    def degree(self, v: int) -> int:
        return len(self._inc[v])

    def degrees(self) -> list[int]:
        return [len(self._inc[v]) for v in range(self._n)]

    def neighbors(self, v: int) -> list[int]:
        return [self.dart_other_vertex(d) for d in self.incident_darts(v)]

    def edges_between(self, u: int, v: int) -> list[int]:
        return [e for e, (a, b) in enumerate(self._edges) if {a, b} == {u, v} or (u == v and a == b == u)]

    def is_loop(self, e: int) -> bool:
        u, v = self._edges[e]
        return u == v

    def has_loops(self) -> bool:
        return any(u == v for u, v in self._edges)

    def is_cubic(self) -> bool:
        return all(len(self._inc[v]) == 3 for v in range(self._n))

    def copy(self) -> "Graph":
        return Graph(self._n, self._edges, self._rot, self._signs)

    def without_embedding(self) -> "Graph":
        return Graph(self._n, self._edges, None, self._signs)

    def relabeled(self, perm: Sequence[int]) -> "Graph":
        """New graph with vertex v renamed perm[v]; edge ids and order kept."""
        if sorted(perm) != list(range(self._n)):
            raise ValueError("not a permutation")
        edges = [(perm[u], perm[v]) for u, v in self._edges]
        rot = None
        if self._rot is not None:
            rot = [()] * self._n
            for v in range(self._n):
                rot[perm[v]] = self._rot[v]
        return Graph(self._n, edges, rot, self._signs)

    def __repr__(self) -> str:
        return f"Graph(n={self._n}, m={self.m})"

    # -- face tracing ------------------------------------------------------

    # Flags are (dart, side) pairs packed as 4*e + 2*k + t with t=0 for side
    # +1 and t=1 for side -1. The three involutions generate the embedding:
    #   s0: walk along the edge (side flips unless the edge sign is -1)
    #   s1: step to the adjacent dart around the vertex (side flips)
    #   s2: flip the side
    # Faces are orbits of s1*s0; each face yields two mirror orbits whose
    # length equals the face degree.

    def _flag_perms(self) -> tuple[list[int], list[int]]:
        if self._rot is None or self._pos is None:
            raise ValueError("graph has no embedding")
        m = self.m
        s0 = [0] * (4 * m)
        s1 = [0] * (4 * m)
        for e in range(m):
            for k in (0, 1):
                for t in (0, 1):
                    f = 4 * e + 2 * k + t
                    t0 = (1 - t) if self._signs[e] == 1 else t
                    s0[f] = 4 * e + 2 * (1 - k) + t0
                    v, i = self._pos[(e, k)]
                    deg = len(self._rot[v])
                    step = 1 if t == 0 else -1
                    e2, k2 = self._rot[v][(i + step) % deg]
                    s1[f] = 4 * e2 + 2 * k2 + (1 - t)
        return s0, s1

    def face_walks(self) -> list[list[Dart]]:
        """One boundary walk per face, as a dart sequence of the face degree."""
        if self.m == 0:
            return []
        s0, s1 = self._flag_perms()
        nf = 4 * self.m
        seen = [False] * nf
        walks: list[list[Dart]] = []
        for start in range(nf):
            if seen[start]:
                continue
            walk: list[Dart] = []
            orbit: list[int] = []
            f = start
            while not seen[f]:
                seen[f] = True
                orbit.append(f)
                walk.append((f // 4, (f // 2) % 2))
                f = s1[s0[f]]
            if f != start:
                raise ValueError("inconsistent embedding data")
            # mark the mirror orbit without emitting it
            g = s0[start]
            if seen[g]:
                raise ValueError("inconsistent embedding data")
            while not seen[g]:
                seen[g] = True
                g = s1[s0[g]]
            walks.append(walk)
        return walks

    def face_count(self) -> int:
        return len(self.face_walks())

    def euler_characteristic(self) -> int:
        """V - E + F from face tracing; meaningful for connected embeddings."""
        return self._n - self.m + self.face_count()

    def surface(self) -> str:
        chi = self.euler_characteristic()
        if chi == 2:
            return "sphere"
        if chi == 1:
            return "projective-plane"
        return f"chi={chi}"

    def is_projective_embedding(self) -> bool:
        return self.euler_characteristic() == 1

    def embedding_orientable(self) -> bool:
        """True iff every cycle has positive sign product (gauge test)."""
        gauge = [0] * self._n
        for root in range(self._n):
            if gauge[root]:
                continue
            gauge[root] = 1
            stack = [root]
            while stack:
                v = stack.pop()
                for d in self._inc[v]:
                    e, _ = d
                    w = self.dart_other_vertex(d)
                    want = gauge[v] * self._signs[e]
                    if gauge[w] == 0:
                        gauge[w] = want
                        stack.append(w)
                    elif gauge[w] != want:
                        return False
        return True

    def dual(self) -> "Graph":
        """Face-vertex dual of the embedded graph.

        Dual edge ids equal primal edge ids. The dual carries the embedding
        induced by the face walks; tracing its faces recovers the primal
        vertices.
        """
        s0, s1 = self._flag_perms()
        nf = 4 * self.m
        seen = [False] * nf
        chosen = [False] * nf
        visits: dict[int, list[tuple[int, int]]] = {e: [] for e in range(self.m)}
        face_idx = 0
        rotations: list[list[tuple[int, int]]] = []  # per face: (edge, visit slot)
        for start in range(nf):
            if seen[start]:
                continue
            f = start
            order: list[tuple[int, int]] = []
            while not seen[f]:
                seen[f] = True
                chosen[f] = True
                e = f // 4
                visits[e].append((face_idx, len(order)))
                order.append((e, f))
                f = s1[s0[f]]
            g = s0[start]
            while not seen[g]:
                seen[g] = True
                g = s1[s0[g]]
            rotations.append(order)
            face_idx += 1

        edges: list[tuple[int, int]] = []
        signs: list[int] = []
        end_of_visit: dict[tuple[int, int], int] = {}
        for e in range(self.m):
            vis = visits[e]
            if len(vis) != 2:
                raise ValueError("inconsistent embedding data")
            vis.sort()
            edges.append((vis[0][0], vis[1][0]))
            end_of_visit[vis[0]] = 0
            end_of_visit[vis[1]] = 1
            # dual sign from the chosen-flag rule: negative when both sides
            # of one flag pair were swallowed by the same traversal direction
            fl = 4 * e
            ext_a = 1 if chosen[fl] else -1
            ext_b = 1 if chosen[fl ^ 1] else -1
            signs.append(-ext_a * ext_b)

        rot: list[list[Dart]] = []
        for fi, order in enumerate(rotations):
            r = []
            for slot, (e, _flag) in enumerate(order):
                r.append((e, end_of_visit[(fi, slot)]))
            rot.append(r)
        return Graph(face_idx, edges, rot, signs)


# -- construction helpers --------------------------------------------------


def graph_from_neighbors(
    neighbor_lists: Sequence[Sequence[int]],
    negative_pairs: Iterable[tuple[int, int]] = (),
) -> Graph:
    """Build a graph from per-vertex neighbor lists in rotation order.

    Parallel edges are matched occurrence by occurrence: the k-th time w
    appears in v's list pairs with the k-th time v appears in w's list.
    Loops pair consecutive occurrences of v in its own list.
    negative_pairs assigns sign -1, one edge per listed pair in edge order.
    """
    n = len(neighbor_lists)
    nbrs = [list(r) for r in neighbor_lists]
    for v, row in enumerate(nbrs):
        for w in row:
            if not (0 <= w < n):
                raise ValueError("neighbor out of range")
    edges: list[tuple[int, int]] = []
    dart_at: dict[tuple[int, int], Dart] = {}
    for u in range(n):
        for w in range(u, n):
            pu = [i for i, x in enumerate(nbrs[u]) if x == w]
            if u == w:
                if len(pu) % 2:
                    raise ValueError(f"vertex {u}: unmatched loop end")
                for t in range(0, len(pu), 2):
                    e = len(edges)
                    edges.append((u, u))
                    dart_at[(u, pu[t])] = (e, 0)
                    dart_at[(u, pu[t + 1])] = (e, 1)
            else:
                pw = [i for i, x in enumerate(nbrs[w]) if x == u]
                if len(pu) != len(pw):
                    raise ValueError(f"inconsistent adjacency between {u} and {w}")
                for t in range(len(pu)):
                    e = len(edges)
                    edges.append((u, w))
                    dart_at[(u, pu[t])] = (e, 0)
                    dart_at[(w, pw[t])] = (e, 1)
    rotations = [[dart_at[(v, i)] for i in range(len(nbrs[v]))] for v in range(n)]
    signs = [1] * len(edges)
    for u, v in negative_pairs:
        hit = [e for e, (a, b) in enumerate(edges) if {a, b} == {u, v} or (u == v and a == b == u)]
        free = [e for e in hit if signs[e] == 1]
        if not free:
            raise ValueError(f"no remaining edge between {u} and {v} to sign")
        signs[free[0]] = -1
    return Graph(n, edges, rotations, signs)


def graph_from_edges(n: int, edges: Sequence[tuple[int, int]]) -> Graph:
    """Graph without embedding data."""
    return Graph(n, edges, None, None)


# -- file format -----------------------------------------------------------


def parse_graph(text: str) -> Graph:
    """Parse the cubic graph file format.

    Line 1 is ``cubic <n>``; each of the next n lines is
    ``<id>: <nbr> <nbr> <nbr>`` listing the neighbors in rotation order; an
    optional ``signs:`` section lists ``<u> <v> -1`` per crosscap edge.
    ``#`` starts a comment.
    """
    lines = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append(line)
    if not lines:
        raise ValueError("empty graph file")
    head = lines[0].split()
    if len(head) != 2 or head[0] != "cubic":
        raise ValueError("malformed header")
    try:
        n = int(head[1])
    except ValueError:
        raise ValueError("malformed header") from None
    if n < 1 or len(lines) < 1 + n:
        raise ValueError("missing vertex lines")
    nbrs: list[Optional[list[int]]] = [None] * n
    for line in lines[1 : 1 + n]:
        if ":" not in line:
            raise ValueError(f"malformed vertex line: {line!r}")
        left, right = line.split(":", 1)
        try:
            v = int(left)
            row = [int(x) for x in right.split()]
        except ValueError:
            raise ValueError(f"malformed vertex line: {line!r}") from None
        if not (0 <= v < n):
            raise ValueError(f"vertex id {v} out of range")
        if nbrs[v] is not None:
            raise ValueError(f"duplicate vertex {v}")
        if len(row) != 3:
            raise ValueError(f"vertex {v}: expected 3 neighbors, got {len(row)}")
        for w in row:
            if not (0 <= w < n):
                raise ValueError(f"vertex {v}: neighbor {w} out of range")
            if w == v:
                raise ValueError(f"vertex {v}: loop in cubic graph")
        nbrs[v] = row
    missing = [v for v in range(n) if nbrs[v] is None]
    if missing:
        raise ValueError(f"vertex {missing[0]} has no line")

    rest = lines[1 + n :]
    negative: list[tuple[int, int]] = []
    if rest:
        if rest[0] != "signs:":
            raise ValueError(f"unexpected line: {rest[0]!r}")
        for line in rest[1:]:
            parts = line.split()
            if len(parts) != 3 or parts[2] != "-1":
                raise ValueError(f"malformed sign line: {line!r}")
            negative.append((int(parts[0]), int(parts[1])))
    g = graph_from_neighbors([row for row in nbrs if row is not None], negative)
    if not g.is_cubic():
        raise ValueError("graph is not cubic")
    return g


def format_graph(g: Graph) -> str:
    """Serialize a cubic embedded graph in the parse_graph format."""
    if not g.is_cubic():
        raise ValueError("only cubic graphs have a file form")
    out = [f"cubic {g.n}"]
    for v in range(g.n):
        row = " ".join(str(g.dart_other_vertex(d)) for d in g.incident_darts(v))
        out.append(f"{v}: {row}")
    neg = [e for e in range(g.m) if g.sign(e) == -1]
    if neg:
        out.append("signs:")
        for e in neg:
            u, v = g.endpoints(e)
            out.append(f"{u} {v} -1")
    return "\n".join(out) + "\n"


# -- connectivity ----------------------------------------------------------


def connected_components(g: Graph, omit_edges: Iterable[int] = ()) -> list[list[int]]:
    """Vertex sets of the components of g minus the omitted edges."""
    omit = set(omit_edges)
    seen = [False] * g.n
    comps: list[list[int]] = []
    for root in range(g.n):
        if seen[root]:
            continue
        comp = [root]
        seen[root] = True
        stack = [root]
        while stack:
            v = stack.pop()
            for d in g._inc[v]:
                e = d[0]
                if e in omit:
                    continue
                w = g.dart_other_vertex(d)
                if not seen[w]:
                    seen[w] = True
                    comp.append(w)
                    stack.append(w)
        comps.append(sorted(comp))
    return comps


def is_connected(g: Graph) -> bool:
    return len(connected_components(g)) <= 1


def bridges(g: Graph) -> set[int]:
    """Edge ids whose removal disconnects their component. Loops never count."""
    low = [0] * g.n
    num = [-1] * g.n
    out: set[int] = set()
    counter = 0
    for root in range(g.n):
        if num[root] != -1:
            continue
        # iterative DFS tracking the edge used to enter each vertex
        stack: list[tuple[int, int, Iterator[Dart]]] = []
        num[root] = low[root] = counter
        counter += 1
        stack.append((root, -1, iter(g._inc[root])))
        while stack:
            v, in_edge, it = stack[-1]
            advanced = False
            for d in it:
                e = d[0]
                if e == in_edge or g.is_loop(e):
                    continue
                w = g.dart_other_vertex(d)
                if num[w] == -1:
                    num[w] = low[w] = counter
                    counter += 1
                    stack.append((w, e, iter(g._inc[w])))
                    advanced = True
                    break
                low[v] = min(low[v], num[w])
            if not advanced:
                stack.pop()
                if stack:
                    pv = stack[-1][0]
                    low[pv] = min(low[pv], low[v])
                    if low[v] > num[pv] and len(g.edges_between(pv, v)) == 1:
                        out.add(in_edge)
        # parallel edges are excluded by the multiplicity check above
    return out


def articulation_points(g: Graph) -> set[int]:
    """Vertices whose removal disconnects their component. Loops never count."""
    low = [0] * g.n
    num = [-1] * g.n
    out: set[int] = set()
    counter = 0
    for root in range(g.n):
        if num[root] != -1:
            continue
        root_children = 0
        stack: list[tuple[int, int, Iterator[Dart]]] = []
        num[root] = low[root] = counter
        counter += 1
        stack.append((root, -1, iter(g._inc[root])))
        while stack:
            v, in_edge, it = stack[-1]
            advanced = False
            for d in it:
                e = d[0]
                if e == in_edge or g.is_loop(e):
                    continue
                w = g.dart_other_vertex(d)
                if num[w] == -1:
                    if v == root:
                        root_children += 1
                    num[w] = low[w] = counter
                    counter += 1
                    stack.append((w, e, iter(g._inc[w])))
                    advanced = True
                    break
                low[v] = min(low[v], num[w])
            if not advanced:
                stack.pop()
                if stack:
                    pv = stack[-1][0]
                    low[pv] = min(low[pv], low[v])
                    if pv != root and low[v] >= num[pv]:
                        out.add(pv)
        if root_children >= 2:
            out.add(root)
    return out


def is_biconnected(g: Graph) -> bool:
    """Connected, at least 3 vertices, and free of articulation points."""
    return g.n >= 3 and is_connected(g) and not articulation_points(g)


# -- 3-edge-coloring oracle ------------------------------------------------

EdgeColoring = dict  # edge id -> color in {0, 1, 2}


def edge_colorings(g: Graph, colors: tuple[int, ...] = (0, 1, 2)) -> Iterator[EdgeColoring]:
    """All proper edge colorings of a multigraph with max degree <= len(colors).

    Deterministic order: saturation-first edge selection with id tie-break,
    colors tried in ascending order.
    """
    if g.has_loops():
        return iter(())
    m = g.m
    if m == 0:
        return iter(({},))

    # per-edge neighbor lists (edges sharing a vertex)
    adj: list[set[int]] = [set() for _ in range(m)]
    for v in range(g.n):
        inc = [d[0] for d in g._inc[v]]
        for e in inc:
            adj[e].update(x for x in inc if x != e)
    adj_l = [sorted(s) for s in adj]

    def run() -> Iterator[EdgeColoring]:
        assignment: dict[int, int] = {}

        def pick() -> int:
            best, best_sat = -1, -1
            for e in range(m):
                if e in assignment:
                    continue
                sat = sum(1 for f in adj_l[e] if f in assignment)
                if sat > best_sat:
                    best, best_sat = e, sat
            return best

        def rec() -> Iterator[EdgeColoring]:
            if len(assignment) == m:
                yield dict(assignment)
                return
            e = pick()
            used = {assignment[f] for f in adj_l[e] if f in assignment}
            for c in colors:
                if c in used:
                    continue
                assignment[e] = c
                yield from rec()
                del assignment[e]

        yield from rec()

    return run()


def three_edge_color(g: Graph) -> Optional[EdgeColoring]:
    """First proper 3-edge-coloring of a cubic graph, or None."""
    if not g.is_cubic():
        raise ValueError("graph is not cubic")
    if g.has_loops():
        raise ValueError("cubic graph has a loop")
    for c in edge_colorings(g):
        return c
    return None


def is_proper_coloring(g: Graph, coloring: EdgeColoring) -> bool:
    if set(coloring.keys()) != set(range(g.m)):
        return False
    for v in range(g.n):
        cs = [coloring[d[0]] for d in g._inc[v]]
        if len(cs) != len(set(cs)):
            return False
    return True


# -- Kempe chains ----------------------------------------------------------


@dataclass(frozen=True)
class KempeChain:
    colors: frozenset
    edges: tuple[int, ...]
    is_cycle: bool


def kempe_chain(g: Graph, coloring: EdgeColoring, pair: tuple[int, int], start: int) -> KempeChain:
    """Maximal path or even cycle through start using the two colors of pair."""
    a, b = pair
    if a == b:
        raise ValueError("color pair must be distinct")
    if coloring[start] not in (a, b):
        raise ValueError("start edge not colored with the pair")

    def next_edge(v: int, want: int, avoid: int) -> Optional[int]:
        for d in g._inc[v]:
            e = d[0]
            if e != avoid and coloring[e] == want:
                return e
        return None

    u0, v0 = g.endpoints(start)
    chain = [start]
    # forward from v0
    v, prev = v0, start
    while True:
        want = a if coloring[prev] == b else b
        e = next_edge(v, want, prev)
        if e is None:
            closed = False
            break
        if e == start:
            closed = True
            break
        chain.append(e)
        v = g.other_end(e, v)
        prev = e
    if not closed:
        # backward from u0
        v, prev = u0, start
        while True:
            want = a if coloring[prev] == b else b
            e = next_edge(v, want, prev)
            if e is None:
                break
            chain.insert(0, e)
            v = g.other_end(e, v)
            prev = e
    return KempeChain(colors=frozenset((a, b)), edges=tuple(chain), is_cycle=closed)


def kempe_swap(g: Graph, coloring: EdgeColoring, chain: KempeChain) -> EdgeColoring:
    """Exchange the chain's two colors along it; properness is preserved."""
    a, b = sorted(chain.colors)
    out = dict(coloring)
    for e in chain.edges:
        if out[e] == a:
            out[e] = b
        elif out[e] == b:
            out[e] = a
        else:
            raise ValueError("chain edge not colored with the pair")
    return out


# -- delete and suppress ---------------------------------------------------


def delete_and_suppress_traced(
    g: Graph, removed: Iterable[int]
) -> tuple[Graph, dict[int, tuple[int, ...]], list[tuple[int, ...]]]:
    """Remove edges, suppress degree-2 vertices, drop isolated vertices.

    Returns (graph, provenance, dropped) where provenance maps each new edge
    to the ordered tuple of original edges merged into it, and dropped lists
    purely cyclic chains that suppressed away entirely.
    """
    rem = set(removed)
    for e in rem:
        if not (0 <= e < g.m):
            raise ValueError("removed edge out of range")
    fcount = [0] * g.n
    for e in rem:
        u, v = g.endpoints(e)
        fcount[u] += 1
        fcount[v] += 1
        if u == v:
            fcount[u] += 1

    kept = [e for e in range(g.m) if e not in rem]
    deg = [0] * g.n
    for e in kept:
        u, v = g.endpoints(e)
        deg[u] += 1
        deg[v] += 1
        if u == v:
            deg[u] += 1

    suppress = [deg[v] == 2 and fcount[v] > 0 for v in range(g.n)]
    # degree-2 vertices of the original graph are not suppression artifacts;
    # only vertices that lost edges get suppressed
    keep_vertex = [deg[v] > 0 and not suppress[v] for v in range(g.n)]

    # walk chains through suppressed vertices
    inc_kept: list[list[Dart]] = [[] for _ in range(g.n)]
    for e in kept:
        u, v = g.endpoints(e)
        inc_kept[u].append((e, 0))
        inc_kept[v].append((e, 1))

    new_index = {}
    for v in range(g.n):
        if keep_vertex[v]:
            new_index[v] = len(new_index)

    used = set()
    new_edges: list[tuple[int, int]] = []
    new_signs: list[int] = []
    provenance: dict[int, tuple[int, ...]] = {}
    dropped: list[tuple[int, ...]] = []

    def walk(start_dart: Dart) -> tuple[int, list[int], int]:
        """Follow kept edges through suppressed vertices from a dart."""
        path = []
        sgn = 1
        d = start_dart
        while True:
            e = d[0]
            path.append(e)
            sgn *= g.sign(e)
            w = g.dart_other_vertex(d)
            if not suppress[w]:
                return w, path, sgn
            # a suppressed vertex has exactly two kept darts
            cand = [x for x in inc_kept[w]]
            cand.remove((e, 1 - d[1]))
            d = cand[0]

    for v in range(g.n):
        if not keep_vertex[v]:
            continue
        for d in inc_kept[v]:
            e = d[0]
            if e in used:
                continue
            w, path, sgn = walk(d)
            for x in path:
                used.add(x)
            eid = len(new_edges)
            new_edges.append((new_index[v], new_index[w]))
            new_signs.append(sgn)
            provenance[eid] = tuple(path)

    # remaining kept edges lie on pure suppressed cycles
    for v in range(g.n):
        if not suppress[v]:
            continue
        for d in inc_kept[v]:
            e = d[0]
            if e in used:
                continue
            cyc = []
            dd = d
            while dd[0] not in used:
                used.add(dd[0])
                cyc.append(dd[0])
                w = g.dart_other_vertex(dd)
                cand = [x for x in inc_kept[w]]
                cand.remove((dd[0], 1 - dd[1]))
                dd = cand[0]
            dropped.append(tuple(cyc))

    out = Graph(len(new_index), new_edges, None, new_signs)
    return out, provenance, dropped


def delete_and_suppress(g: Graph, removed: Iterable[int]) -> Graph:
    """Delete the edge set and suppress the resulting degree-2 vertices.

    Requires every endpoint of a removed edge to have degree 3 and no vertex
    to meet exactly two removed edges.
    """
    rem = set(removed)
    count = [0] * g.n
    for e in rem:
        u, v = g.endpoints(e)
        if g.degree(u) != 3 or g.degree(v) != 3:
            raise ValueError("removed edge endpoint does not have degree 3")
        count[u] += 1
        count[v] += 1
        if u == v:
            count[u] += 1
    for v in range(g.n):
        if count[v] == 2:
            raise ValueError(f"vertex {v} is incident with exactly two removed edges")
    out, _, _ = delete_and_suppress_traced(g, rem)
    return out


# -- isomorphism -----------------------------------------------------------


def _refine(g: Graph, colors: list[int]) -> list[int]:
    """Stable neighborhood refinement; class ids ordered by signature."""
    while True:
        sigs = []
        for v in range(g.n):
            nb = sorted(colors[g.dart_other_vertex(d)] for d in g._inc[v] if not g.is_loop(d[0]))
            loops = sum(1 for d in g._inc[v] if g.is_loop(d[0]))
            sigs.append((colors[v], loops, tuple(nb)))
        order = sorted(set(sigs))
        lookup = {s: i for i, s in enumerate(order)}
        new = [lookup[s] for s in sigs]
        if new == colors:
            return colors
        colors = new


def _canonical_signature(g: Graph, colors: list[int]) -> tuple:
    pos = sorted(range(g.n), key=lambda v: colors[v])
    rank = [0] * g.n
    for i, v in enumerate(pos):
        rank[v] = i
    pairs = sorted(
        (min(rank[u], rank[v]), max(rank[u], rank[v])) for u, v in g.edge_list
    )
    return tuple(pairs)


def _canon_search(g: Graph, colors: list[int], best: list) -> None:
    colors = _refine(g, colors)
    cells: dict[int, list[int]] = {}
    for v in range(g.n):
        cells.setdefault(colors[v], []).append(v)
    target = None
    for c in sorted(cells):
        if len(cells[c]) > 1:
            target = c
            break
    if target is None:
        sig = _canonical_signature(g, colors)
        if best[0] is None or sig < best[0]:
            best[0] = sig
        return
    for v in cells[target]:
        child = list(colors)
        child[v] = len(cells) + max(colors) + 1  # fresh color, splits the cell
        _canon_search(g, child, best)


def canonical_key(g: Graph) -> tuple:
    """Hashable key equal for isomorphic multigraphs (signs ignored)."""
    start = [0] * g.n
    best: list = [None]
    _canon_search(g, start, best)
    return (g.n, g.m, best[0])


def is_isomorphic(g1: Graph, g2: Graph) -> bool:
    """Exact multigraph isomorphism by canonical labeling."""
    if g1.n != g2.n or g1.m != g2.m:
        return False
    if sorted(g1.degrees()) != sorted(g2.degrees()):
        return False
    return canonical_key(g1) == canonical_key(g2)


# -- standard graphs -------------------------------------------------------


def k4() -> Graph:
    """K4 with a planar rotation system."""
    return graph_from_neighbors([
        [1, 2, 3],
        [0, 3, 2],
        [0, 1, 3],
        [0, 2, 1],
    ])


def prism(k: int = 3) -> Graph:
    """The circular prism on 2k vertices (two k-cycles joined by a matching)."""
    if k < 3:
        raise ValueError("prism needs k >= 3")
    nbrs = []
    for i in range(k):
        nbrs.append([(i + 1) % k, k + i, (i - 1) % k])
    for i in range(k):
        nbrs.append([k + (i + 1) % k, i, k + (i - 1) % k])
    return graph_from_neighbors(nbrs)


def petersen() -> Graph:
    """The Petersen graph (abstract rotations, all signs +1)."""
    nbrs = []
    for i in range(5):
        nbrs.append([(i + 1) % 5, 5 + i, (i - 1) % 5])
    for i in range(5):
        nbrs.append([5 + (i + 2) % 5, i, 5 + (i - 2) % 5])
    return graph_from_neighbors(nbrs)


def k33() -> Graph:
    """K_{3,3} (abstract rotations)."""
    nbrs = [[3, 4, 5], [3, 4, 5], [3, 4, 5], [0, 1, 2], [0, 1, 2], [0, 1, 2]]
    return graph_from_neighbors(nbrs)


def orient_faces(faces: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """Flip face cycles so every shared edge is traversed once per direction.

    Works for face sets of an orientable surface, with or without boundary;
    raises when an edge is used by more than two face sides or when no
    consistent orientation exists.
    """
    faces = [tuple(f) for f in faces]
    by_edge: dict[tuple[int, int], list[int]] = {}
    for fi, f in enumerate(faces):
        if len(f) < 3:
            raise ValueError("face with fewer than 3 vertices")
        for i in range(len(f)):
            a, b = f[i], f[(i + 1) % len(f)]
            if a == b:
                raise ValueError("face repeats a vertex consecutively")
            key = (min(a, b), max(a, b))
            by_edge.setdefault(key, []).append(fi)
    for key, fs in by_edge.items():
        if len(fs) > 2:
            raise ValueError(f"edge {key} used by more than two faces")

    flip = [None] * len(faces)

    def directed(fi: int, key: tuple[int, int]) -> bool:
        """True if face fi (after flip) walks key as (min, max)."""
        f = faces[fi]
        for i in range(len(f)):
            a, b = f[i], f[(i + 1) % len(f)]
            if (min(a, b), max(a, b)) == key:
                forward = (a, b) == key
                return forward != flip[fi]
        raise AssertionError

    for root in range(len(faces)):
        if flip[root] is not None:
            continue
        flip[root] = False
        queue = [root]
        while queue:
            fi = queue.pop()
            f = faces[fi]
            for i in range(len(f)):
                a, b = f[i], f[(i + 1) % len(f)]
                key = (min(a, b), max(a, b))
                for fj in by_edge[key]:
                    if fj == fi:
                        continue
                    want = not directed(fi, key)
                    if flip[fj] is None:
                        # fj must walk the edge in the opposite direction
                        flip[fj] = False
                        if directed(fj, key) != want:
                            flip[fj] = True
                        queue.append(fj)
                    elif directed(fj, key) != want:
                        raise ValueError("face set is not orientable")
    return [tuple(reversed(f)) if flip[fi] else f for fi, f in enumerate(faces)]


def graph_from_faces(num_vertices: int, faces: Sequence[Sequence[int]]) -> Graph:
    """Embedded simple graph from its face list.

    Faces are vertex cycles in arbitrary orientation; they are first made
    consistent, then rotations are read off the corners. Boundary (edges on
    a single face) is allowed: boundary vertices get the open fan order.
    """
    oriented = orient_faces(faces)
    succ: dict[tuple[int, int], int] = {}
    verts: dict[int, set[int]] = {}
    for f in oriented:
        k = len(f)
        for i in range(k):
            a, v, b = f[i - 1], f[i], f[(i + 1) % k]
            if (v, a) in succ:
                raise ValueError("corner conflict: directed edge reused")
            succ[(v, a)] = b
            verts.setdefault(v, set()).update((a, b))
    nbrs: list[list[int]] = [[] for _ in range(num_vertices)]
    for v in range(num_vertices):
        around = verts.get(v, set())
        if not around:
            continue
        preds = {succ[(v, w)] for w in around if (v, w) in succ}
        starts = [w for w in sorted(around) if w not in preds]
        if len(starts) > 1:
            raise ValueError(f"vertex {v} has a pinched neighborhood")
        w = starts[0] if starts else min(around)
        chain = [w]
        while (v, w) in succ and succ[(v, w)] != chain[0]:
            w = succ[(v, w)]
            chain.append(w)
        if len(chain) != len(around):
            raise ValueError(f"vertex {v} has a pinched neighborhood")
        nbrs[v] = chain
    return graph_from_neighbors(nbrs)


def icosahedron(with_antipode: bool = False):
    """The icosahedron as an embedded sphere triangulation.

    Vertices: 0 = north pole, 1..5 = upper ring, 6..10 = lower ring,
    11 = south pole. With with_antipode=True also returns the fixed-point
    free antipodal automorphism as a list.
    """
    N, S = 0, 11

    def up(i: int) -> int:
        return 1 + i % 5

    def lo(i: int) -> int:
        return 6 + i % 5

    faces: list[tuple[int, int, int]] = []
    for i in range(5):
        faces.append((N, up(i), up(i + 1)))
        faces.append((up(i), up(i + 1), lo(i)))
        faces.append((lo(i), lo(i + 1), up(i + 1)))
        faces.append((S, lo(i), lo(i + 1)))
    g = graph_from_faces(12, faces)
    if not with_antipode:
        return g
    antipode = [0] * 12
    antipode[N], antipode[S] = S, N
    for i in range(5):
        antipode[up(i)] = lo(i + 2)
        antipode[lo(i + 2)] = up(i)
    return g, antipode


def antipodal_quotient(g: Graph, antipode: Sequence[int]) -> Graph:
    """Quotient of an embedded simple graph by a fixed-point free involution.

    The involution must be an automorphism with no vertex adjacent to its
    image. Edge orbits become single edges; an orbit is signed -1 unless one
    of its members joins two class representatives. Quotienting an orientable
    chi=2 embedding yields a projective-plane embedding.
    """
    n = g.n
    if sorted(antipode) != list(range(n)):
        raise ValueError("antipode is not a permutation")
    for v in range(n):
        if antipode[antipode[v]] != v or antipode[v] == v:
            raise ValueError("antipode is not a fixed-point free involution")
    edge_ids: dict[frozenset, int] = {}
    for e in range(g.m):
        u, v = g.endpoints(e)
        if u == v or len(g.edges_between(u, v)) != 1:
            raise ValueError("quotient needs a simple graph")
        if antipode[u] == v:
            raise ValueError("edge between antipodal vertices")
        edge_ids[frozenset((u, v))] = e

    reps = [v for v in range(n) if v < antipode[v]]
    cls = {}
    for i, r in enumerate(reps):
        cls[r] = i
        cls[antipode[r]] = i

    orbit_id: dict[int, int] = {}
    q_edges: list[tuple[int, int]] = []
    q_signs: list[int] = []
    for e in range(g.m):
        if e in orbit_id:
            continue
        u, v = g.endpoints(e)
        mate_key = frozenset((antipode[u], antipode[v]))
        if mate_key not in edge_ids:
            raise ValueError("antipode is not an automorphism")
        mate = edge_ids[mate_key]
        qe = len(q_edges)
        orbit_id[e] = qe
        orbit_id[mate] = qe
        if cls[u] == cls[v]:
            raise ValueError("edge orbit collapses to a loop")
        # +1 when some orbit member joins two representatives: the lift then
        # stays inside the fundamental domain and keeps its orientation
        rep_rep = (u < antipode[u]) == (v < antipode[v])
        q_edges.append((cls[u], cls[v]))
        q_signs.append(1 if rep_rep else -1)

    rotations: list[list[Dart]] = [[] for _ in range(len(reps))]
    for i, r in enumerate(reps):
        for d in g.rotation(r):
            e = d[0]
            qe = orbit_id[e]
            a, b = q_edges[qe]
            if a == i and b == i:
                raise ValueError("edge orbit collapses to a loop")
            rotations[i].append((qe, 0 if a == i else 1))
    return Graph(len(reps), q_edges, rotations, q_signs)
