"""Degree-specified near-triangulations, their completions, and islands.

A configuration is a connected plane near-triangulation (every bounded
face a triangle) carrying a degree target gamma(v) >= 5 per vertex.
Interior vertices already meet their target; each boundary vertex is
owed gamma(v) - deg(v) further edges. The completion pays that debt
canonically: a cycle of new ring vertices is wrapped around the boundary
walk and the gap is triangulated fan-wise, leaving the configuration as
the interior of a triangulated disk whose outer cycle is the ring.

The inner dual of the completed disk (a vertex per bounded face, an
edge per completion edge shared by two bounded faces) is an island: a
2-connected plane graph with degrees 2 and 3 whose degree-2 vertices
trace the ring in cyclic order.

appears_in finds the placements of a configuration inside an embedded
triangulation: induced, degree- and face-exact, and sitting in a disk
whose local rotations match under one consistent choice of handedness.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Optional, Sequence, Union

from .graphs import (
    Graph,
    articulation_points,
    graph_from_faces,
    graph_from_neighbors,
    is_connected,
)


class ConfigurationError(ValueError):
    """Malformed file, violated defining clause, or impossible completion."""


# -- configurations ----------------------------------------------------------


@dataclass(frozen=True)
class Configuration:
    """A near-triangulation with degree targets.

    contracts holds optional edge sets of the completed graph, recorded
    as vertex pairs where ring vertices are numbered n, n+1, ... in
    boundary order; they parameterize later reducibility checks.
    """

    graph: Graph
    gamma: tuple[int, ...]
    contracts: tuple[tuple[tuple[int, int], ...], ...] = ()

    @property
    def n(self) -> int:
        return self.graph.n

    def cut_vertices(self) -> set[int]:
        return articulation_points(self.graph)

    @property
    def has_cut_vertex(self) -> bool:
        return bool(self.cut_vertices())

    def boundary_vertices(self) -> list[int]:
        """Vertices on the unbounded face, ascending."""
        if self.graph.m == 0:
            return list(range(self.n))
        verts, _ = _outer_walk(self.graph)
        return sorted(set(verts))

    def interior_vertices(self) -> list[int]:
        on_walk = set(self.boundary_vertices())
        return [v for v in range(self.n) if v not in on_walk]

    @property
    def ring_size(self) -> int:
        """Length of the ring a completion must add."""
        if self.graph.m == 0:
            return self.gamma[0] - 1
        _, _, cs = _arc_lengths(self.graph, self.gamma)
        return sum(cs)


def _outer_face(g: Graph) -> tuple[list[list[tuple[int, int]]], int]:
    """All face walks plus the index of the unbounded one.

    The unbounded face is the unique non-triangle; in an all-triangle
    drawing the first face stands in (the choices are symmetric).
    """
    walks = g.face_walks()
    nontri = [i for i, w in enumerate(walks) if len(w) != 3]
    if len(nontri) > 1:
        raise ConfigurationError(f"{len(nontri)} faces are not triangles")
    return walks, (nontri[0] if nontri else 0)


def _outer_walk(g: Graph) -> tuple[list[int], list[int]]:
    """Vertex and edge sequence of the unbounded face.

    Rotated so the vertex sequence is lexicographically least; step i
    runs from verts[i] to verts[i+1] through edges[i], cyclically.
    """
    walks, oi = _outer_face(g)
    walk = walks[oi]
    verts = [g.dart_vertex(d) for d in walk]
    eids = [d[0] for d in walk]
    k = len(walk)
    best = min(range(k), key=lambda o: [verts[(o + j) % k] for j in range(k)])
    return (
        [verts[(best + j) % k] for j in range(k)],
        [eids[(best + j) % k] for j in range(k)],
    )


def _arc_lengths(g: Graph, gamma: Sequence[int]) -> tuple[list[int], list[int], list[int]]:
    """Boundary walk plus the ring vertices owed at each walk position.

    A vertex visited once owns gamma - deg - 1 ring vertices; a
    separating vertex is visited twice, owes two corner edges, and owns
    none (gamma = deg + 2 there).
    """
    verts, eids = _outer_walk(g)
    counts = Counter(verts)
    cs = [gamma[v] - g.degree(v) - 1 if counts[v] == 1 else 0 for v in verts]
    return verts, eids, cs


def _pieces_without(g: Graph, v: int) -> int:
    """Number of connected components after deleting vertex v."""
    seen = {v}
    pieces = 0
    for root in range(g.n):
        if root in seen:
            continue
        pieces += 1
        seen.add(root)
        stack = [root]
        while stack:
            x = stack.pop()
            for w in g.neighbors(x):
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
    return pieces


def parse_configuration(text: str) -> Configuration:
    """Parse the .conf format.

    Line 1 is ``conf <n> <ring-size>``; each of the next n lines is
    ``<id> <gamma> <deg> <nbrs...>`` with neighbors in clockwise order.
    Optional ``contract: <u-v> <u-v> ...`` lines each record one edge
    set of the completed graph, whose ring vertices are numbered n,
    n+1, ... in boundary order. ``#`` starts a comment.
    """
    lines = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append(line)
    if not lines:
        raise ConfigurationError("empty configuration file")
    head = lines[0].split()
    if len(head) != 3 or head[0] != "conf":
        raise ConfigurationError("malformed header")
    try:
        n, declared_ring = int(head[1]), int(head[2])
    except ValueError:
        raise ConfigurationError("malformed header") from None
    if n < 1 or len(lines) < 1 + n:
        raise ConfigurationError("missing vertex lines")

    gamma: list[Optional[int]] = [None] * n
    nbrs: list[Optional[list[int]]] = [None] * n
    for line in lines[1 : 1 + n]:
        try:
            parts = [int(x) for x in line.split()]
        except ValueError:
            raise ConfigurationError(f"malformed vertex line: {line!r}") from None
        if len(parts) < 3:
            raise ConfigurationError(f"malformed vertex line: {line!r}")
        v, gam, deg, row = parts[0], parts[1], parts[2], parts[3:]
        if not (0 <= v < n):
            raise ConfigurationError(f"vertex id {v} out of range")
        if nbrs[v] is not None:
            raise ConfigurationError(f"duplicate vertex {v}")
        if deg != len(row):
            raise ConfigurationError(f"vertex {v}: degree {deg} but {len(row)} neighbors")
        if len(set(row)) != len(row):
            raise ConfigurationError(f"vertex {v}: repeated neighbor")
        for w in row:
            if not (0 <= w < n) or w == v:
                raise ConfigurationError(f"vertex {v}: bad neighbor {w}")
        gamma[v] = gam
        nbrs[v] = row
    missing = [v for v in range(n) if nbrs[v] is None]
    if missing:
        raise ConfigurationError(f"vertex {missing[0]} has no line")

    contracts: list[tuple[tuple[int, int], ...]] = []
    for line in lines[1 + n :]:
        if not line.startswith("contract:"):
            raise ConfigurationError(f"unexpected line: {line!r}")
        pairs: list[tuple[int, int]] = []
        for tok in line[len("contract:") :].split():
            a, dash, b = tok.partition("-")
            try:
                u, w = int(a), int(b)
            except ValueError:
                raise ConfigurationError(f"malformed contract pair: {tok!r}") from None
            if not dash:
                raise ConfigurationError(f"malformed contract pair: {tok!r}")
            pairs.append((u, w))
        if not pairs:
            raise ConfigurationError("empty contract line")
        contracts.append(tuple(pairs))

    try:
        g = graph_from_neighbors([row for row in nbrs if row is not None])
    except ValueError as exc:
        raise ConfigurationError(str(exc)) from None
    config = Configuration(g, tuple(x for x in gamma if x is not None), tuple(contracts))
    _validate(config, declared_ring)
    return config


def _validate(config: Configuration, declared_ring: Optional[int]) -> None:
    """Check the three defining clauses; report every violation by name."""
    g, gamma = config.graph, config.gamma
    if not is_connected(g):
        raise ConfigurationError("graph is not connected")
    if g.m:
        if g.has_loops():
            raise ConfigurationError("loops are not allowed")
        if any(len(g.edges_between(u, v)) > 1 for u, v in g.edge_list):
            raise ConfigurationError("parallel edges are not allowed")
        if g.euler_characteristic() != 2:
            raise ConfigurationError("rotations do not describe a plane drawing")
        _outer_face(g)  # rejects a second unbounded candidate
        walk_verts, _ = _outer_walk(g)
        occurrences = Counter(walk_verts)
    else:
        occurrences = Counter({0: 1})
    boundary = set(occurrences)

    problems: list[str] = []
    for v in range(g.n):
        pieces = _pieces_without(g, v)
        if pieces > 2:
            problems.append(f"separation clause: removing vertex {v} leaves {pieces} pieces")
        elif pieces == 2 and gamma[v] != g.degree(v) + 2:
            problems.append(
                f"separation clause: vertex {v} separates the graph, gamma must be degree + 2"
            )
        if occurrences.get(v, 0) == 2 and pieces != 2:
            problems.append(
                f"separation clause: vertex {v} meets the unbounded face twice without separating"
            )
        elif occurrences.get(v, 0) > 2:
            problems.append(f"separation clause: vertex {v} meets the unbounded face {occurrences[v]} times")
    for v in range(g.n):
        if gamma[v] < 5:
            problems.append(f"degree clause: vertex {v} has gamma {gamma[v]} below 5")
        elif v in boundary:
            if gamma[v] <= g.degree(v):
                problems.append(f"degree clause: boundary vertex {v} needs gamma above its degree")
        elif gamma[v] != g.degree(v):
            problems.append(f"degree clause: interior vertex {v} needs gamma equal to its degree")

    ring = config.ring_size
    if ring < 2:
        problems.append(f"ring clause: ring-size {ring} is below 2")
    if declared_ring is not None and ring != declared_ring:
        problems.append(f"header declares ring-size {declared_ring}, graph yields {ring}")

    limit = g.n + max(ring, 0)
    for cset in config.contracts:
        for u, w in cset:
            if not (0 <= u < limit and 0 <= w < limit) or u == w:
                problems.append(f"contract pair {u}-{w} is out of range")
    if problems:
        raise ConfigurationError("; ".join(problems))


# -- free completions --------------------------------------------------------


@dataclass(frozen=True)
class FreeCompletion:
    """A configuration completed into a triangulated disk.

    completion's first core.n vertices induce exactly the configuration
    (edge ids are renumbered); the rest form the bounding ring, in
    cyclic order along the unbounded face.
    """

    core: Configuration
    completion: Graph
    ring: tuple[int, ...]


def free_completion(config: Configuration) -> FreeCompletion:
    """Wrap a ring around the boundary and triangulate the gap.

    Deterministic: ring vertex n+j sits at offset j along the boundary
    walk, counted from the walk's lexicographically least rotation; each
    boundary occurrence owns a fan of its owed ring vertices and the
    corner between consecutive occurrences is shared. Raises
    ConfigurationError when a degree target cannot be met.
    """
    g, gamma = config.graph, config.gamma
    n = g.n
    if g.m == 0:
        raise ConfigurationError(
            f"degree target unreachable: an isolated vertex meets at most its {gamma[0] - 1} ring vertices"
        )
    verts, _, cs = _arc_lengths(g, gamma)
    length = len(verts)
    ring_len = sum(cs)
    if ring_len < 3:
        raise ConfigurationError(f"ring of length {ring_len} cannot bound a triangulated disk")
    starts = [0] * length
    for i in range(1, length):
        starts[i] = starts[i - 1] + cs[i - 1]

    def rv(j: int) -> int:
        return n + (j % ring_len)

    walks, oi = _outer_face(g)
    faces: list[tuple[int, ...]] = []
    for i, w in enumerate(walks):
        if i != oi:
            faces.append(tuple(g.dart_vertex(d) for d in w))
    for i in range(length):
        v = verts[i]
        for j in range(cs[i]):
            faces.append((v, rv(starts[i] + j), rv(starts[i] + j + 1)))
        faces.append((v, verts[(i + 1) % length], rv(starts[i] + cs[i])))
    try:
        s = graph_from_faces(n + ring_len, faces)
    except ValueError as exc:
        raise ConfigurationError(f"completion failed: {exc}") from None
    for v in range(n):
        if s.degree(v) != gamma[v]:
            raise ConfigurationError(
                f"degree target unreachable: vertex {v} completes to degree {s.degree(v)}, needs {gamma[v]}"
            )
    if s.euler_characteristic() != 2:
        raise ConfigurationError("completion failed: result is not a plane drawing")
    ring = tuple(range(n, n + ring_len))
    _ring_face_edges(s, ring)
    return FreeCompletion(config, s, ring)


def _ring_face_edges(s: Graph, ring: Sequence[int]) -> list[int]:
    """Edge ids along the ring cycle; the ring must bound a face."""
    k = len(ring)
    eids = []
    for j in range(k):
        between = s.edges_between(ring[j], ring[(j + 1) % k])
        if len(between) != 1:
            raise ConfigurationError("completion failed: broken ring cycle")
        eids.append(between[0])
    want = sorted(eids)
    for w in s.face_walks():
        if sorted(d[0] for d in w) == want:
            return eids
    raise ConfigurationError("completion failed: ring does not bound a face")


# -- islands -----------------------------------------------------------------


@dataclass(frozen=True)
class Island:
    """Inner dual of a triangulated disk.

    graph: 2-connected plane graph with degrees 2 and 3 only;
    boundary: the degree-2 vertices in cyclic order along the disk edge;
    edge_origin: per island edge, the completion edge it crosses;
    face_of: per island vertex, the completion face it stands on.
    The provenance fields stay None for islands built directly.
    """

    graph: Graph
    boundary: tuple[int, ...]
    edge_origin: Optional[tuple[int, ...]] = None
    face_of: Optional[tuple[tuple[int, ...], ...]] = None


def validate_island(island: Island) -> None:
    """Check the island invariants, raising ConfigurationError."""
    g = island.graph
    if g.n < 3 or not is_connected(g) or articulation_points(g):
        raise ConfigurationError("island is not 2-connected")
    bad = [v for v in range(g.n) if g.degree(v) not in (2, 3)]
    if bad:
        raise ConfigurationError(f"island vertex {bad[0]} has degree {g.degree(bad[0])}")
    two = [v for v in range(g.n) if g.degree(v) == 2]
    if sorted(island.boundary) != two:
        raise ConfigurationError("island boundary must list the degree-2 vertices once each")


def island_of(source: Union[Configuration, FreeCompletion]) -> Island:
    """Inner dual of the completion.

    One island vertex per bounded face; one island edge per completion
    edge interior to the disk (ring edges border the unbounded face and
    drop out). Island edge ids run in completion edge id order.
    """
    fc = source if isinstance(source, FreeCompletion) else free_completion(source)
    s = fc.completion
    ordered_ring = _ring_face_edges(s, fc.ring)
    ring_edges = set(ordered_ring)
    dual = s.dual()
    # the unbounded face is the dual vertex whose edges are exactly the ring
    outer = [v for v in range(dual.n) if set(dual.incident_edges(v)) == ring_edges]
    if len(outer) != 1:
        raise ConfigurationError("completion failed: unbounded face is not ring-bounded")
    o = outer[0]
    new_id = {v: i for i, v in enumerate(x for x in range(dual.n) if x != o)}
    keep = [e for e in range(dual.m) if e not in ring_edges]
    edge_id = {e: i for i, e in enumerate(keep)}
    edges = []
    for e in keep:
        u, w = dual.endpoints(e)
        if o in (u, w) or u == w:
            raise ConfigurationError("completion failed: unbounded face leaks past the ring")
        edges.append((new_id[u], new_id[w]))
    rotations = []
    face_of = []
    for v in range(dual.n):
        if v == o:
            continue
        rotations.append([(edge_id[e], k) for (e, k) in dual.rotation(v) if e not in ring_edges])
        stood_on: set[int] = set()
        for e in dual.incident_edges(v):
            stood_on.update(s.endpoints(e))
        face_of.append(tuple(sorted(stood_on)))
    graph = Graph(dual.n - 1, edges, rotations, [dual.sign(e) for e in keep])
    boundary = []
    for e in ordered_ring:
        u, w = dual.endpoints(e)
        boundary.append(new_id[u if w == o else w])
    island = Island(graph, tuple(boundary), tuple(keep), tuple(face_of))
    validate_island(island)
    return island


# -- appearance testing -------------------------------------------------------


def _check_host(t: Graph) -> None:
    if not t.has_embedding():
        raise ValueError("host graph has no embedding")
    if not is_connected(t):
        raise ValueError("host graph is not connected")
    if t.has_loops():
        raise ValueError("host graph must be simple")
    seen: set[frozenset] = set()
    for e in range(t.m):
        u, v = t.endpoints(e)
        key = frozenset((u, v))
        if key in seen:
            raise ValueError("host graph must be simple")
        seen.add(key)
    if any(len(w) != 3 for w in t.face_walks()):
        raise ValueError("host graph is not a triangulation")


def _arc_match(seq: Sequence[int], rho: Sequence[int]) -> bool:
    """True when seq occurs as consecutive entries of the cyclic rho."""
    k = len(rho)
    if len(seq) > k:
        return False
    return any(all(rho[(o + t) % k] == seq[t] for t in range(len(seq))) for o in range(k))


def _fan_orders(config: Configuration) -> dict[int, tuple[int, ...]]:
    """Per boundary vertex, its neighbors in linear order across the disk.

    The fan starts at the edge leaving along the boundary walk and ends
    at the edge arriving, never crossing the unbounded corner. Only
    meaningful without separating vertices (single corner each).
    """
    g = config.graph
    verts, eids = _outer_walk(g)
    length = len(verts)
    fan: dict[int, tuple[int, ...]] = {}
    for i in range(length):
        v = verts[i]
        rot = g.rotation(v)
        d = len(rot)
        if d == 1:
            fan[v] = (g.dart_other_vertex(rot[0]),)
            continue
        pos = {rot[t][0]: t for t in range(d)}
        p, q = pos[eids[(i - 1) % length]], pos[eids[i]]
        if (q - p) % d == 1:
            step = 1
        elif (p - q) % d == 1:
            step = -1
        else:
            raise ConfigurationError(f"boundary corner at vertex {v} is not a face corner")
        fan[v] = tuple(g.dart_other_vertex(rot[(q + t * step) % d]) for t in range(d))
    return fan


def _direction_options(seq: Sequence[int], rho: Sequence[int]) -> set[int]:
    """Handedness values under which seq matches an arc of rho."""
    if len(seq) <= 1:
        return {1, -1}
    opts = set()
    if _arc_match(seq, rho):
        opts.add(1)
    if _arc_match(seq, tuple(reversed(rho))):
        opts.add(-1)
    return opts


def appears_in(config: Configuration, tri: Graph) -> list[tuple[int, ...]]:
    """All placements of the configuration inside an embedded triangulation.

    A placement is an injective vertex map whose image is induced, whose
    host degrees equal gamma, whose bounded faces land on host faces,
    and whose local rotations match contiguous arcs of the host rotation
    under one consistent handedness; an edge with host sign -1 flips the
    required handedness between its ends. Configurations with a
    separating vertex occupy no disk and get no placements.

    Returns vertex maps as tuples indexed by configuration vertex,
    sorted; reflected placements count separately.
    """
    if config.has_cut_vertex:
        return []
    g, gamma = config.graph, config.gamma
    _check_host(tri)
    n = g.n
    if g.m == 0:
        return [(w,) for w in range(tri.n) if tri.degree(w) == gamma[0]]

    host_faces = {frozenset(tri.dart_vertex(d) for d in w) for w in tri.face_walks()}
    host_rho = {v: tuple(tri.dart_other_vertex(d) for d in tri.rotation(v)) for v in range(tri.n)}
    host_adj = [[False] * tri.n for _ in range(tri.n)]
    for e in range(tri.m):
        u, v = tri.endpoints(e)
        host_adj[u][v] = host_adj[v][u] = True

    walks, oi = _outer_face(g)
    own_faces = [tuple(g.dart_vertex(d) for d in w) for i, w in enumerate(walks) if i != oi]
    fan = _fan_orders(config)
    full_cycle = {
        v: tuple(g.dart_other_vertex(d) for d in g.rotation(v))
        for v in range(n)
        if v not in fan
    }
    kadj = [[False] * n for _ in range(n)]
    for u, v in g.edge_list:
        kadj[u][v] = kadj[v][u] = True

    # breadth-first vertex order so every later vertex has a placed neighbor
    order = [0]
    placed_mark = [False] * n
    placed_mark[0] = True
    qi = 0
    while qi < len(order):
        for w in g.neighbors(order[qi]):
            if not placed_mark[w]:
                placed_mark[w] = True
                order.append(w)
        qi += 1
    anchor = {}
    for idx, v in enumerate(order[1:], 1):
        anchor[v] = next(u for u in order[:idx] if kadj[v][u])

    image = [-1] * n
    used = [False] * tri.n
    results: list[tuple[int, ...]] = []

    def handed_ok() -> bool:
        opts = {}
        for v in range(n):
            rho = host_rho[image[v]]
            seq = tuple(image[x] for x in (fan[v] if v in fan else full_cycle[v]))
            o = _direction_options(seq, rho)
            if not o:
                return False
            opts[v] = o
        for h0 in opts[0]:
            hand = {0: h0}
            stack = [0]
            good = True
            while stack and good:
                v = stack.pop()
                for e in g.incident_edges(v):
                    w = g.other_end(e, v)
                    te = tri.edges_between(image[v], image[w])[0]
                    want = hand[v] * tri.sign(te)
                    if w in hand:
                        if hand[w] != want:
                            good = False
                            break
                    elif want in opts[w]:
                        hand[w] = want
                        stack.append(w)
                    else:
                        good = False
                        break
            if good:
                return True
        return False

    def place(idx: int) -> None:
        if idx == n:
            if all(frozenset(image[x] for x in f) in host_faces for f in own_faces):
                if handed_ok():
                    results.append(tuple(image))
            return
        v = order[idx]
        candidates = (
            range(tri.n) if idx == 0 else host_rho[image[anchor[v]]]
        )
        for w in candidates:
            if used[w] or tri.degree(w) != gamma[v]:
                continue
            if any(
                image[u] != -1 and kadj[v][u] != host_adj[w][image[u]]
                for u in range(n)
            ):
                continue
            image[v] = w
            used[w] = True
            place(idx + 1)
            image[v] = -1
            used[w] = False

    place(0)
    return sorted(results)
