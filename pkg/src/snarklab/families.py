"""Projective island families from crossed cycles and a Petersen remnant.

The crossed cycle on 2y vertices is an even cycle with all y main
diagonals added. Drawn with the diagonals through the crosscap it is
projective-planar with y quadrilateral faces and one 2y-gon. Planting
subdivision vertices on the cycle edges turns the 2y-gon into the ring
face of an island whose interior keeps the crosscap.

Generators, one member per isomorphism class:

    generate_gamma        every pattern of k subdivision vertices over
                          the 2y cycle edges
    generate_pi           the gamma patterns that cover every opposite
                          edge pair and spread enough vertices over
                          every short arc of the cycle
    generate_pi513_star   the densest ring-13 pi members, filtered
                          further by three-arc and antipodal-window
                          lower bounds
    generate_delta6       the embedded Petersen graph minus one edge,
                          with four subdivision vertices planted on its
                          octagon face
    generate_pi_hat_3_6   ring-6 pi members with two inner-face edges
                          subdivided once each and joined by a new edge

family_report runs the reducibility checker over a family and tabulates
the verdicts. All generators are deterministic and members carry the
subdivision patterns that produced them, so qualifying conditions can be
re-checked downstream without trusting the generator.
"""

from __future__ import annotations

import itertools
from collections import Counter, defaultdict
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Optional, Sequence

from .configurations import Island, validate_island
from .graphs import (
    Graph,
    antipodal_quotient,
    canonical_key,
    graph_from_neighbors,
    icosahedron,
)
from .reducibility import check_reducibility


@dataclass(frozen=True, eq=False)
class ProjectiveIsland:
    """A family member: an embedded island with its generation record.

    graph carries the projective embedding; boundary lists the degree-2
    vertices in ring-face walk order. patterns holds every symmetry-
    reduced generation pattern merged into this member; its meaning is
    family-specific (subdivision counts per cycle or octagon position,
    or a parent pattern extended by the two edge ids that received the
    extra chord).
    """

    graph: Graph
    boundary: tuple[int, ...]
    family: str
    patterns: tuple[tuple[int, ...], ...]

    @property
    def ring_size(self) -> int:
        return len(self.boundary)

    @property
    def is_island(self) -> bool:
        return bool(self.boundary)

    def island(self) -> Island:
        if not self.boundary:
            raise ValueError("member has no ring and is not an island")
        return Island(self.graph, self.boundary)


# -- base graphs ---------------------------------------------------------------


def generate_v2y(y: int) -> Graph:
    """The crossed cycle: C_2y plus all y main diagonals, embedded.

    Vertex i sits between i-1 and i+1 on the cycle and sends a diagonal
    to i+y. Diagonals carry sign -1, so the embedding lives on the
    projective plane (Euler characteristic 1) with y quadrilateral faces
    and one 2y-gon.
    """
    if y < 3:
        raise ValueError("crossed cycle needs y >= 3")
    n = 2 * y
    nbrs = [[(i + 1) % n, (i + y) % n, (i - 1) % n] for i in range(n)]
    return graph_from_neighbors(nbrs, [(i, i + y) for i in range(y)])


def _petersen_remnant() -> tuple[Graph, list[int]]:
    """The embedded Petersen graph with one edge removed.

    Returns the remnant and the edge ids of its octagon face in walk
    order. The embedding comes from the icosahedron: its antipodal
    quotient is a projective triangulation whose dual is the Petersen
    map. That map is edge-transitive, so removing edge 0 loses nothing.
    """
    ico, antipode = icosahedron(with_antipode=True)
    host = antipodal_quotient(ico, antipode).dual()
    keep = [e for e in range(host.m) if e != 0]
    remap = {old: new for new, old in enumerate(keep)}
    edges = [host.endpoints(e) for e in keep]
    signs = [host.sign(e) for e in keep]
    rot = [
        [(remap[e], end) for e, end in host.rotation(v) if e != 0]
        for v in range(host.n)
    ]
    g = Graph(host.n, edges, rot, signs)
    walk = next(w for w in g.face_walks() if len(w) == 8)
    return g, [d[0] for d in walk]


# -- embedded surgery ------------------------------------------------------------


def subdivide_embedded(
    g: Graph, counts: dict[int, int]
) -> tuple[Graph, list[list[int]]]:
    """Replace edge e by a chain of counts.get(e, 0) + 1 segments.

    The chain occupies the same two faces as the edge it replaces; the
    first segment inherits the edge sign and the rest are positive.
    Returns the new graph and, per original edge, its chain's new edge
    ids in endpoint order.
    """
    edges: list[tuple[int, int]] = []
    signs: list[int] = []
    half: dict[tuple[int, int], tuple[int, int]] = {}
    chain_rot: dict[int, list[tuple[int, int]]] = {}
    chains: list[list[int]] = []
    nid = g.n
    for e in range(g.m):
        t = counts.get(e, 0)
        u, v = g.endpoints(e)
        if t == 0:
            ne = len(edges)
            edges.append((u, v))
            signs.append(g.sign(e))
            half[(e, 0)] = (ne, 0)
            half[(e, 1)] = (ne, 1)
            chains.append([ne])
            continue
        verts = [u] + [nid + j for j in range(t)] + [v]
        nid += t
        first = len(edges)
        for a, b in zip(verts, verts[1:]):
            edges.append((a, b))
            signs.append(1)
        signs[first] = g.sign(e)
        half[(e, 0)] = (first, 0)
        half[(e, 1)] = (len(edges) - 1, 1)
        chains.append(list(range(first, len(edges))))
        for j in range(1, t + 1):
            chain_rot[verts[j]] = [(first + j - 1, 1), (first + j, 0)]
    rot = [[half[d] for d in g.rotation(v)] for v in range(g.n)]
    rot += [chain_rot[w] for w in range(g.n, nid)]
    return Graph(nid, edges, rot, signs), chains


def _insert_chord(
    g: Graph, ve: int, slot_e: int, vf: int, slot_f: int, sign: int
) -> Graph:
    """A new edge ve-vf spliced into the rotations at the given slots."""
    edges = g.edge_list + [(ve, vf)]
    signs = g.sign_list + [sign]
    ne = len(edges) - 1
    rot = [list(g.rotation(v)) for v in range(g.n)]
    rot[ve].insert(slot_e, (ne, 0))
    rot[vf].insert(slot_f, (ne, 1))
    return Graph(g.n, edges, rot, signs)


def _ring_boundary(g: Graph, ring_edges: set[int]) -> tuple[int, ...]:
    """Degree-2 vertices in walk order along the unique face drawn
    entirely on the given edges. Raises when no such face is unique."""
    hits = [
        walk for walk in g.face_walks() if all(d[0] in ring_edges for d in walk)
    ]
    if len(hits) != 1:
        raise ValueError("expected exactly one face on the ring edges")
    return tuple(
        v for v in (g.dart_vertex(d) for d in hits[0]) if g.degree(v) == 2
    )


# -- pattern bookkeeping -------------------------------------------------------


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    if parts == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for rest in _compositions(total - head, parts - 1):
            yield (head,) + rest


def _dihedral_canon(x: Sequence[int]) -> tuple[int, ...]:
    """Least rotation of x or of its reversal."""
    n = len(x)
    turns = [tuple(x[(i + r) % n] for i in range(n)) for r in range(n)]
    xr = x[::-1]
    turns += [tuple(xr[(i + r) % n] for i in range(n)) for r in range(n)]
    return min(turns)


def _opposites_covered(y: int, x: Sequence[int]) -> bool:
    """Every cycle edge or the edge opposite it carries a new vertex."""
    return all(x[i] + x[i + y] >= 1 for i in range(y))


def _arcs_covered(y: int, x: Sequence[int]) -> bool:
    """Every run of s consecutive cycle edges, 2 <= s < y, carries at
    least s - 1 new vertices."""
    n = 2 * y
    return all(
        sum(x[(i + j) % n] for j in range(s)) >= s - 1
        for s in range(2, y)
        for i in range(n)
    )


def _star_ok(x: Sequence[int]) -> bool:
    """At most one bare position, every three consecutive positions
    carry at least 3 vertices, and every antipodal window of four
    positions (i, i+1, i+5, i+6) carries at least 4."""
    n = len(x)
    if sum(1 for v in x if v == 0) > 1:
        return False
    if any(x[i] + x[(i + 1) % n] + x[(i + 2) % n] < 3 for i in range(n)):
        return False
    return all(
        x[i] + x[(i + 1) % n] + x[(i + 5) % n] + x[(i + 6) % n] >= 4
        for i in range(n)
    )


def _automorphisms(g: Graph) -> list[tuple[int, ...]]:
    """All vertex permutations preserving adjacency (simple graphs of
    the sizes used here; plain backtracking is plenty)."""
    n = g.n
    adj = [set(g.neighbors(v)) for v in range(n)]
    degs = g.degrees()
    out: list[tuple[int, ...]] = []
    perm = [-1] * n
    used = [False] * n

    def rec(v: int) -> None:
        if v == n:
            out.append(tuple(perm))
            return
        for w in range(n):
            if used[w] or degs[w] != degs[v]:
                continue
            if all((u in adj[v]) == (perm[u] in adj[w]) for u in range(v)):
                perm[v] = w
                used[w] = True
                rec(v + 1)
                used[w] = False
        perm[v] = -1

    rec(0)
    return out


def _edge_perms(g: Graph, auts: Iterable[tuple[int, ...]]) -> list[tuple[int, ...]]:
    """Edge permutations induced by the given vertex permutations."""
    eid: dict[tuple[int, int], int] = {}
    for e in range(g.m):
        u, v = g.endpoints(e)
        eid[(u, v)] = e
        eid[(v, u)] = e
    return sorted(
        {tuple(eid[(p[u], p[v])] for u, v in g.edge_list) for p in auts}
    )


# -- cycle-subdivision families ---------------------------------------------------


def _cycle_edge_ids(base: Graph, y: int) -> list[int]:
    """Edge ids of the 2y-cycle in position order."""
    n = 2 * y
    out = []
    for i in range(n):
        pair = {i, (i + 1) % n}
        out.append(
            next(e for e in range(base.m) if set(base.endpoints(e)) == pair)
        )
    return out


def _cycle_member(y: int, family: str, patterns: tuple[tuple[int, ...], ...]) -> ProjectiveIsland:
    base = generate_v2y(y)
    cyc = _cycle_edge_ids(base, y)
    x = patterns[0]
    counts = {cyc[i]: x[i] for i in range(2 * y) if x[i]}
    g, chains = subdivide_embedded(base, counts)
    ring = {ne for e in cyc for ne in chains[e]}
    boundary = _ring_boundary(g, ring)
    member = ProjectiveIsland(g, boundary, family, patterns)
    if member.is_island:
        validate_island(member.island())
    return member


def _cycle_family(
    y: int, k: int, family: str, keep: Callable[[tuple[int, ...]], bool]
) -> list[ProjectiveIsland]:
    if y < 3:
        raise ValueError("crossed cycle needs y >= 3")
    if k < 0:
        raise ValueError("cannot plant a negative number of vertices")
    base = generate_v2y(y)
    cyc = _cycle_edge_ids(base, y)
    eperms = _edge_perms(base, _automorphisms(base))
    dihedral = set()
    for x in _compositions(k, 2 * y):
        if keep(x):
            dihedral.add(_dihedral_canon(x))
    # Suppressing the degree-2 vertices of a member recovers the crossed
    # cycle, so any isomorphism between two members acts on it as a base
    # automorphism: orbits of the per-edge count vector under the induced
    # edge permutations are exactly the isomorphism classes.
    classes: dict[tuple[int, ...], list[tuple[int, ...]]] = defaultdict(list)
    for x in sorted(dihedral):
        vec = [0] * base.m
        for i in range(2 * y):
            vec[cyc[i]] = x[i]
        key = min(tuple(vec[p[e]] for e in range(base.m)) for p in eperms)
        classes[key].append(x)
    return [
        _cycle_member(y, family, tuple(pats))
        for _, pats in sorted(classes.items())
    ]


def generate_gamma(y: int, k: int) -> list[ProjectiveIsland]:
    """All islands made by planting k subdivision vertices on the cycle
    edges of the crossed cycle, one per isomorphism class.

    Patterns are reduced under the dihedral symmetry of the cycle and
    then merged whenever a base automorphism identifies them; each
    member records all dihedral patterns that map onto it. k = 0 yields
    the bare crossed cycle, which has no ring and is flagged non-island.
    """
    return _cycle_family(y, k, "gamma", lambda x: True)


def generate_pi(y: int, k: int) -> list[ProjectiveIsland]:
    """The gamma members whose patterns cover every opposite edge pair
    and carry at least s - 1 new vertices on every run of s consecutive
    cycle edges for each s below y."""
    return _cycle_family(
        y,
        k,
        "pi",
        lambda x: _opposites_covered(y, x) and _arcs_covered(y, x),
    )


def generate_pi513_star(y: int = 5, k: int = 13) -> list[ProjectiveIsland]:
    """The ring-13 pi members whose patterns additionally have at most
    one bare position, at least 3 vertices on every three consecutive
    positions, and at least 4 on every antipodal four-window."""
    return [
        m
        for m in generate_pi(y, k)
        if all(_star_ok(x) for x in m.patterns)
    ]


# -- Petersen-remnant family -----------------------------------------------------


def generate_delta6() -> list[ProjectiveIsland]:
    """Islands made by planting four subdivision vertices on the octagon
    face of the embedded Petersen graph minus one edge.

    The removed edge leaves two degree-2 vertices on the octagon, so
    every member has ring size six. Patterns over the eight octagon
    positions are first reduced under the octagon's stabilizer in the
    automorphism group of the remnant, then merged by isomorphism.
    """
    base, oct_edges = _petersen_remnant()
    auts = _automorphisms(base)
    oct_pairs = [tuple(sorted(base.endpoints(e))) for e in oct_edges]
    pos_of = {p: i for i, p in enumerate(oct_pairs)}
    induced = set()
    for p in auts:
        mapped = [tuple(sorted((p[a], p[b]))) for a, b in oct_pairs]
        if set(mapped) == set(oct_pairs):
            induced.add(tuple(pos_of[q] for q in mapped))
    stab_classes = sorted(
        {
            min(tuple(x[pi[i]] for i in range(8)) for pi in induced)
            for x in _compositions(4, 8)
        }
    )
    merged: dict[tuple, list[tuple[int, ...]]] = {}
    graphs: dict[tuple, tuple[Graph, tuple[int, ...]]] = {}
    for x in stab_classes:
        counts = {oct_edges[i]: x[i] for i in range(8) if x[i]}
        g, chains = subdivide_embedded(base, counts)
        ring = {ne for e in oct_edges for ne in chains[e]}
        boundary = _ring_boundary(g, ring)
        key = canonical_key(g)
        if key not in merged:
            merged[key] = []
            graphs[key] = (g, boundary)
        merged[key].append(x)
    members = []
    for key in sorted(merged):
        g, boundary = graphs[key]
        member = ProjectiveIsland(g, boundary, "delta6", tuple(merged[key]))
        validate_island(member.island())
        members.append(member)
    return members


# -- chord-extended ring-6 family ---------------------------------------------------


def generate_pi_hat_3_6() -> list[ProjectiveIsland]:
    """Ring-6 pi members with a chord planted across one inner face.

    For every member of generate_pi(3, 6) and every pair of non-adjacent
    edges sharing an inner face, both edges are subdivided once and the
    two new vertices joined. The new edge is routed by the first slot
    and sign choice that keeps the embedding projective and leaves one
    face covering the whole ring; a routing always exists. Members are
    merged by isomorphism.
    """
    merged: dict[tuple, list[tuple[int, ...]]] = {}
    graphs: dict[tuple, tuple[Graph, tuple[int, ...]]] = {}
    for parent in generate_pi(3, 6):
        h = parent.graph
        ring_ids = _parent_ring_ids(parent)
        inner = [
            sorted({d[0] for d in walk})
            for walk in h.face_walks()
            if not all(d[0] in ring_ids for d in walk)
        ]
        for face_edges in inner:
            for e, f in itertools.combinations(face_edges, 2):
                if set(h.endpoints(e)) & set(h.endpoints(f)):
                    continue
                sub, chains = subdivide_embedded(h, {e: 1, f: 1})
                ve, vf = sub.n - 2, sub.n - 1
                new_ring = {ne for r in ring_ids for ne in chains[r]}
                built = _route_chord(sub, ve, vf, new_ring)
                if built is None:
                    raise ValueError("no projective routing for the chord")
                g, boundary = built
                key = canonical_key(g)
                if key not in merged:
                    merged[key] = []
                    graphs[key] = (g, boundary)
                merged[key].append(parent.patterns[0] + (e, f))
    members = []
    for key in sorted(merged):
        g, boundary = graphs[key]
        member = ProjectiveIsland(g, boundary, "pi-hat-3-6", tuple(merged[key]))
        validate_island(member.island())
        members.append(member)
    return members


def _parent_ring_ids(parent: ProjectiveIsland) -> set[int]:
    """Edge ids of the parent's ring face."""
    g = parent.graph
    two = set(parent.boundary)
    hits = [
        {d[0] for d in walk}
        for walk in g.face_walks()
        if two <= {g.dart_vertex(d) for d in walk}
    ]
    if len(hits) != 1:
        raise ValueError("expected exactly one face holding the whole ring")
    return hits[0]


def _route_chord(
    sub: Graph, ve: int, vf: int, ring_edges: set[int]
) -> Optional[tuple[Graph, tuple[int, ...]]]:
    """First chord routing that stays projective and keeps a face on the
    ring edges."""
    for slot_e, slot_f, sign in itertools.product((0, 1), (0, 1), (1, -1)):
        cand = _insert_chord(sub, ve, slot_e, vf, slot_f, sign)
        if cand.euler_characteristic() != 1:
            continue
        try:
            boundary = _ring_boundary(cand, ring_edges)
        except ValueError:
            continue
        return cand, boundary
    return None


# -- batch reducibility ------------------------------------------------------------


@dataclass(frozen=True)
class FamilyRow:
    member: int
    vertices: int
    ring: int
    verdict: str
    contraction_size: Optional[int]


@dataclass(frozen=True)
class FamilyReport:
    rows: tuple[FamilyRow, ...]
    d_count: int
    c_count: int
    unresolved: int
    c_size_counts: tuple[tuple[int, int], ...]


def _member_verdict(
    args: tuple[ProjectiveIsland, str, int, Optional[str]]
) -> tuple[str, Optional[int]]:
    m, kind, max_contraction, cache_dir = args
    verdict = check_reducibility(m.island(), kind, max_contraction, cache_dir)
    size = len(verdict.contraction) if verdict.kind == "C" else None
    return verdict.kind, size


def family_report(
    members: Iterable[ProjectiveIsland],
    kind: str = "planar",
    max_contraction: int = 4,
    cache_dir: Optional[str] = None,
    jobs: int = 1,
) -> FamilyReport:
    """Reducibility verdicts for every member, tabulated.

    Members are ordered by a content key before checking, so the report
    does not depend on input order. Rows carry member index, vertex
    count, ring size, verdict and contraction size; the aggregates count
    D members, C members (split by contraction size) and members the
    search left unresolved. jobs > 1 checks members in that many worker
    processes.
    """
    ordered = sorted(
        members, key=lambda m: (m.family, m.graph.n, m.graph.m, m.patterns)
    )
    tasks = [(m, kind, max_contraction, cache_dir) for m in ordered]
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as pool:
            verdicts = list(pool.map(_member_verdict, tasks))
    else:
        verdicts = [_member_verdict(t) for t in tasks]
    rows = []
    d_count = c_count = unresolved = 0
    sizes: Counter[int] = Counter()
    for i, (m, (kind_out, size)) in enumerate(zip(ordered, verdicts)):
        if kind_out == "D":
            d_count += 1
        elif kind_out == "C":
            c_count += 1
            sizes[size] += 1
        else:
            unresolved += 1
        rows.append(FamilyRow(i, m.graph.n, m.ring_size, kind_out, size))
    return FamilyReport(
        tuple(rows), d_count, c_count, unresolved, tuple(sorted(sizes.items()))
    )
