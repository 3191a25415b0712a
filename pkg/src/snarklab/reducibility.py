"""D- and C-reducibility of islands under ring matching semantics.

An island meets the rest of a cubic host through half-edge stubs at its
degree-2 vertices, one per ring position. Any 3-edge-coloring of a host
restricts to a parity coloring of the stubs, and Kempe chains running
outside the island act on those colorings through signed matchings.

Level 0 of the decomposition holds the stub colorings that extend to a
coloring of the island itself. A coloring joins a later level when, for
some color, every matching of its remaining positions has a fit in an
earlier level, so any host coloring could be Kempe-changed down to one the
island absorbs. Colorings no level ever reaches form the residual: an
empty residual makes the island D-reducible, and deleting a small interior
edge set whose surviving colorings all avoid the residual makes it
C-reducible.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Optional, Union

from .configurations import (
    Configuration,
    FreeCompletion,
    Island,
    island_of,
    validate_island,
)
from .graphs import Graph, delete_and_suppress_traced
from .rings import (
    COLORS,
    MEMO_LIMIT,
    Matching,
    RingColoring,
    SignedMatch,
    get_kempe,
    parity_colorings,
)

RING_LIMIT = 2 * MEMO_LIMIT

KINDS = ("planar", "projective")


# -- verdict types -------------------------------------------------------------


@dataclass(frozen=True)
class ColorableSet:
    """Level decomposition of the parity colorings of a ring.

    levels[0] holds the colorings that extend into the island; level i+1
    holds those first forced by matching consistency once levels 0..i are
    known; residual is whatever no level reaches. Levels are pairwise
    disjoint and together with the residual partition the parity colorings.
    """

    ring_size: int
    levels: tuple[frozenset[RingColoring], ...]
    residual: frozenset[RingColoring]

    @property
    def colorable(self) -> frozenset[RingColoring]:
        """Union of all levels."""
        out: set[RingColoring] = set()
        for level in self.levels:
            out |= level
        return frozenset(out)

    @property
    def max_level(self) -> int:
        return len(self.levels) - 1

    def level_of(self, kappa: RingColoring) -> Optional[int]:
        for i, level in enumerate(self.levels):
            if kappa in level:
                return i
        return None


@dataclass(frozen=True)
class ReducibilityVerdict:
    """kind is "D", "C", or "none"; contraction is the island edge set
    whose deletion passed the C test, empty otherwise; levels_used is the
    highest level index the decomposition needed."""

    kind: str
    contraction: tuple[int, ...]
    levels_used: int


# -- island plus stubs ---------------------------------------------------------


def _require_kind(kind: str) -> None:
    if kind not in KINDS:
        raise ValueError(f"kind must be one of {KINDS}")


def _ring_positions(island: Island) -> int:
    g = island.graph
    two = [v for v in range(g.n) if g.degree(v) == 2]
    if sorted(island.boundary) != two:
        raise ValueError("island boundary must list the degree-2 vertices once each")
    if any(g.degree(v) not in (2, 3) for v in range(g.n)):
        raise ValueError("island degrees must be 2 or 3")
    return len(island.boundary)


def _with_stubs(island: Island) -> Graph:
    """The island with one pendant stub edge per ring position.

    Island edges keep their ids; stub j becomes edge m + j, reaching the
    leaf vertex n + j. Every island vertex then has degree 3.
    """
    g = island.graph
    edges = [g.endpoints(e) for e in range(g.m)]
    signs = [g.sign(e) for e in range(g.m)]
    for j, v in enumerate(island.boundary):
        edges.append((v, g.n + j))
        signs.append(1)
    return Graph(g.n + len(island.boundary), edges, None, signs)


def _deletion_counts_ok(g: Graph, deleted: frozenset[int]) -> bool:
    """No vertex may lose exactly two of its edges."""
    count: dict[int, int] = {}
    for e in deleted:
        u, w = g.endpoints(e)
        count[u] = count.get(u, 0) + 1
        count[w] = count.get(w, 0) + (2 if u == w else 1)
    return all(c != 2 for c in count.values())


def _check_deleted(island: Island, deleted: Iterable[int]) -> frozenset[int]:
    xs = frozenset(deleted)
    for e in xs:
        if not (0 <= e < island.graph.m):
            raise ValueError("deleted edge out of range")
    if not _deletion_counts_ok(island.graph, xs):
        raise ValueError("a vertex may not lose exactly two of its edges")
    return xs


def _bridge_free(g: Graph) -> bool:
    """True iff no edge separates its component once all leaves are fused.

    Leaves are the outer ends of stub chains; in a host they all reach the
    same connected outside, so they count as one shared node and a chain
    returning outside is no bridge.
    """
    omega = g.n
    node = [omega if g.degree(v) == 1 else v for v in range(g.n)]
    adj: list[list[tuple[int, int]]] = [[] for _ in range(g.n + 1)]
    for e in range(g.m):
        u, w = g.endpoints(e)
        adj[node[u]].append((node[w], e))
        adj[node[w]].append((node[u], e))
    num = [0] * (g.n + 1)
    low = [0] * (g.n + 1)
    seen = [False] * (g.n + 1)
    counter = itertools.count(1)
    for root in range(g.n + 1):
        if seen[root] or not adj[root]:
            continue
        seen[root] = True
        num[root] = low[root] = next(counter)
        stack: list[tuple[int, int, Iterator[tuple[int, int]]]] = [
            (root, -1, iter(adj[root]))
        ]
        while stack:
            v, in_edge, it = stack[-1]
            advanced = False
            for w, e in it:
                if e == in_edge:
                    in_edge = -1
                    stack[-1] = (v, -1, it)
                    continue
                if seen[w]:
                    low[v] = min(low[v], num[w])
                    continue
                seen[w] = True
                num[w] = low[w] = next(counter)
                stack.append((w, e, iter(adj[w])))
                advanced = True
                break
            if not advanced:
                stack.pop()
                if stack:
                    pv = stack[-1][0]
                    low[pv] = min(low[pv], low[v])
                    if low[v] > num[pv]:
                        return False
    return True


# -- coloring enumeration ------------------------------------------------------


def _component_restrictions(
    g: Graph, pos_edge: dict[int, int]
) -> Optional[list[tuple[tuple[int, ...], list[tuple[int, ...]]]]]:
    """Per component: its ring positions and their realizable colorings.

    Colors edges so that the three at any degree-3 vertex are pairwise
    distinct; leaves constrain nothing. Components without ring positions
    only gate feasibility. None means some component has no coloring.
    """
    # A loop here always sits at a degree-3 vertex and uses the same color
    # on two of its three ends, so its component has no coloring at all.
    if any(g.is_loop(e) for e in range(g.m)):
        return None
    comp = list(range(g.n))

    def find(v: int) -> int:
        while comp[v] != v:
            comp[v] = comp[comp[v]]
            v = comp[v]
        return v

    for e in range(g.m):
        u, w = g.endpoints(e)
        ru, rw = find(u), find(w)
        if ru != rw:
            comp[max(ru, rw)] = min(ru, rw)
    edges_in: dict[int, list[int]] = {}
    for e in range(g.m):
        edges_in.setdefault(find(g.endpoints(e)[0]), []).append(e)

    out: list[tuple[tuple[int, ...], list[tuple[int, ...]]]] = []
    for root in sorted(edges_in):
        edge_ids = edges_in[root]
        order = _propagation_order(g, edge_ids)
        checks = _vertex_checks(g, edge_ids)
        positions = tuple(sorted(j for j, e in pos_edge.items() if find(g.endpoints(e)[0]) == root))
        parts: set[tuple[int, ...]] = set()
        want_all = bool(positions)
        color: dict[int, int] = {}

        def walk(i: int) -> bool:
            if i == len(order):
                parts.add(tuple(color[pos_edge[j]] for j in positions))
                return not want_all
            e = order[i]
            for c in COLORS:
                ok = True
                for other in checks[e]:
                    if color.get(other) == c:
                        ok = False
                        break
                if ok:
                    color[e] = c
                    if walk(i + 1):
                        return True
                    del color[e]
            return False

        walk(0)
        if not parts:
            return None
        if positions:
            out.append((positions, sorted(parts)))
    return out


def _propagation_order(g: Graph, edge_ids: list[int]) -> list[int]:
    """Edges of one component, breadth-first through shared vertices."""
    pending = set(edge_ids)
    by_vertex: dict[int, list[int]] = {}
    for e in edge_ids:
        for v in set(g.endpoints(e)):
            by_vertex.setdefault(v, []).append(e)
    order: list[int] = []
    while pending:
        queue = [min(pending)]
        pending.discard(queue[0])
        while queue:
            e = queue.pop(0)
            order.append(e)
            for v in set(g.endpoints(e)):
                for f in by_vertex[v]:
                    if f in pending:
                        pending.discard(f)
                        queue.append(f)
    return order

def _vertex_checks(g: Graph, edge_ids: list[int]) -> dict[int, list[int]]:
    """Per edge: the edges it must differ from (shared degree-3 endpoint)."""
    checks: dict[int, set[int]] = {e: set() for e in edge_ids}
    inc: dict[int, list[int]] = {}
    for e in edge_ids:
        for v in set(g.endpoints(e)):
            inc.setdefault(v, []).append(e)
    for v, es in inc.items():
        if g.degree(v) != 3:
            continue
        for e in es:
            for f in es:
                if f != e:
                    checks[e].add(f)
    return {e: sorted(fs) for e, fs in checks.items()}


def _cut_down(island: Island, deleted: frozenset[int]) -> tuple[Graph, dict[int, int]]:
    """Delete the edges from the island-with-stubs and suppress.

    Returns the suppressed graph and the map from ring position to the
    chain edge now carrying that stub.
    """
    stubbed = _with_stubs(island)
    out, provenance, _ = delete_and_suppress_traced(stubbed, deleted)
    m = island.graph.m
    pos_edge: dict[int, int] = {}
    for eid, path in provenance.items():
        for orig in path:
            if orig >= m:
                pos_edge[orig - m] = eid
    return out, pos_edge


def _restrictions(island: Island, deleted: frozenset[int]) -> Iterator[RingColoring]:
    """Stub colorings realized by some coloring of the cut-down island."""
    k = len(island.boundary)
    out, pos_edge = _cut_down(island, deleted)
    groups = _component_restrictions(out, pos_edge)
    if groups is None:
        return
    for combo in itertools.product(*(parts for _, parts in groups)):
        arr = [0] * k
        for (positions, _), chosen in zip(groups, combo):
            for j, c in zip(positions, chosen):
                arr[j] = c
        yield tuple(arr)


def ring_extension_oracle(island: Island, deleted: Iterable[int] = ()) -> set[RingColoring]:
    """Every stub coloring some 3-edge-coloring of the island induces.

    The stub at ring position j takes the one color its degree-2 vertex
    does not use. With a deleted edge set the count is taken after
    suppression, so merged chains share a color.
    """
    _ring_positions(island)
    xs = _check_deleted(island, deleted)
    return set(_restrictions(island, xs))


# -- extension test, one coloring at a time ------------------------------------


class _Extender:
    """Decides whether a single stub coloring extends into the island.

    Independent of the oracle above: backtracks over island edges with the
    two edges at ring position j barred from that stub's color.
    """

    def __init__(self, island: Island):
        g = island.graph
        self.graph = g
        self.boundary = island.boundary
        self.adjacent: list[list[int]] = []
        for e in range(g.m):
            u, w = g.endpoints(e)
            near = set(g.incident_edges(u)) | set(g.incident_edges(w))
            near.discard(e)
            self.adjacent.append(sorted(near))
        self.order = _propagation_order(g, list(range(g.m)))

    def extends(self, kappa: RingColoring) -> bool:
        g = self.graph
        banned: list[set[int]] = [set() for _ in range(g.m)]
        for j, v in enumerate(self.boundary):
            for e in g.incident_edges(v):
                banned[e].add(kappa[j])
        color = [-1] * g.m

        def walk(i: int) -> bool:
            if i == len(self.order):
                return True
            e = self.order[i]
            for c in COLORS:
                if c in banned[e]:
                    continue
                if any(color[f] == c for f in self.adjacent[e]):
                    continue
                color[e] = c
                if walk(i + 1):
                    return True
            color[e] = -1
            return False

        return walk(0)


# -- matchings and fits ---------------------------------------------------------


@lru_cache(maxsize=None)
def _fits(k: int, theta: int, signed: tuple[SignedMatch, ...]) -> tuple[RingColoring, ...]:
    """All colorings of k positions that theta-fit the signed matching.

    Unmatched positions take theta; a positive match shares one of the two
    other colors, a negative match splits them. The empty matching fits
    exactly the constant coloring.
    """
    first, second = [c for c in COLORS if c != theta]
    base = [theta] * k
    out: list[RingColoring] = []

    def walk(i: int) -> None:
        if i == len(signed):
            out.append(tuple(base))
            return
        (p, q), mu = signed[i]
        if mu == 1:
            for c in (first, second):
                base[p - 1] = base[q - 1] = c
                walk(i + 1)
        else:
            base[p - 1], base[q - 1] = first, second
            walk(i + 1)
            base[p - 1], base[q - 1] = second, first
            walk(i + 1)
        base[p - 1] = base[q - 1] = theta

    walk(0)
    return tuple(out)


def _signed_lift(
    kappa: RingColoring, positions: tuple[int, ...], struct: Matching
) -> tuple[SignedMatch, ...]:
    """Place an abstract matching on the non-theta positions and read the
    signs off the coloring: equal colors mean +1."""
    out = []
    for a, b in struct:
        p, q = positions[a - 1], positions[b - 1]
        mu = 1 if kappa[p - 1] == kappa[q - 1] else -1
        out.append(((p, q), mu))
    return tuple(out)


def _joins(
    kappa: RingColoring,
    known: set[RingColoring],
    structs_for: dict[int, tuple[Matching, ...]],
    k: int,
) -> bool:
    """True when some color lets every matching reach a known coloring."""
    for theta in COLORS:
        positions = tuple(i + 1 for i, c in enumerate(kappa) if c != theta)
        structs = structs_for[len(positions) // 2]
        good = True
        for struct in structs:
            signed = _signed_lift(kappa, positions, struct)
            if not any(nb in known for nb in _fits(k, theta, signed)):
                good = False
                break
        if good:
            return True
    return False


def _orbit(kappa: RingColoring) -> set[RingColoring]:
    return {
        tuple(perm[c] for c in kappa)
        for perm in itertools.permutations(COLORS)
    }


def maximal_consistent_residual(
    island: Island, kind: str, cache_dir: Optional[str] = None
) -> ColorableSet:
    """Level decomposition of the ring colorings, largest remainder last.

    A coloring outside the levels built so far joins the next level when
    for some color every matching of its other positions has a fit in an
    earlier level. The loop stops at the first empty level; the residual
    is the maximal set where no such color ever exists. Everything is
    invariant under permuting the three colors, so only orbit
    representatives are tested and whole orbits join together.
    """
    _require_kind(kind)
    k = _ring_positions(island)
    if k > RING_LIMIT:
        raise ValueError(
            f"ring size {k} needs matching tables past {MEMO_LIMIT} pairs"
        )
    phi = parity_colorings(k)
    orbits: dict[RingColoring, list[RingColoring]] = {}
    for kappa in phi:
        orbits.setdefault(min(_orbit(kappa)), []).append(kappa)

    structs_for: dict[int, tuple[Matching, ...]] = {0: ((),)}
    for r in range(1, k // 2 + 1):
        structs_for[r] = tuple(sorted(get_kempe(r, kind, cache_dir)))

    extender = _Extender(island)
    level0: set[RingColoring] = set()
    pending: list[RingColoring] = []
    for rep in sorted(orbits):
        if extender.extends(rep):
            level0.update(orbits[rep])
        else:
            pending.append(rep)
    levels = [frozenset(level0)]
    known = set(level0)
    while pending:
        added = [rep for rep in pending if _joins(rep, known, structs_for, k)]
        if not added:
            break
        level: set[RingColoring] = set()
        for rep in added:
            level.update(orbits[rep])
        levels.append(frozenset(level))
        known |= level
        taken = set(added)
        pending = [rep for rep in pending if rep not in taken]
    residual = frozenset(kappa for kappa in phi if kappa not in known)
    return ColorableSet(k, tuple(levels), residual)


# -- reducibility ---------------------------------------------------------------


def admissible_contraction(island: Island, deleted: Iterable[int]) -> bool:
    """Whether the edge set qualifies for the C test: no vertex loses
    exactly two edges, and after suppression no chain bridges its piece."""
    xs = frozenset(deleted)
    for e in xs:
        if not (0 <= e < island.graph.m):
            raise ValueError("deleted edge out of range")
    if not _deletion_counts_ok(island.graph, xs):
        return False
    out, _ = _cut_down(island, xs)
    return _bridge_free(out)


def check_reducibility(
    source: Union[Configuration, FreeCompletion, Island],
    kind: str,
    max_contraction: int,
    cache_dir: Optional[str] = None,
) -> ReducibilityVerdict:
    """D when the residual is empty; else C with the first admissible edge
    set, by size then position, whose surviving colorings avoid the
    residual; else none.

    The search covers island edge subsets up to max_contraction (at most
    8). Deterministic: the same input always returns the same contraction.
    """
    if not 1 <= max_contraction <= 8:
        raise ValueError("max_contraction must be between 1 and 8")
    island = source if isinstance(source, Island) else island_of(source)
    validate_island(island)
    decomposition = maximal_consistent_residual(island, kind, cache_dir)
    used = decomposition.max_level
    if not decomposition.residual:
        return ReducibilityVerdict("D", (), used)
    residual = decomposition.residual
    g = island.graph
    for size in range(1, max_contraction + 1):
        for xs in itertools.combinations(range(g.m), size):
            deleted = frozenset(xs)
            if not _deletion_counts_ok(g, deleted):
                continue
            out, pos_edge = _cut_down(island, deleted)
            if not _bridge_free(out):
                continue
            groups = _component_restrictions(out, pos_edge)
            if groups is None:
                return ReducibilityVerdict("C", tuple(xs), used)
            if not _hits_residual(groups, residual, len(island.boundary)):
                return ReducibilityVerdict("C", tuple(xs), used)
    return ReducibilityVerdict("none", (), used)


def _hits_residual(
    groups: list[tuple[tuple[int, ...], list[tuple[int, ...]]]],
    residual: frozenset[RingColoring],
    k: int,
) -> bool:
    for combo in itertools.product(*(parts for _, parts in groups)):
        arr = [0] * k
        for (positions, _), chosen in zip(groups, combo):
            for j, c in zip(positions, chosen):
                arr[j] = c
        if tuple(arr) in residual:
            return True
    return False


def delete_and_suppress_island(island: Island, deleted: Iterable[int]) -> Island:
    """The island with the edges gone and their endpoints smoothed out.

    Stubs follow their merged chains, so the boundary keeps one attachment
    per ring position in the original order; a suppressed ring vertex
    hands its stub to the far end of its chain. Chains that close on
    themselves vanish. Raises when a vertex would lose exactly two edges
    or when two stubs would fuse into one edge with no island left
    between them. The result carries no embedding or provenance.
    """
    xs = _check_deleted(island, deleted)
    if not xs:
        return island
    out, pos_edge = _cut_down(island, xs)
    keep = [v for v in range(out.n) if out.degree(v) == 3]
    new_id = {v: i for i, v in enumerate(keep)}
    stub_edges = set(pos_edge.values())
    edges = []
    for e in range(out.m):
        if e in stub_edges:
            continue
        u, w = out.endpoints(e)
        edges.append((new_id[u], new_id[w]))
    boundary = []
    for j in range(len(island.boundary)):
        u, w = out.endpoints(pos_edge[j])
        anchors = [v for v in (u, w) if v in new_id]
        if not anchors:
            raise ValueError("deleting these edges fuses two ring stubs")
        boundary.append(new_id[anchors[0]])
    return Island(
        graph=Graph(len(keep), edges, None, None),
        boundary=tuple(boundary),
    )


def contraction_edges(
    completion: FreeCompletion, island: Island, pairs: Iterable[tuple[int, int]]
) -> tuple[int, ...]:
    """Island edge ids crossing the given completion edges.

    pairs name completion vertices, ring vertices included; the island
    must carry provenance from that completion.
    """
    if island.edge_origin is None:
        raise ValueError("island carries no completion provenance")
    origin_index = {orig: i for i, orig in enumerate(island.edge_origin)}
    out = []
    for u, w in pairs:
        es = completion.completion.edges_between(u, w)
        if len(es) != 1:
            raise ValueError(f"completion has no single edge {u}-{w}")
        if es[0] not in origin_index:
            raise ValueError(f"edge {u}-{w} borders the unbounded face")
        out.append(origin_index[es[0]])
    return tuple(sorted(out))
