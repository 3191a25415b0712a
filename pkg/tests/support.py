"""Shared helpers for the test suite."""

import itertools
from importlib import resources

from snarklab.graphs import (
    bridges,
    connected_components,
    graph_from_edges,
    is_connected,
    parse_graph,
)


def fixture_text(name):
    return (resources.files("snarklab") / "data" / name).read_text()


def fixture_graph(name):
    return parse_graph(fixture_text(name))


def random_cubic(rng, n, connected=False, bridgeless=False):
    """Random cubic multigraph on n vertices (n even), loops rejected."""
    while True:
        darts = [v for v in range(n) for _ in range(3)]
        rng.shuffle(darts)
        edges = [(darts[i], darts[i + 1]) for i in range(0, len(darts), 2)]
        if any(u == v for u, v in edges):
            continue
        g = graph_from_edges(n, edges)
        if connected and not is_connected(g):
            continue
        if bridgeless and bridges(g):
            continue
        return g


def expand_to_triangle(g, v):
    """Replace vertex v of a simple cubic graph by a triangle."""
    a, b, c = sorted(g.neighbors(v))
    n1, n2 = g.n, g.n + 1
    edges = []
    for e in range(g.m):
        x, y = g.endpoints(e)
        if v not in (x, y):
            edges.append((x, y))
    edges += [(v, a), (n1, b), (n2, c), (v, n1), (n1, n2), (n2, v)]
    return graph_from_edges(g.n + 2, edges)


def cyclic_cut_oracle(g, k_max):
    """Minimal cyclic cuts of size <= k_max by exhaustive subset search."""
    found = set()
    for k in range(1, k_max + 1):
        for cand in itertools.combinations(range(g.m), k):
            cset = set(cand)
            comps = connected_components(g, omit_edges=cset)
            if len(comps) != 2:
                continue
            where = {}
            for idx, comp in enumerate(comps):
                for v in comp:
                    where[v] = idx
            crossing = all(
                where[g.endpoints(e)[0]] != where[g.endpoints(e)[1]] for e in cand
            )
            if not crossing:
                continue
            inner = [0, 0]
            for e in range(g.m):
                if e not in cset:
                    inner[where[g.endpoints(e)[0]]] += 1
            if all(inner[i] >= len(comps[i]) for i in (0, 1)):
                found.add(frozenset(cand))
    return found


def conf_from_faces(num_vertices, faces, gamma, contracts=()):
    """Validated configuration from an inner face list.

    Rotations come from the faces; the text round-trip runs the full
    clause validation.
    """
    from snarklab.graphs import graph_from_faces

    return _conf_round_trip(graph_from_faces(num_vertices, faces), gamma, contracts)


def conf_from_neighbors(nbrs, gamma, contracts=()):
    """Validated configuration from rotation-ordered neighbor lists."""
    from snarklab.graphs import graph_from_neighbors

    return _conf_round_trip(graph_from_neighbors(nbrs), gamma, contracts)


def _conf_round_trip(g, gamma, contracts):
    from snarklab.configurations import Configuration, parse_configuration

    ring = Configuration(g, tuple(gamma), ()).ring_size
    lines = [f"conf {g.n} {ring}"]
    for v in range(g.n):
        row = [g.other_end(e, v) for e in g.incident_edges(v)]
        lines.append(f"{v} {gamma[v]} {len(row)} " + " ".join(str(w) for w in row))
    for pairs in contracts:
        lines.append("contract: " + " ".join(f"{u}-{w}" for u, w in pairs))
    return parse_configuration("\n".join(lines))


def desk_configurations():
    """Named small configurations spanning ring sizes five to eight."""
    from snarklab.configurations import parse_configuration

    out = []
    for name in ("triangle555", "wheel5", "bowtie", "conf1"):
        out.append((name, parse_configuration(fixture_text(name + ".conf"))))
    for ga, gb in ((5, 5), (5, 6), (5, 7), (6, 6)):
        out.append((f"edge{ga}{gb}", conf_from_neighbors([[1], [0]], (ga, gb))))
    for gammas in ((5, 5, 6), (5, 5, 7), (5, 6, 6)):
        name = "tri" + "".join(str(x) for x in gammas)
        out.append((name, conf_from_faces(3, [[0, 1, 2]], gammas)))
    diamond = [[0, 1, 2], [1, 0, 3]]
    for label, gammas in (
        ("hub6", (6, 5, 5, 5)),
        ("tip6", (5, 5, 6, 5)),
        ("hub7", (7, 5, 5, 5)),
        ("tip7", (5, 5, 7, 5)),
        ("hubs66", (6, 6, 5, 5)),
        ("mixed66", (6, 5, 6, 5)),
        ("tips66", (5, 5, 6, 6)),
    ):
        out.append((f"diamond_{label}", conf_from_faces(4, diamond, gammas)))
    fan3 = [[0, 1, 2], [0, 2, 3], [0, 3, 4]]
    out.append(("fan3_hub6", conf_from_faces(5, fan3, (6, 5, 5, 5, 5))))
    out.append(("fan3_hub7", conf_from_faces(5, fan3, (7, 5, 5, 5, 5))))
    strip4 = [[0, 1, 2], [1, 3, 2], [2, 3, 4], [3, 5, 4]]
    out.append(("strip4", conf_from_faces(6, strip4, (5, 5, 5, 5, 5, 5))))
    out.append(
        (
            "diamond_pendant_hub",
            conf_from_neighbors(
                [[2, 1, 3, 4], [3, 0, 2], [1, 0], [0, 1], [0]], (6, 5, 5, 5, 5)
            ),
        )
    )
    out.append(
        (
            "diamond_pendant_tip",
            conf_from_neighbors(
                [[2, 1, 3], [3, 0, 2], [1, 0, 4], [0, 1], [2]], (5, 5, 5, 5, 5)
            ),
        )
    )
    return out


def desk_islands():
    """Every desk configuration's island plus handmade direct builds."""
    from snarklab.configurations import Island, free_completion, island_of
    from snarklab.graphs import graph_from_neighbors

    out = [
        (name, island_of(free_completion(conf)))
        for name, conf in desk_configurations()
    ]
    out.append(
        (
            "ring3_triangle",
            Island(graph_from_neighbors([[1, 2], [0, 2], [0, 1]]), (0, 1, 2)),
        )
    )
    out.append(
        (
            "ring5_cycle",
            Island(
                graph_from_neighbors([[4, 1], [0, 2], [1, 3], [2, 4], [3, 0]]),
                (0, 1, 2, 3, 4),
            ),
        )
    )
    out.append(
        (
            "ring2_diamond",
            Island(graph_from_neighbors([[1, 2, 3], [0, 2, 3], [0, 1], [0, 1]]), (2, 3)),
        )
    )
    out.append(
        (
            "ring4_cycle",
            Island(
                graph_from_neighbors([[3, 1], [0, 2], [1, 3], [2, 0]]), (0, 1, 2, 3)
            ),
        )
    )
    out.append(
        (
            "ring3_hexhub",
            Island(
                graph_from_neighbors(
                    [[5, 1], [0, 6, 2], [1, 3], [2, 6, 4], [3, 5], [4, 6, 0], [1, 3, 5]]
                ),
                (0, 2, 4),
            ),
        )
    )
    out.append(
        (
            "ring3_nested",
            Island(
                graph_from_neighbors(
                    [
                        [5, 1],
                        [0, 6, 2],
                        [1, 3],
                        [2, 7, 4],
                        [3, 5],
                        [4, 8, 0],
                        [1, 7, 8],
                        [3, 8, 6],
                        [5, 6, 7],
                    ]
                ),
                (0, 2, 4),
            ),
        )
    )
    out.append(
        (
            "ring3_pentachord",
            Island(
                graph_from_neighbors([[4, 1], [0, 4, 2], [1, 3], [2, 4], [3, 0, 1]]),
                (0, 2, 3),
            ),
        )
    )
    out.append(
        (
            "ring4_hexchord",
            Island(
                graph_from_neighbors(
                    [[5, 3, 1], [0, 2], [1, 3], [2, 0, 4], [3, 5], [4, 0]]
                ),
                (1, 2, 4, 5),
            ),
        )
    )
    return out
