"""Graph core: parsing, embeddings, coloring oracle, Kempe chains, suppression."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from snarklab.graphs import (
    Graph,
    antipodal_quotient,
    bridges,
    canonical_key,
    connected_components,
    delete_and_suppress,
    delete_and_suppress_traced,
    edge_colorings,
    format_graph,
    graph_from_edges,
    graph_from_neighbors,
    icosahedron,
    is_isomorphic,
    is_proper_coloring,
    k4,
    k33,
    kempe_chain,
    kempe_swap,
    parse_graph,
    petersen,
    prism,
    three_edge_color,
)

K4_TEXT = """\
# complete graph on four vertices
cubic 4
0: 1 2 3
1: 0 3 2
2: 0 1 3
3: 0 2 1
"""


def random_cubic(rng, n):
    """Random cubic multigraph on n vertices (n even), loops rejected."""
    while True:
        darts = [v for v in range(n) for _ in range(3)]
        rng.shuffle(darts)
        edges = [(darts[i], darts[i + 1]) for i in range(0, len(darts), 2)]
        if any(u == v for u, v in edges):
            continue
        return graph_from_edges(n, edges)


# -- parsing ----------------------------------------------------------------


def test_parse_k4():
    g = parse_graph(K4_TEXT)
    assert g.n == 4
    assert g.m == 6
    assert g.is_cubic()


def test_parse_rejects_degree_4():
    bad = "cubic 2\n0: 1 1 1\n1: 0 0 0\n"
    g = parse_graph(bad)  # triple edge is still cubic
    assert g.m == 3
    worse = "cubic 4\n0: 1 2 3 3\n1: 0 3 2\n2: 0 1 3\n3: 0 2 1\n"
    with pytest.raises(ValueError):
        parse_graph(worse)


def test_parse_rejects_malformed():
    with pytest.raises(ValueError):
        parse_graph("nonsense 4\n")
    with pytest.raises(ValueError):
        parse_graph("cubic 2\n0: 1 1\n1: 0 0\n")
    with pytest.raises(ValueError):
        parse_graph("cubic 2\n0: 1 1 1\n0: 1 1 1\n")


def test_parse_inconsistent_adjacency():
    bad = "cubic 4\n0: 1 1 2\n1: 0 2 3\n2: 0 1 3\n3: 1 2 2\n"
    with pytest.raises(ValueError):
        parse_graph(bad)


def test_format_round_trip():
    g = parse_graph(K4_TEXT)
    again = parse_graph(format_graph(g))
    assert again.edge_list == g.edge_list
    assert again.rotations() == g.rotations()


def test_signs_round_trip():
    text = K4_TEXT + "signs:\n0 1 -1\n2 3 -1\n"
    g = parse_graph(text)
    assert sorted(g.sign(e) for e in range(g.m)).count(-1) == 2
    again = parse_graph(format_graph(g))
    assert again.sign_list == g.sign_list


# -- embeddings -------------------------------------------------------------


def test_k4_planar_embedding():
    g = k4()
    assert g.euler_characteristic() == 2
    walks = g.face_walks()
    assert sorted(len(w) for w in walks) == [3, 3, 3, 3]


def test_k4_self_dual():
    g = k4()
    d = g.dual()
    assert d.n == 4 and d.m == 6
    assert is_isomorphic(d, g)
    assert d.euler_characteristic() == 2


def test_dual_of_dual_is_original():
    g = k4()
    dd = g.dual().dual()
    assert is_isomorphic(dd, g)


def test_icosahedron():
    g = icosahedron()
    assert g.n == 12 and g.m == 30
    assert g.euler_characteristic() == 2
    assert all(len(w) == 3 for w in g.face_walks())


def test_projective_quotient_of_icosahedron():
    g, antipode = icosahedron(with_antipode=True)
    q = antipodal_quotient(g, antipode)
    assert q.n == 6 and q.m == 15
    assert q.euler_characteristic() == 1
    assert not q.embedding_orientable()
    assert all(len(w) == 3 for w in q.face_walks())
    # the quotient is K6: every pair adjacent exactly once
    for u in range(6):
        assert sorted(set(q.neighbors(u))) == [v for v in range(6) if v != u]


def test_petersen_fixture_is_projective_and_dualizes_to_k6():
    g, antipode = icosahedron(with_antipode=True)
    p = antipodal_quotient(g, antipode).dual()
    assert p.n == 10 and p.m == 15
    assert p.is_cubic()
    assert p.euler_characteristic() == 1
    assert is_isomorphic(p, petersen())
    d = p.dual()
    assert d.n == 6
    for u in range(6):
        assert sorted(set(d.neighbors(u))) == [v for v in range(6) if v != u]


def test_crosscap_loop_surface():
    g = Graph(1, [(0, 0)], rotations=[[(0, 0), (0, 1)]], signs=[-1])
    assert g.euler_characteristic() == 1
    g2 = Graph(1, [(0, 0)], rotations=[[(0, 0), (0, 1)]], signs=[1])
    assert g2.euler_characteristic() == 2


# -- coloring oracle --------------------------------------------------------


def test_k4_colorable():
    c = three_edge_color(k4())
    assert c is not None
    assert is_proper_coloring(k4(), c)


def test_prism_colorable():
    g = prism(3)
    c = three_edge_color(g)
    assert c is not None
    assert is_proper_coloring(g, c)


def test_petersen_uncolorable():
    assert three_edge_color(petersen()) is None


def test_k33_colorable():
    assert three_edge_color(k33()) is not None


def test_exhaustive_oracle_matches_backtracker():
    rng = random.Random(7)
    for _ in range(10):
        g = random_cubic(rng, 8)
        found = {tuple(sorted(c.items())) for c in edge_colorings(g)}
        brute = set()
        for code in range(3 ** g.m):
            x = code
            col = {}
            for e in range(g.m):
                col[e] = x % 3
                x //= 3
            if is_proper_coloring(g, col):
                brute.add(tuple(sorted(col.items())))
        assert found == brute


def test_color_classes_are_perfect_matchings():
    rng = random.Random(3)
    for _ in range(20):
        g = random_cubic(rng, 10)
        c = three_edge_color(g)
        if c is None:
            continue
        for color in (0, 1, 2):
            cls = [e for e in range(g.m) if c[e] == color]
            touched = []
            for e in cls:
                touched.extend(g.endpoints(e))
            assert sorted(touched) == list(range(g.n))


def test_non_cubic_rejected():
    g = graph_from_edges(2, [(0, 1)])
    with pytest.raises(ValueError):
        three_edge_color(g)


# -- Kempe chains -----------------------------------------------------------


def test_kempe_chain_k4_is_4cycle():
    g = k4()
    c = three_edge_color(g)
    e0 = next(e for e in range(g.m) if c[e] == 0)
    chain = kempe_chain(g, c, (0, 1), e0)
    assert chain.is_cycle
    assert len(chain.edges) == 4


def test_kempe_chain_endpoint_independent():
    g = prism(3)
    c = three_edge_color(g)
    e0 = next(e for e in range(g.m) if c[e] == 0)
    chain = kempe_chain(g, c, (0, 2), e0)
    for e in chain.edges:
        other = kempe_chain(g, c, (0, 2), e)
        assert set(other.edges) == set(chain.edges)


def test_kempe_chain_rejects_wrong_color():
    g = k4()
    c = three_edge_color(g)
    e2 = next(e for e in range(g.m) if c[e] == 2)
    with pytest.raises(ValueError):
        kempe_chain(g, c, (0, 1), e2)


def test_kempe_swap_involution_random():
    rng = random.Random(11)
    done = 0
    while done < 100:
        g = random_cubic(rng, rng.choice([8, 10, 12, 14, 16]))
        c = three_edge_color(g)
        if c is None:
            continue
        done += 1
        e = rng.randrange(g.m)
        pair = tuple(sorted({c[e], (c[e] + 1) % 3}))
        chain = kempe_chain(g, c, pair, e)
        c2 = kempe_swap(g, c, chain)
        assert is_proper_coloring(g, c2)
        assert c2 != c
        chain2 = kempe_chain(g, c2, pair, e)
        assert set(chain2.edges) == set(chain.edges)
        c3 = kempe_swap(g, c2, chain2)
        assert c3 == c


def test_kempe_chain_path_in_subcubic():
    # a path of three edges colored 0,1,0 is a maximal chain
    g = graph_from_edges(4, [(0, 1), (1, 2), (2, 3)])
    c = {0: 0, 1: 1, 2: 0}
    chain = kempe_chain(g, c, (0, 1), 1)
    assert not chain.is_cycle
    assert set(chain.edges) == {0, 1, 2}


# -- delete and suppress ----------------------------------------------------


def test_suppress_empty_set_is_identity():
    g = petersen()
    h = delete_and_suppress(g, [])
    assert h.n == g.n and h.m == g.m
    assert is_isomorphic(h, g)


def test_suppress_one_petersen_edge():
    g = petersen()
    h = delete_and_suppress(g, [0])
    assert h.n == 8 and h.m == 12
    assert h.is_cubic()


def test_suppress_rejects_two_edges_at_vertex():
    g = petersen()
    inc = g.incident_edges(0)
    with pytest.raises(ValueError):
        delete_and_suppress(g, inc[:2])


def test_suppress_traced_provenance():
    g = petersen()
    h, prov, dropped = delete_and_suppress_traced(g, [0])
    assert dropped == []
    originals = sorted(e for path in prov.values() for e in path)
    assert originals == [e for e in range(1, 15)]
    merged = [path for path in prov.values() if len(path) > 1]
    assert len(merged) == 2  # one merged path per suppressed vertex


def test_suppress_perfect_matching_drops_cycles():
    # deleting a color class leaves an even 2-factor which suppresses away
    g = k4()
    c = three_edge_color(g)
    matching = [e for e in range(g.m) if c[e] == 0]
    h = delete_and_suppress(g, matching)
    assert h.n == 0 and h.m == 0
    _, prov, dropped = delete_and_suppress_traced(g, matching)
    assert prov == {}
    assert len(dropped) >= 1


def test_suppression_preserves_colorability_direction():
    # removing one color class of a colored graph leaves an even 2-factor:
    # the suppressed graph of any single edge removal stays colorable
    rng = random.Random(5)
    done = 0
    while done < 30:
        g = random_cubic(rng, rng.choice([8, 10, 12, 14]))
        c = three_edge_color(g)
        if c is None:
            continue
        done += 1
        e = rng.randrange(g.m)
        h = delete_and_suppress(g, [e])
        if h.n == 0 or h.has_loops():
            continue
        assert three_edge_color(h) is not None


# -- connectivity helpers ---------------------------------------------------


def test_components_and_bridges():
    g = graph_from_edges(6, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5), (5, 3)])
    assert len(connected_components(g)) == 1
    assert bridges(g) == {3}
    assert len(connected_components(g, omit_edges=[3])) == 2


def test_parallel_edges_are_not_bridges():
    g = graph_from_edges(2, [(0, 1), (0, 1)])
    assert bridges(g) == set()


# -- isomorphism ------------------------------------------------------------


def test_relabel_is_isomorphic():
    g = petersen()
    perm = list(range(10))
    random.Random(2).shuffle(perm)
    assert is_isomorphic(g, g.relabeled(perm))


def test_petersen_vs_5_prism():
    assert not is_isomorphic(petersen(), prism(5))


def test_k4_vs_k4_minus_edge():
    g = k4()
    h = graph_from_edges(4, [e for i, e in enumerate(g.edge_list) if i != 0])
    assert not is_isomorphic(g, h)


def test_multigraph_iso_discriminates():
    theta = graph_from_edges(2, [(0, 1), (0, 1), (0, 1)])
    tri = graph_from_edges(3, [(0, 1), (1, 2), (2, 0)])
    assert not is_isomorphic(theta, tri)
    assert canonical_key(theta) != canonical_key(tri)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_random_relabel_canonical_key(seed):
    rng = random.Random(seed)
    g = random_cubic(rng, rng.choice([6, 8, 10]))
    perm = list(range(g.n))
    rng.shuffle(perm)
    assert canonical_key(g) == canonical_key(g.relabeled(perm))
