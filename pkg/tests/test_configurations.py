"""Configuration parsing, free completions, islands, and appearance search."""

import itertools

import pytest
from support import fixture_text

from snarklab.configurations import (
    Configuration,
    ConfigurationError,
    Island,
    appears_in,
    free_completion,
    island_of,
    parse_configuration,
    validate_island,
)
from snarklab.graphs import (
    Graph,
    antipodal_quotient,
    graph_from_edges,
    icosahedron,
    petersen,
)

EDGE_PAIR = """conf 2 6
0 5 1 1
1 5 1 0
"""


def load(name):
    return parse_configuration(fixture_text(name))


def projective_k6():
    g, anti = icosahedron(with_antipode=True)
    return antipodal_quotient(g, anti)


# -- parsing and the defining clauses ---------------------------------------


def test_parse_single_vertex():
    k = load("single5.conf")
    assert k.n == 1
    assert k.ring_size == 4  # 5 - 0 - 1
    assert k.boundary_vertices() == [0]
    assert k.interior_vertices() == []
    assert not k.has_cut_vertex


def test_parse_triangle():
    k = load("triangle555.conf")
    assert k.ring_size == 6  # three vertices, 5 - 2 - 1 each
    assert k.boundary_vertices() == [0, 1, 2]


def test_parse_conf1():
    k = load("conf1.conf")
    assert k.n == 4
    assert k.ring_size == 6
    assert [k.graph.degree(v) for v in range(4)] == [3, 3, 2, 2]
    assert len(k.contracts) == 2
    assert all(len(cset) == 6 for cset in k.contracts)


def test_parse_wheel():
    k = load("wheel5.conf")
    assert k.ring_size == 5
    assert k.interior_vertices() == [0]
    assert k.boundary_vertices() == [1, 2, 3, 4, 5]


def test_parse_bowtie_cut_vertex():
    k = load("bowtie.conf")
    assert k.ring_size == 8
    assert k.cut_vertices() == {0}
    assert k.has_cut_vertex


def test_parse_edge_pair():
    k = parse_configuration(EDGE_PAIR)
    assert k.ring_size == 6  # (5 - 1 - 1) twice


def test_parse_rejects_low_gamma():
    with pytest.raises(ConfigurationError, match="degree clause: vertex 0 has gamma 4"):
        parse_configuration("conf 1 3\n0 4 0\n")


def test_parse_rejects_interior_gamma_mismatch():
    bad = fixture_text("wheel5.conf").replace("0 5 5", "0 6 5")
    with pytest.raises(ConfigurationError, match="degree clause: interior vertex 0"):
        parse_configuration(bad)


def test_parse_rejects_boundary_gamma_at_degree():
    # a fan of five triangles: its center lies on the boundary with degree 6
    fan = """conf 7 7
0 6 6 6 5 4 3 2 1
1 5 2 0 2
2 5 3 1 0 3
3 5 3 2 0 4
4 5 3 3 0 5
5 5 3 4 0 6
6 5 2 5 0
"""
    with pytest.raises(ConfigurationError, match="degree clause: boundary vertex 0"):
        parse_configuration(fan)


def test_parse_rejects_unmarked_cut_vertex():
    bad = fixture_text("bowtie.conf").replace("0 6 4", "0 7 4")
    with pytest.raises(ConfigurationError, match="separation clause: vertex 0"):
        parse_configuration(bad)


def test_parse_rejects_header_mismatch():
    bad = fixture_text("triangle555.conf").replace("conf 3 6", "conf 3 7")
    with pytest.raises(ConfigurationError, match="header declares ring-size 7, graph yields 6"):
        parse_configuration(bad)


def test_parse_rejects_non_triangulation():
    square = """conf 4 8
0 5 2 1 3
1 5 2 2 0
2 5 2 3 1
3 5 2 0 2
"""
    with pytest.raises(ConfigurationError, match="not triangles"):
        parse_configuration(square)


def test_parse_reports_every_violation():
    bad = fixture_text("wheel5.conf").replace("0 5 5", "0 6 5").replace("1 5 3", "1 4 3")
    with pytest.raises(ConfigurationError) as err:
        parse_configuration(bad)
    assert "interior vertex 0" in str(err.value)
    assert "vertex 1 has gamma 4" in str(err.value)


# -- free completions --------------------------------------------------------


def test_completion_single_vertex_unreachable():
    with pytest.raises(ConfigurationError, match="unreachable"):
        free_completion(load("single5.conf"))


def test_completion_conf1():
    k = load("conf1.conf")
    fc = free_completion(k)
    s = fc.completion
    assert s.n == 10
    assert fc.ring == (4, 5, 6, 7, 8, 9)
    assert [s.degree(v) for v in range(4)] == [5, 5, 5, 5]
    assert s.euler_characteristic() == 2
    # the first four vertices induce exactly the configuration
    kept = {frozenset(e) for e in s.edge_list if max(e) < 4}
    assert kept == {frozenset(e) for e in k.graph.edge_list}
    walks = s.face_walks()
    assert sorted(len(w) for w in walks) == [3] * 12 + [6]


def test_completion_conf1_contract_pairs_are_edges():
    k = load("conf1.conf")
    s = free_completion(k).completion
    for cset in k.contracts:
        for u, v in cset:
            assert len(s.edges_between(u, v)) == 1


def test_completion_triangle():
    s = free_completion(load("triangle555.conf")).completion
    assert s.n == 9
    assert [s.degree(v) for v in range(3)] == [5, 5, 5]


def test_completion_edge_pair():
    s = free_completion(parse_configuration(EDGE_PAIR)).completion
    assert s.n == 8
    assert [s.degree(v) for v in range(2)] == [5, 5]


def test_completion_wheel():
    s = free_completion(load("wheel5.conf")).completion
    assert s.n == 11
    assert [s.degree(v) for v in range(6)] == [5] * 6


def test_completion_bowtie_cut_vertex():
    s = free_completion(load("bowtie.conf")).completion
    assert s.n == 13
    assert s.degree(0) == 6
    assert s.euler_characteristic() == 2


def test_completion_ring_length_matches_ring_size():
    configs = [load(n) for n in ("conf1.conf", "triangle555.conf", "wheel5.conf", "bowtie.conf")]
    configs.append(parse_configuration(EDGE_PAIR))
    for k in configs:
        fc = free_completion(k)
        assert len(fc.ring) == k.ring_size
        # ring vertices close a cycle bounding the unbounded face
        r = len(fc.ring)
        for j, v in enumerate(fc.ring):
            nxt = fc.ring[(j + 1) % r]
            assert len(fc.completion.edges_between(v, nxt)) == 1


def test_completion_is_deterministic():
    a = free_completion(load("conf1.conf"))
    b = free_completion(load("conf1.conf"))
    assert a.completion.edge_list == b.completion.edge_list
    assert a.ring == b.ring


# -- islands -----------------------------------------------------------------


def test_island_conf1():
    k = load("conf1.conf")
    isl = island_of(k)
    g = isl.graph
    assert g.n == 12  # 2 inner faces + 6 fans + 4 corners
    assert g.m == 15  # 21 completion edges minus 6 ring edges
    assert len(isl.boundary) == 6
    assert sorted(g.degree(v) for v in range(g.n)) == [2] * 6 + [3] * 6
    assert g.euler_characteristic() == 2


def test_island_triangle():
    isl = island_of(load("triangle555.conf"))
    assert isl.graph.n == 10  # 1 inner face + 6 fans + 3 corners
    assert len(isl.boundary) == 6


def test_island_wheel():
    isl = island_of(load("wheel5.conf"))
    assert isl.graph.n == 15  # 5 inner faces + 5 fans + 5 corners
    assert len(isl.boundary) == 5


def test_island_degree2_count_equals_ring_size():
    for name in ("conf1.conf", "triangle555.conf", "wheel5.conf", "bowtie.conf"):
        k = load(name)
        isl = island_of(k)
        twos = [v for v in range(isl.graph.n) if isl.graph.degree(v) == 2]
        assert len(twos) == k.ring_size
        assert sorted(isl.boundary) == twos


def test_island_provenance():
    k = load("conf1.conf")
    fc = free_completion(k)
    isl = island_of(fc)
    ring_edges = {fc.completion.edges_between(fc.ring[j], fc.ring[(j + 1) % 6])[0] for j in range(6)}
    # island edges cross exactly the non-ring completion edges, in id order
    assert sorted(isl.edge_origin) == sorted(set(range(fc.completion.m)) - ring_edges)
    # every boundary island vertex stands on a face with two ring corners
    for v in isl.boundary:
        assert len(set(isl.face_of[v]) & set(fc.ring)) == 2
    # every island vertex stands on a triangle of the completion
    for tri_face in isl.face_of:
        assert len(tri_face) == 3


def test_validate_island_rejects_paths():
    path = Graph(3, [(0, 1), (1, 2)], [[(0, 0)], [(0, 1), (1, 0)], [(1, 1)]], [1, 1])
    with pytest.raises(ConfigurationError):
        validate_island(Island(path, (0, 2)))


# -- appearance search -------------------------------------------------------


def test_appears_single_in_icosahedron():
    maps = appears_in(load("single5.conf"), icosahedron())
    assert len(maps) == 12  # one placement per degree-5 vertex


def test_appears_conf1_in_projective_k6():
    # no induced diamond exists in a complete graph
    assert appears_in(load("conf1.conf"), projective_k6()) == []


def test_appears_conf1_in_icosahedron():
    # each of the 30 edges spans two triangles; 2 diagonal orientations
    # times 2 tip labelings give 120 placements
    maps = appears_in(load("conf1.conf"), icosahedron())
    assert len(maps) == 120


def test_appears_triangle_in_icosahedron():
    # 20 faces, 6 labelings each
    maps = appears_in(load("triangle555.conf"), icosahedron())
    assert len(maps) == 120


def test_appears_triangle_in_projective_k6():
    # 10 faces, 6 labelings each; non-face triangles fail the face clause
    maps = appears_in(load("triangle555.conf"), projective_k6())
    assert len(maps) == 60


def test_appears_wheel_in_icosahedron():
    # hub anywhere (12), rim glued to the neighbor cycle 10 dihedral ways
    maps = appears_in(load("wheel5.conf"), icosahedron())
    assert len(maps) == 120


def test_appears_gamma_mismatch_empty():
    k6 = parse_configuration("conf 1 5\n0 6 0\n")
    assert appears_in(k6, icosahedron()) == []


def test_appears_cut_vertex_excluded():
    k = load("bowtie.conf")
    assert k.has_cut_vertex
    assert appears_in(k, icosahedron()) == []


def test_appears_requires_triangulation():
    with pytest.raises(ValueError, match="triangulation"):
        appears_in(load("single5.conf"), petersen())


def test_appears_requires_embedding():
    bare = graph_from_edges(3, [(0, 1), (1, 2), (0, 2)])
    with pytest.raises(ValueError, match="embedding"):
        appears_in(load("single5.conf"), bare)


def test_appears_results_are_induced_and_exact():
    # re-check the clauses independently of the search
    hosts = {"ico": icosahedron(), "k6": projective_k6()}
    pairs = [
        ("conf1.conf", "ico"),
        ("wheel5.conf", "ico"),
        ("triangle555.conf", "k6"),
    ]
    for name, host_name in pairs:
        k, host = load(name), hosts[host_name]
        kedges = {frozenset(e) for e in k.graph.edge_list}
        tedges = {frozenset(e) for e in host.edge_list}
        tfaces = {frozenset(host.dart_vertex(d) for d in w) for w in host.face_walks()}
        maps = appears_in(k, host)
        assert maps
        for mp in maps:
            assert len(set(mp)) == k.n
            for a, b in itertools.combinations(range(k.n), 2):
                assert (frozenset((a, b)) in kedges) == (frozenset((mp[a], mp[b])) in tedges)
            for v in range(k.n):
                assert host.degree(mp[v]) == k.gamma[v]
            walks = k.graph.face_walks()
            for w in walks:
                if len(w) == 3:
                    img = frozenset(mp[k.graph.dart_vertex(d)] for d in w)
                    assert img in tfaces


def test_appears_is_deterministic():
    k = load("conf1.conf")
    first = appears_in(k, icosahedron())
    second = appears_in(k, icosahedron())
    assert first == second == sorted(first)
